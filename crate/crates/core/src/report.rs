//! Pass/fail records for sampled inequality checks.

use rug::Float;
use serde::{Serialize, Serializer};

use crate::hp::decimal;

/// Significant digits used when a margin is written out.
pub const MARGIN_DIGITS: u32 = 20;

/// Outcome of checking one inequality on a set of samples.
///
/// `worst_margin` is the minimum over samples of (bound - quantity), oriented
/// so that a positive margin means the inequality holds.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub name: String,
    pub samples: usize,
    #[serde(serialize_with = "serialize_float")]
    pub worst_margin: Float,
    pub pass: bool,
}

impl BoundReport {
    /// Reduces a non-empty collection of signed margins.
    pub fn from_margins<I>(name: impl Into<String>, margins: I) -> Self
    where
        I: IntoIterator<Item = Float>,
    {
        let mut samples = 0;
        let mut worst: Option<Float> = None;
        for m in margins {
            samples += 1;
            worst = Some(match worst {
                Some(w) if w <= m => w,
                _ => m,
            });
        }
        let worst_margin = worst.expect("at least one sample");
        let pass = worst_margin.is_sign_positive() && !worst_margin.is_zero();
        BoundReport {
            name: name.into(),
            samples,
            worst_margin,
            pass,
        }
    }

    pub fn single(name: impl Into<String>, margin: Float) -> Self {
        Self::from_margins(name, [margin])
    }

    /// Combines reports for the same inequality over disjoint sample sets.
    pub fn merge(mut self, other: BoundReport) -> Self {
        self.samples += other.samples;
        if other.worst_margin < self.worst_margin {
            self.worst_margin = other.worst_margin;
        }
        self.pass &= other.pass;
        self
    }
}

impl std::fmt::Display for BoundReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} {} (samples {}, worst margin {})",
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.samples,
            decimal(&self.worst_margin, 8)
        )
    }
}

pub(crate) fn serialize_float<S: Serializer>(x: &Float, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&decimal(x, MARGIN_DIGITS))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worst_margin_is_the_minimum() {
        let r = BoundReport::from_margins("x", [3.0, -1.0, 2.0].map(|v| Float::with_val(64, v)));
        assert_eq!(r.samples, 3);
        assert_eq!(r.worst_margin, -1.0);
        assert!(!r.pass);
        let ok = BoundReport::single("y", Float::with_val(64, 0.5));
        assert!(ok.pass);
        assert!(!BoundReport::single("z", Float::new(64)).pass);
        let merged = ok.merge(r);
        assert_eq!(merged.samples, 4);
        assert!(!merged.pass);
    }

    #[test]
    fn serializes_margin_as_string() {
        let r = BoundReport::single("b", Float::with_val(64, 0.25));
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(
            v["worst_margin"].as_str().unwrap(),
            "2.5000000000000000000e-1"
        );
        assert_eq!(v["pass"], true);
    }
}
