//! Laurent polynomials in `X = E4`, `Y = E6`, `Z = E2` with rational coefficients.
//!
//! The derivation [`WeightedPoly::derive`] is `D = q d/dq` acting through
//! `D Z = (Z^2 - X)/12`, `D X = (ZX - Y)/3`, `D Y = (ZY - X^2)/2`. It raises the
//! weight (`X` = 4, `Y` = 6, `Z` = 2) by 2.

use std::collections::BTreeMap;
use std::fmt;

use rug::Rational;

use crate::hp::HpComplex;
use crate::series::Coefficient;

/// Exponents of `X^i Y^j Z^k`.
pub type Monomial = (i32, i32, i32);

/// Weights of `X`, `Y`, `Z`.
pub const WEIGHTS: (i32, i32, i32) = (4, 6, 2);

pub fn weight((i, j, k): Monomial) -> i32 {
    WEIGHTS.0 * i + WEIGHTS.1 * j + WEIGHTS.2 * k
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WeightedPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl WeightedPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial((0, 0, 0), c)
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn x() -> Self {
        Self::monomial((1, 0, 0), Rational::from(1))
    }

    pub fn y() -> Self {
        Self::monomial((0, 1, 0), Rational::from(1))
    }

    pub fn z() -> Self {
        Self::monomial((0, 0, 1), Rational::from(1))
    }

    /// Builds a polynomial from `(i, j, k, numerator, denominator)` rows.
    pub fn from_terms(rows: &[(i32, i32, i32, i64, i64)]) -> Self {
        let mut p = Self::zero();
        for &(i, j, k, num, den) in rows {
            p.add_term((i, j, k), Rational::from((num, den)));
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c == 0 {
            return;
        }
        let slot = self.terms.entry(m).or_default();
        *slot += c;
        if *slot == 0 {
            self.terms.remove(&m);
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: Monomial) -> Option<&Rational> {
        self.terms.get(&m)
    }

    /// Terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    /// True when no exponent is negative.
    pub fn is_polynomial(&self) -> bool {
        self.terms
            .keys()
            .all(|&(i, j, k)| i >= 0 && j >= 0 && k >= 0)
    }

    /// The common weight of all terms, or `None` if the weights differ or there
    /// are no terms.
    pub fn homogeneous_weight(&self) -> Option<i32> {
        let mut weights = self.terms.keys().map(|&m| weight(m));
        let first = weights.next()?;
        weights.all(|w| w == first).then_some(first)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (&m, c) in &rhs.terms {
            out.add_term(m, c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&Rational::from(-1))
    }

    pub fn scale(&self, s: &Rational) -> Self {
        let mut out = Self::zero();
        for (&m, c) in &self.terms {
            out.add_term(m, Rational::from(c * s));
        }
        out
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = Self::zero();
        for (&(i, j, k), a) in &self.terms {
            for (&(u, v, w), b) in &rhs.terms {
                out.add_term((i + u, j + v, k + w), Rational::from(a * b));
            }
        }
        out
    }

    /// Applies `D = q d/dq`.
    pub fn derive(&self) -> Self {
        let mut out = Self::zero();
        for (&(i, j, k), c) in &self.terms {
            let fi = Rational::from((i64::from(i), 3));
            let fj = Rational::from((i64::from(j), 2));
            let fk = Rational::from((i64::from(k), 12));
            let diag = Rational::from(&fi + &fj) + &fk;
            out.add_term((i, j, k + 1), diag * c);
            out.add_term((i - 1, j + 1, k), -(fi * c));
            out.add_term((i + 2, j - 1, k), -(fj * c));
            out.add_term((i + 1, j, k - 1), -(fk * c));
        }
        out
    }

    /// Substitutes numerical values for `X`, `Y`, `Z`.
    pub fn evaluate(&self, x: &HpComplex, y: &HpComplex, z: &HpComplex) -> HpComplex {
        let bits = x.prec();
        let pow = |b: &HpComplex, e: i32| -> HpComplex {
            let p = b.powi(e.unsigned_abs());
            if e < 0 {
                p.recip().expect("nonzero base")
            } else {
                p
            }
        };
        let mut acc = HpComplex::new(rug::Float::new(bits), rug::Float::new(bits));
        for (&(i, j, k), c) in &self.terms {
            let t = &(&pow(x, i) * &pow(y, j)) * &pow(z, k);
            acc = &acc + &t.scale_rational(c);
        }
        acc
    }
}

impl Coefficient for WeightedPoly {
    fn zero_like(&self) -> Self {
        Self::zero()
    }
    fn one_like(&self) -> Self {
        Self::constant(Rational::from(1))
    }
    fn ratio_like(&self, num: i64, den: i64) -> Self {
        Self::constant(Rational::from((num, den)))
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&(0, 0, 0)).is_some_and(|c| *c == 1)
    }
    fn plus(&self, rhs: &Self) -> Self {
        self.add(rhs)
    }
    fn minus(&self, rhs: &Self) -> Self {
        self.sub(rhs)
    }
    fn times(&self, rhs: &Self) -> Self {
        self.mul(rhs)
    }
    fn negated(&self) -> Self {
        self.neg()
    }
    /// Only single terms are invertible.
    fn inverse(&self) -> Option<Self> {
        let mut it = self.terms.iter();
        match (it.next(), it.next()) {
            (Some((&(i, j, k), c)), None) => Some(Self::monomial((-i, -j, -k), c.clone().recip())),
            _ => None,
        }
    }
}

impl fmt::Display for WeightedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (&(i, j, k), c)) in self.terms.iter().rev().enumerate() {
            let negative = *c < 0;
            let mag = Rational::from(c.abs_ref());
            match (n, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut factors = Vec::new();
            for (name, e) in [("X", i), ("Y", j), ("Z", k)] {
                match e {
                    0 => {}
                    1 => factors.push(name.to_string()),
                    _ => factors.push(format!("{name}^{e}")),
                }
            }
            if mag != 1 || factors.is_empty() {
                factors.insert(0, mag.to_string());
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eisenstein::{Eisenstein, EisensteinKind};
    use crate::hp::Precision;

    #[test]
    fn derivation_on_generators() {
        let twelfth = |p: WeightedPoly, n, d| p.scale(&Rational::from((n, d)));
        let z = WeightedPoly::z();
        let x = WeightedPoly::x();
        let y = WeightedPoly::y();
        assert_eq!(z.derive(), twelfth(z.mul(&z).sub(&x), 1, 12));
        assert_eq!(x.derive(), twelfth(z.mul(&x).sub(&y), 1, 3));
        assert_eq!(y.derive(), twelfth(z.mul(&y).sub(&x.mul(&x)), 1, 2));
    }

    #[test]
    fn derivation_is_a_derivation_on_laurent_terms() {
        let a = WeightedPoly::from_terms(&[(1, 0, -2, 1, 1), (0, 1, 3, -5, 7)]);
        let b = WeightedPoly::from_terms(&[(2, -1, 1, 3, 2), (0, 0, 4, 1, 1)]);
        let lhs = a.mul(&b).derive();
        let rhs = a.derive().mul(&b).add(&a.mul(&b.derive()));
        assert_eq!(lhs, rhs);
        // weight goes up by 2
        let h = WeightedPoly::from_terms(&[(1, 0, -2, 1, 1), (-1, 1, -1, 2, 1)]);
        assert_eq!(h.homogeneous_weight(), Some(0));
        assert_eq!(h.derive().homogeneous_weight(), Some(2));
    }

    #[test]
    fn evaluation_matches_numeric_derivative() {
        // D(X Z^-2) evaluated at a point equals (1/(2 pi i)) d/dz (E4/E2^2)
        let p = Precision::new(40);
        let eis = Eisenstein::new(p);
        let z0 = HpComplex::from_f64(&p, 0.2, 1.1);
        let ev = |k| eis.eval(k, &z0).unwrap();
        let (x, y, z) = (
            ev(EisensteinKind::E4),
            ev(EisensteinKind::E6),
            ev(EisensteinKind::E2),
        );
        let r0 = WeightedPoly::from_terms(&[(1, 0, -2, 1, 1)]);
        let sym = r0.derive().evaluate(&x, &y, &z);
        let e2d = eis.derivative(EisensteinKind::E2, &z0, 1).unwrap();
        let e4d = eis.derivative(EisensteinKind::E4, &z0, 1).unwrap();
        let zz = &z * &z;
        let num = &(&e4d * &zz) - &(&(&x * &z) * &e2d).scale(&p.float(2));
        let deriv = &num / &(&zz * &zz);
        let two_pi_i = HpComplex::imag(p.pi() * 2u32);
        assert!((&(&deriv / &two_pi_i) - &sym).abs() < p.pow10(-35));
    }

    #[test]
    fn inverse_and_display() {
        let m = WeightedPoly::from_terms(&[(1, 0, -2, 2, 3)]);
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).is_one());
        assert!(
            WeightedPoly::from_terms(&[(1, 0, 0, 1, 1), (0, 0, 2, 1, 1)])
                .inverse()
                .is_none()
        );
        let a2 = WeightedPoly::from_terms(&[(1, 0, 5, 1, 1), (2, 0, 3, 1, 1), (0, 1, 4, -2, 1)]);
        assert_eq!(a2.to_string(), "X^2*Z^3 + X*Z^5 - 2*Y*Z^4");
        let frac = WeightedPoly::from_terms(&[(6, 0, 10, 66, 5), (0, 0, 0, -1, 1)]);
        assert_eq!(frac.to_string(), "66/5*X^6*Z^10 - 1");
        assert_eq!(WeightedPoly::zero().to_string(), "0");
    }
}
