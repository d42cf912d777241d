//! q-expansions of `E2`, `E4`, `E6` and their z-derivatives.
//!
//! `E_k(z) = 1 + s_k * sum_{n>=1} sigma_{k-1}(n) q^n` with `q = exp(2 pi i z)` and
//! `s_2 = -24`, `s_4 = 240`, `s_6 = -504`. Sums are truncated where a rigorous
//! tail bound drops below the working accuracy.

use std::sync::RwLock;

use rug::ops::Pow;
use rug::{Float, Integer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hp::{HpComplex, Precision};

/// Evaluation is refused beyond this `|q|`.
pub const QABS_CAP: f64 = 0.9;

/// Hard limit on the number of q-expansion terms.
pub const MAX_TERMS: usize = 50_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EisensteinKind {
    E2,
    E4,
    E6,
}

impl EisensteinKind {
    pub const ALL: [EisensteinKind; 3] =
        [EisensteinKind::E2, EisensteinKind::E4, EisensteinKind::E6];

    pub fn weight(self) -> u32 {
        match self {
            EisensteinKind::E2 => 2,
            EisensteinKind::E4 => 4,
            EisensteinKind::E6 => 6,
        }
    }

    /// Exponent `k - 1` of the divisor sum.
    pub fn divisor_power(self) -> u32 {
        self.weight() - 1
    }

    pub fn scale(self) -> i64 {
        match self {
            EisensteinKind::E2 => -24,
            EisensteinKind::E4 => 240,
            EisensteinKind::E6 => -504,
        }
    }

    fn index(self) -> usize {
        match self {
            EisensteinKind::E2 => 0,
            EisensteinKind::E4 => 1,
            EisensteinKind::E6 => 2,
        }
    }

    /// `(C, p)` with `|coefficient of q^n| <= C n^p`.
    ///
    /// Uses `sigma_1(n) <= n^2` and `sigma_k(n) <= zeta(k) n^k` for `k = 3, 5`.
    fn coefficient_bound(self) -> (f64, i32) {
        match self {
            EisensteinKind::E2 => (24.0, 2),
            EisensteinKind::E4 => (240.0 * 1.202_06, 3),
            EisensteinKind::E6 => (504.0 * 1.036_93, 5),
        }
    }
}

/// Divisor sum `sigma_k(n)`, computed directly.
pub fn sigma(k: u32, n: u64) -> Integer {
    let mut acc = Integer::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            acc += Integer::from(d).pow(k);
            let e = n / d;
            if e != d {
                acc += Integer::from(e).pow(k);
            }
        }
        d += 1;
    }
    acc
}

/// Exact coefficient of `q^n` in the expansion of `kind`; `n = 0` gives 1.
pub fn qcoeff(kind: EisensteinKind, n: u64) -> Integer {
    if n == 0 {
        return Integer::from(1);
    }
    sigma(kind.divisor_power(), n) * kind.scale()
}

/// Coefficients of all three series, grown by sieving on demand.
struct CoefficientTable {
    coeffs: [Vec<Integer>; 3],
}

impl CoefficientTable {
    fn len(&self) -> usize {
        self.coeffs[0].len()
    }

    fn build(n_max: usize) -> Self {
        let coeffs = EisensteinKind::ALL.map(|kind| {
            let k = kind.divisor_power();
            let mut sig = vec![Integer::new(); n_max + 1];
            for d in 1..=n_max {
                let dk = Integer::from(d).pow(k);
                for m in (d..=n_max).step_by(d) {
                    sig[m] += &dk;
                }
            }
            sig.iter_mut().skip(1).for_each(|s| *s *= kind.scale());
            sig[0] = Integer::from(1);
            sig
        });
        CoefficientTable { coeffs }
    }
}

static TABLE: RwLock<CoefficientTable> = RwLock::new(CoefficientTable {
    coeffs: [Vec::new(), Vec::new(), Vec::new()],
});

/// Runs `f` on the coefficient table, extended to cover index `n_max`.
fn with_coefficients<R>(n_max: usize, f: impl FnOnce(&CoefficientTable) -> R) -> R {
    {
        let table = TABLE.read().unwrap_or_else(|e| e.into_inner());
        if table.len() > n_max {
            return f(&table);
        }
    }
    let mut table = TABLE.write().unwrap_or_else(|e| e.into_inner());
    if table.len() <= n_max {
        *table = CoefficientTable::build((n_max + 1).max(2 * table.len()).max(64));
    }
    f(&table)
}

/// `ln` of the bound on `sum_{n>=m} C n^p x^n`, using that consecutive terms
/// shrink at least by `x ((m+1)/m)^p`. `None` when that ratio is not below 1.
fn ln_tail_bound(ln_c: f64, p: i32, ln_x: f64, m: usize) -> Option<f64> {
    let mf = m as f64;
    let ln_ratio = ln_x + f64::from(p) * ((mf + 1.0) / mf).ln();
    if ln_ratio >= 0.0 {
        return None;
    }
    Some(ln_c + f64::from(p) * mf.ln() + mf * ln_x - (-ln_ratio.exp()).ln_1p())
}

fn tail_order_ln(ln_x: f64, ln_eps: f64, kinds: &[EisensteinKind], deriv: u32) -> Result<usize> {
    if ln_x >= 0.0 {
        return Err(Error::Divergent(ln_x.exp()));
    }
    if ln_x == f64::NEG_INFINITY {
        return Ok(0);
    }
    let ln_2pi = (2.0 * std::f64::consts::PI).ln();
    let mut order = 0;
    for kind in kinds {
        let (c, p) = kind.coefficient_bound();
        let ln_c = c.ln() + f64::from(deriv) * ln_2pi;
        let p = p + deriv as i32;
        let n = (0..=MAX_TERMS)
            .find(|&n| matches!(ln_tail_bound(ln_c, p, ln_x, n + 1), Some(b) if b <= ln_eps))
            .ok_or(Error::PrecisionInfeasible {
                qabs: ln_x.exp(),
                cap: QABS_CAP,
            })?;
        order = order.max(n);
    }
    Ok(order)
}

/// Smallest `N` such that truncating after `q^N` changes the `deriv`-th
/// z-derivative of each requested series by at most `eps` when `|q| = qabs`.
pub fn tail_order(qabs: f64, eps: f64, kinds: &[EisensteinKind], deriv: u32) -> Result<usize> {
    if !(0.0..1.0).contains(&qabs) {
        return Err(Error::Divergent(qabs));
    }
    tail_order_ln(qabs.ln(), eps.ln(), kinds, deriv)
}

/// High-precision evaluator for the Eisenstein series.
#[derive(Clone, Copy, Debug)]
pub struct Eisenstein {
    prec: Precision,
}

impl Eisenstein {
    pub fn new(prec: Precision) -> Self {
        Eisenstein { prec }
    }

    pub fn precision(&self) -> Precision {
        self.prec
    }

    /// `q = exp(2 pi i z)` and `ln |q|`, after domain checks.
    fn nome(&self, z: &HpComplex) -> Result<(HpComplex, f64)> {
        if z.im.cmp0() != Some(std::cmp::Ordering::Greater) {
            return Err(Error::Domain(format!(
                "Im z must be positive, got {}",
                z.im.to_f64()
            )));
        }
        let two_pi = self.prec.pi() * 2u32;
        let ln_q = -(Float::with_val(53, &z.im * &two_pi)).to_f64();
        if ln_q > QABS_CAP.ln() {
            return Err(Error::PrecisionInfeasible {
                qabs: ln_q.exp(),
                cap: QABS_CAP,
            });
        }
        let bits = self.prec.bits();
        let arg = HpComplex::new(
            -Float::with_val(bits, &z.im * &two_pi),
            Float::with_val(bits, &z.re * &two_pi),
        );
        Ok((arg.exp(), ln_q))
    }

    fn ln_eps(&self) -> f64 {
        -f64::from(self.prec.working_digits()) * std::f64::consts::LN_10
    }

    /// `d^k/dz^k E(z) / k!` for `k = 0..=max_deriv`: the Taylor coefficients of
    /// `kind` at `z`.
    pub fn taylor(
        &self,
        kind: EisensteinKind,
        z: &HpComplex,
        max_deriv: u32,
    ) -> Result<Vec<HpComplex>> {
        let (q, ln_q) = self.nome(z)?;
        let bits = self.prec.bits();
        let mut n_max = 0;
        for k in 0..=max_deriv {
            // the 1/k! in the output only helps, so bound the raw derivative
            n_max = n_max.max(tail_order_ln(ln_q, self.ln_eps(), &[kind], k)?);
        }
        let mut moments = vec![HpComplex::zero(&self.prec); max_deriv as usize + 1];
        with_coefficients(n_max, |table| {
            let coeffs = &table.coeffs[kind.index()];
            let mut qn = HpComplex::one(&self.prec);
            for (n, a) in coeffs.iter().enumerate().take(n_max + 1).skip(1) {
                qn = &qn * &q;
                let mut term = qn.scale_int(a);
                for m in moments.iter_mut() {
                    *m = &*m + &term;
                    term = term.scale_int(&Integer::from(n));
                }
            }
        });
        // (2 pi i)^k / k!
        let two_pi_i = HpComplex::imag(self.prec.pi() * 2u32);
        let mut factor = HpComplex::one(&self.prec);
        let mut out = Vec::with_capacity(moments.len());
        for (k, m) in moments.into_iter().enumerate() {
            if k > 0 {
                factor = (&factor * &two_pi_i).scale(&(Float::with_val(bits, 1) / k as u32));
            }
            let mut v = &m * &factor;
            if k == 0 {
                v = v.add_real(&Float::with_val(bits, 1));
            }
            out.push(v);
        }
        Ok(out)
    }

    /// `E(z)` to the working accuracy.
    pub fn eval(&self, kind: EisensteinKind, z: &HpComplex) -> Result<HpComplex> {
        Ok(self.taylor(kind, z, 0)?.swap_remove(0))
    }

    /// `dE2/dz` from the termwise differentiated q-series.
    pub fn eval_e2_deriv(&self, z: &HpComplex) -> Result<HpComplex> {
        Ok(self.taylor(EisensteinKind::E2, z, 1)?.swap_remove(1))
    }

    /// `E2(z)` and `E2'(z)` from a single pass over the series.
    pub fn e2_with_deriv(&self, z: &HpComplex) -> Result<(HpComplex, HpComplex)> {
        let mut t = self.taylor(EisensteinKind::E2, z, 1)?;
        let d = t.pop().expect("two coefficients");
        let v = t.pop().expect("two coefficients");
        Ok((v, d))
    }

    /// `k`-th z-derivative of `kind` at `z`.
    pub fn derivative(&self, kind: EisensteinKind, z: &HpComplex, k: u32) -> Result<HpComplex> {
        let coeff = self.taylor(kind, z, k)?.swap_remove(k as usize);
        let mut fact = Integer::from(1);
        for j in 2..=k {
            fact *= j;
        }
        Ok(coeff.scale_int(&fact))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn prec() -> Precision {
        Precision::new(60)
    }

    fn c(p: &Precision, re: f64, im: f64) -> HpComplex {
        HpComplex::from_f64(p, re, im)
    }

    #[test]
    fn qcoeff_examples() {
        assert_eq!(qcoeff(EisensteinKind::E2, 1), -24);
        assert_eq!(qcoeff(EisensteinKind::E2, 2), -72);
        assert_eq!(qcoeff(EisensteinKind::E4, 1), 240);
        assert_eq!(qcoeff(EisensteinKind::E6, 2), -504 * 33);
        assert_eq!(qcoeff(EisensteinKind::E4, 0), 1);
    }

    #[test]
    fn sieve_matches_direct_divisor_sums() {
        with_coefficients(200, |t| {
            for kind in EisensteinKind::ALL {
                for n in 0..=200u64 {
                    assert_eq!(
                        t.coeffs[kind.index()][n as usize],
                        qcoeff(kind, n),
                        "{kind:?} {n}"
                    );
                }
            }
        });
    }

    #[test]
    fn tail_order_at_zero_nome() {
        assert_eq!(tail_order(0.0, 1e-30, &[EisensteinKind::E2], 0).unwrap(), 0);
    }

    #[test]
    fn tail_order_bounds_the_true_tail() {
        let n = tail_order(0.5, 1e-10, &[EisensteinKind::E2], 0).unwrap();
        // brute-force tail of 24 sum sigma(n) 2^-n
        let tail = |from: u64| -> f64 {
            (from..600)
                .map(|m| 24.0 * sigma(1, m).to_f64() * 0.5f64.powi(m as i32))
                .sum()
        };
        assert!(tail(n as u64 + 1) <= 1e-10);
        assert!(tail(n as u64 - 5) > 1e-10, "bound is not absurdly loose");
    }

    #[test]
    fn tail_order_is_monotone_in_eps() {
        let mut last = 0;
        for e in 1..40 {
            let n = tail_order(0.3, 10f64.powi(-e), &EisensteinKind::ALL, 1).unwrap();
            assert!(n >= last);
            last = n;
        }
        assert!(tail_order(1.0, 1e-5, &[EisensteinKind::E2], 0).is_err());
    }

    #[test]
    fn e2_tends_to_one_high_up() {
        let p = prec();
        let e = Eisenstein::new(p);
        let v = e.eval(EisensteinKind::E2, &c(&p, 0.3, 30.0)).unwrap();
        assert!((&v - &HpComplex::one(&p)).abs() < p.tolerance());
        let d = e.eval_e2_deriv(&c(&p, 0.3, 30.0)).unwrap();
        assert!(d.abs() < p.tolerance());
    }

    #[test]
    fn e2_at_i_is_three_over_pi() {
        let p = prec();
        let v = Eisenstein::new(p)
            .eval(EisensteinKind::E2, &HpComplex::i(&p))
            .unwrap();
        let expect = HpComplex::real(p.float(3) / p.pi());
        assert!((&v - &expect).abs() < p.tolerance());
    }

    #[test]
    fn e2_vanishes_at_the_imaginary_axis_zero() {
        let p = prec();
        let tau0 = HpComplex::parse(&p, "0", "0.52352170001799926680053440480610976968").unwrap();
        let v = Eisenstein::new(p).eval(EisensteinKind::E2, &tau0).unwrap();
        assert!(v.abs() < p.pow10(-30));
    }

    #[test]
    fn e2_deriv_matches_finite_differences() {
        let p = prec();
        let e = Eisenstein::new(p);
        let z = c(&p, 0.0, 2.0);
        let h = p.pow10(-15);
        let at = |t: i32| {
            let shift = HpComplex::real(Float::with_val(p.bits(), &h * t));
            e.eval(EisensteinKind::E2, &(&z + &shift)).unwrap()
        };
        // five-point central stencil, error O(h^4)
        let num = &(&at(-2) - &at(2)) + &(&at(1) - &at(-1)).scale(&p.float(8));
        let fd = num.scale(&(p.float(1) / (Float::with_val(p.bits(), &h * 12u32))));
        let d = e.eval_e2_deriv(&z).unwrap();
        assert!((&fd - &d).abs() < p.pow10(-52));
    }

    #[test]
    fn ramanujan_identity_for_e2() {
        let p = prec();
        let e = Eisenstein::new(p);
        let z = c(&p, 0.0, 1.5);
        let e2 = e.eval(EisensteinKind::E2, &z).unwrap();
        let e4 = e.eval(EisensteinKind::E4, &z).unwrap();
        let rhs = (&(&e2 * &e2) - &e4).mul_i().scale(&(p.pi() * 2u32 / 12u32));
        let lhs = e.eval_e2_deriv(&z).unwrap();
        assert!((&lhs - &rhs).abs() < p.pow10(-55));
    }

    #[test]
    fn higher_derivatives_follow_ramanujan() {
        // E4' = 2 pi i (E2 E4 - E6) / 3
        let p = prec();
        let e = Eisenstein::new(p);
        let z = c(&p, 0.17, 1.2);
        let e2 = e.eval(EisensteinKind::E2, &z).unwrap();
        let e4 = e.eval(EisensteinKind::E4, &z).unwrap();
        let e6 = e.eval(EisensteinKind::E6, &z).unwrap();
        let rhs = (&(&e2 * &e4) - &e6).mul_i().scale(&(p.pi() * 2u32 / 3u32));
        let lhs = e.derivative(EisensteinKind::E4, &z, 1).unwrap();
        assert!((&lhs - &rhs).abs() < p.pow10(-55));
    }

    #[test]
    fn domain_errors() {
        let p = prec();
        let e = Eisenstein::new(p);
        assert!(matches!(
            e.eval(EisensteinKind::E2, &c(&p, 0.0, -1.0)),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            e.eval(EisensteinKind::E2, &c(&p, 0.0, 0.0)),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            e.eval(EisensteinKind::E2, &c(&p, 0.0, 0.01)),
            Err(Error::PrecisionInfeasible { .. })
        ));
    }

    #[test]
    fn nonvanishing_above_053() {
        let p = Precision::new(30);
        let e = Eisenstein::new(p);
        for i in 0..=20 {
            let x = -0.5 + f64::from(i) / 20.0;
            let v = e.eval(EisensteinKind::E2, &c(&p, x, 0.5301)).unwrap();
            let d = (&v - &HpComplex::one(&p)).abs();
            assert!(d > 0 && d < 1, "x = {x}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn periodic_and_conjugation_symmetric(x in -0.5f64..0.5, y in 0.3f64..3.0, k in 0usize..3) {
            let p = Precision::new(40);
            let e = Eisenstein::new(p);
            let kind = EisensteinKind::ALL[k];
            let z = c(&p, x, y);
            let v = e.eval(kind, &z).unwrap();
            let shifted = e.eval(kind, &z.add_real(&p.float(1))).unwrap();
            prop_assert!((&v - &shifted).abs() < p.pow10(-38));
            let mirrored = e.eval(kind, &(-z.conj())).unwrap();
            prop_assert!((&mirrored - &v.conj()).abs() < p.pow10(-38));
        }

        #[test]
        fn q_bounds_hold(x in -0.5f64..0.5, y in 0.8661f64..4.0) {
            let p = Precision::new(30);
            let e = Eisenstein::new(p);
            let z = c(&p, x, y);
            let qa = (-2.0 * std::f64::consts::PI * y).exp();
            let (v, d) = e.e2_with_deriv(&z).unwrap();
            let dist = (&v - &HpComplex::one(&p)).abs().to_f64();
            prop_assert!(dist <= 24.0 * qa / (1.0 - qa).powi(3));
            prop_assert!(23.48 * qa < dist);
            let bound = 48.0 * std::f64::consts::PI * qa * (1.0 + qa) / (1.0 - qa).powi(5);
            prop_assert!(d.abs().to_f64() <= bound);
        }
    }
}
