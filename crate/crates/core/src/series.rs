//! Truncated formal power series.
//!
//! A [`Series`] of order `N` knows its coefficients of `q^0 ..= q^N`; everything
//! beyond is unknown, not zero. Every operation returns the largest order that
//! is fully determined by its inputs.
//!
//! The arithmetic is generic over a [`Coefficient`] ring so the same code runs on
//! exact rationals ([`RationalSeries`]), on high-precision complex numbers and on
//! Laurent polynomials in the Eisenstein symbols.

use std::fmt;

use rug::Rational;
use thiserror::Error;

use crate::hp::HpComplex;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("constant term is not invertible")]
    NotUnit,
    #[error("exp needs a zero constant term")]
    NonZeroConstant,
    #[error("log1 needs constant term 1")]
    ConstantNotOne,
    #[error("revert needs t(0) = 0 and t'(0) = 1")]
    NotRevertible,
    #[error("compose needs an inner series without constant term")]
    InnerConstant,
    #[error("cannot divide by q^{0}: low coefficients are not zero")]
    NotDivisible(usize),
}

/// Ring operations needed by the series algorithms.
///
/// `ratio_like` and `inverse` are only ever applied to small integer ratios and
/// to constant terms respectively, so rings with few units (Laurent polynomials)
/// still support reciprocal, exp, log and reversion.
pub trait Coefficient: Clone + fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn ratio_like(&self, num: i64, den: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    fn plus(&self, rhs: &Self) -> Self;
    fn minus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    fn negated(&self) -> Self;
    fn inverse(&self) -> Option<Self>;
}

impl Coefficient for Rational {
    fn zero_like(&self) -> Self {
        Rational::new()
    }
    fn one_like(&self) -> Self {
        Rational::from(1)
    }
    fn ratio_like(&self, num: i64, den: i64) -> Self {
        Rational::from((num, den))
    }
    fn is_zero(&self) -> bool {
        self.cmp0() == std::cmp::Ordering::Equal
    }
    fn is_one(&self) -> bool {
        *self == 1
    }
    fn plus(&self, rhs: &Self) -> Self {
        Rational::from(self + rhs)
    }
    fn minus(&self, rhs: &Self) -> Self {
        Rational::from(self - rhs)
    }
    fn times(&self, rhs: &Self) -> Self {
        Rational::from(self * rhs)
    }
    fn negated(&self) -> Self {
        Rational::from(-self)
    }
    fn inverse(&self) -> Option<Self> {
        if Coefficient::is_zero(self) {
            None
        } else {
            Some(self.clone().recip())
        }
    }
}

impl Coefficient for HpComplex {
    fn zero_like(&self) -> Self {
        let p = self.prec();
        HpComplex::new(rug::Float::new(p), rug::Float::new(p))
    }
    fn one_like(&self) -> Self {
        HpComplex::real(rug::Float::with_val(self.prec(), 1))
    }
    fn ratio_like(&self, num: i64, den: i64) -> Self {
        let r = Rational::from((num, den));
        HpComplex::real(rug::Float::with_val(self.prec(), &r))
    }
    fn is_zero(&self) -> bool {
        HpComplex::is_zero(self)
    }
    fn is_one(&self) -> bool {
        self.re == 1 && self.im.is_zero()
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn negated(&self) -> Self {
        -self
    }
    fn inverse(&self) -> Option<Self> {
        self.recip()
    }
}

/// A power series truncated after `q^order`.
#[derive(Clone, Debug, PartialEq)]
pub struct Series<C> {
    coeffs: Vec<C>,
}

/// Series with exact rational coefficients.
pub type RationalSeries = Series<Rational>;

impl<C: Coefficient> Series<C> {
    /// Builds a series of the given order; missing coefficients are exact zeros,
    /// surplus ones are dropped. Panics on an empty coefficient list.
    pub fn from_coeffs(mut coeffs: Vec<C>, order: usize) -> Self {
        assert!(
            !coeffs.is_empty(),
            "a series needs at least a constant term"
        );
        let zero = coeffs[0].zero_like();
        coeffs.resize(order + 1, zero);
        Series { coeffs }
    }

    /// The constant series `c + O(q^(order+1))`.
    pub fn constant(c: C, order: usize) -> Self {
        Self::from_coeffs(vec![c], order)
    }

    /// The series `q`, known to the given order (at least 1).
    pub fn variable(like: &C, order: usize) -> Self {
        Self::from_coeffs(vec![like.zero_like(), like.one_like()], order.max(1))
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> Option<&C> {
        self.coeffs.get(n)
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C> {
        self.coeffs
    }

    fn like(&self) -> &C {
        &self.coeffs[0]
    }

    /// Index of the first known nonzero coefficient, `order + 1` if none.
    pub fn valuation(&self) -> usize {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .unwrap_or(self.coeffs.len())
    }

    /// Forgets every coefficient above `order` (no-op when already lower).
    pub fn truncate(mut self, order: usize) -> Self {
        self.coeffs.truncate(order + 1);
        self
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let order = self.order().min(rhs.order());
        let coeffs = (0..=order)
            .map(|n| self.coeffs[n].plus(&rhs.coeffs[n]))
            .collect();
        Series { coeffs }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let order = self.order().min(rhs.order());
        let coeffs = (0..=order)
            .map(|n| self.coeffs[n].minus(&rhs.coeffs[n]))
            .collect();
        Series { coeffs }
    }

    pub fn neg(&self) -> Self {
        Series {
            coeffs: self.coeffs.iter().map(Coefficient::negated).collect(),
        }
    }

    pub fn scale(&self, s: &C) -> Self {
        Series {
            coeffs: self.coeffs.iter().map(|c| c.times(s)).collect(),
        }
    }

    /// Adds `c` to the constant term.
    pub fn add_constant(&self, c: &C) -> Self {
        let mut out = self.clone();
        out.coeffs[0] = out.coeffs[0].plus(c);
        out
    }

    /// Cauchy product. The result order is the largest one determined by the
    /// operands: `min(N_a + v_b, N_b + v_a)` with `v` the valuations.
    pub fn mul(&self, rhs: &Self) -> Self {
        let (va, vb) = (self.valuation(), rhs.valuation());
        let order = (self.order() + vb).min(rhs.order() + va);
        self.mul_to(rhs, order)
    }

    /// Product truncated at `order`, which must not exceed the determined order.
    fn mul_to(&self, rhs: &Self, order: usize) -> Self {
        let zero = self.like().zero_like();
        let mut coeffs = vec![zero; order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(order + 1 - i) {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] = coeffs[i + j].plus(&a.times(b));
            }
        }
        Series { coeffs }
    }

    /// Multiplicative inverse of a series with invertible constant term.
    pub fn reciprocal(&self) -> Result<Self, SeriesError> {
        let inv0 = self.coeffs[0].inverse().ok_or(SeriesError::NotUnit)?;
        let neg_inv0 = inv0.negated();
        let mut out: Vec<C> = Vec::with_capacity(self.coeffs.len());
        out.push(inv0);
        for n in 1..=self.order() {
            let mut acc = self.like().zero_like();
            for k in 1..=n {
                if !self.coeffs[k].is_zero() {
                    acc = acc.plus(&self.coeffs[k].times(&out[n - k]));
                }
            }
            out.push(acc.times(&neg_inv0));
        }
        Ok(Series { coeffs: out })
    }

    /// Formal derivative; order drops by one (order 0 gives the zero series of order 0).
    pub fn derivative(&self) -> Self {
        if self.order() == 0 {
            return Series::constant(self.like().zero_like(), 0);
        }
        let coeffs = (1..=self.order())
            .map(|n| self.coeffs[n].times(&self.like().ratio_like(n as i64, 1)))
            .collect();
        Series { coeffs }
    }

    /// `exp(a)` for `a(0) = 0`, via `E' = a' E`.
    pub fn exp(&self) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_zero() {
            return Err(SeriesError::NonZeroConstant);
        }
        let like = self.like();
        let mut out: Vec<C> = Vec::with_capacity(self.coeffs.len());
        out.push(like.one_like());
        for n in 1..=self.order() {
            let mut acc = like.zero_like();
            for k in 1..=n {
                if !self.coeffs[k].is_zero() {
                    let term = self.coeffs[k].times(&out[n - k]);
                    acc = acc.plus(&term.times(&like.ratio_like(k as i64, 1)));
                }
            }
            out.push(acc.times(&like.ratio_like(1, n as i64)));
        }
        Ok(Series { coeffs: out })
    }

    /// `log(a)` for `a(0) = 1`, via `a L' = a'`.
    #[allow(clippy::needless_range_loop)]
    pub fn log1(&self) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_one() {
            return Err(SeriesError::ConstantNotOne);
        }
        let like = self.like();
        let mut out: Vec<C> = Vec::with_capacity(self.coeffs.len());
        out.push(like.zero_like());
        for n in 1..=self.order() {
            // n l_n = n a_n - sum_{k=1}^{n-1} k l_k a_{n-k}
            let mut acc = self.coeffs[n].times(&like.ratio_like(n as i64, 1));
            for k in 1..n {
                if !self.coeffs[n - k].is_zero() {
                    let term = out[k].times(&self.coeffs[n - k]);
                    acc = acc.minus(&term.times(&like.ratio_like(k as i64, 1)));
                }
            }
            out.push(acc.times(&like.ratio_like(1, n as i64)));
        }
        Ok(Series { coeffs: out })
    }

    /// Multiplication by `q^k`.
    pub fn shift_up(&self, k: usize) -> Self {
        let zero = self.like().zero_like();
        let mut coeffs = vec![zero; k];
        coeffs.extend(self.coeffs.iter().cloned());
        Series { coeffs }
    }

    /// Division by `q^k`; the first `k` coefficients must vanish.
    pub fn shift_down(&self, k: usize) -> Result<Self, SeriesError> {
        if k > self.order() || self.coeffs[..k].iter().any(|c| !c.is_zero()) {
            return Err(SeriesError::NotDivisible(k));
        }
        Ok(Series {
            coeffs: self.coeffs[k..].to_vec(),
        })
    }

    /// `outer(inner(q))` for `inner(0) = 0`.
    pub fn compose(outer: &Self, inner: &Self) -> Result<Self, SeriesError> {
        if !inner.coeffs[0].is_zero() {
            return Err(SeriesError::InnerConstant);
        }
        let v = inner.valuation();
        let order = inner.order().min((outer.order() + 1) * v - 1);
        let top = outer.order().min(order / v);
        let mut acc = Series::constant(outer.coeffs[top].clone(), order);
        for i in (0..top).rev() {
            acc = acc.mul_to(inner, order).add_constant(&outer.coeffs[i]);
        }
        Ok(acc)
    }

    fn check_revertible(&self) -> Result<(), SeriesError> {
        if self.order() < 1 || !self.coeffs[0].is_zero() || !self.coeffs[1].is_one() {
            return Err(SeriesError::NotRevertible);
        }
        Ok(())
    }

    /// Compositional inverse `s` with `t(s(q)) = q`, by Newton iteration on
    /// series (the known order doubles per step).
    pub fn revert(&self) -> Result<Self, SeriesError> {
        self.check_revertible()?;
        let target = self.order();
        let like = self.like();
        let q = |order: usize| Series::variable(like, order);
        let mut s = q(1);
        let mut known = 1;
        while known < target {
            let next = (2 * known).min(target);
            let s_ext = Series::from_coeffs(s.coeffs.clone(), next);
            let t_trunc = self.clone().truncate(next);
            let residual = Series::compose(&t_trunc, &s_ext)?.sub(&q(next));
            let slope = self.clone().truncate((next + 1).min(target)).derivative();
            let slope_at_s = Series::compose(&slope, &s_ext)?.reciprocal()?;
            let step = residual.mul(&slope_at_s).truncate(next);
            s = s_ext.sub(&Series::from_coeffs(step.coeffs, next));
            known = next;
        }
        Ok(s)
    }

    /// Compositional inverse from the Lagrange inversion formula
    /// `s_n = (1/n) [w^(n-1)] (w / t(w))^n`. Independent of [`Series::revert`].
    pub fn revert_lagrange(&self) -> Result<Self, SeriesError> {
        self.check_revertible()?;
        let target = self.order();
        let like = self.like();
        let phi = self.shift_down(1)?.reciprocal()?;
        let mut coeffs = vec![like.zero_like(); target + 1];
        let mut power = Series::constant(like.one_like(), phi.order());
        for (n, slot) in coeffs.iter_mut().enumerate().skip(1) {
            power = power.mul(&phi);
            *slot = power.coeffs[n - 1].times(&like.ratio_like(1, n as i64));
        }
        Ok(Series { coeffs })
    }

    /// Inverse of `t` with `t(0) = 0` and an invertible (not necessarily unit)
    /// linear coefficient: reverts `t / t_1` and rescales.
    pub fn revert_scaled(&self) -> Result<Self, SeriesError> {
        if self.order() < 1 || !self.coeffs[0].is_zero() {
            return Err(SeriesError::NotRevertible);
        }
        let lead = self.coeffs[1].clone();
        let inv = lead.inverse().ok_or(SeriesError::NotRevertible)?;
        let mut normalized = self.scale(&inv);
        normalized.coeffs[1] = lead.one_like();
        let r = normalized.revert()?;
        let mut factor = lead.one_like();
        let coeffs = r
            .coeffs
            .iter()
            .map(|c| {
                let out = c.times(&factor);
                factor = factor.times(&inv);
                out
            })
            .collect();
        Ok(Series { coeffs })
    }
}

impl RationalSeries {
    /// Integer coefficients, with the given order.
    pub fn from_ints(coeffs: &[i64], order: usize) -> Self {
        let coeffs = coeffs.iter().map(|&c| Rational::from(c)).collect();
        Series::from_coeffs(coeffs, order)
    }
}

impl fmt::Display for RationalSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.coeffs.iter().enumerate() {
            if Coefficient::is_zero(c) {
                continue;
            }
            let neg = c.cmp0() == std::cmp::Ordering::Less;
            let abs = Rational::from(c.abs_ref());
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match (n, abs == 1) {
                (0, _) => write!(f, "{abs}")?,
                (1, true) => write!(f, "q")?,
                (1, false) => write!(f, "{abs}*q")?,
                (_, true) => write!(f, "q^{n}")?,
                (_, false) => write!(f, "{abs}*q^{n}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.order() + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ints(s: &RationalSeries) -> Vec<Rational> {
        s.coeffs().to_vec()
    }

    fn rs(c: &[i64], order: usize) -> RationalSeries {
        RationalSeries::from_ints(c, order)
    }

    #[test]
    fn difference_of_squares() {
        let p = rs(&[1, 1], 5).mul(&rs(&[1, -1], 5));
        assert_eq!(p, rs(&[1, 0, -1], 5));
    }

    #[test]
    fn multiplying_by_one_is_identity() {
        let a = rs(&[3, -1, 4, 1, -5], 4);
        assert_eq!(a.mul(&rs(&[1], 4)), a);
    }

    #[test]
    fn telescoping_product() {
        let geo = rs(&[1; 8], 7);
        assert_eq!(geo.mul(&rs(&[1, -1], 7)), rs(&[1], 7));
    }

    #[test]
    fn mul_order_accounts_for_valuation() {
        // q^2 known to order 5 times a series known to order 3: the product is
        // known through q^5, not only q^3.
        let a = rs(&[0, 0, 1], 5);
        let b = rs(&[1, 2, 3], 3);
        assert_eq!(a.mul(&b), rs(&[0, 0, 1, 2, 3], 5));
    }

    #[test]
    fn reciprocal_examples() {
        assert_eq!(
            rs(&[1, -1], 4).reciprocal().unwrap(),
            rs(&[1, 1, 1, 1, 1], 4)
        );
        assert_eq!(rs(&[1], 0).reciprocal().unwrap(), rs(&[1], 0));
        // long division by hand: 1/(1 - 24q - 72q^2) = 1 + 24q + (576 + 72)q^2
        assert_eq!(
            rs(&[1, -24, -72], 2).reciprocal().unwrap(),
            rs(&[1, 24, 648], 2)
        );
        assert_eq!(rs(&[0, 1], 3).reciprocal(), Err(SeriesError::NotUnit));
    }

    #[test]
    fn exp_examples() {
        assert_eq!(rs(&[0], 3).exp().unwrap(), rs(&[1], 3));
        let e = rs(&[0, 1], 3).exp().unwrap();
        let expect: Vec<Rational> = vec![
            Rational::from(1),
            Rational::from(1),
            Rational::from((1, 2)),
            Rational::from((1, 6)),
        ];
        assert_eq!(ints(&e), expect);
        let em = rs(&[0, -1], 3).exp().unwrap();
        let expect: Vec<Rational> = vec![
            Rational::from(1),
            Rational::from(-1),
            Rational::from((1, 2)),
            Rational::from((-1, 6)),
        ];
        assert_eq!(ints(&em), expect);
        assert_eq!(rs(&[1, 1], 3).exp(), Err(SeriesError::NonZeroConstant));
    }

    #[test]
    fn log1_examples() {
        assert_eq!(rs(&[1], 3).log1().unwrap(), rs(&[0], 3));
        let l = rs(&[1, 1], 3).log1().unwrap();
        let expect: Vec<Rational> = vec![
            Rational::new(),
            Rational::from(1),
            Rational::from((-1, 2)),
            Rational::from((1, 3)),
        ];
        assert_eq!(ints(&l), expect);
        assert_eq!(rs(&[2, 1], 3).log1(), Err(SeriesError::ConstantNotOne));
    }

    #[test]
    fn revert_examples() {
        assert_eq!(rs(&[0, 1], 6).revert().unwrap(), rs(&[0, 1], 6));
        // (-1 + sqrt(1 + 4w)) / 2 = w - w^2 + 2w^3 - 5w^4 + 14w^5 - ...
        let s = rs(&[0, 1, 1], 5).revert().unwrap();
        assert_eq!(s, rs(&[0, 1, -1, 2, -5, 14], 5));
        assert_eq!(rs(&[0, 1, 1], 5).revert_lagrange().unwrap(), s);
        assert_eq!(rs(&[0, 2, 1], 5).revert(), Err(SeriesError::NotRevertible));
        assert_eq!(rs(&[1, 1], 5).revert(), Err(SeriesError::NotRevertible));
    }

    #[test]
    fn revert_scaled_handles_nonunit_lead() {
        // t = 2q + q^2 ; s = (-2 + sqrt(4 + 4w))/2 = sqrt(1+w) - 1
        let s = rs(&[0, 2, 1], 4).revert_scaled().unwrap();
        let expect: Vec<Rational> = vec![
            Rational::new(),
            Rational::from((1, 2)),
            Rational::from((-1, 8)),
            Rational::from((1, 16)),
            Rational::from((-5, 128)),
        ];
        assert_eq!(ints(&s), expect);
    }

    #[test]
    fn compose_examples() {
        let a = rs(&[5, -3, 2, 7], 3);
        let q = rs(&[0, 1], 3);
        assert_eq!(Series::compose(&a, &q).unwrap(), a);
        let c = Series::compose(&rs(&[1, 1], 6), &rs(&[0, 0, 1], 6)).unwrap();
        assert_eq!(c, rs(&[1, 0, 1], 6));
        let log = rs(&[1, 1], 8).log1().unwrap();
        let em1 = rs(&[0, 1], 8)
            .exp()
            .unwrap()
            .add_constant(&Rational::from(-1));
        assert_eq!(Series::compose(&log, &em1).unwrap(), rs(&[0, 1], 8));
        assert_eq!(
            Series::compose(&a, &rs(&[1, 1], 3)),
            Err(SeriesError::InnerConstant)
        );
    }

    #[test]
    fn compose_order_uses_inner_valuation() {
        // outer known to q^2, inner = q^3: outer(inner) is known through q^8.
        let c = Series::compose(&rs(&[1, 1, 1], 2), &rs(&[0, 0, 0, 1], 20)).unwrap();
        assert_eq!(c.order(), 8);
        assert_eq!(c, rs(&[1, 0, 0, 1, 0, 0, 1], 8));
    }

    #[test]
    fn shifts() {
        let a = rs(&[1, 2, 3], 2);
        assert_eq!(a.shift_up(2), rs(&[0, 0, 1, 2, 3], 4));
        assert_eq!(a.shift_up(2).shift_down(2).unwrap(), a);
        assert_eq!(a.shift_down(1), Err(SeriesError::NotDivisible(1)));
    }

    #[test]
    fn display_form() {
        assert_eq!(
            rs(&[-12, -288, 1], 2).to_string(),
            "-12 - 288*q + q^2 + O(q^3)"
        );
    }

    fn rational() -> impl Strategy<Value = Rational> {
        (-30i64..30, 1i64..8).prop_map(|(n, d)| Rational::from((n, d)))
    }

    fn series(order: usize) -> impl Strategy<Value = RationalSeries> {
        prop::collection::vec(rational(), order + 1)
            .prop_map(move |c| Series::from_coeffs(c, order))
    }

    fn admissible(order: usize) -> impl Strategy<Value = RationalSeries> {
        series(order).prop_map(|mut s| {
            s.coeffs[0] = Rational::new();
            s.coeffs[1] = Rational::from(1);
            s
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn mul_commutes_and_associates(a in series(6), b in series(6), c in series(6)) {
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        }

        #[test]
        fn reciprocal_is_involutive(mut a in series(8)) {
            a.coeffs[0] = Rational::from(3);
            let r = a.reciprocal().unwrap();
            prop_assert_eq!(a.mul(&r), rs(&[1], 8));
            prop_assert_eq!(r.reciprocal().unwrap(), a);
        }

        #[test]
        fn exp_log_roundtrip(mut a in series(12)) {
            a.coeffs[0] = Rational::new();
            let e = a.exp().unwrap();
            prop_assert_eq!(e.log1().unwrap(), a.clone());
            let b = a.add_constant(&Rational::from(1));
            prop_assert_eq!(b.log1().unwrap().exp().unwrap(), b);
        }

        #[test]
        fn revert_roundtrip(t in admissible(10)) {
            let s = t.revert().unwrap();
            let q = rs(&[0, 1], 10);
            prop_assert_eq!(Series::compose(&t, &s).unwrap(), q.clone());
            prop_assert_eq!(Series::compose(&s, &t).unwrap(), q);
            prop_assert_eq!(t.revert_lagrange().unwrap(), s);
        }
    }
}
