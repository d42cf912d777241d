//! Fourier and Taylor expansions of the inverse map `F`.
//!
//! `H(x) = F(x) - x` is 1-periodic with `H(x) = sum c_n e^{2 pi i n x}`. With
//! `q = e^{2 pi i x}` the generating series `H~(q e^12) = sum h_n q^n` has
//! rational coefficients and `c_n = h_n e^{-12 n} / (2 pi i)`. It is computed
//! exactly as `-12 + log(S(q)/q)`, where `S` reverts `q exp(12/E2(q) - 12)`.
//!
//! Around `x = 0`, `F(x) = sum b_n x^n` with `b_0 = z_0 = F(0)`. Writing
//! `X = E4(z_0)`, `Y = E6(z_0)`, `Z = E2(z_0)`, one has
//! `b_n = (6i/pi)^{1-n} X^{1-2n} a_n(X, Y, Z)` for polynomials `a_n`.

use rayon::prelude::*;
use rug::{Float, Integer, Rational};
use serde::Serialize;

use crate::eisenstein::{qcoeff, EisensteinKind};
use crate::error::{Error, Result};
use crate::halfmap::HalfMap;
use crate::hp::{decimal, HpComplex, Precision};
use crate::reference;
use crate::series::{RationalSeries, Series};
use crate::weighted::WeightedPoly;

pub const DEFAULT_SERIES_ORDER: usize = 32;
pub const DEFAULT_FOURIER_NMAX: usize = 10;
pub const DEFAULT_NODES: usize = 128;
pub const MAX_NUMERIC_TAYLOR: usize = 16;
pub const MAX_SYMBOLIC_TAYLOR: usize = 8;

/// `E2(q) = 1 - 24 sum sigma_1(n) q^n` through `q^order`.
pub fn e2_series(order: usize) -> RationalSeries {
    let coeffs = (0..=order as u64)
        .map(|n| Rational::from(qcoeff(EisensteinKind::E2, n)))
        .collect();
    Series::from_coeffs(coeffs, order)
}

/// `H~(q e^12)` through `q^order`, computed exactly.
pub fn compute_htilde(order: usize) -> Result<RationalSeries> {
    if order < 1 {
        return Err(Error::Domain("H~ needs order >= 1".into()));
    }
    let twelve = Rational::from(12);
    let g = e2_series(order)
        .reciprocal()?
        .scale(&twelve)
        .add_constant(&Rational::from(-12))
        .exp()?;
    let s = g.shift_up(1).revert()?;
    Ok(s.shift_down(1)?.log1()?.add_constant(&Rational::from(-12)))
}

/// Index of the first coefficient that is not an integer.
pub fn first_non_integer(s: &RationalSeries) -> Option<usize> {
    s.coeffs().iter().position(|c| *c.denom() != 1)
}

/// `c_0 .. c_nmax`; `h` and `r` are filled only by the exact route.
#[derive(Clone, Debug)]
pub struct FourierTable {
    pub c: Vec<HpComplex>,
    pub h: Vec<Rational>,
    pub r: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FourierRow {
    pub n: usize,
    pub c_re: String,
    pub c_im: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<String>,
}

impl FourierTable {
    pub fn nmax(&self) -> usize {
        self.c.len() - 1
    }

    pub fn rows(&self, digits: u32) -> Vec<FourierRow> {
        self.c
            .iter()
            .enumerate()
            .map(|(n, c)| FourierRow {
                n,
                c_re: decimal(&c.re, digits),
                c_im: decimal(&c.im, digits),
                h: self.h.get(n).map(|h| h.to_string()),
                r: self.r.get(n).map(|r| r.to_string()),
            })
            .collect()
    }

    /// `H(x)` from the truncated Fourier sum.
    pub fn eval(&self, x: &Float) -> HpComplex {
        let bits = x.prec();
        let pi2 = Float::with_val(bits, rug::float::Constant::Pi) * 2u32;
        let mut acc = HpComplex::new(Float::new(bits), Float::new(bits));
        for (n, c) in self.c.iter().enumerate() {
            let phase = HpComplex::imag(Float::with_val(bits, &pi2 * x) * n as u32).exp();
            acc = &acc + &(c * &phase);
        }
        acc
    }
}

/// `c_n = h_n e^{-12 n} / (2 pi i)` and `r_n = -h_n / 2`.
pub fn fourier_from_series(
    p: &Precision,
    htilde: &RationalSeries,
    nmax: usize,
) -> Result<FourierTable> {
    if nmax > htilde.order() {
        return Err(Error::Domain(format!(
            "need H~ through q^{nmax}, have q^{}",
            htilde.order()
        )));
    }
    let two_pi = p.pi() * 2u32;
    let mut c = Vec::with_capacity(nmax + 1);
    let mut h = Vec::with_capacity(nmax + 1);
    let mut r = Vec::with_capacity(nmax + 1);
    for (n, hn) in htilde.coeffs().iter().take(nmax + 1).enumerate() {
        let scale = p.float(-12 * n as i64).exp() / &two_pi;
        // 1/(2 pi i) = -i/(2 pi)
        c.push(HpComplex::imag(-(p.rational(hn) * scale)));
        r.push(Rational::from(-hn) / 2u32);
        h.push(hn.clone());
    }
    Ok(FourierTable { c, h, r })
}

/// `c_n` by the periodic trapezoid rule on `nodes` equispaced samples of `H`.
pub fn fourier_numeric(map: &HalfMap, nmax: usize, nodes: usize) -> Result<FourierTable> {
    if nodes < 4 * nmax || nodes == 0 {
        return Err(Error::Domain(format!(
            "need nodes >= 4 nmax, got {nodes} for {nmax}"
        )));
    }
    let p = map.precision();
    let samples: Vec<HpComplex> = (0..nodes)
        .into_par_iter()
        .map(|j| map.h_eval(&(p.float(j as u32) / nodes as u32)))
        .collect::<Result<_>>()?;
    let two_pi = p.pi() * 2u32;
    let roots: Vec<HpComplex> = (0..nodes)
        .map(|j| HpComplex::imag(-(two_pi.clone() * j as u32) / nodes as u32).exp())
        .collect();
    let inv = p.float(1) / nodes as u32;
    let c = (0..=nmax)
        .map(|n| {
            let mut acc = HpComplex::zero(&p);
            for (j, hj) in samples.iter().enumerate() {
                acc = &acc + &(hj * &roots[(n * j) % nodes]);
            }
            acc.scale(&inv)
        })
        .collect();
    Ok(FourierTable {
        c,
        h: Vec::new(),
        r: Vec::new(),
    })
}

/// `z_0 = F(0)`, the preimage of the zero on the imaginary axis.
pub fn find_z0(map: &HalfMap) -> Result<HpComplex> {
    let p = map.precision();
    let z0 = map.f_inverse(&HpComplex::zero(&p))?;
    let e2 = map.eisenstein().eval(EisensteinKind::E2, &z0)?;
    let fixed = &map.six_i_over_pi() / &e2;
    let gap = (&fixed - &z0).abs();
    if gap > p.tolerance() {
        return Err(Error::NoConvergence {
            iterations: 0,
            residual: decimal(&gap, 6),
        });
    }
    Ok(z0)
}

/// `b_0 .. b_n`.
#[derive(Clone, Debug)]
pub struct TaylorTable {
    pub b: Vec<HpComplex>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TaylorRow {
    pub n: usize,
    pub b_re: String,
    pub b_im: String,
}

impl TaylorTable {
    pub fn rows(&self, digits: u32) -> Vec<TaylorRow> {
        self.b
            .iter()
            .enumerate()
            .map(|(n, b)| TaylorRow {
                n,
                b_re: decimal(&b.re, digits),
                b_im: decimal(&b.im, digits),
            })
            .collect()
    }

    /// The Taylor polynomial `sum_{n <= degree} b_n x^n`.
    pub fn eval(&self, x: &Float, degree: usize) -> HpComplex {
        let xc = HpComplex::real(x.clone());
        let mut acc = HpComplex::new(Float::new(x.prec()), Float::new(x.prec()));
        for b in self.b.iter().take(degree + 1).rev() {
            acc = &(&acc * &xc) + b;
        }
        acc
    }

    /// The component that carries `b_n`: real part for odd `n`, imaginary for even.
    pub fn component(&self, n: usize) -> &Float {
        if n % 2 == 1 {
            &self.b[n].re
        } else {
            &self.b[n].im
        }
    }
}

/// Reverts the numerical Taylor series of `f` at `z_0`.
pub fn taylor_numeric(map: &HalfMap, n: usize) -> Result<TaylorTable> {
    if n > MAX_NUMERIC_TAYLOR {
        return Err(Error::Domain(format!(
            "numeric Taylor order {n} > {MAX_NUMERIC_TAYLOR}"
        )));
    }
    let z0 = find_z0(map)?;
    if n == 0 {
        return Ok(TaylorTable { b: vec![z0] });
    }
    let p = map.precision();
    let e = map.eisenstein().taylor(EisensteinKind::E2, &z0, n as u32)?;
    let e = Series::from_coeffs(e, n);
    // f(z_0 + h) = z_0 + h - (6i/pi) / E2(z_0 + h), whose constant term is f(z_0) = 0
    let mut f = Series::variable(&z0, n)
        .sub(&e.reciprocal()?.scale(&map.six_i_over_pi()))
        .add_constant(&z0)
        .into_coeffs();
    f[0] = HpComplex::zero(&p);
    let inv = Series::from_coeffs(f, n).revert_scaled()?;
    let mut b = inv.into_coeffs();
    b.resize(n + 1, HpComplex::zero(&p));
    b[0] = z0;
    Ok(TaylorTable { b })
}

/// `a_1 .. a_n` from symbolic differentiation and reversion.
#[derive(Clone, Debug)]
pub struct SymbolicTaylor {
    pub a: Vec<WeightedPoly>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TermRow {
    pub x: i32,
    pub y: i32,
    pub z: i32,
    pub coeff: String,
}

impl SymbolicTaylor {
    /// `a_n` for `n >= 1`.
    pub fn a(&self, n: usize) -> &WeightedPoly {
        &self.a[n - 1]
    }

    pub fn order(&self) -> usize {
        self.a.len()
    }

    /// Sorted `(exponents, coefficient)` rows for `a_n`.
    pub fn term_list(&self, n: usize) -> Vec<TermRow> {
        self.a(n)
            .terms()
            .map(|(&(x, y, z), c)| TermRow {
                x,
                y,
                z,
                coeff: c.to_string(),
            })
            .collect()
    }

    /// `b_n` evaluated at `X = E4(z_0)`, `Y = E6(z_0)`, `Z = E2(z_0)`.
    pub fn evaluate(&self, map: &HalfMap) -> Result<TaylorTable> {
        let z0 = find_z0(map)?;
        let eis = map.eisenstein();
        let x = eis.eval(EisensteinKind::E4, &z0)?;
        let y = eis.eval(EisensteinKind::E6, &z0)?;
        let z = eis.eval(EisensteinKind::E2, &z0)?;
        let c = map.six_i_over_pi();
        let c_inv = c.recip().expect("nonzero");
        let x_inv = x
            .recip()
            .ok_or_else(|| Error::Domain("E4(z0) = 0".into()))?;
        let mut b = vec![&c / &z];
        for n in 1..=self.order() {
            let factor = &c_inv.powi(n as u32 - 1) * &x_inv.powi(2 * n as u32 - 1);
            b.push(&factor * &self.a(n).evaluate(&x, &y, &z));
        }
        Ok(TaylorTable { b })
    }
}

pub fn taylor_symbolic(n: usize) -> Result<SymbolicTaylor> {
    if n == 0 || n > MAX_SYMBOLIC_TAYLOR {
        return Err(Error::Domain(format!(
            "symbolic Taylor order must lie in 1..={MAX_SYMBOLIC_TAYLOR}, got {n}"
        )));
    }
    // f^(k)(z) = (2 pi i)^(k-1) D^(k-1)(X / Z^2); with s = 2 pi i h the series
    // 2 pi i (f(z_0 + h) - f(z_0)) is G(s) = sum_k D^(k-1)(X/Z^2) s^k / k!.
    let mut g = vec![WeightedPoly::zero()];
    let mut r = WeightedPoly::from_terms(&[(1, 0, -2, 1, 1)]);
    let mut fact = Integer::from(1);
    for k in 1..=n {
        fact *= k as u32;
        g.push(r.scale(&Rational::from((Integer::from(1), fact.clone()))));
        r = r.derive();
    }
    let d = Series::from_coeffs(g, n).revert_scaled()?.into_coeffs();
    // b_n = (2 pi i)^(n-1) d_n and a_n = (-12)^(n-1) X^(2n-1) d_n
    let mut a = Vec::with_capacity(n);
    let mut twelve = Rational::from(1);
    for (m, dm) in d.iter().enumerate().skip(1) {
        let x_pow = WeightedPoly::monomial((2 * m as i32 - 1, 0, 0), twelve.clone());
        a.push(x_pow.mul(dm));
        twelve *= -12;
    }
    Ok(SymbolicTaylor { a })
}

/// Sign of the component carrying `b_n`, computed versus tabulated.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SignRow {
    pub n: usize,
    /// `"re"` for odd `n`, `"im"` for even `n`.
    pub component: &'static str,
    pub computed: i8,
    pub tabulated: i8,
    pub agrees: bool,
}

pub fn sign_report(table: &TaylorTable) -> Vec<SignRow> {
    reference::B
        .iter()
        .enumerate()
        .take(table.b.len())
        .map(|(n, s)| {
            let computed = sign(table.component(n));
            let tabulated = if s.starts_with('-') { -1 } else { 1 };
            SignRow {
                n,
                component: if n % 2 == 1 { "re" } else { "im" },
                computed,
                tabulated,
                agrees: computed == tabulated,
            }
        })
        .collect()
}

fn sign(x: &Float) -> i8 {
    match x.cmp0() {
        Some(std::cmp::Ordering::Less) => -1,
        Some(std::cmp::Ordering::Greater) => 1,
        _ => 0,
    }
}

/// Three independent values of `F'(0)`.
#[derive(Clone, Debug)]
pub struct SlopeCheck {
    /// `1 / f'(z_0) = Z^2 / X`.
    pub inverse_slope: HpComplex,
    /// `1 + 2 pi i c_1`.
    pub fourier_leading: HpComplex,
    /// `1 + sum 2 pi i n c_n` over the table.
    pub fourier_sum: HpComplex,
}

pub fn slope_check(map: &HalfMap, fourier: &FourierTable) -> Result<SlopeCheck> {
    let p = map.precision();
    let z0 = find_z0(map)?;
    let eis = map.eisenstein();
    let x = eis.eval(EisensteinKind::E4, &z0)?;
    let z = eis.eval(EisensteinKind::E2, &z0)?;
    let two_pi_i = HpComplex::imag(p.pi() * 2u32);
    let one = HpComplex::one(&p);
    let fourier_leading = &one + &(&two_pi_i * &fourier.c[1]);
    let mut fourier_sum = one;
    for (n, c) in fourier.c.iter().enumerate().skip(1) {
        fourier_sum = &fourier_sum + &(&two_pi_i * c).scale(&p.float(n as u32));
    }
    Ok(SlopeCheck {
        inverse_slope: &(&z * &z) / &x,
        fourier_leading,
        fourier_sum,
    })
}
