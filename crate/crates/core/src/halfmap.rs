//! The map `f(z) = z - 6i / (pi E2(z))` and its inverse near the real axis.
//!
//! `E2(gamma z) = 0` exactly when `f(z) = -d/c`, so the zeros of `E2` are the
//! images of `F(-d/c)` where `F` inverts `f` on a strip around the real line.
//! Writing `f = u + iv`, the level set `v = 0` inside the fundamental domain is
//! the graph of a function `y = phi(x)` on `[-1/2, 1/2]`, and `u` increases
//! along it from `-1/2` to `1/2`.

use std::cmp::Ordering;

use rug::Float;

use crate::eisenstein::{Eisenstein, EisensteinKind};
use crate::error::{Error, Result};
use crate::hp::{HpComplex, Precision};

/// `f` is only evaluated above this height, where `0 < |E2 - 1| < 1`.
pub const MIN_IM: f64 = 0.53;

/// Newton steps allowed before giving up.
pub const NEWTON_CAP: usize = 64;

/// `F` is only used this close to the real axis.
pub const MAX_IM_W: f64 = 0.1;

/// Lower and upper ends of the bracket used when tracing the level curve.
const CURVE_BRACKET: (f64, f64) = (0.866_025_403_784_438_6, 2.5);

/// A value `f(z) = u + iv`.
#[derive(Clone, Debug, PartialEq)]
pub struct MapValue {
    pub value: HpComplex,
}

impl MapValue {
    pub fn u(&self) -> &Float {
        &self.value.re
    }

    pub fn v(&self) -> &Float {
        &self.value.im
    }
}

/// A point `x + i phi(x)` of the level curve `Im f = 0`, with `u = f(x + i phi(x))`.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvePoint {
    pub x: Float,
    pub y: Float,
    pub fvalue: Float,
}

#[derive(Clone, Copy, Debug)]
pub struct HalfMap {
    eis: Eisenstein,
}

impl HalfMap {
    pub fn new(prec: Precision) -> Self {
        HalfMap {
            eis: Eisenstein::new(prec),
        }
    }

    pub fn precision(&self) -> Precision {
        self.eis.precision()
    }

    pub fn eisenstein(&self) -> &Eisenstein {
        &self.eis
    }

    /// `6i/pi`.
    pub fn six_i_over_pi(&self) -> HpComplex {
        let p = self.precision();
        HpComplex::imag(p.float(6) / p.pi())
    }

    fn check_region(&self, z: &HpComplex) -> Result<()> {
        if z.im.partial_cmp(&MIN_IM) != Some(Ordering::Greater) {
            return Err(Error::Domain(format!(
                "f needs Im z > {MIN_IM}, got {}",
                z.im.to_f64()
            )));
        }
        Ok(())
    }

    pub fn f_eval(&self, z: &HpComplex) -> Result<MapValue> {
        self.check_region(z)?;
        let e2 = self.eis.eval(EisensteinKind::E2, z)?;
        Ok(MapValue {
            value: z - &(&self.six_i_over_pi() / &e2),
        })
    }

    /// `f'(z) = 1 + (6i/pi) E2'(z) / E2(z)^2`.
    pub fn f_deriv(&self, z: &HpComplex) -> Result<HpComplex> {
        Ok(self.f_with_deriv(z)?.1)
    }

    /// `f(z)` and `f'(z)` from one pass over the q-series.
    pub fn f_with_deriv(&self, z: &HpComplex) -> Result<(HpComplex, HpComplex)> {
        self.check_region(z)?;
        let (e2, de2) = self.eis.e2_with_deriv(z)?;
        let c = self.six_i_over_pi();
        let inv = e2
            .recip()
            .ok_or_else(|| Error::Domain("E2 vanishes".into()))?;
        let value = z - &(&c * &inv);
        let slope = (&(&c * &de2) * &(&inv * &inv)).add_real(&Float::with_val(z.prec(), 1));
        Ok((value, slope))
    }

    /// `F(w)`: the solution of `f(z) = w` near `w + 6i/pi`.
    pub fn f_inverse(&self, w: &HpComplex) -> Result<HpComplex> {
        if w.im.clone().abs() > MAX_IM_W {
            return Err(Error::Domain(format!(
                "F is only used for |Im w| <= {MAX_IM_W}, got {}",
                w.im.to_f64()
            )));
        }
        self.solve(w, &(w + &self.six_i_over_pi()))
    }

    /// Undamped Newton iteration for `f(z) = w` from `start`.
    pub fn solve(&self, w: &HpComplex, start: &HpComplex) -> Result<HpComplex> {
        let p = self.precision();
        let tight = p.tight();
        let mut z = start.with_prec(p.bits());
        let mut residual = p.float(f64::INFINITY);
        for _ in 0..NEWTON_CAP {
            let (fz, slope) = self.f_with_deriv(&z)?;
            let r = &fz - w;
            residual = r.abs();
            if residual <= tight {
                return Ok(z);
            }
            z = &z - &(&r / &slope);
        }
        Err(Error::NoConvergence {
            iterations: NEWTON_CAP,
            residual: crate::hp::decimal(&residual, 6),
        })
    }

    /// Solves `Im f(x + iy) = 0` for `y`: bisection on the bracket, then Newton
    /// in `y` using `d/dy Im f = Re f'`.
    pub fn trace_curve(&self, x: &Float) -> Result<CurvePoint> {
        let p = self.precision();
        let point = |y: &Float| HpComplex::new(p.float(x), y.clone());
        let v_at = |y: &Float| -> Result<Float> { Ok(self.f_eval(&point(y))?.v().clone()) };

        let mut lo = p.float(3).sqrt() / 2u32;
        let mut hi = p.float(CURVE_BRACKET.1);
        debug_assert!((lo.to_f64() - CURVE_BRACKET.0).abs() < 1e-15);
        let v_lo = v_at(&lo)?;
        let v_hi = v_at(&hi)?;
        if v_lo.cmp0() != Some(Ordering::Less) || v_hi.cmp0() != Some(Ordering::Greater) {
            return Err(Error::Curve(crate::hp::decimal(x, 20)));
        }
        while Float::with_val(p.bits(), &hi - &lo) > 1e-6 {
            let mid = Float::with_val(p.bits(), &lo + &hi) / 2u32;
            if v_at(&mid)?.cmp0() == Some(Ordering::Less) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let tight = p.tight();
        let mut y = Float::with_val(p.bits(), &lo + &hi) / 2u32;
        for _ in 0..NEWTON_CAP {
            let (fz, slope) = self.f_with_deriv(&point(&y))?;
            if fz.im.clone().abs() <= tight {
                return Ok(CurvePoint {
                    x: p.float(x),
                    y,
                    fvalue: fz.re,
                });
            }
            y -= Float::with_val(p.bits(), &fz.im / &slope.re);
        }
        Err(Error::Curve(crate::hp::decimal(x, 20)))
    }

    /// `H(x) = F(x) - x`, a 1-periodic function of the real variable `x`.
    pub fn h_eval(&self, x: &Float) -> Result<HpComplex> {
        let p = self.precision();
        let w = HpComplex::real(p.float(x));
        Ok(&self.f_inverse(&w)? - &w)
    }
}
