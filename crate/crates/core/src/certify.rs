//! Sampled checks of the inequalities behind the location of the zeros, and
//! the bootstrap that sharpens `|z - (-d/c + 6i/pi)|`.
//!
//! Every check evaluates `bound - quantity` (or `quantity - bound`) on a grid at
//! full precision and reports the smallest margin. These are dense numerical
//! checks, not interval proofs.

use rayon::prelude::*;
use rug::float::Round;
use rug::ops::Pow;
use rug::Float;
use serde::Serialize;

use crate::eisenstein::EisensteinKind;
use crate::error::Result;
use crate::halfmap::HalfMap;
use crate::hp::{decimal, round_decimal, HpComplex, Precision};
use crate::report::{serialize_float, BoundReport};

pub const UPPER_CONSTANT: f64 = 24.32;
pub const LOWER_CONSTANT: f64 = 23.48;
pub const FIRST_BOUND: f64 = 0.106;
pub const FPRIME_RADIUS: f64 = 0.57;
pub const FPRIME_REAL: f64 = 0.4;
pub const T_BOUND: f64 = 0.1054;

/// Significant digits kept (rounded outward) at each bootstrap step.
pub const BOOTSTRAP_DIGITS: usize = 10;

/// Number of times the bootstrap step is repeated after the first pass.
pub const BOOTSTRAP_REPEATS: usize = 2;

/// Lower end of a grid in `y`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Height {
    /// `sqrt(3)/2`, the lowest point of the fundamental domain.
    SqrtThreeOverTwo,
    Value(f64),
}

impl Height {
    pub fn float(&self, p: &Precision) -> Float {
        match *self {
            Height::SqrtThreeOverTwo => p.float(3).sqrt() / 2u32,
            Height::Value(v) => p.float(v),
        }
    }
}

/// A rectangular grid `x in [-1/2, 1/2]`, `y in [y_min, y_max]`, endpoints included.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Grid {
    pub nx: usize,
    pub ny: usize,
    pub y_min: Height,
    pub y_max: f64,
}

impl Grid {
    pub fn e2_default() -> Self {
        Grid {
            nx: 101,
            ny: 51,
            y_min: Height::SqrtThreeOverTwo,
            y_max: 3.0,
        }
    }

    pub fn fprime_default() -> Self {
        Grid {
            nx: 101,
            ny: 41,
            y_min: Height::Value(1.0),
            y_max: 3.0,
        }
    }

    pub fn strip_default() -> Self {
        Grid {
            nx: 101,
            ny: 21,
            y_min: Height::SqrtThreeOverTwo,
            y_max: 1.0,
        }
    }

    /// Doubles the density: every old point stays a grid point.
    pub fn refined(&self) -> Self {
        Grid {
            nx: 2 * self.nx - 1,
            ny: 2 * self.ny - 1,
            ..*self
        }
    }

    pub fn with_size(&self, nx: usize, ny: usize) -> Self {
        Grid { nx, ny, ..*self }
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn points(&self, p: &Precision) -> Vec<HpComplex> {
        let y0 = self.y_min.float(p);
        let dy = (p.float(self.y_max) - &y0) / ((self.ny.max(2) - 1) as u32);
        let dx = p.float(1) / ((self.nx.max(2) - 1) as u32);
        let mut out = Vec::with_capacity(self.len());
        for j in 0..self.ny {
            let y = Float::with_val(p.bits(), &dy * j as u32) + &y0;
            for i in 0..self.nx {
                let x = Float::with_val(p.bits(), &dx * i as u32) - 0.5f64;
                out.push(HpComplex::new(x, y.clone()));
            }
        }
        out
    }
}

/// One pass of the bootstrap: bounds implied by `y >= y_min`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BootstrapStep {
    #[serde(serialize_with = "serialize_float")]
    pub y_min: Float,
    /// `|q| <= e^{-2 pi y_min}`.
    #[serde(serialize_with = "serialize_float")]
    pub q_max: Float,
    /// `|E2 - 1| <= 24|q|/(1-|q|)^3`.
    #[serde(serialize_with = "serialize_float")]
    pub e2_max: Float,
    /// `|z - (-d/c + 6i/pi)| <= (6/pi) E/(1-E)^2`.
    #[serde(serialize_with = "serialize_float")]
    pub dist_f_max: Float,
}

/// Two-sided bounds after the last repetition.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FinalBounds {
    #[serde(serialize_with = "serialize_float")]
    pub y_min: Float,
    #[serde(serialize_with = "serialize_float")]
    pub y_max: Float,
    #[serde(serialize_with = "serialize_float")]
    pub q_max: Float,
    #[serde(serialize_with = "serialize_float")]
    pub e2_min: Float,
    #[serde(serialize_with = "serialize_float")]
    pub e2_max: Float,
    #[serde(serialize_with = "serialize_float")]
    pub dist_f_min: Float,
    #[serde(serialize_with = "serialize_float")]
    pub dist_f_max: Float,
    #[serde(serialize_with = "serialize_float")]
    pub dist_h_min: Float,
    #[serde(serialize_with = "serialize_float")]
    pub dist_h_max: Float,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BootstrapReport {
    pub steps: Vec<BootstrapStep>,
    pub bounds: FinalBounds,
    pub checks: Vec<BoundReport>,
}

impl BootstrapReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// The final bounds as 10-digit decimal strings, in a fixed order.
    pub fn constants(&self) -> Vec<(&'static str, String)> {
        let b = &self.bounds;
        let d = |x: &Float| decimal(x, BOOTSTRAP_DIGITS as u32);
        vec![
            ("y_min", d(&b.y_min)),
            ("y_max", d(&b.y_max)),
            ("q_max", d(&b.q_max)),
            ("e2_min", d(&b.e2_min)),
            ("e2_max", d(&b.e2_max)),
            ("dist_f_min", d(&b.dist_f_min)),
            ("dist_f_max", d(&b.dist_f_max)),
            ("dist_h_min", d(&b.dist_h_min)),
            ("dist_h_max", d(&b.dist_h_max)),
        ]
    }
}

/// Everything `certify` checks.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertifyReport {
    pub e2_bounds: Vec<BoundReport>,
    pub fprime: Vec<BoundReport>,
    pub imf_strip: Vec<BoundReport>,
    pub bootstrap: BootstrapReport,
}

impl CertifyReport {
    pub fn reports(&self) -> impl Iterator<Item = &BoundReport> {
        self.e2_bounds
            .iter()
            .chain(&self.fprime)
            .chain(&self.imf_strip)
            .chain(&self.bootstrap.checks)
    }

    pub fn all_pass(&self) -> bool {
        self.reports().all(|r| r.pass)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Certifier {
    map: HalfMap,
}

impl Certifier {
    pub fn new(prec: Precision) -> Self {
        Certifier {
            map: HalfMap::new(prec),
        }
    }

    pub fn precision(&self) -> Precision {
        self.map.precision()
    }

    fn f(&self, v: f64) -> Float {
        self.precision().float(v)
    }

    /// `e^{-pi sqrt 3}`, the largest `|q|` on the fundamental domain.
    pub fn q_corner(&self) -> Float {
        let p = self.precision();
        (-(p.pi() * p.float(3).sqrt())).exp()
    }

    /// `24 / (1 - e^{-pi sqrt 3})^3`.
    pub fn upper_constant(&self) -> Float {
        let one_minus = self.f(1.0) - self.q_corner();
        self.f(24.0) / (one_minus.clone() * &one_minus * &one_minus)
    }

    /// `t = 24 e^{-pi sqrt 3} / (1 - e^{-pi sqrt 3})^3`.
    pub fn t_value(&self) -> Float {
        self.upper_constant() * self.q_corner()
    }

    /// Upper, lower, and derivative bounds for `E2 - 1`.
    pub fn check_e2_bounds(&self, grid: &Grid) -> Result<Vec<BoundReport>> {
        let p = self.precision();
        let eis = *self.map.eisenstein();
        let margins: Vec<[Float; 3]> = grid
            .points(&p)
            .par_iter()
            .map(|z| -> Result<[Float; 3]> {
                let (e2, de2) = eis.e2_with_deriv(z)?;
                let q = (-(p.pi() * 2u32 * &z.im)).exp();
                let one_minus = Float::with_val(p.bits(), 1 - &q);
                let dev = e2.add_real(&p.float(-1)).abs();
                let upper = Float::with_val(p.bits(), &q * 24u32) / one_minus.clone().pow(3u32);
                let lower = Float::with_val(p.bits(), &q * LOWER_CONSTANT);
                let deriv =
                    p.pi() * 48u32 * &q * Float::with_val(p.bits(), 1 + &q) / one_minus.pow(5u32);
                Ok([upper - &dev, dev - lower, deriv - de2.abs()])
            })
            .collect::<Result<_>>()?;
        let column = |k: usize| margins.iter().map(move |m| m[k].clone());
        let upper_constant = self.upper_constant();
        Ok(vec![
            BoundReport::from_margins("|E2-1| <= 24|q|/(1-|q|)^3", column(0)),
            BoundReport::from_margins("|E2-1| > 23.48|q|", column(1)),
            BoundReport::from_margins("|E2'| <= 48 pi |q|(1+|q|)/(1-|q|)^5", column(2)),
            BoundReport::single(
                "24/(1-e^(-pi sqrt 3))^3 < 24.32",
                self.f(UPPER_CONSTANT) - &upper_constant,
            ),
            BoundReport::single(
                "24.32 e^(-pi sqrt 3) < 0.106",
                self.f(FIRST_BOUND) - self.f(UPPER_CONSTANT) * self.q_corner(),
            ),
        ])
    }

    /// `|f' - 1| < 0.57` and `Re f' > 0.4`.
    pub fn check_fprime(&self, grid: &Grid) -> Result<Vec<BoundReport>> {
        let p = self.precision();
        let margins: Vec<[Float; 2]> = grid
            .points(&p)
            .par_iter()
            .map(|z| -> Result<[Float; 2]> {
                let d = self.map.f_deriv(z)?;
                let dev = d.add_real(&p.float(-1)).abs();
                Ok([self.f(FPRIME_RADIUS) - dev, d.re - FPRIME_REAL])
            })
            .collect::<Result<_>>()?;
        let column = |k: usize| margins.iter().map(move |m| m[k].clone());
        Ok(vec![
            BoundReport::from_margins("|f'-1| < 0.57 for y >= 1", column(0)),
            BoundReport::from_margins("Re f' > 0.4 for y >= 1", column(1)),
        ])
    }

    /// `Im f < 0` on the strip `sqrt(3)/2 <= y <= 1`, with the constant `t`.
    pub fn check_imf_strip(&self, grid: &Grid) -> Result<Vec<BoundReport>> {
        let p = self.precision();
        let margins: Vec<Float> = grid
            .points(&p)
            .par_iter()
            .map(|z| Ok(-self.map.f_eval(z)?.v().clone()))
            .collect::<Result<_>>()?;
        let t = self.t_value();
        let one_plus = self.f(1.0) + &t;
        let chain = self.f(1.0)
            - self.f(6.0) * (self.f(1.0) - &t) / (p.pi() * one_plus.clone() * &one_plus);
        Ok(vec![
            BoundReport::from_margins("Im f < 0 for sqrt(3)/2 <= y <= 1", margins),
            BoundReport::single("t < 0.1054", self.f(T_BOUND) - t),
            BoundReport::single("1 - 6(1-t)/(pi(1+t)^2) < 0", -chain),
        ])
    }

    fn step(&self, y_min: Float) -> BootstrapStep {
        let p = self.precision();
        let up = |x: Float| round_decimal(&x, BOOTSTRAP_DIGITS, Round::Up);
        let q_max = up((-(p.pi() * 2u32 * &y_min)).exp());
        let one_minus = self.f(1.0) - &q_max;
        let e2_max = up(Float::with_val(p.bits(), &q_max * 24u32) / one_minus.pow(3u32));
        let one_minus_e = self.f(1.0) - &e2_max;
        let dist_f_max = up(self.f(6.0) / p.pi() * &e2_max / one_minus_e.pow(2u32));
        BootstrapStep {
            y_min,
            q_max,
            e2_max,
            dist_f_max,
        }
    }

    /// Iterates `y >= 6/pi - distF` starting from `y >= sqrt(3)/2`, rounding
    /// every constant outward to [`BOOTSTRAP_DIGITS`] significant digits.
    pub fn bootstrap_estimates(&self) -> BootstrapReport {
        let p = self.precision();
        let down = |x: Float| round_decimal(&x, BOOTSTRAP_DIGITS, Round::Down);
        let up = |x: Float| round_decimal(&x, BOOTSTRAP_DIGITS, Round::Up);
        let six_over_pi = self.f(6.0) / p.pi();

        let mut steps = vec![self.step(down(Height::SqrtThreeOverTwo.float(&p)))];
        for _ in 0..=BOOTSTRAP_REPEATS {
            let last = steps.last().expect("nonempty");
            let y = down(six_over_pi.clone() - &last.dist_f_max);
            steps.push(self.step(y));
        }
        let last = steps.last().expect("nonempty").clone();

        let y_max = up(six_over_pi.clone() + &last.dist_f_max);
        let q_min = down((-(p.pi() * 2u32 * &y_max)).exp());
        let e2_min = down(self.f(LOWER_CONSTANT) * &q_min);
        let dist_f_min = down(six_over_pi.clone() * &e2_min / (self.f(1.0) + &last.e2_max));
        let pi_over_six = p.pi() / 6u32;
        let dist_h_min = down(pi_over_six.clone() * &e2_min);
        let dist_h_max = up(pi_over_six * &last.e2_max);
        let bounds = FinalBounds {
            y_min: last.y_min.clone(),
            y_max,
            q_max: last.q_max.clone(),
            e2_min,
            e2_max: last.e2_max.clone(),
            dist_f_min,
            dist_f_max: last.dist_f_max.clone(),
            dist_h_min,
            dist_h_max,
        };

        let first = &steps[0];
        let above = |name: &str, x: &Float, c: f64| {
            BoundReport::single(name, Float::with_val(p.bits(), x - c))
        };
        let below = |name: &str, x: &Float, c: f64| {
            BoundReport::single(name, Float::with_val(p.bits(), c - x))
        };
        let checks = vec![
            below(
                "first pass: |z-(-d/c+6i/pi)| < 0.26",
                &first.dist_f_max,
                0.26,
            ),
            above("first pass: y > 1.64", &steps[1].y_min, 1.64),
            above("y >= 1.909", &bounds.y_min, 1.909),
            below("y < 1.91", &bounds.y_max, 1.91),
            below("|q| <= 6.18e-6", &bounds.q_max, 6.18e-6),
            above("|E2-1| > 0.000144", &bounds.e2_min, 0.000144),
            below("|E2-1| < 0.000149", &bounds.e2_max, 0.000149),
            above("|z-(-d/c+6i/pi)| > 0.00027", &bounds.dist_f_min, 0.00027),
            below("|z-(-d/c+6i/pi)| < 0.00029", &bounds.dist_f_max, 0.00029),
            above(
                "c^2|tau-a/c-pi i/(6c^2)| > 0.0000750",
                &bounds.dist_h_min,
                0.0000750,
            ),
            below(
                "c^2|tau-a/c-pi i/(6c^2)| < 0.0000777",
                &bounds.dist_h_max,
                0.0000777,
            ),
        ];
        BootstrapReport {
            steps,
            bounds,
            checks,
        }
    }

    pub fn run(&self, e2: &Grid, fprime: &Grid, strip: &Grid) -> Result<CertifyReport> {
        Ok(CertifyReport {
            e2_bounds: self.check_e2_bounds(e2)?,
            fprime: self.check_fprime(fprime)?,
            imf_strip: self.check_imf_strip(strip)?,
            bootstrap: self.bootstrap_estimates(),
        })
    }

    pub fn run_default(&self) -> Result<CertifyReport> {
        self.run(
            &Grid::e2_default(),
            &Grid::fprime_default(),
            &Grid::strip_default(),
        )
    }

    /// `|f'(z) - 1|` at a point, for locating where the 0.57 bound fails.
    pub fn fprime_deviation(&self, z: &HpComplex) -> Result<Float> {
        Ok(self.map.f_deriv(z)?.add_real(&self.f(-1.0)).abs())
    }

    /// `|E2(z) - 1| / |q|`.
    pub fn e2_ratio(&self, z: &HpComplex) -> Result<Float> {
        let p = self.precision();
        let e2 = self.map.eisenstein().eval(EisensteinKind::E2, z)?;
        let q = (-(p.pi() * 2u32 * &z.im)).exp();
        Ok(e2.add_real(&p.float(-1)).abs() / q)
    }
}
