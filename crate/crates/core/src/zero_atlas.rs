//! One zero of `E2` per Ford circle.
//!
//! For a cusp `a/c` let `gamma = [[a, b], [c, d]]` with `-d/c` in `(-1/2, 1/2]`.
//! Then `tau = gamma z` is a zero of `E2` exactly when `f(z) = -d/c`, so the zero
//! is `gamma F(-d/c)`. Quantities that would cancel near the real axis are
//! computed from `z`: `c^2 (tau - a/c) = -c / (cz + d)`.

use rayon::prelude::*;
use rug::Float;
use serde::{Deserialize, Serialize};

use crate::eisenstein::EisensteinKind;
use crate::error::{Error, Result};
use crate::halfmap::HalfMap;
use crate::hp::{decimal, HpComplex, Precision};
use crate::report::BoundReport;

/// Window for `|z - (-d/c + 6i/pi)|`.
pub const DIST_F_BOUNDS: (f64, f64) = (0.00027, 0.00029);

/// Window for `c^2 |tau - a/c - pi i / (6 c^2)|`.
pub const DIST_H_BOUNDS: (f64, f64) = (0.000075, 0.0000777);

/// Digits given up between the requested accuracy and the residual check.
pub const RESIDUAL_SLACK: u32 = 10;

/// Default largest denominator of the atlas.
pub const DEFAULT_CMAX: i64 = 50;

/// A reduced fraction `a/c` with `c > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cusp {
    a: i64,
    c: i64,
}

impl Cusp {
    pub fn new(a: i64, c: i64) -> Result<Self> {
        let reason = if c <= 0 {
            Some("denominator must be positive")
        } else if gcd(a, c) != 1 {
            Some("numerator and denominator are not coprime")
        } else {
            None
        };
        match reason {
            Some(reason) => Err(Error::InvalidCusp { a, c, reason }),
            None => Ok(Cusp { a, c }),
        }
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn c(&self) -> i64 {
        self.c
    }

    pub fn ford_circle(&self) -> FordCircle {
        FordCircle { cusp: *self }
    }
}

/// The circle with center `a/c + i/(2c^2)` and radius `1/(2c^2)`, tangent to the
/// real axis at `a/c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FordCircle {
    cusp: Cusp,
}

impl FordCircle {
    pub fn center(&self, p: &Precision) -> HpComplex {
        let c2 = p.float(self.cusp.c * self.cusp.c);
        HpComplex::new(
            p.float(self.cusp.a) / p.float(self.cusp.c),
            p.float(1) / (c2 * 2u32),
        )
    }

    pub fn radius(&self, p: &Precision) -> Float {
        p.float(1) / (p.float(self.cusp.c * self.cusp.c) * 2u32)
    }

    /// Signed distance of `tau` inside the circle (positive inside).
    pub fn depth(&self, tau: &HpComplex, p: &Precision) -> Float {
        self.radius(p) - (tau - &self.center(p)).abs()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct UnimodularMatrix {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl UnimodularMatrix {
    pub fn det(&self) -> i128 {
        i128::from(self.a) * i128::from(self.d) - i128::from(self.b) * i128::from(self.c)
    }

    /// `cz + d`.
    pub fn denominator(&self, z: &HpComplex) -> HpComplex {
        let bits = z.prec();
        z.scale(&Float::with_val(bits, self.c))
            .add_real(&Float::with_val(bits, self.d))
    }

    /// `(az + b) / (cz + d)`.
    pub fn apply(&self, z: &HpComplex) -> HpComplex {
        let bits = z.prec();
        let num = z
            .scale(&Float::with_val(bits, self.a))
            .add_real(&Float::with_val(bits, self.b));
        &num / &self.denominator(z)
    }
}

/// The matrix attached to a cusp: `d` is the inverse of `a` modulo `c` taken in
/// `[-c/2, c/2)`, and `b = (ad - 1)/c`.
pub fn cusp_matrix(cusp: &Cusp) -> UnimodularMatrix {
    let (a, c) = (cusp.a, cusp.c);
    let (_, x, _) = extended_gcd(a.rem_euclid(c), c);
    let mut d = x.rem_euclid(c);
    if 2 * d >= c {
        d -= c;
    }
    let b = (i128::from(a) * i128::from(d) - 1) / i128::from(c);
    let m = UnimodularMatrix {
        a,
        b: i64::try_from(b).expect("b fits in i64"),
        c,
        d,
    };
    debug_assert_eq!(m.det(), 1);
    m
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Returns `(g, x, y)` with `ax + by = g`.
fn extended_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = extended_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

/// All reduced `a/c` with `1 <= c <= cmax` and `0 <= a < c`, ordered by `c` then `a`.
pub fn enumerate_cusps(cmax: i64) -> Vec<Cusp> {
    (1..=cmax)
        .flat_map(|c| {
            (0..c)
                .filter(move |&a| gcd(a, c) == 1)
                .map(move |a| Cusp { a, c })
        })
        .collect()
}

/// The zero of `E2` inside the Ford circle of a cusp.
#[derive(Clone, Debug, PartialEq)]
pub struct ZeroRecord {
    pub cusp: Cusp,
    pub matrix: UnimodularMatrix,
    /// Preimage `F(-d/c)` in the fundamental domain strip.
    pub z: HpComplex,
    pub tau: HpComplex,
    /// `|E2(tau)|`, computed through the transformation law.
    pub residual: Float,
    pub dist_f: Float,
    pub dist_h_scaled: Float,
    pub in_ford: bool,
    pub bounds_ok: bool,
}

/// Flat, string-valued form of a [`ZeroRecord`] used for JSON and CSV.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroRow {
    pub a: i64,
    pub c: i64,
    pub b: i64,
    pub d: i64,
    pub z_re: String,
    pub z_im: String,
    pub tau_re: String,
    pub tau_im: String,
    pub residual: String,
    #[serde(rename = "distF")]
    pub dist_f: String,
    #[serde(rename = "distH_scaled")]
    pub dist_h_scaled: String,
    pub in_ford: bool,
    pub bounds_ok: bool,
}

impl ZeroRecord {
    pub fn to_row(&self, digits: u32) -> ZeroRow {
        ZeroRow {
            a: self.matrix.a,
            c: self.matrix.c,
            b: self.matrix.b,
            d: self.matrix.d,
            z_re: decimal(&self.z.re, digits),
            z_im: decimal(&self.z.im, digits),
            tau_re: decimal(&self.tau.re, digits),
            tau_im: decimal(&self.tau.im, digits),
            residual: decimal(&self.residual, digits),
            dist_f: decimal(&self.dist_f, digits),
            dist_h_scaled: decimal(&self.dist_h_scaled, digits),
            in_ford: self.in_ford,
            bounds_ok: self.bounds_ok,
        }
    }

    pub fn from_row(row: &ZeroRow, p: &Precision) -> Result<Self> {
        let cusp = Cusp::new(row.a, row.c)?;
        let matrix = UnimodularMatrix {
            a: row.a,
            b: row.b,
            c: row.c,
            d: row.d,
        };
        if matrix.det() != 1 {
            return Err(Error::Parse(format!(
                "matrix for {}/{} is not unimodular",
                row.a, row.c
            )));
        }
        Ok(ZeroRecord {
            cusp,
            matrix,
            z: HpComplex::parse(p, &row.z_re, &row.z_im)?,
            tau: HpComplex::parse(p, &row.tau_re, &row.tau_im)?,
            residual: p.parse(&row.residual)?,
            dist_f: p.parse(&row.dist_f)?,
            dist_h_scaled: p.parse(&row.dist_h_scaled)?,
            in_ford: row.in_ford,
            bounds_ok: row.bounds_ok,
        })
    }
}

/// Locates and checks the zeros attached to cusps.
#[derive(Clone, Copy, Debug)]
pub struct ZeroAtlas {
    map: HalfMap,
}

impl ZeroAtlas {
    pub fn new(prec: Precision) -> Self {
        ZeroAtlas {
            map: HalfMap::new(prec),
        }
    }

    pub fn precision(&self) -> Precision {
        self.map.precision()
    }

    pub fn halfmap(&self) -> &HalfMap {
        &self.map
    }

    /// Largest residual `|E2(tau)|` accepted.
    pub fn residual_tolerance(&self) -> Float {
        let digits = self.precision().digits().saturating_sub(RESIDUAL_SLACK);
        self.precision().pow10(-(digits as i32))
    }

    /// `-d/c` as a point on the real axis.
    fn target(&self, m: &UnimodularMatrix) -> HpComplex {
        let p = self.precision();
        HpComplex::real(p.float(-m.d) / p.float(m.c))
    }

    pub fn locate_zero(&self, cusp: &Cusp) -> Result<ZeroRecord> {
        let m = cusp_matrix(cusp);
        let z = self.map.f_inverse(&self.target(&m))?;
        self.record(cusp, m, z)
    }

    /// Solves `f(z) = -d/c` by Newton from an arbitrary start `z`.
    pub fn locate_from(&self, cusp: &Cusp, start: &HpComplex) -> Result<ZeroRecord> {
        let m = cusp_matrix(cusp);
        let z = self.map.solve(&self.target(&m), start)?;
        self.record(cusp, m, z)
    }

    fn record(&self, cusp: &Cusp, m: UnimodularMatrix, z: HpComplex) -> Result<ZeroRecord> {
        let p = self.precision();
        let e2 = self.map.eisenstein().eval(EisensteinKind::E2, &z)?;
        let czd = m.denominator(&z);
        let c = p.float(m.c);

        // E2(tau) = (cz+d) ((cz+d) E2(z) + 6c / (pi i))
        let six_c_over_pi_i = HpComplex::imag(-(c.clone() * 6u32) / p.pi());
        let residual = (&czd * &(&(&czd * &e2) + &six_c_over_pi_i)).abs();

        // c^2 (tau - a/c) = -c / (cz + d)
        let scaled = -(&HpComplex::real(c.clone()) / &czd);
        let a_over_c = p.float(m.a) / c.clone();
        let tau = scaled
            .scale(&(p.float(1) / (c.clone() * &c)))
            .add_real(&a_over_c);

        let shift = self.map.six_i_over_pi().add_real(&(p.float(-m.d) / c));
        let dist_f = (&z - &shift).abs();
        let dist_h_scaled = (&scaled - &HpComplex::imag(p.pi() / 6u32)).abs();
        let half = p.float(0.5);
        let in_ford = (&scaled - &HpComplex::imag(half.clone())).abs() < half;

        let mut rec = ZeroRecord {
            cusp: *cusp,
            matrix: m,
            z,
            tau,
            residual,
            dist_f,
            dist_h_scaled,
            in_ford,
            bounds_ok: false,
        };
        rec.bounds_ok = self.verify_annulus(&rec).iter().all(|r| r.pass);
        Ok(rec)
    }

    /// Checks the residual, both annulus windows, and Ford circle membership.
    pub fn verify_annulus(&self, rec: &ZeroRecord) -> Vec<BoundReport> {
        let p = self.precision();
        let lo = |x: &Float, b: f64| Float::with_val(p.bits(), x - b);
        let hi = |x: &Float, b: f64| Float::with_val(p.bits(), b - x);
        let czd = rec.matrix.denominator(&rec.z);
        let scaled = -(&HpComplex::real(p.float(rec.matrix.c)) / &czd);
        let half = p.float(0.5);
        let ford = half.clone() - (&scaled - &HpComplex::imag(half)).abs();
        vec![
            BoundReport::single("residual", self.residual_tolerance() - &rec.residual),
            BoundReport::single("distF lower", lo(&rec.dist_f, DIST_F_BOUNDS.0)),
            BoundReport::single("distF upper", hi(&rec.dist_f, DIST_F_BOUNDS.1)),
            BoundReport::single("distH lower", lo(&rec.dist_h_scaled, DIST_H_BOUNDS.0)),
            BoundReport::single("distH upper", hi(&rec.dist_h_scaled, DIST_H_BOUNDS.1)),
            BoundReport::single("inside Ford circle", ford),
        ]
    }

    /// `E2'(tau)` through the derivative of the transformation law:
    /// `E2'(tau) = (cz+d)^2 (2c(cz+d) E2(z) + (cz+d)^2 E2'(z) + 6c^2/(pi i))`.
    pub fn e2_prime_at_zero(&self, rec: &ZeroRecord) -> Result<HpComplex> {
        let p = self.precision();
        let (e2, de2) = self.map.eisenstein().e2_with_deriv(&rec.z)?;
        let czd = rec.matrix.denominator(&rec.z);
        let c = p.float(rec.matrix.c);
        let sq = &czd * &czd;
        let term = HpComplex::imag(-(c.clone() * &c * 6u32) / p.pi());
        let inner = &(&(&czd * &e2).scale(&(c * 2u32)) + &(&sq * &de2)) + &term;
        Ok(&sq * &inner)
    }

    /// All zeros with denominator up to `cmax`, in [`enumerate_cusps`] order.
    pub fn sweep(&self, cmax: i64) -> Result<Vec<ZeroRecord>> {
        enumerate_cusps(cmax)
            .par_iter()
            .map(|cusp| self.locate_zero(cusp))
            .collect()
    }
}

/// Number of reduced fractions in `[0, 1)` with denominator at most `cmax`.
pub fn cusp_count(cmax: i64) -> usize {
    (1..=cmax).map(|c| totient(c) as usize).sum()
}

fn totient(n: i64) -> i64 {
    let mut n = n;
    let mut out = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            out -= out / p;
        }
        p += 1;
    }
    if n > 1 {
        out -= out / n;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const TAU0: &str = "0.52352170001799926680053440480610976968";
    const TAU_HALF: &str = "0.13091903039676244690411482601971302060";

    fn atlas() -> ZeroAtlas {
        ZeroAtlas::new(Precision::new(60))
    }

    fn matrix(a: i64, b: i64, c: i64, d: i64) -> UnimodularMatrix {
        UnimodularMatrix { a, b, c, d }
    }

    #[test]
    fn cusp_matrix_examples() {
        let m = |a, c| cusp_matrix(&Cusp::new(a, c).unwrap());
        assert_eq!(m(0, 1), matrix(0, -1, 1, 0));
        assert_eq!(m(1, 2), matrix(1, -1, 2, -1));
        assert_eq!(m(2, 5), matrix(2, -1, 5, -2));
        assert_eq!(m(-3, 7).det(), 1);
    }

    #[test]
    fn cusp_matrix_conventions_hold_everywhere() {
        for cusp in enumerate_cusps(60) {
            let m = cusp_matrix(&cusp);
            assert_eq!(m.det(), 1);
            assert_eq!((m.a, m.c), (cusp.a(), cusp.c()));
            // -d/c in (-1/2, 1/2]
            assert!(-2 * m.d > -m.c && -2 * m.d <= m.c, "{m:?}");
        }
    }

    #[test]
    fn invalid_cusps_are_rejected() {
        assert!(matches!(
            Cusp::new(2, 4),
            Err(Error::InvalidCusp { a: 2, c: 4, .. })
        ));
        assert!(matches!(Cusp::new(1, 0), Err(Error::InvalidCusp { .. })));
        assert!(matches!(Cusp::new(1, -3), Err(Error::InvalidCusp { .. })));
        assert!(Cusp::new(-1, 3).is_ok());
    }

    #[test]
    fn enumeration_order_and_count() {
        let pairs = |n| {
            enumerate_cusps(n)
                .iter()
                .map(|c| (c.a(), c.c()))
                .collect::<Vec<_>>()
        };
        assert_eq!(pairs(2), vec![(0, 1), (1, 2)]);
        assert_eq!(pairs(3), vec![(0, 1), (1, 2), (1, 3), (2, 3)]);
        let brute: usize = (1..=50i64)
            .map(|c| (0..c).filter(|&a| num_gcd(a, c) == 1).count())
            .sum();
        assert_eq!(enumerate_cusps(50).len(), brute);
        assert_eq!(cusp_count(50), brute);
    }

    fn num_gcd(a: i64, b: i64) -> i64 {
        if b == 0 {
            a
        } else {
            num_gcd(b, a % b)
        }
    }

    #[test]
    fn anchor_zeros() {
        let at = atlas();
        let p = at.precision();
        let r = at.locate_zero(&Cusp::new(0, 1).unwrap()).unwrap();
        let expect = HpComplex::parse(&p, "0", TAU0).unwrap();
        assert!((&r.tau - &expect).abs() < p.pow10(-33));
        assert!(r.bounds_ok);
        let r = at.locate_zero(&Cusp::new(1, 2).unwrap()).unwrap();
        let expect = HpComplex::parse(&p, "0.5", TAU_HALF).unwrap();
        assert!((&r.tau - &expect).abs() < p.pow10(-33));
        assert!(r.bounds_ok);
    }

    #[test]
    fn annulus_examples() {
        let at = atlas();
        let r = at.locate_zero(&Cusp::new(0, 1).unwrap()).unwrap();
        assert!((r.dist_f.to_f64() - 0.000_281_18).abs() < 1e-8);
        // |tau0 - pi i / 6| from the decimal digits of tau0
        assert!((r.dist_h_scaled.to_f64() - 0.000_077_075_6).abs() < 1e-10);
        let r = at.locate_zero(&Cusp::new(1, 2).unwrap()).unwrap();
        let oracle = 4.0 * (0.130_919_030_396_762_45 - std::f64::consts::PI / 24.0);
        assert!((r.dist_h_scaled.to_f64() - oracle).abs() < 1e-12);
        for rep in at.verify_annulus(&r) {
            assert!(rep.pass, "{rep}");
        }
    }

    #[test]
    fn tau_matches_mobius_action_and_ford_circle() {
        let at = atlas();
        let p = at.precision();
        for (a, c) in [(1, 3), (3, 7), (5, 12)] {
            let r = at.locate_zero(&Cusp::new(a, c).unwrap()).unwrap();
            assert!((&r.matrix.apply(&r.z) - &r.tau).abs() < p.pow10(-55));
            assert!(r.in_ford);
            assert!(r.cusp.ford_circle().depth(&r.tau, &p).is_sign_positive());
        }
    }

    #[test]
    fn residual_agrees_with_direct_summation() {
        let at = atlas();
        let p = at.precision();
        for (a, c) in [(0, 1), (1, 2), (1, 3)] {
            let r = at.locate_zero(&Cusp::new(a, c).unwrap()).unwrap();
            let direct = at
                .halfmap()
                .eisenstein()
                .eval(EisensteinKind::E2, &r.tau)
                .unwrap();
            assert!(direct.abs() < p.pow10(-50));
            assert!(r.residual <= at.residual_tolerance());
        }
    }

    #[test]
    fn independent_newton_on_transformed_residual() {
        // R(z) = (cz+d) E2(z) + 6c/(pi i) vanishes exactly at the preimage of a zero
        let at = atlas();
        let p = at.precision();
        let eis = at.halfmap().eisenstein();
        for (a, c) in [(1, 3), (2, 7)] {
            let cusp = Cusp::new(a, c).unwrap();
            let m = cusp_matrix(&cusp);
            let cc = p.float(c);
            let k = HpComplex::imag(-(cc.clone() * 6u32) / p.pi());
            let mut z = at
                .halfmap()
                .six_i_over_pi()
                .add_real(&(p.float(-m.d) / cc.clone()))
                .add_imag(&p.float(0.01));
            for _ in 0..40 {
                let (e2, de2) = eis.e2_with_deriv(&z).unwrap();
                let czd = m.denominator(&z);
                let r = &(&czd * &e2) + &k;
                let dr = &e2.scale(&cc) + &(&czd * &de2);
                z = &z - &(&r / &dr);
            }
            let rec = at.locate_zero(&cusp).unwrap();
            assert!((&rec.z - &z).abs() < p.pow10(-55));
            let lo = DIST_H_BOUNDS.0;
            let hi = DIST_H_BOUNDS.1;
            let d = rec.dist_h_scaled.to_f64();
            assert!(d > lo && d < hi);
        }
    }

    #[test]
    fn zero_in_ford_circle_is_unique_from_many_starts() {
        let at = atlas();
        let p = at.precision();
        let cusp = Cusp::new(0, 1).unwrap();
        let base = at.locate_zero(&cusp).unwrap();
        let tol = at.residual_tolerance();
        let gamma = cusp_matrix(&cusp);
        // start points tau inside the circle |tau - i/2| < 1/2, pulled back by z = -1/tau
        for (r, t) in [(0.1, 0.0), (0.3, 1.0), (0.45, 2.5), (0.2, 4.0), (0.4, 5.5)] {
            let tau = HpComplex::from_f64(&p, 0.5 * r * f64::cos(t), 0.5 + 0.5 * r * f64::sin(t));
            let z = -(&HpComplex::one(&p) / &tau);
            assert!((&gamma.apply(&z) - &tau).abs() < p.pow10(-50));
            let rec = at.locate_from(&cusp, &z).unwrap();
            assert!((&rec.tau - &base.tau).abs() < tol);
        }
    }

    #[test]
    fn zeros_are_simple() {
        let at = atlas();
        for cusp in enumerate_cusps(6) {
            let r = at.locate_zero(&cusp).unwrap();
            let d = at.e2_prime_at_zero(&r).unwrap();
            assert!(d.abs() > 0.1, "{cusp:?}");
        }
        // oracle at tau0 with direct differentiation
        let r = at.locate_zero(&Cusp::new(0, 1).unwrap()).unwrap();
        let direct = at.halfmap().eisenstein().eval_e2_deriv(&r.tau).unwrap();
        let chain = at.e2_prime_at_zero(&r).unwrap();
        assert!((&direct - &chain).abs() < at.precision().pow10(-50));
    }

    #[test]
    fn translation_by_c_shifts_tau_by_one() {
        let at = atlas();
        let p = at.precision();
        for (a, c) in [(1, 3), (2, 5), (-1, 4)] {
            let r = at.locate_zero(&Cusp::new(a, c).unwrap()).unwrap();
            let s = at.locate_zero(&Cusp::new(a + c, c).unwrap()).unwrap();
            assert_eq!((s.matrix.c, s.matrix.d), (r.matrix.c, r.matrix.d));
            assert!((&s.tau - &r.tau.add_real(&p.float(1))).abs() < p.pow10(-55));
        }
    }

    #[test]
    fn rows_round_trip_through_json() {
        let at = atlas();
        let p = at.precision();
        let r = at.locate_zero(&Cusp::new(3, 8).unwrap()).unwrap();
        let row = r.to_row(p.working_digits());
        let json = serde_json::to_string(&row).unwrap();
        for key in [
            "\"distF\"",
            "\"distH_scaled\"",
            "\"tau_im\"",
            "\"bounds_ok\"",
        ] {
            assert!(json.contains(key), "{key}");
        }
        let back: ZeroRow = serde_json::from_str(&json).unwrap();
        assert_eq!(back, row);
        let rec = ZeroRecord::from_row(&back, &p).unwrap();
        assert!((&rec.tau - &r.tau).abs() < p.pow10(-70));
        assert_eq!(rec.to_row(p.working_digits()), row);
    }

    #[test]
    fn sweep_is_ordered_and_all_bounds_hold() {
        let at = ZeroAtlas::new(Precision::new(40));
        let recs = at.sweep(12).unwrap();
        let cusps: Vec<Cusp> = recs.iter().map(|r| r.cusp).collect();
        assert_eq!(cusps, enumerate_cusps(12));
        assert!(recs.iter().all(|r| r.bounds_ok && r.in_ford));
    }
}
