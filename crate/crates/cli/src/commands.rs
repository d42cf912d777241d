use std::fs;
use std::io::Write;
use std::path::PathBuf;

use rug::Float;
use serde::Serialize;

use e2zeros::certify::{Certifier, CertifyReport};
use e2zeros::expansions::{
    compute_htilde, first_non_integer, fourier_from_series, fourier_numeric, sign_report,
    slope_check, taylor_numeric, taylor_symbolic, FourierRow, SignRow, TaylorRow, TermRow,
    MAX_SYMBOLIC_TAYLOR,
};
use e2zeros::halfmap::HalfMap;
use e2zeros::hp::{agreeing_digits, decimal};
use e2zeros::reference;
use e2zeros::zero_atlas::{enumerate_cusps, Cusp, ZeroAtlas, ZeroRow, DIST_F_BOUNDS};
use e2zeros::HpComplex;

use crate::svg::Canvas;
use crate::{CliError, Format, PlotKind, RunConfig};

type CmdResult = Result<bool, CliError>;

/// Taylor coefficients reported by `expansions`: `b_0 .. b_9`.
const TAYLOR_ORDER: usize = 9;

/// Degree of the Taylor polynomial in the `taylorfit` plot.
const TAYLOR_PLOT_DEGREE: usize = 8;

fn output_path(cfg: &RunConfig, name: &str) -> Result<PathBuf, CliError> {
    fs::create_dir_all(&cfg.out)?;
    Ok(cfg.out.join(name))
}

fn write_rows<W: Write>(w: W, rows: &[ZeroRow], format: Format) -> Result<(), CliError> {
    match format {
        Format::Json => serde_json::to_writer_pretty(w, rows)?,
        Format::Csv => {
            let mut out = csv::Writer::from_writer(w);
            for row in rows {
                out.serialize(row)?;
            }
            out.flush()?;
        }
    }
    Ok(())
}

pub fn zero(cfg: &RunConfig, a: i64, c: i64) -> CmdResult {
    let cusp = Cusp::new(a, c)?;
    let atlas = ZeroAtlas::new(cfg.precision());
    let rec = atlas.locate_zero(&cusp)?;
    let row = rec.to_row(cfg.digits);
    let stdout = std::io::stdout();
    match cfg.format {
        Format::Json => {
            serde_json::to_writer_pretty(stdout.lock(), &row)?;
            println!();
        }
        Format::Csv => write_rows(stdout.lock(), std::slice::from_ref(&row), Format::Csv)?,
    }
    for report in atlas.verify_annulus(&rec).iter().filter(|r| !r.pass) {
        eprintln!("{report}");
    }
    Ok(rec.bounds_ok)
}

pub fn atlas(cfg: &RunConfig) -> CmdResult {
    let atlas = ZeroAtlas::new(cfg.precision());
    let records = atlas.sweep(cfg.cmax)?;
    let rows: Vec<ZeroRow> = records.iter().map(|r| r.to_row(cfg.digits)).collect();
    let name = match cfg.format {
        Format::Json => "atlas.json",
        Format::Csv => "atlas.csv",
    };
    let path = output_path(cfg, name)?;
    write_rows(fs::File::create(&path)?, &rows, cfg.format)?;

    let min_max = |get: fn(&e2zeros::zero_atlas::ZeroRecord) -> &Float| {
        let mut it = records.iter().map(get);
        let first = it.next().expect("at least one record").clone();
        it.fold((first.clone(), first), |(lo, hi), x| {
            (
                if *x < lo { x.clone() } else { lo },
                if *x > hi { x.clone() } else { hi },
            )
        })
    };
    let (h_lo, h_hi) = min_max(|r| &r.dist_h_scaled);
    let (f_lo, f_hi) = min_max(|r| &r.dist_f);
    println!("records {} (c <= {})", records.len(), cfg.cmax);
    println!(
        "distH_scaled min {} max {}",
        decimal(&h_lo, 12),
        decimal(&h_hi, 12)
    );
    println!(
        "distF min {} max {}",
        decimal(&f_lo, 12),
        decimal(&f_hi, 12)
    );
    let failing: Vec<String> = records
        .iter()
        .filter(|r| !r.bounds_ok)
        .map(|r| format!("{}/{}", r.cusp.a(), r.cusp.c()))
        .collect();
    println!("wrote {}", path.display());
    if failing.is_empty() {
        println!("all bounds ok");
        Ok(true)
    } else {
        eprintln!("bounds failed for {}", failing.join(", "));
        Ok(false)
    }
}

#[derive(Serialize)]
struct PolynomialDoc {
    n: usize,
    weight: Option<i32>,
    polynomial: bool,
    text: String,
    terms: Vec<TermRow>,
}

#[derive(Serialize)]
struct AgreementRow {
    table: &'static str,
    n: usize,
    digits: String,
}

#[derive(Serialize)]
struct SignDoc {
    rows: Vec<SignRow>,
    b1_inverse_slope: String,
    b1_fourier_leading: String,
    b1_fourier_sum: String,
    discrepancy: bool,
    note: String,
}

#[derive(Serialize)]
struct ExpansionsDoc {
    digits: u32,
    htilde: Vec<String>,
    first_non_integer: Option<usize>,
    fourier_series: Vec<FourierRow>,
    fourier_numeric: Vec<FourierRow>,
    fourier_route_gap: String,
    fourier_real_part_max: String,
    taylor_numeric: Vec<TaylorRow>,
    taylor_symbolic: Vec<TaylorRow>,
    taylor_route_gap: String,
    polynomials: Vec<PolynomialDoc>,
    tabulated_agreement: Vec<AgreementRow>,
    sign_report: SignDoc,
    ok: bool,
}

fn max_gap<'a>(pairs: impl Iterator<Item = (&'a HpComplex, &'a HpComplex)>, bits: u32) -> Float {
    pairs.fold(Float::new(bits), |m, (a, b)| m.max(&(a - b).abs()))
}

pub fn expansions(cfg: &RunConfig) -> CmdResult {
    let p = cfg.precision();
    let map = HalfMap::new(p);
    let digits = cfg.digits;

    let htilde = compute_htilde(cfg.series_order)?;
    let nmax = cfg.fourier_nmax.min(cfg.series_order);
    let exact = fourier_from_series(&p, &htilde, nmax)?;
    let numeric = fourier_numeric(&map, nmax, cfg.nodes)?;
    let fourier_gap = max_gap(exact.c.iter().zip(&numeric.c), p.bits());
    let real_max = numeric
        .c
        .iter()
        .fold(Float::new(p.bits()), |m, c| m.max(&c.re.clone().abs()));

    let num_taylor = taylor_numeric(&map, TAYLOR_ORDER)?;
    let symbolic = taylor_symbolic(MAX_SYMBOLIC_TAYLOR)?;
    let sym_taylor = symbolic.evaluate(&map)?;
    let taylor_gap = max_gap(sym_taylor.b.iter().zip(&num_taylor.b), p.bits());

    let polynomials: Vec<PolynomialDoc> = (1..=symbolic.order())
        .map(|n| PolynomialDoc {
            n,
            weight: symbolic.a(n).homogeneous_weight(),
            polynomial: symbolic.a(n).is_polynomial(),
            text: symbolic.a(n).to_string(),
            terms: symbolic.term_list(n),
        })
        .collect();
    let shape_ok = polynomials
        .iter()
        .all(|d| d.polynomial && d.weight == Some(10 * d.n as i32 - 6));

    let mut agreement = Vec::new();
    for (n, s) in reference::C.iter().enumerate().take(nmax + 1) {
        let d = agreeing_digits(&numeric.c[n].im, &p.parse(s)?);
        agreement.push(AgreementRow {
            table: "c",
            n,
            digits: format!("{d:.1}"),
        });
    }
    for (n, s) in reference::B.iter().enumerate() {
        let d = agreeing_digits(&num_taylor.component(n).clone().abs(), &p.parse(s)?.abs());
        agreement.push(AgreementRow {
            table: "|b|",
            n,
            digits: format!("{d:.1}"),
        });
    }

    let signs = sign_report(&num_taylor);
    let slope = slope_check(&map, &exact)?;
    let disagree: Vec<String> = signs
        .iter()
        .filter(|r| !r.agrees)
        .map(|r| r.n.to_string())
        .collect();
    let note = format!(
        "b_1 = F'(0) is positive: Z^2/X = {} and 1 + 2 pi i c_1 = {}; the tabulated b_1 is negative. \
         Computed and tabulated signs differ for n = {}.",
        decimal(&slope.inverse_slope.re, 12),
        decimal(&slope.fourier_leading.re, 12),
        disagree.join(", ")
    );

    let fourier_ok =
        fourier_gap <= p.pow10(-(digits as i32 - 12)) && real_max <= p.pow10(-(digits as i32 - 10));
    let taylor_ok = taylor_gap <= p.pow10(-(digits as i32 - 15));
    let ok = fourier_ok && taylor_ok && shape_ok;

    let doc = ExpansionsDoc {
        digits,
        htilde: htilde.coeffs().iter().map(|h| h.to_string()).collect(),
        first_non_integer: first_non_integer(&htilde),
        fourier_series: exact.rows(digits),
        fourier_numeric: numeric.rows(digits),
        fourier_route_gap: decimal(&fourier_gap, 6),
        fourier_real_part_max: decimal(&real_max, 6),
        taylor_numeric: num_taylor.rows(digits),
        taylor_symbolic: sym_taylor.rows(digits),
        taylor_route_gap: decimal(&taylor_gap, 6),
        polynomials,
        tabulated_agreement: agreement,
        sign_report: SignDoc {
            rows: signs,
            b1_inverse_slope: decimal(&slope.inverse_slope.re, digits),
            b1_fourier_leading: decimal(&slope.fourier_leading.re, digits),
            b1_fourier_sum: decimal(&slope.fourier_sum.re, digits),
            discrepancy: !disagree.is_empty(),
            note: note.clone(),
        },
        ok,
    };
    let path = output_path(cfg, "expansions.json")?;
    serde_json::to_writer_pretty(fs::File::create(&path)?, &doc)?;

    let head: Vec<String> = doc.htilde.iter().take(5).cloned().collect();
    println!("H~ = {} + ...", head.join(", "));
    if let Some(n) = doc.first_non_integer {
        println!("first non-integral coefficient: h_{n} = {}", doc.htilde[n]);
    }
    println!("Fourier routes differ by at most {}", doc.fourier_route_gap);
    println!("Taylor routes differ by at most {}", doc.taylor_route_gap);
    println!("sign discrepancy: {note}");
    println!("wrote {}", path.display());
    if !ok {
        eprintln!(
            "route disagreement: fourier ok {fourier_ok}, taylor ok {taylor_ok}, polynomial shape ok {shape_ok}"
        );
    }
    Ok(ok)
}

#[derive(Serialize)]
struct CertifyDoc<'a> {
    digits: u32,
    t: String,
    upper_constant: String,
    all_pass: bool,
    report: &'a CertifyReport,
}

pub fn certify(cfg: &RunConfig) -> CmdResult {
    let c = Certifier::new(cfg.precision());
    let report = c.run_default()?;
    let t = c.t_value();
    for r in report.reports() {
        println!("{r}");
    }
    println!("t = {}", decimal(&t, 12));
    println!(
        "24/(1-e^(-pi sqrt 3))^3 = {}",
        decimal(&c.upper_constant(), 12)
    );
    for (name, value) in report.bootstrap.constants() {
        println!("bootstrap {name} = {value}");
    }
    let doc = CertifyDoc {
        digits: cfg.digits,
        t: decimal(&t, cfg.digits),
        upper_constant: decimal(&c.upper_constant(), cfg.digits),
        all_pass: report.all_pass(),
        report: &report,
    };
    let path = output_path(cfg, "certify.json")?;
    serde_json::to_writer_pretty(fs::File::create(&path)?, &doc)?;
    println!("wrote {}", path.display());
    Ok(report.all_pass())
}

const STYLE: &str = ".ford{fill:none;stroke:#9ab;stroke-width:0.6}\
.zero{fill:#c22}\
.bound{fill:none;stroke:#888;stroke-dasharray:4 3}\
.curve{fill:none;stroke:#246;stroke-width:1.2}\
.taylor{fill:none;stroke:#c62;stroke-width:1.2}\
.sample{fill:#246}\
.axis{stroke:#000;stroke-width:0.8}\
text{font:14px sans-serif}";

/// `d/100` in `[-1/2, 1/2]` with `gcd(d, 100) = 1`.
fn hundredths() -> Vec<i64> {
    (-50..=50)
        .filter(|d: &i64| d % 2 != 0 && d % 5 != 0)
        .collect()
}

fn plot_zeros(cfg: &RunConfig) -> Result<String, CliError> {
    let atlas = ZeroAtlas::new(cfg.precision());
    let records = atlas.sweep(cfg.cmax)?;
    let mut canvas = Canvas::new(-0.6, 1.1, 0.0, 1.1, 1700.0);
    canvas.line((-0.6, 0.0), (1.1, 0.0), "axis");
    for cusp in enumerate_cusps(cfg.cmax) {
        let r = 0.5 / (cusp.c() * cusp.c()) as f64;
        canvas.circle(cusp.a() as f64 / cusp.c() as f64, r, r, "ford");
    }
    for rec in &records {
        canvas.marker(rec.tau.re.to_f64(), rec.tau.im.to_f64(), 2.0, "zero");
    }
    canvas.text(-0.55, 1.05, &format!("zeros of E2 with c <= {}", cfg.cmax));
    Ok(canvas.finish("zeros of E2", STYLE))
}

/// Window around `6i/pi` used by the H plots.
const H_HALF_WIDTH: f64 = 0.00034;

fn h_point(h: &HpComplex, center: &Float) -> (f64, f64) {
    (
        h.re.to_f64(),
        Float::with_val(h.im.prec(), &h.im - center).to_f64(),
    )
}

fn bound_circles(canvas: &mut Canvas) {
    canvas.circle(0.0, 0.0, DIST_F_BOUNDS.0, "bound");
    canvas.circle(0.0, 0.0, DIST_F_BOUNDS.1, "bound");
}

fn plot_hloop(cfg: &RunConfig) -> Result<String, CliError> {
    let p = cfg.precision();
    let map = HalfMap::new(p);
    let center = map.six_i_over_pi().im;
    let w = H_HALF_WIDTH;
    let mut canvas = Canvas::new(-w, w, -w, w, 800.0);
    bound_circles(&mut canvas);
    let curve: Vec<(f64, f64)> = (0..=400)
        .map(|i| {
            let x = p.float(i - 200) / 400u32;
            Ok(h_point(&map.h_eval(&x)?, &center))
        })
        .collect::<Result<_, CliError>>()?;
    canvas.polyline(&curve, "curve");
    for d in hundredths() {
        let h = map.h_eval(&(p.float(d) / 100u32))?;
        let (x, y) = h_point(&h, &center);
        canvas.marker(x, y, 2.5, "sample");
    }
    canvas.text(-0.95 * w, 0.9 * w, "H(x) - 6i/pi, x = d/100");
    Ok(canvas.finish("H loop", STYLE))
}

fn plot_taylorfit(cfg: &RunConfig) -> Result<String, CliError> {
    let p = cfg.precision();
    let map = HalfMap::new(p);
    let center = map.six_i_over_pi().im;
    let taylor = taylor_numeric(&map, TAYLOR_PLOT_DEGREE)?;
    let w = H_HALF_WIDTH;
    let mut canvas = Canvas::new(-w, w, -w, w, 800.0);
    bound_circles(&mut canvas);
    let curve: Vec<(f64, f64)> = (0..=400)
        .map(|i| {
            let x = p.float(i - 200) / 400u32;
            let t = taylor.eval(&x, TAYLOR_PLOT_DEGREE).add_real(&-x);
            h_point(&t, &center)
        })
        .collect();
    canvas.polyline(&curve, "taylor");
    for d in hundredths() {
        let x = p.float(d) / 100u32;
        let f = map.f_inverse(&HpComplex::real(x.clone()))?;
        let (u, v) = h_point(&f.add_real(&-x), &center);
        canvas.marker(u, v, 2.5, "sample");
    }
    canvas.text(
        -0.95 * w,
        0.9 * w,
        &format!("degree {TAYLOR_PLOT_DEGREE} Taylor polynomial and F(d/100), minus x + 6i/pi"),
    );
    Ok(canvas.finish("Taylor fit", STYLE))
}

pub fn plot(cfg: &RunConfig, kind: PlotKind) -> CmdResult {
    let (name, svg) = match kind {
        PlotKind::Zeros => ("zeros.svg", plot_zeros(cfg)?),
        PlotKind::Hloop => ("hloop.svg", plot_hloop(cfg)?),
        PlotKind::Taylorfit => ("taylorfit.svg", plot_taylorfit(cfg)?),
    };
    let path = output_path(cfg, name)?;
    fs::write(&path, svg)?;
    println!("wrote {}", path.display());
    Ok(true)
}
