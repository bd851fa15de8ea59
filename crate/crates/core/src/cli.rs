//! The `apollonian` command line.
//!
//! Exit codes: 0 success, 1 validation or check failure, 2 I/O, parse or
//! usage error. Data (JSON, CSV, SVG) goes to stdout unless `--out` is
//! given; summaries of data-producing commands go to stderr in that case.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::circle::{AccRow, FloatRow};
use crate::config::{validate_acc, AccMatrix, ConfigFile};
use crate::error::{Error, Result};
use crate::group::{count_normal_forms, enumerate_normal_forms, GroupWord};
use crate::limits::Limits;
use crate::matrix::Matrix;
use crate::moebius::{
    apply_moebius, moebius_to_autqw, random_element, total_orientation_f64, validity_defect,
    verify_conjugacy_chain, ExactChain,
};
use crate::packing::{
    calibrate, check_disjoint_interiors, check_no_crossing, curvature_spectrum, estimate_residual_dimension,
    expected_apollonian_circles, generate, residual_membership, LoadedPacking, PackingKind,
};
use crate::rational::{self, Rat};
use crate::render::{render_points, render_svg, RenderSpec};
use crate::schottky::{parabolic_fixed_points, sample_limit_set, verify_inversion_geometry, verify_relations};

#[derive(Debug, Parser)]
#[command(name = "apollonian", version, about = "Descartes configurations and Apollonian packings in exact arithmetic")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a configuration file and classify it.
    Validate { path: PathBuf },
    /// Generate a packing from a seed file (or the built-in `strip` / `gasket`).
    Generate {
        seed: String,
        #[arg(long, default_value = "apollonian")]
        kind: String,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Run the geometric check for the packing kind.
        #[arg(long)]
        check: bool,
    },
    /// Draw a packing file as SVG.
    Render {
        packing: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// `xmin,ymin,xmax,ymax`; fitted to the circles when omitted.
        #[arg(long, allow_hyphen_values = true)]
        viewport: Option<String>,
        #[arg(long, default_value_t = 1.0)]
        stroke: f64,
        #[arg(long)]
        labels: bool,
        #[arg(long)]
        max_circles: Option<usize>,
        #[arg(long, default_value_t = 800.0)]
        width: f64,
    },
    /// Count (and optionally list) normal-form words of one length.
    Words {
        #[arg(long)]
        length: usize,
        #[arg(long)]
        list: bool,
    },
    /// Print the normal form of a word like `12'3` and its matrix.
    Reduce { word: String },
    /// Curvature spectrum of a packing file as CSV.
    Spectrum {
        packing: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Estimate the circle-counting exponent of an Apollonian packing file.
    Dim {
        packing: Option<PathBuf>,
        /// Fit synthetic curvatures with this exponent instead.
        #[arg(long)]
        calibrate: Option<f64>,
    },
    /// Apply an exact chain like `t:1,0; d:2; j` to a configuration, or run
    /// the random-sample checks.
    Moebius {
        config: Option<String>,
        #[arg(long)]
        ops: Option<String>,
        /// Number of random elements to check.
        #[arg(long)]
        verify: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Check the Schottky relations, or sample the limit set at a depth.
    Schottky {
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Test samples against the gasket packing of this depth.
        #[arg(long)]
        membership: Option<usize>,
    },
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_) | Error::Json(_) | Error::Parse(_) => 2,
        _ => 1,
    }
}

/// Runs the command line; returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn read(path: &Path) -> Result<String> {
    Ok(std::fs::read_to_string(path)?)
}

/// Writes `text` to `path`, or to `out` when no path is given.
fn emit(path: Option<&Path>, text: &str, out: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn load_raw_config(spec: &str) -> Result<Matrix<Rat>> {
    let path = Path::new(spec);
    if !path.exists() {
        match spec {
            "strip" => return Ok(AccMatrix::strip().into_matrix()),
            "gasket" => return Ok(AccMatrix::unit_gasket().into_matrix()),
            _ => {}
        }
    }
    let file: ConfigFile = serde_json::from_str(&read(path)?)?;
    file.to_matrix()
}

fn load_config(spec: &str) -> Result<AccMatrix> {
    AccMatrix::new(load_raw_config(spec)?)
}

fn load_packing(path: &Path) -> Result<LoadedPacking> {
    LoadedPacking::from_json_str(&read(path)?)
}

fn parse_viewport(s: &str) -> Result<(f64, f64, f64, f64)> {
    let v: Vec<f64> = s
        .split(',')
        .map(|x| x.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::Parse(format!("bad viewport {s:?}")))?;
    match v.as_slice() {
        [a, b, c, d] => Ok((*a, *b, *c, *d)),
        _ => Err(Error::Parse(format!("viewport needs 4 numbers, got {s:?}"))),
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let limits = Limits::from_env()?;
    match cmd {
        Command::Validate { path } => {
            let raw = load_raw_config(&path.to_string_lossy())?;
            match validate_acc(&raw) {
                Ok(class) => {
                    let w = AccMatrix::new(raw)?;
                    writeln!(out, "valid: true")?;
                    writeln!(out, "component: {class}")?;
                    writeln!(out, "determinant: {}8", if class.determinant_sign > 0 { '+' } else { '-' })?;
                    writeln!(out, "total orientation: {:+}", class.total_orientation)?;
                    writeln!(out, "strongly integral: {}", w.is_strongly_integral())?;
                    writeln!(out, "first column integral: {}", w.first_column_integral())?;
                    Ok(0)
                }
                Err(e) => {
                    writeln!(out, "valid: false")?;
                    writeln!(out, "reason: {e}")?;
                    Ok(1)
                }
            }
        }
        Command::Generate {
            seed,
            kind,
            depth,
            out: path,
            check,
        } => {
            let seed = load_config(&seed)?;
            let kind: PackingKind = kind.parse()?;
            let p = generate(&seed, kind, depth, &limits)?;
            emit(path.as_deref(), &(p.to_json_string() + "\n"), out)?;
            let summary: &mut dyn Write = if path.is_some() { out } else { err };
            writeln!(summary, "kind: {kind}")?;
            writeln!(summary, "depth: {depth}")?;
            writeln!(summary, "configurations: {}", p.configs.len())?;
            writeln!(summary, "circles: {}", p.circle_count())?;
            if kind == PackingKind::Apollonian {
                writeln!(summary, "expected 2(3^m+1): {}", expected_apollonian_circles(depth))?;
            }
            if p.auto_negated {
                writeln!(summary, "seed had negative orientation and was negated")?;
            }
            if check {
                let (name, report) = if kind == PackingKind::Apollonian {
                    ("disjoint interiors", check_disjoint_interiors(&p)?)
                } else {
                    ("no crossing", check_no_crossing(&p)?)
                };
                let verdict = if report.passed() { "pass" } else { "FAIL" };
                writeln!(summary, "{name}: {verdict} ({} pairs)", report.pairs_checked)?;
                if !report.passed() {
                    return Ok(1);
                }
            }
            Ok(0)
        }
        Command::Render {
            packing,
            out: path,
            viewport,
            stroke,
            labels,
            max_circles,
            width,
        } => {
            let loaded = load_packing(&packing)?;
            let rows: Vec<AccRow> = loaded.circles.iter().map(|c| c.row.clone()).collect();
            let mut spec = RenderSpec {
                stroke_width: stroke,
                labels,
                max_circles,
                width_px: width,
                ..RenderSpec::default()
            };
            spec = match viewport {
                Some(v) => RenderSpec {
                    viewport: parse_viewport(&v)?,
                    ..spec
                },
                None => spec.fit_to(&rows.iter().map(FloatRow::from).collect::<Vec<_>>()),
            };
            emit(path.as_deref(), &render_svg(&rows, &spec)?, out)?;
            Ok(0)
        }
        Command::Words { length, list } => {
            if length == 0 {
                return Err(Error::Precondition("word length must be at least 1".into()));
            }
            if list {
                for w in enumerate_normal_forms(length, &limits)? {
                    writeln!(out, "{w}")?;
                }
            } else {
                writeln!(out, "{}", count_normal_forms(length))?;
            }
            Ok(0)
        }
        Command::Reduce { word } => {
            let w: GroupWord = word.parse()?;
            let nf = w.normal_form();
            writeln!(out, "{nf}")?;
            write!(out, "{}", nf.matrix().matrix())?;
            Ok(0)
        }
        Command::Spectrum { packing, out: path } => {
            let loaded = load_packing(&packing)?;
            emit(path.as_deref(), &curvature_spectrum(loaded.circles.iter()).to_csv(), out)?;
            Ok(0)
        }
        Command::Dim { packing, calibrate: exponent } => {
            if let Some(e) = exponent {
                let fit = calibrate(e)?;
                writeln!(out, "slope: {:.6}", fit.slope)?;
                return Ok(0);
            }
            let path = packing.ok_or_else(|| Error::Parse("dim needs a packing file or --calibrate".into()))?;
            let loaded = load_packing(&path)?;
            // The completeness bound needs the leaf configurations, so the
            // orbit is rebuilt and compared with the file.
            let p = generate(&loaded.seed, loaded.kind, loaded.depth, &limits)?;
            let same = p.circle_count() == loaded.circles.len()
                && loaded.circles.iter().all(|c| p.circles.contains_key(&c.key()));
            if !same {
                return Err(Error::InconsistentInput(
                    "circle list does not match the orbit of its seed".into(),
                ));
            }
            let est = estimate_residual_dimension(&p)?;
            writeln!(out, "exponent: {:.6}", est.exponent)?;
            writeln!(out, "window: [{}, {})", est.fit.window.0, est.fit.window.1)?;
            writeln!(out, "complete below: {}", est.complete_below)?;
            writeln!(out, "circles used: {}", est.circles_used)?;
            writeln!(out, "samples: {}", est.fit.samples)?;
            if let Some(s) = est.generation_balance {
                writeln!(out, "generation balance: {s:.6}")?;
            }
            Ok(0)
        }
        Command::Moebius {
            config,
            ops,
            verify,
            seed,
        } => {
            if let Some(n) = verify {
                return moebius_checks(n, seed, out);
            }
            let (Some(config), Some(ops)) = (config, ops) else {
                return Err(Error::Parse("moebius needs a configuration and --ops, or --verify".into()));
            };
            let w = load_config(&config)?;
            let chain: ExactChain = ops.parse()?;
            let image = chain.apply(&w)?;
            writeln!(out, "{}", ConfigFile::from(&image).to_pretty_string())?;
            Ok(0)
        }
        Command::Schottky {
            depth,
            out: path,
            svg,
            membership,
        } => {
            let Some(depth) = depth else {
                return schottky_checks(out);
            };
            let sample = sample_limit_set(depth, &parabolic_fixed_points()?, &limits)?;
            emit(path.as_deref(), &sample.to_csv(), out)?;
            let summary: &mut dyn Write = if path.is_some() { out } else { err };
            writeln!(summary, "points: {}", sample.len())?;
            if let Some(svg_path) = svg {
                let pts: Vec<(f64, f64)> = sample.points.iter().map(|(z, _)| (z.re, z.im)).collect();
                std::fs::write(svg_path, render_points(&pts, &RenderSpec::default(), 1.0)?)?;
            }
            if let Some(m) = membership {
                let p = generate(&AccMatrix::unit_gasket(), PackingKind::Apollonian, m, &limits)?;
                let rows = p.float_rows();
                let hits = sample
                    .points
                    .iter()
                    .filter(|(z, _)| residual_membership((z.re, z.im), &rows, 1e-6))
                    .count();
                writeln!(summary, "residual membership: {hits}/{}", sample.len())?;
            }
            Ok(0)
        }
    }
}

fn moebius_checks(n: usize, seed: u64, out: &mut dyn Write) -> Result<i32> {
    let mut rng = StdRng::seed_from_u64(seed);
    let d0 = AccMatrix::unit_gasket();
    let mut hom = 0.0f64;
    let mut defect = 0.0f64;
    let mut orientation_kept = true;
    let mut samples = Vec::with_capacity(n);
    for _ in 0..n {
        let g = random_element(&mut rng);
        let mut h = random_element(&mut rng);
        h.conjugate = rng.gen_bool(0.5);
        let lhs = moebius_to_autqw(&g.compose(&h))?;
        let rhs = &moebius_to_autqw(&g)? * &moebius_to_autqw(&h)?;
        hom = hom.max(lhs.max_abs_diff(&rhs) / (1.0 + rhs.max_abs()));
        let image = apply_moebius(&g, &d0)?;
        defect = defect.max(validity_defect(&image));
        orientation_kept &= total_orientation_f64(&image) == d0.total_orientation();
        samples.push(g);
    }
    let chain = verify_conjugacy_chain(&samples)?;
    writeln!(out, "samples: {n}")?;
    writeln!(out, "homomorphism max error: {hom:.3e}")?;
    writeln!(out, "validity max defect: {defect:.3e}")?;
    writeln!(out, "orientation preserved: {orientation_kept}")?;
    writeln!(out, "Z V Z^-1 Lorentz defect: {:.3e}", chain.lorentz_defect)?;
    writeln!(out, "explicit map vs Z V Z^-1: {:.3e}", chain.direct_deviation)?;
    writeln!(out, "explicit map vs Z' V^-1 Z'^-1, Z' = diag(1,-1,1,-1) Z: {:.3e}", chain.adjusted_deviation)?;
    let ok = hom < 1e-9 && defect < 1e-9 && orientation_kept && chain.passed();
    writeln!(out, "passed: {ok}")?;
    Ok(if ok { 0 } else { 1 })
}

fn schottky_checks(out: &mut dyn Write) -> Result<i32> {
    let rel = verify_relations()?;
    let inv = verify_inversion_geometry()?;
    let traces: Vec<String> = rel.traces.iter().map(|t| rational::format(&t.re)).collect();
    writeln!(out, "traces: {}", traces.join(", "))?;
    writeln!(out, "parabolic: {}", rel.all_parabolic)?;
    writeln!(out, "p3 = P2^-2: {}", rel.p3_is_p2_inverse_squared)?;
    writeln!(out, "s1^-1 s2 = -P1^-2: {}", rel.p1_inv_p2_is_minus_p1_inverse_squared)?;
    writeln!(out, "p1^-1 p2 = -P1^-2 as matrices: {}", rel.literal_p1_inv_p2)?;
    writeln!(out, "p2^2 = -[P1,P2]: {}", rel.p2_squared_is_minus_commutator)?;
    match inv.mapping() {
        Some(k) => writeln!(out, "s_i fixes dual circle: {k:?}")?,
        None => writeln!(out, "s_i fixes dual circle: unmatched")?,
    }
    writeln!(out, "s_i action equals S_k: {:?}", inv.matches_left_action)?;
    let fixed: Vec<String> = parabolic_fixed_points()?
        .iter()
        .map(|z: &Complex64| format!("{}{:+}i", z.re, z.im))
        .collect();
    writeln!(out, "fixed points: {}", fixed.join(", "))?;
    Ok(if rel.passed() && inv.passed() { 0 } else { 1 })
}
