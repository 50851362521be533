//! Command implementations behind the `detrep` binary.
//!
//! Every command returns a [`CmdOutput`] holding the exit code and the text
//! for stdout, so the binary stays a thin argument parser and the commands
//! can be tested without spawning processes.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use detrep::dixon::{self, DixonOptions};
use detrep::hyperbolic::{self, Certificate};
use detrep::pencil::{self, HermitianPencil, PD_TOL};
use detrep::uniroots::{find_roots, UniPoly, REAL_ROOT_TOL};
use detrep::{sampling, HomogPoly3};
use serde::Serialize;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Hesse residuals below this pass `verify`.
pub const HESSE_TOL: f64 = 1e-7;
/// Relative misfit allowed between `det M` and a multiple of `f`.
pub const DET_TOL: f64 = 1e-6;

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub seed: u64,
    pub e: [f64; 3],
    pub n_lines: usize,
    pub n_points: usize,
    pub n_lambda: usize,
    pub tol_root: f64,
    pub tol_div: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            e: [1.0, 0.0, 0.0],
            n_lines: hyperbolic::DEFAULT_LINES,
            n_points: hyperbolic::DEFAULT_POINTS,
            n_lambda: 5,
            tol_root: REAL_ROOT_TOL,
            tol_div: dixon::DIVISION_TOL,
        }
    }
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn failed(err: detrep::Error) -> Self {
        Self {
            code: EXIT_FAIL,
            message: err.to_string(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug)]
pub struct CmdOutput {
    pub code: i32,
    pub stdout: String,
}

/// Parses `"x,y,z"` into a triple.
pub fn parse_triple(s: &str) -> CliResult<[f64; 3]> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(CliError::usage(format!("expected three comma-separated numbers, got {s:?}")));
    }
    let mut out = [0.0; 3];
    for (o, p) in out.iter_mut().zip(&parts) {
        *o = p
            .parse()
            .map_err(|_| CliError::usage(format!("not a number: {p:?}")))?;
    }
    Ok(out)
}

/// Parses `"s,k"` for the smoothing preprocessor.
pub fn parse_perturb(s: &str) -> CliResult<(f64, usize)> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| CliError::usage(format!("expected s,k, got {s:?}")))?;
    let step: f64 = a
        .trim()
        .parse()
        .map_err(|_| CliError::usage(format!("bad smoothing step {a:?}")))?;
    let iterations: usize = b
        .trim()
        .parse()
        .map_err(|_| CliError::usage(format!("bad iteration count {b:?}")))?;
    if step < 0.0 {
        return Err(CliError::usage("smoothing step must be nonnegative"));
    }
    Ok((step, iterations))
}

fn read_file(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    fs::write(path, contents).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

pub fn load_poly(path: &Path) -> CliResult<HomogPoly3> {
    serde_json::from_str(&read_file(path)?).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

pub fn load_pencil(path: &Path) -> CliResult<HermitianPencil> {
    serde_json::from_str(&read_file(path)?).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct CheckReport<'a> {
    hyperbolic: bool,
    base_point: [f64; 3],
    seed: u64,
    certificate: &'a Certificate,
}

/// Certifies or refutes hyperbolicity of the polynomial in `f_path`.
pub fn cmd_check(f_path: &Path, cfg: &RunConfig) -> CliResult<CmdOutput> {
    let f = load_poly(f_path)?;
    let cert = hyperbolic::check_hyperbolic(&f, cfg.e, cfg.n_lines, cfg.tol_root, cfg.seed).map_err(CliError::failed)?;
    let report = CheckReport {
        hyperbolic: cert.is_certified(),
        base_point: cfg.e,
        seed: cfg.seed,
        certificate: &cert,
    };
    Ok(CmdOutput {
        code: if cert.is_certified() { EXIT_OK } else { EXIT_FAIL },
        stdout: to_json(&report),
    })
}

#[derive(Clone, Debug, Default)]
pub struct RepresentOptions {
    pub out_dir: PathBuf,
    pub perturb: Option<(f64, usize)>,
    pub realify: bool,
    pub lmi: bool,
    pub enumerate_splits: bool,
    pub check_degenerate: bool,
}

/// Most splittings enumerated by `--enumerate-splits`.
pub const MAX_SPLITS: u64 = 64;

#[derive(Serialize)]
struct RepresentSummary {
    degree: usize,
    perturbed: Option<(f64, usize)>,
    files: Vec<String>,
    report: dixon::DixonReport,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    splits: Vec<SplitOutcome>,
}

#[derive(Serialize)]
struct SplitOutcome {
    choice: u64,
    file: Option<String>,
    error: Option<String>,
}

/// Runs the representation pipeline and writes the pencil (plus optional
/// doubled pencil and LMI text) into `opts.out_dir`.
pub fn cmd_represent(f_path: &Path, cfg: &RunConfig, opts: &RepresentOptions) -> CliResult<CmdOutput> {
    let mut f = load_poly(f_path)?;
    fs::create_dir_all(&opts.out_dir).map_err(|e| CliError::usage(format!("{}: {e}", opts.out_dir.display())))?;
    let mut files = Vec::new();
    let mut emit = |name: &str, body: String| -> CliResult<()> {
        write_file(&opts.out_dir.join(name), &body)?;
        files.push(name.to_string());
        Ok(())
    };
    if let Some((s, k)) = opts.perturb {
        f = dixon::perturb_smooth(&f, cfg.e, s, k).map_err(CliError::failed)?;
        emit("perturbed.json", to_json(&f))?;
    }
    let dopts = DixonOptions {
        seed: cfg.seed,
        n_lines: cfg.n_lines,
        n_lambda: cfg.n_lambda,
        root_tol: cfg.tol_root,
        division_tol: cfg.tol_div,
        check_degenerate: opts.check_degenerate,
        ..DixonOptions::default()
    };
    let rep = dixon::dixon_represent_with(&f, cfg.e, &dopts).map_err(CliError::failed)?;
    emit("pencil.json", to_json(&rep.pencil))?;
    emit("report.json", to_json(&rep.report))?;
    if opts.realify {
        emit("sympencil.json", to_json(&pencil::realify(&rep.pencil)))?;
    }
    if opts.lmi {
        emit("lmi.txt", pencil::realify(&rep.pencil).to_lmi_text())?;
    }
    let mut splits = Vec::new();
    if opts.enumerate_splits {
        let n = (1u64 << rep.report.conjugate_pairs.min(6)).min(MAX_SPLITS);
        for choice in 1..n {
            let o = DixonOptions {
                split_choice: choice,
                ..dopts.clone()
            };
            match dixon::dixon_represent_with(&f, cfg.e, &o) {
                Ok(r) => {
                    let name = format!("pencil_split_{choice}.json");
                    emit(&name, to_json(&r.pencil))?;
                    splits.push(SplitOutcome {
                        choice,
                        file: Some(name),
                        error: None,
                    });
                }
                Err(err) => splits.push(SplitOutcome {
                    choice,
                    file: None,
                    error: Some(err.to_string()),
                }),
            }
        }
    }
    let summary = RepresentSummary {
        degree: f.degree(),
        perturbed: opts.perturb,
        files,
        report: rep.report,
        splits,
    };
    Ok(CmdOutput {
        code: EXIT_OK,
        stdout: to_json(&summary),
    })
}

#[derive(Serialize)]
struct VerifyReport {
    passed: bool,
    det_ratio: f64,
    det_misfit: f64,
    det_ok: bool,
    cholesky_definite: bool,
    orientation: &'static str,
    interlacing_definite: bool,
    definiteness_agrees: bool,
    hesse_residual: Option<f64>,
    hesse_ok: bool,
    notes: Vec<String>,
}

/// Checks that `det M` is a multiple of `f`, that `M(e)` is definite by both
/// Cholesky and interlacing, and that the Hesse identity holds on `V(f)`.
pub fn cmd_verify(f_path: &Path, m_path: &Path, cfg: &RunConfig) -> CliResult<CmdOutput> {
    let f = load_poly(f_path)?;
    let m = load_pencil(m_path)?;
    let mut notes = Vec::new();
    if m.dim() != f.degree() {
        notes.push(format!("pencil size {} differs from deg f = {}", m.dim(), f.degree()));
    }
    let det = m.determinant();
    let (ratio, det_misfit) = if det.degree() == f.degree() {
        let (c, misfit) = det.proportionality(&f);
        (c.re, misfit)
    } else {
        (0.0, f64::INFINITY)
    };
    let det_ok = det_misfit < DET_TOL && ratio != 0.0;
    if !det_ok {
        notes.push("det M is not a multiple of f".into());
    }
    let me = m.eval(cfg.e);
    let pos = pencil::is_positive_definite(&me, PD_TOL).map_err(CliError::failed)?;
    let neg = pencil::is_positive_definite(&(-me), PD_TOL).map_err(CliError::failed)?;
    let orientation = match (pos, neg) {
        (true, _) => "positive-definite",
        (_, true) => {
            notes.push("M(e) is negative definite; -M is a positive definite representation".into());
            "negative-definite"
        }
        _ => "indefinite",
    };
    let (interlacing_definite, agrees, hesse) = if det_ok {
        let r = pencil::definiteness_via_interlacing(&m, cfg.e, cfg.n_lambda, cfg.seed).map_err(CliError::failed)?;
        let pts = hyperbolic::sample_curve_points(&f, cfg.e, cfg.n_points, cfg.seed ^ 0x4e55).map_err(CliError::failed)?;
        let mut rng = sampling::rng(cfg.seed ^ 0x4e56);
        let mut worst: f64 = 0.0;
        for _ in 0..cfg.n_lambda.max(1) {
            let l = sampling::complex_gaussian(&mut rng, m.dim());
            let mu = sampling::complex_gaussian(&mut rng, m.dim());
            worst = worst.max(pencil::hesse_residual(&m, &l, &mu, &pts).map_err(CliError::failed)?);
        }
        (r.certificate.is_certified(), r.agrees, Some(worst))
    } else {
        (false, false, None)
    };
    let hesse_ok = hesse.is_some_and(|h| h < HESSE_TOL);
    let passed = det_ok && (pos || neg) && interlacing_definite && agrees && hesse_ok;
    let report = VerifyReport {
        passed,
        det_ratio: ratio,
        det_misfit,
        det_ok,
        cholesky_definite: pos || neg,
        orientation,
        interlacing_definite,
        definiteness_agrees: agrees,
        hesse_residual: hesse,
        hesse_ok,
        notes,
    };
    Ok(CmdOutput {
        code: if passed { EXIT_OK } else { EXIT_FAIL },
        stdout: to_json(&report),
    })
}

/// Affine chart used by `plot`: the coordinate set to one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Chart {
    X,
    Z,
}

impl Chart {
    pub fn parse(s: &str) -> CliResult<Self> {
        match s {
            "x" | "x=1" => Ok(Chart::X),
            "z" | "z=1" => Ok(Chart::Z),
            _ => Err(CliError::usage(format!("unknown chart {s:?}; use x or z"))),
        }
    }

    /// Projective point for chart coordinates `(u, v)`.
    fn lift(self, u: f64, v: f64) -> [f64; 3] {
        match self {
            Chart::X => [1.0, u, v],
            Chart::Z => [u, v, 1.0],
        }
    }

    fn v_direction(self) -> [f64; 3] {
        match self {
            Chart::X => [0.0, 0.0, 1.0],
            Chart::Z => [0.0, 1.0, 0.0],
        }
    }

    fn u_direction(self) -> [f64; 3] {
        match self {
            Chart::X => [0.0, 1.0, 0.0],
            Chart::Z => [1.0, 0.0, 0.0],
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct PlotOptions {
    pub chart: Chart,
    pub range: f64,
    pub samples: usize,
}

impl Default for PlotOptions {
    fn default() -> Self {
        Self {
            chart: Chart::X,
            range: 3.0,
            samples: 400,
        }
    }
}

/// Real points of `f = 0` in the chart, from sweeping both chart axes.
pub fn plot_points(f: &HomogPoly3, opts: &PlotOptions) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let n = opts.samples.max(2);
    for sweep_u in [true, false] {
        for i in 0..n {
            let s = -opts.range + 2.0 * opts.range * i as f64 / (n - 1) as f64;
            let (base, dir) = if sweep_u {
                (opts.chart.lift(s, 0.0), opts.chart.v_direction())
            } else {
                (opts.chart.lift(0.0, s), opts.chart.u_direction())
            };
            // f(base + t dir) with t the free chart coordinate
            // the degree in t drops when the point at infinity of the line lies on f
            let mut c = f.restrict_to_real_line(dir, base).coeffs().to_vec();
            let scale = c.iter().map(|z| z.norm()).fold(0.0, f64::max);
            while c.len() > 1 && c.last().is_some_and(|z| z.norm() <= 1e-12 * scale) {
                c.pop();
            }
            let Ok(roots) = find_roots(&UniPoly::new(c)) else {
                continue;
            };
            let mut found: Vec<f64> = roots
                .clusters()
                .into_iter()
                .filter(|(r, _)| r.im.abs() <= REAL_ROOT_TOL * (1.0 + r.norm()) && r.re.abs() <= opts.range)
                .map(|(r, _)| r.re)
                .collect();
            found.sort_by(f64::total_cmp);
            for r in found {
                out.push(if sweep_u { (s, r) } else { (r, s) });
            }
        }
    }
    out
}

/// CSV of real curve samples with header `curve,u,v`.
pub fn cmd_plot(f_path: &Path, g_path: Option<&Path>, opts: &PlotOptions) -> CliResult<CmdOutput> {
    let mut curves = vec![("f", load_poly(f_path)?)];
    if let Some(g) = g_path {
        curves.push(("g", load_poly(g)?));
    }
    let mut csv = String::from("curve,u,v\n");
    for (name, p) in &curves {
        for (u, v) in plot_points(p, opts) {
            csv.push_str(&format!("{name},{u:.12},{v:.12}\n"));
        }
    }
    Ok(CmdOutput {
        code: EXIT_OK,
        stdout: csv,
    })
}

/// Writes `out.stdout` to `path` when given, returning what is left to print.
pub fn route_output(out: CmdOutput, path: Option<&Path>) -> CliResult<CmdOutput> {
    match path {
        Some(p) => {
            write_file(p, &out.stdout)?;
            Ok(CmdOutput {
                code: out.code,
                stdout: String::new(),
            })
        }
        None => Ok(out),
    }
}
