use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use detrep_cli::{
    cmd_check, cmd_plot, cmd_represent, cmd_verify, parse_perturb, parse_triple, route_output, Chart, CliError,
    CliResult, CmdOutput, PlotOptions, RepresentOptions, RunConfig, EXIT_USAGE,
};

#[derive(Parser)]
#[command(name = "detrep", version, about = "Definite determinantal representations of hyperbolic plane curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Base point as x,y,z
    #[arg(long = "e", default_value = "1,0,0", allow_hyphen_values = true)]
    e: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Lines sampled when certifying hyperbolicity
    #[arg(long, default_value_t = detrep::hyperbolic::DEFAULT_LINES)]
    lines: usize,
    /// Curve points sampled for the Hesse check
    #[arg(long, default_value_t = detrep::hyperbolic::DEFAULT_POINTS)]
    points: usize,
    /// Random vectors drawn for C(M) and Hesse checks
    #[arg(long, default_value_t = 5)]
    lambdas: usize,
    #[arg(long = "tol-root", default_value_t = detrep::uniroots::REAL_ROOT_TOL)]
    tol_root: f64,
    #[arg(long = "tol-div", default_value_t = detrep::dixon::DIVISION_TOL)]
    tol_div: f64,
}

impl Common {
    fn config(&self) -> CliResult<RunConfig> {
        Ok(RunConfig {
            seed: self.seed,
            e: parse_triple(&self.e)?,
            n_lines: self.lines,
            n_points: self.points,
            n_lambda: self.lambdas,
            tol_root: self.tol_root,
            tol_div: self.tol_div,
        })
    }
}

#[derive(Subcommand)]
enum Command {
    /// Certify or refute hyperbolicity by sampling lines through e
    Check {
        poly: PathBuf,
        #[command(flatten)]
        common: Common,
        /// Write the certificate here instead of stdout
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Build a definite Hermitian determinantal representation
    Represent {
        poly: PathBuf,
        #[command(flatten)]
        common: Common,
        /// Directory receiving pencil.json, report.json and optional exports
        #[arg(long = "out-dir", short, default_value = ".")]
        out_dir: PathBuf,
        /// Smooth the input first with s,k (step, iterations)
        #[arg(long)]
        perturb: Option<String>,
        /// Also write the real symmetric doubling
        #[arg(long)]
        realify: bool,
        /// Also write the LMI of the doubled pencil as text
        #[arg(long)]
        lmi: bool,
        /// Also represent with every other choice of splitting
        #[arg(long = "enumerate-splits")]
        enumerate_splits: bool,
        /// Test sampled members of C_D for repeated factors first
        #[arg(long = "check-degenerate")]
        check_degenerate: bool,
    },
    /// Verify a pencil against a polynomial
    Verify {
        poly: PathBuf,
        pencil: PathBuf,
        #[command(flatten)]
        common: Common,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Emit real curve samples in an affine chart as CSV
    Plot {
        poly: PathBuf,
        /// Second curve to sample alongside
        #[arg(long)]
        g: Option<PathBuf>,
        /// Chart: x (x=1) or z (z=1)
        #[arg(long, default_value = "x")]
        chart: String,
        #[arg(long, default_value_t = 3.0)]
        range: f64,
        #[arg(long, default_value_t = 400)]
        samples: usize,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> CliResult<CmdOutput> {
    match cli.command {
        Command::Check { poly, common, out } => route_output(cmd_check(&poly, &common.config()?)?, out.as_deref()),
        Command::Represent {
            poly,
            common,
            out_dir,
            perturb,
            realify,
            lmi,
            enumerate_splits,
            check_degenerate,
        } => {
            let opts = RepresentOptions {
                out_dir,
                perturb: perturb.as_deref().map(parse_perturb).transpose()?,
                realify,
                lmi,
                enumerate_splits,
                check_degenerate,
            };
            cmd_represent(&poly, &common.config()?, &opts)
        }
        Command::Verify {
            poly,
            pencil,
            common,
            out,
        } => route_output(cmd_verify(&poly, &pencil, &common.config()?)?, out.as_deref()),
        Command::Plot {
            poly,
            g,
            chart,
            range,
            samples,
            out,
        } => {
            if !(range > 0.0) {
                return Err(CliError::usage("range must be positive"));
            }
            let opts = PlotOptions {
                chart: Chart::parse(&chart)?,
                range,
                samples,
            };
            route_output(cmd_plot(&poly, g.as_deref(), &opts)?, out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE as u8 } else { 0 });
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{}", out.stdout);
            ExitCode::from(out.code as u8)
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.code as u8)
        }
    }
}
