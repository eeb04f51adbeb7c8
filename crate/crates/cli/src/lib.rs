//! Command-line front end for `camlab`: argument parsing, command runners
//! and report emission.

pub mod commands;
pub mod config;
pub mod report;
pub mod svg;

use std::path::PathBuf;

use camlab::{Error, ErrorKind};
use clap::{Parser, Subcommand, ValueEnum};

pub use config::{RunConfig, DEFAULT_F_SPEC, DEFAULT_SEED};
pub use report::ReportBundle;

#[derive(Debug, Parser)]
#[command(name = "camlab", version, about = "Moment maps on S2xS2: areas, windows, verdicts and quasi-states")]
pub struct Cli {
    /// Directory for JSON, CSV and SVG output. Without it the JSON report
    /// goes to stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for every sampling routine.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Absolute tolerance for the area quadrature.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub tol: Option<String>,
    /// Primary grid: `lo:hi:n` or a comma list; two grids are joined by `;`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub grid: Option<String>,
    /// Coupling polynomial in z1, z2 with decimal coefficients.
    #[arg(long = "f-spec", global = true, allow_hyphen_values = true)]
    pub f_spec: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    /// Supports (0, -1/2) and (0, -1) of the coupled system at s = 1.
    Pair,
    /// One-dimensional state with supports c3 < c4.
    Genus2,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Areas of D(s, b) over an s-grid (default 0:1:21) with a monotonicity audit.
    Area {
        /// Explicit b-grid used for every s; by default b runs over [-s, 0].
        #[arg(long = "b-grid", allow_hyphen_values = true)]
        b_grid: Option<String>,
        #[arg(long = "b-points", default_value_t = 50)]
        b_points: usize,
    },
    /// The parameter s_c over a c-grid (default -1:-0.5:21).
    Sc,
    /// The roots b_d over a (c; d) grid (default -1:-0.5:10;-1:-0.5:10).
    Bd,
    /// The displaceability window of (J_R, H_f).
    Window {
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        r: String,
    },
    /// Verdict for one fiber of (J_R, H_f).
    Displace {
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        r: String,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        /// Fiber-proxy samples used to confirm the certificate.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Verdict map over an (a; b) grid (default -0.5:0.5:11;-1.5:0.5:21).
    Sweep {
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        r: String,
        #[arg(long, default_value_t = 0)]
        samples: usize,
    },
    /// Sampled points of the fiber over (0, b) of (J_1, H^s).
    Fiber {
        #[arg(long, allow_hyphen_values = true)]
        s: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long = "n-theta", default_value_t = 200)]
        n_theta: usize,
        #[arg(long = "n-phase", default_value_t = 8)]
        n_phase: usize,
    },
    /// Topology of fibers over (0, b); without arguments, the three standard cases.
    Classify {
        #[arg(long, allow_hyphen_values = true, requires = "b")]
        s: Option<String>,
        #[arg(long, allow_hyphen_values = true, requires = "s")]
        b: Option<String>,
    },
    /// SVG of the reduced annulus with the curves alpha(s, b).
    PlotAnnulus {
        #[arg(long, allow_hyphen_values = true)]
        s: String,
        /// Comma-separated b values; empty for the pinched lines only.
        #[arg(long = "b", default_value = "", allow_hyphen_values = true)]
        b_list: String,
        #[arg(long, default_value_t = 400)]
        points: usize,
    },
    /// Quasi-state axioms, quasi-measures and heaviness reports.
    Qs {
        #[arg(long, value_enum, default_value_t = Preset::Pair)]
        preset: Preset,
        #[arg(long, default_value = "-1", allow_hyphen_values = true)]
        c3: String,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        c4: String,
        #[arg(long, default_value_t = 200)]
        profiles: usize,
    },
    /// Two-fiber separation for a small coupling (f = lambda z1 z2 or --f-spec).
    Separate {
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
    },
    /// Every report with default parameters, one subdirectory each.
    ReportAll,
}

/// Process exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e.kind() {
        ErrorKind::Input => 2,
        ErrorKind::Numeric => 3,
        ErrorKind::Hypothesis => 4,
    }
}

/// Runs a parsed command line; `report-all` yields one bundle per report.
pub fn run(cli: &Cli) -> Result<Vec<(String, ReportBundle)>, Error> {
    commands::dispatch(cli)
}
