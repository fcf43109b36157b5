//! `tfc-map`: batch front end for mapping evaluation, inverse fitting,
//! Monte Carlo accuracy, boundary merging and constrained surfaces.

mod commands;
mod demo;
mod surface_doc;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

const CONFIG_HELP: &str = "\
Mapping documents are JSON objects with a \"kind\" tag. Points are [re, im] or [x, y] pairs.
  switching     z_refs, w_ctrls, optional free_function (zero | sin3z2cos | sinz2exp)
  projection    regions: [{c, upsilon, p, q}, ...], p[j] in Z paired with q[j] in W
  bilinear4     w_pts: 4 corners counter-clockwise from (-1,-1)
  serendipity8  w_pts: 8 nodes counter-clockwise from (-1,-1), corner then midside
  triangle3     z_pts, w_pts: 3 points each
  elementary    chain: [{kind: translation|scaling|rotation|affine|inversion|exponential|squaring|cayley|mobius, ...}]
An optional \"note\" string is ignored.

Point files are CSV with a header row and two numeric columns.
Boundary piece files are JSON lists of {\"expr\": [c0, c1, ...] | name, \"range\": [lo, hi]};
names: zero, sin5pix, sin5x_exp, sin, cos, exp.
Surface documents: {\"mapping\": <mapping document>, \"boundary\": name | [bottom, right, top, left],
  optional \"inverse\": {\"kind\": \"exact\"} | {\"kind\": \"approximate\", \"k\", \"grid\", \"basis\"},
  optional \"samples_per_edge\", \"max_degree\"}; boundary names: zero, one, xy, sinx_cosy, sin5x_exp.

Exit status: 0 on success, 2 on invalid input, 1 on numerical failure.";

#[derive(Parser)]
#[command(name = "tfc-map", version, about, after_long_help = CONFIG_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Basis {
    ComplexChebyshev,
    TensorChebyshev,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Mode {
    Grid,
    Collocation,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Way {
    ZToW,
    WToZ,
}

#[derive(Subcommand)]
pub enum Command {
    /// Map points through a mapping document (columns a,b,x,y).
    Map {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        points: PathBuf,
        /// Map W points back to the square.
        #[arg(long)]
        inverse: bool,
        /// Fitted inverse model (from inverse-fit) used with --inverse.
        #[arg(long, requires = "inverse")]
        model: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Carry points through a projection mapping.
    Project {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        points: PathBuf,
        #[arg(long, value_enum, default_value = "z-to-w")]
        direction: Way,
        /// Replace the Z controls of a single-region map by density-preserving ones.
        #[arg(long)]
        density: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fit a least-squares approximate inverse and write it as JSON.
    InverseFit {
        #[arg(long)]
        config: PathBuf,
        /// Number of basis functions.
        #[arg(long, default_value_t = 20)]
        k: usize,
        /// Points per axis of the fitting lattice.
        #[arg(long, default_value_t = 11)]
        grid: usize,
        #[arg(long, value_enum, default_value = "complex-chebyshev")]
        basis: Basis,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo accuracy of the approximate inverse (JSON statistics).
    McAccuracy {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 20)]
        k: usize,
        #[arg(long, default_value_t = 11)]
        grid: usize,
        #[arg(long, default_value_t = 100_000)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "complex-chebyshev")]
        basis: Basis,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the error histogram (bin_edge,count).
        #[arg(long)]
        histogram: Option<PathBuf>,
    },
    /// Merge piecewise boundary data into one function and sample it (x,f).
    MergeBoundary {
        #[arg(long)]
        pieces: PathBuf,
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Interior point cloud of a mapped domain (x,y).
    Points {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum, default_value = "grid")]
        mode: Mode,
        /// Lattice points per axis.
        #[arg(long, default_value_t = 16)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Constrained surface over interior points (x,y,S).
    Surface {
        #[arg(long)]
        spec: PathBuf,
        /// Free function: zero, one, xy, sinx_cosy, sin5x_exp.
        #[arg(long, default_value = "zero")]
        g: String,
        #[arg(long, value_enum, default_value = "grid")]
        mode: Mode,
        #[arg(long, default_value_t = 16)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit the data behind a worked figure.
    ///
    /// 1 four-point maps, 2 eight-point maps, 3 switching maps with free
    /// functions, 4 triangle map, 5 merged boundary, 6 one-boundary surfaces,
    /// 7 inverse error histogram, 8 interior point sets.
    Demo {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=8))]
        figure: u8,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Failure classes mapped to exit codes.
#[derive(Debug)]
pub enum Failure {
    Invalid(String),
    Numeric(String),
}

impl From<tfc_map::Error> for Failure {
    fn from(e: tfc_map::Error) -> Self {
        if e.is_numeric() {
            Failure::Numeric(e.to_string())
        } else {
            Failure::Invalid(e.to_string())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    std::panic::set_hook(Box::new(|_| {}));
    let outcome = std::panic::catch_unwind(|| commands::run(cli.command))
        .unwrap_or_else(|_| Err(Failure::Numeric("internal error".into())));
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        // downstream reader closed early, e.g. `| head`
        Err(Failure::Invalid(msg)) if msg.contains("Broken pipe") => ExitCode::SUCCESS,
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numeric(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
