use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use chshent::twocopy::{Estimator, RegimeWeights};

#[derive(Parser, Debug)]
#[command(
    name = "chshent",
    version,
    about = "CHSH violation and two-qubit entanglement"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Worker threads for sampling and grid evaluation (0: one per core).
    /// The output does not depend on this.
    #[arg(long, global = true, default_value_t = 0)]
    pub workers: usize,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// M, B, N, C and E_R of a state file, as JSON.
    Measure(MeasureArgs),
    /// Upper and lower envelope curves on a B grid, as CSV.
    Bounds(BoundsArgs),
    /// Measures of random states with an envelope check, as CSV.
    Scatter(ScatterArgs),
    /// Extremal-state checks, as JSON. Exit 1 if any check fails.
    Check {
        #[command(subcommand)]
        which: CheckCommand,
    },
    /// Two-copy estimate of TᵀT, M and B, as JSON.
    Simulate(SimulateArgs),
    /// Writes a state file for a named family.
    State {
        #[command(subcommand)]
        family: Family,
    },
}

#[derive(Args, Debug)]
pub struct MeasureArgs {
    #[arg(long)]
    pub state: PathBuf,
    #[arg(long, default_value_t = 1e-8)]
    pub ree_tol: f64,
}

#[derive(Args, Debug)]
pub struct BoundsArgs {
    /// `start:stop:points`, inclusive, inside [0, 1].
    #[arg(long, default_value = "0:1:21", value_parser = parse_grid)]
    pub grid: Grid,
    #[arg(long, default_value_t = 1e-8)]
    pub ree_tol: f64,
}

#[derive(Args, Debug)]
pub struct ScatterArgs {
    /// Number of random states drawn.
    #[arg(long, default_value_t = 10_000)]
    pub count: u64,
    /// Ginibre rank; 4 is the Hilbert-Schmidt measure.
    #[arg(long, default_value_t = 4)]
    pub rank: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Columns to emit, from B, M, N, C, E_R.
    #[arg(long, value_delimiter = ',', default_value = "B,N,C")]
    pub measures: Vec<Coordinate>,
    /// Keep only states with |B| < 1e-9 and add boundary families.
    #[arg(long)]
    pub b_zero: bool,
    /// States per boundary family with --b-zero.
    #[arg(long, default_value_t = 50)]
    pub boundary_points: usize,
    /// Allow the E_R column.
    #[arg(long)]
    pub with_ree: bool,
    /// E_R is computed for the first this many rows only.
    #[arg(long, default_value_t = 1000)]
    pub ree_cap: usize,
    #[arg(long, default_value_t = 1e-8)]
    pub ree_tol: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Coordinate {
    #[value(name = "B")]
    B,
    #[value(name = "M")]
    M,
    #[value(name = "N")]
    N,
    #[value(name = "C")]
    C,
    #[value(name = "E_R")]
    Er,
}

impl Coordinate {
    pub fn header(self) -> &'static str {
        match self {
            Coordinate::B => "B",
            Coordinate::M => "M",
            Coordinate::N => "N",
            Coordinate::C => "C",
            Coordinate::Er => "E_R",
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum CheckCommand {
    /// KKT conditions for an amplitude-damped state.
    Kkt(KktArgs),
    /// Verstraete-Wolf conditions on a B grid.
    Vw {
        #[arg(long, default_value = "0:1:21", value_parser = parse_grid)]
        grid: Grid,
    },
    /// The witness states X1 ... X5 and the mixture rho_q.
    Landmarks {
        #[arg(long, default_value_t = 0.9893)]
        q: f64,
    },
    /// Pairs of B = 0 states ordered differently by N and C.
    Ordering,
}

#[derive(Args, Debug)]
pub struct KktArgs {
    /// Violation on the maximal family (ignored with --alpha/--p).
    #[arg(long, default_value_t = 0.5)]
    pub b: f64,
    #[arg(long, default_value_t = 1.0)]
    pub b0: f64,
    #[arg(long, requires = "p")]
    pub alpha: Option<f64>,
    #[arg(long, requires = "alpha")]
    pub p: Option<f64>,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[arg(long)]
    pub state: PathBuf,
    /// Shots per setting.
    #[arg(long, default_value_t = 300_000)]
    pub shots: usize,
    /// Overlap and delayed regime probabilities, e.g. `1/3,2/3`.
    #[arg(long, default_value = "1/3,2/3", value_parser = parse_weights)]
    pub weights: RegimeWeights,
    #[arg(long, value_enum, default_value_t = EstimatorArg::Regime)]
    pub estimator: EstimatorArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Directory for per-setting shot CSVs (`shots_xx.csv`, ...).
    #[arg(long)]
    pub dump_shots: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum EstimatorArg {
    Regime,
    Pooled,
}

impl From<EstimatorArg> for Estimator {
    fn from(e: EstimatorArg) -> Self {
        match e {
            EstimatorArg::Regime => Estimator::RegimeNormalized,
            EstimatorArg::Pooled => Estimator::PooledK0,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Family {
    Singlet,
    Werner {
        p: f64,
    },
    /// Amplitude-damped state at alpha = 1/2.
    Horodecki {
        p: f64,
    },
    AmplitudeDamped {
        alpha: f64,
        p: f64,
    },
    /// Weights of Phi+, Phi-, Psi+, Psi-.
    BellDiagonal {
        l1: f64,
        l2: f64,
        l3: f64,
        l4: f64,
    },
    RhoMin {
        b: f64,
    },
    RhoMax {
        b: f64,
        #[arg(long, default_value_t = 1.0)]
        b0: f64,
    },
    /// Maximizer of E_R at fixed B.
    RhoMaxRee {
        b: f64,
    },
    Plateau {
        alpha: f64,
    },
    /// One of X1 ... X5.
    Landmark {
        label: String,
    },
    Random {
        #[arg(long, default_value_t = 4)]
        rank: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        index: u64,
    },
}

/// Inclusive grid of `points` evenly spaced values.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl Grid {
    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.start];
        }
        let step = (self.stop - self.start) / (self.points - 1) as f64;
        (0..self.points)
            .map(|k| {
                if k + 1 == self.points {
                    self.stop
                } else {
                    self.start + k as f64 * step
                }
            })
            .collect()
    }
}

pub fn parse_grid(s: &str) -> Result<Grid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [start, stop, points] = parts.as_slice() else {
        return Err(format!("grid {s:?} is not start:stop:points"));
    };
    let num = |t: &str| {
        t.trim()
            .parse::<f64>()
            .map_err(|e| format!("grid {s:?}: {e}"))
    };
    let (start, stop) = (num(start)?, num(stop)?);
    let points: usize = points
        .trim()
        .parse()
        .map_err(|e| format!("grid {s:?}: {e}"))?;
    if !(0.0..=1.0).contains(&start) || !(0.0..=1.0).contains(&stop) {
        return Err(format!("grid {s:?} leaves [0, 1]"));
    }
    if stop < start {
        return Err(format!("grid {s:?} runs backwards"));
    }
    if points == 0 || (points == 1 && stop != start) {
        return Err(format!("grid {s:?} needs at least 2 points"));
    }
    Ok(Grid {
        start,
        stop,
        points,
    })
}

/// A decimal or a fraction `a/b`.
fn parse_fraction(t: &str) -> Result<f64, String> {
    match t.split_once('/') {
        Some((a, b)) => {
            let a: f64 = a.trim().parse().map_err(|e| format!("{t:?}: {e}"))?;
            let b: f64 = b.trim().parse().map_err(|e| format!("{t:?}: {e}"))?;
            Ok(a / b)
        }
        None => t.trim().parse().map_err(|e| format!("{t:?}: {e}")),
    }
}

pub fn parse_weights(s: &str) -> Result<RegimeWeights, String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("weights {s:?} are not wA,wB"))?;
    RegimeWeights::new(parse_fraction(a)?, parse_fraction(b)?).map_err(|e| e.to_string())
}
