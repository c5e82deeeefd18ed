use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "motionforge",
    version,
    about = "Dual-quaternion poses, extended kinematic maps and rational motions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Zero threshold for all numerical decisions.
    #[arg(long, global = true, env = "MOTIONFORGE_TOL", default_value_t = 1e-9)]
    pub tolerance: f64,

    /// Output format of the primary artifact.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Primary output file; standard output if omitted.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// JSON report with parameters and diagnostics.
    #[arg(long, global = true)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Darboux,
    Cubic,
    Helical,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Convert between matrix and Study poses.
    Convert {
        /// Pose JSON, inline or a file path.
        #[arg(long)]
        pose: String,
    },
    /// Nullspace basis of the map and sample points of the fiber over a pose.
    Fiber {
        #[arg(long)]
        pose: String,
        #[arg(long, default_value = "1,0,0,0", value_parser = parse_list::<4>, allow_hyphen_values = true)]
        m: [f64; 4],
        /// Number of random fiber points.
        #[arg(long, default_value_t = 5)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Sample an interpolating motion.
    Interpolate {
        #[command(flatten)]
        motion: MotionArgs,
        /// Study coordinates CSV (t,p0..q3).
        #[arg(long)]
        study_output: Option<PathBuf>,
    },
    /// Rotation angle and translation along the axis of an interpolant.
    Transmission {
        #[command(flatten)]
        motion: MotionArgs,
    },
    /// Trajectory of a point under an interpolant.
    Trajectory {
        #[command(flatten)]
        motion: MotionArgs,
        #[arg(long, value_parser = parse_list::<3>, allow_hyphen_values = true)]
        point: [f64; 3],
    },
    /// Motion of a Bézier curve through the extended map.
    Bezier {
        /// JSON file with {"poses": [...], "offsets": [[6 values], ...]}; offsets are optional.
        #[arg(long)]
        control: PathBuf,
        #[arg(long, default_value = "1,0,0,0", value_parser = parse_list::<4>, allow_hyphen_values = true)]
        m: [f64; 4],
        #[arg(long, default_value_t = 11)]
        samples: usize,
        #[arg(long)]
        study_output: Option<PathBuf>,
    },
    /// Run the randomised property suites.
    Check {
        #[arg(long, default_value_t = motionforge::verify::DEFAULT_SEED)]
        seed: u64,
        /// Run a single suite.
        #[arg(long)]
        criterion: Option<u8>,
    },
}

#[derive(Debug, Args)]
pub struct MotionArgs {
    /// Start pose JSON, inline or a file path.
    #[arg(long)]
    pub start: String,
    /// End pose JSON, inline or a file path.
    #[arg(long)]
    pub end: String,
    /// Interpolant family.
    #[arg(long, value_enum, default_value_t = Method::Cubic)]
    pub method: Method,
    /// Map selector for cubic interpolants.
    #[arg(long, default_value = "1,0,0,0", value_parser = parse_list::<4>, allow_hyphen_values = true)]
    pub m: [f64; 4],
    /// Fiber offsets at the start pose (cubic).
    #[arg(long, default_value = "0,0,0,0,0,0", value_parser = parse_list::<6>, allow_hyphen_values = true)]
    pub alpha: [f64; 6],
    /// Fiber offsets at the end pose (cubic).
    #[arg(long, default_value = "0,0,0,0,0,0", value_parser = parse_list::<6>, allow_hyphen_values = true)]
    pub beta: [f64; 6],
    /// Essential scalar at the start pose (cubic); replaces --alpha.
    #[arg(long, requires = "b_ess", allow_negative_numbers = true)]
    pub a_ess: Option<f64>,
    /// Essential scalar at the end pose (cubic); replaces --beta.
    #[arg(long, requires = "a_ess", allow_negative_numbers = true)]
    pub b_ess: Option<f64>,
    /// Accept cubic interpolants with a pole inside [0, 1].
    #[arg(long)]
    pub allow_pole: bool,
    /// Fiber parameter at the start pose (Darboux).
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub s_a: f64,
    /// Fiber parameter at the end pose (Darboux).
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub s_b: f64,
    /// Number of evenly spaced parameter values, endpoints included.
    #[arg(long, default_value_t = 11)]
    pub samples: usize,
}

fn parse_list<const N: usize>(s: &str) -> Result<[f64; N], String> {
    let values = s
        .split(',')
        .map(|v| v.trim().parse::<f64>().map_err(|e| format!("{v:?}: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    if values.iter().any(|v| !v.is_finite()) {
        return Err("values must be finite".into());
    }
    values
        .try_into()
        .map_err(|v: Vec<f64>| format!("expected {N} comma-separated values, got {}", v.len()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists() {
        assert_eq!(parse_list::<3>("1, -2,3.5"), Ok([1.0, -2.0, 3.5]));
        assert!(parse_list::<3>("1,2").is_err());
        assert!(parse_list::<2>("1,nan").is_err());
    }

    #[test]
    fn cli_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
