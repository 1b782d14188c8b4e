use std::f64::consts::{FRAC_PI_2, TAU};
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use entropy_op::tol::default_dim;
use entropy_op::wigner::{wigner_dim, Convention, Source};
use entropy_op::Tolerances;
use num_complex::Complex64 as C64;

use crate::{CliError, Result};

#[derive(Debug, Parser)]
#[command(
    name = "entropy-op",
    version,
    about = "Entropy operators of a dispersively coupled qubit and field mode"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Atomic and field entropy, and the entropy fluctuation, over time.
    EntropyScan(CommonArgs),
    /// Wigner function of the field entropy operator on a phase-space grid.
    Wigner(CommonArgs),
    /// Check the trace identities and route equivalences; exit 2 on failure.
    Verify(CommonArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SourceArg {
    Series,
    Closed,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConventionArg {
    Parity,
    Standard,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Real part of the initial coherent amplitude.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub beta_re: f64,
    /// Imaginary part of the initial coherent amplitude.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub beta_im: f64,
    /// Dimensionless phase chi*t: a single value or "start:end:steps".
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["chi", "t_start", "t_end", "t_steps"])]
    pub chit: Option<String>,
    /// Interaction constant (rad/s); use with --t-start.
    #[arg(long, allow_negative_numbers = true, requires = "t_start")]
    pub chi: Option<f64>,
    /// First time (s).
    #[arg(long, allow_negative_numbers = true, requires = "chi")]
    pub t_start: Option<f64>,
    /// Last time (s); defaults to --t-start.
    #[arg(long, allow_negative_numbers = true, requires = "t_start")]
    pub t_end: Option<f64>,
    /// Number of time points.
    #[arg(long, requires = "t_start")]
    pub t_steps: Option<usize>,
    /// Fock-space truncation; derived from the amplitudes when omitted.
    #[arg(long)]
    pub dim: Option<usize>,
    /// Wigner grid along alpha_x, "min:max:count".
    #[arg(long, default_value = "-3:3:21", allow_hyphen_values = true)]
    pub grid_x: String,
    /// Wigner grid along alpha_y, "min:max:count".
    #[arg(long, default_value = "-3:3:21", allow_hyphen_values = true)]
    pub grid_y: String,
    /// Wigner route(s) to evaluate.
    #[arg(long, value_enum, default_value_t = SourceArg::Both)]
    pub source: SourceArg,
    /// Wigner normalization: `parity` is the bare parity sum, `standard` multiplies by 2/pi.
    #[arg(long, value_enum, default_value_t = ConventionArg::Parity)]
    pub convention: ConventionArg,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Evenly spaced values parsed from "min:max:count".
#[derive(Debug, Clone, PartialEq)]
pub struct Range {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Range {
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.min];
        }
        let step = (self.max - self.min) / (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i + 1 == self.count {
                    self.max
                } else {
                    self.min + step * i as f64
                }
            })
            .collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.min.abs().max(self.max.abs())
    }
}

impl FromStr for Range {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || CliError::Validation(format!("expected \"min:max:count\", got {s:?}"));
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let min: f64 = parts[0].trim().parse().map_err(|_| bad())?;
        let max: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let count: usize = parts[2].trim().parse().map_err(|_| bad())?;
        if !min.is_finite() || !max.is_finite() {
            return Err(bad());
        }
        if count == 0 {
            return Err(CliError::Validation(format!("range {s:?} has no points")));
        }
        if max < min {
            return Err(CliError::Validation(format!("range {s:?} has max < min")));
        }
        Ok(Self { min, max, count })
    }
}

/// Which subcommand a config drives; fixes the default time axis and
/// truncation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    EntropyScan,
    Wigner,
    Verify,
}

/// One evaluation time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimePoint {
    pub chi: f64,
    pub t: f64,
}

impl TimePoint {
    pub fn chit(&self) -> f64 {
        self.chi * self.t
    }
}

/// Validated run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub mode: Mode,
    pub beta: C64,
    pub times: Vec<TimePoint>,
    pub dim: usize,
    pub dim_overridden: bool,
    pub grid_x: Range,
    pub grid_y: Range,
    pub source: Source,
    pub convention: Convention,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub tol: Tolerances,
}

/// Phase-space points the verify report samples.
pub const VERIFY_POINTS: [(f64, f64); 4] = [(0.0, 0.0), (0.3, 0.4), (-1.0, 0.7), (1.5, -1.0)];

impl RunConfig {
    pub fn from_args(mode: Mode, args: &CommonArgs) -> Result<Self> {
        let beta = C64::new(args.beta_re, args.beta_im);
        if !beta.is_finite() {
            return Err(CliError::Validation("beta must be finite".into()));
        }

        let times: Vec<TimePoint> = if let Some(spec) = &args.chit {
            let values = if spec.contains(':') {
                spec.parse::<Range>()?.values()
            } else {
                let v: f64 = spec
                    .trim()
                    .parse()
                    .map_err(|_| CliError::Validation(format!("bad --chit value {spec:?}")))?;
                vec![v]
            };
            values
                .into_iter()
                .map(|t| TimePoint { chi: 1.0, t })
                .collect()
        } else if let (Some(chi), Some(t_start)) = (args.chi, args.t_start) {
            let t_end = args.t_end.unwrap_or(t_start);
            let steps = args.t_steps.unwrap_or(if t_end == t_start { 1 } else { 2 });
            if steps == 0 {
                return Err(CliError::Validation("--t-steps must be at least 1".into()));
            }
            if steps == 1 && t_end != t_start {
                return Err(CliError::Validation(
                    "--t-steps 1 needs --t-end equal to --t-start".into(),
                ));
            }
            let range = Range {
                min: t_start,
                max: t_end,
                count: steps,
            };
            if t_end < t_start {
                return Err(CliError::Validation("--t-end is before --t-start".into()));
            }
            range
                .values()
                .into_iter()
                .map(|t| TimePoint { chi, t })
                .collect()
        } else {
            let values = match mode {
                Mode::EntropyScan => Range {
                    min: 0.0,
                    max: TAU,
                    count: 101,
                }
                .values(),
                Mode::Wigner | Mode::Verify => vec![FRAC_PI_2],
            };
            values
                .into_iter()
                .map(|t| TimePoint { chi: 1.0, t })
                .collect()
        };
        if times.iter().any(|tp| !tp.chit().is_finite()) {
            return Err(CliError::Validation("time values must be finite".into()));
        }
        if mode == Mode::Wigner && times.len() != 1 {
            return Err(CliError::Validation(
                "wigner evaluates a single time; pass one --chit value".into(),
            ));
        }

        let grid_x: Range = args.grid_x.parse()?;
        let grid_y: Range = args.grid_y.parse()?;
        let source = match args.source {
            SourceArg::Series => Source::Series,
            SourceArg::Closed => Source::Closed,
            SourceArg::Both => Source::Both,
        };
        if mode == Mode::Wigner && source.closed() && beta.im != 0.0 {
            return Err(CliError::Validation(
                "the closed-form Wigner route needs real beta; use --source series".into(),
            ));
        }
        let convention = match args.convention {
            ConventionArg::Parity => Convention::Parity,
            ConventionArg::Standard => Convention::Standard,
        };

        let auto_dim = match mode {
            Mode::EntropyScan => default_dim(beta.norm()),
            Mode::Wigner => wigner_dim(beta, grid_x.max_abs().hypot(grid_y.max_abs())),
            Mode::Verify => wigner_dim(
                beta,
                VERIFY_POINTS
                    .iter()
                    .map(|&(x, y)| f64::hypot(x, y))
                    .fold(0.0, f64::max),
            ),
        };
        let dim = match args.dim {
            Some(0) => return Err(CliError::Validation("--dim must be at least 1".into())),
            Some(d) => d,
            None => auto_dim,
        };

        Ok(Self {
            mode,
            beta,
            times,
            dim,
            dim_overridden: args.dim.is_some(),
            grid_x,
            grid_y,
            source,
            convention,
            format: args.format,
            out: args.out.clone(),
            tol: Tolerances::default(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(extra: &[&str]) -> CommonArgs {
        let mut argv = vec!["entropy-op", "verify"];
        argv.extend_from_slice(extra);
        match Cli::try_parse_from(argv).unwrap().command {
            Command::Verify(a) => a,
            _ => unreachable!(),
        }
    }

    #[test]
    fn ranges() {
        let r: Range = "-3:3:21".parse().unwrap();
        let v = r.values();
        assert_eq!(v.len(), 21);
        assert_eq!(v[0], -3.0);
        assert_eq!(v[10], 0.0);
        assert_eq!(v[20], 3.0);
        assert_eq!("0:0:1".parse::<Range>().unwrap().values(), vec![0.0]);
        assert!("1:0:3".parse::<Range>().is_err());
        assert!("0:1:0".parse::<Range>().is_err());
        assert!("0:1".parse::<Range>().is_err());
        assert!("a:1:2".parse::<Range>().is_err());
    }

    #[test]
    fn chit_forms() {
        let cfg = RunConfig::from_args(Mode::Verify, &args(&["--chit", "0.5"])).unwrap();
        assert_eq!(cfg.times.len(), 1);
        assert_eq!(cfg.times[0].chit(), 0.5);

        let cfg = RunConfig::from_args(Mode::EntropyScan, &args(&["--chit", "0:1:5"])).unwrap();
        assert_eq!(cfg.times.len(), 5);

        let cfg = RunConfig::from_args(
            Mode::EntropyScan,
            &args(&[
                "--chi",
                "2",
                "--t-start",
                "0",
                "--t-end",
                "1",
                "--t-steps",
                "3",
            ]),
        )
        .unwrap();
        let chits: Vec<f64> = cfg.times.iter().map(|t| t.chit()).collect();
        assert_eq!(chits, vec![0.0, 1.0, 2.0]);
    }

    #[test]
    fn defaults() {
        let cfg = RunConfig::from_args(Mode::EntropyScan, &args(&[])).unwrap();
        assert_eq!(cfg.times.len(), 101);
        assert_eq!(cfg.dim, default_dim(1.0));
        let cfg = RunConfig::from_args(Mode::Wigner, &args(&[])).unwrap();
        assert_eq!(cfg.times[0].chit(), FRAC_PI_2);
        assert_eq!(cfg.dim, wigner_dim(C64::new(1.0, 0.0), 18f64.sqrt()));
    }

    #[test]
    fn validation_failures() {
        assert!(RunConfig::from_args(Mode::Verify, &args(&["--dim", "0"])).is_err());
        assert!(RunConfig::from_args(Mode::Verify, &args(&["--chit", "x"])).is_err());
        assert!(RunConfig::from_args(Mode::Wigner, &args(&["--chit", "0:1:3"])).is_err());
        assert!(RunConfig::from_args(Mode::Wigner, &args(&["--beta-im", "0.5"])).is_err());
        assert!(RunConfig::from_args(
            Mode::Wigner,
            &args(&["--beta-im", "0.5", "--source", "series"])
        )
        .is_ok());
        assert!(RunConfig::from_args(Mode::Verify, &args(&["--grid-x", "1:0:2"])).is_err());
        assert!(
            Cli::try_parse_from(["entropy-op", "verify", "--chit", "1", "--chi", "1"]).is_err()
        );
    }
}
