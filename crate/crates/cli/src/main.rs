use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rlink::curve::{mirror, RationalLink};
use rlink::harness::{jump_scan, verify_center_independence, verify_transform_equivariance, ScanOptions};
use rlink::io::{diagram, emit_curve_file, parse_curve_file, read_curve_file, self_linking_json, CurveFileError};
use rlink::projection::{analyze_projection, random_center};
use rlink::writhe::{self_linking, self_linking_random};
use rlink::{Config, Error};

// stdout may be a closed pipe
macro_rules! say {
    ($($arg:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout().lock(), $($arg)*);
    }};
}

#[derive(Parser)]
#[command(name = "rlink", version, about = "Self-linking numbers of real rational links in projective 3-space")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the self-linking number and a JSON report.
    Sl {
        file: PathBuf,
        /// Projection center as four comma-separated homogeneous coordinates.
        #[arg(long, value_parser = parse_center)]
        center: Option<[f64; 4]>,
        /// Residual a double point must reach after refinement.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Compare the values obtained from many random centers.
    Verify {
        file: PathBuf,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also apply this many random projective transforms.
        #[arg(long, default_value_t = 0)]
        transforms: usize,
    },
    /// Draw the projection as an SVG file.
    Diagram {
        file: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_parser = parse_center)]
        center: Option<[f64; 4]>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Write the mirror image of a curve file.
    Mirror {
        file: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Follow the value along a path between two curves and locate its jumps.
    Scan {
        start: PathBuf,
        end: PathBuf,
        #[arg(long, default_value_t = 100)]
        steps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Size of the detour away from the straight path; 0 scans the segment.
        #[arg(long)]
        bend: Option<f64>,
    },
}

fn parse_center(s: &str) -> Result<[f64; 4], String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 4 {
        return Err(format!("expected four comma-separated numbers, got {}", parts.len()));
    }
    let mut c = [0.0; 4];
    for (v, p) in c.iter_mut().zip(&parts) {
        *v = p.trim().parse().map_err(|_| format!("{p:?} is not a number"))?;
    }
    if c.iter().all(|v| *v == 0.0) {
        return Err("the center must be nonzero".into());
    }
    Ok(c)
}

enum Failure {
    Parse(String),
    Invalid(String),
    NonGeneric(String),
    Other(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Self::Other(_) => 1,
            Self::NonGeneric(_) => 2,
            Self::Invalid(_) => 3,
            Self::Parse(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Self::Parse(m) | Self::Invalid(m) | Self::NonGeneric(m) | Self::Other(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NonGenericCenter(_) | Error::ExhaustedRetries { .. } => Self::NonGeneric(e.to_string()),
            Error::InvalidLink(_) => Self::Invalid(e.to_string()),
            _ => Self::Other(e.to_string()),
        }
    }
}

impl From<CurveFileError> for Failure {
    fn from(e: CurveFileError) -> Self {
        if e.is_parse_error() {
            Self::Parse(e.to_string())
        } else {
            Self::Invalid(e.to_string())
        }
    }
}

fn load(path: &Path) -> Result<RationalLink, Failure> {
    let bytes = std::fs::read(path).map_err(|e| Failure::Other(format!("{}: {e}", path.display())))?;
    parse_curve_file(&bytes).map_err(|e| {
        let f = Failure::from(e);
        match f {
            Failure::Parse(m) => Failure::Parse(format!("{}: {m}", path.display())),
            Failure::Invalid(m) => Failure::Invalid(format!("{}: {m}", path.display())),
            other => other,
        }
    })
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Other(format!("{}: {e}", path.display())))
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Sl { file, center, tol, seed } => {
            let link = load(&file)?;
            let mut config = Config::with_seed(seed);
            if let Some(t) = tol {
                config.tolerances.pair_residual = t;
            }
            let report = match center {
                Some(c) => self_linking(&link, &c.into(), &config)?,
                None => self_linking_random(&link, &config)?,
            };
            say!("{}", report.total);
            say!("{}", self_linking_json(&report));
        }
        Command::Verify { file, trials, seed, transforms } => {
            let link = load(&file)?;
            let config = Config::with_seed(seed);
            let report = verify_center_independence(&link, trials, seed, &config)?;
            let value = report.value().map_or("none".to_string(), |v| v.to_string());
            say!("all-equal: {}, value: {value}", report.all_equal());
            say!("{}", to_json(&report));
            let mut ok = report.all_equal();
            if transforms > 0 {
                let eq = verify_transform_equivariance(&link, transforms, seed, &config)?;
                say!("transforms: {}, failures: {}", eq.cases.len(), eq.failures());
                say!("{}", to_json(&eq));
                ok &= eq.failures() == 0;
            }
            if !ok {
                return Err(Failure::Other("verification failed".into()));
            }
        }
        Command::Diagram { file, out, center, seed } => {
            let link = load(&file)?;
            let config = Config::with_seed(seed);
            let proj = match center {
                Some(c) => analyze_projection(&link, &c.into(), &config)?,
                None => random_center(&mut ChaCha8Rng::seed_from_u64(seed), &link, &config)?,
            };
            let doc = diagram(&link, &proj, &config)?;
            write(&out, &doc.to_svg())?;
            say!("{}", doc.total);
        }
        Command::Mirror { file, out } => {
            let bytes = std::fs::read(&file).map_err(|e| Failure::Other(format!("{}: {e}", file.display())))?;
            let name = read_curve_file(&bytes)?.name.map(|n| format!("mirror of {n}"));
            let link = load(&file)?;
            write(&out, &(emit_curve_file(&mirror(&link), name.as_deref()) + "\n"))?;
        }
        Command::Scan { start, end, steps, seed, bend } => {
            let (a, b) = (load(&start)?, load(&end)?);
            let config = Config::with_seed(seed);
            let mut options = ScanOptions { steps, ..ScanOptions::default() };
            if let Some(k) = bend {
                options.bend = k;
            }
            let report = jump_scan(&a, &b, &options, seed, &config)?;
            say!(
                "events: {}, total jump: {}, telescopes: {}, unresolved: {}",
                report.events.len(),
                report.total_jump(),
                report.telescopes(),
                report.unresolved.len()
            );
            say!("{}", to_json(&report));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
