//! Command-line front end for `spinlab`: sweeps, estimation runs and
//! tomography exports written as CSV or JSON plus a JSON sidecar.

mod commands;
pub mod config;
pub mod table;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

pub use config::merge_config;
pub use table::{Cell, Table};

/// Inclusive grid `start:stop:count`; a bare number is a one-point grid.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Range {
    pub fn values(&self) -> Vec<f64> {
        spinlab::reference::linspace(self.start, self.stop, self.count)
    }
}

impl FromStr for Range {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |p: &str| p.trim().parse::<f64>().map_err(|_| format!("'{p}' is not a number in range '{s}'"));
        let r = match parts.as_slice() {
            [x] => Range { start: num(x)?, stop: num(x)?, count: 1 },
            [a, b, c] => Range {
                start: num(a)?,
                stop: num(b)?,
                count: c.trim().parse().map_err(|_| format!("count '{c}' in range '{s}' is not a positive integer"))?,
            },
            _ => return Err(format!("range '{s}' must be start:stop:count")),
        };
        if r.count == 0 {
            return Err(format!("range '{s}' has count 0"));
        }
        if !r.start.is_finite() || !r.stop.is_finite() {
            return Err(format!("range '{s}' has non-finite endpoints"));
        }
        Ok(r)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct Common {
    /// Output file; defaults to `<subcommand>.<format>` in the working directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Worker threads; falls back to SPINLAB_THREADS, then to all cores.
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Clone, Debug, Parser, Serialize)]
#[command(name = "spinlab", version, about = "Collective-spin metrology numerics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Debug, Subcommand, Serialize)]
#[serde(tag = "subcommand", rename_all = "kebab-case")]
pub enum Command {
    /// One-axis twisting from a coherent state: numerics against closed forms.
    OatSweep(OatArgs),
    /// Ground states of the bosonic Josephson junction across Lambda.
    BjjGround(BjjArgs),
    /// Spin-mixing dynamics out of m_F = 0, or ground states across q.
    SpinMixing(SpinMixingArgs),
    /// SU(1,1) interferometer phase scan.
    Su11(Su11Args),
    /// Repeated phase estimation with the coherent-probe model.
    Estimate(EstimateArgs),
    /// Quasi-probability map of a spin state on the sphere.
    Tomography(TomographyArgs),
    /// Entanglement and Bell-correlation witnesses along a twisting sweep.
    Witness(WitnessArgs),
    /// Sensitivity floors under loss and phase noise.
    Floors(FloorsArgs),
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct OatArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value = "0:1.5707963267948966:50")]
    pub chit: Range,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct BjjArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Range,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub delta_e: f64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SpinMixingMode {
    Dynamics,
    Ground,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct SpinMixingArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = SpinMixingMode::Dynamics)]
    pub mode: SpinMixingMode,
    /// Quadratic Zeeman energy; a range in ground mode, a single value in dynamics mode.
    #[arg(long, allow_hyphen_values = true)]
    pub q: Range,
    #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
    pub lambda_sign: f64,
    /// Evolution times (dynamics mode).
    #[arg(long)]
    pub t: Option<Range>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct Su11Args {
    #[arg(long)]
    pub n: usize,
    /// Defaults to the pair-creation resonance q = -lambda (2N - 1).
    #[arg(long, allow_hyphen_values = true)]
    pub q: Option<f64>,
    #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
    pub lambda_sign: f64,
    #[arg(long)]
    pub t_mix: f64,
    #[arg(long, default_value = "0:6.283185307179586:201")]
    pub theta: Range,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct EstimateArgs {
    #[arg(long, default_value_t = 50)]
    pub n: usize,
    #[arg(long, default_value = "mle")]
    pub method: String,
    #[arg(long)]
    pub nu: usize,
    #[arg(long)]
    pub reps: usize,
    /// Required: estimation runs are stochastic.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub theta: f64,
    /// Search window; defaults to theta ± 40/sqrt(nu N) with 2001 points.
    #[arg(long, allow_hyphen_values = true)]
    pub window: Option<Range>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StateKind {
    Coherent,
    Dicke,
    TwinFock,
    Noon,
    W,
    Oat,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct StateArgs {
    #[arg(long, value_enum, default_value_t = StateKind::Coherent)]
    pub state: StateKind,
    /// Polar angle of the coherent state.
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2, allow_hyphen_values = true)]
    pub theta: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub phi: f64,
    /// Dicke magnetization.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub m: f64,
    /// Twisting strength for the OAT state, seeded by the x-polarized coherent state.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub chit: f64,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct TomographyArgs {
    #[arg(long)]
    pub n: usize,
    #[command(flatten)]
    pub state: StateArgs,
    /// p, w or q
    #[arg(long, default_value = "w")]
    pub kind: String,
    #[arg(long)]
    pub n_theta: Option<usize>,
    #[arg(long)]
    pub n_phi: Option<usize>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct WitnessArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value = "0:0.1:21")]
    pub chit: Range,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct FloorsArgs {
    /// Particle numbers.
    #[arg(long)]
    pub n: Range,
    #[arg(long, default_value_t = 1.0)]
    pub eta: f64,
    #[arg(long, default_value_t = 0.0)]
    pub sigma: f64,
    #[arg(long, default_value_t = 1.0)]
    pub nu: f64,
    #[command(flatten)]
    pub common: Common,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::OatSweep(_) => "oat-sweep",
            Command::BjjGround(_) => "bjj-ground",
            Command::SpinMixing(_) => "spin-mixing",
            Command::Su11(_) => "su11",
            Command::Estimate(_) => "estimate",
            Command::Tomography(_) => "tomography",
            Command::Witness(_) => "witness",
            Command::Floors(_) => "floors",
        }
    }

    pub fn common(&self) -> &Common {
        match self {
            Command::OatSweep(a) => &a.common,
            Command::BjjGround(a) => &a.common,
            Command::SpinMixing(a) => &a.common,
            Command::Su11(a) => &a.common,
            Command::Estimate(a) => &a.common,
            Command::Tomography(a) => &a.common,
            Command::Witness(a) => &a.common,
            Command::Floors(a) => &a.common,
        }
    }
}

/// Failures mapped onto exit codes.
#[derive(Debug)]
pub enum Failure {
    /// Exit 2.
    Usage(String),
    /// Exit 1.
    Numerical(String),
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Numerical(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Numerical(m) => m,
        }
    }
}

impl From<spinlab::Error> for Failure {
    fn from(e: spinlab::Error) -> Self {
        match e {
            spinlab::Error::InvalidArgument(_) => Failure::Usage(e.to_string()),
            _ => Failure::Numerical(e.to_string()),
        }
    }
}

pub(crate) fn usage<T>(msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure::Usage(msg.into()))
}

/// What a subcommand produced: the primary table plus extra sidecar fields.
pub struct Output {
    pub table: Table,
    pub summary: serde_json::Value,
    /// Overrides the table as the CSV body (tomography maps).
    pub csv_body: Option<Vec<u8>>,
}

fn thread_count(flag: Option<usize>) -> Result<usize, Failure> {
    let n = match flag {
        Some(n) => n,
        None => match std::env::var("SPINLAB_THREADS") {
            Ok(v) => v.trim().parse().map_err(|_| Failure::Usage(format!("SPINLAB_THREADS='{v}' is not a thread count")))?,
            Err(_) => std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
        },
    };
    if n == 0 {
        return usage("thread count must be at least 1");
    }
    Ok(n)
}

fn sidecar_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "output".into());
    out.with_file_name(format!("{stem}.meta.json"))
}

/// Runs one invocation; returns the process exit code.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv: Vec<String> = argv.into_iter().map(Into::into).collect();
    match execute(&argv) {
        Ok(()) => 0,
        Err(f) => {
            eprintln!("spinlab: {}", f.message().lines().next().unwrap_or(""));
            f.code()
        }
    }
}

fn execute(argv: &[String]) -> Result<(), Failure> {
    let (merged, config_file) = merge_config(argv)?;
    let cli = match Cli::try_parse_from(&merged) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return Ok(());
            }
            let text = e.to_string();
            let line: Vec<&str> = text
                .lines()
                .map(str::trim)
                .take_while(|l| !l.starts_with("Usage:") && !l.starts_with("For more information"))
                .filter(|l| !l.is_empty())
                .collect();
            return usage(line.join(" ").trim_start_matches("error: ").to_string());
        }
    };
    let common = cli.command.common().clone();
    let threads = thread_count(common.threads)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Failure::Numerical(format!("cannot start worker pool: {e}")))?;

    let started = Instant::now();
    let output = pool.install(|| commands::dispatch(&cli.command))?;
    let wall = started.elapsed().as_secs_f64();

    let ext = match common.format {
        Format::Csv => "csv",
        Format::Json => "json",
    };
    let out = common.out.clone().unwrap_or_else(|| PathBuf::from(format!("{}.{ext}", cli.command.name())));
    let body = match common.format {
        Format::Csv => match output.csv_body {
            Some(b) => b,
            None => {
                let mut buf = Vec::new();
                output.table.write_csv(&mut buf).expect("writing to memory");
                buf
            }
        },
        Format::Json => {
            let mut v = output.table.to_json();
            if let serde_json::Value::Object(extra) = &output.summary {
                v["summary"] = serde_json::Value::Object(extra.clone());
            }
            let mut s = serde_json::to_string_pretty(&v).expect("serializable");
            s.push('\n');
            s.into_bytes()
        }
    };
    std::fs::write(&out, body).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", out.display())))?;

    let meta = serde_json::json!({
        "subcommand": cli.command.name(),
        "config": cli.command,
        "config_file": config_file,
        "version": env!("CARGO_PKG_VERSION"),
        "threads": threads,
        "wall_time_s": wall,
        "output": out,
        "columns": output.table.columns,
        "summary": output.summary,
    });
    let side = sidecar_path(&out);
    let mut text = serde_json::to_string_pretty(&meta).expect("serializable");
    text.push('\n');
    std::fs::write(&side, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", side.display())))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_parse() {
        let r: Range = "0:1:5".parse().unwrap();
        assert_eq!(r.values(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        let r: Range = "-2:4:3".parse().unwrap();
        assert_eq!(r.values(), vec![-2.0, 1.0, 4.0]);
        let one: Range = "0.5".parse().unwrap();
        assert_eq!(one.values(), vec![0.5]);
        assert!("0:1:0".parse::<Range>().is_err());
        assert!("0:1".parse::<Range>().is_err());
        assert!("a:1:2".parse::<Range>().is_err());
    }

    #[test]
    fn sidecar_sits_next_to_output() {
        assert_eq!(sidecar_path(Path::new("/tmp/x/oat.csv")), PathBuf::from("/tmp/x/oat.meta.json"));
    }
}
