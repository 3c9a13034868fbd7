//! Command-line front end.
//!
//! Exit codes: 0 success, 2 usage, 3 runtime failure (including failed
//! verification), 4 budget exceeded. Every output file gets a sibling
//! `<file>.manifest.json` from which `percolab replay` reproduces it.

use std::ffi::OsString;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use percolab_core::colorswitch::{switch_last_color, SwitchStage};
use percolab_core::config::{sample_critical, CriticalSampler, RngSeed};
use percolab_core::estimator::{compare_sequences, estimate_arm_prob, fit_exponent, sample_box, Detector, ExperimentSpec};
use percolab_core::{Annulus, ColorSequence, Error};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::formats::{gnuplot_data, write_csv, write_json_lines, EstimateRow, RatioRow, SlopeRow, SwitchRecord};
use crate::runner::{stamp, timed, Deadline, Parallel};
use crate::verify::{run_suite, Suite, VerifyParams, SHIFT};

pub const USAGE: i32 = 2;
pub const RUNTIME: i32 = 3;
pub const BUDGET: i32 = 4;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Runtime(#[from] anyhow::Error),
    #[error("{0}")]
    Budget(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => USAGE,
            CliError::Runtime(_) => RUNTIME,
            CliError::Budget(_) => BUDGET,
        }
    }
}

/// Bad parameters are usage errors; a search running out of budget has its
/// own code; everything else is a runtime failure.
impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidRadii { .. }
            | Error::EmptySequence
            | Error::BadColorToken(_)
            | Error::Monochromatic
            | Error::LengthMismatch
            | Error::SeparationTooSmall(_)
            | Error::RegimeViolation
            | Error::InstanceTooLarge(_)
            | Error::ZeroTrials
            | Error::TooFewPoints => CliError::Usage(e.to_string()),
            Error::SearchBudget => CliError::Budget(e.to_string()),
            other => CliError::Runtime(anyhow::Error::new(other)),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.into())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Runtime(e.into())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Runtime(e.into())
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(name = "percolab", version, about = "Arm events and color switching for critical bond percolation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Estimate P(A_{k,sigma}(n, N)) for one sequence and several N.
    Estimate(EstimateArgs),
    /// Ratio table of several polychromatic sequences on common samples.
    Compare(CompareArgs),
    /// Run property suites.
    Verify(VerifyArgs),
    /// Run the last-color switch on samples and summarise where it stops.
    SwitchDemo(SwitchArgs),
    /// Fit the decay exponent of arm probabilities in N.
    Exponent(ExponentArgs),
    /// Re-run the command recorded in a manifest.
    Replay(ReplayArgs),
    /// Run the experiments listed in a TOML batch file.
    Batch(BatchArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DetectorArg {
    Fast,
    Oracle,
    Separated,
}

impl From<DetectorArg> for Detector {
    fn from(d: DetectorArg) -> Self {
        match d {
            DetectorArg::Fast => Detector::Fast,
            DetectorArg::Oracle => Detector::Oracle,
            DetectorArg::Separated => Detector::Separated,
        }
    }
}

#[derive(Args, Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Common {
    /// Base seed; trial t uses stream t.
    #[arg(long, env = "PERCO_SEED", default_value_t = 1)]
    pub seed: u64,
    /// Worker threads (0 = one per core). Never changes results.
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct EstimateArgs {
    /// Color sequence such as OC*C*.
    #[arg(long)]
    pub sigma: String,
    #[arg(long)]
    pub n: u32,
    /// Outer radius; repeat for several.
    #[arg(long = "N", required = true)]
    pub big: Vec<u32>,
    #[arg(long, default_value_t = 5)]
    pub ell: u32,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    #[arg(long, value_enum, default_value_t = DetectorArg::Fast)]
    pub detector: DetectorArg,
    /// CSV output; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CompareArgs {
    /// Polychromatic sequences of equal length; repeat for each.
    #[arg(long, required = true)]
    pub sigma: Vec<String>,
    #[arg(long)]
    pub n: u32,
    #[arg(long = "N", required = true)]
    pub big: Vec<u32>,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    /// Ratio CSV; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Per-cell estimate CSV.
    #[arg(long)]
    pub estimates: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuiteArg {
    Shift,
    Regions,
    Arms,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scale {
    Quick,
    Full,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = SuiteArg::All)]
    pub suite: SuiteArg,
    /// Wall-clock budget in seconds.
    #[arg(long, default_value_t = 600.0)]
    pub budget: f64,
    #[arg(long, value_enum, default_value_t = Scale::Quick)]
    pub scale: Scale,
    #[arg(long, env = "PERCO_SEED", default_value_t = 1)]
    pub seed: u64,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SwitchArgs {
    #[arg(long, default_value = "OC*C*")]
    pub sigma: String,
    #[arg(long, default_value_t = 4)]
    pub n: u32,
    #[arg(long = "N", default_value_t = 32)]
    pub big: u32,
    #[arg(long, default_value_t = 5)]
    pub ell: u32,
    #[arg(long, default_value_t = 1_000)]
    pub trials: u64,
    /// JSON-lines output, one record per sample; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ExponentArgs {
    /// Sequences to fit; repeat for each.
    #[arg(long, required = true)]
    pub sigma: Vec<String>,
    #[arg(long, default_value_t = 1)]
    pub n: u32,
    /// At least three outer radii.
    #[arg(long = "N", required = true)]
    pub big: Vec<u32>,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    /// Slope table CSV; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Directory for `logN logp` data files, one per sequence.
    #[arg(long)]
    pub data_dir: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ReplayArgs {
    pub manifest: PathBuf,
    /// Write the outputs under this directory instead of their recorded paths.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct BatchArgs {
    pub file: PathBuf,
}

/// What a run needs to be reproduced.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct RunManifest {
    pub command: Command,
    pub seed: u64,
    pub version: String,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
    pub outputs: Vec<PathBuf>,
}

pub fn manifest_path(output: &Path) -> PathBuf {
    let mut s = output.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

fn write_manifests(command: &Command, seed: u64, outputs: &[PathBuf]) -> CliResult<()> {
    let m = RunManifest {
        command: command.clone(),
        seed,
        version: env!("CARGO_PKG_VERSION").to_string(),
        timestamp: SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()),
        outputs: outputs.to_vec(),
    };
    let text = serde_json::to_string_pretty(&m)? + "\n";
    for out in outputs {
        fs::write(manifest_path(out), &text)?;
    }
    Ok(())
}

fn parse_sigma(s: &str) -> CliResult<ColorSequence> {
    s.parse::<ColorSequence>().map_err(CliError::from)
}

fn runner(workers: usize) -> CliResult<Parallel> {
    Parallel::new(workers).map_err(|e| CliError::Runtime(e.into()))
}

/// Writes to `path`, or to stdout when there is none.
fn emit(path: Option<&Path>, bytes: &[u8]) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, bytes)?,
        None => std::io::stdout().write_all(bytes)?,
    }
    Ok(())
}

fn csv_bytes<R: Serialize>(rows: &[R]) -> CliResult<Vec<u8>> {
    let mut buf = Vec::new();
    write_csv(&mut buf, rows)?;
    Ok(buf)
}

fn cmd_estimate(a: &EstimateArgs) -> CliResult<Vec<PathBuf>> {
    let sigma = parse_sigma(&a.sigma)?;
    let spec = ExperimentSpec {
        sigma: sigma.clone(),
        n: a.n,
        outer: a.big.clone(),
        ell: a.ell,
        trials: a.trials,
        seed: a.common.seed,
        detector: a.detector.into(),
    };
    spec.validate()?;
    let source = CriticalSampler { seed: a.common.seed };
    let run = runner(a.common.workers)?;
    let (est, secs) = timed(|| estimate_arm_prob(&spec, &source, &run));
    let mut est = est?;
    stamp(&mut est, secs);
    let rows: Vec<EstimateRow> = a.big.iter().zip(&est).map(|(&big, e)| EstimateRow::new(&sigma, a.n, big, a.ell, e)).collect();
    emit(a.out.as_deref(), &csv_bytes(&rows)?)?;
    eprintln!("estimate: {} cells, {} trials each, {secs:.2}s", rows.len(), a.trials);
    Ok(a.out.iter().cloned().collect())
}

fn cmd_compare(a: &CompareArgs) -> CliResult<Vec<PathBuf>> {
    if a.sigma.len() < 2 {
        return Err(CliError::Usage("compare needs at least two --sigma".into()));
    }
    let sigmas = a.sigma.iter().map(|s| parse_sigma(s)).collect::<CliResult<Vec<_>>>()?;
    let source = CriticalSampler { seed: a.common.seed };
    let run = runner(a.common.workers)?;
    let table = compare_sequences(&sigmas, a.n, &a.big, a.trials, &source, &run)?;
    let rows: Vec<RatioRow> = table.ratios.iter().map(RatioRow::from).collect();
    emit(a.out.as_deref(), &csv_bytes(&rows)?)?;
    let mut outputs: Vec<PathBuf> = a.out.iter().cloned().collect();
    if let Some(path) = &a.estimates {
        let mut est = Vec::new();
        for (s, row) in sigmas.iter().zip(&table.estimates) {
            for (&big, e) in a.big.iter().zip(row) {
                est.push(EstimateRow::new(s, a.n, big, 5, e));
            }
        }
        fs::write(path, csv_bytes(&est)?)?;
        outputs.push(path.clone());
    }
    Ok(outputs)
}

fn cmd_verify(a: &VerifyArgs) -> CliResult<Vec<PathBuf>> {
    let params = match a.scale {
        Scale::Quick => VerifyParams::quick(a.seed),
        Scale::Full => VerifyParams::full(a.seed),
    };
    let suite = match a.suite {
        SuiteArg::Shift => Suite::Shift,
        SuiteArg::Regions => Suite::Regions,
        SuiteArg::Arms => Suite::Arms,
        SuiteArg::All => Suite::All,
    };
    let rep = run_suite(suite, &params, SHIFT, Deadline::after_secs(a.budget))?;
    print!("{}", rep.render());
    if rep.budget_exceeded {
        return Err(CliError::Budget(format!("budget of {}s exceeded", a.budget)));
    }
    if rep.violations() > 0 {
        return Err(CliError::Runtime(anyhow::anyhow!("{} violations", rep.violations())));
    }
    Ok(Vec::new())
}

fn cmd_switch(a: &SwitchArgs) -> CliResult<Vec<PathBuf>> {
    let sigma = parse_sigma(&a.sigma)?;
    if sigma.len() < 3 {
        return Err(CliError::Usage("switch-demo needs k >= 3".into()));
    }
    let annulus = Annulus::centered(a.n, a.big)?;
    if a.trials == 0 {
        return Err(Error::ZeroTrials.into());
    }
    let seed = a.common.seed;
    let run = runner(a.common.workers)?;
    let reports: Vec<SwitchRecord> = run.install(|| {
        (0..a.trials)
            .into_par_iter()
            .map(|t| {
                let cfg = sample_critical(sample_box(a.big), RngSeed::new(seed, t));
                switch_last_color(&cfg, annulus, &sigma, a.ell).map(|r| SwitchRecord::new(t, seed, &r))
            })
            .collect::<Result<_, Error>>()
    })?;
    let mut buf = Vec::new();
    write_json_lines(&mut buf, &reports)?;
    emit(a.out.as_deref(), &buf)?;
    let summary = SwitchSummary::of(&reports);
    // the summary goes to stderr so that stdout stays pure JSON lines
    eprint!("{}", summary.render());
    Ok(a.out.iter().cloned().collect())
}

/// Success rate over qualifying samples and the count of each failure stage.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SwitchSummary {
    pub samples: u64,
    pub qualifying: u64,
    pub successes: u64,
    pub stages: Vec<(String, u64)>,
}

impl SwitchSummary {
    pub fn of(records: &[SwitchRecord]) -> Self {
        let mut s = SwitchSummary { samples: records.len() as u64, ..Default::default() };
        s.stages = SwitchStage::ALL.iter().map(|st| (st.name().to_string(), 0)).collect();
        for r in records {
            s.qualifying += r.qualifying as u64;
            s.successes += (r.qualifying && r.failure.is_none()) as u64;
            if let Some(f) = &r.failure {
                if let Some(slot) = s.stages.iter_mut().find(|(n, _)| n == f) {
                    slot.1 += 1;
                }
            }
        }
        s
    }

    pub fn rate(&self) -> f64 {
        if self.qualifying == 0 {
            0.0
        } else {
            self.successes as f64 / self.qualifying as f64
        }
    }

    pub fn render(&self) -> String {
        let mut out = format!(
            "samples {} qualifying {} successes {} rate {:.4}\n",
            self.samples,
            self.qualifying,
            self.successes,
            self.rate()
        );
        for (name, count) in &self.stages {
            out.push_str(&format!("  failed at {name}: {count}\n"));
        }
        out
    }
}

/// File name for a sequence: `*` becomes `s`.
pub fn sigma_file_stem(sigma: &ColorSequence) -> String {
    sigma.to_string().replace('*', "s")
}

fn cmd_exponent(a: &ExponentArgs) -> CliResult<Vec<PathBuf>> {
    let sigmas = a.sigma.iter().map(|s| parse_sigma(s)).collect::<CliResult<Vec<_>>>()?;
    let source = CriticalSampler { seed: a.common.seed };
    let run = runner(a.common.workers)?;
    let mut rows = Vec::new();
    let mut outputs: Vec<PathBuf> = a.out.iter().cloned().collect();
    if let Some(dir) = &a.data_dir {
        fs::create_dir_all(dir)?;
    }
    for s in &sigmas {
        let (est, fit) = fit_exponent(s, a.n, &a.big, a.trials, &source, &run)?;
        rows.push(SlopeRow { sigma: s.to_string(), n: a.n, points: est.len(), slope: fit.slope, stderr: fit.stderr, intercept: fit.intercept });
        if let Some(dir) = &a.data_dir {
            let pts: Vec<(u32, _)> = a.big.iter().copied().zip(est).collect();
            let path = dir.join(format!("{}.dat", sigma_file_stem(s)));
            fs::write(&path, gnuplot_data(s, a.n, &pts))?;
            outputs.push(path);
        }
    }
    emit(a.out.as_deref(), &csv_bytes(&rows)?)?;
    Ok(outputs)
}

impl Command {
    fn seed(&self) -> u64 {
        match self {
            Command::Estimate(a) => a.common.seed,
            Command::Compare(a) => a.common.seed,
            Command::Verify(a) => a.seed,
            Command::SwitchDemo(a) => a.common.seed,
            Command::Exponent(a) => a.common.seed,
            Command::Replay(_) | Command::Batch(_) => 0,
        }
    }

    /// Same command with every output moved into `dir`.
    pub fn relocated(&self, dir: &Path) -> Command {
        let mv = |p: &Option<PathBuf>| p.as_ref().map(|p| dir.join(p.file_name().unwrap_or(p.as_os_str())));
        let mut c = self.clone();
        match &mut c {
            Command::Estimate(a) => a.out = mv(&a.out),
            Command::Compare(a) => {
                a.out = mv(&a.out);
                a.estimates = mv(&a.estimates);
            }
            Command::SwitchDemo(a) => a.out = mv(&a.out),
            Command::Exponent(a) => {
                a.out = mv(&a.out);
                a.data_dir = a.data_dir.as_ref().map(|_| dir.to_path_buf());
            }
            Command::Verify(_) | Command::Replay(_) | Command::Batch(_) => {}
        }
        c
    }
}

fn cmd_replay(a: &ReplayArgs) -> CliResult<()> {
    let text = fs::read_to_string(&a.manifest)?;
    let m: RunManifest = serde_json::from_str(&text)?;
    let command = match &a.out_dir {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            m.command.relocated(dir)
        }
        None => m.command,
    };
    if matches!(command, Command::Replay(_) | Command::Batch(_)) {
        return Err(CliError::Usage("manifest does not record an experiment".into()));
    }
    execute(&command)
}

/// `[[experiment]]` tables with a `command` key; other keys become flags,
/// arrays become repeated flags.
fn batch_commands(text: &str) -> CliResult<Vec<Vec<String>>> {
    #[derive(Deserialize)]
    struct Batch {
        #[serde(default)]
        experiment: Vec<toml::Table>,
    }
    let batch: Batch = toml::from_str(text).map_err(|e| CliError::Usage(format!("batch file: {e}")))?;
    let mut out = Vec::new();
    for table in batch.experiment {
        let command = table
            .get("command")
            .and_then(|v| v.as_str())
            .ok_or_else(|| CliError::Usage("batch experiment without a command".into()))?;
        let mut argv = vec!["percolab".to_string(), command.to_string()];
        for (key, value) in &table {
            if key == "command" {
                continue;
            }
            let values = match value {
                toml::Value::Array(items) => items.clone(),
                v => vec![v.clone()],
            };
            for v in values {
                let text = match v {
                    toml::Value::String(s) => s,
                    toml::Value::Integer(i) => i.to_string(),
                    toml::Value::Float(f) => f.to_string(),
                    toml::Value::Boolean(b) => b.to_string(),
                    other => return Err(CliError::Usage(format!("unsupported value for {key}: {other}"))),
                };
                argv.push(format!("--{key}"));
                argv.push(text);
            }
        }
        out.push(argv);
    }
    Ok(out)
}

fn cmd_batch(a: &BatchArgs) -> CliResult<()> {
    let text = fs::read_to_string(&a.file)?;
    let runs = batch_commands(&text)?;
    for argv in runs {
        let cli = Cli::try_parse_from(&argv).map_err(|e| CliError::Usage(e.to_string()))?;
        if matches!(cli.command, Command::Batch(_) | Command::Replay(_)) {
            return Err(CliError::Usage("batch files may only list experiments".into()));
        }
        execute(&cli.command)?;
    }
    Ok(())
}

/// Runs a command and writes its manifests.
pub fn execute(command: &Command) -> CliResult<()> {
    let outputs = match command {
        Command::Estimate(a) => cmd_estimate(a)?,
        Command::Compare(a) => cmd_compare(a)?,
        Command::Verify(a) => cmd_verify(a)?,
        Command::SwitchDemo(a) => cmd_switch(a)?,
        Command::Exponent(a) => cmd_exponent(a)?,
        Command::Replay(a) => return cmd_replay(a),
        Command::Batch(a) => return cmd_batch(a),
    };
    if !outputs.is_empty() {
        write_manifests(command, command.seed(), &outputs)?;
    }
    Ok(())
}

/// Parses `args` (program name first) and runs; returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_classes() {
        assert_eq!(CliError::from(Error::Monochromatic).code(), USAGE);
        assert_eq!(CliError::from(Error::SearchBudget).code(), BUDGET);
        assert_eq!(CliError::from(Error::ArmsIntersect).code(), RUNTIME);
    }

    #[test]
    fn batch_parsing() {
        let text = "[[experiment]]\ncommand = \"estimate\"\nsigma = \"OC*\"\nn = 2\nN = [16, 32]\n";
        let runs = batch_commands(text).unwrap();
        assert_eq!(runs, vec![vec!["percolab", "estimate", "--N", "16", "--N", "32", "--n", "2", "--sigma", "OC*"]]);
        assert!(batch_commands("[[experiment]]\nn = 2\n").is_err());
    }

    #[test]
    fn relocation_keeps_file_names() {
        let cli = Cli::try_parse_from(["percolab", "estimate", "--sigma", "O", "--n", "1", "--N", "4", "--out", "/a/b/x.csv"]).unwrap();
        match cli.command.relocated(Path::new("/tmp/r")) {
            Command::Estimate(a) => assert_eq!(a.out, Some(PathBuf::from("/tmp/r/x.csv"))),
            _ => unreachable!(),
        }
    }

    #[test]
    fn stem() {
        assert_eq!(sigma_file_stem(&"OC*OC*O".parse().unwrap()), "OCsOCsO");
    }
}
