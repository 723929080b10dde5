//! Command-line experiment runner.
//!
//! Every report is a table with the columns listed in [`COLUMNS`], emitted as
//! CSV or as a JSON array of objects with the same keys. Argument parsing and
//! dispatch live in [`run_cli`] so reports can be produced in-process.

use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::analysis::{
    chi_square_uniform, exact_avoidance_probability, limit_logn_liars, limit_overloaded_liars,
    monte_carlo_avoidance, stirling_estimate,
};
use crate::config::{address_len, AgentBehavior, AgentId, ElectionConfig};
use crate::error::Error;
use crate::experiment::{expected_cbits, leader_histogram, run_trials};
use crate::protocol::ProtocolKind;

/// Environment variable holding the default master seed.
pub const SEED_ENV: &str = "FAIR_ELECTION_SEED";

pub const COLUMNS: [&str; 12] = [
    "command", "cell", "n", "k", "L", "trials", "seed", "value", "stderr", "exact", "estimate",
    "verdict",
];

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_REJECTED: i32 = 2;

const AFTER_HELP: &str = "\
Report columns (CSV header and JSON keys):
  command   subcommand that produced the row
  cell      row label: an agent (A1..An) for histograms, or a summary name
  n, k, L   agent count, biased-agent count, address length log2(n)
  trials    number of runs or draws behind the row
  seed      master seed
  value     the row's primary number (count, probability, statistic)
  stderr    binomial standard error where meaningful
  exact     exact or reference value the row is compared against
  estimate  secondary number (frequency, Stirling estimate, TV distance)
  verdict   outcome of the row's check

n accepts either a number or 2^j.
The default seed is read from FAIR_ELECTION_SEED when --seed is absent.
Exit status: 0 success, 1 invalid arguments, 2 a statistical test rejected under --assert.";

#[derive(Debug, Parser)]
#[command(name = "fair-election", version, about = "Fair leader election experiments", after_help = AFTER_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SweepMode {
    /// k = log2 n biased agents
    Logn,
    /// k = round(C n / log2 n) biased agents
    Overloaded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ProtocolArg {
    Quantum,
    Random,
}

#[derive(Debug, Args)]
struct Common {
    /// Master seed.
    #[arg(long, env = SEED_ENV, default_value_t = 42)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Significance level for uniformity tests.
    #[arg(long, default_value_t = 0.001)]
    alpha: f64,
    /// Exit with status 2 when a statistical check fails.
    #[arg(long)]
    assert: bool,
}

#[derive(Debug, Args)]
struct Agents {
    #[arg(long, value_parser = parse_n)]
    n: u64,
    /// Referee agent index.
    #[arg(long, default_value_t = 1)]
    referee: u32,
    /// Make agents A1..Ak biased with --bias.
    #[arg(long, conflicts_with = "biased")]
    k: Option<u64>,
    /// Probability that a biased agent's bit is 1.
    #[arg(long, default_value_t = 1.0)]
    bias: f64,
    /// Explicit biased agents, e.g. "3,5:0.9" (bias defaults to --bias).
    #[arg(long)]
    biased: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run Protocol I (shared GHZ states).
    ElectQuantum {
        #[command(flatten)]
        agents: Agents,
        #[arg(long, default_value_t = 1)]
        trials: u64,
        /// Referee audits every agent's measurement report.
        #[arg(long)]
        audit: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Run Protocol II (one vote bit per agent).
    ElectRandom {
        #[command(flatten)]
        agents: Agents,
        #[arg(long, default_value_t = 1)]
        trials: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Exact p(n,k) and its Stirling estimate.
    Pnk {
        #[arg(long, value_parser = parse_n)]
        n: u64,
        #[arg(long)]
        k: u64,
        #[command(flatten)]
        common: Common,
    },
    /// p(n,k) along powers of two in one of the two asymptotic regimes.
    Sweep {
        #[arg(long, value_enum)]
        mode: SweepMode,
        /// Constant C of the overloaded regime.
        #[arg(long = "C", default_value_t = 1.0)]
        c: f64,
        #[arg(long, value_parser = parse_n, default_value = "2^4")]
        n_min: u64,
        #[arg(long, value_parser = parse_n, default_value = "2^20")]
        n_max: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Monte Carlo estimate of p(n,k) from referee samples.
    Montecarlo {
        #[arg(long, value_parser = parse_n)]
        n: u64,
        #[arg(long)]
        k: u64,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Leader-histogram uniformity test with biased agents.
    BiasTest {
        #[command(flatten)]
        agents: Agents,
        #[arg(long, value_enum, default_value_t = ProtocolArg::Random)]
        protocol: ProtocolArg,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[command(flatten)]
        common: Common,
    },
}

/// Parses `1024` or `2^10`.
fn parse_n(raw: &str) -> Result<u64, String> {
    let parsed = match raw.split_once('^') {
        Some(("2", exp)) => exp
            .trim()
            .parse::<u32>()
            .ok()
            .and_then(|e| 1u64.checked_shl(e).filter(|_| e < 64)),
        Some(_) => None,
        None => raw.trim().parse().ok(),
    };
    parsed.ok_or_else(|| format!("expected an integer or 2^j, got {raw:?}"))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
struct Row {
    command: &'static str,
    cell: String,
    n: u64,
    k: u64,
    #[serde(rename = "L")]
    len: usize,
    trials: u64,
    seed: u64,
    value: Option<f64>,
    stderr: Option<f64>,
    exact: Option<String>,
    estimate: Option<f64>,
    verdict: String,
}

impl Row {
    fn new(command: &'static str, cell: impl Into<String>, n: u64, k: u64, trials: u64, seed: u64) -> Self {
        Self {
            command,
            cell: cell.into(),
            n,
            k,
            len: address_len(n).unwrap_or(0),
            trials,
            seed,
            value: None,
            stderr: None,
            exact: None,
            estimate: None,
            verdict: String::new(),
        }
    }

    fn value(mut self, v: f64) -> Self {
        self.value = Some(v);
        self
    }

    fn stderr(mut self, v: f64) -> Self {
        self.stderr = Some(v);
        self
    }

    fn exact(mut self, v: impl ToString) -> Self {
        self.exact = Some(v.to_string());
        self
    }

    fn estimate(mut self, v: f64) -> Self {
        self.estimate = Some(v);
        self
    }

    fn verdict(mut self, v: impl Into<String>) -> Self {
        self.verdict = v.into();
        self
    }
}

/// Process-independent result of one CLI invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliOutput {
    pub status: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Report {
    rows: Vec<Row>,
    rejected: bool,
}

/// Parses `argv` (program name first) and runs the requested experiment.
pub fn run_cli<I, T>(argv: I) -> CliOutput
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) => {
            let status = if err.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let text = err.render().to_string();
            return if err.use_stderr() {
                CliOutput { status, stdout: String::new(), stderr: text }
            } else {
                CliOutput { status, stdout: text, stderr: String::new() }
            };
        }
    };
    let (format, assert) = match &cli.command {
        Command::ElectQuantum { common, .. }
        | Command::ElectRandom { common, .. }
        | Command::Pnk { common, .. }
        | Command::Sweep { common, .. }
        | Command::Montecarlo { common, .. }
        | Command::BiasTest { common, .. } => (common.format, common.assert),
    };
    match dispatch(cli.command) {
        Ok(report) => {
            let status = if assert && report.rejected { EXIT_REJECTED } else { EXIT_OK };
            CliOutput {
                status,
                stdout: render(&report.rows, format),
                stderr: String::new(),
            }
        }
        Err(err) => CliOutput {
            status: EXIT_INVALID,
            stdout: String::new(),
            stderr: format!("error: {err}\n"),
        },
    }
}

fn dispatch(command: Command) -> Result<Report, Error> {
    match command {
        Command::ElectQuantum { agents, trials, audit, common } => {
            let config = build_config(&agents, common.seed)?.with_audit(audit);
            elections("elect-quantum", &config, ProtocolKind::Quantum, trials, &common)
        }
        Command::ElectRandom { agents, trials, common } => {
            let config = build_config(&agents, common.seed)?;
            elections("elect-random", &config, ProtocolKind::Randomized, trials, &common)
        }
        Command::BiasTest { agents, protocol, trials, common } => {
            let config = build_config(&agents, common.seed)?;
            let protocol = match protocol {
                ProtocolArg::Quantum => ProtocolKind::Quantum,
                ProtocolArg::Random => ProtocolKind::Randomized,
            };
            elections("bias-test", &config, protocol, trials, &common)
        }
        Command::Pnk { n, k, common } => pnk(n, k, &common),
        Command::Sweep { mode, c, n_min, n_max, common } => sweep(mode, c, n_min, n_max, &common),
        Command::Montecarlo { n, k, trials, common } => montecarlo(n, k, trials, &common),
    }
}

fn build_config(agents: &Agents, seed: u64) -> Result<ElectionConfig, Error> {
    let n = u32::try_from(agents.n).map_err(|_| Error::NotPowerOfTwo { n: agents.n })?;
    address_len(agents.n)?;
    let mut behaviors = vec![AgentBehavior::Honest; n as usize];
    if let Some(k) = agents.k {
        if k > agents.n {
            return Err(Error::KOutOfRange { k, n: agents.n });
        }
        behaviors[..k as usize].fill(AgentBehavior::Biased(agents.bias));
    }
    if let Some(list) = &agents.biased {
        for entry in list.split(',').map(str::trim).filter(|e| !e.is_empty()) {
            let (index, bias) = match entry.split_once(':') {
                Some((i, b)) => (i, b.trim().parse().map_err(|_| invalid_bias(i))?),
                None => (entry, agents.bias),
            };
            let index: u32 = index.trim().parse().map_err(|_| Error::AgentOutOfRange { agent: 0, n })?;
            let agent = AgentId::checked(index, n)?;
            behaviors[agent.slot()] = AgentBehavior::Biased(bias);
        }
    }
    ElectionConfig::new(n, AgentId::new(agents.referee), behaviors, seed)
}

fn invalid_bias(index: &str) -> Error {
    Error::BiasOutOfRange {
        agent: index.trim().parse().unwrap_or(0),
        bias: f64::NAN,
    }
}

fn elections(
    command: &'static str,
    config: &ElectionConfig,
    protocol: ProtocolKind,
    trials: u64,
    common: &Common,
) -> Result<Report, Error> {
    if trials == 0 {
        return Err(Error::NoTrials);
    }
    let n = config.n();
    let k = config.biased_count() as u64;
    let seed = config.master_seed();
    let runs = run_trials(config, protocol, trials)?;
    let counts = leader_histogram(&runs, n);
    let row = |cell: String| Row::new(command, cell, u64::from(n), k, trials, seed);

    let mut rows: Vec<Row> = counts
        .iter()
        .enumerate()
        .map(|(slot, &count)| {
            let freq = count as f64 / trials as f64;
            row(format!("A{}", slot + 1))
                .value(count as f64)
                .stderr((freq * (1.0 - freq) / trials as f64).sqrt())
                .exact(1.0 / f64::from(n))
                .estimate(freq)
        })
        .collect();

    let ledger_ok = runs
        .iter()
        .all(|r| r.total_cbits == expected_cbits(protocol, n, r.leader_is_referee));
    let max_cbits = runs.iter().map(|r| r.total_cbits).max().unwrap_or(0);
    rows.push(
        row("cbits".into())
            .value(max_cbits as f64)
            .exact(expected_cbits(protocol, n, false))
            .verdict(if ledger_ok { "ledger-exact" } else { "ledger-mismatch" }),
    );

    if protocol == ProtocolKind::Randomized {
        let avoided = runs.iter().filter(|r| r.avoided_bias == Some(true)).count();
        let freq = avoided as f64 / trials as f64;
        let exact = exact_avoidance_probability(u64::from(n), k)?;
        rows.push(
            row("avoided-bias".into())
                .value(freq)
                .stderr((freq * (1.0 - freq) / trials as f64).sqrt())
                .exact(exact.value)
                .verdict(exact.fraction()),
        );
    }

    let mut rejected = !ledger_ok;
    let summary = match chi_square_uniform(&counts, common.alpha) {
        Ok(report) => {
            rejected |= report.reject_uniform;
            row("chi2".into())
                .value(report.statistic)
                .stderr(report.p_value)
                .exact(report.critical_value_at_alpha)
                .estimate(report.tv_distance)
                .verdict(if report.reject_uniform { "biased" } else { "uniform" })
        }
        Err(Error::TooFewSamples { .. }) => row("chi2".into()).verdict("insufficient-samples"),
        Err(err) => return Err(err),
    };
    rows.push(summary);
    Ok(Report { rows, rejected })
}

fn pnk(n: u64, k: u64, common: &Common) -> Result<Report, Error> {
    let exact = exact_avoidance_probability(n, k)?;
    let mut row = Row::new("pnk", "p", n, k, 0, common.seed)
        .value(exact.value)
        .exact(exact.fraction());
    match stirling_estimate(n, k) {
        Ok(est) => {
            row = row.estimate(est.value);
            if let Some(err) = est.relative_error_vs_exact {
                row = row.stderr(err);
            }
        }
        Err(Error::OutOfRange { .. }) => {}
        Err(err) => return Err(err),
    }
    let row = row.verdict(if exact.defined { "in-range" } else { "outside-range" });
    Ok(Report { rows: vec![row], rejected: false })
}

fn powers_between(n_min: u64, n_max: u64) -> Result<Vec<u64>, Error> {
    let lo = address_len(n_min)?;
    let hi = address_len(n_max)?;
    Ok((lo..=hi).map(|j| 1u64 << j).collect())
}

fn sweep(mode: SweepMode, c: f64, n_min: u64, n_max: u64, common: &Common) -> Result<Report, Error> {
    let ns = powers_between(n_min, n_max)?;
    let (values, limit, cell) = match mode {
        SweepMode::Logn => (limit_logn_liars(&ns)?, 1.0, "logn".to_string()),
        SweepMode::Overloaded => (limit_overloaded_liars(c, &ns)?, (-c).exp(), format!("overloaded:C={c}")),
    };
    let rows = values
        .into_iter()
        .map(|p| {
            let mut row = Row::new("sweep", cell.clone(), p.n, p.k, 0, common.seed)
                .value(p.value)
                .exact(limit);
            if let Ok(est) = stirling_estimate(p.n, p.k) {
                row = row.estimate(est.value);
            }
            let gap = (p.value - limit).abs();
            row.verdict(format!("gap={gap:.6}"))
        })
        .collect();
    Ok(Report { rows, rejected: false })
}

fn montecarlo(n: u64, k: u64, trials: u64, common: &Common) -> Result<Report, Error> {
    let mc = monte_carlo_avoidance(n, k, trials, common.seed)?;
    let exact = exact_avoidance_probability(n, k)?;
    let within = (mc.estimate - exact.value).abs() <= 4.0 * mc.stderr
        || mc.estimate == exact.value;
    let row = Row::new("montecarlo", "p", n, k, trials, common.seed)
        .value(mc.estimate)
        .stderr(mc.stderr)
        .exact(exact.value)
        .estimate(mc.avoided as f64)
        .verdict(if within { "within-4se" } else { "outside-4se" });
    Ok(Report { rows: vec![row], rejected: !within })
}

fn render(rows: &[Row], format: Format) -> String {
    match format {
        Format::Json => {
            let mut out = serde_json::to_string_pretty(rows).expect("rows serialize");
            out.push('\n');
            out
        }
        Format::Csv => {
            let mut out = COLUMNS.join(",");
            out.push('\n');
            for r in rows {
                let fields = [
                    r.command.to_string(),
                    r.cell.clone(),
                    r.n.to_string(),
                    r.k.to_string(),
                    r.len.to_string(),
                    r.trials.to_string(),
                    r.seed.to_string(),
                    opt(r.value),
                    opt(r.stderr),
                    r.exact.clone().unwrap_or_default(),
                    opt(r.estimate),
                    r.verdict.clone(),
                ];
                let _ = writeln!(out, "{}", fields.map(|f| csv_field(&f)).join(","));
            }
            out
        }
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn csv_field(f: &str) -> String {
    if f.contains([',', '"', '\n']) {
        format!("\"{}\"", f.replace('"', "\"\""))
    } else {
        f.to_string()
    }
}
