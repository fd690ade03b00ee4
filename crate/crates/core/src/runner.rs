//! Scenario files, RTO sweeps and CSV outputs.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::engine::{ReplicationResult, Scenario, Simulator};
use crate::error::{Error, Result};
use crate::indices::{aggregate, compute_indices, percent_difference, IndexDistribution, PercentDifference, ReliabilityIndices};
use crate::sampling::{ComponentReliability, RtoParameters};
use crate::timeline::ComponentState;
use crate::topology::{load_network, NetworkModel};

pub const SCENARIO_FORMAT_VERSION: u32 = 1;

/// Root seed used when neither the scenario file nor the command line sets one.
pub const DEFAULT_SEED: u64 = 20_160_815;

pub const SUMMARY_FILE: &str = "summary.csv";
pub const PERCENT_DIFFERENCE_FILE: &str = "percent_difference.csv";
pub const PLOT_FILE: &str = "rto_sweep_plot.csv";
pub const SAMPLES_FILE: &str = "samples.csv";
pub const TRANSITIONS_FILE: &str = "transitions.csv";
pub const RECORDS_FILE: &str = "records.csv";

pub const SUMMARY_HEADER: [&str; 13] = [
    "scenario",
    "mu_rto",
    "sigma_rto",
    "horizon_years",
    "replications",
    "seed",
    "failure_rate",
    "availability",
    "nines",
    "saidi",
    "saifi",
    "saidi_std",
    "saifi_std",
];
pub const PERCENT_DIFFERENCE_HEADER: [&str; 6] =
    ["mu_rto", "sigma_rto", "nines", "saidi", "pct_availability", "pct_saidi"];
pub const PLOT_HEADER: [&str; 3] = ["mu_rto", "pct_availability", "pct_saidi"];
pub const SAMPLES_HEADER: [&str; 8] = [
    "mu_rto",
    "sigma_rto",
    "replication",
    "failure_rate",
    "availability",
    "nines",
    "saidi",
    "saifi",
];
pub const TRANSITIONS_HEADER: [&str; 4] = ["component", "id", "time_h", "state"];
pub const RECORDS_HEADER: [&str; 8] = [
    "mu_rto",
    "sigma_rto",
    "fault",
    "kind",
    "branches",
    "customers",
    "start_h",
    "duration_h",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReliabilityDocument {
    pub branch: ComponentReliability,
    pub comm_switch: ComponentReliability,
    pub controller: ComponentReliability,
    #[serde(default = "ComponentReliability::fully_reliable")]
    pub server: ComponentReliability,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioDocument {
    pub version: u32,
    pub name: String,
    /// Network file, relative to the scenario file.
    pub network: PathBuf,
    pub horizon_years: f64,
    pub replications: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub reliability: ReliabilityDocument,
    #[serde(default)]
    pub rto: RtoParameters,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sweep: Vec<RtoParameters>,
}

impl ScenarioDocument {
    fn to_scenario(&self, network: Arc<NetworkModel>, seed: u64) -> Scenario {
        Scenario {
            network,
            branch: self.reliability.branch,
            comm_switch: self.reliability.comm_switch,
            controller: self.reliability.controller,
            server: self.reliability.server,
            rto: self.rto,
            horizon_years: self.horizon_years,
            replications: self.replications,
            seed,
        }
    }
}

pub fn read_scenario_document(path: &Path) -> Result<ScenarioDocument> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let doc: ScenarioDocument = toml::from_str(&text).map_err(|e| Error::Schema {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    if doc.version != SCENARIO_FORMAT_VERSION {
        return Err(Error::Schema {
            path: path.to_path_buf(),
            message: format!(
                "unsupported scenario version {} (expected {SCENARIO_FORMAT_VERSION})",
                doc.version
            ),
        });
    }
    Ok(doc)
}

fn network_path(scenario_path: &Path, doc: &ScenarioDocument) -> PathBuf {
    match scenario_path.parent() {
        Some(dir) if doc.network.is_relative() => dir.join(&doc.network),
        _ => doc.network.clone(),
    }
}

/// A scenario together with the RTO settings to run it under.
#[derive(Debug, Clone)]
pub struct Study {
    pub name: String,
    pub scenario: Scenario,
    /// Empty for a single run at `scenario.rto`.
    pub sweep: Vec<RtoParameters>,
}

impl Study {
    pub fn load(path: &Path) -> Result<Self> {
        let doc = read_scenario_document(path)?;
        let network = load_network(&network_path(path, &doc))?;
        let scenario = doc.to_scenario(Arc::new(network), doc.seed.unwrap_or(DEFAULT_SEED));
        scenario.validate()?;
        Ok(Self {
            name: doc.name,
            scenario,
            sweep: doc.sweep,
        })
    }

    /// The RTO settings actually simulated, in output order.
    pub fn rto_points(&self) -> Vec<RtoParameters> {
        if self.sweep.is_empty() {
            vec![self.scenario.rto]
        } else {
            self.sweep.clone()
        }
    }
}

/// Results of one scenario at one RTO setting.
#[derive(Debug, Clone)]
pub struct ScenarioOutcome {
    pub rto: RtoParameters,
    pub samples: Vec<ReliabilityIndices>,
    pub distribution: IndexDistribution,
    /// Replication 0, kept for timeline dumps.
    pub first_replication: ReplicationResult,
}

pub fn simulate(scenario: &Scenario, jobs: Option<usize>) -> Result<ScenarioOutcome> {
    let results = Simulator::new(scenario.clone())?.run(jobs)?;
    let net = &scenario.network.electrical;
    let samples: Vec<ReliabilityIndices> = results
        .iter()
        .map(|r| compute_indices(r, net, scenario.horizon_years))
        .collect();
    let distribution = aggregate(&samples)?;
    let first_replication = results.into_iter().next().ok_or(Error::EmptySamples)?;
    Ok(ScenarioOutcome {
        rto: scenario.rto,
        samples,
        distribution,
        first_replication,
    })
}

/// Runs `scenario` once per RTO point, reusing the same seed so every point
/// sees the same component chronologies.
pub fn simulate_sweep(
    scenario: &Scenario,
    points: &[RtoParameters],
    jobs: Option<usize>,
) -> Result<Vec<ScenarioOutcome>> {
    points
        .iter()
        .map(|&rto| simulate(&scenario.with_rto(rto), jobs))
        .collect()
}

/// Index of the sweep baseline: the first point with `mu_rto = 0`, else the
/// first point.
pub fn baseline_index(points: &[RtoParameters]) -> usize {
    points.iter().position(|p| p.mu_rto == 0.0).unwrap_or(0)
}

pub fn sweep_differences(outcomes: &[ScenarioOutcome]) -> Result<Vec<PercentDifference>> {
    let points: Vec<RtoParameters> = outcomes.iter().map(|o| o.rto).collect();
    let base = outcomes
        .get(baseline_index(&points))
        .ok_or(Error::EmptySamples)?
        .distribution
        .means();
    outcomes
        .iter()
        .map(|o| percent_difference(&base, &o.distribution.means()))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub scenario_path: PathBuf,
    pub out_dir: PathBuf,
    /// Overrides the scenario's seed.
    pub seed: Option<u64>,
    /// Overrides the scenario's sweep.
    pub sweep: Option<Vec<RtoParameters>>,
    /// Worker threads; `None` uses every core.
    pub jobs: Option<usize>,
    pub emit_samples: bool,
    pub emit_timelines: bool,
}

impl RunManifest {
    pub fn new(scenario_path: impl Into<PathBuf>, out_dir: impl Into<PathBuf>) -> Self {
        Self {
            scenario_path: scenario_path.into(),
            out_dir: out_dir.into(),
            seed: None,
            sweep: None,
            jobs: None,
            emit_samples: false,
            emit_timelines: false,
        }
    }
}

/// Every problem that would stop `run`, without simulating anything.
pub fn validate(manifest: &RunManifest) -> Vec<String> {
    let mut out = Vec::new();
    if manifest.jobs == Some(0) {
        out.push("jobs must be >= 1".to_string());
    }
    let doc = match read_scenario_document(&manifest.scenario_path) {
        Ok(doc) => doc,
        Err(e) => {
            out.push(e.to_string());
            return out;
        }
    };
    let path = network_path(&manifest.scenario_path, &doc);
    let network = match load_network(&path) {
        Ok(n) => Some(n),
        Err(Error::Network(issues)) => {
            out.extend(issues.iter().map(|i| format!("{}: {i}", path.display())));
            None
        }
        Err(e) => {
            out.push(e.to_string());
            None
        }
    };
    if let Some(network) = network {
        let scenario = doc.to_scenario(Arc::new(network), 0);
        out.extend(scenario.diagnostics());
    }
    let sweep = manifest.sweep.as_ref().unwrap_or(&doc.sweep);
    for (i, p) in sweep.iter().enumerate() {
        if let Err(e) = p.validate() {
            out.push(format!("sweep[{i}]: {e}"));
        }
    }
    out
}

/// Loads, simulates and writes every requested output. Returns the paths
/// written.
pub fn run(manifest: &RunManifest) -> Result<Vec<PathBuf>> {
    let diagnostics = validate(manifest);
    if !diagnostics.is_empty() {
        return Err(Error::Scenario(diagnostics));
    }
    let mut study = Study::load(&manifest.scenario_path)?;
    if let Some(seed) = manifest.seed {
        study.scenario.seed = seed;
    }
    if let Some(sweep) = &manifest.sweep {
        study.sweep = sweep.clone();
    }
    let outcomes = simulate_sweep(&study.scenario, &study.rto_points(), manifest.jobs)?;
    let differences = if study.sweep.is_empty() {
        None
    } else {
        Some(sweep_differences(&outcomes)?)
    };

    fs::create_dir_all(&manifest.out_dir).map_err(|source| Error::Io {
        path: manifest.out_dir.clone(),
        source,
    })?;
    let mut written = Vec::new();
    let mut emit = |name: &str, rows: Vec<Vec<String>>, header: &[&str]| -> Result<()> {
        let path = manifest.out_dir.join(name);
        write_csv(&path, header, &rows)?;
        written.push(path);
        Ok(())
    };

    emit(SUMMARY_FILE, summary_rows(&study, &outcomes), &SUMMARY_HEADER)?;
    if let Some(diffs) = &differences {
        emit(
            PERCENT_DIFFERENCE_FILE,
            percent_rows(&outcomes, diffs),
            &PERCENT_DIFFERENCE_HEADER,
        )?;
        emit(PLOT_FILE, plot_rows(&outcomes, diffs), &PLOT_HEADER)?;
    }
    if manifest.emit_samples {
        emit(SAMPLES_FILE, sample_rows(&outcomes), &SAMPLES_HEADER)?;
    }
    if manifest.emit_timelines {
        let sim = Simulator::new(study.scenario.clone())?;
        emit(TRANSITIONS_FILE, transition_rows(&sim)?, &TRANSITIONS_HEADER)?;
        emit(RECORDS_FILE, record_rows(&outcomes), &RECORDS_HEADER)?;
    }
    Ok(written)
}

fn num(v: f64) -> String {
    format!("{v:.6}")
}

fn summary_rows(study: &Study, outcomes: &[ScenarioOutcome]) -> Vec<Vec<String>> {
    let sc = &study.scenario;
    outcomes
        .iter()
        .map(|o| {
            let d = &o.distribution;
            let m = d.means();
            vec![
                study.name.clone(),
                num(o.rto.mu_rto),
                num(o.rto.sigma_rto),
                num(sc.horizon_years),
                sc.replications.to_string(),
                sc.seed.to_string(),
                num(m.failure_rate),
                num(m.availability),
                num(m.nines),
                num(m.saidi),
                num(m.saifi),
                num(d.saidi.std),
                num(d.saifi.std),
            ]
        })
        .collect()
}

fn percent_rows(outcomes: &[ScenarioOutcome], diffs: &[PercentDifference]) -> Vec<Vec<String>> {
    outcomes
        .iter()
        .zip(diffs)
        .map(|(o, d)| {
            let m = o.distribution.means();
            vec![
                num(o.rto.mu_rto),
                num(o.rto.sigma_rto),
                num(m.nines),
                num(m.saidi),
                num(d.availability),
                num(d.saidi),
            ]
        })
        .collect()
}

fn plot_rows(outcomes: &[ScenarioOutcome], diffs: &[PercentDifference]) -> Vec<Vec<String>> {
    outcomes
        .iter()
        .zip(diffs)
        .map(|(o, d)| vec![num(o.rto.mu_rto), num(d.availability), num(d.saidi)])
        .collect()
}

fn sample_rows(outcomes: &[ScenarioOutcome]) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    for o in outcomes {
        for (rep, s) in o.samples.iter().enumerate() {
            rows.push(vec![
                num(o.rto.mu_rto),
                num(o.rto.sigma_rto),
                rep.to_string(),
                num(s.failure_rate),
                num(s.availability),
                num(s.nines),
                num(s.saidi),
                num(s.saifi),
            ]);
        }
    }
    rows
}

fn transition_rows(sim: &Simulator) -> Result<Vec<Vec<String>>> {
    let mut rows = Vec::new();
    for v in sim.transition_vectors(0)? {
        let kind = match v.component.kind {
            crate::timeline::ComponentKind::Branch => "branch",
            crate::timeline::ComponentKind::CommSwitch => "comm_switch",
            crate::timeline::ComponentKind::Controller => "controller",
            crate::timeline::ComponentKind::Server => "server",
        };
        for t in &v.events {
            let state = match t.state {
                ComponentState::Up => "up",
                ComponentState::Down => "down",
            };
            rows.push(vec![
                kind.to_string(),
                v.component.id.to_string(),
                num(t.time),
                state.to_string(),
            ]);
        }
    }
    Ok(rows)
}

fn record_rows(outcomes: &[ScenarioOutcome]) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    for o in outcomes {
        for r in &o.first_replication.records {
            let branches: Vec<String> = r.branches.iter().map(u32::to_string).collect();
            rows.push(vec![
                num(o.rto.mu_rto),
                num(o.rto.sigma_rto),
                r.fault.to_string(),
                r.kind.as_str().to_string(),
                branches.join(";"),
                r.customers.to_string(),
                num(r.start),
                num(r.duration),
            ]);
        }
    }
    rows
}

fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let file = fs::File::create(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut w = csv::Writer::from_writer(file);
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush().map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(())
}
