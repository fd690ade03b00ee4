//! Sequential Monte Carlo driver.
//!
//! One replication samples a chronology for every failable component, walks
//! the merged event stream, resolves each branch fault against the switch
//! configuration in force at that instant, and collects the customer
//! interruption records. Cyber components are never processed eagerly: their
//! state is looked up when a branch fault needs it.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rayon::prelude::*;

use crate::contingency::{
    detection_delay, isolate_section, plan_restoration, resolve_fault, select_restoration,
    CyberTimeline, FaultContext, InterruptionRecord, RestorationPlan,
};
use crate::error::{Error, Result};
use crate::sampling::{ComponentReliability, RandomStream, RtoParameters, StreamPurpose, HOURS_PER_YEAR};
use crate::timeline::{
    generate_transition_vector, merge_streams, ComponentId, ComponentKind, StateTransitionVector,
    TransitionKind,
};
use crate::topology::{NetworkModel, SwitchConfiguration};

/// Everything needed to run one simulation study.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub network: Arc<NetworkModel>,
    pub branch: ComponentReliability,
    pub comm_switch: ComponentReliability,
    pub controller: ComponentReliability,
    pub server: ComponentReliability,
    pub rto: RtoParameters,
    pub horizon_years: f64,
    pub replications: u32,
    pub seed: u64,
}

impl Scenario {
    /// Every violated invariant, as readable diagnostics.
    pub fn diagnostics(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !(self.horizon_years.is_finite() && self.horizon_years > 0.0) {
            out.push(format!("horizon_years must be > 0, got {}", self.horizon_years));
        }
        if self.replications == 0 {
            out.push("replications must be >= 1".to_string());
        }
        for (name, p) in [
            ("branch", &self.branch),
            ("comm_switch", &self.comm_switch),
            ("controller", &self.controller),
            ("server", &self.server),
        ] {
            if let Err(e) = p.validate() {
                out.push(format!("reliability.{name}: {e}"));
            }
        }
        if let Err(e) = self.rto.validate() {
            out.push(format!("rto: {e}"));
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.diagnostics();
        if d.is_empty() {
            Ok(())
        } else {
            Err(Error::Scenario(d))
        }
    }

    pub fn horizon_hours(&self) -> f64 {
        self.horizon_years * HOURS_PER_YEAR
    }

    pub fn with_rto(&self, rto: RtoParameters) -> Self {
        Self {
            rto,
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct LoadPointTally {
    pub interruptions: u64,
    pub outage_hours: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReplicationResult {
    pub replication: u64,
    pub horizon_hours: f64,
    pub records: Vec<InterruptionRecord>,
    /// Branch faults that interrupted at least one customer.
    pub failure_events: u64,
    /// Length of the union of all record intervals.
    pub down_hours: f64,
    /// Per load point (branch), keyed by branch id.
    pub tallies: BTreeMap<u32, LoadPointTally>,
    /// Every branch failure, including ones on already de-energized branches.
    pub branch_faults: u64,
}

/// Sorts and merges closed intervals; returns `(merged count, total length)`.
pub fn merge_intervals(mut intervals: Vec<(f64, f64)>) -> (u64, f64) {
    intervals.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let mut count = 0;
    let mut total = 0.0;
    let mut current: Option<(f64, f64)> = None;
    for (s, e) in intervals {
        match current {
            Some((cs, ce)) if s <= ce => current = Some((cs, ce.max(e))),
            Some((cs, ce)) => {
                count += 1;
                total += ce - cs;
                current = Some((s, e));
            }
            None => current = Some((s, e)),
        }
    }
    if let Some((cs, ce)) = current {
        count += 1;
        total += ce - cs;
    }
    (count, total)
}

/// A scenario prepared for repeated replications.
pub struct Simulator {
    scenario: Scenario,
    base_plans: Vec<RestorationPlan>,
}

impl Simulator {
    pub fn new(scenario: Scenario) -> Result<Self> {
        scenario.validate()?;
        let net = &scenario.network.electrical;
        let base_plans = net
            .branches()
            .iter()
            .map(|b| select_restoration(net, b.id))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            scenario,
            base_plans,
        })
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    fn sample_vector(
        &self,
        component: ComponentId,
        params: &ComponentReliability,
        purpose: StreamPurpose,
        replication: u64,
    ) -> Result<StateTransitionVector> {
        let mut stream =
            RandomStream::substream(self.scenario.seed, replication, purpose, component.id);
        generate_transition_vector(component, params, self.scenario.horizon_hours(), &mut stream)
    }

    /// Chronologies of every component for one replication: branches first,
    /// then comm switches, controllers and servers. Independent of the
    /// operator model.
    pub fn transition_vectors(&self, replication: u64) -> Result<Vec<StateTransitionVector>> {
        let sc = &self.scenario;
        let model = &sc.network;
        let mut vectors = Vec::new();
        for b in model.electrical.branches() {
            let params = sc.branch.with_lambda(b.lambda.unwrap_or(sc.branch.lambda));
            vectors.push(self.sample_vector(
                ComponentId::branch(b.id),
                &params,
                StreamPurpose::Branch,
                replication,
            )?);
        }
        for id in model.cyber.comm_switches() {
            vectors.push(self.sample_vector(
                ComponentId::comm_switch(id),
                &sc.comm_switch,
                StreamPurpose::CommSwitch,
                replication,
            )?);
        }
        for c in model.cyber.controllers() {
            vectors.push(self.sample_vector(
                ComponentId::controller(c.id),
                &sc.controller,
                StreamPurpose::Controller,
                replication,
            )?);
        }
        for id in model.cyber.servers() {
            vectors.push(self.sample_vector(
                ComponentId::server(id),
                &sc.server,
                StreamPurpose::Server,
                replication,
            )?);
        }
        Ok(vectors)
    }

    pub fn run_replication(&self, replication: u64) -> Result<ReplicationResult> {
        let sc = &self.scenario;
        let model = &sc.network;
        let net = &model.electrical;
        let horizon = sc.horizon_hours();

        let vectors = self.transition_vectors(replication)?;
        let events = merge_streams(&vectors)?;

        let mut cyber = CyberTimeline::fully_reliable(horizon);
        let mut branch_vectors: BTreeMap<u32, &StateTransitionVector> = BTreeMap::new();
        for v in &vectors {
            let slot = match v.component.kind {
                ComponentKind::Branch => {
                    branch_vectors.insert(v.component.id, v);
                    continue;
                }
                ComponentKind::CommSwitch => &mut cyber.comm_switches,
                ComponentKind::Controller => &mut cyber.controllers,
                ComponentKind::Server => &mut cyber.servers,
            };
            if !v.events.is_empty() {
                slot.insert(v.component.id, v.clone());
            }
        }

        let mut rto_stream = RandomStream::substream(
            sc.seed,
            replication,
            StreamPurpose::OperatorResponse,
            0,
        );
        let base = SwitchConfiguration::base(net);
        let mut config = base.clone();
        // Branches currently out of service, in fault order.
        let mut active: Vec<u32> = Vec::new();
        let mut records = Vec::new();
        let mut branch_faults = 0u64;

        for event in &events {
            if event.component.kind != ComponentKind::Branch {
                continue;
            }
            let branch = event.component.id;
            match event.kind {
                TransitionKind::Repair => {
                    active.retain(|&b| b != branch);
                    config = rebuild_configuration(net, &base, &active)?;
                }
                TransitionKind::Fail => {
                    let fault = branch_faults;
                    branch_faults += 1;
                    let t = event.time;
                    let repair_end = branch_vectors[&branch]
                        .next_up_after(t)
                        .unwrap_or(horizon);

                    let plan = if active.is_empty() {
                        let bi = net.branch_idx(branch)?;
                        self.base_plans[bi].clone()
                    } else {
                        let failed: BTreeSet<u32> = active.iter().copied().collect();
                        if !net.energized_branches(&config, &failed).contains(&branch) {
                            isolate_section(net, &mut config, branch)?;
                            active.push(branch);
                            continue;
                        }
                        plan_restoration(net, &config, &failed, branch)?
                    };

                    let ctx = FaultContext {
                        fault,
                        start: t,
                        repair: repair_end - t,
                        detection_delay: detection_delay(&model.cyber, branch, t, &cyber)?,
                        horizon,
                    };
                    let resolution = resolve_fault(net, plan, &ctx, &sc.rto, &mut rto_stream);
                    config = resolution.plan.configuration;
                    active.push(branch);
                    records.extend(resolution.records);
                }
            }
        }

        Ok(summarize(replication, horizon, net, records, branch_faults))
    }

    /// All replications; `jobs` caps the worker threads (`None` = rayon
    /// default, `Some(1)` = serial). Results are ordered by replication and
    /// do not depend on the degree of parallelism.
    pub fn run(&self, jobs: Option<usize>) -> Result<Vec<ReplicationResult>> {
        let n = u64::from(self.scenario.replications);
        match jobs {
            Some(1) => (0..n).map(|r| self.run_replication(r)).collect(),
            _ => {
                let mut builder = rayon::ThreadPoolBuilder::new();
                if let Some(j) = jobs {
                    builder = builder.num_threads(j);
                }
                let pool = builder
                    .build()
                    .map_err(|e| Error::Parameter(format!("thread pool: {e}")))?;
                pool.install(|| {
                    (0..n)
                        .into_par_iter()
                        .map(|r| self.run_replication(r))
                        .collect()
                })
            }
        }
    }
}

/// Re-applies isolation and restoration for each still-active fault, in
/// fault order, starting from the base configuration.
fn rebuild_configuration(
    net: &crate::topology::ElectricalNetwork,
    base: &SwitchConfiguration,
    active: &[u32],
) -> Result<SwitchConfiguration> {
    let mut config = base.clone();
    let mut failed = BTreeSet::new();
    for &b in active {
        if net.energized_branches(&config, &failed).contains(&b) {
            config = plan_restoration(net, &config, &failed, b)?.configuration;
        } else {
            isolate_section(net, &mut config, b)?;
        }
        failed.insert(b);
    }
    Ok(config)
}

fn summarize(
    replication: u64,
    horizon_hours: f64,
    net: &crate::topology::ElectricalNetwork,
    records: Vec<InterruptionRecord>,
    branch_faults: u64,
) -> ReplicationResult {
    let mut tallies: BTreeMap<u32, LoadPointTally> = net
        .branches()
        .iter()
        .map(|b| (b.id, LoadPointTally::default()))
        .collect();
    for r in &records {
        for b in &r.branches {
            let t = tallies.entry(*b).or_default();
            t.interruptions += 1;
            t.outage_hours += r.duration;
        }
    }
    let failure_events = records
        .iter()
        .map(|r| r.fault)
        .collect::<BTreeSet<_>>()
        .len() as u64;
    let (_, down_hours) = merge_intervals(records.iter().map(|r| (r.start, r.end())).collect());
    ReplicationResult {
        replication,
        horizon_hours,
        records,
        failure_events,
        down_hours,
        tallies,
        branch_faults,
    }
}

pub fn run_replication(scenario: &Scenario, replication: u64) -> Result<ReplicationResult> {
    Simulator::new(scenario.clone())?.run_replication(replication)
}

pub fn run_simulation(scenario: &Scenario, jobs: Option<usize>) -> Result<Vec<ReplicationResult>> {
    Simulator::new(scenario.clone())?.run(jobs)
}
