//! Fault isolation, service restoration and outage-duration composition.

use std::collections::{BTreeMap, BTreeSet};

use petgraph::unionfind::UnionFind;

use crate::error::Result;
use crate::sampling::{sample_rto, RandomStream, RtoParameters, MINUTES_PER_HOUR};
use crate::timeline::{ComponentState, StateTransitionVector};
use crate::topology::{
    CommStatus, CyberNetwork, CyberState, ElectricalNetwork, SwitchConfiguration, SwitchRef, Vertex,
};

/// Time the ring needs to converge on a new spanning tree.
pub const RSTP_RECONFIGURATION_HOURS: f64 = 30.0 / 3600.0;

/// Chronologies of the failable cyber components. Components without a
/// vector never fail.
#[derive(Debug, Clone, Default)]
pub struct CyberTimeline {
    pub horizon: f64,
    pub comm_switches: BTreeMap<u32, StateTransitionVector>,
    pub controllers: BTreeMap<u32, StateTransitionVector>,
    pub servers: BTreeMap<u32, StateTransitionVector>,
}

impl CyberTimeline {
    pub fn fully_reliable(horizon: f64) -> Self {
        Self {
            horizon,
            ..Self::default()
        }
    }

    fn down_at(vectors: &BTreeMap<u32, StateTransitionVector>, t: f64) -> BTreeSet<u32> {
        vectors
            .iter()
            .filter(|(_, v)| {
                !v.events.is_empty() && v.state_at(t).is_ok_and(|s| s == ComponentState::Down)
            })
            .map(|(&id, _)| id)
            .collect()
    }

    pub fn state_at(&self, t: f64) -> CyberState {
        CyberState {
            failed_comm_switches: Self::down_at(&self.comm_switches, t),
            failed_controllers: Self::down_at(&self.controllers, t),
            failed_servers: Self::down_at(&self.servers, t),
        }
    }

    /// Earliest repair after `t` among the components failed in `state`.
    fn next_repair_after(&self, t: f64, state: &CyberState) -> Option<f64> {
        let groups = [
            (&self.comm_switches, &state.failed_comm_switches),
            (&self.controllers, &state.failed_controllers),
            (&self.servers, &state.failed_servers),
        ];
        groups
            .iter()
            .flat_map(|(vectors, failed)| {
                failed
                    .iter()
                    .filter_map(|id| vectors.get(id).and_then(|v| v.next_up_after(t)))
            })
            .min_by(f64::total_cmp)
    }
}

/// Hours between a branch fault at `at` and the operation center being able
/// to act on it.
///
/// Zero with the normal path up, the ring convergence time after a reroute,
/// and otherwise until the repairs that make the branch visible again (plus
/// convergence if that recovery needs a reroute). Capped at the horizon.
pub fn detection_delay(
    cyber: &CyberNetwork,
    branch: u32,
    at: f64,
    history: &CyberTimeline,
) -> Result<f64> {
    let mut now = at;
    loop {
        let state = history.state_at(now);
        match cyber.controller_comm_status(branch, &state)? {
            CommStatus::Connected => return Ok(now - at),
            CommStatus::ConnectedAfterRstp => return Ok(now - at + RSTP_RECONFIGURATION_HOURS),
            CommStatus::ControllerDown | CommStatus::Unreachable => {
                match history.next_repair_after(now, &state) {
                    Some(next) => now = next,
                    None => return Ok(history.horizon.max(at) - at),
                }
            }
        }
    }
}

/// Switching plan for one branch fault.
#[derive(Debug, Clone, PartialEq)]
pub struct RestorationPlan {
    pub faulted: u32,
    /// Switches opened to isolate the faulted section.
    pub isolation: Vec<u32>,
    /// Tie switches closed to re-energize healthy sections, ascending.
    pub restoration: Vec<u32>,
    /// Sections de-energized by the fault and fed again through ties.
    pub restorable: BTreeSet<u32>,
    /// Sections de-energized until the faulted branch is repaired.
    pub unrestorable: BTreeSet<u32>,
    /// Configuration after isolation and restoration.
    pub configuration: SwitchConfiguration,
}

impl RestorationPlan {
    pub fn downstream(&self) -> BTreeSet<u32> {
        self.restorable.union(&self.unrestorable).copied().collect()
    }
}

/// Opens every closed switch touching `branch`'s section; returns the
/// opened switch ids in ascending order.
pub fn isolate_section(
    net: &ElectricalNetwork,
    config: &mut SwitchConfiguration,
    branch: u32,
) -> Result<Vec<u32>> {
    let bi = net.branch_idx(branch)?;
    let mut opened = Vec::new();
    for &(sw, _) in net.adjacency(net.vertex_id(Vertex::Section(bi))) {
        if config.is_closed_ref(sw) {
            config.set_ref(sw, false);
            opened.push(net.switch_id(sw));
        }
    }
    opened.sort_unstable();
    Ok(opened)
}

/// Plan for a fault on `faulted` starting from the base configuration with
/// no other failures.
pub fn select_restoration(net: &ElectricalNetwork, faulted: u32) -> Result<RestorationPlan> {
    plan_restoration(
        net,
        &SwitchConfiguration::base(net),
        &BTreeSet::new(),
        faulted,
    )
}

/// Plan for a fault on `faulted` against the current configuration, with
/// `failed` branches already out of service.
///
/// Every closed switch touching the faulted section is opened. The sections
/// that lose supply form islands; each island can be picked up by one tie
/// to the energized network, or to another island that is itself picked up.
/// Contracting all energized sections into a single root makes feasible tie
/// sets exactly the forests of that contracted graph, so Kruskal over tie
/// ids yields a plan that restores every reachable island, closes the fewest
/// ties, and is the lexicographically smallest such set.
pub fn plan_restoration(
    net: &ElectricalNetwork,
    config: &SwitchConfiguration,
    failed: &BTreeSet<u32>,
    faulted: u32,
) -> Result<RestorationPlan> {
    let fi = net.branch_idx(faulted)?;
    let mut failed_mask = net.mask_of(failed);
    let before = net.energized_mask(config, &failed_mask);

    let mut cfg = config.clone();
    let isolation = isolate_section(net, &mut cfg, faulted)?;
    failed_mask[fi] = true;
    let after = net.energized_mask(&cfg, &failed_mask);

    let n = net.branches().len();
    let lost: Vec<bool> = (0..n).map(|i| i != fi && before[i] && !after[i]).collect();

    // Label: 0 = energized root, k >= 1 = lost island k.
    let mut label: Vec<Option<usize>> = (0..n).map(|i| after[i].then_some(0)).collect();
    let mut islands = 0;
    for start in 0..n {
        if !lost[start] || label[start].is_some() {
            continue;
        }
        islands += 1;
        label[start] = Some(islands);
        let mut stack = vec![start];
        while let Some(s) = stack.pop() {
            for &(sw, v) in net.adjacency(net.vertex_id(Vertex::Section(s))) {
                if !cfg.is_closed_ref(sw) {
                    continue;
                }
                if let Some(j) = net.section_of_vertex(v) {
                    if lost[j] && label[j].is_none() {
                        label[j] = Some(islands);
                        stack.push(j);
                    }
                }
            }
        }
    }

    let mut restoration = Vec::new();
    if islands > 0 {
        let vertex_label = |v: Vertex| match v {
            Vertex::Feeder(_) => Some(0),
            Vertex::Section(j) if failed_mask[j] => None,
            Vertex::Section(j) => label[j],
        };
        let mut candidates: Vec<(u32, usize, usize, usize)> = net
            .ties()
            .iter()
            .enumerate()
            .filter(|(ti, _)| !cfg.is_closed_ref(SwitchRef::Tie(*ti)))
            .filter_map(|(ti, t)| {
                let (a, b) = net.tie_ends(ti);
                Some((t.id, ti, vertex_label(a)?, vertex_label(b)?))
            })
            .collect();
        candidates.sort_unstable_by_key(|c| c.0);

        let mut uf = UnionFind::<usize>::new(islands + 1);
        let mut forest = Vec::new();
        for &(id, ti, a, b) in &candidates {
            if uf.union(a, b) {
                forest.push((id, ti, a));
            }
        }
        // Keep only the tree hanging off the root.
        for (id, ti, a) in forest {
            if uf.equiv(a, 0) {
                restoration.push(id);
                cfg.set_ref(SwitchRef::Tie(ti), true);
            }
        }
        restoration.sort_unstable();
    }

    let mut restorable = BTreeSet::new();
    let mut unrestorable = BTreeSet::new();
    let final_energized = net.energized_mask(&cfg, &failed_mask);
    for (i, b) in net.branches().iter().enumerate() {
        if lost[i] {
            if final_energized[i] {
                restorable.insert(b.id);
            } else {
                unrestorable.insert(b.id);
            }
        }
    }

    Ok(RestorationPlan {
        faulted,
        isolation,
        restoration,
        restorable,
        unrestorable,
        configuration: cfg,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OutageKind {
    Faulted,
    Restorable,
    Unrestorable,
}

impl OutageKind {
    pub fn as_str(self) -> &'static str {
        match self {
            OutageKind::Faulted => "faulted",
            OutageKind::Restorable => "restorable",
            OutageKind::Unrestorable => "unrestorable",
        }
    }
}

/// One group of customers losing supply for the same interval.
#[derive(Debug, Clone, PartialEq)]
pub struct InterruptionRecord {
    pub fault: u64,
    pub kind: OutageKind,
    pub branches: Vec<u32>,
    pub customers: u64,
    /// Hours.
    pub start: f64,
    /// Hours, always > 0.
    pub duration: f64,
}

impl InterruptionRecord {
    pub fn end(&self) -> f64 {
        self.start + self.duration
    }
}

/// Timing inputs for one fault, all in hours.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FaultContext {
    pub fault: u64,
    pub start: f64,
    pub repair: f64,
    pub detection_delay: f64,
    pub horizon: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FaultResolution {
    pub plan: RestorationPlan,
    pub detection_delay: f64,
    /// Hours.
    pub rto: f64,
    pub records: Vec<InterruptionRecord>,
}

/// Outage groups for a fault with operator response time `rto_hours`.
///
/// The faulted and unrestorable groups wait for detection, the operator and
/// the repair; restorable sections wait only for detection and the operator.
/// Durations are clipped at the horizon, and empty or zero-length groups are
/// dropped.
pub fn compose_records(
    net: &ElectricalNetwork,
    plan: &RestorationPlan,
    ctx: &FaultContext,
    rto_hours: f64,
) -> Vec<InterruptionRecord> {
    let switching = ctx.detection_delay + rto_hours;
    let groups = [
        (
            OutageKind::Faulted,
            BTreeSet::from([plan.faulted]),
            switching + ctx.repair,
        ),
        (
            OutageKind::Unrestorable,
            plan.unrestorable.clone(),
            switching + ctx.repair,
        ),
        (OutageKind::Restorable, plan.restorable.clone(), switching),
    ];
    let remaining = (ctx.horizon - ctx.start).max(0.0);
    groups
        .into_iter()
        .filter_map(|(kind, branches, duration)| {
            let customers: u64 = branches
                .iter()
                .filter_map(|&b| net.branch(b).ok())
                .map(|b| u64::from(b.customers))
                .sum();
            let duration = duration.min(remaining);
            (customers > 0 && duration > 0.0).then(|| InterruptionRecord {
                fault: ctx.fault,
                kind,
                branches: branches.into_iter().collect(),
                customers,
                start: ctx.start,
                duration,
            })
        })
        .collect()
}

/// Samples one operator response for the fault and builds its records.
pub fn resolve_fault(
    net: &ElectricalNetwork,
    plan: RestorationPlan,
    ctx: &FaultContext,
    rto: &RtoParameters,
    stream: &mut RandomStream,
) -> FaultResolution {
    let rto_hours = sample_rto(rto, stream) / MINUTES_PER_HOUR;
    let records = compose_records(net, &plan, ctx, rto_hours);
    FaultResolution {
        plan,
        detection_delay: ctx.detection_delay,
        rto: rto_hours,
        records,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::timeline::ComponentId;
    use crate::topology::{build_civanlar, Branch, Controller, RingNode};

    /// Feeder 0 -> branch 1 (5 customers) -> branch 2 (6 customers), with a
    /// tie from bus 2 to a second feeder 9.
    fn toy() -> ElectricalNetwork {
        let b = |id, from, to, customers| Branch {
            id,
            from,
            to,
            customers,
            sectionalizer: id,
            lambda: None,
        };
        ElectricalNetwork::new(
            "toy",
            vec![0, 9],
            vec![1, 2],
            vec![b(1, 0, 1, 5), b(2, 1, 2, 6)],
            vec![crate::topology::TieSwitch { id: 50, a: 2, b: 9 }],
        )
        .unwrap()
    }

    fn ctx(delay: f64, repair: f64) -> FaultContext {
        FaultContext {
            fault: 0,
            start: 100.0,
            repair,
            detection_delay: delay,
            horizon: 1.0e6,
        }
    }

    #[test]
    fn leaf_fault_closes_nothing() {
        let net = toy();
        let plan = select_restoration(&net, 2).unwrap();
        assert!(plan.downstream().is_empty());
        assert!(plan.restoration.is_empty());
        assert_eq!(plan.isolation, vec![2]);
    }

    #[test]
    fn instant_operator_only_records_faulted_group() {
        let net = toy();
        let plan = select_restoration(&net, 1).unwrap();
        assert_eq!(plan.restorable, BTreeSet::from([2]));
        assert_eq!(plan.restoration, vec![50]);
        let records = compose_records(&net, &plan, &ctx(0.0, 3.0), 0.0);
        assert_eq!(records.len(), 1);
        assert_eq!(records[0].customers, 5);
        assert_eq!(records[0].duration, 3.0);
    }

    #[test]
    fn ten_minute_operator_two_records() {
        let net = toy();
        let plan = select_restoration(&net, 1).unwrap();
        let records = compose_records(&net, &plan, &ctx(0.0, 3.0), 10.0 / 60.0);
        assert_eq!(records.len(), 2);
        assert_eq!(records[0].kind, OutageKind::Faulted);
        assert_eq!(records[0].customers, 5);
        assert!((records[0].duration - (3.0 + 10.0 / 60.0)).abs() < 1e-12);
        assert_eq!(records[1].kind, OutageKind::Restorable);
        assert_eq!(records[1].customers, 6);
        assert!((records[1].duration - 10.0 / 60.0).abs() < 1e-12);
    }

    #[test]
    fn rstp_delay_alone_interrupts_restorable_customers() {
        let net = toy();
        let plan = select_restoration(&net, 1).unwrap();
        let records = compose_records(
            &net,
            &plan,
            &ctx(RSTP_RECONFIGURATION_HOURS, 3.0),
            0.0,
        );
        assert_eq!(records.len(), 2);
        assert!((records[1].duration - 30.0 / 3600.0).abs() < 1e-15);
    }

    #[test]
    fn records_are_clipped_at_horizon() {
        let net = toy();
        let plan = select_restoration(&net, 2).unwrap();
        let mut c = ctx(0.0, 3.0);
        c.horizon = 101.0;
        let records = compose_records(&net, &plan, &c, 0.0);
        assert_eq!(records[0].duration, 1.0);
    }

    #[test]
    fn civanlar_fault_with_unrestorable_branch() {
        let model = build_civanlar();
        // Branch 11 hangs off branch 8 with no tie of its own.
        let plan = select_restoration(&model.electrical, 8).unwrap();
        assert_eq!(plan.restorable, BTreeSet::from([10]));
        assert_eq!(plan.unrestorable, BTreeSet::from([11]));
        assert_eq!(plan.restoration, vec![16]);
        assert!(model.electrical.is_radial(&plan.configuration));
    }

    #[test]
    fn civanlar_feeder_head_fault_uses_two_ties() {
        let model = build_civanlar();
        let plan = select_restoration(&model.electrical, 3).unwrap();
        assert_eq!(plan.restorable, BTreeSet::from([4, 5, 6]));
        assert!(plan.unrestorable.is_empty());
        assert_eq!(plan.restoration, vec![16, 18]);
        assert_eq!(plan.isolation, vec![3, 4, 5]);
    }

    #[test]
    fn overlapping_fault_against_current_configuration() {
        let model = build_civanlar();
        let net = &model.electrical;
        let first = select_restoration(net, 3).unwrap();
        // Branch 4 is now fed from feeder 2 through tie 16. A fault on 8
        // cannot use tie 16 any more, so 10 is lost with 11.
        let second =
            plan_restoration(net, &first.configuration, &BTreeSet::from([3]), 8).unwrap();
        assert!(second.restorable.is_empty());
        assert_eq!(second.unrestorable, BTreeSet::from([4, 10, 11]));
        assert!(net.is_radial(&second.configuration));
    }

    fn ring_model() -> (ElectricalNetwork, CyberNetwork) {
        let net = toy();
        let cyber = CyberNetwork::new(
            vec![
                RingNode::Server(1),
                RingNode::Switch(1),
                RingNode::Switch(2),
                RingNode::Switch(3),
            ],
            vec![
                Controller {
                    id: 1,
                    branch: 1,
                    comm_switch: 1,
                },
                Controller {
                    id: 2,
                    branch: 2,
                    comm_switch: 3,
                },
            ],
            &net,
        )
        .unwrap();
        (net, cyber)
    }

    #[test]
    fn detection_delay_cases() {
        let (_, cyber) = ring_model();
        let horizon = 1000.0;
        let up = CyberTimeline::fully_reliable(horizon);
        assert_eq!(detection_delay(&cyber, 2, 10.0, &up).unwrap(), 0.0);

        // Switch 1 sits between switch 3's normal path and the server.
        let mut rerouted = CyberTimeline::fully_reliable(horizon);
        rerouted.comm_switches.insert(
            1,
            StateTransitionVector::from_outages(
                ComponentId::comm_switch(1),
                horizon,
                &[(5.0, Some(8.0))],
            ),
        );
        let d = detection_delay(&cyber, 2, 6.0, &rerouted).unwrap();
        assert!((d - 30.0 / 3600.0).abs() < 1e-15);
        assert_eq!(detection_delay(&cyber, 2, 9.0, &rerouted).unwrap(), 0.0);

        let mut ctrl_down = CyberTimeline::fully_reliable(horizon);
        ctrl_down.controllers.insert(
            2,
            StateTransitionVector::from_outages(
                ComponentId::controller(2),
                horizon,
                &[(9.5, Some(11.2))],
            ),
        );
        let d = detection_delay(&cyber, 2, 10.0, &ctrl_down).unwrap();
        assert!((d - 1.2).abs() < 1e-12, "{d}");
    }

    #[test]
    fn unreachable_waits_for_comm_repair_then_reroute() {
        let (_, cyber) = ring_model();
        let horizon = 1000.0;
        let mut tl = CyberTimeline::fully_reliable(horizon);
        // Controller 2's own comm switch is down until 22.0.
        tl.comm_switches.insert(
            3,
            StateTransitionVector::from_outages(
                ComponentId::comm_switch(3),
                horizon,
                &[(20.0, Some(22.0))],
            ),
        );
        let d = detection_delay(&cyber, 2, 21.0, &tl).unwrap();
        assert!((d - 1.0).abs() < 1e-12, "{d}");

        let mut never = CyberTimeline::fully_reliable(horizon);
        never.controllers.insert(
            2,
            StateTransitionVector::from_outages(ComponentId::controller(2), horizon, &[(990.0, None)]),
        );
        assert!((detection_delay(&cyber, 2, 995.0, &never).unwrap() - 5.0).abs() < 1e-12);
    }
}
