//! Cyber-physical network model.
//!
//! The electrical layer is a radial forest of feeders and load buses. Each
//! branch is a switchable section: the line from its upstream node plus the
//! bus it feeds, bounded upstream by its own sectionalizing switch and
//! downstream by its children's sectionalizers. Faults, isolation and
//! restoration all act on whole sections.

mod civanlar;
mod cyber;
mod document;

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use civanlar::build_civanlar;
pub use cyber::{CommStatus, Controller, CyberNetwork, CyberState, RingNode};
pub use document::{
    load_network, parse_network, CyberDocument, NetworkDocument, NetworkModel, NETWORK_FORMAT_VERSION,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Branch {
    pub id: u32,
    pub from: u32,
    pub to: u32,
    pub customers: u32,
    pub sectionalizer: u32,
    /// Per-branch failure-rate override, failures/year.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
}

/// Normally-open switch between two nodes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TieSwitch {
    pub id: u32,
    pub a: u32,
    pub b: u32,
}

/// A validation problem found while building a network, named by the
/// offending element.
#[derive(Debug, Clone, PartialEq)]
pub enum NetworkIssue {
    Schema(String),
    DuplicateId { kind: &'static str, id: u32 },
    UnknownNode { element: String, node: u32 },
    SelfLoop { element: String },
    InvalidLambda { branch: u32, lambda: f64 },
    Cycle { branches: Vec<u32> },
    MultipleFeeders { feeders: Vec<u32> },
    Unfed { buses: Vec<u32> },
    UnknownBranch { controller: u32, branch: u32 },
    UnknownCommSwitch { controller: u32, comm_switch: u32 },
    MissingController { branch: u32 },
    DuplicateController { branch: u32 },
    EmptyRing,
    NoServer,
}

impl fmt::Display for NetworkIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NetworkIssue::Schema(msg) => write!(f, "schema: {msg}"),
            NetworkIssue::DuplicateId { kind, id } => write!(f, "duplicate {kind} id {id}"),
            NetworkIssue::UnknownNode { element, node } => {
                write!(f, "{element} references unknown node {node}")
            }
            NetworkIssue::SelfLoop { element } => write!(f, "{element} connects a node to itself"),
            NetworkIssue::InvalidLambda { branch, lambda } => {
                write!(f, "branch {branch} has invalid failure rate {lambda}")
            }
            NetworkIssue::Cycle { branches } => write!(
                f,
                "normally-closed graph is not radial: cycle through branches {}",
                join_ids(branches)
            ),
            NetworkIssue::MultipleFeeders { feeders } => write!(
                f,
                "normally-closed graph is not radial: feeders {} are connected",
                join_ids(feeders)
            ),
            NetworkIssue::Unfed { buses } => {
                write!(f, "buses {} are not fed by any feeder", join_ids(buses))
            }
            NetworkIssue::UnknownBranch { controller, branch } => {
                write!(f, "controller {controller} references unknown branch {branch}")
            }
            NetworkIssue::UnknownCommSwitch {
                controller,
                comm_switch,
            } => write!(
                f,
                "controller {controller} attaches to comm switch {comm_switch}, which is not on the ring"
            ),
            NetworkIssue::MissingController { branch } => {
                write!(f, "branch {branch} has no controller")
            }
            NetworkIssue::DuplicateController { branch } => {
                write!(f, "branch {branch} has more than one controller")
            }
            NetworkIssue::EmptyRing => write!(f, "communication ring has no nodes"),
            NetworkIssue::NoServer => write!(f, "communication ring has no server"),
        }
    }
}

fn join_ids(ids: &[u32]) -> String {
    ids.iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

/// Vertex of the section graph: a feeder source or a branch section.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub(crate) enum Vertex {
    Feeder(usize),
    Section(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub(crate) enum SwitchRef {
    Sectionalizer(usize),
    Tie(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ElectricalNetwork {
    name: String,
    feeders: Vec<u32>,
    buses: Vec<u32>,
    branches: Vec<Branch>,
    ties: Vec<TieSwitch>,
    branch_index: HashMap<u32, usize>,
    tie_index: HashMap<u32, usize>,
    switch_index: HashMap<u32, SwitchRef>,
    upstream: Vec<Vertex>,
    children: Vec<Vec<usize>>,
    tie_ends: Vec<(Vertex, Vertex)>,
    adjacency: Vec<Vec<(SwitchRef, usize)>>,
}

impl ElectricalNetwork {
    pub fn new(
        name: impl Into<String>,
        feeders: Vec<u32>,
        buses: Vec<u32>,
        branches: Vec<Branch>,
        ties: Vec<TieSwitch>,
    ) -> Result<Self> {
        let mut issues = Vec::new();
        let net = Self::build(name.into(), feeders, buses, branches, ties, &mut issues);
        match net {
            Some(net) if issues.is_empty() => Ok(net),
            _ => Err(Error::Network(issues)),
        }
    }

    /// Validates and orients the network, pushing every problem found.
    pub(crate) fn build(
        name: String,
        feeders: Vec<u32>,
        buses: Vec<u32>,
        branches: Vec<Branch>,
        ties: Vec<TieSwitch>,
        issues: &mut Vec<NetworkIssue>,
    ) -> Option<Self> {
        let start = issues.len();

        // Node ids: feeders first, then buses.
        let mut node_index: HashMap<u32, usize> = HashMap::new();
        for &id in feeders.iter().chain(buses.iter()) {
            if node_index.insert(id, node_index.len()).is_some() {
                issues.push(NetworkIssue::DuplicateId { kind: "node", id });
            }
        }
        let mut branch_index = HashMap::new();
        for (i, b) in branches.iter().enumerate() {
            if branch_index.insert(b.id, i).is_some() {
                issues.push(NetworkIssue::DuplicateId {
                    kind: "branch",
                    id: b.id,
                });
            }
            if let Some(l) = b.lambda {
                if !(l.is_finite() && l >= 0.0) {
                    issues.push(NetworkIssue::InvalidLambda {
                        branch: b.id,
                        lambda: l,
                    });
                }
            }
        }
        let mut tie_index = HashMap::new();
        for (i, t) in ties.iter().enumerate() {
            if tie_index.insert(t.id, i).is_some() {
                issues.push(NetworkIssue::DuplicateId {
                    kind: "tie switch",
                    id: t.id,
                });
            }
        }
        let mut switch_index = HashMap::new();
        for (i, b) in branches.iter().enumerate() {
            if switch_index
                .insert(b.sectionalizer, SwitchRef::Sectionalizer(i))
                .is_some()
            {
                issues.push(NetworkIssue::DuplicateId {
                    kind: "switch",
                    id: b.sectionalizer,
                });
            }
        }
        for (i, t) in ties.iter().enumerate() {
            if switch_index.insert(t.id, SwitchRef::Tie(i)).is_some() {
                issues.push(NetworkIssue::DuplicateId {
                    kind: "switch",
                    id: t.id,
                });
            }
        }

        let mut endpoints = Vec::with_capacity(branches.len());
        for b in &branches {
            let element = format!("branch {}", b.id);
            let from = node_index.get(&b.from).copied();
            let to = node_index.get(&b.to).copied();
            if from.is_none() {
                issues.push(NetworkIssue::UnknownNode {
                    element: element.clone(),
                    node: b.from,
                });
            }
            if to.is_none() {
                issues.push(NetworkIssue::UnknownNode {
                    element: element.clone(),
                    node: b.to,
                });
            }
            if b.from == b.to {
                issues.push(NetworkIssue::SelfLoop { element });
            }
            endpoints.push((from, to));
        }
        for t in &ties {
            let element = format!("tie switch {}", t.id);
            for node in [t.a, t.b] {
                if !node_index.contains_key(&node) {
                    issues.push(NetworkIssue::UnknownNode {
                        element: element.clone(),
                        node,
                    });
                }
            }
            if t.a == t.b {
                issues.push(NetworkIssue::SelfLoop { element });
            }
        }
        if issues.len() > start {
            return None;
        }

        // Radiality of the normally-closed graph.
        let n_nodes = node_index.len();
        let mut uf = UnionFind::<usize>::new(n_nodes);
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n_nodes];
        for (bi, &(from, to)) in endpoints.iter().enumerate() {
            let (u, v) = (from.unwrap(), to.unwrap());
            if !uf.union(u, v) {
                let mut cycle = path_between(&adj, u, v)
                    .into_iter()
                    .map(|e| branches[e].id)
                    .collect::<Vec<_>>();
                cycle.push(branches[bi].id);
                cycle.sort_unstable();
                issues.push(NetworkIssue::Cycle { branches: cycle });
                continue;
            }
            adj[u].push((v, bi));
            adj[v].push((u, bi));
        }
        let mut feeders_by_root: HashMap<usize, Vec<u32>> = HashMap::new();
        for (fi, &f) in feeders.iter().enumerate() {
            feeders_by_root.entry(uf.find(fi)).or_default().push(f);
        }
        let mut fed: Vec<(usize, Vec<u32>)> = feeders_by_root.into_iter().collect();
        fed.sort_by_key(|(_, f)| f[0]);
        for (_, group) in &fed {
            if group.len() > 1 {
                issues.push(NetworkIssue::MultipleFeeders {
                    feeders: group.clone(),
                });
            }
        }
        let unfed: Vec<u32> = buses
            .iter()
            .enumerate()
            .filter(|(bi, _)| {
                let root = uf.find(feeders.len() + bi);
                !fed.iter().any(|(r, _)| *r == root)
            })
            .map(|(_, &b)| b)
            .collect();
        if !unfed.is_empty() {
            issues.push(NetworkIssue::Unfed { buses: unfed });
        }
        if issues.len() > start {
            return None;
        }

        // Orient branches away from feeders.
        let mut parent_branch: Vec<Option<usize>> = vec![None; n_nodes];
        let mut seen = vec![false; n_nodes];
        let mut queue: VecDeque<usize> = (0..feeders.len()).collect();
        for f in 0..feeders.len() {
            seen[f] = true;
        }
        while let Some(u) = queue.pop_front() {
            for &(v, bi) in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    parent_branch[v] = Some(bi);
                    queue.push_back(v);
                }
            }
        }
        // Section vertex of each node.
        let vertex_of_node = |node: usize| -> Vertex {
            if node < feeders.len() {
                Vertex::Feeder(node)
            } else {
                Vertex::Section(parent_branch[node].expect("fed bus has a parent branch"))
            }
        };
        let mut upstream = Vec::with_capacity(branches.len());
        let mut children = vec![Vec::new(); branches.len()];
        for (bi, &(from, to)) in endpoints.iter().enumerate() {
            let (u, v) = (from.unwrap(), to.unwrap());
            let up_node = if parent_branch[v] == Some(bi) { u } else { v };
            let up = vertex_of_node(up_node);
            if let Vertex::Section(p) = up {
                children[p].push(bi);
            }
            upstream.push(up);
        }
        let tie_ends: Vec<(Vertex, Vertex)> = ties
            .iter()
            .map(|t| (vertex_of_node(node_index[&t.a]), vertex_of_node(node_index[&t.b])))
            .collect();

        let n_vertices = feeders.len() + branches.len();
        let vid = |v: Vertex| match v {
            Vertex::Feeder(i) => i,
            Vertex::Section(i) => feeders.len() + i,
        };
        let mut adjacency = vec![Vec::new(); n_vertices];
        for (bi, &up) in upstream.iter().enumerate() {
            let s = vid(Vertex::Section(bi));
            let u = vid(up);
            adjacency[s].push((SwitchRef::Sectionalizer(bi), u));
            adjacency[u].push((SwitchRef::Sectionalizer(bi), s));
        }
        for (ti, &(a, b)) in tie_ends.iter().enumerate() {
            let (a, b) = (vid(a), vid(b));
            adjacency[a].push((SwitchRef::Tie(ti), b));
            adjacency[b].push((SwitchRef::Tie(ti), a));
        }

        Some(Self {
            name,
            feeders,
            buses,
            branches,
            ties,
            branch_index,
            tie_index,
            switch_index,
            upstream,
            children,
            tie_ends,
            adjacency,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn feeders(&self) -> &[u32] {
        &self.feeders
    }

    pub fn buses(&self) -> &[u32] {
        &self.buses
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    pub fn ties(&self) -> &[TieSwitch] {
        &self.ties
    }

    pub fn branch(&self, id: u32) -> Result<&Branch> {
        self.branch_index
            .get(&id)
            .map(|&i| &self.branches[i])
            .ok_or(Error::UnknownBranch(id))
    }

    pub fn total_customers(&self) -> u64 {
        self.branches.iter().map(|b| u64::from(b.customers)).sum()
    }

    pub(crate) fn branch_idx(&self, id: u32) -> Result<usize> {
        self.branch_index
            .get(&id)
            .copied()
            .ok_or(Error::UnknownBranch(id))
    }

    pub(crate) fn vertex_count(&self) -> usize {
        self.feeders.len() + self.branches.len()
    }

    pub(crate) fn vertex_id(&self, v: Vertex) -> usize {
        match v {
            Vertex::Feeder(i) => i,
            Vertex::Section(i) => self.feeders.len() + i,
        }
    }

    pub(crate) fn section_of_vertex(&self, vid: usize) -> Option<usize> {
        vid.checked_sub(self.feeders.len())
    }

    pub(crate) fn adjacency(&self, vid: usize) -> &[(SwitchRef, usize)] {
        &self.adjacency[vid]
    }

    pub(crate) fn tie_ends(&self, ti: usize) -> (Vertex, Vertex) {
        self.tie_ends[ti]
    }

    pub(crate) fn switch_id(&self, sw: SwitchRef) -> u32 {
        match sw {
            SwitchRef::Sectionalizer(i) => self.branches[i].sectionalizer,
            SwitchRef::Tie(i) => self.ties[i].id,
        }
    }

    /// Branch ids whose only base-configuration path to a feeder runs through
    /// `branch`, excluding `branch` itself.
    pub fn downstream_of(&self, branch: u32) -> Result<BTreeSet<u32>> {
        let bi = self.branch_idx(branch)?;
        let mut out = BTreeSet::new();
        let mut stack: Vec<usize> = self.children[bi].clone();
        while let Some(c) = stack.pop() {
            out.insert(self.branches[c].id);
            stack.extend_from_slice(&self.children[c]);
        }
        Ok(out)
    }

    /// Index mask of energized sections. Failed sections are never entered.
    pub(crate) fn energized_mask(&self, config: &SwitchConfiguration, failed: &[bool]) -> Vec<bool> {
        let nf = self.feeders.len();
        let mut seen = vec![false; self.vertex_count()];
        let mut stack: Vec<usize> = (0..nf).collect();
        for s in seen.iter_mut().take(nf) {
            *s = true;
        }
        while let Some(u) = stack.pop() {
            for &(sw, v) in &self.adjacency[u] {
                if seen[v] || !config.is_closed_ref(sw) {
                    continue;
                }
                if let Some(bi) = self.section_of_vertex(v) {
                    if failed[bi] {
                        continue;
                    }
                }
                seen[v] = true;
                stack.push(v);
            }
        }
        seen.split_off(nf)
    }

    /// Non-failed branches connected to a feeder through closed switches and
    /// non-failed branches.
    pub fn energized_branches(
        &self,
        config: &SwitchConfiguration,
        failed: &BTreeSet<u32>,
    ) -> BTreeSet<u32> {
        let failed_mask = self.mask_of(failed);
        self.energized_mask(config, &failed_mask)
            .into_iter()
            .enumerate()
            .filter(|(_, e)| *e)
            .map(|(i, _)| self.branches[i].id)
            .collect()
    }

    pub(crate) fn mask_of(&self, ids: &BTreeSet<u32>) -> Vec<bool> {
        let mut mask = vec![false; self.branches.len()];
        for id in ids {
            if let Some(&i) = self.branch_index.get(id) {
                mask[i] = true;
            }
        }
        mask
    }

    /// True when the closed-switch graph has no cycle and no component holds
    /// two feeders.
    pub fn is_radial(&self, config: &SwitchConfiguration) -> bool {
        let n = self.vertex_count();
        let nf = self.feeders.len();
        let mut uf = UnionFind::<usize>::new(n);
        let mut has_feeder: Vec<bool> = (0..n).map(|v| v < nf).collect();
        let mut closed_edges = (0..self.branches.len())
            .filter(|&bi| config.sectionalizers[bi])
            .map(|bi| {
                (
                    self.vertex_id(Vertex::Section(bi)),
                    self.vertex_id(self.upstream[bi]),
                )
            })
            .chain(
                (0..self.ties.len())
                    .filter(|&ti| config.ties[ti])
                    .map(|ti| {
                        let (a, b) = self.tie_ends[ti];
                        (self.vertex_id(a), self.vertex_id(b))
                    }),
            );
        closed_edges.all(|(a, b)| {
            let (ra, rb) = (uf.find(a), uf.find(b));
            if ra == rb || (has_feeder[ra] && has_feeder[rb]) {
                return false;
            }
            let merged = has_feeder[ra] || has_feeder[rb];
            uf.union(ra, rb);
            has_feeder[uf.find(ra)] = merged;
            true
        })
    }

    /// All (sectionalizer, tie) pairs whose exchange from the base
    /// configuration stays radial and keeps every branch energized.
    pub fn feasible_single_exchanges(&self) -> Vec<(u32, u32)> {
        let no_failures = vec![false; self.branches.len()];
        let mut out = Vec::new();
        for bi in 0..self.branches.len() {
            for ti in 0..self.ties.len() {
                let mut config = SwitchConfiguration::base(self);
                config.sectionalizers[bi] = false;
                config.ties[ti] = true;
                if self.is_radial(&config)
                    && self.energized_mask(&config, &no_failures).iter().all(|&e| e)
                {
                    out.push((self.branches[bi].sectionalizer, self.ties[ti].id));
                }
            }
        }
        out
    }
}

/// BFS over accepted edges; returns the branch indices on the u–v path.
fn path_between(adj: &[Vec<(usize, usize)>], u: usize, v: usize) -> Vec<usize> {
    let mut prev: Vec<Option<(usize, usize)>> = vec![None; adj.len()];
    let mut seen = vec![false; adj.len()];
    seen[u] = true;
    let mut queue = VecDeque::from([u]);
    while let Some(x) = queue.pop_front() {
        if x == v {
            break;
        }
        for &(y, e) in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                prev[y] = Some((x, e));
                queue.push_back(y);
            }
        }
    }
    let mut path = Vec::new();
    let mut cur = v;
    while let Some((p, e)) = prev[cur] {
        path.push(e);
        cur = p;
    }
    path
}

/// Open/closed state of every sectionalizing and tie switch.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SwitchConfiguration {
    sectionalizers: Vec<bool>,
    ties: Vec<bool>,
}

impl SwitchConfiguration {
    /// Sectionalizers closed, ties open.
    pub fn base(net: &ElectricalNetwork) -> Self {
        Self {
            sectionalizers: vec![true; net.branches.len()],
            ties: vec![false; net.ties.len()],
        }
    }

    pub fn all_open(net: &ElectricalNetwork) -> Self {
        Self {
            sectionalizers: vec![false; net.branches.len()],
            ties: vec![false; net.ties.len()],
        }
    }

    pub(crate) fn is_closed_ref(&self, sw: SwitchRef) -> bool {
        match sw {
            SwitchRef::Sectionalizer(i) => self.sectionalizers[i],
            SwitchRef::Tie(i) => self.ties[i],
        }
    }

    pub(crate) fn set_ref(&mut self, sw: SwitchRef, closed: bool) {
        match sw {
            SwitchRef::Sectionalizer(i) => self.sectionalizers[i] = closed,
            SwitchRef::Tie(i) => self.ties[i] = closed,
        }
    }

    /// State of a switch by id; `None` for an unknown id.
    pub fn is_closed(&self, net: &ElectricalNetwork, switch: u32) -> Option<bool> {
        net.switch_index
            .get(&switch)
            .map(|&sw| self.is_closed_ref(sw))
    }

    pub fn set(&mut self, net: &ElectricalNetwork, switch: u32, closed: bool) -> Result<()> {
        let sw = net
            .switch_index
            .get(&switch)
            .copied()
            .ok_or_else(|| Error::Parameter(format!("unknown switch id {switch}")))?;
        self.set_ref(sw, closed);
        Ok(())
    }

    pub fn closed_ties(&self, net: &ElectricalNetwork) -> Vec<u32> {
        net.ties
            .iter()
            .zip(&self.ties)
            .filter(|(_, &c)| c)
            .map(|(t, _)| t.id)
            .collect()
    }

    pub fn open_sectionalizers(&self, net: &ElectricalNetwork) -> Vec<u32> {
        net.branches
            .iter()
            .zip(&self.sectionalizers)
            .filter(|(_, &c)| !c)
            .map(|(b, _)| b.sectionalizer)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(n: u32) -> ElectricalNetwork {
        let branches = (1..=n)
            .map(|i| Branch {
                id: i,
                from: i - 1,
                to: i,
                customers: 1,
                sectionalizer: 100 + i,
                lambda: None,
            })
            .collect();
        ElectricalNetwork::new("line", vec![0], (1..=n).collect(), branches, vec![]).unwrap()
    }

    #[test]
    fn two_branch_line_is_valid() {
        let net = line(2);
        assert_eq!(net.branches().len(), 2);
        assert_eq!(net.downstream_of(1).unwrap(), BTreeSet::from([2]));
        assert!(net.downstream_of(2).unwrap().is_empty());
        assert!(net.is_radial(&SwitchConfiguration::base(&net)));
    }

    #[test]
    fn cycle_is_reported_with_its_branches() {
        let b = |id, from, to| Branch {
            id,
            from,
            to,
            customers: 1,
            sectionalizer: id + 10,
            lambda: None,
        };
        let err = ElectricalNetwork::new(
            "loop",
            vec![0],
            vec![1, 2, 3],
            vec![b(1, 0, 1), b(2, 1, 2), b(3, 2, 3), b(4, 3, 1)],
            vec![],
        )
        .unwrap_err();
        match err {
            Error::Network(issues) => {
                assert_eq!(issues, vec![NetworkIssue::Cycle { branches: vec![2, 3, 4] }])
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn two_feeders_joined_is_not_radial() {
        let b = |id, from, to| Branch {
            id,
            from,
            to,
            customers: 1,
            sectionalizer: id + 10,
            lambda: None,
        };
        let err = ElectricalNetwork::new(
            "joined",
            vec![0, 9],
            vec![1],
            vec![b(1, 0, 1), b(2, 1, 9)],
            vec![],
        )
        .unwrap_err();
        assert!(matches!(err, Error::Network(ref v) if matches!(v[0], NetworkIssue::MultipleFeeders { .. })));
    }

    #[test]
    fn unfed_bus_and_unknown_node() {
        let b = |id, from, to| Branch {
            id,
            from,
            to,
            customers: 1,
            sectionalizer: id + 10,
            lambda: None,
        };
        let err =
            ElectricalNetwork::new("x", vec![0], vec![1, 2, 3], vec![b(1, 0, 1), b(2, 2, 3)], vec![])
                .unwrap_err();
        assert!(err.to_string().contains("buses 2, 3 are not fed"), "{err}");
        let err = ElectricalNetwork::new("x", vec![0], vec![1], vec![b(1, 0, 7)], vec![]).unwrap_err();
        assert!(err.to_string().contains("unknown node 7"), "{err}");
    }

    #[test]
    fn branch_orientation_does_not_depend_on_listing() {
        let branches = vec![
            Branch {
                id: 1,
                from: 1,
                to: 0,
                customers: 1,
                sectionalizer: 11,
                lambda: None,
            },
            Branch {
                id: 2,
                from: 2,
                to: 1,
                customers: 1,
                sectionalizer: 12,
                lambda: None,
            },
        ];
        let net = ElectricalNetwork::new("rev", vec![0], vec![1, 2], branches, vec![]).unwrap();
        assert_eq!(net.downstream_of(1).unwrap(), BTreeSet::from([2]));
    }

    #[test]
    fn all_open_energizes_nothing() {
        let net = line(3);
        let e = net.energized_branches(&SwitchConfiguration::all_open(&net), &BTreeSet::new());
        assert!(e.is_empty());
    }

    #[test]
    fn unknown_ids() {
        let net = line(2);
        assert!(matches!(net.downstream_of(42), Err(Error::UnknownBranch(42))));
        let mut c = SwitchConfiguration::base(&net);
        assert!(c.set(&net, 999, true).is_err());
        assert_eq!(c.is_closed(&net, 101), Some(true));
        assert_eq!(c.is_closed(&net, 999), None);
    }
}
