use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::{ElectricalNetwork, NetworkIssue};
use crate::error::{Error, Result};

/// Position on the communication ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RingNode {
    Switch(u32),
    Server(u32),
}

/// Field device monitoring one branch and driving its switches.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Controller {
    pub id: u32,
    pub branch: u32,
    pub comm_switch: u32,
}

/// Failed cyber components at one instant.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CyberState {
    pub failed_comm_switches: BTreeSet<u32>,
    pub failed_controllers: BTreeSet<u32>,
    pub failed_servers: BTreeSet<u32>,
}

impl CyberState {
    pub fn all_up() -> Self {
        Self::default()
    }
}

/// Reachability of a branch's controller from the operation center.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommStatus {
    /// The normal spanning-tree path to a live server is intact.
    Connected,
    /// A server is reachable only after the ring reroutes around failures.
    ConnectedAfterRstp,
    /// The branch's controller is failed.
    ControllerDown,
    /// Controller up but no live server is reachable. Treated like
    /// `ControllerDown`: the operation center is blind to the branch.
    Unreachable,
}

impl CommStatus {
    pub fn is_blind(self) -> bool {
        matches!(self, CommStatus::ControllerDown | CommStatus::Unreachable)
    }
}

/// Communication layer: a ring of switches and servers. In normal operation
/// the link from the last ring node back to the first is blocked, so the
/// active topology is the ring order read as a line.
#[derive(Debug, Clone, PartialEq)]
pub struct CyberNetwork {
    ring: Vec<RingNode>,
    controllers: Vec<Controller>,
    controller_by_branch: HashMap<u32, usize>,
    ring_position: HashMap<RingNode, usize>,
}

impl CyberNetwork {
    pub fn new(
        ring: Vec<RingNode>,
        controllers: Vec<Controller>,
        net: &ElectricalNetwork,
    ) -> Result<Self> {
        let mut issues = Vec::new();
        match Self::build(ring, controllers, net, &mut issues) {
            Some(c) if issues.is_empty() => Ok(c),
            _ => Err(Error::Network(issues)),
        }
    }

    pub(crate) fn build(
        ring: Vec<RingNode>,
        controllers: Vec<Controller>,
        net: &ElectricalNetwork,
        issues: &mut Vec<NetworkIssue>,
    ) -> Option<Self> {
        let start = issues.len();
        if ring.is_empty() {
            issues.push(NetworkIssue::EmptyRing);
        }
        if !ring.iter().any(|n| matches!(n, RingNode::Server(_))) && !ring.is_empty() {
            issues.push(NetworkIssue::NoServer);
        }
        let mut ring_position = HashMap::new();
        for (i, &node) in ring.iter().enumerate() {
            if ring_position.insert(node, i).is_some() {
                let (kind, id) = match node {
                    RingNode::Switch(id) => ("comm switch", id),
                    RingNode::Server(id) => ("server", id),
                };
                issues.push(NetworkIssue::DuplicateId { kind, id });
            }
        }
        let mut controller_ids = BTreeSet::new();
        let mut controller_by_branch = HashMap::new();
        for (i, c) in controllers.iter().enumerate() {
            if !controller_ids.insert(c.id) {
                issues.push(NetworkIssue::DuplicateId {
                    kind: "controller",
                    id: c.id,
                });
            }
            if net.branch(c.branch).is_err() {
                issues.push(NetworkIssue::UnknownBranch {
                    controller: c.id,
                    branch: c.branch,
                });
            } else if controller_by_branch.insert(c.branch, i).is_some() {
                issues.push(NetworkIssue::DuplicateController { branch: c.branch });
            }
            if !ring_position.contains_key(&RingNode::Switch(c.comm_switch)) {
                issues.push(NetworkIssue::UnknownCommSwitch {
                    controller: c.id,
                    comm_switch: c.comm_switch,
                });
            }
        }
        for b in net.branches() {
            if !controller_by_branch.contains_key(&b.id) {
                issues.push(NetworkIssue::MissingController { branch: b.id });
            }
        }
        if issues.len() > start {
            return None;
        }
        Some(Self {
            ring,
            controllers,
            controller_by_branch,
            ring_position,
        })
    }

    pub fn ring(&self) -> &[RingNode] {
        &self.ring
    }

    pub fn controllers(&self) -> &[Controller] {
        &self.controllers
    }

    pub fn comm_switches(&self) -> impl Iterator<Item = u32> + '_ {
        self.ring.iter().filter_map(|n| match n {
            RingNode::Switch(id) => Some(*id),
            RingNode::Server(_) => None,
        })
    }

    pub fn servers(&self) -> impl Iterator<Item = u32> + '_ {
        self.ring.iter().filter_map(|n| match n {
            RingNode::Server(id) => Some(*id),
            RingNode::Switch(_) => None,
        })
    }

    pub fn controller_for(&self, branch: u32) -> Result<&Controller> {
        self.controller_by_branch
            .get(&branch)
            .map(|&i| &self.controllers[i])
            .ok_or(Error::UnknownBranch(branch))
    }

    fn is_up(&self, node: RingNode, state: &CyberState) -> bool {
        match node {
            RingNode::Switch(id) => !state.failed_comm_switches.contains(&id),
            RingNode::Server(id) => !state.failed_servers.contains(&id),
        }
    }

    /// Whether the operation center can see and command `branch`.
    pub fn controller_comm_status(&self, branch: u32, state: &CyberState) -> Result<CommStatus> {
        let controller = self.controller_for(branch)?;
        if state.failed_controllers.contains(&controller.id) {
            return Ok(CommStatus::ControllerDown);
        }
        let origin = self.ring_position[&RingNode::Switch(controller.comm_switch)];
        if !self.is_up(self.ring[origin], state) {
            return Ok(CommStatus::Unreachable);
        }
        let live_servers: Vec<usize> = self
            .ring
            .iter()
            .enumerate()
            .filter(|(_, n)| matches!(n, RingNode::Server(_)) && self.is_up(**n, state))
            .map(|(i, _)| i)
            .collect();
        if live_servers.is_empty() {
            return Ok(CommStatus::Unreachable);
        }

        // Normal active path: along the ring order, never across the blocked link.
        let intact = live_servers.iter().any(|&s| {
            let (lo, hi) = if s < origin { (s, origin) } else { (origin, s) };
            self.ring[lo..=hi].iter().all(|&n| self.is_up(n, state))
        });
        if intact {
            return Ok(CommStatus::Connected);
        }

        // Rerouted: walk both directions around the ring until a failed node.
        let n = self.ring.len();
        for step in [1, n - 1] {
            let mut pos = origin;
            for _ in 1..n {
                pos = (pos + step) % n;
                let node = self.ring[pos];
                if !self.is_up(node, state) {
                    break;
                }
                if matches!(node, RingNode::Server(_)) {
                    return Ok(CommStatus::ConnectedAfterRstp);
                }
            }
        }
        Ok(CommStatus::Unreachable)
    }
}
