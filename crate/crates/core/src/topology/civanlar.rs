use super::{Branch, Controller, CyberNetwork, ElectricalNetwork, NetworkModel, RingNode, TieSwitch};

/// (branch id, upstream node, downstream node, customers). Nodes 0-2 are
/// feeders; branch ids equal their downstream bus.
const BRANCHES: [(u32, u32, u32, u32); 13] = [
    (3, 0, 3, 3),
    (4, 3, 4, 5),
    (5, 3, 5, 3),
    (6, 5, 6, 2),
    (7, 1, 7, 6),
    (8, 7, 8, 8),
    (9, 7, 9, 1),
    (10, 8, 10, 1),
    (11, 8, 11, 7),
    (12, 2, 12, 1),
    (13, 12, 13, 1),
    (14, 12, 14, 1),
    (15, 14, 15, 3),
];

const TIES: [(u32, u32, u32); 3] = [(16, 4, 10), (17, 9, 13), (18, 6, 15)];

/// Three-feeder, thirteen-branch Civanlar test system with a 13-switch
/// communication ring and two servers.
///
/// Sectionalizer `i` belongs to branch `i`; controller `i` monitors branch
/// `i` and hangs off comm switch `i`. Ring order is server 1, switches 3-8,
/// server 2, switches 9-15.
pub fn build_civanlar() -> NetworkModel {
    let branches = BRANCHES
        .iter()
        .map(|&(id, from, to, customers)| Branch {
            id,
            from,
            to,
            customers,
            sectionalizer: id,
            lambda: None,
        })
        .collect();
    let ties = TIES
        .iter()
        .map(|&(id, a, b)| TieSwitch { id, a, b })
        .collect();
    let electrical =
        ElectricalNetwork::new("civanlar", vec![0, 1, 2], (3..=15).collect(), branches, ties)
            .expect("civanlar electrical data is valid");

    let mut ring = vec![RingNode::Server(1)];
    ring.extend((3..=8).map(RingNode::Switch));
    ring.push(RingNode::Server(2));
    ring.extend((9..=15).map(RingNode::Switch));
    let controllers = (3..=15)
        .map(|id| Controller {
            id,
            branch: id,
            comm_switch: id,
        })
        .collect();
    let cyber = CyberNetwork::new(ring, controllers, &electrical)
        .expect("civanlar cyber data is valid");
    NetworkModel { electrical, cyber }
}
