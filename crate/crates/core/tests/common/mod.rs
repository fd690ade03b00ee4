#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use gridrel::contingency::{isolate_section, plan_restoration};
use gridrel::topology::{ElectricalNetwork, SwitchConfiguration};

pub fn data(rel: &str) -> PathBuf {
    let here = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let local = here.join("data");
    let dir = if local.is_dir() { local } else { here.join("../core/data") };
    dir.join(rel)
}

/// Largest number of energized branches reachable by closing any subset of
/// ties after isolating `faulted`, with the fewest ties among the best.
pub fn brute_force_restoration(net: &ElectricalNetwork, faulted: u32) -> (usize, usize) {
    let mut isolated = SwitchConfiguration::base(net);
    isolate_section(net, &mut isolated, faulted).unwrap();
    let failed = BTreeSet::from([faulted]);
    let ties: Vec<u32> = net.ties().iter().map(|t| t.id).collect();
    let mut best = (0, usize::MAX);
    for mask in 0u32..(1 << ties.len()) {
        let mut config = isolated.clone();
        for (k, &t) in ties.iter().enumerate() {
            config.set(net, t, mask & (1 << k) != 0).unwrap();
        }
        if !net.is_radial(&config) {
            continue;
        }
        let energized = net.energized_branches(&config, &failed).len();
        let closed = mask.count_ones() as usize;
        if energized > best.0 || (energized == best.0 && closed < best.1) {
            best = (energized, closed);
        }
    }
    best
}

/// Applies a sequence of branch failures and repairs the way the simulator
/// does, returning every configuration produced.
pub fn replay(net: &ElectricalNetwork, steps: &[(u32, bool)]) -> Vec<SwitchConfiguration> {
    let base = SwitchConfiguration::base(net);
    let mut config = base.clone();
    let mut active: Vec<u32> = Vec::new();
    let mut seen = Vec::new();
    for &(branch, fail) in steps {
        if fail {
            if active.contains(&branch) {
                continue;
            }
            let failed: BTreeSet<u32> = active.iter().copied().collect();
            if net.energized_branches(&config, &failed).contains(&branch) {
                config = plan_restoration(net, &config, &failed, branch)
                    .unwrap()
                    .configuration;
            } else {
                isolate_section(net, &mut config, branch).unwrap();
            }
            active.push(branch);
        } else {
            active.retain(|&b| b != branch);
            config = base.clone();
            let mut failed = BTreeSet::new();
            for &b in &active {
                if net.energized_branches(&config, &failed).contains(&b) {
                    config = plan_restoration(net, &config, &failed, b)
                        .unwrap()
                        .configuration;
                } else {
                    isolate_section(net, &mut config, b).unwrap();
                }
                failed.insert(b);
            }
        }
        seen.push(config.clone());
    }
    seen
}
