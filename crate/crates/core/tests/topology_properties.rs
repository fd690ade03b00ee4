mod common;

use std::collections::BTreeSet;

use gridrel::contingency::select_restoration;
use gridrel::topology::{build_civanlar, load_network, SwitchConfiguration};
use proptest::prelude::*;

#[test]
fn shipped_file_matches_builtin() {
    let loaded = load_network(&common::data("networks/civanlar.toml")).unwrap();
    assert_eq!(loaded, build_civanlar());
    assert_eq!(loaded.electrical.total_customers(), 42);
}

#[test]
fn fifteen_single_exchanges() {
    let net = build_civanlar().electrical;
    let exchanges = net.feasible_single_exchanges();
    assert_eq!(exchanges.len(), 15);
    for (_, tie) in &exchanges {
        assert!([16, 17, 18].contains(tie));
    }
}

#[test]
fn restoration_matches_exhaustive_search() {
    let net = build_civanlar().electrical;
    for b in net.branches() {
        let plan = select_restoration(&net, b.id).unwrap();
        let failed = BTreeSet::from([b.id]);
        let energized = net.energized_branches(&plan.configuration, &failed).len();
        let (best, fewest) = common::brute_force_restoration(&net, b.id);
        assert_eq!(energized, best, "branch {}", b.id);
        assert_eq!(plan.restoration.len(), fewest, "branch {}", b.id);
        assert!(net.is_radial(&plan.configuration));
    }
}

#[test]
fn base_configuration_is_radial() {
    let net = build_civanlar().electrical;
    assert!(net.is_radial(&SwitchConfiguration::base(&net)));
    assert_eq!(
        net.energized_branches(&SwitchConfiguration::base(&net), &BTreeSet::new()).len(),
        13
    );
}

fn step() -> impl Strategy<Value = (u32, bool)> {
    (3u32..=15, any::<bool>())
}

proptest! {
    #[test]
    fn configurations_stay_radial(steps in prop::collection::vec(step(), 1..30)) {
        let net = build_civanlar().electrical;
        for config in common::replay(&net, &steps) {
            prop_assert!(net.is_radial(&config));
        }
    }

    #[test]
    fn more_failures_never_energize_more(
        first in prop::collection::btree_set(3u32..=15, 0..6),
        extra in prop::collection::btree_set(3u32..=15, 0..6),
        ties in prop::collection::vec(any::<bool>(), 3),
    ) {
        let net = build_civanlar().electrical;
        let mut config = SwitchConfiguration::base(&net);
        for (t, closed) in [16, 17, 18].into_iter().zip(ties) {
            config.set(&net, t, closed).unwrap();
        }
        let all: BTreeSet<u32> = first.union(&extra).copied().collect();
        let fewer = net.energized_branches(&config, &first);
        let more = net.energized_branches(&config, &all);
        prop_assert!(more.is_subset(&fewer));
    }

    #[test]
    fn restoration_never_loses_supply(steps in prop::collection::vec(step(), 0..10), fault in 3u32..=15) {
        let net = build_civanlar().electrical;
        let configs = common::replay(&net, &steps);
        let config = configs.last().cloned().unwrap_or_else(|| SwitchConfiguration::base(&net));
        let mut active = BTreeSet::new();
        for &(b, fail) in &steps {
            if fail { active.insert(b); } else { active.remove(&b); }
        }
        prop_assume!(!active.contains(&fault));
        let before = net.energized_branches(&config, &active);
        prop_assume!(before.contains(&fault));
        let plan = gridrel::contingency::plan_restoration(&net, &config, &active, fault).unwrap();
        let mut failed = active.clone();
        failed.insert(fault);
        let after = net.energized_branches(&plan.configuration, &failed);
        let mut expected = before.clone();
        expected.remove(&fault);
        for b in &plan.unrestorable {
            expected.remove(b);
        }
        prop_assert_eq!(after, expected);
        prop_assert!(net.is_radial(&plan.configuration));
    }
}
