use proptest::prelude::*;

use rico_core::model::{control_loop_latency, validate_instance, Component, Solution};
use rico_core::scenarios::{generate_hierarchical_topology, TopologySpec};

fn is_int(x: f64) -> bool {
    x.fract() == 0.0
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn generated_instances_are_valid(seed in any::<u64>(), n_cns in 0usize..=512) {
        let inst = generate_hierarchical_topology(&TopologySpec::default(), n_cns, seed).unwrap();
        prop_assert!(validate_instance(&inst).is_empty());
        prop_assert_eq!(inst.n_cn(), n_cns + 1);
        let per_tier = |t: u8| inst.e2_nodes.iter().filter(|e| e.tier == t).count();
        prop_assert_eq!((per_tier(1), per_tier(2), per_tier(3)), (5, 20, 487));

        // E2 to cloud: 4 ms plus one sampled link per tier below tier 1.
        for (i, e) in inst.e2_nodes.iter().enumerate() {
            let l = inst.latency_e2_cn(i, 0);
            let hops = (e.tier - 1) as f64;
            prop_assert!(is_int(l));
            prop_assert!(l >= 4.0 + hops && l <= 4.0 + 3.0 * hops, "e2 {} tier {} latency {}", i, e.tier, l);
        }
        let n = inst.graph.len();
        for i in 0..n {
            for j in (i + 1)..n {
                let l = inst.graph.get(i, j);
                prop_assert!(is_int(l) && l >= 1.0);
            }
        }
    }

    #[test]
    fn seeded_generation_is_reproducible(seed in any::<u64>(), n_cns in 0usize..=40) {
        let spec = TopologySpec::default().with_e2_counts([2, 4, 9]);
        prop_assert_eq!(
            generate_hierarchical_topology(&spec, n_cns, seed),
            generate_hierarchical_topology(&spec, n_cns, seed)
        );
    }
}

#[test]
fn cloud_only_loops_at_least_eight_ms() {
    let inst = generate_hierarchical_topology(&TopologySpec::default(), 0, 9).unwrap();
    let sol = Solution::uniform(&inst, 0);
    for e2 in 0..inst.n_e2() {
        for a in 0..inst.n_xapps() {
            assert!(control_loop_latency(&inst, &sol, e2, a).unwrap() >= 8.0);
        }
    }
}

#[test]
fn co_located_tier3_loop_is_twice_the_access_link() {
    // Find a tier-3 CN one millisecond from its site E2 node.
    for seed in 0..20 {
        let inst = generate_hierarchical_topology(&TopologySpec::default(), 10, seed).unwrap();
        let hit = (1..inst.n_cn()).find_map(|m| {
            (0..inst.n_e2()).find(|&i| inst.e2_nodes[i].tier == 3 && inst.latency_e2_cn(i, m) == 1.0).map(|i| (m, i))
        });
        let Some((m, e2)) = hit else { continue };
        let mut sol = Solution::uniform(&inst, m);
        sol.set_host(e2, Component::RicMan, Some(0));
        for a in 0..inst.n_xapps() {
            let l = control_loop_latency(&inst, &sol, e2, a).unwrap();
            assert_eq!(l, 2.0);
            assert!(l <= inst.xapps[a].rho_ms);
        }
        return;
    }
    panic!("no tier-3 CN with a 1 ms access link in 20 seeds");
}

#[test]
fn different_seeds_give_different_latencies() {
    let a = generate_hierarchical_topology(&TopologySpec::default(), 30, 1).unwrap();
    let b = generate_hierarchical_topology(&TopologySpec::default(), 30, 2).unwrap();
    assert_ne!(a.graph, b.graph);
}
