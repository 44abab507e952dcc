use fbas_reward::generators::{gen_organizational, gen_symmetric, hub_example, with_leaves};
use fbas_reward::io::{parse_fbas, serialize_fbas};
use fbas_reward::power::pivot_weights;
use fbas_reward::{
    approx_power_indices, exact_power_indices, find_minimal_quorums, reward_distribution, top_tier,
    CooperativeGame, Fbas, Method, Node, NodeId, QuorumSet, RewardOptions,
};
use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;

fn arb_quorum_set(n: usize, depth: u32) -> BoxedStrategy<QuorumSet> {
    let validators = proptest::sample::subsequence((0..n).collect::<Vec<_>>(), 0..=n);
    let inner = if depth == 0 {
        Just(vec![]).boxed()
    } else {
        proptest::collection::vec(arb_quorum_set(n, depth - 1), 0..=2).boxed()
    };
    (validators, inner)
        .prop_filter("needs a member", |(v, i)| !v.is_empty() || !i.is_empty())
        .prop_flat_map(|(v, i)| {
            let members = v.len() + i.len();
            let validators: Vec<NodeId> = v.into_iter().map(NodeId).collect();
            (1..=members).prop_map(move |t| QuorumSet::new(t, validators.clone(), i.clone()))
        })
        .boxed()
}

fn arb_fbas(max: usize) -> impl Strategy<Value = Fbas> {
    (1..=max).prop_flat_map(|n| {
        proptest::collection::vec(arb_quorum_set(n, 1), n).prop_map(|qsets| {
            let nodes = qsets
                .into_iter()
                .enumerate()
                .map(|(i, quorum_set)| Node {
                    id: NodeId(i),
                    alias: Some(format!("G{i:02}")),
                    quorum_set,
                })
                .collect();
            Fbas::new(nodes).unwrap()
        })
    })
}

fn normalize(q: &QuorumSet) -> (usize, Vec<usize>, Vec<String>) {
    let mut validators: Vec<usize> = q.validators.iter().map(|v| v.0).collect();
    validators.sort_unstable();
    let mut inner: Vec<String> = q
        .inner_sets
        .iter()
        .map(|i| format!("{:?}", normalize(i)))
        .collect();
    inner.sort();
    (q.threshold, validators, inner)
}

fn swap_mentions(q: &QuorumSet, a: usize, b: usize) -> QuorumSet {
    let swap = |v: usize| {
        if v == a {
            b
        } else if v == b {
            a
        } else {
            v
        }
    };
    QuorumSet::new(
        q.threshold,
        q.validators.iter().map(|v| NodeId(swap(v.0))).collect(),
        q.inner_sets
            .iter()
            .map(|i| swap_mentions(i, a, b))
            .collect(),
    )
}

/// Swapping every mention of `a` and `b` and exchanging their quorum sets
/// leaves the system unchanged.
fn symmetric_pair(fbas: &Fbas, a: usize, b: usize) -> bool {
    (0..fbas.len()).all(|k| {
        let source = if k == a {
            b
        } else if k == b {
            a
        } else {
            k
        };
        let swapped = swap_mentions(fbas.quorum_set(NodeId(source)), a, b);
        normalize(&swapped) == normalize(fbas.quorum_set(NodeId(k)))
    })
}

#[test]
fn generated_families_split_evenly() {
    let mut systems: Vec<Fbas> = (1..=15).map(gen_symmetric).collect();
    systems.extend((1..=5).map(gen_organizational));
    for fbas in systems {
        let report = reward_distribution(&fbas, Method::Exact, RewardOptions::default()).unwrap();
        let share = BigRational::new(1.into(), (fbas.len() as i64).into());
        for i in 0..fbas.len() {
            assert_eq!(report.exact(NodeId(i)), Some(&share), "n = {}", fbas.len());
        }
        assert_eq!(report.total(), BigRational::one());
    }
}

#[test]
fn generated_families_are_all_top_tier_with_intersection() {
    let mut systems: Vec<Fbas> = (1..=12).map(gen_symmetric).collect();
    systems.extend((1..=4).map(gen_organizational));
    for fbas in systems {
        assert_eq!(top_tier(&fbas), fbas.all_nodes());
        assert!(fbas_reward::has_quorum_intersection(&fbas));
    }
}

#[test]
fn leaves_get_nothing_and_change_nothing() {
    let bases = [hub_example(), gen_symmetric(4), gen_organizational(2)];
    for base in &bases {
        let before = reward_distribution(base, Method::Exact, RewardOptions::default()).unwrap();
        for k in [1, 3] {
            let fbas = with_leaves(base, k);
            let after =
                reward_distribution(&fbas, Method::Exact, RewardOptions::default()).unwrap();
            for i in 0..base.len() {
                assert_eq!(after.exact(NodeId(i)), before.exact(NodeId(i)));
            }
            for i in base.len()..fbas.len() {
                assert_eq!(after.value(NodeId(i)), 0.0);
            }
        }
    }
}

#[test]
fn sampling_converges_on_hub_example() {
    let fbas = hub_example();
    let game = CooperativeGame::over_top_tier(&fbas);
    let report = approx_power_indices(&game, 1_000_000, 2024).unwrap();
    assert!((report.value(NodeId(0)) - 7.0 / 15.0).abs() <= 0.005);
    for i in 1..5 {
        assert!((report.value(NodeId(i)) - 2.0 / 15.0).abs() <= 0.005);
    }
}

#[test]
fn sampling_symmetric_ten() {
    let fbas = gen_symmetric(10);
    let game = CooperativeGame::over_all_nodes(&fbas);
    let report = approx_power_indices(&game, 100_000, 7).unwrap();
    for v in report.values() {
        assert!((v - 0.1).abs() <= 0.01, "{v}");
    }
}

#[test]
fn weight_table_identity() {
    for n in 1..=25usize {
        let weights = pivot_weights(n);
        // first and last arrival: (n-1)!/n!
        let inv = BigRational::new(1.into(), (n as i64).into());
        assert_eq!(weights[1], inv);
        assert_eq!(weights[n], inv);
    }
}

#[test]
fn documents_round_trip_for_generated_systems() {
    let mut systems: Vec<Fbas> = (1..=10).map(gen_symmetric).collect();
    systems.extend((1..=4).map(gen_organizational));
    systems.push(with_leaves(&hub_example(), 2));
    for fbas in systems {
        let bytes = serialize_fbas(&fbas);
        let parsed = parse_fbas(&bytes).unwrap();
        assert!(parsed.warnings.is_empty());
        assert_eq!(parsed.fbas, fbas);
        assert_eq!(serialize_fbas(&parsed.fbas), bytes);
    }
    let hub = hub_example();
    let again = parse_fbas(&serialize_fbas(&hub)).unwrap().fbas;
    assert_eq!(find_minimal_quorums(&again), find_minimal_quorums(&hub));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn satisfaction_is_monotone_and_matches_fast_path(
        (fbas, a, b) in arb_fbas(8).prop_flat_map(|f| {
            let n = f.len();
            let sub = proptest::sample::subsequence((0..n).collect::<Vec<_>>(), 0..=n);
            (Just(f), sub.clone(), sub)
        })
    ) {
        let small = fbas.set_of(a.iter().copied());
        let large = small.union(&fbas.set_of(b.iter().copied()));
        for node in fbas.nodes() {
            let q = &node.quorum_set;
            prop_assert_eq!(q.is_satisfied_by(&small), fbas.is_satisfied_for(node.id.0, &small));
            if q.is_satisfied_by(&small) {
                prop_assert!(q.is_satisfied_by(&large));
            }
        }
    }

    #[test]
    fn game_is_simple_and_monotone(
        (fbas, a, extra) in arb_fbas(8).prop_flat_map(|f| {
            let n = f.len();
            let sub = proptest::sample::subsequence((0..n).collect::<Vec<_>>(), 0..=n);
            (Just(f), sub.clone(), sub)
        })
    ) {
        let game = CooperativeGame::over_all_nodes(&fbas);
        let c = fbas.set_of(a.iter().copied());
        let bigger = c.union(&fbas.set_of(extra.iter().copied()));
        prop_assert!(game.characteristic_value(&c) <= game.characteristic_value(&bigger));
        prop_assert_eq!(game.characteristic_value(&fbas.empty_set()), 0);
        for i in c.iter() {
            let mut without = c.clone();
            without.remove(i);
            let marginal = game.characteristic_value(&c) as i32 - game.characteristic_value(&without) as i32;
            prop_assert!(marginal == 0 || marginal == 1);
            prop_assert_eq!(marginal == 1, game.is_critical(i, &c));
        }
    }

    #[test]
    fn top_tier_restriction_is_lossless(fbas in arb_fbas(8)) {
        prop_assume!(!find_minimal_quorums(&fbas).is_empty());
        let full = exact_power_indices(&CooperativeGame::over_all_nodes(&fbas), 25).unwrap();
        let tier = exact_power_indices(&CooperativeGame::over_top_tier(&fbas), 25).unwrap();
        prop_assert_eq!(&full.indices, &tier.indices);
        prop_assert_eq!(tier.total(), BigRational::one());
        let members = top_tier(&fbas);
        for i in 0..fbas.len() {
            if !members.contains(i) {
                prop_assert_eq!(full.value(NodeId(i)), 0.0);
            }
        }
    }

    #[test]
    fn symmetric_nodes_get_equal_shares(fbas in arb_fbas(7)) {
        prop_assume!(!find_minimal_quorums(&fbas).is_empty());
        let report = exact_power_indices(&CooperativeGame::over_all_nodes(&fbas), 25).unwrap();
        for a in 0..fbas.len() {
            for b in a + 1..fbas.len() {
                if symmetric_pair(&fbas, a, b) {
                    prop_assert_eq!(report.exact(NodeId(a)), report.exact(NodeId(b)));
                }
            }
        }
    }

    #[test]
    fn sampled_counts_sum_to_samples(fbas in arb_fbas(8), samples in 1u64..3000, seed: u64) {
        let game = CooperativeGame::over_all_nodes(&fbas);
        prop_assume!(game.is_winning(game.players()));
        let report = approx_power_indices(&game, samples, seed).unwrap();
        prop_assert_eq!(report.total(), BigRational::one());
        prop_assert!(report.values().iter().all(|v| (0.0..=1.0).contains(v)));
    }

    #[test]
    fn random_documents_round_trip(fbas in arb_fbas(8)) {
        let bytes = serialize_fbas(&fbas);
        let parsed = parse_fbas(&bytes).unwrap();
        prop_assert_eq!(&parsed.fbas, &fbas);
        prop_assert_eq!(serialize_fbas(&parsed.fbas), bytes);
    }
}
