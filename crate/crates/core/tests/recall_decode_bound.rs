use lore_core::bound::{omitted_message_mass, paired_trajectory_report};
use lore_core::decode::{greedy_decode, is_independent, repair_and_validate, NodeSet};
use lore_core::dynamics::{budgeted_step, init_state, DynamicsConfig, EvalCounter};
use lore_core::graph::{gen_er, Graph};
use lore_core::recall::{apply_recall, bath_signal, refresh_bath_cache};
use lore_core::rng::rng_from_seed;
use lore_core::routing::{build_active_set, ActiveSet, BudgetConfig, Strategy};
use proptest::prelude::*;

fn brute_force_independent(set: &NodeSet, g: &Graph) -> bool {
    let m = set.members();
    for a in 0..m.len() {
        for b in a + 1..m.len() {
            if g.neighbors(m[a]).contains(&m[b]) {
                return false;
            }
        }
    }
    true
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn recall_output_lies_between_inputs(n in 5usize..50, seed in any::<u64>(), rho in 0.05f64..1.0) {
        let g = gen_er(n, 0.2, seed).unwrap();
        let s = init_state(n, seed).unwrap();
        let budget = BudgetConfig { rho, ..BudgetConfig::default() };
        let set = build_active_set(Strategy::Lore, &s, &g, &budget, None, 0, &mut rng_from_seed(1), &mut EvalCounter::default()).unwrap();
        let cfg = DynamicsConfig { recall_enabled: true, ..DynamicsConfig::default() };
        let cache = refresh_bath_cache(&s, &g, &set);
        prop_assert!(cache.alpha.iter().all(|a| (0.0..=1.0).contains(a)));
        for v in 0..n {
            if cache.alpha[v] == 1.0 { prop_assert_eq!(cache.s_hat[v], 0.0); }
        }
        let cluster: Vec<f64> = budgeted_step(&s, &g, &set, &DynamicsConfig::default(), None, &mut EvalCounter::default()).unwrap().x;
        let g_sig = bath_signal(&s, &cache, &cfg);
        let out = apply_recall(&cluster, &s, &cache, &cfg).unwrap();
        for i in 0..n {
            let (lo, hi) = (cluster[i].min(g_sig[i]), cluster[i].max(g_sig[i]));
            prop_assert!(out[i] >= lo - 1e-15 && out[i] <= hi + 1e-15);
        }
    }

    #[test]
    fn decode_and_repair_always_feasible(n in 1usize..40, p in 0.0f64..0.9, seed in any::<u64>(), picks in proptest::collection::vec(any::<bool>(), 40)) {
        let g = gen_er(n, p, seed).unwrap();
        let x = init_state(n, seed).unwrap().x;
        let d = greedy_decode(&x, &g);
        prop_assert!(is_independent(&d, &g) && brute_force_independent(&d, &g));
        prop_assert_eq!(&repair_and_validate(&d, &g), &d);
        let raw = NodeSet::from_members((0..n).filter(|&v| picks[v]).collect());
        let r = repair_and_validate(&raw, &g);
        prop_assert!(is_independent(&r, &g) && brute_force_independent(&r, &g));
        prop_assert!(r.members().iter().all(|v| raw.contains(*v)));
        prop_assert_eq!(repair_and_validate(&r, &g), r);
    }
}

#[test]
fn recall_with_full_support_matches_plain_step() {
    let g = gen_er(100, 0.1, 3).unwrap();
    let all = ActiveSet::full(&g, 0);
    let s = init_state(100, 3).unwrap();
    let on = DynamicsConfig { recall_enabled: true, ..DynamicsConfig::default() };
    let cache = refresh_bath_cache(&s, &g, &all);
    let mut c = EvalCounter::default();
    let a = budgeted_step(&s, &g, &all, &on, Some(&cache), &mut c).unwrap();
    let b = budgeted_step(&s, &g, &all, &DynamicsConfig::default(), None, &mut c).unwrap();
    assert_eq!(a, b);
}

#[test]
fn omitted_mass_shrinks_with_nested_budgets() {
    let g = gen_er(200, 0.05, 11).unwrap();
    let s = init_state(200, 12).unwrap();
    let cfg = DynamicsConfig::default();
    let mut prev_set: Option<ActiveSet> = None;
    let mut prev_eps = f64::INFINITY;
    for rho in [0.05, 0.2, 0.8, 1.0] {
        let budget = BudgetConfig { rho, ..BudgetConfig::default() };
        let set = build_active_set(Strategy::Lore, &s, &g, &budget, None, 0, &mut rng_from_seed(0), &mut EvalCounter::default()).unwrap();
        if let Some(p) = &prev_set {
            assert!(p.edge_ids().iter().all(|id| set.contains(*id)), "sets not nested at rho={rho}");
        }
        let eps = omitted_message_mass(&s.x, &g, &set, &cfg);
        assert!(eps <= prev_eps, "eps({rho}) = {eps} > {prev_eps}");
        prev_eps = eps;
        prev_set = Some(set);
    }
    assert_eq!(prev_eps, 0.0);
}

#[test]
fn every_strategy_satisfies_the_recursion() {
    let g = gen_er(150, 0.06, 21).unwrap();
    let cfg = DynamicsConfig { steps: 40, ..DynamicsConfig::default() };
    for strategy in Strategy::ALL {
        for recall in [false, true] {
            let budget = BudgetConfig { strategy, rho: 0.1, ..BudgetConfig::default() };
            let dc = DynamicsConfig { recall_enabled: recall, ..cfg };
            let rep = paired_trajectory_report(&g, &dc, &budget, 5).unwrap();
            assert!(rep.violated_steps.is_empty(), "{strategy} recall={recall}");
            assert!(rep.unrolled_holds);
            assert!(rep.decomposition_failures().is_empty());
            assert!(rep.eps_rho.iter().all(|&e| e >= 0.0));
        }
    }
}
