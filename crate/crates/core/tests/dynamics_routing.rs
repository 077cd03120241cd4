use lore_core::dynamics::{budgeted_step, full_step, init_state, DynamicsConfig, EvalCounter, SolverState};
use lore_core::graph::{gen_ba, gen_er, Graph};
use lore_core::routing::{
    budget_size, edge_score, is_refresh_step, ActiveSet, BudgetConfig, Router, Strategy as Routing,
};
use proptest::prelude::*;

fn arb_case() -> impl Strategy<Value = (Graph, SolverState)> {
    (5usize..60, 0.02f64..0.5, any::<u64>(), any::<bool>()).prop_map(|(n, p, seed, ba)| {
        let g = if ba { gen_ba(n, 2, seed).unwrap() } else { gen_er(n, p, seed).unwrap() };
        (g, init_state(n, seed ^ 0xabc).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn steps_stay_in_unit_box((g, s) in arb_case(), eta in 0.01f64..2.0, beta in 0.1f64..5.0) {
        let cfg = DynamicsConfig { eta, beta, ..DynamicsConfig::default() };
        let mut c = EvalCounter::default();
        let mut state = s;
        for t in 0..5 {
            let budget = BudgetConfig { rho: 0.3, ..BudgetConfig::default() };
            let mut router = Router::new(&g, budget, 7).unwrap();
            router.route(&state, &g, t, &mut c).unwrap();
            let b = budgeted_step(&state, &g, router.current().unwrap(), &cfg, None, &mut c).unwrap();
            prop_assert!(b.x.iter().all(|v| (0.0..=1.0).contains(v)));
            state = full_step(&state, &g, &cfg, &mut c);
            prop_assert!(state.x.iter().all(|v| (0.0..=1.0).contains(v)));
        }
    }

    #[test]
    fn full_support_is_bitwise_full_step((g, s) in arb_case()) {
        let cfg = DynamicsConfig::default();
        let all = ActiveSet::full(&g, 0);
        let mut c = EvalCounter::default();
        let (mut a, mut b) = (s.clone(), s);
        for _ in 0..10 {
            a = full_step(&a, &g, &cfg, &mut c);
            b = budgeted_step(&b, &g, &all, &cfg, None, &mut c).unwrap();
            prop_assert_eq!(&a.x, &b.x);
        }
    }

    #[test]
    fn message_count_is_twice_routed_edges((g, s) in arb_case(), strat in 0usize..6, rho in 0.01f64..1.0) {
        let cfg = DynamicsConfig::default();
        let budget = BudgetConfig { rho, strategy: Routing::ALL[strat], refresh: 3, ..BudgetConfig::default() };
        let mut router = Router::new(&g, budget, 1).unwrap();
        let mut c = EvalCounter::default();
        let mut state = s;
        let mut routed = 0u64;
        let cap = budget_size(rho, g.edge_count());
        let mut skeleton: Option<Vec<usize>> = None;
        for t in 0..12 {
            let before = router.current().cloned();
            let ev = router.route(&state, &g, t, &mut c).unwrap();
            let active = router.current().unwrap().clone();
            prop_assert_eq!(ev.refreshed, is_refresh_step(budget.strategy, t, 3));
            if !ev.refreshed {
                prop_assert_eq!(Some(&active), before.as_ref());
            }
            prop_assert!(active.len() <= cap.max(1));
            prop_assert_eq!(active.len(), cap);
            match &skeleton {
                None => skeleton = Some(active.skeleton_ids().to_vec()),
                Some(sk) => prop_assert_eq!(sk.as_slice(), active.skeleton_ids()),
            }
            routed += active.len() as u64;
            state = budgeted_step(&state, &g, &active, &cfg, None, &mut c).unwrap();
        }
        prop_assert_eq!(c.msg_evals, 2 * routed);
    }

    #[test]
    fn closer_to_half_never_lowers_score(a in 0.0f64..=1.0, b in 0.0f64..=1.0, frac in 0.0f64..1.0) {
        let moved = a + (0.5 - a) * frac;
        let s0 = SolverState { x: vec![a, b], x_prev: vec![a, b], t: 0 };
        let s1 = SolverState { x: vec![moved, b], x_prev: vec![moved, b], t: 0 };
        prop_assert!(edge_score((0, 1), &s1, 0.0) >= edge_score((0, 1), &s0, 0.0) - 1e-15);
    }

    #[test]
    fn binary_independent_sets_with_pressure_are_fixed(n in 3usize..40, seed in any::<u64>()) {
        let g = gen_er(n, 0.2, seed).unwrap();
        let set = lore_core::decode::greedy_decode(&init_state(n, seed).unwrap().x, &g);
        let x: Vec<f64> = (0..n).map(|v| if set.contains(v) { 1.0 } else { 0.0 }).collect();
        let cfg = DynamicsConfig::default();
        // maximal independent set: every excluded node has at least one chosen neighbor,
        // so its pressure is >= 1 >= 1/beta
        let s = SolverState { x: x.clone(), x_prev: x.clone(), t: 0 };
        prop_assert_eq!(full_step(&s, &g, &cfg, &mut EvalCounter::default()).x, x);
    }
}

#[test]
fn full_budget_lore_routes_everything_every_refresh() {
    let g = gen_er(120, 0.1, 4).unwrap();
    let budget = BudgetConfig { rho: 1.0, ..BudgetConfig::default() };
    let mut router = Router::new(&g, budget, 0).unwrap();
    let mut state = init_state(120, 1).unwrap();
    let mut c = EvalCounter::default();
    for t in 0..25 {
        router.route(&state, &g, t, &mut c).unwrap();
        assert_eq!(router.current().unwrap().len(), g.edge_count());
        state = full_step(&state, &g, &DynamicsConfig::default(), &mut c);
    }
}
