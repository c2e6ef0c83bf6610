use std::sync::Arc;

use eon_core::aco::{
    count_fragments, fragment_change, fragment_delta_by_count, init_pheromones, oracle_solve, roulette, solve,
    SolverConfig,
};
use eon_core::auxgraph::build_auxiliary_graph;
use eon_core::fixtures::{self, random_instance, RandomInstanceSpec};
use eon_core::model::{validate_allocation, LinkId, ModulationTable, NetworkState, Request, Topology};
use eon_core::solvers::{Solver, SolverKind};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn line_state(slots: usize, occupied: &[usize]) -> NetworkState {
    let topo = Topology::new(vec!["a".into(), "b".into()], vec![(0, 1, 100.0)]).unwrap();
    let mut state = NetworkState::new(Arc::new(topo), slots);
    for &s in occupied {
        state.occupy_background(LinkId(0), s, 1).unwrap();
    }
    state
}

proptest! {
    #[test]
    fn fragment_change_matches_run_count(bits in prop::collection::vec(any::<bool>(), 1..40), pick in any::<prop::sample::Index>(), fs in 1usize..6) {
        let slots = bits.len();
        let occupied: Vec<usize> = bits.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i + 1).collect();
        let state = line_state(slots, &occupied);
        let grid = state.grid();
        let windows: Vec<usize> = (1..=slots.saturating_sub(fs) + 1).filter(|&k| k + fs - 1 <= slots && grid.window_free(LinkId(0), k, fs)).collect();
        prop_assume!(!windows.is_empty());
        let k = windows[pick.index(windows.len())];
        let expected = fragment_delta_by_count(grid.link(LinkId(0)), k, fs);
        prop_assert_eq!(fragment_change(grid, LinkId(0), k, fs) as i64, expected);
    }

    #[test]
    fn aux_graph_equals_window_enumeration(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_instance(&RandomInstanceSpec::default(), &mut rng);
        let aux = build_auxiliary_graph(&inst.state, &inst.request, &inst.net.modulation);
        let mut got: Vec<(usize, u8, usize)> = aux.links().iter().map(|l| (l.neighbor, l.level, l.start)).collect();
        got.sort();
        let topo = &inst.net.topology;
        let mut want = Vec::new();
        for &(nb, link) in topo.neighbors(inst.request.source) {
            for level in inst.net.modulation.levels() {
                let fs = inst.net.modulation.required_slots(inst.request.rate_gbps, level.index).unwrap();
                for k in 1..=inst.net.slots {
                    if k + fs - 1 <= inst.net.slots && (k..k + fs).all(|s| !inst.state.grid().link(link)[s - 1]) {
                        want.push((nb, level.index, k));
                    }
                }
            }
        }
        want.sort();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn colony_never_beats_oracle_and_stays_feasible(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_instance(&RandomInstanceSpec::default(), &mut rng);
        let oracle = oracle_solve(&inst.state, &inst.request, &inst.net.modulation).unwrap();
        let out = solve(&inst.state, &inst.request, &inst.net.modulation, &SolverConfig::default().with_seed(seed));
        match (out.allocation(), oracle) {
            (Some(a), Some(o)) => {
                validate_allocation(&inst.state, &inst.net.modulation, &inst.request, a).unwrap();
                prop_assert!(out.best_fitness.unwrap() >= o.fitness);
            }
            (Some(_), None) => prop_assert!(false, "colony allocated where no solution exists"),
            (None, _) => {}
        }
    }

    #[test]
    fn baselines_return_valid_allocations(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_instance(&RandomInstanceSpec::default(), &mut rng);
        for kind in SolverKind::ALL {
            let out = Solver::new(kind).solve(&inst.state, &inst.request, &inst.net.modulation, seed).unwrap();
            if let Some(a) = out.allocation() {
                validate_allocation(&inst.state, &inst.net.modulation, &inst.request, a).unwrap();
            }
        }
    }
}

#[test]
fn count_fragments_basics() {
    assert_eq!(count_fragments(&[]), 0);
    assert_eq!(count_fragments(&[true, true]), 0);
    assert_eq!(count_fragments(&[false, true, false, false, true, false]), 3);
}

#[test]
fn roulette_frequencies_follow_weights() {
    let weights = [1.0, 2.0, 0.0, 3.0, 4.0];
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut hits = [0usize; 5];
    let draws = 100_000;
    for _ in 0..draws {
        hits[roulette(&weights, &mut rng).unwrap()] += 1;
    }
    assert_eq!(hits[2], 0);
    for (i, w) in weights.iter().enumerate() {
        let freq = hits[i] as f64 / draws as f64;
        assert!((freq - w / 10.0).abs() < 0.01, "index {i}: {freq}");
    }
    assert_eq!(roulette(&[0.0, 0.0], &mut rng), None);
}

#[test]
fn initial_aux_pheromone_prefers_low_level_and_slot() {
    let net = fixtures::six_node();
    let state = net.empty_state();
    let req = Request::permanent(0, 0, 5, 20.0).unwrap();
    let aux = build_auxiliary_graph(&state, &req, &net.modulation);
    let store = init_pheromones(&aux);
    for (i, l) in aux.links().iter().enumerate() {
        let tau = store.aux(i, eon_core::aco::PheromoneView::Initial);
        assert!((tau - 1.0 / (l.level as f64 + l.start as f64)).abs() < 1e-12);
    }
}

#[test]
fn solve_is_deterministic_per_seed() {
    let net = fixtures::nsfnet();
    let mut state = net.empty_state();
    let modulation = ModulationTable::default();
    for i in 0..20u64 {
        let req = Request::permanent(i, (i % 14) as usize, ((i * 5 + 3) % 14) as usize, 40.0 + 20.0 * i as f64).unwrap();
        if req.source == req.destination {
            continue;
        }
        let cfg = SolverConfig::default().with_seed(i);
        let a = solve(&state, &req, &modulation, &cfg);
        let b = solve(&state, &req, &modulation, &cfg);
        assert_eq!(a, b);
        if let Some(alloc) = a.allocation() {
            state.allocate(alloc.clone()).unwrap();
        }
    }
    state.check_invariants().unwrap();
}

#[test]
fn saturated_source_blocks_everything() {
    let net = fixtures::six_node();
    let mut state = net.empty_state();
    for &(_, link) in net.topology.neighbors(0) {
        state.occupy_background(link, 1, net.slots).unwrap();
    }
    let req = Request::permanent(0, 0, 5, 20.0).unwrap();
    for kind in SolverKind::ALL {
        let out = Solver::new(kind).solve(&state, &req, &net.modulation, 1).unwrap();
        assert!(out.allocation().is_none(), "{kind}");
    }
}
