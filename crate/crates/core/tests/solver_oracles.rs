use granapprox_core::connectives::{Isomorphism, ResidualTriplet, TNormKind};
use granapprox_core::relations::{
    metric_relation, triangular_dominance, triangular_similarity, Metric,
};
use granapprox_core::solver::{
    binary_bounds, bruteforce_granular, build_bounds, feasible_solution, solve_binary,
    solve_bruteforce, solve_lp, solve_qp, verify_binary_tightness, verify_constraints,
    verify_tightness, BoundMatrix, DecisionRelation, FeasibleStart, Loss, SolveOptions,
};
use granapprox_core::{FuzzySet, RelationMatrix};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

mod common;
use common::{labels, lattice_rows, table, uniform_rows};

const STEP: f64 = 0.01;

fn luk() -> ResidualTriplet<f64> {
    ResidualTriplet::lukasiewicz()
}

/// Manhattan distance with `a = 1` keeps relation values, and hence bounds, on the 0.05 lattice.
fn lattice_bounds(rng: &mut ChaCha8Rng, n: usize) -> BoundMatrix<f64> {
    let rel = metric_relation(
        &table(lattice_rows(rng, n, 2)),
        Metric::Manhattan(None),
        1.0,
    )
    .unwrap();
    let k = rng.gen_range(2..=3);
    let dec = DecisionRelation::from_class_ids(&labels(rng, n, k));
    build_bounds(&rel, &dec, &luk(), 1e-9).unwrap()
}

fn continuous_bounds(rng: &mut ChaCha8Rng, n: usize) -> BoundMatrix<f64> {
    let gamma = rng.gen_range(1.0..3.0);
    let rel = triangular_similarity(&table(uniform_rows(rng, n, 2)), gamma).unwrap();
    let k = rng.gen_range(2..=3);
    let dec = DecisionRelation::from_class_ids(&labels(rng, n, k));
    build_bounds(&rel, &dec, &luk(), 1e-9).unwrap()
}

#[test]
fn lattice_programs_match_grid_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let opts = SolveOptions::default();
    let (mut lp_gap, mut qp_gap) = (0.0f64, 0.0f64);
    for _ in 0..50 {
        let b = lattice_bounds(&mut rng, 4);
        let lp = solve_lp(&b, &luk(), &opts).unwrap();
        let qp = solve_qp(&b, &luk(), &opts).unwrap();
        let grid_mae = solve_bruteforce(&b, &luk(), &Loss::mae(), STEP, &opts).unwrap();
        let grid_mse = solve_bruteforce(&b, &luk(), &Loss::mse(), STEP, &opts).unwrap();
        // the continuous optimum can only be better than the grid one
        assert!(lp.loss <= grid_mae.loss + 1e-9);
        assert!(qp.loss <= grid_mse.loss + 1e-9);
        lp_gap = lp_gap.max(grid_mae.loss - lp.loss);
        qp_gap = qp_gap.max(grid_mse.loss - qp.loss);
        assert!(qp.diagnostics.kkt.unwrap().max() <= 1e-6);
    }
    assert!(lp_gap <= 0.04, "{lp_gap}");
    assert!(qp_gap <= 0.002, "{qp_gap}");
}

#[test]
fn continuous_gap_is_bounded_by_grid_rounding() {
    // Rounding the continuous optimum down to the grid stays feasible, so the
    // grid optimum exceeds it by at most Σ (1 − α + s) − (1 − α) for the
    // absolute error and Σ (1 − α + s)² − (1 − α)² for the squared error.
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let opts = SolveOptions::default();
    for _ in 0..30 {
        let b = continuous_bounds(&mut rng, 4);
        let lp = solve_lp(&b, &luk(), &opts).unwrap();
        let qp = solve_qp(&b, &luk(), &opts).unwrap();
        let grid_mae = solve_bruteforce(&b, &luk(), &Loss::mae(), STEP, &opts).unwrap();
        let grid_mse = solve_bruteforce(&b, &luk(), &Loss::mse(), STEP, &opts).unwrap();
        let lp_room = 4.0 * STEP;
        let qp_room: f64 = qp
            .beta
            .iter()
            .map(|a| 2.0 * (1.0 - a) * STEP + STEP * STEP)
            .sum();
        let (dl, dq) = (grid_mae.loss - lp.loss, grid_mse.loss - qp.loss);
        assert!((-1e-9..=lp_room + 1e-9).contains(&dl), "{dl}");
        assert!((-1e-9..=qp_room + 1e-9).contains(&dq), "{dq} > {qp_room}");
    }
}

/// Random feasible points: greedy solutions under random orderings and starts,
/// and their convex combinations (the feasible region is convex in `φ` space).
fn feasible_probes(b: &BoundMatrix<f64>, rng: &mut ChaCha8Rng, count: usize) -> Vec<Vec<f64>> {
    let n = b.n();
    let mut out: Vec<Vec<f64>> = Vec::new();
    while out.len() < count {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        let start = FeasibleStart::Value(rng.gen_range(0.0..=1.0));
        let x = feasible_solution(b, &luk(), &order, start)
            .unwrap()
            .into_vec();
        if let Some(prev) = out.last().cloned() {
            let w: f64 = rng.gen();
            out.push(
                x.iter()
                    .zip(&prev)
                    .map(|(a, p)| w * a + (1.0 - w) * p)
                    .collect(),
            );
        }
        out.push(x);
    }
    out
}

#[test]
fn optima_dominate_random_feasible_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let opts = SolveOptions::default();
    for _ in 0..40 {
        let n = rng.gen_range(3..=9);
        let b = continuous_bounds(&mut rng, n);
        let lp = solve_lp(&b, &luk(), &opts).unwrap();
        let qp = solve_qp(&b, &luk(), &opts).unwrap();
        let best: f64 = lp.alpha.iter().sum();
        for y in feasible_probes(&b, &mut rng, 60) {
            assert!(y.iter().sum::<f64>() <= best + 1e-9);
            // first-order condition of the projection of the all-ones vector
            let inner: f64 = qp
                .alpha
                .iter()
                .zip(&y)
                .map(|(a, yi)| (1.0 - a) * (yi - a))
                .sum();
            assert!(inner <= 1e-9, "{inner}");
        }
    }
}

#[test]
fn multi_class_solutions_have_tight_partners() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let opts = SolveOptions::default();
    let sq = ResidualTriplet::with_isomorphism(TNormKind::Lukasiewicz, Isomorphism::square());
    for round in 0..60 {
        let n = rng.gen_range(2..=12);
        let tr = if round % 2 == 0 { luk() } else { sq.clone() };
        let rel = triangular_similarity(&table(uniform_rows(&mut rng, n, 3)), 2.0).unwrap();
        let dec = DecisionRelation::from_class_ids(&labels(&mut rng, n, 3.min(n)));
        let b = build_bounds(&rel, &dec, &tr, 1e-9).unwrap();
        for r in [
            solve_lp(&b, &tr, &opts).unwrap(),
            solve_qp(&b, &tr, &opts).unwrap(),
        ] {
            assert!(verify_constraints(&r.beta, &b, &tr).unwrap().max_violation <= 1e-8);
            let report = verify_tightness(&r.beta, &b, &tr, 1e-7).unwrap();
            assert!(report.certified(), "{:?} {:?}", r.method, report.failures());
        }
    }
}

fn random_relation(rng: &mut ChaCha8Rng, n: usize, dominance: bool) -> RelationMatrix<f64> {
    let t = table(uniform_rows(rng, n, 2));
    if dominance {
        triangular_dominance(&t, 1.5).unwrap()
    } else {
        triangular_similarity(&t, 1.5).unwrap()
    }
}

#[test]
fn binary_solutions_are_certified() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let opts = SolveOptions::default();
    for round in 0..100 {
        let rel = random_relation(&mut rng, 6, round % 2 == 1);
        let dec = DecisionRelation::from_class_ids(&labels(&mut rng, 6, 2));
        let loss = if round % 3 == 0 {
            Loss::mse()
        } else {
            Loss::mae()
        };
        let r = solve_binary(&dec, 0, &rel, &luk(), &loss, &opts).unwrap();
        let members: Vec<bool> = (0..6).map(|u| dec.class_of(u) == 0).collect();
        let est = r.estimate.clone().unwrap();
        let report = verify_binary_tightness(&est, &members, &rel, &luk(), 1e-7).unwrap();
        assert!(report.certified(1e-7), "round {round}: {report:?}");
        assert!(r.diagnostics.tightness.certified());
    }
}

#[test]
fn binary_reduction_matches_representable_grid_search() {
    // Crisp target, lattice relation: the reduced linear program has its
    // vertices on the 0.05 grid, so the general search over representable
    // grid sets must reach the same absolute error.
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let opts = SolveOptions::default();
    for _ in 0..20 {
        let rel = metric_relation(
            &table(lattice_rows(&mut rng, 4, 2)),
            Metric::Manhattan(None),
            1.0,
        )
        .unwrap();
        let dec = DecisionRelation::from_class_ids(&labels(&mut rng, 4, 2));
        let members: Vec<bool> = (0..4).map(|u| dec.class_of(u) == 0).collect();
        let target = FuzzySet::crisp(&members);
        let reduced = solve_binary(&dec, 0, &rel, &luk(), &Loss::mae(), &opts).unwrap();
        let general = bruteforce_granular(&target, &rel, &luk(), &Loss::mae(), 0.05, 1e-9).unwrap();
        assert!(
            (reduced.loss - general.loss).abs() <= 1e-9,
            "{} vs {}",
            reduced.loss,
            general.loss
        );

        let reduced = solve_binary(&dec, 0, &rel, &luk(), &Loss::mse(), &opts).unwrap();
        let general = bruteforce_granular(&target, &rel, &luk(), &Loss::mse(), 0.05, 1e-9).unwrap();
        let room: f64 = reduced
            .beta
            .iter()
            .map(|b| 2.0 * (1.0 - b) * 0.05 + 0.0025)
            .sum();
        let d = general.loss - reduced.loss;
        assert!((-1e-9..=room).contains(&d), "{d}");
    }
}

#[test]
fn binary_bounds_are_symmetric_for_preorders() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let rel = random_relation(&mut rng, 7, true);
    let members = [true, false, true, true, false, false, true];
    let b = binary_bounds(&members, &rel, &luk()).unwrap();
    assert!(b.is_symmetric(0.0));
    for u in 0..7 {
        for v in 0..7 {
            let expected = if members[u] && !members[v] {
                1.0 - rel.get(v, u)
            } else if members[v] && !members[u] {
                1.0 - rel.get(u, v)
            } else {
                1.0
            };
            if u != v {
                assert!((b.get(u, v) - expected).abs() <= 1e-12);
            }
        }
    }
}

fn triplet_for(code: u8) -> ResidualTriplet<f64> {
    match code {
        0 => luk(),
        1 => ResidualTriplet::with_isomorphism(TNormKind::Lukasiewicz, Isomorphism::square()),
        2 => ResidualTriplet::new(TNormKind::NilpotentMinimum),
        3 => ResidualTriplet::new(TNormKind::Product),
        _ => ResidualTriplet::new(TNormKind::Minimum),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn greedy_solutions_are_feasible(
        seed in any::<u64>(),
        n in 1usize..12,
        k in 1usize..4,
        code in 0u8..5,
        start in prop_oneof![Just(None), (0.0f64..=1.0).prop_map(Some)],
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tr = triplet_for(code);
        let rel = random_relation(&mut rng, n, false);
        let dec = DecisionRelation::from_class_ids(&labels(&mut rng, n, k.min(n)));
        let b = build_bounds(&rel, &dec, &tr, 1e-9).unwrap();
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng);
        let start = start.map_or(FeasibleStart::Seeded(seed), FeasibleStart::Value);
        let beta = feasible_solution(&b, &tr, &order, start).unwrap();
        prop_assert_eq!(verify_constraints(&beta, &b, &tr).unwrap().max_violation, 0.0);
    }

    #[test]
    fn lp_never_loses_to_greedy(seed in any::<u64>(), n in 2usize..9) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = continuous_bounds(&mut rng, n);
        let lp = solve_lp(&b, &luk(), &SolveOptions::default()).unwrap();
        let order: Vec<usize> = (0..n).collect();
        let greedy = feasible_solution(&b, &luk(), &order, FeasibleStart::One).unwrap();
        prop_assert!(greedy.iter().sum::<f64>() <= lp.alpha.iter().sum::<f64>() + 1e-9);
    }
}
