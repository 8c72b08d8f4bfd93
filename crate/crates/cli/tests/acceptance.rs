//! Acceptance gate. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any criterion fails.

use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use granapprox_cli::config::RunConfig;
use granapprox_cli::data::read_dataset;
use granapprox_core::connectives::{verify_laws, Isomorphism, Law, ResidualTriplet, TNormKind};
use granapprox_core::granules::{
    adjacency, are_t_disjoint, is_granularly_representable, lower_approximation,
    upper_approximation, FuzzySet, Granule,
};
use granapprox_core::pipeline::{
    export_geometry, run_approximation, sample_geometry, suggest_relabels, ApproximationRun,
    LabeledDataset, PipelineConfig, RelabelStatus, Shape,
};
use granapprox_core::relations::{
    metric_relation, triangular_dominance, triangular_similarity, AttributeTable, Metric,
    RelationMatrix,
};
use granapprox_core::solver::{
    build_bounds, feasible_solution, solve_binary, solve_bruteforce, solve_lp, solve_qp,
    verify_binary_tightness, verify_constraints, verify_tightness, DecisionRelation, FeasibleStart,
    Loss, SolveOptions,
};
use granapprox_core::Tolerances;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const LAW_TOL: f64 = 1e-9;
const LAW_STEP: f64 = 0.05;
const LAW_BUDGET: Duration = Duration::from_secs(5);
const GRANULE_TOL: f64 = 1e-12;
const ROUGH_TOL: f64 = 1e-9;
const ROUGH_BUDGET: Duration = Duration::from_secs(30);
const GRID_STEP: f64 = 0.01;
const LP_GAP: f64 = 0.04;
const QP_GAP: f64 = 0.002;
const KKT_TOL: f64 = 1e-6;
const TIGHT_TOL: f64 = 1e-7;
const IRIS_BUDGET: Duration = Duration::from_secs(60);
const IRIS_VIOLATION: f64 = 1e-8;
const GEOMETRY_ALPHA: f64 = 0.5;
const GEOMETRY_TOL: f64 = 1e-9;
const ELLIPSE_TOL: f64 = 1e-9;

type Outcome = Result<String, String>;
type Criterion = (u8, &'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

fn table(rows: Vec<Vec<f64>>) -> AttributeTable<f64> {
    let names = (0..rows[0].len()).map(|q| format!("x{q}")).collect();
    AttributeTable::new(names, rows).unwrap()
}

fn uniform_rows(rng: &mut ChaCha8Rng, n: usize, d: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| (0..d).map(|_| rng.gen::<f64>()).collect())
        .collect()
}

fn lattice_rows(rng: &mut ChaCha8Rng, n: usize, d: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| {
            (0..d)
                .map(|_| rng.gen_range(0..=20) as f64 / 20.0)
                .collect()
        })
        .collect()
}

/// Class ids covering `k` classes, each at least once.
fn class_ids(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Vec<usize> {
    (0..n)
        .map(|i| if i < k { i } else { rng.gen_range(0..k) })
        .collect()
}

fn t_luk(x: f64, y: f64) -> f64 {
    (x + y - 1.0).max(0.0)
}

fn i_luk(x: f64, y: f64) -> f64 {
    (1.0 - x + y).min(1.0)
}

fn luk() -> ResidualTriplet<f64> {
    ResidualTriplet::lukasiewicz()
}

fn imtl_triplets() -> Vec<ResidualTriplet<f64>> {
    let mut out = Vec::new();
    for kind in [TNormKind::Lukasiewicz, TNormKind::NilpotentMinimum] {
        for iso in [Isomorphism::identity(), Isomorphism::square()] {
            out.push(ResidualTriplet::with_isomorphism(kind, iso));
        }
    }
    out
}

fn grid(step: f64) -> Vec<f64> {
    let m = (1.0 / step).round() as usize;
    (0..=m).map(|i| i as f64 * step).collect()
}

/// Law violations recomputed from the connectives alone, keyed like the library report.
fn direct_law_violations(tr: &ResidualTriplet<f64>, step: f64) -> Vec<(Law, f64)> {
    let g = grid(step);
    let (t, i, n) = (|x, y| tr.t(x, y), |x, y| tr.i(x, y), |x| tr.n(x));
    let mut v = vec![0.0f64; 12];
    for &x in &g {
        v[9] = v[9].max((n(n(x)) - x).abs());
        for &y in &g {
            let (txy, ixy) = (t(x, y), i(x, y));
            v[0] = v[0].max(txy - x).max(txy - y);
            v[1] = v[1].max(y - ixy);
            v[2] = v[2].max(t(x, ixy) - y);
            v[3] = v[3].max(if x <= y {
                1.0 - ixy
            } else if ixy >= 1.0 {
                1.0
            } else {
                0.0
            });
            v[6] = v[6].max(t(x, n(y)) - n(ixy));
            v[7] = v[7].max((n(txy) - i(x, n(y))).abs());
            v[10] = v[10].max((i(n(x), n(y)) - i(y, x)).abs());
            let m = x.max(y);
            v[11] = v[11]
                .max((m - i(ixy, y)).abs())
                .max((m - i(i(y, x), x)).abs());
            for &z in &g {
                v[4] = v[4].max(t(x, i(y, z)) - i(ixy, z));
                v[5] = v[5].max((i(txy, z) - i(x, i(y, z))).abs());
                // adjunction of T(·, y) and I(y, ·)
                v[8] = v[8].max(t(i(y, z), y) - z).max(x - i(y, t(x, y)));
            }
        }
    }
    let laws = [
        Law::TNormBelowArguments,
        Law::ImplicatorAboveConsequent,
        Law::ModusPonens,
        Law::Ordering,
        Law::TNormOfImplication,
        Law::Exportation,
        Law::NegatedImplication,
        Law::NegatedConjunction,
        Law::Residuation,
        Law::Involution,
        Law::Contraposition,
        Law::MaxDefinability,
    ];
    laws.into_iter().zip(v).collect()
}

fn criterion_1() -> Outcome {
    let tol = Tolerances::default();
    let start = Instant::now();
    let reports: Vec<_> = imtl_triplets()
        .iter()
        .map(|tr| verify_laws(tr, LAW_STEP, &tol).unwrap())
        .collect();
    let elapsed = start.elapsed();
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    for (tr, report) in imtl_triplets().iter().zip(&reports) {
        let direct = direct_law_violations(tr, LAW_STEP);
        for (law, dv) in direct {
            let lv = report
                .get(law)
                .and_then(|c| c.max_violation)
                .ok_or_else(|| {
                    format!(
                        "{} {}: {} not evaluated",
                        tr.kind(),
                        report.isomorphism,
                        law.label()
                    )
                })?;
            if lv <= LAW_TOL && dv <= LAW_TOL {
                worst = worst.max(lv).max(dv);
            } else {
                failures.push(format!(
                    "{} {} {}: library {lv:.3e}, direct {dv:.3e}",
                    tr.kind(),
                    report.isomorphism,
                    law.label()
                ));
            }
        }
    }
    ensure(elapsed < LAW_BUDGET, || {
        format!("runtime {elapsed:?} exceeds {LAW_BUDGET:?}")
    })?;
    ensure(failures.is_empty(), || {
        format!(
            "violations above {LAW_TOL:e}: {}; every other law within {worst:.3e}",
            failures.join("; ")
        )
    })?;
    Ok(format!(
        "max violation {worst:.3e} <= {LAW_TOL:e}, runtime {elapsed:.2?} < {LAW_BUDGET:?}"
    ))
}

fn criterion_2() -> Outcome {
    // u = 0.4 and v = 0.6 on a unit range, so R(u, v) = 1 − 3 · 0.2 = 0.4.
    let t = table(vec![vec![0.0], vec![0.4], vec![0.6], vec![1.0]]);
    let rel = triangular_similarity(&t, 3.0).unwrap();
    let tr = luk();
    let r = rel.get(2, 1);
    ensure((r - 0.4).abs() <= GRANULE_TOL, || format!("R(v, u) = {r}"))?;
    let mut parts = Vec::new();
    for (l1, l2, disjoint, margin, adjacent) in [
        (0.95, 0.75, false, -0.1, false),
        (0.85, 0.65, true, 0.1, false),
        (0.9, 0.7, true, 0.0, true),
    ] {
        let p = Granule::plus(1, l1, &rel, &tr).unwrap();
        let m = Granule::minus(2, l2, &rel, &tr).unwrap();
        let d = are_t_disjoint(&p, &m, GRANULE_TOL).unwrap();
        let adj = adjacency(&p, &m, GRANULE_TOL).unwrap();
        let direct_margin = (1.0 - r) - t_luk(l1, l2);
        let direct_adj = (l1 - i_luk(l2, 1.0 - r)).abs() <= GRANULE_TOL
            && (l2 - i_luk(l1, 1.0 - r)).abs() <= GRANULE_TOL;
        ensure(d.disjoint == disjoint, || {
            format!("({l1}, {l2}) disjoint = {}", d.disjoint)
        })?;
        ensure((d.margin - margin).abs() <= GRANULE_TOL, || {
            format!("({l1}, {l2}) margin {} != {margin}", d.margin)
        })?;
        ensure((direct_margin - margin).abs() <= GRANULE_TOL, || {
            format!("({l1}, {l2}) direct margin {direct_margin} != {margin}")
        })?;
        ensure(
            adj.symmetric() == adjacent && direct_adj == adjacent,
            || format!("({l1}, {l2}) adjacency {adj:?}, direct {direct_adj}"),
        )?;
        ensure(
            adjacent || (!adj.minus_to_plus && !adj.plus_to_minus),
            || format!("({l1}, {l2}) one-sided adjacency {adj:?}"),
        )?;
        parts.push(format!("({l1},{l2}) margin {margin:+.1}"));
    }
    Ok(format!(
        "{} within {GRANULE_TOL:e}; (0.9,0.7) adjacent both ways",
        parts.join(", ")
    ))
}

fn leq(a: &FuzzySet<f64>, b: &FuzzySet<f64>) -> bool {
    a.iter().zip(b.iter()).all(|(x, y)| x <= y + ROUGH_TOL)
}

fn granule_union(rel: &RelationMatrix<f64>, lambdas: &[f64]) -> FuzzySet<f64> {
    let n = rel.n();
    FuzzySet::new(
        (0..n)
            .map(|v| {
                (0..n)
                    .map(|c| t_luk(rel.get(v, c), lambdas[c]))
                    .fold(0.0, f64::max)
            })
            .collect(),
    )
    .unwrap()
}

fn criterion_3() -> Outcome {
    const SETS: usize = 200;
    const PROBES: usize = 200;
    const N: usize = 20;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let tr = luk();
    let start = Instant::now();
    for s in 0..SETS {
        let gamma = rng.gen_range(0.5..3.0);
        let rel = triangular_similarity(&table(uniform_rows(&mut rng, N, 2)), gamma).unwrap();
        let a = FuzzySet::new((0..N).map(|_| rng.gen::<f64>()).collect()).unwrap();
        let lo = lower_approximation(&a, &rel, &tr).unwrap();
        let up = upper_approximation(&a, &rel, &tr).unwrap();
        for (name, set) in [("lower", &lo), ("upper", &up)] {
            let rep = is_granularly_representable(set, &rel, &tr, ROUGH_TOL).unwrap();
            ensure(rep.representable, || {
                format!("set {s}: {name} approximation not GR")
            })?;
        }
        ensure(leq(&lo, &a) && leq(&a, &up), || {
            format!("set {s}: sandwich broken")
        })?;
        let co_up = upper_approximation(&a.complement(&tr), &rel, &tr).unwrap();
        let dual = lo.complement(&tr).max_abs_diff(&co_up);
        ensure(dual <= ROUGH_TOL, || {
            format!("set {s}: duality off by {dual:e}")
        })?;
        for p in 0..PROBES {
            if p % 2 == 0 {
                // granule parameters capped so that each granule stays inside A
                let inner: Vec<f64> = (0..N)
                    .map(|c| {
                        let cap = (0..N)
                            .map(|v| i_luk(rel.get(v, c), a.get(v)))
                            .fold(1.0, f64::min);
                        cap * rng.gen::<f64>().sqrt()
                    })
                    .collect();
                let below = granule_union(&rel, &inner);
                ensure(leq(&below, &a), || {
                    format!("set {s}: probe {p} not below A")
                })?;
                ensure(leq(&below, &lo), || {
                    format!("set {s}: GR probe {p} exceeds lower")
                })?;
            } else {
                let outer: Vec<f64> = (0..N)
                    .map(|c| a.get(c) + (1.0 - a.get(c)) * rng.gen::<f64>())
                    .collect();
                let above = granule_union(&rel, &outer);
                ensure(leq(&a, &above), || {
                    format!("set {s}: probe {p} not above A")
                })?;
                ensure(leq(&up, &above), || {
                    format!("set {s}: GR probe {p} below upper")
                })?;
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < ROUGH_BUDGET, || {
        format!("runtime {elapsed:?} exceeds {ROUGH_BUDGET:?}")
    })?;
    Ok(format!(
        "{SETS} sets x {PROBES} probes within {ROUGH_TOL:e}, runtime {elapsed:.2?} < {ROUGH_BUDGET:?}"
    ))
}

fn criterion_4() -> Outcome {
    // Manhattan distance with a = 1 on the 0.05 lattice keeps every bound on
    // the lattice, so the grid search can reach the continuous optimum.
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let opts = SolveOptions::default();
    let tr = luk();
    let (mut lp_gap, mut qp_gap, mut kkt) = (0.0f64, 0.0f64, 0.0f64);
    for round in 0..50 {
        let rel = metric_relation(
            &table(lattice_rows(&mut rng, 4, 2)),
            Metric::Manhattan(None),
            1.0,
        )
        .unwrap();
        let k = rng.gen_range(2..=3);
        let dec = DecisionRelation::from_class_ids(&class_ids(&mut rng, 4, k));
        let b = build_bounds(&rel, &dec, &tr, 1e-9).unwrap();
        let lp = solve_lp(&b, &tr, &opts).unwrap();
        let qp = solve_qp(&b, &tr, &opts).unwrap();
        let grid_mae = solve_bruteforce(&b, &tr, &Loss::mae(), GRID_STEP, &opts).unwrap();
        let grid_mse = solve_bruteforce(&b, &tr, &Loss::mse(), GRID_STEP, &opts).unwrap();
        let (dl, dq) = (
            (lp.loss - grid_mae.loss).abs(),
            (qp.loss - grid_mse.loss).abs(),
        );
        ensure(dl <= LP_GAP, || {
            format!("dataset {round}: lp {} vs grid {}", lp.loss, grid_mae.loss)
        })?;
        ensure(dq <= QP_GAP, || {
            format!("dataset {round}: qp {} vs grid {}", qp.loss, grid_mse.loss)
        })?;
        let r = qp
            .diagnostics
            .kkt
            .as_ref()
            .map(|k| k.max())
            .ok_or("qp without kkt residual")?;
        ensure(r <= KKT_TOL, || {
            format!("dataset {round}: kkt residual {r:e}")
        })?;
        lp_gap = lp_gap.max(dl);
        qp_gap = qp_gap.max(dq);
        kkt = kkt.max(r);
    }
    Ok(format!(
        "lp gap {lp_gap:.2e} <= {LP_GAP}, qp gap {qp_gap:.2e} <= {QP_GAP}, kkt {kkt:.2e} <= {KKT_TOL:e}"
    ))
}

fn random_triplet(rng: &mut ChaCha8Rng) -> ResidualTriplet<f64> {
    match rng.gen_range(0..5) {
        0 => luk(),
        1 => ResidualTriplet::with_isomorphism(TNormKind::Lukasiewicz, Isomorphism::square()),
        2 => ResidualTriplet::new(TNormKind::NilpotentMinimum),
        3 => ResidualTriplet::new(TNormKind::Product),
        _ => ResidualTriplet::new(TNormKind::Minimum),
    }
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for run in 0..1000 {
        let n = rng.gen_range(1..=15);
        let k = rng.gen_range(1..=4).min(n);
        let tr = random_triplet(&mut rng);
        let gamma = rng.gen_range(0.5..4.0);
        let d = rng.gen_range(1..=3);
        let t = table(uniform_rows(&mut rng, n, d));
        let rel = if rng.gen_bool(0.5) {
            triangular_similarity(&t, gamma).unwrap()
        } else {
            triangular_dominance(&t, gamma).unwrap()
        };
        let dec = DecisionRelation::from_class_ids(&class_ids(&mut rng, n, k));
        let b = build_bounds(&rel, &dec, &tr, 1e-9).unwrap();
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng);
        let seed = rng.gen::<u64>();
        let beta = feasible_solution(&b, &tr, &order, FeasibleStart::Seeded(seed)).unwrap();
        let v = verify_constraints(&beta, &b, &tr).unwrap().max_violation;
        ensure(v <= 0.0, || {
            format!("run {run} ({}): violation {v:e}", tr.kind())
        })?;
    }
    Ok("1000 runs, max violation 0 <= 0".into())
}

/// Independent tight-partner check for the identity Łukasiewicz triplet:
/// some other-class `v` has `α_u + α_v = 2 − R(u, v)`.
fn direct_tight_partners(
    beta: &FuzzySet<f64>,
    rel: &RelationMatrix<f64>,
    classes: &[usize],
) -> bool {
    let n = beta.len();
    (0..n).all(|u| {
        beta.get(u) >= 1.0 - TIGHT_TOL
            || (0..n).any(|v| {
                classes[u] != classes[v]
                    && (beta.get(u) + beta.get(v) - (2.0 - rel.get(u, v))).abs() <= TIGHT_TOL
            })
    })
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let opts = SolveOptions::default();
    let tr = luk();
    for round in 0..100 {
        let t = table(uniform_rows(&mut rng, 6, 2));
        let rel = if round % 2 == 0 {
            triangular_similarity(&t, 1.5).unwrap()
        } else {
            triangular_dominance(&t, 1.5).unwrap()
        };
        let dec = DecisionRelation::from_class_ids(&class_ids(&mut rng, 6, 2));
        let loss = if round % 3 == 0 {
            Loss::mse()
        } else {
            Loss::mae()
        };
        let r = solve_binary(&dec, 0, &rel, &tr, &loss, &opts).unwrap();
        let members: Vec<bool> = (0..6).map(|u| dec.class_of(u) == 0).collect();
        let est = r.estimate.clone().ok_or("binary solve without estimate")?;
        let report = verify_binary_tightness(&est, &members, &rel, &tr, TIGHT_TOL).unwrap();
        ensure(report.certified(TIGHT_TOL), || {
            format!("binary round {round}: {report:?}")
        })?;
    }
    let mut checked = 0;
    for round in 0..100 {
        let n = rng.gen_range(2..=12);
        let ids = class_ids(&mut rng, n, 3.min(n));
        let rel = triangular_similarity(&table(uniform_rows(&mut rng, n, 2)), 2.0).unwrap();
        let b = build_bounds(&rel, &DecisionRelation::from_class_ids(&ids), &tr, 1e-9).unwrap();
        for r in [
            solve_lp(&b, &tr, &opts).unwrap(),
            solve_qp(&b, &tr, &opts).unwrap(),
        ] {
            let report = verify_tightness(&r.beta, &b, &tr, TIGHT_TOL).unwrap();
            ensure(report.certified(), || {
                format!(
                    "multi-class round {round} {:?}: no tight partner for {:?}",
                    r.method,
                    report.failures()
                )
            })?;
            ensure(direct_tight_partners(&r.beta, &rel, &ids), || {
                format!(
                    "multi-class round {round} {:?}: direct tight-partner check failed",
                    r.method
                )
            })?;
            checked += 1;
        }
    }
    Ok(format!(
        "100 binary runs certified, {checked} multi-class solutions tight within {TIGHT_TOL:e}"
    ))
}

fn iris(config: &str) -> (LabeledDataset<f64>, PipelineConfig<f64>) {
    let cfg = RunConfig::load(&data(config)).unwrap();
    let ds = read_dataset(&data("iris.csv"), &cfg).unwrap();
    let pipeline = cfg.pipeline(ds.table().n_attributes()).unwrap();
    (ds, pipeline)
}

fn criterion_7() -> Outcome {
    let (ds, cfg) = iris("iris_similarity_qp.json");
    ensure(
        ds.n() == 150 && ds.table().n_attributes() == 2 && ds.classes().len() == 3,
        || {
            format!(
                "iris shape {} x {} with {} classes",
                ds.n(),
                ds.table().n_attributes(),
                ds.classes().len()
            )
        },
    )?;
    let start = Instant::now();
    let run: ApproximationRun<f64> = run_approximation(&ds, &cfg).unwrap();
    let relabels = suggest_relabels(
        &ds,
        &run.relation,
        &run.result,
        &cfg.triplet,
        cfg.relabel_threshold,
        TIGHT_TOL,
    )
    .unwrap();
    let elapsed = start.elapsed();
    let v = verify_constraints(&run.result.beta, &run.bounds, &cfg.triplet)
        .unwrap()
        .max_violation;
    let tight = verify_tightness(&run.result.beta, &run.bounds, &cfg.triplet, TIGHT_TOL).unwrap();
    let moved = relabels
        .iter()
        .filter(|r| r.status == RelabelStatus::Relabel)
        .count();
    ensure(elapsed < IRIS_BUDGET, || format!("runtime {elapsed:?}"))?;
    ensure(v <= IRIS_VIOLATION, || format!("violation {v:e}"))?;
    ensure(tight.certified(), || {
        format!("not tight: {:?}", tight.failures())
    })?;
    ensure(moved > 0, || "empty relabel list".into())?;
    Ok(format!(
        "runtime {elapsed:.2?} < {IRIS_BUDGET:?}, violation {v:.2e} <= {IRIS_VIOLATION:e}, tight, {moved} relabels"
    ))
}

fn criterion_8() -> Outcome {
    let (ds, cfg) = iris("iris_similarity_qp.json");
    let run = run_approximation(&ds, &cfg).unwrap();
    let geo = export_geometry(&ds, &run.kernel, &run.result.beta, &cfg).unwrap();
    ensure(cfg.alpha_level == GEOMETRY_ALPHA, || {
        format!("alpha level {}", cfg.alpha_level)
    })?;
    let mut sampled = 0;
    for (u, g) in geo.iter().enumerate() {
        ensure(
            g.drawable() == (run.result.beta.get(u) > GEOMETRY_ALPHA),
            || {
                format!(
                    "{}: drawable flag disagrees with beta {}",
                    g.id,
                    run.result.beta.get(u)
                )
            },
        )?;
        if let Some(s) = sample_geometry(
            g,
            &run.kernel,
            &cfg.triplet,
            ds.table().ranges(),
            200,
            u as u64,
        ) {
            ensure(s.passes(GEOMETRY_ALPHA, GEOMETRY_TOL), || {
                format!("{}: {s:?}", g.id)
            })?;
            sampled += 1;
        }
    }
    ensure(sampled > 0, || "no drawable granule".into())?;

    // Σ has eigenvalue 1 along (1, 1) and 4 along (1, −1)
    let (ds, cfg) = iris("iris_mahalanobis_qp.json");
    let run = run_approximation(&ds, &cfg).unwrap();
    let geo = export_geometry(&ds, &run.kernel, &run.result.beta, &cfg).unwrap();
    let mut ellipses = 0;
    for g in &geo {
        let Some(shape) = &g.shape else { continue };
        let Shape::Ellipsoid {
            semi_axes,
            rotation_deg,
            ..
        } = shape
        else {
            return Err(format!("{}: {} record", g.id, g.tag));
        };
        let ratio = semi_axes[0] / semi_axes[1];
        let rot = rotation_deg.ok_or_else(|| format!("{}: no rotation", g.id))?;
        ensure(g.tag == "ellipse", || format!("{}: tag {}", g.id, g.tag))?;
        ensure((ratio - 2.0).abs() <= ELLIPSE_TOL, || {
            format!("{}: axis ratio {ratio}", g.id)
        })?;
        ensure((rot - 45.0).abs() <= ELLIPSE_TOL, || {
            format!("{}: rotation {rot}", g.id)
        })?;
        ellipses += 1;
    }
    ensure(ellipses > 0, || "no drawable ellipse".into())?;
    Ok(format!(
        "{sampled} sampled granules within {GEOMETRY_TOL:e} at alpha {GEOMETRY_ALPHA}; \
         {ellipses} ellipses with ratio 2:1 and rotation 45 deg within {ELLIPSE_TOL:e}"
    ))
}

fn criterion_9() -> Outcome {
    let cases = [
        ("iris.csv", "iris_similarity_qp.json"),
        ("iris.csv", "iris_similarity_lp.json"),
        ("iris.csv", "iris_mahalanobis_qp.json"),
        ("iris.csv", "iris_dominance_lp.json"),
        ("iris.csv", "iris_euclidean_square.json"),
        ("toy.csv", "toy_similarity_mae.json"),
    ];
    let bin = env!("CARGO_BIN_EXE_granapprox");
    let root = tempfile::TempDir::new().unwrap();
    for (i, (dataset, config)) in cases.iter().enumerate() {
        let (dataset, config) = (data(dataset), data(config));
        let mut outs = Vec::new();
        for rep in 0..2 {
            let out = root.path().join(format!("{i}-{rep}"));
            let status = Command::new(bin)
                .arg("solve")
                .arg("--dataset")
                .arg(&dataset)
                .arg("--config")
                .arg(&config)
                .arg("--out")
                .arg(&out)
                .output()
                .unwrap()
                .status;
            ensure(status.success(), || {
                format!("{}: solve exited {status}", config.display())
            })?;
            outs.push(out);
        }
        for file in ["result.csv", "relabels.csv", "summary.json"] {
            let a = std::fs::read(outs[0].join(file)).unwrap();
            let b = std::fs::read(outs[1].join(file)).unwrap();
            ensure(a == b, || {
                format!("{}: {file} differs between runs", config.display())
            })?;
        }
        let status = Command::new(bin)
            .arg("verify")
            .arg("--result")
            .arg(outs[0].join("result.csv"))
            .arg("--dataset")
            .arg(&dataset)
            .arg("--config")
            .arg(&config)
            .output()
            .unwrap()
            .status;
        ensure(status.code() == Some(0), || {
            format!("{}: verify exited {status}", config.display())
        })?;
    }
    Ok(format!(
        "{} configurations byte-identical across two solves, verify exit 0",
        cases.len()
    ))
}

fn main() {
    let criteria: [Criterion; 9] = [
        (1, "connective law suite", criterion_1),
        (2, "two-point granules", criterion_2),
        (3, "rough approximation laws", criterion_3),
        (4, "oracle equivalence", criterion_4),
        (5, "greedy feasibility", criterion_5),
        (6, "tightness", criterion_6),
        (7, "iris run", criterion_7),
        (8, "geometry fidelity", criterion_8),
        (9, "cli determinism", criterion_9),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (id, name, f) in criteria {
        let outcome = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("criterion {id} ({name}): PASS: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("criterion {id} ({name}): FAIL: {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
