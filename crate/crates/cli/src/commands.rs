use std::path::Path;
use std::time::Instant;

use granapprox_core::connectives::{verify_laws, Isomorphism, ResidualTriplet, TNormKind};
use granapprox_core::pipeline::{
    export_geometry, run_approximation, sample_geometry, suggest_relabels, GranuleGeometry,
    LabeledDataset, PipelineConfig, RelabelStatus, Shape,
};
use granapprox_core::solver::{build_bounds, verify_constraints, verify_tightness, PartitionTag};
use granapprox_core::{FuzzySet, Tolerances};
use log::info;
use serde_json::{json, Map, Value};

use crate::config::RunConfig;
use crate::data::{read_dataset, read_result_beta, write_relabels, write_result, write_text};
use crate::error::{CliError, CliResult};

/// Overrides applied on top of the config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub threshold: Option<f64>,
    pub alpha_level: Option<f64>,
}

struct Loaded {
    cfg: RunConfig,
    dataset: LabeledDataset<f64>,
    pipeline: PipelineConfig<f64>,
}

fn load(dataset: &Path, config: &Path, over: &Overrides) -> CliResult<Loaded> {
    let mut cfg = RunConfig::load(config)?;
    if let Some(s) = over.seed {
        cfg.seed = s;
    }
    if let Some(t) = over.threshold {
        cfg.relabel_threshold = t;
    }
    if let Some(a) = over.alpha_level {
        cfg.alpha_level = a;
    }
    // validate the config before touching the data
    let _ = cfg.triplet()?;
    let dataset = read_dataset(dataset, &cfg)?;
    let pipeline = cfg.pipeline(dataset.table().n_attributes())?;
    Ok(Loaded {
        cfg,
        dataset,
        pipeline,
    })
}

/// Solves the multi-class problem and writes `result.csv`, `relabels.csv` and `summary.json` into `out`.
pub fn solve(
    dataset: &Path,
    config: &Path,
    out: &Path,
    over: &Overrides,
    with_runtime: bool,
) -> CliResult<Value> {
    let Loaded {
        cfg,
        dataset,
        pipeline,
    } = load(dataset, config, over)?;
    let start = Instant::now();
    let run = run_approximation(&dataset, &pipeline)?;
    let relabels = suggest_relabels(
        &dataset,
        &run.relation,
        &run.result,
        &pipeline.triplet,
        pipeline.relabel_threshold,
        pipeline.options.tolerances.feas,
    )?;
    let elapsed = start.elapsed().as_secs_f64();

    std::fs::create_dir_all(out).map_err(|e| CliError::input(out.display(), e))?;
    write_result(&out.join("result.csv"), &dataset, &run.result)?;
    write_relabels(&out.join("relabels.csv"), &relabels)?;

    let r = &run.result;
    let count = |tag: PartitionTag| r.partition.iter().filter(|&&t| t == tag).count();
    let status = |s: RelabelStatus| relabels.iter().filter(|x| x.status == s).count();
    let mut summary = json!({
        "instances": dataset.n(),
        "attributes": dataset.table().names(),
        "classes": dataset.classes(),
        "relation": serde_json::to_value(&cfg.relation).expect("serializable"),
        "triplet": cfg.triplet.kind,
        "isomorphism": cfg.triplet.isomorphism,
        "loss": serde_json::to_value(cfg.loss).expect("serializable"),
        "method": r.method.name(),
        "objective": r.objective,
        "loss_value": r.loss,
        "max_violation": r.diagnostics.max_violation(),
        "kkt_residual": r.diagnostics.kkt.map(|k| k.max()),
        "iterations": r.diagnostics.iterations,
        "tightness_certified": r.diagnostics.tightness.certified(),
        "tight": count(PartitionTag::Tight),
        "slack": count(PartitionTag::Slack),
        "relabel_threshold": pipeline.relabel_threshold,
        "relabels": status(RelabelStatus::Relabel),
        "ambiguous": status(RelabelStatus::Ambiguous),
        "seed": cfg.seed,
    });
    if with_runtime {
        summary["runtime_seconds"] = json!(elapsed);
    }
    let text = serde_json::to_string_pretty(&summary).expect("serializable") + "\n";
    write_text(&out.join("summary.json"), &text)?;
    info!("solved {} instances in {elapsed:.3}s", dataset.n());
    Ok(summary)
}

/// Outcome of [`verify`]: one line per check.
#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub lines: Vec<String>,
    pub passed: bool,
}

/// Re-checks feasibility and tightness of a stored result.
pub fn verify(result: &Path, dataset: &Path, config: &Path) -> CliResult<VerifyReport> {
    let Loaded {
        dataset, pipeline, ..
    } = load(dataset, config, &Overrides::default())?;
    let beta = FuzzySet::new(read_result_beta(result, &dataset)?)?;
    let tol = pipeline.options.tolerances;
    let kernel = pipeline.relation.kernel(dataset.table())?;
    let relation = kernel.matrix(dataset.table())?;
    let bounds = build_bounds(&relation, dataset.decision(), &pipeline.triplet, tol.rel)?;
    let ids = dataset.ids();
    let mut lines = Vec::new();

    let c = verify_constraints(&beta, &bounds, &pipeline.triplet)?;
    let feasible = c.feasible(tol.feas);
    lines.push(format!(
        "feasibility: max violation {:.3e} (tolerance {:.1e}){} {}",
        c.max_violation,
        tol.feas,
        c.worst_pair
            .map(|(u, v)| format!(" at pair ({}, {})", ids[u], ids[v]))
            .unwrap_or_default(),
        if feasible { "PASS" } else { "FAIL" }
    ));

    let t = verify_tightness(&beta, &bounds, &pipeline.triplet, tol.feas)?;
    let failures = t.failures();
    let required = t.entries.iter().filter(|e| e.required).count();
    lines.push(format!(
        "tightness: {required} instances below 1, worst partner gap {:.3e} (tolerance {:.1e}){} {}",
        t.max_required_gap(),
        tol.feas,
        if failures.is_empty() {
            String::new()
        } else {
            let names: Vec<&str> = failures.iter().take(5).map(|&u| ids[u].as_str()).collect();
            format!(", not tight: {}", names.join(", "))
        },
        if failures.is_empty() { "PASS" } else { "FAIL" }
    ));
    Ok(VerifyReport {
        lines,
        passed: feasible && failures.is_empty(),
    })
}

fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

/// One JSON object per granule; see the README for the field list.
pub fn geometry_record(g: &GranuleGeometry<f64>, names: &[String]) -> Value {
    let mut m = Map::new();
    m.insert("id".into(), json!(g.id));
    m.insert("class".into(), json!(g.class));
    m.insert("beta".into(), json!(g.beta));
    m.insert("alpha_level".into(), json!(g.alpha_level));
    m.insert("relation_level".into(), json!(g.relation_level));
    m.insert("drawable".into(), json!(g.drawable()));
    m.insert("shape".into(), json!(g.tag));
    for (name, &c) in names.iter().zip(&g.center) {
        m.insert(format!("center_{name}"), json!(c));
    }
    match &g.shape {
        None => {}
        Some(Shape::Box { half_widths }) => {
            for (name, &h) in names.iter().zip(half_widths) {
                m.insert(format!("half_width_{name}"), num(h));
            }
        }
        Some(Shape::Orthant { offsets }) => {
            for (name, &o) in names.iter().zip(offsets) {
                m.insert(format!("offset_{name}"), num(o));
            }
        }
        Some(Shape::Ball { radius }) => {
            m.insert("radius".into(), json!(radius));
        }
        Some(Shape::Ellipsoid {
            semi_axes,
            axes,
            rotation_deg,
        }) => {
            if let (2, Some(rot)) = (semi_axes.len(), rotation_deg) {
                m.insert("semi_axis_major".into(), json!(semi_axes[0]));
                m.insert("semi_axis_minor".into(), json!(semi_axes[1]));
                m.insert("rotation_deg".into(), json!(rot));
            } else {
                m.insert("semi_axes".into(), json!(semi_axes));
                m.insert("axes".into(), json!(axes));
            }
        }
    }
    Value::Object(m)
}

#[derive(Debug, Clone)]
pub struct GeometryOutcome {
    pub records: usize,
    pub drawable: usize,
    /// Ids failing the sampled membership check, when requested.
    pub check_failures: Option<Vec<String>>,
}

/// Writes the level-set records of a stored result to `out` (JSON lines).
pub fn geometry(
    result: &Path,
    dataset: &Path,
    config: &Path,
    out: &Path,
    over: &Overrides,
    check: bool,
) -> CliResult<GeometryOutcome> {
    let Loaded {
        cfg,
        dataset,
        pipeline,
    } = load(dataset, config, over)?;
    let beta = FuzzySet::new(read_result_beta(result, &dataset)?)?;
    let kernel = pipeline.relation.kernel(dataset.table())?;
    let records = export_geometry(&dataset, &kernel, &beta, &pipeline)?;
    let names = dataset.table().names();
    let mut text = String::new();
    for g in &records {
        text += &serde_json::to_string(&geometry_record(g, names)).expect("serializable");
        text.push('\n');
    }
    if let Some(dir) = out.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::input(dir.display(), e))?;
    }
    write_text(out, &text)?;

    let check_failures = check.then(|| {
        records
            .iter()
            .filter_map(|g| {
                let s = sample_geometry(
                    g,
                    &kernel,
                    &pipeline.triplet,
                    dataset.table().ranges(),
                    100,
                    cfg.seed.wrapping_add(g.index as u64),
                )?;
                (!s.passes(g.alpha_level, pipeline.options.tolerances.rel)).then(|| g.id.clone())
            })
            .collect()
    });
    Ok(GeometryOutcome {
        records: records.len(),
        drawable: records.iter().filter(|g| g.drawable()).count(),
        check_failures,
    })
}

/// One evaluated triplet of the law suite.
#[derive(Debug, Clone)]
pub struct LawLine {
    pub kind: TNormKind,
    pub isomorphism: String,
    pub law: &'static str,
    pub max_violation: Option<f64>,
    pub passed: bool,
}

/// Runs the law grid for the given kinds and isomorphisms.
pub fn laws(
    kinds: &[TNormKind],
    isomorphisms: &[String],
    step: f64,
    tolerances: &Tolerances<f64>,
) -> CliResult<Vec<LawLine>> {
    let mut out = Vec::new();
    for &kind in kinds {
        for iso in isomorphisms {
            let tr = ResidualTriplet::with_isomorphism(kind, Isomorphism::from_name(iso)?);
            let report = verify_laws(&tr, step, tolerances)?;
            for c in &report.checks {
                out.push(LawLine {
                    kind,
                    isomorphism: report.isomorphism.clone(),
                    law: c.law.label(),
                    max_violation: c.max_violation,
                    passed: c.passed(tolerances.law),
                });
            }
        }
    }
    Ok(out)
}
