//! CSV input and output.

use std::collections::HashMap;
use std::io::Write;
use std::path::Path;

use granapprox_core::pipeline::{LabeledDataset, Relabel};
use granapprox_core::relations::AttributeTable;
use granapprox_core::solver::ApproximationResult;

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};

/// Fixed scientific notation with 17 significant digits; round-trips every `f64`.
pub fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

fn parse_num(s: &str, ctx: impl FnOnce() -> String) -> CliResult<f64> {
    match s.trim().parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(CliError::Input(format!(
            "{}: `{s}` is not a finite number",
            ctx()
        ))),
    }
}

pub fn read_dataset(path: &Path, cfg: &RunConfig) -> CliResult<LabeledDataset<f64>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::input(path.display(), e))?;
    let headers = reader
        .headers()
        .map_err(|e| CliError::input(path.display(), e))?
        .clone();
    let column = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| CliError::Input(format!("{}: no column `{name}`", path.display())))
    };
    let label_col = column(&cfg.label_column)?;
    let id_col = cfg.id_column.as_deref().map(column).transpose()?;
    let (attr_names, attr_cols): (Vec<String>, Vec<usize>) = match &cfg.attributes {
        Some(names) => names
            .iter()
            .map(|n| column(n).map(|c| (n.clone(), c)))
            .collect::<CliResult<Vec<_>>>()?
            .into_iter()
            .unzip(),
        None => headers
            .iter()
            .enumerate()
            .filter(|&(c, _)| c != label_col && Some(c) != id_col)
            .map(|(c, h)| (h.to_owned(), c))
            .unzip(),
    };
    if attr_cols.is_empty() {
        return Err(CliError::Input(format!(
            "{}: no attribute columns",
            path.display()
        )));
    }

    let (mut ids, mut labels, mut rows) = (Vec::new(), Vec::new(), Vec::new());
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::input(path.display(), e))?;
        let at = |c: usize| record.get(c).unwrap_or("");
        ids.push(id_col.map_or_else(|| (line + 1).to_string(), |c| at(c).to_owned()));
        labels.push(at(label_col).to_owned());
        let row = attr_cols
            .iter()
            .zip(&attr_names)
            .map(|(&c, name)| {
                parse_num(at(c), || {
                    format!("{} row {} column `{name}`", path.display(), line + 2)
                })
            })
            .collect::<CliResult<Vec<f64>>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(CliError::Input(format!(
            "{}: empty dataset",
            path.display()
        )));
    }
    let table = AttributeTable::new(attr_names, rows)?;
    Ok(LabeledDataset::new(ids, table, labels)?)
}

pub const RESULT_HEADER: [&str; 6] = ["id", "label", "beta", "alpha", "partition", "tight_partner"];

pub fn write_result(
    path: &Path,
    dataset: &LabeledDataset<f64>,
    result: &ApproximationResult<f64>,
) -> CliResult<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| CliError::input(path.display(), e))?;
    let io = |e: csv::Error| CliError::input(path.display(), e);
    w.write_record(RESULT_HEADER).map_err(io)?;
    for u in 0..dataset.n() {
        let partner = result
            .diagnostics
            .tight_partner(u)
            .map(|v| dataset.ids()[v].clone())
            .unwrap_or_default();
        w.write_record([
            dataset.ids()[u].as_str(),
            dataset.labels()[u].as_str(),
            &fmt_num(result.beta.get(u)),
            &fmt_num(result.alpha[u]),
            result.partition[u].as_str(),
            &partner,
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| CliError::input(path.display(), e))
}

/// `β` from a result file, reordered to match `dataset` by id.
pub fn read_result_beta(path: &Path, dataset: &LabeledDataset<f64>) -> CliResult<Vec<f64>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::input(path.display(), e))?;
    let headers = reader
        .headers()
        .map_err(|e| CliError::input(path.display(), e))?
        .clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| CliError::Input(format!("{}: no column `{name}`", path.display())))
    };
    let (id_col, beta_col) = (col("id")?, col("beta")?);
    let mut by_id = HashMap::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::input(path.display(), e))?;
        let id = record.get(id_col).unwrap_or("").to_owned();
        let beta = parse_num(record.get(beta_col).unwrap_or(""), || {
            format!("{} row {}", path.display(), line + 2)
        })?;
        if !(0.0..=1.0).contains(&beta) {
            return Err(CliError::Input(format!(
                "{}: beta {beta} of `{id}` is not a degree",
                path.display()
            )));
        }
        if by_id.insert(id.clone(), beta).is_some() {
            return Err(CliError::Input(format!(
                "{}: duplicate id `{id}`",
                path.display()
            )));
        }
    }
    if by_id.len() != dataset.n() {
        return Err(CliError::Input(format!(
            "{}: {} rows but the dataset has {} instances",
            path.display(),
            by_id.len(),
            dataset.n()
        )));
    }
    dataset
        .ids()
        .iter()
        .map(|id| {
            by_id
                .get(id)
                .copied()
                .ok_or_else(|| CliError::Input(format!("{}: missing id `{id}`", path.display())))
        })
        .collect()
}

pub fn write_relabels(path: &Path, relabels: &[Relabel<f64>]) -> CliResult<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| CliError::input(path.display(), e))?;
    let io = |e: csv::Error| CliError::input(path.display(), e);
    w.write_record(["id", "label", "suggested", "beta", "support", "status"])
        .map_err(io)?;
    for r in relabels {
        w.write_record([
            r.id.as_str(),
            r.from.as_str(),
            r.to.as_deref().unwrap_or(""),
            &fmt_num(r.beta),
            &fmt_num(r.support),
            r.status.as_str(),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| CliError::input(path.display(), e))
}

pub fn write_text(path: &Path, text: &str) -> CliResult<()> {
    let mut f = std::fs::File::create(path).map_err(|e| CliError::input(path.display(), e))?;
    f.write_all(text.as_bytes())
        .map_err(|e| CliError::input(path.display(), e))
}
