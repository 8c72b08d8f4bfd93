#![allow(dead_code)]

use granapprox_core::relations::{triangular_similarity, AttributeTable};
use granapprox_core::{FuzzySet, RelationMatrix};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Łukasiewicz connectives written out directly, used as an independent route.
pub fn t_luk(x: f64, y: f64) -> f64 {
    (x + y - 1.0).max(0.0)
}

pub fn i_luk(x: f64, y: f64) -> f64 {
    (1.0 - x + y).min(1.0)
}

pub fn table(rows: Vec<Vec<f64>>) -> AttributeTable<f64> {
    let names = (0..rows[0].len()).map(|q| format!("x{q}")).collect();
    AttributeTable::new(names, rows).unwrap()
}

/// Attribute values on the 0.05 lattice.
pub fn lattice_rows(rng: &mut ChaCha8Rng, n: usize, d: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| {
            (0..d)
                .map(|_| rng.gen_range(0..=20) as f64 / 20.0)
                .collect()
        })
        .collect()
}

pub fn uniform_rows(rng: &mut ChaCha8Rng, n: usize, d: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| (0..d).map(|_| rng.gen::<f64>()).collect())
        .collect()
}

/// Class ids covering `k` classes, each at least once.
pub fn labels(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Vec<usize> {
    (0..n)
        .map(|i| if i < k { i } else { rng.gen_range(0..k) })
        .collect()
}

pub fn random_similarity(rng: &mut ChaCha8Rng, n: usize) -> RelationMatrix<f64> {
    let rows = uniform_rows(rng, n, 2);
    let gamma = rng.gen_range(0.5..3.0);
    triangular_similarity(&table(rows), gamma).unwrap()
}

pub fn random_set(rng: &mut ChaCha8Rng, n: usize) -> FuzzySet<f64> {
    FuzzySet::new((0..n).map(|_| rng.gen::<f64>()).collect()).unwrap()
}
