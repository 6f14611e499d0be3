use serde::Serialize;

use crate::error::Result;
use crate::family::{Family, FamilySpec};
use crate::presets::ks_specs;
use crate::rng::RandomStream;

/// Kolmogorov-Smirnov distance between the empirical CDF of `samples` and a
/// reference `cdf`. Both one-sided gaps are taken at every sorted sample.
///
/// Panics if `samples` is empty or contains NaN.
pub fn ks_distance<F>(samples: &[f64], cdf: F) -> f64
where
    F: Fn(f64) -> f64,
{
    assert!(!samples.is_empty(), "ks_distance needs at least one sample");
    let mut xs = samples.to_vec();
    xs.sort_by(|a, b| a.partial_cmp(b).expect("NaN sample"));
    ks_distance_sorted(&xs, cdf)
}

/// As [`ks_distance`] for samples already sorted ascending.
pub fn ks_distance_sorted<F>(sorted: &[f64], cdf: F) -> f64
where
    F: Fn(f64) -> f64,
{
    let n = sorted.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        let above = (i + 1) as f64 / n - f;
        let below = f - i as f64 / n;
        d = d.max(above).max(below);
    }
    d
}

/// Asymptotic one-sample critical value `c / sqrt(n)`, with `c = 1.63` at the
/// 1% level.
pub fn ks_critical_1pct(n: usize) -> f64 {
    1.63 / (n as f64).sqrt()
}

/// One construction-equivalence comparison: draws of `g(S)` against the
/// signed-mixture CDF of the same spec.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KsCase {
    pub name: String,
    pub family: Family,
    pub shared: f64,
    pub vector: Vec<f64>,
    pub seed: u64,
    pub samples: usize,
    pub distance: f64,
    pub critical: f64,
    pub passed: bool,
}

pub fn construction_ks(spec: &FamilySpec, samples: usize, seed: u64) -> Result<KsCase> {
    let mixture = spec.mixture()?;
    let draws = spec.sample(samples, &mut RandomStream::new(seed))?;
    let distance = ks_distance(&draws, |t| mixture.cdf(t).unwrap_or(f64::NAN));
    let critical = ks_critical_1pct(samples);
    Ok(KsCase {
        name: format!("{}/n={}", spec.family().code(), spec.n()),
        family: spec.family(),
        shared: spec.shared(),
        vector: spec.vector().to_vec(),
        seed,
        samples,
        distance,
        critical,
        // NaN distance fails
        passed: distance < critical,
    })
}

/// The fixed construction-equivalence cases, optionally for one family.
/// Case `i` of the full suite draws from seed `seed + i` whatever the filter.
pub fn ks_suite(samples: usize, seed: u64, family: Option<Family>) -> Result<Vec<KsCase>> {
    ks_specs()
        .iter()
        .enumerate()
        .filter(|(_, s)| family.is_none_or(|f| s.family() == f))
        .map(|(i, s)| construction_ks(s, samples, seed.wrapping_add(i as u64)))
        .collect()
}
