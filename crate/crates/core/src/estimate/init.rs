//! Starting points: a one-component fit matched at the sample quartiles,
//! then spread into `n` components.

use crate::family::{Family, FamilySpec, HypoexpSpec};

fn quantile_sorted(sorted: &[f64], u: f64) -> f64 {
    let h = u * (sorted.len() - 1) as f64;
    let i = h.floor() as usize;
    let j = (i + 1).min(sorted.len() - 1);
    sorted[i] + (h - i as f64) * (sorted[j] - sorted[i])
}

fn sorted(data: &[f64]) -> Vec<f64> {
    let mut s = data.to_vec();
    s.sort_by(f64::total_cmp);
    s
}

/// Unit for location parameters: the quartile spread, or one.
pub(super) fn location_unit(family: Family, data: &[f64]) -> f64 {
    if family.positive_vector() || data.len() < 2 {
        return 1.0;
    }
    let s = sorted(data);
    let iqr = quantile_sorted(&s, 0.75) - quantile_sorted(&s, 0.25);
    if iqr > 0.0 && iqr.is_finite() {
        iqr
    } else {
        1.0
    }
}

/// `(shared, v)` of the single base distribution with the sample's quartiles.
fn quartile_fit(family: Family, data: &[f64]) -> Option<(f64, f64)> {
    let s = sorted(data);
    let (q1, q3) = (quantile_sorted(&s, 0.25), quantile_sorted(&s, 0.75));
    let (lo, hi) = (s[0], s[s.len() - 1]);
    let ln3 = 3f64.ln();
    let (shared, v) = match family {
        Family::Weibull => {
            let (a1, a3) = ((-0.75f64.ln()).ln(), (-0.25f64.ln()).ln());
            let k = (a3 - a1) / (q3.ln() - q1.ln());
            (k, q1 / (-0.75f64.ln()).powf(1.0 / k))
        }
        Family::Frechet => {
            let (b1, b3) = ((-0.25f64.ln()).ln(), (-0.75f64.ln()).ln());
            let k = (b1 - b3) / (q3.ln() - q1.ln());
            (k, q1 * (-0.25f64.ln()).powf(1.0 / k))
        }
        Family::Pareto => {
            let lambda = ln3 / (q3.ln() - q1.ln());
            let k = (q1 * 0.75f64.powf(1.0 / lambda)).min(lo * (1.0 - 1e-3));
            (k, lambda)
        }
        Family::Power => {
            let lambda = ln3 / (q3.ln() - q1.ln());
            let k = (0.25f64.powf(1.0 / lambda) / q1).min((1.0 - 1e-3) / hi);
            (k, lambda)
        }
        Family::Gumbel => {
            let a = |u: f64| (-(1.0 - u).ln()).ln();
            let lambda = (q3 - q1) / (a(0.75) - a(0.25));
            (lambda, q1 - lambda * a(0.25))
        }
        Family::ExtremeValue => {
            let b = |u: f64| -(-u.ln()).ln();
            let lambda = (q3 - q1) / (b(0.75) - b(0.25));
            (lambda, q1 - lambda * b(0.25))
        }
    };
    (shared > 0.0 && shared.is_finite() && v.is_finite()).then_some((shared, v))
}

/// Candidate `θ` vectors, best guess first.
pub(super) fn heuristic_starts(family: Family, n: usize, data: &[f64]) -> Vec<Vec<f64>> {
    let Some((shared, v)) = quartile_fit(family, data) else {
        return vec![];
    };
    let mut starts = Vec::new();
    if let Some(t) = hypoexp_start(family, shared, n, data) {
        starts.push(t);
    }
    let spread = |j: usize| if n == 1 { 0.0 } else { -0.25 + 0.5 * j as f64 / (n - 1) as f64 };
    let split: Vec<f64> = (0..n)
        .map(|j| if family.positive_vector() { v * (1.0 + spread(j)) } else { v + spread(j) * v.abs().max(shared) })
        .collect();
    starts.push(std::iter::once(shared).chain(split).collect());
    starts
}

/// Keep the shared parameter, map the data back to the exponential scale and
/// match the mean and variance of a hypoexponential sum.
fn hypoexp_start(family: Family, shared: f64, n: usize, data: &[f64]) -> Option<Vec<f64>> {
    let probe = FamilySpec::new(family, shared, vec![1.0]).ok()?;
    let s: Vec<f64> = data.iter().filter_map(|&x| probe.inverse_transform(x).ok()).collect();
    if s.len() < data.len() / 2 || s.len() < 2 {
        return None;
    }
    let m = s.iter().sum::<f64>() / s.len() as f64;
    let var = s.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (s.len() - 1) as f64;
    // stage means μ_j with Σμ = m
    let means: Vec<f64> = if n == 2 && 2.0 * var > m * m && var < m * m {
        let disc = (2.0 * var - m * m).sqrt();
        vec![0.5 * (m + disc), 0.5 * (m - disc)]
    } else {
        let w: Vec<f64> = (0..n).map(|j| 2f64.powi(j as i32)).collect();
        let total: f64 = w.iter().sum();
        w.iter().map(|x| m * x / total).collect()
    };
    let rates = HypoexpSpec::new(means.iter().map(|mu| 1.0 / mu).collect()).ok()?;
    FamilySpec::from_rates(family, shared, &rates).ok().map(|f| f.theta())
}

/// Closed-form fit of one component with the shared parameter fixed: the
/// back-transformed data are exponential with rate `1/mean`.
pub(super) fn exponential_mle(family: Family, shared: f64, data: &[f64]) -> Option<FamilySpec> {
    let probe = FamilySpec::new(family, shared, vec![1.0]).ok()?;
    let s = data.iter().map(|&x| probe.inverse_transform(x).ok()).collect::<Option<Vec<f64>>>()?;
    let mean = s.iter().sum::<f64>() / s.len() as f64;
    let rates = HypoexpSpec::new(vec![1.0 / mean]).ok()?;
    FamilySpec::from_rates(family, shared, &rates).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RandomStream;

    #[test]
    fn quartile_fit_recovers_single_components() {
        let cases = [
            (Family::Weibull, 1.7, 2.5),
            (Family::Frechet, 3.0, 1.5),
            (Family::Pareto, 2.0, 2.5),
            (Family::Power, 0.5, 3.0),
            (Family::Gumbel, 1.5, 2.0),
            (Family::ExtremeValue, 0.7, -1.0),
        ];
        for (family, shared, v) in cases {
            let spec = FamilySpec::new(family, shared, vec![v]).unwrap();
            let data = spec.sample(20_000, &mut RandomStream::new(5)).unwrap();
            let (s, w) = quartile_fit(family, &data).unwrap();
            assert!((s - shared).abs() < 0.1 * shared, "{family}: {s} vs {shared}");
            assert!((w - v).abs() < 0.1 * v.abs().max(shared), "{family}: {w} vs {v}");
        }
    }

    #[test]
    fn exponential_mle_is_inverse_mean() {
        let data = [0.5, 1.0, 2.5, 0.1, 0.9];
        let spec = exponential_mle(Family::Weibull, 1.0, &data).unwrap();
        let mean = data.iter().sum::<f64>() / 5.0;
        assert!((spec.vector()[0] - mean).abs() < 1e-15);
    }
}
