//! Linear combinations `Σ A_i f_i` of base densities with real weights that
//! sum to one. Weights may be negative; the combination is a density only
//! when it stays nonnegative, which [`SignedMixture::validate`] checks
//! numerically.

use serde::Serialize;
use smallvec::SmallVec;

use crate::base::BaseDistribution;
use crate::error::{Error, Result};
use crate::interval::SupportInterval;
use crate::verify::quad::integrate_about;

/// Tolerance on `|Σ A_i − 1|`, relative to `Σ |A_i|`.
pub const WEIGHT_SUM_TOL: f64 = 1e-12;
/// Largest round-off excursion of a CDF outside `[0, 1]` that is clamped
/// rather than reported.
pub const CLAMP_TOL: f64 = 1e-9;
/// Allowed negative density, relative to the largest density on the grid.
pub const NEGATIVITY_TOL: f64 = 1e-9;
pub const NORMALISATION_TOL: f64 = 1e-8;
pub const DEFAULT_GRID: usize = 512;
const REFINE_POINTS: usize = 64;

type Terms = SmallVec<[f64; 8]>;

/// Neumaier-compensated sum taken in order of decreasing magnitude.
pub(crate) fn compensated_sum(terms: &mut [f64]) -> f64 {
    terms.sort_unstable_by(|a, b| b.abs().total_cmp(&a.abs()));
    let mut sum = 0.0f64;
    let mut carry = 0.0f64;
    for &x in terms.iter() {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            carry += (sum - t) + x;
        } else {
            carry += (x - t) + sum;
        }
        sum = t;
    }
    sum + carry
}

#[derive(Debug, Clone, PartialEq)]
pub struct SignedMixture {
    components: Vec<BaseDistribution>,
    weights: Vec<f64>,
    support: SupportInterval,
}

impl SignedMixture {
    /// Build a mixture, checking lengths, the common support and the weight
    /// sum. Nonnegativity of the density is not checked here.
    pub fn new(components: Vec<BaseDistribution>, weights: Vec<f64>) -> Result<Self> {
        let m = Self::from_parts_unchecked(components, weights)?;
        let (sum, scale) = m.weight_sum();
        if (sum - 1.0).abs() > WEIGHT_SUM_TOL * scale.max(1.0) {
            return Err(Error::Construction(format!("weights sum to {sum}, expected 1")));
        }
        Ok(m)
    }

    /// Build without the weight-sum check, for hand-built mixtures that are
    /// later inspected with [`SignedMixture::validate`].
    pub fn from_parts_unchecked(components: Vec<BaseDistribution>, weights: Vec<f64>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::Construction("mixture needs at least one component".into()));
        }
        if components.len() != weights.len() {
            return Err(Error::Construction(format!("{} components but {} weights", components.len(), weights.len())));
        }
        if let Some(w) = weights.iter().find(|w| !w.is_finite()) {
            return Err(Error::Construction(format!("non-finite weight {w}")));
        }
        let support = components[0].support();
        for c in &components[1..] {
            let s = c.support();
            if s.lo != support.lo || s.hi != support.hi {
                return Err(Error::Construction(format!("component {c} has support {s}, expected {support}")));
            }
        }
        Ok(Self { components, weights, support })
    }

    pub fn single(component: BaseDistribution) -> Self {
        Self { support: component.support(), components: vec![component], weights: vec![1.0] }
    }

    pub fn components(&self) -> &[BaseDistribution] {
        &self.components
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn support(&self) -> SupportInterval {
        self.support
    }

    /// `(Σ A_i, Σ |A_i|)`.
    pub fn weight_sum(&self) -> (f64, f64) {
        let mut w: Terms = self.weights.iter().copied().collect();
        let scale = self.weights.iter().map(|a| a.abs()).sum();
        (compensated_sum(&mut w), scale)
    }

    fn combine(&self, f: impl Fn(&BaseDistribution) -> f64) -> f64 {
        if self.components.len() == 1 {
            return self.weights[0] * f(&self.components[0]);
        }
        let mut terms: Terms = self.components.iter().zip(&self.weights).map(|(c, &a)| a * f(c)).collect();
        compensated_sum(&mut terms)
    }

    fn below_support(&self, t: f64) -> bool {
        t < self.support.lo || (t == self.support.lo && !self.support.lo_closed)
    }

    fn above_support(&self, t: f64) -> bool {
        t > self.support.hi || (t == self.support.hi && !self.support.hi_closed)
    }

    pub fn pdf(&self, t: f64) -> f64 {
        if t < self.support.lo || t > self.support.hi {
            return 0.0;
        }
        self.combine(|c| c.pdf(t))
    }

    fn clamp_probability(&self, v: f64, what: &str, t: f64) -> Result<f64> {
        if !(-CLAMP_TOL..=1.0 + CLAMP_TOL).contains(&v) {
            return Err(Error::Construction(format!("{what} at t = {t} evaluates to {v}, outside [0, 1]")));
        }
        Ok(v.clamp(0.0, 1.0))
    }

    pub fn cdf(&self, t: f64) -> Result<f64> {
        if self.below_support(t) {
            return Ok(0.0);
        }
        if self.above_support(t) {
            return Ok(1.0);
        }
        let v = self.combine(|c| c.cdf(t));
        self.clamp_probability(v, "CDF", t)
    }

    pub fn reliability(&self, t: f64) -> Result<f64> {
        if self.below_support(t) {
            return Ok(1.0);
        }
        if self.above_support(t) {
            return Ok(0.0);
        }
        let v = self.combine(|c| c.reliability(t));
        self.clamp_probability(v, "reliability", t)
    }

    /// `pdf / reliability`.
    pub fn hazard(&self, t: f64) -> Result<f64> {
        let r = self.reliability(t)?;
        if r <= 1e-300 {
            return Err(Error::Domain(format!("hazard undefined at t = {t}: reliability {r}")));
        }
        Ok(self.pdf(t) / r)
    }

    /// Intersection of the component MGF domains.
    pub fn mgf_domain(&self) -> Option<SupportInterval> {
        let mut dom = self.components[0].mgf_domain();
        for c in &self.components[1..] {
            dom = dom.intersect(&c.mgf_domain())?;
        }
        Some(dom)
    }

    pub fn mgf(&self, t: f64) -> Result<f64> {
        for (i, c) in self.components.iter().enumerate() {
            let d = c.mgf_domain();
            if !d.contains(t) {
                return Err(Error::Domain(format!(
                    "MGF of component {i} ({c}) is infinite at t = {t}; its domain is {d}"
                )));
            }
        }
        if t == 0.0 {
            return Ok(1.0);
        }
        let mut terms: Terms = SmallVec::new();
        for (c, &a) in self.components.iter().zip(&self.weights) {
            terms.push(a * c.mgf(t)?);
        }
        Ok(compensated_sum(&mut terms))
    }

    /// Largest order with every component moment finite (`None`: all orders).
    pub fn max_moment_order(&self) -> Option<u32> {
        self.components.iter().filter_map(|c| c.max_moment_order()).min()
    }

    /// Raw moment `Σ A_i E[X_i^k]`.
    pub fn moment(&self, k: u32) -> Result<f64> {
        let mut terms: Terms = SmallVec::new();
        for (i, (c, &a)) in self.components.iter().zip(&self.weights).enumerate() {
            let m = c.moment(k).map_err(|e| match e {
                Error::MomentDoesNotExist { kind, order, max_order, .. } => {
                    Error::MomentDoesNotExist { component: i, kind, order, max_order }
                }
                other => other,
            })?;
            terms.push(a * m);
        }
        if terms.len() == 1 {
            return Ok(terms[0]);
        }
        Ok(compensated_sum(&mut terms))
    }

    /// Inverse CDF by bracketing and bisection. Requires a valid mixture.
    pub fn quantile(&self, u: f64) -> Result<f64> {
        if !(u > 0.0 && u < 1.0) {
            return Err(Error::Domain(format!("quantile level must lie in (0, 1), got {u}")));
        }
        let qs: SmallVec<[f64; 8]> = self.components.iter().map(|c| c.quantile_unchecked(u)).collect();
        let mut lo = qs.iter().copied().fold(f64::INFINITY, f64::min);
        let mut hi = qs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut step = (hi - lo).max(lo.abs().max(hi.abs()) * 1e-3).max(1e-12);
        let mut guard = 0;
        while self.cdf(lo)? > u {
            lo = if self.support.lo.is_finite() { 0.5 * (lo + self.support.lo) } else { lo - step };
            step *= 2.0;
            guard += 1;
            if guard > 2000 {
                return Err(Error::Domain(format!("could not bracket quantile {u}")));
            }
        }
        step = (hi - lo).max(hi.abs() * 1e-3).max(1e-12);
        while self.cdf(hi)? < u {
            hi = if self.support.hi.is_finite() { 0.5 * (hi + self.support.hi) } else { hi + step };
            step *= 2.0;
            guard += 1;
            if guard > 4000 {
                return Err(Error::Domain(format!("could not bracket quantile {u}")));
            }
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.cdf(mid)? < u {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// Numerical validity checks: weight sum, density nonnegativity on a
    /// quantile-spaced grid (refined around its minima), and normalisation.
    pub fn validate(&self, grid_size: usize) -> Result<ValidationReport> {
        if grid_size < 16 {
            return Err(Error::Domain(format!("grid_size must be at least 16, got {grid_size}")));
        }
        let (sum, scale) = self.weight_sum();
        let sum_err = (sum - 1.0).abs();
        let weight_sum = Check {
            name: "weight_sum".into(),
            passed: sum_err <= WEIGHT_SUM_TOL * scale.max(1.0),
            value: sum,
            worst_at: None,
        };

        let grid = self.validation_grid(grid_size);
        let mut values: Vec<(f64, f64)> = grid.iter().map(|&t| (t, self.pdf(t))).collect();
        // refine between the grid points where the density is smallest
        let mut order: Vec<usize> = (0..values.len()).collect();
        order.sort_by(|&a, &b| values[a].1.total_cmp(&values[b].1));
        let mut extra = Vec::with_capacity(REFINE_POINTS);
        for &i in order.iter().take(REFINE_POINTS / 2) {
            for j in [i.wrapping_sub(1), i + 1] {
                if let Some(&(tn, _)) = values.get(j) {
                    let t = 0.5 * (values[i].0 + tn);
                    extra.push((t, self.pdf(t)));
                }
            }
        }
        values.extend(extra);
        let peak = values.iter().map(|v| v.1).fold(0.0f64, f64::max);
        let (worst_t, worst) = values.iter().copied().min_by(|a, b| a.1.total_cmp(&b.1)).unwrap_or((f64::NAN, 0.0));
        let nonnegativity = Check {
            name: "nonnegativity".into(),
            passed: worst >= -NEGATIVITY_TOL * peak && worst.is_finite(),
            value: worst,
            worst_at: Some(worst_t),
        };

        let centre = grid[grid.len() / 2];
        let integral = integrate_about(|t| self.pdf(t), self.support.lo, self.support.hi, centre, 1e-12, 1e-11)
            .map(|q| q.value)
            .unwrap_or_else(|e| match e {
                Error::Accuracy { estimate, .. } => estimate,
                _ => f64::NAN,
            });
        let normalisation = Check {
            name: "normalisation".into(),
            passed: (integral - 1.0).abs() <= NORMALISATION_TOL,
            value: integral,
            worst_at: None,
        };

        Ok(ValidationReport { weight_sum, nonnegativity, normalisation })
    }

    /// `grid_size` points spread over the pooled component quantiles.
    fn validation_grid(&self, grid_size: usize) -> Vec<f64> {
        let n = self.components.len();
        let mut pooled: Vec<f64> = Vec::with_capacity(n * grid_size);
        for c in &self.components {
            for j in 0..grid_size {
                let u = (j as f64 + 0.5) / grid_size as f64;
                pooled.push(c.quantile_unchecked(u));
            }
        }
        pooled.sort_by(f64::total_cmp);
        (0..grid_size).map(|j| pooled[(j * n + n / 2).min(pooled.len() - 1)]).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Weight sum, most negative density, or integral, respectively.
    pub value: f64,
    pub worst_at: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub weight_sum: Check,
    pub nonnegativity: Check,
    pub normalisation: Check,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.weight_sum.passed && self.nonnegativity.passed && self.normalisation.passed
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::LN_2;

    fn exp(rate: f64) -> BaseDistribution {
        BaseDistribution::exponential(rate).unwrap()
    }

    fn hypo12() -> SignedMixture {
        SignedMixture::new(vec![exp(1.0), exp(2.0)], vec![2.0, -1.0]).unwrap()
    }

    // 2e^{-t} - 2e^{-2t}, F = (1 - e^{-t})^2
    fn hypo12_pdf(t: f64) -> f64 {
        2.0 * (-t).exp() - 2.0 * (-2.0 * t).exp()
    }

    #[test]
    fn pdf_examples() {
        let single = SignedMixture::single(exp(2.0));
        assert_eq!(single.pdf(0.0), 2.0);
        let m = hypo12();
        assert!((m.pdf(LN_2) - 0.5).abs() < 1e-15);
        assert!((m.pdf(LN_2) - hypo12_pdf(LN_2)).abs() < 1e-15);
        assert_eq!(m.pdf(-1.0), 0.0);
    }

    #[test]
    fn cdf_reliability_hazard_examples() {
        let m = hypo12();
        let oracle_cdf = (1.0 - (-LN_2).exp()).powi(2);
        assert!((m.cdf(LN_2).unwrap() - oracle_cdf).abs() < 1e-15);
        assert!((m.cdf(LN_2).unwrap() - 0.25).abs() < 1e-15);
        assert!((m.reliability(LN_2).unwrap() - 0.75).abs() < 1e-15);
        assert!((m.hazard(LN_2).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(m.cdf(1e6).unwrap(), 1.0);
        assert_eq!(m.reliability(1e6).unwrap(), 0.0);
        assert_eq!(m.cdf(-3.0).unwrap(), 0.0);
        assert_eq!(m.reliability(-3.0).unwrap(), 1.0);
        assert!(matches!(m.hazard(1e6), Err(Error::Domain(_))));
        let single = SignedMixture::single(exp(2.0));
        for t in [0.1, 1.0, 5.0] {
            assert!((single.hazard(t).unwrap() - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn mgf_examples() {
        let m = hypo12();
        assert_eq!(m.mgf(0.0).unwrap(), 1.0);
        let exact = 2.0 * (1.0 / 0.5) - 2.0 / 1.5;
        assert!((m.mgf(0.5).unwrap() - exact).abs() < 1e-9 * exact);
        assert!((exact - 8.0 / 3.0).abs() < 1e-15);
        let p = SignedMixture::new(
            vec![BaseDistribution::pareto(1.0, 2.0).unwrap(), BaseDistribution::pareto(1.0, 3.0).unwrap()],
            vec![3.0, -2.0],
        )
        .unwrap();
        assert!(matches!(p.mgf(0.1), Err(Error::Domain(_))));
    }

    #[test]
    fn moment_examples() {
        let m = hypo12();
        assert!((m.moment(1).unwrap() - 1.5).abs() < 1e-15);
        let single = SignedMixture::single(exp(3.0));
        assert_eq!(single.moment(2).unwrap(), exp(3.0).moment(2).unwrap());
        let p = SignedMixture::new(
            vec![BaseDistribution::pareto(1.0, 2.0).unwrap(), BaseDistribution::pareto(1.0, 4.0).unwrap()],
            vec![2.0, -1.0],
        )
        .unwrap();
        match p.moment(3) {
            Err(Error::MomentDoesNotExist { component, max_order, .. }) => {
                assert_eq!(component, 0);
                assert_eq!(max_order, 1);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn construction_checks() {
        assert!(matches!(SignedMixture::new(vec![exp(1.0), exp(2.0)], vec![0.5, 0.4]), Err(Error::Construction(_))));
        assert!(matches!(
            SignedMixture::new(vec![exp(1.0), BaseDistribution::pareto(1.0, 2.0).unwrap()], vec![0.5, 0.5]),
            Err(Error::Construction(_))
        ));
        assert!(SignedMixture::new(vec![], vec![]).is_err());
        assert!(SignedMixture::new(vec![exp(1.0)], vec![1.0, 0.0]).is_err());
    }

    #[test]
    fn validation_of_valid_mixture() {
        let r = hypo12().validate(DEFAULT_GRID).unwrap();
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn validation_flags_bad_weight_sum() {
        let m = SignedMixture::from_parts_unchecked(vec![exp(1.0), exp(2.0)], vec![0.5, 0.4]).unwrap();
        let r = m.validate(64).unwrap();
        assert!(!r.weight_sum.passed);
        assert!(!r.passed());
    }

    #[test]
    fn validation_flags_negative_density() {
        // -e^{-t} + 4e^{-2t} < 0 for t > ln 4
        let m = SignedMixture::from_parts_unchecked(vec![exp(1.0), exp(2.0)], vec![-1.0, 2.0]).unwrap();
        let r = m.validate(DEFAULT_GRID).unwrap();
        assert!(r.weight_sum.passed);
        assert!(!r.nonnegativity.passed);
        assert!(r.nonnegativity.worst_at.unwrap() > 4f64.ln());
        assert!(r.nonnegativity.value < 0.0);
        assert!(m.validate(8).is_err());
    }

    #[test]
    fn cdf_outside_unit_interval_is_an_error() {
        let m = SignedMixture::from_parts_unchecked(vec![exp(1.0), exp(2.0)], vec![-1.0, 2.0]).unwrap();
        // F = -(1 - e^{-t}) + 2(1 - e^{-2t}) exceeds 1 near t = ln 4
        assert!(matches!(m.cdf(4f64.ln()), Err(Error::Construction(_))));
    }

    #[test]
    fn quantile_inverts_cdf() {
        let m = hypo12();
        let t = m.quantile(0.25).unwrap();
        assert!((t - LN_2).abs() < 1e-12);
        for u in [1e-6, 0.01, 0.5, 0.99, 1.0 - 1e-9] {
            let t = m.quantile(u).unwrap();
            assert!((m.cdf(t).unwrap() - u).abs() < 1e-12, "{u}");
        }
    }

    #[test]
    fn compensated_sum_recovers_cancellation() {
        let mut v = [1e16, 1.0, -1e16, 1.0];
        assert_eq!(compensated_sum(&mut v), 2.0);
    }
}
