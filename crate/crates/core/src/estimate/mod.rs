//! Parameter estimation for the six families: maximum likelihood and the
//! method of moments.
//!
//! Both estimators search over the canonical parameter vector
//! `θ = [shared, v_1, .., v_n]` with a derivative-free simplex, restarted
//! from several starting points, and finish with a damped Newton step on
//! finite differences. Positive parameters are searched on a log scale and
//! locations on a scale set by the shared parameter. Infeasible points
//! (outside the box, too close together, or with a nonpositive density at a
//! data point) get an infinite objective instead of an error.

mod init;
pub mod nelder_mead;
mod polish;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::{Family, FamilySpec, DEFAULT_SEP_MIN};
use crate::mixture::compensated_sum;
use crate::rng::RandomStream;
use nelder_mead::NelderMead;

/// Score-norm threshold (relative to `|ℓ|`) for a converged MLE.
pub const MLE_GRAD_TOL: f64 = 1e-4;
/// Residual threshold for a converged moment fit.
pub const MOM_RESIDUAL_TOL: f64 = 1e-10;
/// Minimum number of observations per free parameter.
pub const MIN_POINTS_PER_PARAMETER: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Mle,
    Mom,
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mle" => Ok(Method::Mle),
            "mom" => Ok(Method::Mom),
            _ => Err(Error::Config(format!("unknown method {s:?}; expected mle or mom"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitConfig {
    pub method: Method,
    pub family: Family,
    pub n_components: usize,
    /// Starting `θ`; vector entries are sorted before use.
    pub init: Option<Vec<f64>>,
    /// Closed box per entry of `θ`. `lo == hi` fixes that entry.
    pub bounds: Option<Vec<(f64, f64)>>,
    pub max_iter: usize,
    pub tol: f64,
    pub restarts: usize,
    pub sep_min: f64,
}

impl FitConfig {
    pub fn new(method: Method, family: Family, n_components: usize) -> Self {
        Self {
            method,
            family,
            n_components,
            init: None,
            bounds: None,
            max_iter: 2000,
            tol: 1e-8,
            restarts: 5,
            sep_min: DEFAULT_SEP_MIN,
        }
    }

    /// Fix the shared parameter at `value`.
    pub fn with_fixed_shared(mut self, value: f64) -> Self {
        let mut b = self.bounds.take().unwrap_or_else(|| default_bounds(self.family, self.n_components));
        b[0] = (value, value);
        self.bounds = Some(b);
        self
    }

    pub fn parameter_count(&self) -> usize {
        self.n_components + 1
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_components == 0 {
            return Err(Error::Config("n_components must be at least 1".into()));
        }
        if !(self.tol > 0.0) {
            return Err(Error::Config(format!("tol must be positive, got {}", self.tol)));
        }
        if self.max_iter == 0 {
            return Err(Error::Config("max_iter must be positive".into()));
        }
        if !(self.sep_min > 0.0) {
            return Err(Error::Config(format!("sep_min must be positive, got {}", self.sep_min)));
        }
        if let Some(init) = &self.init {
            if init.len() != self.parameter_count() {
                return Err(Error::Config(format!(
                    "init has {} entries, expected {}",
                    init.len(),
                    self.parameter_count()
                )));
            }
        }
        if let Some(b) = &self.bounds {
            if b.len() != self.parameter_count() {
                return Err(Error::Config(format!(
                    "bounds has {} entries, expected {}",
                    b.len(),
                    self.parameter_count()
                )));
            }
            for (i, &(lo, hi)) in b.iter().enumerate() {
                if lo.is_nan() || hi.is_nan() || lo > hi {
                    return Err(Error::Config(format!("bounds[{i}] = ({lo}, {hi}) is empty")));
                }
            }
        }
        Ok(())
    }

    fn resolved_bounds(&self) -> Vec<(f64, f64)> {
        self.bounds.clone().unwrap_or_else(|| default_bounds(self.family, self.n_components))
    }
}

/// Positivity box for `θ`: `(0, ∞)` for the shared parameter and positive
/// vectors, the real line for locations.
pub fn default_bounds(family: Family, n: usize) -> Vec<(f64, f64)> {
    let vec_bound = if family.positive_vector() { (0.0, f64::INFINITY) } else { (f64::NEG_INFINITY, f64::INFINITY) };
    std::iter::once((0.0, f64::INFINITY)).chain(std::iter::repeat_n(vec_bound, n)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitResult {
    pub params: FamilySpec,
    pub method: Method,
    /// Log-likelihood (MLE) or sum of squared relative moment residuals (MOM).
    pub objective: f64,
    /// Norm of the scaled finite-difference score divided by `|ℓ|` (MLE only).
    pub grad_norm: Option<f64>,
    pub converged: bool,
    pub iterations: usize,
    pub sample_size: usize,
}

/// `Σ ln f(x_i)`; `-inf` when any density value is nonpositive.
pub fn log_likelihood(spec: &FamilySpec, data: &[f64]) -> f64 {
    let Ok(m) = spec.mixture() else {
        return f64::NEG_INFINITY;
    };
    let mut total = 0.0;
    for &x in data {
        let p = m.pdf(x);
        if !(p > 0.0) || !p.is_finite() {
            return f64::NEG_INFINITY;
        }
        total += p.ln();
    }
    total
}

/// Raw sample moments `(μ̂_1, .., μ̂_{k_max})`.
pub fn sample_moments(data: &[f64], k_max: usize) -> Vec<f64> {
    let n = data.len() as f64;
    (1..=k_max)
        .map(|k| {
            let mut terms: Vec<f64> = data.iter().map(|x| x.powi(k as i32) / n).collect();
            compensated_sum(&mut terms)
        })
        .collect()
}

/// Free coordinates of `θ` and the map to the optimiser's coordinates.
#[derive(Debug, Clone)]
struct Layout {
    family: Family,
    bounds: Vec<(f64, f64)>,
    free: Vec<usize>,
    positive: Vec<bool>,
    /// Unit for location coordinates.
    loc_unit: f64,
    /// Data-dependent upper limit of the shared parameter (MHT: `min x`,
    /// MHP: `1/max x`); the shared coordinate is then `ln(edge − θ_0)`.
    edge: Option<f64>,
    sep_min: f64,
}

impl Layout {
    fn new(cfg: &FitConfig, bounds: Vec<(f64, f64)>, data: &[f64]) -> Self {
        let free = (0..bounds.len()).filter(|&i| bounds[i].0 < bounds[i].1).collect();
        let positive = (0..bounds.len()).map(|i| i == 0 || cfg.family.positive_vector()).collect();
        let edge = match cfg.family {
            Family::Pareto => Some(data.iter().copied().fold(f64::INFINITY, f64::min)),
            Family::Power => Some(1.0 / data.iter().copied().fold(f64::NEG_INFINITY, f64::max)),
            _ => None,
        }
        .filter(|e| *e > 0.0 && e.is_finite());
        Self {
            family: cfg.family,
            bounds,
            free,
            positive,
            loc_unit: init::location_unit(cfg.family, data),
            edge,
            sep_min: cfg.sep_min,
        }
    }

    fn theta(&self, base: &[f64], y: &[f64]) -> Vec<f64> {
        let mut theta = base.to_vec();
        for (&i, &yi) in self.free.iter().zip(y) {
            theta[i] = match (i, self.edge) {
                (0, Some(e)) => e - yi.exp(),
                _ if self.positive[i] => yi.exp(),
                _ => yi * self.loc_unit,
            };
        }
        theta
    }

    fn coords(&self, theta: &[f64]) -> Vec<f64> {
        self.free
            .iter()
            .map(|&i| match (i, self.edge) {
                (0, Some(e)) => (e - theta[i]).ln(),
                _ if self.positive[i] => theta[i].ln(),
                _ => theta[i] / self.loc_unit,
            })
            .collect()
    }

    /// Pin fixed entries and pull free ones inside the box.
    fn clamp(&self, theta: &mut [f64]) {
        for (i, t) in theta.iter_mut().enumerate() {
            let (lo, mut hi) = self.bounds[i];
            if let (0, Some(e)) = (i, self.edge) {
                if lo < hi {
                    hi = hi.min(e);
                }
            }
            if lo == hi {
                *t = lo;
            } else if *t <= lo || *t >= hi {
                let span = if self.positive[i] { t.abs().max(1e-12) } else { self.loc_unit };
                let margin = 1e-6 * span;
                *t = t.clamp(lo + margin, hi - margin);
                if self.positive[i] && *t <= 0.0 {
                    *t = if hi.is_finite() { 0.5 * (lo.max(0.0) + hi) } else { lo.max(0.0) + margin };
                }
            }
        }
    }

    fn spec(&self, theta: &[f64]) -> Option<FamilySpec> {
        for (i, &t) in theta.iter().enumerate() {
            let (lo, hi) = self.bounds[i];
            if !(t >= lo && t <= hi) {
                return None;
            }
        }
        let spec = FamilySpec::from_theta(self.family, theta, self.sep_min).ok()?;
        spec.weights().ok()?;
        Some(spec)
    }

    fn on_boundary(&self, theta: &[f64]) -> bool {
        let near_bound = self.free.iter().any(|&i| {
            let (lo, hi) = self.bounds[i];
            let scale = theta[i].abs().max(if self.positive[i] { 0.0 } else { self.loc_unit });
            (lo.is_finite() && lo != 0.0 && (theta[i] - lo).abs() <= 1e-6 * scale)
                || (hi.is_finite() && (hi - theta[i]).abs() <= 1e-6 * scale)
        });
        let v = &theta[1..];
        let tight = v.iter().enumerate().any(|(i, a)| {
            v[i + 1..].iter().any(|b| (a - b).abs() / a.abs().max(b.abs()).max(1.0) < 10.0 * self.sep_min)
        });
        near_bound || tight
    }
}

fn check_data(data: &[f64], free: usize) -> Result<()> {
    let needed = MIN_POINTS_PER_PARAMETER * free.max(1);
    if data.len() < needed {
        return Err(Error::InsufficientData { needed, got: data.len() });
    }
    if let Some(x) = data.iter().find(|x| !x.is_finite()) {
        return Err(Error::Domain(format!("data contains non-finite value {x}")));
    }
    Ok(())
}

struct Run {
    theta: Vec<f64>,
    f: f64,
    iterations: usize,
}

/// Multi-start search of `objective` (to be minimised) over the layout's
/// free coordinates.
fn multistart<F>(
    layout: &Layout,
    starts: &[Vec<f64>],
    cfg: &FitConfig,
    stream: &mut RandomStream,
    f_abs: f64,
    objective: &F,
) -> Option<Run>
where
    F: Fn(&[f64]) -> f64,
{
    let base = starts.first()?.clone();
    let obj_y = |y: &[f64]| -> f64 { objective(&layout.theta(&base, y)) };
    let nm = NelderMead { max_iter: cfg.max_iter, f_tol: cfg.tol, f_abs, x_tol: 1e-5 };
    let step: Vec<f64> = layout.free.iter().map(|&i| if i == 0 && layout.edge.is_some() { 1.0 } else { 0.1 }).collect();

    let mut best: Option<Run> = None;
    let mut iterations = 0usize;
    let consider = |best: &mut Option<Run>, run: Run| {
        let better = match best {
            None => true,
            Some(b) => {
                let tie = (run.f - b.f).abs() <= 1e-12 * b.f.abs().max(1e-300);
                if tie {
                    run.theta.iter().zip(&b.theta).find(|(x, y)| x != y).is_some_and(|(x, y)| x < y)
                } else {
                    run.f < b.f
                }
            }
        };
        if better && run.f.is_finite() {
            *best = Some(run);
        }
    };

    let run_from = |y0: Vec<f64>, iterations: &mut usize| -> Option<Run> {
        if !obj_y(&y0).is_finite() {
            return None;
        }
        // restart the simplex at its own optimum until it stops improving
        let mut m = nm.minimize(obj_y, &y0, &step);
        *iterations += m.iterations;
        for _ in 0..2 {
            let again = nm.minimize(obj_y, &m.x, &step);
            *iterations += again.iterations;
            let improved = again.f < m.f - nm.f_tol * m.f.abs();
            if again.f <= m.f {
                m = again;
            }
            if !improved {
                break;
            }
        }
        Some(Run { theta: layout.theta(&base, &m.x), f: m.f, iterations: 0 })
    };

    for s in starts {
        if let Some(run) = run_from(layout.coords(s), &mut iterations) {
            consider(&mut best, run);
        }
    }
    let extra = cfg.restarts.saturating_sub(starts.len().min(cfg.restarts));
    for _ in 0..extra {
        let Some(b) = &best else { break };
        let y: Vec<f64> = layout.coords(&b.theta).iter().map(|v| v + 0.6 * (stream.uniform() - 0.5)).collect();
        if let Some(run) = run_from(y, &mut iterations) {
            consider(&mut best, run);
        }
    }
    best.map(|mut b| {
        b.iterations = iterations;
        b
    })
}

fn starting_points(cfg: &FitConfig, layout: &Layout, data: &[f64], extra: Option<Vec<f64>>) -> Vec<Vec<f64>> {
    let mut starts = Vec::new();
    if let Some(init) = &cfg.init {
        let mut t = init.clone();
        t[1..].sort_by(f64::total_cmp);
        layout.clamp(&mut t);
        starts.push(t);
        return starts;
    }
    if let Some(t) = extra {
        starts.push(t);
    }
    for mut t in init::heuristic_starts(cfg.family, cfg.n_components, data) {
        layout.clamp(&mut t);
        starts.push(t);
    }
    starts
}

/// Scale of parameter `i` for the score check: its magnitude, the shared
/// scale for locations, and the distance to the data edge for an
/// edge-limited shared parameter.
fn param_scale(layout: &Layout, theta: &[f64], i: usize) -> f64 {
    match (i, layout.edge) {
        (0, Some(e)) => e - theta[0],
        _ if layout.positive[i] => theta[i].abs(),
        _ => theta[0],
    }
}

/// `‖(s_j ∂ℓ/∂θ_j)_j‖ / |ℓ|` over the free parameters, by central
/// differences with step `1e-5 s_j` (shortened next to the support edge).
fn relative_score_norm(layout: &Layout, theta: &[f64], data: &[f64]) -> f64 {
    let ll = |t: &[f64]| layout.spec(t).map_or(f64::NEG_INFINITY, |s| log_likelihood(&s, data));
    let l0 = ll(theta);
    if !l0.is_finite() {
        return f64::INFINITY;
    }
    let mut sq = 0.0;
    for &i in &layout.free {
        let s = param_scale(layout, theta, i);
        let mut h = 1e-5 * s;
        // shorten the step if it would cross the edge of the feasible region
        let (lu, ld) = loop {
            let mut up = theta.to_vec();
            let mut dn = theta.to_vec();
            up[i] += h;
            dn[i] -= h;
            let (lu, ld) = (ll(&up), ll(&dn));
            if lu.is_finite() && ld.is_finite() {
                break (lu, ld);
            }
            h *= 0.25;
            if h < 1e-12 * s {
                return f64::INFINITY;
            }
        };
        let g = s * (lu - ld) / (2.0 * h);
        sq += g * g;
    }
    sq.sqrt() / l0.abs().max(1e-300)
}

/// Maximum-likelihood fit.
pub fn fit_mle(data: &[f64], cfg: &FitConfig, stream: &mut RandomStream) -> Result<FitResult> {
    cfg.validate()?;
    let bounds = cfg.resolved_bounds();
    let free = bounds.iter().filter(|b| b.0 < b.1).count();
    check_data(data, free)?;

    let layout = Layout::new(cfg, bounds, data);

    // one component with the shared parameter fixed is an exponential model
    // for g^{-1}(x); its MLE is closed form
    if cfg.n_components == 1 && layout.free == [1] {
        if let Some(spec) = init::exponential_mle(cfg.family, layout.bounds[0].0, data) {
            let theta = spec.theta();
            if layout.spec(&theta).is_some() {
                let ll = log_likelihood(&spec, data);
                let grad = relative_score_norm(&layout, &theta, data);
                return Ok(FitResult {
                    params: spec,
                    method: Method::Mle,
                    objective: ll,
                    grad_norm: Some(grad),
                    converged: ll.is_finite(),
                    iterations: 0,
                    sample_size: data.len(),
                });
            }
        }
    }

    let mom_start = if cfg.init.is_none() {
        let mut mcfg = cfg.clone();
        mcfg.method = Method::Mom;
        mcfg.bounds = Some(layout.bounds.clone());
        mcfg.restarts = 1;
        let mut s = stream.split();
        fit_mom(data, &mcfg, &mut s).ok().map(|r| r.params.theta())
    } else {
        None
    };
    let starts = starting_points(cfg, &layout, data, mom_start);

    let neg_ll = |theta: &[f64]| -> f64 {
        match layout.spec(theta) {
            Some(spec) => -log_likelihood(&spec, data),
            None => f64::INFINITY,
        }
    };
    let run = multistart(&layout, &starts, cfg, stream, 0.0, &neg_ll)
        .ok_or_else(|| Error::Domain("no feasible starting point: every start has zero likelihood".into()))?;

    let base = run.theta.clone();
    let polished =
        polish::newton(|y: &[f64]| neg_ll(&layout.theta(&base, y)), &layout.coords(&run.theta), cfg.max_iter.min(50));
    let (theta, f) =
        if polished.f <= run.f { (layout.theta(&base, &polished.x), polished.f) } else { (run.theta.clone(), run.f) };

    let spec = layout.spec(&theta).expect("optimum is feasible");
    let grad = relative_score_norm(&layout, &theta, data);
    let converged = f.is_finite() && grad <= MLE_GRAD_TOL && !layout.on_boundary(&theta);
    Ok(FitResult {
        params: spec,
        method: Method::Mle,
        objective: -f,
        grad_norm: Some(grad),
        converged,
        iterations: run.iterations + polished.iterations,
        sample_size: data.len(),
    })
}

/// Method-of-moments fit: match the first `p` raw moments, `p` being the
/// number of free parameters.
pub fn fit_mom(data: &[f64], cfg: &FitConfig, stream: &mut RandomStream) -> Result<FitResult> {
    cfg.validate()?;
    let mut bounds = cfg.resolved_bounds();
    let p = bounds.iter().filter(|b| b.0 < b.1).count().max(1);
    check_data(data, p)?;

    // heavy-tailed families need shape > p for p finite moments
    let shape_index: Vec<usize> = match cfg.family {
        Family::Frechet => vec![0],
        Family::Pareto => (1..bounds.len()).collect(),
        _ => vec![],
    };
    for &i in &shape_index {
        let (lo, hi) = bounds[i];
        if hi <= p as f64 {
            return Err(Error::MomentDoesNotExist {
                component: i.saturating_sub(1),
                kind: format!("{} shape bounded by {hi}", cfg.family),
                order: p as u32,
                max_order: (hi.ceil() - 1.0).max(0.0) as u32,
            });
        }
        if lo <= p as f64 {
            bounds[i].0 = p as f64 * (1.0 + 1e-9);
        }
    }

    let layout = Layout::new(cfg, bounds, data);

    // MHW with k = 1 and one component is Exp(1/λ): λ̂ = mean
    if cfg.n_components == 1 && layout.free == [1] && cfg.family == Family::Weibull && layout.bounds[0].0 == 1.0 {
        if let Some(spec) = init::exponential_mle(cfg.family, layout.bounds[0].0, data) {
            if layout.spec(&spec.theta()).is_some() {
                if let Ok(m) = spec.mixture().and_then(|m| m.moment(1)) {
                    let mean = sample_moments(data, 1)[0];
                    let r = (m - mean) / mean;
                    return Ok(FitResult {
                        params: spec,
                        method: Method::Mom,
                        objective: r * r,
                        grad_norm: None,
                        converged: r * r <= MOM_RESIDUAL_TOL,
                        iterations: 0,
                        sample_size: data.len(),
                    });
                }
            }
        }
    }

    let moments = sample_moments(data, p);
    let m2 = if p >= 2 { moments[1] } else { moments[0] * moments[0] };
    let scales: Vec<f64> = moments
        .iter()
        .enumerate()
        .map(|(k, &m)| m.abs().max(1e-3 * m2.abs().powf((k + 1) as f64 / 2.0)).max(1e-300))
        .collect();

    let residuals = |theta: &[f64]| -> Option<Vec<f64>> {
        let spec = layout.spec(theta)?;
        let m = spec.mixture().ok()?;
        (1..=p)
            .map(|k| {
                let g = m.moment(k as u32).ok()?;
                g.is_finite().then(|| (g - moments[k - 1]) / scales[k - 1])
            })
            .collect()
    };
    let objective =
        |theta: &[f64]| -> f64 { residuals(theta).map_or(f64::INFINITY, |r| r.iter().map(|v| v * v).sum()) };

    let starts = starting_points(cfg, &layout, data, None);
    let run = multistart(&layout, &starts, cfg, stream, 1e-3 * MOM_RESIDUAL_TOL, &objective)
        .ok_or_else(|| Error::Domain("no feasible starting point for the moment equations".into()))?;

    let base = run.theta.clone();
    let polished = polish::gauss_newton(
        |y: &[f64]| residuals(&layout.theta(&base, y)),
        &layout.coords(&run.theta),
        cfg.max_iter.min(100),
    );
    let (theta, f) =
        if polished.f <= run.f { (layout.theta(&base, &polished.x), polished.f) } else { (run.theta.clone(), run.f) };
    let spec = layout.spec(&theta).expect("optimum is feasible");
    Ok(FitResult {
        params: spec,
        method: Method::Mom,
        objective: f,
        grad_norm: None,
        converged: f <= MOM_RESIDUAL_TOL && !layout.on_boundary(&theta),
        iterations: run.iterations + polished.iterations,
        sample_size: data.len(),
    })
}

/// Dispatch on `cfg.method`.
pub fn fit(data: &[f64], cfg: &FitConfig, stream: &mut RandomStream) -> Result<FitResult> {
    match cfg.method {
        Method::Mle => fit_mle(data, cfg, stream),
        Method::Mom => fit_mom(data, cfg, stream),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::LN_2;

    #[test]
    fn sample_moment_examples() {
        let m = sample_moments(&[1.0, 2.0, 3.0], 2);
        assert!((m[0] - 2.0).abs() < 1e-15 && (m[1] - 14.0 / 3.0).abs() < 1e-15);
        let c = sample_moments(&[1.5; 7], 3);
        for (k, v) in c.iter().enumerate() {
            assert!((v - 1.5f64.powi(k as i32 + 1)).abs() < 1e-14);
        }
        let data = [0.3, 1.9, 4.4, 2.0];
        assert!((sample_moments(&data, 1)[0] - data.iter().sum::<f64>() / 4.0).abs() < 1e-15);
    }

    #[test]
    fn log_likelihood_examples() {
        let spec = FamilySpec::new(Family::Weibull, 1.0, vec![1.0, 0.5]).unwrap();
        assert!((log_likelihood(&spec, &[LN_2]) - 0.5f64.ln()).abs() < 1e-15);
        assert_eq!(log_likelihood(&spec, &[1.0, -1.0]), f64::NEG_INFINITY);
    }

    #[test]
    fn exponential_likelihood_peaks_at_inverse_mean() {
        let data = [0.2, 0.9, 1.4, 0.05, 2.2, 0.7];
        let mean = data.iter().sum::<f64>() / data.len() as f64;
        // MHW with k = 1 and one component is Exp(1/λ)
        let ll = |lambda: f64| log_likelihood(&FamilySpec::new(Family::Weibull, 1.0, vec![lambda]).unwrap(), &data);
        let at = ll(mean);
        for f in [0.9, 0.99, 1.01, 1.1] {
            assert!(ll(mean * f) < at);
        }
    }

    #[test]
    fn insufficient_data() {
        let cfg = FitConfig::new(Method::Mle, Family::Weibull, 3);
        let r = fit_mle(&[1.0, 2.0, 3.0], &cfg, &mut RandomStream::new(1));
        assert!(matches!(r, Err(Error::InsufficientData { needed: 20, got: 3 })));
    }

    #[test]
    fn mom_requires_finite_moments() {
        let mut cfg = FitConfig::new(Method::Mom, Family::Pareto, 2);
        cfg.bounds = Some(vec![(0.0, f64::INFINITY), (0.0, 2.0), (0.0, 2.0)]);
        let data: Vec<f64> = (1..100).map(|i| 1.0 + i as f64 / 10.0).collect();
        let r = fit_mom(&data, &cfg, &mut RandomStream::new(1));
        assert!(matches!(r, Err(Error::MomentDoesNotExist { order: 3, .. })), "{r:?}");
    }

    #[test]
    fn bad_config_is_rejected() {
        let mut cfg = FitConfig::new(Method::Mle, Family::Weibull, 2);
        cfg.init = Some(vec![1.0]);
        let data = vec![1.0; 100];
        assert!(matches!(fit_mle(&data, &cfg, &mut RandomStream::new(1)), Err(Error::Config(_))));
        let mut cfg = FitConfig::new(Method::Mle, Family::Weibull, 2);
        cfg.bounds = Some(vec![(1.0, 0.0), (0.0, 1.0), (0.0, 1.0)]);
        assert!(matches!(fit_mle(&data, &cfg, &mut RandomStream::new(1)), Err(Error::Config(_))));
    }

    #[test]
    fn exponential_fits_equal_inverse_mean() {
        let truth = FamilySpec::new(Family::Weibull, 1.0, vec![0.8]).unwrap();
        let data = truth.sample(5000, &mut RandomStream::new(11)).unwrap();
        let mean = sample_moments(&data, 1)[0];
        let mle_cfg = FitConfig::new(Method::Mle, Family::Weibull, 1).with_fixed_shared(1.0);
        let mom_cfg = FitConfig::new(Method::Mom, Family::Weibull, 1).with_fixed_shared(1.0);
        let mle = fit(&data, &mle_cfg, &mut RandomStream::new(1)).unwrap();
        let mom = fit(&data, &mom_cfg, &mut RandomStream::new(1)).unwrap();
        let rate = |r: &FitResult| 1.0 / r.params.vector()[0];
        assert!((rate(&mle) - 1.0 / mean).abs() <= 1e-12 / mean);
        assert!((rate(&mom) - rate(&mle)).abs() <= 1e-12 * rate(&mle));
        assert!(mle.converged && mom.converged);
    }

    #[test]
    fn mom_recovers_hypoexponential_rates() {
        let truth = FamilySpec::new(Family::Weibull, 1.0, vec![1.0, 0.5]).unwrap();
        let data = truth.sample(10_000, &mut RandomStream::new(21)).unwrap();
        let cfg = FitConfig::new(Method::Mom, Family::Weibull, 2).with_fixed_shared(1.0);
        let r = fit_mom(&data, &cfg, &mut RandomStream::new(3)).unwrap();
        assert!(r.converged, "{r:?}");
        for (a, b) in r.params.vector().iter().zip(truth.vector()) {
            assert!((a - b).abs() <= 0.1 * b, "{:?}", r.params);
        }
    }

    #[test]
    fn mle_recovers_pareto_family() {
        let truth = FamilySpec::new(Family::Pareto, 1.0, vec![1.0, 3.0]).unwrap();
        let data = truth.sample(10_000, &mut RandomStream::new(2024)).unwrap();
        let cfg = FitConfig::new(Method::Mle, Family::Pareto, 2);
        let r = fit_mle(&data, &cfg, &mut RandomStream::new(9)).unwrap();
        assert!(r.converged, "{r:?}");
        assert!(r.grad_norm.unwrap() <= MLE_GRAD_TOL);
        for (a, b) in r.params.theta().iter().zip(truth.theta()) {
            assert!((a - b).abs() <= 0.1 * b, "{:?}", r.params);
        }
        assert!(r.objective >= log_likelihood(&truth, &data) - 1e-6);
    }
}
