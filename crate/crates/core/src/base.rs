//! Elementary two-parameter laws used as mixture components.
//!
//! Parameter roles are fixed per kind:
//!
//! | kind           | first      | second      | support     | CDF                         |
//! |----------------|------------|-------------|-------------|-----------------------------|
//! | `Exponential`  | rate α     |             | (0, ∞)      | 1 − e^{−αt}                 |
//! | `Weibull`      | shape k    | scale λ     | (0, ∞)      | 1 − e^{−(t/λ)^k}            |
//! | `Frechet`      | shape k    | scale λ     | (0, ∞)      | e^{−(t/λ)^{−k}}             |
//! | `Pareto`       | scale k    | shape λ     | [k, ∞)      | 1 − (k/t)^λ                 |
//! | `Power`        | domain k   | shape λ     | (0, 1/k]    | (kt)^λ                      |
//! | `GumbelMin`    | location k | scale λ     | ℝ           | 1 − e^{−e^{(t−k)/λ}}        |
//! | `ExtremeValue` | location k | scale λ     | ℝ           | e^{−e^{−(t−k)/λ}}           |

use std::fmt;

use serde::{Deserialize, Serialize};
use statrs::function::gamma::{gamma, ln_gamma};

use crate::error::{Error, Result};
use crate::interval::SupportInterval;
use crate::rng::RandomStream;
use crate::verify::quad::integrate_about;

/// Quadrature target for moments and MGFs without a closed form.
pub(crate) const QUAD_REL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Kind {
    Exponential,
    Weibull,
    Frechet,
    Pareto,
    Power,
    GumbelMin,
    ExtremeValue,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum BaseDistribution {
    Exponential { rate: f64 },
    Weibull { shape: f64, scale: f64 },
    Frechet { shape: f64, scale: f64 },
    Pareto { scale: f64, shape: f64 },
    Power { domain: f64, shape: f64 },
    GumbelMin { location: f64, scale: f64 },
    ExtremeValue { location: f64, scale: f64 },
}

fn positive(name: &str, value: f64) -> Result<f64> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Positivity { name: name.to_string(), value })
    }
}

fn finite(name: &str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Domain(format!("{name} must be finite, got {value}")))
    }
}

impl BaseDistribution {
    pub fn exponential(rate: f64) -> Result<Self> {
        Ok(Self::Exponential { rate: positive("rate", rate)? })
    }

    pub fn weibull(shape: f64, scale: f64) -> Result<Self> {
        Ok(Self::Weibull { shape: positive("shape", shape)?, scale: positive("scale", scale)? })
    }

    pub fn frechet(shape: f64, scale: f64) -> Result<Self> {
        Ok(Self::Frechet { shape: positive("shape", shape)?, scale: positive("scale", scale)? })
    }

    pub fn pareto(scale: f64, shape: f64) -> Result<Self> {
        Ok(Self::Pareto { scale: positive("scale", scale)?, shape: positive("shape", shape)? })
    }

    pub fn power(domain: f64, shape: f64) -> Result<Self> {
        Ok(Self::Power { domain: positive("domain", domain)?, shape: positive("shape", shape)? })
    }

    pub fn gumbel_min(location: f64, scale: f64) -> Result<Self> {
        Ok(Self::GumbelMin { location: finite("location", location)?, scale: positive("scale", scale)? })
    }

    pub fn extreme_value(location: f64, scale: f64) -> Result<Self> {
        Ok(Self::ExtremeValue { location: finite("location", location)?, scale: positive("scale", scale)? })
    }

    pub fn kind(&self) -> Kind {
        match self {
            Self::Exponential { .. } => Kind::Exponential,
            Self::Weibull { .. } => Kind::Weibull,
            Self::Frechet { .. } => Kind::Frechet,
            Self::Pareto { .. } => Kind::Pareto,
            Self::Power { .. } => Kind::Power,
            Self::GumbelMin { .. } => Kind::GumbelMin,
            Self::ExtremeValue { .. } => Kind::ExtremeValue,
        }
    }

    pub fn support(&self) -> SupportInterval {
        match *self {
            Self::Exponential { .. } | Self::Weibull { .. } | Self::Frechet { .. } => {
                SupportInterval::open(0.0, f64::INFINITY)
            }
            Self::Pareto { scale, .. } => SupportInterval::new(scale, f64::INFINITY, true, false),
            Self::Power { domain, .. } => SupportInterval::new(0.0, 1.0 / domain, false, true),
            Self::GumbelMin { .. } | Self::ExtremeValue { .. } => SupportInterval::real_line(),
        }
    }

    /// Density at `t`; zero outside the support. At a finite lower endpoint
    /// the right limit is returned when it is finite, otherwise zero.
    pub fn pdf(&self, t: f64) -> f64 {
        match *self {
            Self::Exponential { rate } => {
                if t < 0.0 {
                    0.0
                } else {
                    rate * (-rate * t).exp()
                }
            }
            Self::Weibull { shape, scale } => {
                if t < 0.0 {
                    return 0.0;
                }
                if t == 0.0 {
                    return match shape.partial_cmp(&1.0) {
                        Some(std::cmp::Ordering::Equal) => 1.0 / scale,
                        _ => 0.0,
                    };
                }
                let z = t / scale;
                let zk = z.powf(shape);
                shape / t * zk * (-zk).exp()
            }
            Self::Frechet { shape, scale } => {
                if t <= 0.0 {
                    return 0.0;
                }
                let zk = (t / scale).powf(-shape);
                if zk.is_infinite() {
                    return 0.0;
                }
                shape / t * zk * (-zk).exp()
            }
            Self::Pareto { scale, shape } => {
                if t < scale {
                    0.0
                } else {
                    shape / t * (scale / t).powf(shape)
                }
            }
            Self::Power { domain, shape } => {
                if t < 0.0 || t > 1.0 / domain {
                    return 0.0;
                }
                if t == 0.0 {
                    return match shape.partial_cmp(&1.0) {
                        Some(std::cmp::Ordering::Equal) => domain,
                        _ => 0.0,
                    };
                }
                shape / t * (domain * t).powf(shape)
            }
            Self::GumbelMin { location, scale } => {
                let z = (t - location) / scale;
                (z - z.exp()).exp() / scale
            }
            Self::ExtremeValue { location, scale } => {
                let z = (t - location) / scale;
                (-z - (-z).exp()).exp() / scale
            }
        }
    }

    pub fn cdf(&self, t: f64) -> f64 {
        match *self {
            Self::Exponential { rate } => {
                if t <= 0.0 {
                    0.0
                } else {
                    -(-rate * t).exp_m1()
                }
            }
            Self::Weibull { shape, scale } => {
                if t <= 0.0 {
                    0.0
                } else {
                    -(-(t / scale).powf(shape)).exp_m1()
                }
            }
            Self::Frechet { shape, scale } => {
                if t <= 0.0 {
                    0.0
                } else {
                    (-(t / scale).powf(-shape)).exp()
                }
            }
            Self::Pareto { scale, shape } => {
                if t <= scale {
                    0.0
                } else {
                    -(shape * (scale / t).ln()).exp_m1()
                }
            }
            Self::Power { domain, shape } => {
                if t <= 0.0 {
                    0.0
                } else if t >= 1.0 / domain {
                    1.0
                } else {
                    (domain * t).powf(shape)
                }
            }
            Self::GumbelMin { location, scale } => -(-((t - location) / scale).exp()).exp_m1(),
            Self::ExtremeValue { location, scale } => (-(-(t - location) / scale).exp()).exp(),
        }
    }

    /// Survival function, evaluated directly rather than as `1 - cdf` so the
    /// upper tail keeps full relative precision.
    pub fn reliability(&self, t: f64) -> f64 {
        match *self {
            Self::Exponential { rate } => {
                if t <= 0.0 {
                    1.0
                } else {
                    (-rate * t).exp()
                }
            }
            Self::Weibull { shape, scale } => {
                if t <= 0.0 {
                    1.0
                } else {
                    (-(t / scale).powf(shape)).exp()
                }
            }
            Self::Frechet { shape, scale } => {
                if t <= 0.0 {
                    1.0
                } else {
                    -(-(t / scale).powf(-shape)).exp_m1()
                }
            }
            Self::Pareto { scale, shape } => {
                if t <= scale {
                    1.0
                } else {
                    (scale / t).powf(shape)
                }
            }
            Self::Power { domain, shape } => {
                if t <= 0.0 {
                    1.0
                } else if t >= 1.0 / domain {
                    0.0
                } else {
                    -(shape * (domain * t).ln()).exp_m1()
                }
            }
            Self::GumbelMin { location, scale } => (-((t - location) / scale).exp()).exp(),
            Self::ExtremeValue { location, scale } => -(-(-(t - location) / scale).exp()).exp_m1(),
        }
    }

    /// Inverse CDF on the open unit interval.
    pub fn quantile(&self, u: f64) -> Result<f64> {
        if !(u > 0.0 && u < 1.0) {
            return Err(Error::Domain(format!("quantile level must lie in (0, 1), got {u}")));
        }
        Ok(self.quantile_unchecked(u))
    }

    pub(crate) fn quantile_unchecked(&self, u: f64) -> f64 {
        // -ln(1 - u), accurate for small u
        let upper_log = || -(-u).ln_1p();
        match *self {
            Self::Exponential { rate } => upper_log() / rate,
            Self::Weibull { shape, scale } => scale * upper_log().powf(1.0 / shape),
            Self::Frechet { shape, scale } => scale * (-u.ln()).powf(-1.0 / shape),
            Self::Pareto { scale, shape } => scale * (upper_log() / shape).exp(),
            Self::Power { domain, shape } => u.powf(1.0 / shape) / domain,
            Self::GumbelMin { location, scale } => location + scale * upper_log().ln(),
            Self::ExtremeValue { location, scale } => location - scale * (-u.ln()).ln(),
        }
    }

    /// One inverse-transform variate.
    pub fn sample(&self, stream: &mut RandomStream) -> f64 {
        self.quantile_unchecked(stream.uniform())
    }

    /// Largest order `n` with a finite raw moment, or `None` when all orders
    /// are finite.
    pub fn max_moment_order(&self) -> Option<u32> {
        match *self {
            Self::Frechet { shape, .. } | Self::Pareto { shape, .. } => {
                // orders strictly below the shape
                let m = shape.ceil() - 1.0;
                Some(if m < 0.0 { 0 } else { m.min(u32::MAX as f64) as u32 })
            }
            _ => None,
        }
    }

    /// Raw moment `E[X^n]`.
    pub fn moment(&self, n: u32) -> Result<f64> {
        if let Some(max) = self.max_moment_order() {
            if n > max {
                return Err(Error::MomentDoesNotExist {
                    component: 0,
                    kind: self.to_string(),
                    order: n,
                    max_order: max,
                });
            }
        }
        if n == 0 {
            return Ok(1.0);
        }
        let nf = n as f64;
        Ok(match *self {
            Self::Exponential { rate } => (ln_gamma(nf + 1.0) - nf * rate.ln()).exp(),
            Self::Weibull { shape, scale } => scale.powf(nf) * gamma(1.0 + nf / shape),
            Self::Frechet { shape, scale } => scale.powf(nf) * gamma(1.0 - nf / shape),
            Self::Pareto { scale, shape } => scale.powf(nf) * shape / (shape - nf),
            Self::Power { domain, shape } => domain.powf(-nf) * shape / (shape + nf),
            // X = k ∓ λ ln E with E ~ Exp(1): cumulants of ln E are −γ and
            // (−1)^r (r−1)! ζ(r)
            Self::GumbelMin { location, scale } => moments_from_cumulants(n, |r| {
                if r == 1 {
                    location - EULER_GAMMA * scale
                } else {
                    (-scale).powi(r as i32) * factorial(r - 1) * zeta(r)
                }
            }),
            Self::ExtremeValue { location, scale } => moments_from_cumulants(n, |r| {
                if r == 1 {
                    location + EULER_GAMMA * scale
                } else {
                    scale.powi(r as i32) * factorial(r - 1) * zeta(r)
                }
            }),
        })
    }

    /// Maximal set of `t` on which `E[e^{tX}]` is finite.
    pub fn mgf_domain(&self) -> SupportInterval {
        let non_positive = SupportInterval::new(f64::NEG_INFINITY, 0.0, false, true);
        match *self {
            Self::Exponential { rate } => SupportInterval::open(f64::NEG_INFINITY, rate),
            Self::Weibull { shape, scale } => {
                if shape > 1.0 {
                    SupportInterval::real_line()
                } else if shape == 1.0 {
                    SupportInterval::open(f64::NEG_INFINITY, 1.0 / scale)
                } else {
                    non_positive
                }
            }
            Self::Frechet { .. } | Self::Pareto { .. } => non_positive,
            Self::Power { .. } => SupportInterval::real_line(),
            Self::GumbelMin { scale, .. } => SupportInterval::open(-1.0 / scale, f64::INFINITY),
            Self::ExtremeValue { scale, .. } => SupportInterval::open(f64::NEG_INFINITY, 1.0 / scale),
        }
    }

    /// `E[e^{tX}]` by adaptive quadrature over the support.
    pub fn mgf(&self, t: f64) -> Result<f64> {
        let domain = self.mgf_domain();
        if !domain.contains(t) {
            return Err(Error::Domain(format!("MGF of {self} is infinite at t = {t}; domain is {domain}")));
        }
        if t == 0.0 {
            return Ok(1.0);
        }
        let support = self.support();
        let centre = match *self {
            Self::GumbelMin { location, .. } | Self::ExtremeValue { location, .. } => location,
            _ => support.lo,
        };
        let f = |x: f64| {
            let p = self.pdf(x);
            if p == 0.0 {
                0.0
            } else {
                (t * x + p.ln()).exp()
            }
        };
        Ok(integrate_about(f, support.lo, support.hi, centre, 0.0, QUAD_REL_TOL)?.value)
    }
}

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// Riemann zeta at an integer `r ≥ 2`: partial sum plus Euler-Maclaurin tail.
fn zeta(r: u32) -> f64 {
    const N: f64 = 32.0;
    let rf = f64::from(r);
    let head: f64 = (1..32).rev().map(|j| f64::from(j).powi(-(r as i32))).sum();
    let tail = N.powf(1.0 - rf) / (rf - 1.0) + 0.5 * N.powf(-rf) + rf * N.powf(-rf - 1.0) / 12.0
        - rf * (rf + 1.0) * (rf + 2.0) * N.powf(-rf - 3.0) / 720.0
        + rf * (rf + 1.0) * (rf + 2.0) * (rf + 3.0) * (rf + 4.0) * N.powf(-rf - 5.0) / 30240.0;
    head + tail
}

/// Raw moment of order `n` from cumulants `kappa(1..=n)`.
fn moments_from_cumulants(n: u32, kappa: impl Fn(u32) -> f64) -> f64 {
    let n = n as usize;
    let k: Vec<f64> = (1..=n as u32).map(&kappa).collect();
    let mut mu = vec![1.0; n + 1];
    for m in 1..=n {
        let mut binom = 1.0;
        let mut acc = 0.0;
        for j in 1..=m {
            // binom = C(m−1, j−1)
            acc += binom * k[j - 1] * mu[m - j];
            binom *= (m - j) as f64 / j as f64;
        }
        mu[m] = acc;
    }
    mu[n]
}

impl fmt::Display for BaseDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Exponential { rate } => write!(f, "Exponential(rate {rate})"),
            Self::Weibull { shape, scale } => write!(f, "Weibull(shape {shape}, scale {scale})"),
            Self::Frechet { shape, scale } => write!(f, "Frechet(shape {shape}, scale {scale})"),
            Self::Pareto { scale, shape } => write!(f, "Pareto(scale {scale}, shape {shape})"),
            Self::Power { domain, shape } => write!(f, "Power(domain {domain}, shape {shape})"),
            Self::GumbelMin { location, scale } => write!(f, "GumbelMin(location {location}, scale {scale})"),
            Self::ExtremeValue { location, scale } => {
                write!(f, "ExtremeValue(location {location}, scale {scale})")
            }
        }
    }
}
