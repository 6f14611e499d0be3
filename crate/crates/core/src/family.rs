//! The six mixed hypoexponential-G families.
//!
//! Each family is the law of `Z = g(S)` where `S` is a sum of independent
//! exponentials with distinct rates and `g` is a fixed monotone map. Because
//! the hypoexponential density is `Σ f_{X_i} / P_i` with
//! `P_i = Π_{j≠i} (1 − α_i/α_j)`, pushing every component through the same
//! `g` gives a signed mixture of `g(X_i)` laws with the same weights.
//!
//! | family | shared      | vector          | component                | `g(s)`       | rate `α_i`      |
//! |--------|-------------|-----------------|--------------------------|--------------|-----------------|
//! | MHW    | shape k     | scales λ_i      | Weibull(k, λ_i)          | s^{1/k}      | λ_i^{−k}        |
//! | MHF    | shape k     | scales λ_i      | Frechet(k, λ_i)          | s^{−1/k}     | λ_i^{k}         |
//! | MHT    | scale k     | shapes λ_i      | Pareto(k, λ_i)           | k·e^{s}      | λ_i             |
//! | MHP    | domain k    | shapes λ_i      | Power(k, λ_i)            | e^{−s}/k     | λ_i             |
//! | MHG    | scale λ     | locations k_i   | GumbelMin(k_i, λ)        | λ·ln s       | e^{−k_i/λ}      |
//! | MHE    | scale λ     | locations k_i   | ExtremeValue(k_i, λ)     | −λ·ln s      | e^{k_i/λ}       |

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::base::BaseDistribution;
use crate::dd::{self, Dd};
use crate::error::{Error, Result};
use crate::mixture::SignedMixture;
use crate::rng::RandomStream;

pub const DEFAULT_SEP_MIN: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "MHW")]
    Weibull,
    #[serde(rename = "MHF")]
    Frechet,
    #[serde(rename = "MHT")]
    Pareto,
    #[serde(rename = "MHP")]
    Power,
    #[serde(rename = "MHG")]
    Gumbel,
    #[serde(rename = "MHE")]
    ExtremeValue,
}

impl Family {
    pub const ALL: [Family; 6] =
        [Family::Weibull, Family::Frechet, Family::Pareto, Family::Power, Family::Gumbel, Family::ExtremeValue];

    pub fn code(self) -> &'static str {
        match self {
            Family::Weibull => "MHW",
            Family::Frechet => "MHF",
            Family::Pareto => "MHT",
            Family::Power => "MHP",
            Family::Gumbel => "MHG",
            Family::ExtremeValue => "MHE",
        }
    }

    /// Whether the vector entries must be positive (scales or shapes) rather
    /// than arbitrary locations.
    pub fn positive_vector(self) -> bool {
        !matches!(self, Family::Gumbel | Family::ExtremeValue)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.code().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Config(format!("unknown family {s:?}; expected one of MHW, MHF, MHT, MHP, MHG, MHE")))
    }
}

fn relative_separation(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

fn check_separation(values: &[f64], sep_min: f64) -> Result<()> {
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            let s = relative_separation(values[i], values[j]);
            if !(s >= sep_min) {
                return Err(Error::Separation { a: values[i], b: values[j], separation: s, sep_min });
            }
        }
    }
    Ok(())
}

/// `1 − (a/b)^k` as `−expm1(k ln1p((a − b)/b))`, never rounding the ratio.
fn one_minus_power(a: f64, b: f64, k: f64) -> Dd {
    let q = Dd::diff(a, b) / Dd::from(b);
    -dd::expm1(dd::ln1p(q) * Dd::from(k))
}

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

/// Distinct exponential rates of a hypoexponential law, stored ascending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypoexpSpec {
    rates: Vec<f64>,
}

impl HypoexpSpec {
    pub fn new(rates: Vec<f64>) -> Result<Self> {
        Self::with_separation(rates, DEFAULT_SEP_MIN)
    }

    pub fn with_separation(rates: Vec<f64>, sep_min: f64) -> Result<Self> {
        if rates.is_empty() {
            return Err(Error::Construction("at least one rate is required".into()));
        }
        for &r in &rates {
            if !(r > 0.0 && r.is_finite()) {
                return Err(Error::Positivity { name: "rate".into(), value: r });
            }
        }
        let rates = sorted(rates);
        check_separation(&rates, sep_min)?;
        Ok(Self { rates })
    }

    pub fn rates(&self) -> &[f64] {
        &self.rates
    }

    /// `1/P_i` with `P_i = Π_{j≠i} (1 − α_i/α_j)`.
    pub fn weights(&self) -> Result<Vec<f64>> {
        weights_from(self.rates.len(), |i, j| {
            let (ai, aj) = (self.rates[i], self.rates[j]);
            Dd::diff(aj, ai) / Dd::from(aj)
        })
    }

    pub fn mean(&self) -> f64 {
        self.rates.iter().map(|a| 1.0 / a).sum()
    }

    /// One draw of `S = Σ X_i`, `X_i ~ Exp(α_i)`.
    pub fn sample(&self, stream: &mut RandomStream) -> f64 {
        self.rates.iter().map(|a| stream.exponential() / a).sum()
    }
}

/// Weights `1 / Π_{j≠i} factor(i, j)`, accumulated in double-double.
fn weights_from(n: usize, factor: impl Fn(usize, usize) -> Dd) -> Result<Vec<f64>> {
    let mut w = Vec::with_capacity(n);
    for i in 0..n {
        let p = (0..n).filter(|&j| j != i).fold(Dd::ONE, |acc, j| acc * factor(i, j));
        let wi = (Dd::ONE / p).to_f64();
        let p = p.to_f64();
        if !wi.is_finite() {
            return Err(Error::Construction(format!("weight {i} is not finite (product {p}); parameters too close")));
        }
        w.push(wi);
    }
    Ok(w)
}

/// A member of one of the six families in canonical form: the vector entries
/// are sorted ascending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilySpec {
    family: Family,
    shared: f64,
    vector: Vec<f64>,
}

impl FamilySpec {
    pub fn new(family: Family, shared: f64, vector: Vec<f64>) -> Result<Self> {
        Self::with_separation(family, shared, vector, DEFAULT_SEP_MIN)
    }

    pub fn with_separation(family: Family, shared: f64, vector: Vec<f64>, sep_min: f64) -> Result<Self> {
        if vector.is_empty() {
            return Err(Error::Construction("family vector must have at least one entry".into()));
        }
        if !(shared > 0.0 && shared.is_finite()) {
            return Err(Error::Positivity { name: format!("{family} shared parameter"), value: shared });
        }
        for &v in &vector {
            if family.positive_vector() {
                if !(v > 0.0 && v.is_finite()) {
                    return Err(Error::Positivity { name: format!("{family} vector entry"), value: v });
                }
            } else if !v.is_finite() {
                return Err(Error::Domain(format!("{family} location must be finite, got {v}")));
            }
        }
        let vector = sorted(vector);
        check_separation(&vector, sep_min)?;
        Ok(Self { family, shared, vector })
    }

    /// The family member whose construction uses the given exponential rates.
    pub fn from_rates(family: Family, shared: f64, rates: &HypoexpSpec) -> Result<Self> {
        let vector = rates
            .rates()
            .iter()
            .map(|&a| match family {
                Family::Weibull => a.powf(-1.0 / shared),
                Family::Frechet => a.powf(1.0 / shared),
                Family::Pareto | Family::Power => a,
                Family::Gumbel => -shared * a.ln(),
                Family::ExtremeValue => shared * a.ln(),
            })
            .collect();
        Self::new(family, shared, vector)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn shared(&self) -> f64 {
        self.shared
    }

    pub fn vector(&self) -> &[f64] {
        &self.vector
    }

    pub fn n(&self) -> usize {
        self.vector.len()
    }

    /// Parameter vector `[shared, v_1, .., v_n]`.
    pub fn theta(&self) -> Vec<f64> {
        std::iter::once(self.shared).chain(self.vector.iter().copied()).collect()
    }

    pub fn from_theta(family: Family, theta: &[f64], sep_min: f64) -> Result<Self> {
        if theta.len() < 2 {
            return Err(Error::Construction("parameter vector too short".into()));
        }
        Self::with_separation(family, theta[0], theta[1..].to_vec(), sep_min)
    }

    pub fn component(&self, i: usize) -> Result<BaseDistribution> {
        let (s, v) = (self.shared, self.vector[i]);
        match self.family {
            Family::Weibull => BaseDistribution::weibull(s, v),
            Family::Frechet => BaseDistribution::frechet(s, v),
            Family::Pareto => BaseDistribution::pareto(s, v),
            Family::Power => BaseDistribution::power(s, v),
            Family::Gumbel => BaseDistribution::gumbel_min(v, s),
            Family::ExtremeValue => BaseDistribution::extreme_value(v, s),
        }
    }

    /// The weights `1/PW_i, 1/PF_i, ..`, each factor `1 − r_ij` evaluated
    /// without forming `r_ij` when it is close to one.
    pub fn weights(&self) -> Result<Vec<f64>> {
        let v = &self.vector;
        let s = self.shared;
        let n = v.len();
        match self.family {
            // 1 − (λ_j/λ_i)^k
            Family::Weibull => weights_from(n, |i, j| one_minus_power(v[j], v[i], s)),
            // 1 − (λ_i/λ_j)^k
            Family::Frechet => weights_from(n, |i, j| one_minus_power(v[i], v[j], s)),
            // 1 − λ_i/λ_j
            Family::Pareto | Family::Power => weights_from(n, |i, j| Dd::diff(v[j], v[i]) / Dd::from(v[j])),
            // 1 − e^{(k_j − k_i)/λ}
            Family::Gumbel => weights_from(n, |i, j| -dd::expm1(Dd::diff(v[j], v[i]) / Dd::from(s))),
            // 1 − e^{(k_i − k_j)/λ}
            Family::ExtremeValue => weights_from(n, |i, j| -dd::expm1(Dd::diff(v[i], v[j]) / Dd::from(s))),
        }
    }

    /// The family density as a signed mixture.
    pub fn mixture(&self) -> Result<SignedMixture> {
        let components = (0..self.n()).map(|i| self.component(i)).collect::<Result<Vec<_>>>()?;
        SignedMixture::new(components, self.weights()?)
    }

    /// Exponential rates whose sum, pushed through [`FamilySpec::transform`],
    /// has this law.
    pub fn base_rates(&self) -> Result<HypoexpSpec> {
        let s = self.shared;
        let rates = self
            .vector
            .iter()
            .map(|&v| match self.family {
                Family::Weibull => v.powf(-s),
                Family::Frechet => v.powf(s),
                Family::Pareto | Family::Power => v,
                Family::Gumbel => (-v / s).exp(),
                Family::ExtremeValue => (v / s).exp(),
            })
            .collect();
        HypoexpSpec::new(rates)
    }

    /// The monotone map `g` with `Z = g(S)`.
    pub fn transform(&self, s: f64) -> Result<f64> {
        if !(s > 0.0) {
            return Err(Error::Domain(format!("transform argument must be > 0, got {s}")));
        }
        Ok(self.transform_unchecked(s))
    }

    fn transform_unchecked(&self, s: f64) -> f64 {
        let k = self.shared;
        match self.family {
            Family::Weibull => s.powf(1.0 / k),
            Family::Frechet => s.powf(-1.0 / k),
            Family::Pareto => k * s.exp(),
            Family::Power => (-s).exp() / k,
            Family::Gumbel => k * s.ln(),
            Family::ExtremeValue => -k * s.ln(),
        }
    }

    /// `g^{-1}(z)`, defined on the interior of the family support.
    pub fn inverse_transform(&self, z: f64) -> Result<f64> {
        let k = self.shared;
        let s = match self.family {
            Family::Weibull => z.powf(k),
            Family::Frechet => z.powf(-k),
            Family::Pareto => (z / k).ln(),
            Family::Power => -(k * z).ln(),
            Family::Gumbel => (z / k).exp(),
            Family::ExtremeValue => (-z / k).exp(),
        };
        if s > 0.0 && s.is_finite() {
            Ok(s)
        } else {
            Err(Error::Domain(format!("{z} is outside the support of {self}")))
        }
    }

    /// `count` draws of `g(S)` with `S` the hypoexponential sum.
    pub fn sample(&self, count: usize, stream: &mut RandomStream) -> Result<Vec<f64>> {
        let rates = self.base_rates()?;
        Ok((0..count).map(|_| self.transform_unchecked(rates.sample(stream))).collect())
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(shared {}, vector {:?})", self.family, self.shared, self.vector)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::ks::{ks_critical_1pct, ks_distance};
    use std::f64::consts::LN_2;

    /// Lagrange-basis oracle: 1/P_i from exact rational arithmetic on small
    /// integer rates.
    fn rational_weights(rates: &[i64]) -> Vec<f64> {
        rates
            .iter()
            .enumerate()
            .map(|(i, &ai)| {
                let (mut num, mut den) = (1i64, 1i64);
                for (j, &aj) in rates.iter().enumerate() {
                    if j != i {
                        num *= aj;
                        den *= aj - ai;
                    }
                }
                num as f64 / den as f64
            })
            .collect()
    }

    #[test]
    fn hypoexp_weight_examples() {
        let w = HypoexpSpec::new(vec![1.0, 2.0]).unwrap().weights().unwrap();
        assert_eq!(w, rational_weights(&[1, 2]));
        assert_eq!(w, vec![2.0, -1.0]);
        let w = HypoexpSpec::new(vec![5.0]).unwrap().weights().unwrap();
        assert_eq!(w, vec![1.0]);
        let w = HypoexpSpec::new(vec![1.0, 2.0, 3.0]).unwrap().weights().unwrap();
        let oracle = rational_weights(&[1, 2, 3]);
        assert_eq!(oracle, vec![3.0, -3.0, 1.0]);
        for (a, b) in w.iter().zip(&oracle) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(matches!(HypoexpSpec::new(vec![1.0, 1.0 + 1e-9]), Err(Error::Separation { .. })));
    }

    #[test]
    fn mhw_hand_example() {
        let spec = FamilySpec::new(Family::Weibull, 1.0, vec![1.0, 0.5]).unwrap();
        // canonical order puts λ = 0.5 first
        assert_eq!(spec.vector(), &[0.5, 1.0]);
        assert_eq!(spec.weights().unwrap(), vec![-1.0, 2.0]);
        let m = spec.mixture().unwrap();
        assert_eq!(m.components()[0], BaseDistribution::weibull(1.0, 0.5).unwrap());
        assert!((m.pdf(LN_2) - 0.5).abs() < 1e-15);
        assert!((m.cdf(LN_2).unwrap() - 0.25).abs() < 1e-15);
        assert!((m.moment(1).unwrap() - 1.5).abs() < 1e-15);
    }

    #[test]
    fn mht_hand_example() {
        let spec = FamilySpec::new(Family::Pareto, 1.0, vec![1.0, 2.0]).unwrap();
        assert_eq!(spec.weights().unwrap(), vec![2.0, -1.0]);
        // F = (1 - 1/t)^2
        let f = spec.mixture().unwrap().cdf(2.0).unwrap();
        assert!((f - 0.25).abs() < 1e-15);
    }

    #[test]
    fn mhg_hand_example() {
        let spec = FamilySpec::new(Family::Gumbel, 1.0, vec![0.0, -LN_2]).unwrap();
        assert_eq!(spec.vector(), &[-LN_2, 0.0]);
        let w = spec.weights().unwrap();
        assert!((w[0] + 1.0).abs() < 1e-15 && (w[1] - 2.0).abs() < 1e-15, "{w:?}");
    }

    #[test]
    fn single_component_families() {
        for fam in Family::ALL {
            let spec = FamilySpec::new(fam, 1.5, vec![0.7]).unwrap();
            assert_eq!(spec.weights().unwrap(), vec![1.0]);
            let m = spec.mixture().unwrap();
            assert_eq!(m.len(), 1);
            let c = spec.component(0).unwrap();
            for u in [0.1, 0.5, 0.9] {
                let t = c.quantile(u).unwrap();
                assert_eq!(m.pdf(t), c.pdf(t));
                assert_eq!(m.cdf(t).unwrap(), c.cdf(t));
            }
        }
    }

    #[test]
    fn base_rate_examples() {
        let spec = FamilySpec::new(Family::Weibull, 1.0, vec![1.0, 0.5]).unwrap();
        assert_eq!(spec.base_rates().unwrap().rates(), &[1.0, 2.0]);
        let spec = FamilySpec::new(Family::Pareto, 3.0, vec![1.0, 2.0]).unwrap();
        assert_eq!(spec.base_rates().unwrap().rates(), &[1.0, 2.0]);
        let spec = FamilySpec::new(Family::ExtremeValue, 2.0, vec![0.0, 2.0 * 3f64.ln()]).unwrap();
        let r = spec.base_rates().unwrap();
        assert!((r.rates()[0] - 1.0).abs() < 1e-15 && (r.rates()[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn rate_round_trip() {
        let rates = HypoexpSpec::new(vec![0.3, 1.1, 2.9]).unwrap();
        for fam in Family::ALL {
            let spec = FamilySpec::from_rates(fam, 1.7, &rates).unwrap();
            let back = spec.base_rates().unwrap();
            for (a, b) in back.rates().iter().zip(rates.rates()) {
                assert!((a - b).abs() <= 1e-12 * b, "{fam}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn transform_examples() {
        let w = FamilySpec::new(Family::Weibull, 2.0, vec![1.0]).unwrap();
        assert!((w.transform(4.0).unwrap() - 2.0).abs() < 1e-15);
        let t = FamilySpec::new(Family::Pareto, 1.0, vec![1.0]).unwrap();
        assert!((t.transform(LN_2).unwrap() - 2.0).abs() < 1e-15);
        assert!(t.transform(0.0).is_err());
        assert!(t.transform(-1.0).is_err());
        let p = FamilySpec::new(Family::Power, 1.0, vec![1.0]).unwrap();
        let mut prev = f64::INFINITY;
        for s in [0.01, 0.1, 1.0, 10.0, 100.0] {
            let z = p.transform(s).unwrap();
            assert!(z < prev && z > 0.0);
            prev = z;
        }
        for fam in Family::ALL {
            let spec = FamilySpec::new(fam, 1.3, vec![0.8, 2.0]).unwrap();
            for s in [0.05, 0.7, 3.0] {
                let z = spec.transform(s).unwrap();
                let back = spec.inverse_transform(z).unwrap();
                assert!((back - s).abs() < 1e-12 * s, "{fam}");
            }
        }
    }

    #[test]
    fn weights_sum_to_one() {
        for fam in Family::ALL {
            let spec = FamilySpec::new(fam, 1.2, vec![0.4, 0.9, 1.7, 3.1, 4.4]).unwrap();
            let s: f64 = spec.weights().unwrap().iter().sum();
            assert!((s - 1.0).abs() < 1e-10, "{fam}: {s}");
        }
    }

    #[test]
    fn construction_rejects_bad_parameters() {
        assert!(matches!(FamilySpec::new(Family::Weibull, 1.0, vec![1.0, 1.0]), Err(Error::Separation { .. })));
        assert!(matches!(FamilySpec::new(Family::Weibull, -1.0, vec![1.0, 2.0]), Err(Error::Positivity { .. })));
        assert!(matches!(FamilySpec::new(Family::Pareto, 1.0, vec![-1.0, 2.0]), Err(Error::Positivity { .. })));
        assert!(FamilySpec::new(Family::Gumbel, 1.0, vec![-3.0, 2.0]).is_ok());
        assert!(FamilySpec::with_separation(Family::Weibull, 1.0, vec![1.0, 1.01], 0.05).is_err());
        assert_eq!("mhe".parse::<Family>().unwrap(), Family::ExtremeValue);
        assert!("MHX".parse::<Family>().is_err());
    }

    #[test]
    fn sampling_matches_mixture_mhw() {
        let spec = FamilySpec::new(Family::Weibull, 1.0, vec![1.0, 0.5]).unwrap();
        let m = spec.mixture().unwrap();
        let mut s = RandomStream::new(2024);
        let xs = spec.sample(100_000, &mut s).unwrap();
        let d = ks_distance(&xs, |t| m.cdf(t).unwrap());
        assert!(d < 0.0065 && d < ks_critical_1pct(xs.len()), "{d}");
    }

    #[test]
    fn sampling_is_reproducible() {
        let spec = FamilySpec::new(Family::Frechet, 2.0, vec![1.0, 3.0]).unwrap();
        let a = spec.sample(100, &mut RandomStream::new(5)).unwrap();
        let b = spec.sample(100, &mut RandomStream::new(5)).unwrap();
        assert_eq!(a, b);
    }
}
