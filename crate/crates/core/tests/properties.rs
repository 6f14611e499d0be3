use mixhypo::presets::{audit_spec, ks_specs};
use mixhypo::verify::integrate;
use mixhypo::{BaseDistribution, Family, FamilySpec, HypoexpSpec, RandomStream};
use proptest::prelude::*;

fn all_specs() -> Vec<FamilySpec> {
    let mut specs = ks_specs();
    specs.extend(Family::ALL.iter().map(|&f| audit_spec(f)));
    specs
}

#[test]
fn base_densities_integrate_to_one() {
    let bases = [
        BaseDistribution::exponential(0.7).unwrap(),
        BaseDistribution::weibull(0.6, 2.0).unwrap(),
        BaseDistribution::weibull(3.0, 0.5).unwrap(),
        BaseDistribution::frechet(1.2, 1.0).unwrap(),
        BaseDistribution::pareto(2.0, 0.8).unwrap(),
        BaseDistribution::power(0.25, 0.7).unwrap(),
        BaseDistribution::gumbel_min(-3.0, 0.4).unwrap(),
        BaseDistribution::extreme_value(10.0, 2.5).unwrap(),
    ];
    for b in &bases {
        let s = b.support();
        let q = integrate(|t| b.pdf(t), s.lo, s.hi, 0.0, 1e-10).unwrap();
        assert!((q.value - 1.0).abs() < 1e-8, "{b}: {}", q.value);
    }
}

#[test]
fn family_densities_integrate_to_one_and_validate() {
    for spec in all_specs() {
        let m = spec.mixture().unwrap();
        let s = m.support();
        let q = integrate(|t| m.pdf(t), s.lo, s.hi, 0.0, 1e-10).unwrap();
        assert!((q.value - 1.0).abs() < 1e-8, "{spec:?}: {}", q.value);
        let report = m.validate(256).unwrap();
        assert!(report.passed(), "{spec:?}: {report:?}");
    }
}

#[test]
fn single_component_is_transformed_exponential() {
    // one rate α: F(t) = 1 - exp(-α g⁻¹(t)) on the increasing transforms,
    // exp(-α g⁻¹(t)) on the decreasing ones
    let cases = [
        (Family::Weibull, 1.7, 2.0, false),
        (Family::Frechet, 2.5, 1.5, true),
        (Family::Pareto, 1.5, 2.0, false),
        (Family::Power, 0.5, 3.0, true),
        (Family::Gumbel, 0.8, 1.0, false),
        (Family::ExtremeValue, 1.2, -0.5, true),
    ];
    for (family, shared, v, decreasing) in cases {
        let spec = FamilySpec::new(family, shared, vec![v]).unwrap();
        let alpha = spec.base_rates().unwrap().rates()[0];
        let m = spec.mixture().unwrap();
        assert_eq!(spec.weights().unwrap(), vec![1.0]);
        for u in [0.1, 0.4, 0.8] {
            let t = m.quantile(u).unwrap();
            let tail = (-alpha * spec.inverse_transform(t).unwrap()).exp();
            let expect = if decreasing { tail } else { 1.0 - tail };
            assert!((m.cdf(t).unwrap() - expect).abs() < 1e-12, "{family} at {t}");
        }
    }
}

#[test]
fn permuted_vectors_give_the_same_law() {
    let spec = FamilySpec::new(Family::Gumbel, 1.0, vec![2.0, -1.0, 0.5]).unwrap();
    let other = FamilySpec::new(Family::Gumbel, 1.0, vec![0.5, 2.0, -1.0]).unwrap();
    assert_eq!(spec, other);
    assert_eq!(spec.theta(), vec![1.0, -1.0, 0.5, 2.0]);
}

#[test]
fn coincident_entries_are_rejected() {
    let err = FamilySpec::new(Family::Weibull, 1.0, vec![1.0, 1.0]).unwrap_err();
    assert!(err.to_string().contains("separation"), "{err}");
}

#[test]
fn hypoexponential_two_stage_hand_values() {
    // rates (1, 2): f(t) = 2e^{-t} - 2e^{-2t}, weights (2, -1)
    let h = HypoexpSpec::new(vec![1.0, 2.0]).unwrap();
    assert_eq!(h.weights().unwrap(), vec![2.0, -1.0]);
    let spec = FamilySpec::from_rates(Family::Weibull, 1.0, &h).unwrap();
    let m = spec.mixture().unwrap();
    let t = 2f64.ln();
    assert!((m.pdf(t) - 0.5).abs() < 1e-12);
    assert!((m.cdf(t).unwrap() - 0.25).abs() < 1e-12);
    assert!((m.moment(1).unwrap() - 1.5).abs() < 1e-12);
}

#[test]
fn samples_respect_support() {
    let mut stream = RandomStream::new(3);
    let spec = FamilySpec::new(Family::Pareto, 1.0, vec![1.0, 2.0]).unwrap();
    assert!(spec.sample(5000, &mut stream).unwrap().iter().all(|&x| x >= 1.0));
    let spec = FamilySpec::new(Family::Power, 0.5, vec![1.0, 2.0]).unwrap();
    assert!(spec.sample(5000, &mut stream).unwrap().iter().all(|&x| x > 0.0 && x <= 2.0));
}

#[test]
fn sampling_is_deterministic_per_seed() {
    let spec = audit_spec(Family::Frechet);
    let a = spec.sample(100, &mut RandomStream::new(42)).unwrap();
    let b = spec.sample(100, &mut RandomStream::new(42)).unwrap();
    let c = spec.sample(100, &mut RandomStream::new(43)).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, c);
}

fn separated(values: &[f64], sep: f64) -> bool {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v.windows(2).all(|w| (w[1] - w[0]) / w[1].abs().max(w[0].abs()).max(1.0) >= sep)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn weights_close_and_cdf_is_monotone(
        family in prop::sample::select(Family::ALL.to_vec()),
        shared in 0.5f64..3.0,
        raw in prop::collection::vec(0.3f64..4.0, 2..6),
    ) {
        prop_assume!(separated(&raw, 0.05));
        let vector: Vec<f64> = if family.positive_vector() { raw } else { raw.iter().map(|v| v - 2.0).collect() };
        let spec = FamilySpec::new(family, shared, vector).unwrap();
        let w = spec.weights().unwrap();
        let sum: f64 = w.iter().sum();
        prop_assert!((sum - 1.0).abs() <= 1e-10, "sum {}", sum);
        let m = spec.mixture().unwrap();
        let mut last = 0.0;
        for j in 1..20 {
            let t = m.quantile(j as f64 / 20.0).unwrap();
            let f = m.cdf(t).unwrap();
            prop_assert!(f + 1e-9 >= last);
            last = f;
        }
    }
}
