use mixhypo::estimate::{fit, log_likelihood, FitConfig, Method};
use mixhypo::{Error, Family, FamilySpec, RandomStream};

fn draws(spec: &FamilySpec, n: usize, seed: u64) -> Vec<f64> {
    spec.sample(n, &mut RandomStream::new(seed)).unwrap()
}

fn max_rel_err(fit: &FamilySpec, truth: &FamilySpec) -> f64 {
    fit.theta().iter().zip(truth.theta()).map(|(a, b)| (a - b).abs() / b.abs()).fold(0.0, f64::max)
}

#[test]
fn mle_dominates_truth_likelihood() {
    let truth = FamilySpec::new(Family::Gumbel, 1.0, vec![4.0, 6.0]).unwrap();
    let data = draws(&truth, 3000, 11);
    let cfg = FitConfig::new(Method::Mle, Family::Gumbel, 2);
    let r = fit(&data, &cfg, &mut RandomStream::new(1)).unwrap();
    assert!(r.objective >= log_likelihood(&truth, &data));
    assert!((r.objective - log_likelihood(&r.params, &data)).abs() < 1e-9 * r.objective.abs());
}

#[test]
fn mom_with_free_shared_parameter() {
    let cases = [(Family::Power, 0.5, vec![1.0, 3.0]), (Family::ExtremeValue, 1.0, vec![4.0, 6.0])];
    for (family, shared, v) in cases {
        let truth = FamilySpec::new(family, shared, v).unwrap();
        let data = draws(&truth, 10_000, 1001);
        let cfg = FitConfig::new(Method::Mom, family, 2);
        let r = fit(&data, &cfg, &mut RandomStream::new(8)).unwrap();
        assert!(r.converged, "{family}: {r:?}");
        assert!(max_rel_err(&r.params, &truth) < 0.2, "{family}: {:?}", r.params);
    }
}

#[test]
fn fixed_parameters_stay_fixed() {
    let truth = FamilySpec::new(Family::Weibull, 2.0, vec![1.0, 2.0]).unwrap();
    let data = draws(&truth, 2000, 5);
    let cfg = FitConfig::new(Method::Mle, Family::Weibull, 2).with_fixed_shared(2.0);
    let r = fit(&data, &cfg, &mut RandomStream::new(2)).unwrap();
    assert_eq!(r.params.shared(), 2.0);
}

#[test]
fn fits_are_deterministic() {
    let truth = FamilySpec::new(Family::Power, 0.5, vec![1.0, 3.0]).unwrap();
    let data = draws(&truth, 1000, 5);
    let cfg = FitConfig::new(Method::Mle, Family::Power, 2);
    let a = fit(&data, &cfg, &mut RandomStream::new(2)).unwrap();
    let b = fit(&data, &cfg, &mut RandomStream::new(2)).unwrap();
    assert_eq!(a, b);
}

#[test]
fn too_few_points() {
    let cfg = FitConfig::new(Method::Mle, Family::Weibull, 3);
    let err = fit(&[1.0, 2.0, 3.0], &cfg, &mut RandomStream::new(0)).unwrap_err();
    assert!(matches!(err, Error::InsufficientData { got: 3, .. }), "{err}");
}
