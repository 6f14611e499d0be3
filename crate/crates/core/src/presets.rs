//! Fixed parameter sets used by the verification suite and the CLI `check`
//! command.

use crate::family::{Family, FamilySpec};

fn spec(family: Family, shared: f64, vector: &[f64]) -> FamilySpec {
    FamilySpec::new(family, shared, vector.to_vec()).expect("preset parameters are valid")
}

/// One three-component member per family for the closed-form audit. Vector
/// entries avoid the values at which printed and corrected forms coincide
/// (unit scales, shape equal to scale).
pub fn audit_spec(family: Family) -> FamilySpec {
    match family {
        Family::Weibull => spec(family, 1.5, &[0.8, 1.6, 2.5]),
        Family::Frechet => spec(family, 4.5, &[1.5, 2.5, 4.0]),
        Family::Pareto => spec(family, 1.2, &[5.5, 7.0, 9.5]),
        Family::Power => spec(family, 0.5, &[1.0, 2.0, 3.5]),
        Family::Gumbel => spec(family, 1.2, &[0.5, 1.5, 3.0]),
        Family::ExtremeValue => spec(family, 0.8, &[-1.0, 0.5, 2.0]),
    }
}

/// The construction-equivalence cases: every family with two, three and
/// four components (18 cases).
pub fn ks_specs() -> Vec<FamilySpec> {
    let mut out = Vec::new();
    for family in Family::ALL {
        let vectors: [&[f64]; 3] = match family {
            Family::Weibull => [&[1.0, 2.0], &[0.5, 1.0, 2.0], &[0.5, 1.0, 1.5, 2.5]],
            Family::Frechet => [&[1.0, 1.5], &[1.0, 1.5, 2.5], &[1.0, 1.3, 1.8, 2.5]],
            Family::Pareto => [&[1.0, 3.0], &[1.0, 2.0, 4.0], &[1.0, 2.0, 3.0, 5.0]],
            Family::Power => [&[1.0, 3.0], &[0.5, 1.5, 3.0], &[0.5, 1.0, 2.0, 4.0]],
            Family::Gumbel => [&[0.0, 1.0], &[-1.0, 0.0, 1.5], &[-2.0, -0.5, 0.5, 2.0]],
            Family::ExtremeValue => [&[0.0, 1.0], &[-1.0, 0.0, 1.5], &[-2.0, -0.5, 0.5, 2.0]],
        };
        let shared = match family {
            Family::Weibull => 1.5,
            Family::Frechet => 2.0,
            Family::Pareto => 1.0,
            Family::Power => 0.5,
            Family::Gumbel | Family::ExtremeValue => 1.0,
        };
        out.extend(vectors.iter().map(|v| spec(family, shared, v)));
    }
    out
}

/// Two-component truths used by the synthetic recovery experiments.
pub fn recovery_spec(family: Family) -> FamilySpec {
    match family {
        Family::Weibull => spec(family, 2.0, &[1.0, 2.0]),
        Family::Frechet => spec(family, 8.0, &[1.0, 1.15]),
        Family::Pareto => spec(family, 1.0, &[8.0, 20.0]),
        Family::Power => spec(family, 0.5, &[1.0, 3.0]),
        Family::Gumbel => spec(family, 1.0, &[4.0, 6.0]),
        Family::ExtremeValue => spec(family, 1.0, &[4.0, 6.0]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_build() {
        for f in Family::ALL {
            assert_eq!(audit_spec(f).n(), 3);
            assert_eq!(recovery_spec(f).n(), 2);
            audit_spec(f).mixture().unwrap();
        }
        let ks = ks_specs();
        assert_eq!(ks.len(), 18);
        assert_eq!(ks.iter().filter(|s| s.n() == 4).count(), 6);
    }
}
