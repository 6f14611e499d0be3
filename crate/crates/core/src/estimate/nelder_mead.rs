//! Nelder-Mead simplex search with dimension-adaptive coefficients.
//!
//! Infeasible points are expressed by returning `+inf` from the objective;
//! the simplex simply treats them as worst vertices.

#[derive(Debug, Clone)]
pub struct NelderMead {
    pub max_iter: usize,
    /// Relative spread of objective values across the simplex.
    pub f_tol: f64,
    /// Absolute floor added to the objective spread tolerance.
    pub f_abs: f64,
    /// Absolute spread of vertices, in the optimiser's coordinates.
    pub x_tol: f64,
}

#[derive(Debug, Clone)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub f: f64,
    pub iterations: usize,
    pub converged: bool,
}

impl Default for NelderMead {
    fn default() -> Self {
        Self { max_iter: 2000, f_tol: 1e-8, f_abs: 0.0, x_tol: 1e-8 }
    }
}

impl NelderMead {
    /// Minimise `f` from `x0` with initial edge lengths `step`.
    pub fn minimize<F>(&self, mut f: F, x0: &[f64], step: &[f64]) -> Minimum
    where
        F: FnMut(&[f64]) -> f64,
    {
        let n = x0.len();
        if n == 0 {
            return Minimum { x: vec![], f: f(&[]), iterations: 0, converged: true };
        }
        let nf = n as f64;
        let (alpha, gamma, rho, sigma) =
            if n >= 2 { (1.0, 1.0 + 2.0 / nf, 0.75 - 1.0 / (2.0 * nf), 1.0 - 1.0 / nf) } else { (1.0, 2.0, 0.5, 0.5) };

        let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
        simplex.push(x0.to_vec());
        for i in 0..n {
            let mut v = x0.to_vec();
            v[i] += step[i];
            simplex.push(v);
        }
        let mut values: Vec<f64> = simplex.iter().map(|v| f(v)).collect();

        let mut iterations = 0;
        let mut converged = false;
        while iterations < self.max_iter {
            let mut order: Vec<usize> = (0..=n).collect();
            order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
            simplex = order.iter().map(|&i| simplex[i].clone()).collect();
            values = order.iter().map(|&i| values[i]).collect();

            let best = values[0];
            let worst = values[n];
            let f_spread = (worst - best).abs();
            let x_spread = simplex[1..]
                .iter()
                .flat_map(|v| v.iter().zip(&simplex[0]).map(|(a, b)| (a - b).abs()))
                .fold(0.0f64, f64::max);
            if best.is_finite()
                && f_spread <= self.f_tol * best.abs() + self.f_abs.max(1e-300)
                && x_spread <= self.x_tol
            {
                converged = true;
                break;
            }
            iterations += 1;

            let mut centroid = vec![0.0; n];
            for v in &simplex[..n] {
                for (c, x) in centroid.iter_mut().zip(v) {
                    *c += x / nf;
                }
            }
            let along =
                |t: f64| -> Vec<f64> { centroid.iter().zip(&simplex[n]).map(|(c, w)| c + t * (c - w)).collect() };

            let xr = along(alpha);
            let fr = f(&xr);
            if fr < values[0] {
                let xe = along(alpha * gamma);
                let fe = f(&xe);
                if fe < fr {
                    simplex[n] = xe;
                    values[n] = fe;
                } else {
                    simplex[n] = xr;
                    values[n] = fr;
                }
                continue;
            }
            if fr < values[n - 1] {
                simplex[n] = xr;
                values[n] = fr;
                continue;
            }
            let (xc, fc) = if fr < values[n] {
                let xc = along(alpha * rho);
                let fc = f(&xc);
                (xc, fc)
            } else {
                let xc = along(-rho);
                let fc = f(&xc);
                (xc, fc)
            };
            if fc < values[n].min(fr) {
                simplex[n] = xc;
                values[n] = fc;
                continue;
            }
            // shrink towards the best vertex
            let best_v = simplex[0].clone();
            for i in 1..=n {
                let v: Vec<f64> = best_v.iter().zip(&simplex[i]).map(|(b, x)| b + sigma * (x - b)).collect();
                values[i] = f(&v);
                simplex[i] = v;
            }
        }

        let (ib, _) = values.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).expect("non-empty simplex");
        Minimum { x: simplex[ib].clone(), f: values[ib], iterations, converged }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rosenbrock() {
        let nm = NelderMead { max_iter: 10_000, f_tol: 1e-14, f_abs: 0.0, x_tol: 1e-10 };
        let f = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let m = nm.minimize(f, &[-1.2, 1.0], &[0.5, 0.5]);
        assert!(m.converged);
        assert!((m.x[0] - 1.0).abs() < 1e-6 && (m.x[1] - 1.0).abs() < 1e-6, "{:?}", m.x);
    }

    #[test]
    fn respects_infeasible_region() {
        let nm = NelderMead::default();
        let f = |x: &[f64]| if x[0] < 2.0 { f64::INFINITY } else { (x[0] - 1.0).powi(2) };
        let m = nm.minimize(f, &[3.0], &[0.5]);
        assert!(m.x[0] >= 2.0 && m.x[0] < 2.0 + 1e-6, "{:?}", m.x);
    }

    #[test]
    fn quadratic_bowl_in_five_dimensions() {
        let nm = NelderMead { max_iter: 20_000, f_tol: 1e-15, f_abs: 0.0, x_tol: 1e-9 };
        let f = |x: &[f64]| x.iter().enumerate().map(|(i, v)| (i as f64 + 1.0) * (v - 0.5).powi(2)).sum::<f64>() + 1.0;
        let m = nm.minimize(f, &[0.0; 5], &[0.3; 5]);
        assert!(m.x.iter().all(|v| (v - 0.5).abs() < 1e-5), "{:?}", m.x);
    }
}
