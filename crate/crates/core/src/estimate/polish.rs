//! Local refinement after the simplex: damped Newton on a scalar objective
//! and Levenberg-Marquardt on a residual vector, both on finite differences.

use nalgebra::{DMatrix, DVector};

pub(super) struct Polished {
    pub x: Vec<f64>,
    pub f: f64,
    pub iterations: usize,
}

const FD_STEP: f64 = 1e-4;

fn shifted(x: &[f64], moves: &[(usize, f64)]) -> Vec<f64> {
    let mut y = x.to_vec();
    for &(i, d) in moves {
        y[i] += d;
    }
    y
}

/// Solve `(A + μ I) d = b`, raising `μ` until `A + μ I` is positive definite.
fn damped_solve(a: &DMatrix<f64>, b: &DVector<f64>, mu: &mut f64) -> Option<DVector<f64>> {
    let p = a.nrows();
    let scale = (0..p).map(|i| a[(i, i)].abs()).fold(0.0, f64::max).max(1e-300);
    for _ in 0..40 {
        let m = a + DMatrix::identity(p, p) * (*mu * scale);
        if let Some(ch) = m.cholesky() {
            return Some(ch.solve(b));
        }
        *mu = if *mu == 0.0 { 1e-10 } else { *mu * 10.0 };
    }
    None
}

/// Minimise `f` near `x0`. Stops as soon as a step fails to decrease `f`
/// or a finite-difference evaluation leaves the feasible region.
pub(super) fn newton<F>(f: F, x0: &[f64], max_iter: usize) -> Polished
where
    F: Fn(&[f64]) -> f64,
{
    let p = x0.len();
    let mut x = x0.to_vec();
    let mut fx = f(&x);
    let mut iterations = 0;
    if p == 0 || !fx.is_finite() {
        return Polished { x, f: fx, iterations };
    }
    'outer: while iterations < max_iter {
        iterations += 1;
        // per-coordinate steps, shortened where a probe leaves the feasible region
        let mut h = vec![FD_STEP; p];
        let mut g = DVector::zeros(p);
        let mut hess = DMatrix::zeros(p, p);
        for i in 0..p {
            let (fp, fm) = loop {
                let fp = f(&shifted(&x, &[(i, h[i])]));
                let fm = f(&shifted(&x, &[(i, -h[i])]));
                if fp.is_finite() && fm.is_finite() {
                    break (fp, fm);
                }
                h[i] *= 0.25;
                if h[i] < 1e-10 {
                    break 'outer;
                }
            };
            g[i] = (fp - fm) / (2.0 * h[i]);
            hess[(i, i)] = (fp - 2.0 * fx + fm) / (h[i] * h[i]);
        }
        for i in 0..p {
            for j in 0..i {
                let (hi, hj) = (h[i], h[j]);
                let fpp = f(&shifted(&x, &[(i, hi), (j, hj)]));
                let fpm = f(&shifted(&x, &[(i, hi), (j, -hj)]));
                let fmp = f(&shifted(&x, &[(i, -hi), (j, hj)]));
                let fmm = f(&shifted(&x, &[(i, -hi), (j, -hj)]));
                if ![fpp, fpm, fmp, fmm].iter().all(|v| v.is_finite()) {
                    break 'outer;
                }
                let v = (fpp - fpm - fmp + fmm) / (4.0 * hi * hj);
                hess[(i, j)] = v;
                hess[(j, i)] = v;
            }
        }
        let mut mu = 0.0;
        let Some(step) = damped_solve(&hess, &(-&g), &mut mu) else {
            break;
        };
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..30 {
            let trial: Vec<f64> = x.iter().zip(step.iter()).map(|(a, d)| a + t * d).collect();
            let ft = f(&trial);
            if ft < fx {
                let gain = fx - ft;
                x = trial;
                fx = ft;
                accepted = true;
                if gain <= 1e-15 * fx.abs() || t * step.norm() < 1e-12 {
                    break 'outer;
                }
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    Polished { x, f: fx, iterations }
}

/// Minimise `‖r(x)‖²` near `x0`; `r` returns `None` off the feasible region.
pub(super) fn gauss_newton<R>(r: R, x0: &[f64], max_iter: usize) -> Polished
where
    R: Fn(&[f64]) -> Option<Vec<f64>>,
{
    let p = x0.len();
    let norm2 = |v: &[f64]| v.iter().map(|a| a * a).sum::<f64>();
    let mut x = x0.to_vec();
    let Some(mut rx) = r(&x) else {
        return Polished { x, f: f64::INFINITY, iterations: 0 };
    };
    let mut fx = norm2(&rx);
    let mut iterations = 0;
    if p == 0 {
        return Polished { x, f: fx, iterations };
    }
    let m = rx.len();
    let h = 1e-6;
    let mut mu = 1e-6;
    while iterations < max_iter && fx > 0.0 {
        iterations += 1;
        let mut jac = DMatrix::zeros(m, p);
        for i in 0..p {
            let (Some(up), Some(dn)) = (r(&shifted(&x, &[(i, h)])), r(&shifted(&x, &[(i, -h)]))) else {
                return Polished { x, f: fx, iterations };
            };
            for k in 0..m {
                jac[(k, i)] = (up[k] - dn[k]) / (2.0 * h);
            }
        }
        let res = DVector::from_column_slice(&rx);
        let jtj = jac.transpose() * &jac;
        let rhs = -(jac.transpose() * res);
        let mut improved = false;
        for _ in 0..12 {
            let mut damping = mu;
            let Some(step) = damped_solve(&jtj, &rhs, &mut damping) else {
                break;
            };
            let trial: Vec<f64> = x.iter().zip(step.iter()).map(|(a, d)| a + d).collect();
            if let Some(rt) = r(&trial) {
                let ft = norm2(&rt);
                if ft < fx {
                    let small = step.norm() < 1e-14 * (1.0 + x.iter().map(|v| v * v).sum::<f64>().sqrt());
                    x = trial;
                    rx = rt;
                    fx = ft;
                    mu = (mu * 0.1).max(1e-12);
                    improved = !small;
                    break;
                }
            }
            mu *= 10.0;
        }
        if !improved {
            break;
        }
    }
    Polished { x, f: fx, iterations }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn newton_finds_quadratic_minimum() {
        let f = |x: &[f64]| (x[0] - 1.0).powi(2) + 3.0 * (x[1] + 2.0).powi(2) + x[0] * x[1];
        let p = newton(f, &[0.0, 0.0], 20);
        // gradient: 2(x0-1) + x1 = 0, 6(x1+2) + x0 = 0, so 5.5 x1 = -13
        let x1 = -13.0 / 5.5;
        let x0 = 1.0 - x1 / 2.0;
        assert!((p.x[0] - x0).abs() < 1e-6 && (p.x[1] - x1).abs() < 1e-6, "{:?}", p.x);
    }

    #[test]
    fn gauss_newton_solves_square_system() {
        let r = |x: &[f64]| Some(vec![x[0] * x[0] + x[1] - 3.0, x[0] - x[1] + 1.0]);
        let p = gauss_newton(r, &[0.5, 0.5], 50);
        assert!(p.f < 1e-24, "{}", p.f);
        assert!((p.x[0] - 1.0).abs() < 1e-10 && (p.x[1] - 2.0).abs() < 1e-10);
    }
}
