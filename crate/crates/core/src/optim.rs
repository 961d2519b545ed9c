//! One-dimensional minimization and small nonlinear least squares.

use nalgebra::{DMatrix, DVector};

const GOLDEN: f64 = 0.381_966_011_250_105_1; // (3 - sqrt 5) / 2

#[derive(Debug, Clone, Copy)]
pub(crate) struct Minimum {
    pub x: f64,
    pub fx: f64,
}

/// Brent's derivative-free minimizer on [lo, hi]: golden-section steps with
/// parabolic interpolation when the parabola is trustworthy. Stops when the
/// bracket around the current best point is below `tol` (absolute).
pub(crate) fn brent_minimize<F>(mut f: F, lo: f64, hi: f64, tol: f64, max_iter: usize) -> Minimum
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = (lo.min(hi), lo.max(hi));
    let mut x = a + GOLDEN * (b - a);
    let (mut w, mut v) = (x, x);
    let mut fx = f(x);
    let (mut fw, mut fv) = (fx, fx);
    let mut d: f64 = 0.0;
    let mut e: f64 = 0.0;

    for _ in 0..max_iter {
        let xm = 0.5 * (a + b);
        let tol1 = tol * 0.5 + 1e-14 * x.abs();
        let tol2 = 2.0 * tol1;
        if (x - xm).abs() <= tol2 - 0.5 * (b - a) {
            break;
        }
        let mut golden = true;
        if e.abs() > tol1 {
            let r = (x - w) * (fx - fv);
            let mut q = (x - v) * (fx - fw);
            let mut p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if q > 0.0 {
                p = -p;
            }
            q = q.abs();
            let e_prev = e;
            if p.abs() < (0.5 * q * e_prev).abs() && p > q * (a - x) && p < q * (b - x) {
                e = d;
                d = p / q;
                let u = x + d;
                if u - a < tol2 || b - u < tol2 {
                    d = tol1.copysign(xm - x);
                }
                golden = false;
            }
        }
        if golden {
            e = if x >= xm { a - x } else { b - x };
            d = GOLDEN * e;
        }
        let u = if d.abs() >= tol1 {
            x + d
        } else {
            x + tol1.copysign(d)
        };
        let fu = f(u);
        if fu <= fx {
            if u >= x {
                a = x;
            } else {
                b = x;
            }
            v = w;
            fv = fw;
            w = x;
            fw = fx;
            x = u;
            fx = fu;
        } else {
            if u < x {
                a = u;
            } else {
                b = u;
            }
            if fu <= fw || w == x {
                v = w;
                fv = fw;
                w = u;
                fw = fu;
            } else if fu <= fv || v == x || v == w {
                v = u;
                fv = fu;
            }
        }
    }
    Minimum { x, fx }
}

#[derive(Debug, Clone)]
pub(crate) struct LsqSolution {
    pub params: Vec<f64>,
    pub residuals: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

/// Levenberg-Marquardt with a forward-difference Jacobian. `residual` may
/// return non-finite values for infeasible parameters; such trial steps are
/// rejected and the damping increased.
pub(crate) fn levenberg_marquardt<F>(residual: F, start: &[f64], max_iter: usize) -> LsqSolution
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    let np = start.len();
    let cost = |r: &[f64]| -> f64 {
        if r.iter().all(|v| v.is_finite()) {
            r.iter().map(|v| v * v).sum()
        } else {
            f64::INFINITY
        }
    };

    let mut p = start.to_vec();
    let mut r = residual(&p);
    let mut c = cost(&r);
    let mut lambda = 1e-3;
    let mut converged = false;
    let mut iterations = 0;

    while iterations < max_iter {
        iterations += 1;
        let m = r.len();
        let mut jac = DMatrix::<f64>::zeros(m, np);
        for j in 0..np {
            let h = 1e-7 * p[j].abs().max(1e-3);
            let mut q = p.clone();
            q[j] += h;
            let rq = residual(&q);
            for i in 0..m {
                jac[(i, j)] = (rq[i] - r[i]) / h;
            }
        }
        let rv = DVector::from_column_slice(&r);
        let jtj = jac.transpose() * &jac;
        let jtr = jac.transpose() * &rv;
        if jtr.amax() < 1e-14 {
            converged = true;
            break;
        }

        let mut accepted = false;
        for _ in 0..30 {
            let mut lhs = jtj.clone();
            for k in 0..np {
                lhs[(k, k)] += lambda * jtj[(k, k)].max(1e-12);
            }
            let Some(step) = lhs.lu().solve(&(-&jtr)) else {
                lambda *= 10.0;
                continue;
            };
            let trial: Vec<f64> = p.iter().zip(step.iter()).map(|(a, s)| a + s).collect();
            let rt = residual(&trial);
            let ct = cost(&rt);
            if ct < c {
                let rel_drop = (c - ct) / c.max(f64::MIN_POSITIVE);
                let rel_step = step
                    .iter()
                    .zip(p.iter())
                    .map(|(s, a)| s.abs() / a.abs().max(1e-8))
                    .fold(0.0, f64::max);
                p = trial;
                r = rt;
                c = ct;
                lambda = (lambda * 0.3).max(1e-12);
                accepted = true;
                if rel_drop < 1e-12 || rel_step < 1e-10 {
                    converged = true;
                }
                break;
            }
            lambda *= 10.0;
        }
        if !accepted {
            // no downhill step at any damping: we are at a (local) minimum
            converged = c.is_finite();
            break;
        }
        if converged {
            break;
        }
    }

    LsqSolution {
        params: p,
        residuals: r,
        iterations,
        converged,
    }
}
