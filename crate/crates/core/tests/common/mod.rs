//! Independent numerical oracles used by the integration tests.

#![allow(dead_code)]

use std::f64::consts::FRAC_PI_2;

/// Tanh-sinh quadrature of f over [a, b], halving the step until two
/// successive levels agree to `tol` (relative) or the level cap is hit.
pub fn tanh_sinh(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let half = 0.5 * (b - a);
    // node at offset t: x = (a+b)/2 + half * tanh(π/2 sinh t)
    let term = |t: f64| -> f64 {
        let s = FRAC_PI_2 * t.sinh();
        let c = s.cosh();
        let w = FRAC_PI_2 * t.cosh() / (c * c);
        // distance to the nearer endpoint, formed without cancellation
        let dist = half / (s.abs().exp() * c);
        let x = if t >= 0.0 { b - dist } else { a + dist };
        if dist <= 0.0 || !(x > a && x < b) {
            return 0.0;
        }
        let v = f(x) * w;
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    let t_max = 4.0;
    let mut h = 0.5;
    let mut sum = term(0.0);
    let mut k = 1;
    while k as f64 * h <= t_max {
        sum += term(k as f64 * h) + term(-(k as f64) * h);
        k += 1;
    }
    let mut estimate = sum * h * half;
    for _ in 0..10 {
        h *= 0.5;
        let mut k = 1;
        while k as f64 * h <= t_max {
            sum += term(k as f64 * h) + term(-(k as f64) * h);
            k += 2;
        }
        let next = sum * h * half;
        if (next - estimate).abs() <= tol * next.abs() {
            return next;
        }
        estimate = next;
    }
    estimate
}

/// Sum of tanh-sinh pieces over consecutive breakpoints.
pub fn piecewise(f: impl Fn(f64) -> f64, breaks: &[f64], tol: f64) -> f64 {
    breaks.windows(2).map(|w| tanh_sinh(&f, w[0], w[1], tol)).sum()
}

/// L_n^α(y) by the three-term recurrence.
pub fn laguerre(n: usize, alpha: f64, y: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let (mut prev, mut cur) = (1.0, 1.0 + alpha - y);
    for k in 1..n {
        let k = k as f64;
        let next = ((2.0 * k + 1.0 + alpha - y) * cur - (k + alpha) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// g(ρ) = ρ^(l+1) exp(-u) L_n^α(2u), u = (xρ)^d, α = (2l+1)/d, and g'(ρ)
/// with dL_n^α/dy = -L_(n-1)^(α+1).
pub fn trial_and_derivative(n: usize, l: usize, x: f64, d: f64, rho: f64) -> (f64, f64) {
    let alpha = (2 * l + 1) as f64 / d;
    let u = (x * rho).powf(d);
    let du = d * u / rho;
    let lag = laguerre(n, alpha, 2.0 * u);
    let dlag = if n == 0 { 0.0 } else { -laguerre(n - 1, alpha + 1.0, 2.0 * u) };
    let e = (-u).exp();
    let p = rho.powi(l as i32 + 1);
    let g = p * e * lag;
    let dg = (l + 1) as f64 * rho.powi(l as i32) * e * lag - p * e * du * lag + p * e * dlag * 2.0 * du;
    (g, dg)
}

/// Rayleigh quotient ∫(g'² + (l(l+1)/ρ² + s ρ^ν) g²) / ∫ g² of the trial
/// function, by quadrature.
pub fn rayleigh_quotient(n: usize, l: usize, x: f64, d: f64, nu: f64, sign: f64) -> f64 {
    // e^(-2u) < 1e-35 beyond u = 40
    let r_end = 40f64.powf(1.0 / d) / x;
    let mut breaks = vec![0.0];
    let pieces = 8 + 2 * n;
    breaks.extend((1..=pieces).map(|i| r_end * i as f64 / pieces as f64));
    let ll = (l * (l + 1)) as f64;
    let num = piecewise(
        |r| {
            let (g, dg) = trial_and_derivative(n, l, x, d, r);
            dg * dg + (ll / (r * r) + sign * r.powf(nu)) * g * g
        },
        &breaks,
        1e-13,
    );
    let den = piecewise(
        |r| {
            let (g, _) = trial_and_derivative(n, l, x, d, r);
            g * g
        },
        &breaks,
        1e-13,
    );
    num / den
}

/// Modified Bessel K_ν(z) = ∫_0^∞ exp(-z cosh t) cosh(νt) dt.
pub fn bessel_k(nu: f64, z: f64) -> f64 {
    // the integrand is below 1e-300 once z cosh t > 700
    let t_end = (700.0 / z).acosh();
    tanh_sinh(|t| (-z * t.cosh()).exp() * (nu * t).cosh(), 0.0, t_end, 1e-14)
}

/// Ai(z) for z > 0 from K_(1/3).
pub fn airy_ai_from_bessel(z: f64) -> f64 {
    let zeta = 2.0 / 3.0 * z.powf(1.5);
    (z / 3.0).sqrt() * bessel_k(1.0 / 3.0, zeta) / std::f64::consts::PI
}
