mod common;

use proptest::prelude::*;

use radial_variational::reference::{numerov_eigenvalue, numerov_integrate, RadialGridSpec, Units};
use radial_variational::solvers::{energy_scale, log_eigenvalue, power_law_eigenvalue, Convention, PotentialSpec};
use radial_variational::specfun::{airy_ai, gamma, laguerre_coefficients};
use radial_variational::variational::{
    d_fitted, epsilon_nl, epsilon_of, optimal_x, trial_wavefunction, AnsatzParams, CorrectionFit, DMode,
    QuantumState, Sign,
};

use common::{airy_ai_from_bessel, rayleigh_quotient, tanh_sinh};

fn power(nu: f64) -> PotentialSpec {
    PotentialSpec::PowerLaw {
        a: 1.0,
        nu,
        sign: Sign::binding_for(nu),
    }
}

#[test]
fn oracle_quadrature_sanity() {
    let v = tanh_sinh(|x| x.sqrt(), 0.0, 1.0, 1e-14);
    assert!((v - 2.0 / 3.0).abs() < 1e-13, "{v}");
    let v = tanh_sinh(|x| 1.0 / x.sqrt(), 0.0, 1.0, 1e-14);
    assert!((v - 2.0).abs() < 1e-10, "{v}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn gamma_recursion(x in 0.5f64..20.0) {
        let lhs = gamma(x + 1.0).unwrap();
        let rhs = x * gamma(x).unwrap();
        prop_assert!(((lhs - rhs) / rhs).abs() < 1e-12, "x = {x}: {lhs} vs {rhs}");
    }
}

#[test]
fn laguerre_orthogonality() {
    for alpha in [0.0, 0.5, 1.7] {
        for n in 0..=4 {
            let pn = laguerre_coefficients(n, alpha).unwrap();
            for m in 0..=4 {
                let pm = laguerre_coefficients(m, alpha).unwrap();
                let f = |y: f64| y.powf(alpha) * (-y).exp() * pn.eval(y) * pm.eval(y);
                let breaks: Vec<f64> = (0..=16).map(|i| 5.0 * i as f64).collect();
                let integral = common::piecewise(f, &breaks, 1e-13);
                let want = if n == m {
                    gamma(n as f64 + alpha + 1.0).unwrap() / gamma(n as f64 + 1.0).unwrap()
                } else {
                    0.0
                };
                assert!(
                    (integral - want).abs() < 1e-6,
                    "alpha={alpha} n={n} m={m}: {integral} vs {want}"
                );
            }
        }
    }
}

#[test]
fn airy_satisfies_its_equation() {
    let h = 1e-3;
    let mut z = -10.0;
    let mut worst: f64 = 0.0;
    while z <= 2.0 {
        let second = (airy_ai(z + h) - 2.0 * airy_ai(z) + airy_ai(z - h)) / (h * h);
        worst = worst.max((second - z * airy_ai(z)).abs());
        z += 0.01;
    }
    assert!(worst < 1e-4, "max residual {worst}");
}

#[test]
fn airy_matches_bessel_representation() {
    let oracle = airy_ai_from_bessel(2.0);
    assert!((oracle - 0.034_924_130_423_274_37).abs() < 1e-13, "{oracle}");
    for z in [0.5, 2.0, 4.0, 6.0, 7.0, 9.0] {
        let want = airy_ai_from_bessel(z);
        let got = airy_ai(z);
        assert!(((got - want) / want).abs() < 1e-10, "z = {z}: {got} vs {want}");
    }
}

fn draw_exponent() -> impl Strategy<Value = f64> {
    prop_oneof![-1.6f64..-0.1, 0.1f64..6.0]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn energy_matches_quadrature(
        n in 0usize..=4,
        l in 0usize..=3,
        nu in draw_exponent(),
        d in 0.7f64..3.0,
        x in 0.3f64..2.5,
    ) {
        let sign = Sign::binding_for(nu);
        let eps = epsilon_of(x, d, QuantumState::new(n, l), nu, sign).unwrap();
        let quad = rayleigh_quotient(n, l, x, d, nu, sign.value());
        // relative to the kinetic term so that ε near zero is still meaningful
        let kinetic = rayleigh_quotient(n, l, x, d, 0.0, 0.0).abs();
        let scale = eps.abs().max(kinetic);
        prop_assert!(
            (eps - quad).abs() <= 1e-7 * scale,
            "n={n} l={l} nu={nu} d={d} x={x}: {eps} vs {quad}"
        );
    }

    #[test]
    fn optimal_x_is_stationary(
        n in 0usize..=4,
        l in 0usize..=3,
        nu in draw_exponent(),
        d in 0.7f64..3.0,
    ) {
        let st = QuantumState::new(n, l);
        let sign = Sign::binding_for(nu);
        let x = optimal_x(d, st, nu, sign).unwrap();
        let h = 1e-5 * x;
        let f = |x: f64| epsilon_of(x, d, st, nu, sign).unwrap();
        let slope = (f(x + h) - f(x - h)) / (2.0 * h);
        let curvature_scale = (f(x + h) + f(x - h) - 2.0 * f(x)).abs() / (h * h) * x;
        prop_assert!(slope.abs() <= 1e-5 * curvature_scale.max(1e-12) + 1e-9, "slope {slope}");
    }

    #[test]
    fn scaling_covariance(a in 0.05f64..50.0, nu in draw_exponent(), n in 0usize..=3, l in 0usize..=3) {
        let sign = Sign::binding_for(nu);
        let st = QuantumState::new(n, l);
        let unit = power_law_eigenvalue(&PotentialSpec::PowerLaw { a: 1.0, nu, sign }, st, DMode::Fitted, Convention::Plain).unwrap();
        let scaled = power_law_eigenvalue(&PotentialSpec::PowerLaw { a, nu, sign }, st, DMode::Fitted, Convention::Plain).unwrap();
        let want = unit.e * a.powf(2.0 / (nu + 2.0));
        prop_assert!(((scaled.e - want) / want).abs() < 1e-12);
        let r11 = power_law_eigenvalue(&PotentialSpec::PowerLaw { a, nu, sign }, st, DMode::Fitted, Convention::Ref11).unwrap();
        prop_assert!(((r11.e - unit.e * energy_scale(a, nu, Convention::Ref11)) / r11.e).abs() < 1e-12);
    }

    #[test]
    fn fitted_d_is_continuous(nu in -1.9f64..10.0) {
        let d = d_fitted(nu, &CorrectionFit::PAPER).unwrap();
        prop_assert!(d > 0.0);
        let d2 = d_fitted(nu + 1e-6, &CorrectionFit::PAPER).unwrap();
        prop_assert!((d2 - d).abs() < 1e-5);
    }
}

#[test]
fn fitted_d_within_five_percent_of_sqrt() {
    let mut worst = (0.0f64, 0.0);
    for i in 0..=950 {
        let nu = -1.5 + 0.01 * i as f64;
        let d = d_fitted(nu, &CorrectionFit::PAPER).unwrap();
        let base = (nu + 2.0).sqrt();
        let rel = ((d - base) / base).abs();
        if rel > worst.0 {
            worst = (rel, nu);
        }
    }
    assert!(worst.0 <= 0.05, "max relative difference {:.4} at nu = {:.2}", worst.0, worst.1);
}

#[test]
fn harmonic_is_exact() {
    for n in 0..=5 {
        for l in 0..=4 {
            let r = epsilon_nl(2.0, QuantumState::new(n, l), 2.0, Sign::Repulsive).unwrap();
            let want = (4 * n + 2 * l + 3) as f64;
            assert!((r.epsilon - want).abs() < 1e-9 * want, "n={n} l={l}: {}", r.epsilon);
        }
    }
}

#[test]
fn coulomb_is_exact() {
    for n in 0..=5 {
        for l in 0..=4 {
            let r = epsilon_nl(1.0, QuantumState::new(n, l), -1.0, Sign::Attractive).unwrap();
            let k = (n + l + 1) as f64;
            let want = -1.0 / (4.0 * k * k);
            assert!((r.epsilon - want).abs() < 1e-9 * want.abs(), "n={n} l={l}: {}", r.epsilon);
        }
    }
}

#[test]
fn ground_state_is_an_upper_bound() {
    for nu in [0.15, 0.5, 1.0, 1.5, 3.0, 4.0, 6.0] {
        for l in 0..=3 {
            let st = QuantumState::new(0, l);
            let pot = power(nu);
            let guess = power_law_eigenvalue(&pot, st, DMode::Fitted, Convention::Plain).unwrap().e;
            let num = radial_variational::tables::numerov_power_law(&pot, st, Convention::Plain, guess).unwrap();
            for i in 0..=14 {
                let d = 0.5 + 0.25 * i as f64;
                let var = epsilon_nl(d, st, nu, Sign::Repulsive).unwrap().epsilon;
                assert!(var >= num - 1e-6, "nu={nu} l={l} d={d}: variational {var} below Numerov {num}");
            }
        }
    }
    // attractive singular ground states behave the same way
    for nu in [-1.5, -1.25, -0.5] {
        let pot = power(nu);
        let var = power_law_eigenvalue(&pot, QuantumState::GROUND, DMode::Minimized, Convention::Plain).unwrap().e;
        let num = radial_variational::tables::numerov_power_law(&pot, QuantumState::GROUND, Convention::Plain, var).unwrap();
        assert!(var >= num - 1e-6, "nu = {nu}: variational {var} below Numerov {num}");
    }
}

#[test]
fn log_limit_is_stable() {
    for (n, l) in [(0, 0), (1, 2), (4, 0), (2, 3)] {
        let st = QuantumState::new(n, l);
        let a = log_eigenvalue(st, 1e-5, Some(1.43203)).unwrap().e;
        let b = log_eigenvalue(st, 1e-6, Some(1.43203)).unwrap().e;
        assert!((a - b).abs() <= 1e-3, "n={n} l={l}: {a} vs {b}");
    }
}

#[test]
fn log_levels_increase_with_n_and_l() {
    for l in 0..=4 {
        let levels: Vec<f64> = (0..=6)
            .map(|n| log_eigenvalue(QuantumState::new(n, l), 1e-5, None).unwrap().e)
            .collect();
        assert!(levels.windows(2).all(|w| w[1] > w[0]), "l = {l}: {levels:?}");
    }
    for n in 0..=4 {
        let levels: Vec<f64> = (0..=4)
            .map(|l| log_eigenvalue(QuantumState::new(n, l), 1e-5, None).unwrap().e)
            .collect();
        assert!(levels.windows(2).all(|w| w[1] > w[0]), "n = {n}: {levels:?}");
    }
}

fn grid(r_max: f64, step: f64) -> RadialGridSpec {
    RadialGridSpec::new(1e-6, r_max, step, Units::Reduced).unwrap()
}

#[test]
fn numerov_grid_halving_is_stable() {
    let cases = [
        (0.5, QuantumState::new(0, 0)),
        (0.5, QuantumState::new(3, 2)),
        (1.0, QuantumState::new(2, 0)),
        (-1.25, QuantumState::new(0, 0)),
        (-0.8, QuantumState::new(1, 1)),
    ];
    for (nu, st) in cases {
        let pot = power(nu);
        let guess = power_law_eigenvalue(&pot, st, DMode::Fitted, Convention::Plain).unwrap().e;
        let r_max = if nu < 0.0 { 150.0 } else { 30.0 };
        let bracket = if nu < 0.0 { (1.5 * guess, 0.6 * guess) } else { (guess - 0.3, guess + 0.3) };
        let coarse = numerov_eigenvalue(&pot, st, &grid(r_max, 2e-3), bracket, 1e-10).unwrap();
        let fine = numerov_eigenvalue(&pot, st, &grid(r_max, 1e-3), bracket, 1e-10).unwrap();
        assert!((coarse - fine).abs() <= 1e-6, "nu={nu} {st:?}: {coarse} vs {fine}");
    }
}

#[test]
fn numerov_node_count_grows_with_energy() {
    let g = grid(20.0, 2e-3);
    let counts: Vec<usize> = (0..60)
        .map(|i| numerov_integrate(&power(1.0), 1, 1.0 + 0.2 * i as f64, &g).unwrap().node_count)
        .collect();
    assert!(counts.windows(2).all(|w| w[1] >= w[0]), "{counts:?}");
    assert!(counts[counts.len() - 1] >= 4);
}

#[test]
fn numerov_exact_cases() {
    let g = grid(15.0, 1e-3);
    for n in 0..=3 {
        for l in 0..=2 {
            let want = (4 * n + 2 * l + 3) as f64;
            let e = numerov_eigenvalue(&power(2.0), QuantumState::new(n, l), &g, (want - 1.0, want + 1.0), 1e-10).unwrap();
            assert!((e - want).abs() < 1e-6, "harmonic n={n} l={l}: {e}");
        }
    }
    for n in 0..=2 {
        for l in 0..=2 {
            let k = (n + l + 1) as f64;
            let want = -1.0 / (4.0 * k * k);
            let g = grid(60.0 * k * k, 2e-3 * k);
            let e = numerov_eigenvalue(&power(-1.0), QuantumState::new(n, l), &g, (want * 1.2, want * 0.8), 1e-12).unwrap();
            assert!((e - want).abs() < 1e-6, "coulomb n={n} l={l}: {e} vs {want}");
        }
    }
}

#[test]
fn numerov_insensitive_to_inner_radius() {
    let st = QuantumState::new(1, 1);
    let energies: Vec<f64> = [1e-4, 1e-6, 1e-8]
        .iter()
        .map(|&r_min| {
            let g = RadialGridSpec::new(r_min, 20.0, 1e-3, Units::Reduced).unwrap();
            numerov_eigenvalue(&power(0.5), st, &g, (2.5, 3.2), 1e-10).unwrap()
        })
        .collect();
    for e in &energies {
        assert!((e - energies[1]).abs() < 1e-6, "{energies:?}");
    }
}

#[test]
fn trial_node_count_equals_n() {
    for nu in [-1.0, 0.5, 1.0, 2.0] {
        for n in 0..=5 {
            for l in [0, 2] {
                let st = QuantumState::new(n, l);
                let eig = epsilon_nl((nu + 2.0f64).sqrt(), st, nu, Sign::binding_for(nu)).unwrap();
                let p = AnsatzParams::new(eig.params.x, eig.params.d, st, nu, Sign::binding_for(nu)).unwrap();
                // u = (xρ)^d reaches 60 at the end of the grid
                let rho_max = 60f64.powf(1.0 / p.d) / p.x;
                let rho: Vec<f64> = (1..=4000).map(|i| rho_max * i as f64 / 4000.0).collect();
                let t = trial_wavefunction(&p, &rho).unwrap();
                assert_eq!(t.samples.node_count, n, "nu={nu} n={n} l={l}");
            }
        }
    }
}
