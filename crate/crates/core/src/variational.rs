//! Two-parameter variational estimate for the reduced radial equation
//!
//! ```text
//! [-d²/dρ² + sgn·ρ^ν + l(l+1)/ρ²] g(ρ) = ε g(ρ),    ν > -2
//! ```
//!
//! using the trial family
//!
//! ```text
//! g(ρ) = ρ^(l+1) exp(-(xρ)^d) L_n^((2l+1)/d)(2(xρ)^d).
//! ```
//!
//! d = 1 reproduces the Coulomb eigenfunctions, d = 2 the harmonic ones.
//! The energy surface is ε(x, d) = c(d) x² + b(d) x^(-ν), with c and b given
//! by double sums of gamma functions over the Laguerre coefficients. The
//! stationary x is available in closed form; d is either taken from a
//! fitted interpolation formula or minimized numerically.

use serde::{Deserialize, Serialize};

use crate::dd::Dd;
use crate::error::{Error, Result};
use crate::optim::{brent_minimize, levenberg_marquardt};
use crate::samples::{count_sign_changes, trapezoid_squared, Normalization, RadialSamples};
use crate::specfun::{gamma_positive, laguerre_coefficients, laguerre_coefficients_dd, pochhammer_dd};

/// Exponents at or below this are accepted but flagged: gamma arguments
/// (2l+ν+3)/d approach zero.
pub const NEAR_SINGULAR_NU: f64 = -1.99;

/// Default search interval for the optimal shape exponent.
pub const DEFAULT_D_BRACKET: (f64, f64) = (0.3, 6.0);

const D_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuantumState {
    pub n: usize,
    pub l: usize,
}

impl QuantumState {
    pub const fn new(n: usize, l: usize) -> Self {
        QuantumState { n, l }
    }

    pub const GROUND: QuantumState = QuantumState { n: 0, l: 0 };
}

/// Sign of the potential term sgn(v).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Attractive,
    Repulsive,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Attractive => -1.0,
            Sign::Repulsive => 1.0,
        }
    }

    /// The sign that binds for exponent `nu`: -r^ν for ν < 0, +r^ν otherwise.
    pub fn binding_for(nu: f64) -> Sign {
        if nu < 0.0 {
            Sign::Attractive
        } else {
            Sign::Repulsive
        }
    }
}

impl std::fmt::Display for Sign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Sign::Attractive => "-",
            Sign::Repulsive => "+",
        })
    }
}

/// Trial-function parameters and the problem they were optimized for.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnsatzParams {
    pub x: f64,
    pub d: f64,
    pub state: QuantumState,
    pub nu: f64,
    pub sign: Sign,
}

impl AnsatzParams {
    pub fn new(x: f64, d: f64, state: QuantumState, nu: f64, sign: Sign) -> Result<Self> {
        check_positive("x", x)?;
        check_positive("d", d)?;
        check_nu(nu)?;
        if sign == Sign::Attractive && nu >= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "attractive sign requires nu < 0 (got nu = {nu})"
            )));
        }
        Ok(AnsatzParams {
            x,
            d,
            state,
            nu,
            sign,
        })
    }

    /// g(ρ) of the trial family, unnormalized.
    pub fn evaluate(&self, rho: f64) -> Result<f64> {
        let alpha = (2 * self.state.l + 1) as f64 / self.d;
        let poly = laguerre_coefficients(self.state.n, alpha)?;
        let u = (self.x * rho).powf(self.d);
        Ok(rho.powi(self.state.l as i32 + 1) * (-u).exp() * poly.eval(2.0 * u))
    }
}

/// Constants of the correction factor w = (1 + t p)^h with
/// p = (ν+1)(2-ν) / (a1 ν² + a2 ν + a3), giving d(ν) = sqrt(ν+2) w.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrectionFit {
    pub t: f64,
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub h: f64,
}

impl CorrectionFit {
    /// Published constants. The middle denominator coefficient is printed
    /// as "1..05" in the source and read as 1.05.
    pub const PAPER: CorrectionFit = CorrectionFit {
        t: 0.2075,
        a1: 0.1381,
        a2: 1.05,
        a3: 2.484,
        h: 0.08104,
    };

    fn p(&self, nu: f64) -> Result<f64> {
        let den = self.a1 * nu * nu + self.a2 * nu + self.a3;
        if den == 0.0 || !den.is_finite() {
            return Err(Error::SingularDenominator { nu });
        }
        Ok((nu + 1.0) * (2.0 - nu) / den)
    }

    pub fn d_at(&self, nu: f64) -> Result<f64> {
        d_fitted(nu, self)
    }

    fn as_vec(&self) -> [f64; 5] {
        [self.t, self.a1, self.a2, self.a3, self.h]
    }
}

impl Default for CorrectionFit {
    fn default() -> Self {
        CorrectionFit::PAPER
    }
}

/// How the shape exponent d was chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", content = "value", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum DMode {
    Fitted,
    Minimized,
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReducedEigenvalue {
    pub epsilon: f64,
    pub params: AnsatzParams,
    pub d_mode: DMode,
}

/// The two coefficients of ε(x, d) = c x² + b x^(-ν).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyCoefficients {
    pub c: f64,
    pub b: f64,
}

fn check_positive(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            func: name,
            value: v,
            expected: "positive finite",
        })
    }
}

fn check_nu(nu: f64) -> Result<()> {
    if nu > -2.0 && nu.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            func: "nu",
            value: nu,
            expected: "nu > -2",
        })
    }
}

/// s = (2l+1)(2l+d+1) + (k+m-(k-m)²) d²
pub fn compute_s(k: usize, m: usize, l: usize, d: f64) -> f64 {
    let two_l = 2.0 * l as f64;
    let (k, m) = (k as f64, m as f64);
    (two_l + 1.0) * (two_l + d + 1.0) + (k + m - (k - m) * (k - m)) * d * d
}

fn compute_s_dd(k: usize, m: usize, l: usize, d: f64) -> Dd {
    let lead = Dd::new(2.0 * l as f64 + 1.0);
    let (k, m) = (k as f64, m as f64);
    let d = Dd::new(d);
    lead * lead + lead * d + d * d * (k + m - (k - m) * (k - m))
}

/// Σ_k Σ_m a_k a_m w(k, m) (β)_{k+m}, accumulated in double-double.
fn weighted_pochhammer_sum(a: &[Dd], beta: f64, weight: impl Fn(usize, usize) -> Dd) -> Dd {
    let n = a.len();
    let poch: Vec<Dd> = (0..2 * n).map(|j| pochhammer_dd(beta, j)).collect();
    let mut total = Dd::ZERO;
    for k in 0..n {
        for m in 0..n {
            total += a[k] * a[m] * poch[k + m] * weight(k, m);
        }
    }
    total
}

/// c and b for the given state and shape exponent. Each gamma-weighted sum
/// Σ a_k a_m Γ(k+m+β) is evaluated as Γ(β) Σ a_k a_m (β)_{k+m}, which keeps
/// the alternating cancellation exact to double-double precision.
pub fn energy_coefficients(state: QuantumState, d: f64, nu: f64, sign: Sign) -> Result<EnergyCoefficients> {
    check_positive("d", d)?;
    check_nu(nu)?;
    let l2 = 2.0 * state.l as f64;
    let alpha = (l2 + 1.0) / d;
    let a = laguerre_coefficients_dd(state.n, alpha)?;

    let beta_kin = (l2 + 1.0) / d;
    let beta_norm = (l2 + 3.0) / d;
    let beta_pot = (l2 + nu + 3.0) / d;

    let kin = weighted_pochhammer_sum(&a, beta_kin, |k, m| compute_s_dd(k, m, state.l, d));
    let norm = weighted_pochhammer_sum(&a, beta_norm, |_, _| Dd::ONE);
    let pot = weighted_pochhammer_sum(&a, beta_pot, |_, _| Dd::ONE);

    let g_norm = gamma_positive(beta_norm);
    let c = 2f64.powf((2.0 - 2.0 * d) / d) * (gamma_positive(beta_kin) / g_norm) * (kin / norm).to_f64();
    let b = sign.value() * 2f64.powf(-nu / d) * (gamma_positive(beta_pot) / g_norm) * (pot / norm).to_f64();
    Ok(EnergyCoefficients { c, b })
}

pub fn compute_c(state: QuantumState, d: f64) -> Result<f64> {
    // c does not depend on the potential; any admissible exponent will do
    Ok(energy_coefficients(state, d, 1.0, Sign::Repulsive)?.c)
}

pub fn compute_b(state: QuantumState, d: f64, nu: f64, sign: Sign) -> Result<f64> {
    Ok(energy_coefficients(state, d, nu, sign)?.b)
}

/// ε(x, d) = c x² + b x^(-ν).
pub fn epsilon_of(x: f64, d: f64, state: QuantumState, nu: f64, sign: Sign) -> Result<f64> {
    check_positive("x", x)?;
    let EnergyCoefficients { c, b } = energy_coefficients(state, d, nu, sign)?;
    Ok(c * x * x + b * x.powf(-nu))
}

fn stationary_x(coef: EnergyCoefficients, nu: f64) -> Result<f64> {
    if nu == 0.0 {
        return Err(Error::DegenerateExponent);
    }
    let bnu = coef.b * nu;
    if !(bnu > 0.0) {
        return Err(Error::NoStationaryPoint { bnu });
    }
    Ok((bnu / (2.0 * coef.c)).powf(1.0 / (nu + 2.0)))
}

/// x = (bν / 2c)^(1/(ν+2)), the stationary point of ε in x.
pub fn optimal_x(d: f64, state: QuantumState, nu: f64, sign: Sign) -> Result<f64> {
    if nu == 0.0 {
        return Err(Error::DegenerateExponent);
    }
    stationary_x(energy_coefficients(state, d, nu, sign)?, nu)
}

/// ε at the optimal x for a given d.
pub fn epsilon_nl(d: f64, state: QuantumState, nu: f64, sign: Sign) -> Result<ReducedEigenvalue> {
    if nu == 0.0 {
        return Err(Error::DegenerateExponent);
    }
    let coef = energy_coefficients(state, d, nu, sign)?;
    let x = stationary_x(coef, nu)?;
    Ok(ReducedEigenvalue {
        epsilon: coef.c * x * x + coef.b * x.powf(-nu),
        params: AnsatzParams {
            x,
            d,
            state,
            nu,
            sign,
        },
        d_mode: DMode::Fixed(d),
    })
}

/// Closed form (ν+2) (c/ν)^(ν/(ν+2)) (b/2)^(2/(ν+2)). For ν < 0 both bases
/// are negative, so magnitudes are raised and the sign of b (which is the
/// sign of ε at the stationary point) is reattached.
pub fn epsilon_closed_form(d: f64, state: QuantumState, nu: f64, sign: Sign) -> Result<f64> {
    if nu == 0.0 {
        return Err(Error::DegenerateExponent);
    }
    let EnergyCoefficients { c, b } = energy_coefficients(state, d, nu, sign)?;
    if !(b * nu > 0.0) {
        return Err(Error::NoStationaryPoint { bnu: b * nu });
    }
    let mag = (nu + 2.0) * (c / nu).abs().powf(nu / (nu + 2.0)) * (b.abs() / 2.0).powf(2.0 / (nu + 2.0));
    Ok(mag.copysign(b))
}

/// d(ν) = sqrt(ν+2) (1 + t p)^h.
pub fn d_fitted(nu: f64, fit: &CorrectionFit) -> Result<f64> {
    check_nu(nu)?;
    let p = fit.p(nu)?;
    let base = 1.0 + fit.t * p;
    let d = (nu + 2.0).sqrt() * base.powf(fit.h);
    if d > 0.0 && d.is_finite() {
        Ok(d)
    } else {
        Err(Error::InvalidParameter(format!(
            "fitted d is not positive at nu = {nu} (1 + t p = {base})"
        )))
    }
}

/// The d that minimizes ε_nl(d) inside `bracket`.
pub fn d_minimized(state: QuantumState, nu: f64, sign: Sign, bracket: (f64, f64)) -> Result<f64> {
    let (lo, hi) = bracket;
    check_positive("d bracket", lo)?;
    check_positive("d bracket", hi)?;
    if nu == 0.0 {
        return Err(Error::DegenerateExponent);
    }
    // probe feasibility once so errors surface as themselves, not as NaN
    epsilon_nl(0.5 * (lo + hi), state, nu, sign)?;
    let objective = |d: f64| epsilon_nl(d, state, nu, sign).map(|r| r.epsilon).unwrap_or(f64::INFINITY);
    let min = brent_minimize(objective, lo, hi, D_TOL * 0.1, 500);
    let edge = 10.0 * D_TOL;
    if !min.fx.is_finite() || min.x - lo.min(hi) < edge || lo.max(hi) - min.x < edge {
        return Err(Error::NoMinimumInBracket { lo, hi });
    }
    Ok(min.x)
}

/// Variational ε with d chosen per `mode`.
pub fn reduced_eigenvalue(
    state: QuantumState,
    nu: f64,
    sign: Sign,
    mode: DMode,
    fit: &CorrectionFit,
) -> Result<ReducedEigenvalue> {
    let d = match mode {
        DMode::Fitted => d_fitted(nu, fit)?,
        DMode::Minimized => d_minimized(state, nu, sign, DEFAULT_D_BRACKET)?,
        DMode::Fixed(d) => d,
    };
    let mut r = epsilon_nl(d, state, nu, sign)?;
    r.d_mode = mode;
    Ok(r)
}

/// Result of refitting the correction-factor constants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub fit: CorrectionFit,
    /// max |d_fitted(ν) - d_minimized(ν)| over the grid
    pub max_residual: f64,
    /// (ν, d_minimized) pairs the fit was made to.
    pub curve: Vec<(f64, f64)>,
    pub iterations: usize,
    pub warnings: Vec<String>,
}

pub const MIN_FIT_POINTS: usize = 20;
pub const FIT_SPAN: (f64, f64) = (-1.5, 8.0);

/// Ground-state optimal d on `nu_grid` (attractive sign for ν < 0), then a
/// least-squares fit of the correction-factor constants to that curve,
/// starting from `start`.
///
/// The model is invariant under (t, a1, a2, a3) -> (λt, λa1, λa2, λa3), so t
/// is held at `start.t` and only (a1, a2, a3, h) are fitted. ν = 0 exactly is
/// skipped (the ε(x) stationary point does not exist there).
pub fn refit_correction_constants_from(nu_grid: &[f64], start: &CorrectionFit) -> Result<FitReport> {
    let grid: Vec<f64> = nu_grid.iter().copied().filter(|&nu| nu != 0.0).collect();
    if grid.len() < MIN_FIT_POINTS {
        return Err(Error::InvalidGrid(format!(
            "need at least {MIN_FIT_POINTS} nonzero nu values, got {}",
            grid.len()
        )));
    }
    if let Some(&bad) = grid.iter().find(|&&nu| !(nu > -2.0 && nu <= 10.0)) {
        return Err(Error::InvalidGrid(format!("nu = {bad} outside (-2, 10]")));
    }

    let mut warnings = Vec::new();
    let (gmin, gmax) = grid
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    if gmin > FIT_SPAN.0 || gmax < FIT_SPAN.1 {
        warnings.push(format!(
            "grid [{gmin}, {gmax}] does not span [{}, {}]; fitted constants are poorly determined",
            FIT_SPAN.0, FIT_SPAN.1
        ));
    }
    if gmin >= -1.0 && gmax <= 2.0 {
        warnings.push(
            "constants unidentifiable: p vanishes at nu = -1 and nu = 2, so the grid only sees the interior bump".into(),
        );
    }

    let curve: Vec<(f64, f64)> = grid
        .iter()
        .map(|&nu| d_minimized(QuantumState::GROUND, nu, Sign::binding_for(nu), DEFAULT_D_BRACKET).map(|d| (nu, d)))
        .collect::<Result<_>>()?;

    let t = start.t;
    let model = |q: &[f64]| CorrectionFit {
        t,
        a1: q[0],
        a2: q[1],
        a3: q[2],
        h: q[3],
    };
    let residual = |q: &[f64]| -> Vec<f64> {
        let fit = model(q);
        curve
            .iter()
            .map(|&(nu, d)| d_fitted(nu, &fit).map(|v| v - d).unwrap_or(f64::NAN))
            .collect()
    };
    let s = start.as_vec();
    let sol = levenberg_marquardt(residual, &s[1..], 500);
    let max_residual = sol.residuals.iter().map(|r| r.abs()).fold(0.0, f64::max);
    if !sol.converged || !max_residual.is_finite() {
        return Err(Error::FitNotConverged {
            iterations: sol.iterations,
            max_residual,
        });
    }
    Ok(FitReport {
        fit: model(&sol.params),
        max_residual,
        curve,
        iterations: sol.iterations,
        warnings,
    })
}

pub fn refit_correction_constants(nu_grid: &[f64]) -> Result<FitReport> {
    refit_correction_constants_from(nu_grid, &CorrectionFit::PAPER)
}

/// Default ν grid for refitting: 40 evenly spaced points on [-1.5, 8].
pub fn default_fit_grid() -> Vec<f64> {
    linspace(FIT_SPAN.0, FIT_SPAN.1, 40)
}

pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![lo],
        _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
    }
}

/// Sampled trial wavefunction plus a grid-resolution flag.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialSamples {
    pub samples: RadialSamples,
    /// The normalization integral changed by more than 1e-4 (relative)
    /// when every other grid point was dropped.
    pub coarse_grid: bool,
}

/// Trial wavefunction on `rho_grid`, normalized to unit trapezoidal L² norm
/// and positive near the origin.
pub fn trial_wavefunction(params: &AnsatzParams, rho_grid: &[f64]) -> Result<TrialSamples> {
    if rho_grid.len() < 3 {
        return Err(Error::InvalidGrid("need at least 3 points".into()));
    }
    if let Some(&bad) = rho_grid.iter().find(|&&r| !(r > 0.0)) {
        return Err(Error::InvalidGrid(format!("rho = {bad} is not positive")));
    }
    if rho_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidGrid("grid must be strictly increasing".into()));
    }
    let alpha = (2 * params.state.l + 1) as f64 / params.d;
    let poly = laguerre_coefficients(params.state.n, alpha)?;
    let lp1 = params.state.l as i32 + 1;
    let values: Vec<f64> = rho_grid
        .iter()
        .map(|&rho| {
            let u = (params.x * rho).powf(params.d);
            rho.powi(lp1) * (-u).exp() * poly.eval(2.0 * u)
        })
        .collect();

    let fine = trapezoid_squared(rho_grid, &values);
    let half_grid: Vec<f64> = rho_grid.iter().step_by(2).copied().collect();
    let half_vals: Vec<f64> = values.iter().step_by(2).copied().collect();
    let coarse = trapezoid_squared(&half_grid, &half_vals);
    let coarse_grid = ((fine - coarse) / fine).abs() > 1e-4;

    let norm = fine.sqrt();
    if !(norm > 0.0 && norm.is_finite()) {
        return Err(Error::InvalidGrid("wavefunction vanishes on the grid".into()));
    }
    // L_n^α(0) = a_0 > 0 and ρ^(l+1) > 0, so g is already positive at small ρ
    let values: Vec<f64> = values.into_iter().map(|v| v / norm).collect();
    let node_count = count_sign_changes(&values);
    Ok(TrialSamples {
        samples: RadialSamples {
            grid: rho_grid.to_vec(),
            values,
            normalization: Normalization::UnitL2,
            node_count,
        },
        coarse_grid,
    })
}
