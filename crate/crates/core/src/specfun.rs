//! Real special functions used by the variational energy and the exact
//! linear-potential solutions: Γ(x) for positive x, generalized Laguerre
//! polynomials, and the Airy function Ai with its zeros.

use std::f64::consts::{E, PI};
use std::sync::OnceLock;

use crate::dd::Dd;
use crate::error::{Error, Result};

/// Largest Laguerre degree accepted. Above this the alternating double sums
/// over the coefficients lose too many digits to be trusted.
pub const MAX_LAGUERRE_DEGREE: usize = 30;

/// |z| at which `airy_ai` switches from the Maclaurin series to the
/// asymptotic expansions.
pub const AIRY_SERIES_SWITCH: f64 = 8.5;

const AIRY_MAX_ZERO: usize = 10;

// Lanczos coefficients (Pugh 2004, r = 10.900511, 11 terms).
const LANCZOS_R: f64 = 10.900511;
const TWO_SQRT_E_OVER_PI: f64 = 1.860_382_734_205_265_7;
const LANCZOS_DK: [f64; 11] = [
    2.485_740_891_387_535_5e-5,
    1.051_423_785_817_219_7,
    -3.456_870_972_220_162_5,
    4.512_277_094_668_948,
    -2.982_852_253_235_766_4,
    1.056_397_115_771_267,
    -1.954_287_731_916_458_7e-1,
    1.709_705_434_044_412e-2,
    -5.719_261_174_043_057e-4,
    4.633_994_733_599_057e-6,
    -2.719_949_084_886_077_2e-9,
];

/// Γ(x) for x > 0.
pub fn gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain {
            func: "gamma",
            value: x,
            expected: "x > 0",
        });
    }
    Ok(gamma_positive(x))
}

pub(crate) fn gamma_positive(x: f64) -> f64 {
    if x.fract() == 0.0 && x <= 171.0 {
        return (2..x as u32).fold(1.0, |acc, k| acc * k as f64);
    }
    if x < 0.5 {
        // Γ(x) = Γ(x+1)/x keeps us on the accurate side of the approximation
        return lanczos(x + 1.0) / x;
    }
    lanczos(x)
}

fn lanczos(x: f64) -> f64 {
    let s = LANCZOS_DK
        .iter()
        .enumerate()
        .skip(1)
        .fold(LANCZOS_DK[0], |s, (k, dk)| s + dk / (x + k as f64 - 1.0));
    s * TWO_SQRT_E_OVER_PI * ((x - 0.5 + LANCZOS_R) / E).powf(x - 0.5)
}

/// Rising factorial (a)_k = a (a+1) ... (a+k-1) in double-double.
pub(crate) fn pochhammer_dd(a: f64, k: usize) -> Dd {
    (0..k).fold(Dd::ONE, |acc, i| acc * Dd::new(a + i as f64))
}

fn factorial_dd(k: usize) -> Dd {
    (1..=k).fold(Dd::ONE, |acc, i| acc * i as f64)
}

/// Generalized Laguerre polynomial L_n^α(y) = Σ_j a_j y^j.
#[derive(Debug, Clone, PartialEq)]
pub struct LaguerrePoly {
    pub n: usize,
    pub alpha: f64,
    pub coeffs: Vec<f64>,
}

pub fn laguerre_coefficients(n: usize, alpha: f64) -> Result<LaguerrePoly> {
    let coeffs = laguerre_coefficients_dd(n, alpha)?
        .into_iter()
        .map(Dd::to_f64)
        .collect();
    Ok(LaguerrePoly { n, alpha, coeffs })
}

/// a_j = (-1)^j Γ(n+α+1) / (Γ(α+j+1) (n-j)! j!), written as a product
/// (α+j+1)_{n-j} / ((n-j)! j!) so no gamma evaluation is needed.
pub(crate) fn laguerre_coefficients_dd(n: usize, alpha: f64) -> Result<Vec<Dd>> {
    if !(alpha > -1.0) || !alpha.is_finite() {
        return Err(Error::Domain {
            func: "laguerre_coefficients",
            value: alpha,
            expected: "alpha > -1",
        });
    }
    if n > MAX_LAGUERRE_DEGREE {
        return Err(Error::DegreeTooLarge(n));
    }
    Ok((0..=n)
        .map(|j| {
            let mag = pochhammer_dd(alpha + j as f64 + 1.0, n - j)
                / (factorial_dd(n - j) * factorial_dd(j));
            if j % 2 == 0 {
                mag
            } else {
                -mag
            }
        })
        .collect())
}

impl LaguerrePoly {
    pub fn eval(&self, y: f64) -> f64 {
        laguerre_eval(self, y)
    }
}

pub fn laguerre_eval(p: &LaguerrePoly, y: f64) -> f64 {
    p.coeffs.iter().rev().fold(0.0, |acc, &a| acc * y + a)
}

/// Ai(z) for real z.
pub fn airy_ai(z: f64) -> f64 {
    if z.abs() <= AIRY_SERIES_SWITCH {
        airy_ai_series(z)
    } else {
        airy_ai_asymptotic(z)
    }
}

// Ai(0) and -Ai'(0) to double-double precision
const AI0: Dd = Dd {
    hi: 0.355_028_053_887_817_2,
    lo: 2.052_336_324_362_12e-17,
};
const AIP0: Dd = Dd {
    hi: 0.258_819_403_792_806_8,
    lo: -2.522_243_111_610_832e-17,
};

/// Maclaurin series Ai = Ai(0) f(z) + Ai'(0) g(z), summed in double-double so
/// the large alternating terms at negative z cancel cleanly.
pub(crate) fn airy_ai_series(z: f64) -> f64 {
    let z3 = Dd::new(z) * Dd::new(z) * Dd::new(z);
    let mut f_term = Dd::ONE;
    let mut g_term = Dd::new(z);
    let mut f = f_term;
    let mut g = g_term;
    for k in 1..400 {
        let k3 = 3.0 * k as f64;
        f_term = f_term * z3 / ((k3 - 1.0) * k3);
        g_term = g_term * z3 / (k3 * (k3 + 1.0));
        f += f_term;
        g += g_term;
        let scale = f.abs().hi.max(g.abs().hi).max(1.0);
        if f_term.abs().hi.max(g_term.abs().hi) < 1e-34 * scale {
            break;
        }
    }
    (f * AI0 - g * AIP0).to_f64()
}

/// Asymptotic expansions for large |z|.
pub(crate) fn airy_ai_asymptotic(z: f64) -> f64 {
    let x = z.abs();
    let zeta = 2.0 / 3.0 * x * x.sqrt();
    // u_k coefficients of the standard large-argument expansions
    let u = |k: usize| -> f64 {
        (1..=k).fold(1.0, |acc, j| {
            let j = j as f64;
            acc * (6.0 * j - 5.0) * (6.0 * j - 3.0) * (6.0 * j - 1.0)
                / ((2.0 * j - 1.0) * 216.0 * j)
        })
    };
    if z > 0.0 {
        let mut sum = 0.0;
        let mut last = f64::INFINITY;
        for k in 0..60 {
            let term = u(k) / zeta.powi(k as i32) * if k % 2 == 0 { 1.0 } else { -1.0 };
            if term.abs() > last {
                break;
            }
            sum += term;
            last = term.abs();
            if last < 1e-17 * sum.abs() {
                break;
            }
        }
        (-zeta).exp() / (2.0 * PI.sqrt() * x.powf(0.25)) * sum
    } else {
        let mut p = 0.0;
        let mut q = 0.0;
        let mut last = f64::INFINITY;
        for k in 0..60 {
            let sgn = if k % 2 == 0 { 1.0 } else { -1.0 };
            let tp = sgn * u(2 * k) / zeta.powi(2 * k as i32);
            let tq = sgn * u(2 * k + 1) / zeta.powi(2 * k as i32 + 1);
            let mag = tp.abs().max(tq.abs());
            if mag > last {
                break;
            }
            p += tp;
            q += tq;
            last = mag;
            if last < 1e-17 {
                break;
            }
        }
        let phase = zeta - PI / 4.0;
        (phase.cos() * p + phase.sin() * q) / (PI.sqrt() * x.powf(0.25))
    }
}

/// Magnitude |a_k| of the k-th zero of Ai (k = 1 is the zero closest to the
/// origin), so that `airy_ai(-airy_zero(k)) = 0`.
pub fn airy_zero(k: usize) -> Result<f64> {
    if !(1..=AIRY_MAX_ZERO).contains(&k) {
        return Err(Error::AiryZeroIndex(k));
    }
    Ok(airy_zero_table()[k - 1])
}

fn airy_zero_table() -> &'static [f64; AIRY_MAX_ZERO] {
    static ZEROS: OnceLock<[f64; AIRY_MAX_ZERO]> = OnceLock::new();
    ZEROS.get_or_init(|| {
        let mut zeros = [0.0; AIRY_MAX_ZERO];
        let step = 0.1;
        let mut found = 0;
        let mut a = 0.0;
        let mut fa = airy_ai(-a);
        while found < AIRY_MAX_ZERO {
            let b = a + step;
            let fb = airy_ai(-b);
            if fa.signum() != fb.signum() {
                zeros[found] = polish_zero(a, b, fa);
                found += 1;
            }
            a = b;
            fa = fb;
        }
        zeros
    })
}

// Bisection on a sign-change bracket of t -> Ai(-t), then a secant step.
fn polish_zero(mut lo: f64, mut hi: f64, mut f_lo: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = airy_ai(-mid);
        if fm == 0.0 {
            return mid;
        }
        if fm.signum() == f_lo.signum() {
            lo = mid;
            f_lo = fm;
        } else {
            hi = mid;
        }
    }
    let f_hi = airy_ai(-hi);
    if f_hi != f_lo {
        let s = hi - f_hi * (hi - lo) / (f_hi - f_lo);
        if s >= lo && s <= hi {
            return s;
        }
    }
    0.5 * (lo + hi)
}
