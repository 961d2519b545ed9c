//! Numerov shooting for -g'' + [V(r) + l(l+1)/r²] g = E g.
//!
//! Outward integration from r_min with g ~ r^(l+1). Eigenvalues are located
//! by bisection on the node count of the whole integrated solution,
//! including the sign of the divergent tail: the count steps from n to n+1
//! exactly when E crosses the n-th level (with a hard wall at r_max).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::solvers::PotentialSpec;
use crate::variational::QuantumState;

pub use crate::samples::{Normalization, RadialSamples};

pub const DEFAULT_R_MIN: f64 = 1e-6;
pub const DEFAULT_TOL: f64 = 1e-7;
/// Uniform step used by [`RadialGridSpec::auto`] unless the range forces a
/// finer one.
pub const DEFAULT_STEP: f64 = 2e-3;
/// Tail depth ∫ sqrt(V_eff - E) dr beyond the outer turning point.
const WKB_TAIL_DEPTH: f64 = 30.0;
const RESCALE_THRESHOLD: f64 = 1e100;
const STIFFNESS_LIMIT: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Units {
    /// Power law with A = 1.
    Reduced,
    /// Power law with its own A.
    Physical,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialGridSpec {
    pub r_min: f64,
    pub r_max: f64,
    pub step: f64,
    pub units: Units,
}

impl RadialGridSpec {
    pub fn new(r_min: f64, r_max: f64, step: f64, units: Units) -> Result<Self> {
        if !(r_min > 0.0 && r_min < r_max && r_max.is_finite()) {
            return Err(Error::InvalidGrid(format!(
                "need 0 < r_min < r_max (got {r_min}, {r_max})"
            )));
        }
        if !(step > 0.0 && step <= (r_max - r_min) / 1000.0) {
            return Err(Error::InvalidGrid(format!(
                "step {step} must be positive and at most (r_max - r_min)/1000"
            )));
        }
        Ok(RadialGridSpec {
            r_min,
            r_max,
            step,
            units,
        })
    }

    pub fn len(&self) -> usize {
        ((self.r_max - self.r_min) / self.step).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn radius(&self, i: usize) -> f64 {
        self.r_min + i as f64 * self.step
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.radius(i)).collect()
    }

    pub fn with_step(&self, step: f64) -> Result<Self> {
        RadialGridSpec::new(self.r_min, self.r_max, step, self.units)
    }

    /// Grid for the state with energies up to `e_cap`: r_max is the largest
    /// of the exponent-dependent default, 10(n+l+2), and the radius where the
    /// WKB decay exponent past the outer turning point reaches 30.
    pub fn auto(pot: &PotentialSpec, state: QuantumState, e_cap: f64, units: Units) -> Result<Self> {
        let base: f64 = match pot {
            PotentialSpec::PowerLaw { nu, .. } if *nu < 0.0 => 40.0,
            PotentialSpec::PowerLaw { nu, .. } if *nu >= 0.5 => 15.0,
            _ => 40.0,
        };
        let guard = 10.0 * (state.n + state.l + 2) as f64;
        let wkb = wkb_tail_radius(pot, units, state.l, e_cap).unwrap_or(0.0);
        let mut r_max = base.max(guard).max(wkb);
        let r_min = DEFAULT_R_MIN;
        let mut step = DEFAULT_STEP.min((r_max - r_min) / 1000.0);
        // Numerov needs h² (V_eff - E) / 12 well below 1; steep potentials
        // get a shorter grid (never short of the WKB depth), then a finer step
        let pot_u = potential_in(pot, units);
        let stiff = |r: f64, h: f64| h * h * (effective(&pot_u, state.l, r) - e_cap) / 12.0;
        while r_max > wkb && r_max > 1.0 && stiff(r_max, step) > STIFFNESS_LIMIT {
            r_max = (0.9 * r_max).max(wkb);
        }
        let q_end = effective(&pot_u, state.l, r_max) - e_cap;
        if stiff(r_max, step) > STIFFNESS_LIMIT {
            step = (12.0 * STIFFNESS_LIMIT / q_end).sqrt();
        }
        step = step.min((r_max - r_min) / 1000.0);
        RadialGridSpec::new(r_min, r_max, step, units)
    }
}

fn potential_in(pot: &PotentialSpec, units: Units) -> PotentialSpec {
    match units {
        Units::Reduced => pot.reduced(),
        Units::Physical => *pot,
    }
}

fn effective(pot: &PotentialSpec, l: usize, r: f64) -> f64 {
    let ll = (l * (l + 1)) as f64;
    pot.value(r) + ll / (r * r)
}

/// Radius past the outer turning point of V_eff = e at which
/// ∫ sqrt(V_eff - e) dr reaches the tail depth. None if V_eff never rises
/// above e at large r.
fn wkb_tail_radius(pot: &PotentialSpec, units: Units, l: usize, e: f64) -> Option<f64> {
    let pot = potential_in(pot, units);
    let v = |r: f64| effective(&pot, l, r);
    // outer turning point: scan outward geometrically from the well
    let mut r = 1e-3;
    let mut inside = false;
    let mut turning = None;
    while r < 1e6 {
        let allowed = v(r) < e;
        if allowed {
            inside = true;
        } else if inside {
            turning = Some(r);
            break;
        }
        r *= 1.01;
    }
    let mut r = turning?;
    let mut depth = 0.0;
    let dr = 1e-2 * r.max(1.0);
    while depth < WKB_TAIL_DEPTH {
        let k = (v(r) - e).max(0.0).sqrt();
        depth += k * dr;
        r += dr;
        if r > 1e6 {
            return None;
        }
    }
    Some(r)
}

struct Integration {
    values: Vec<f64>,
    /// sign changes over the whole grid, counted while integrating
    sign_changes: usize,
}

/// Regular solution near the origin, g = r^(l+1) Σ c_jk r^(j(ν+2) + 2k),
/// from c_jk p (2l+1+p) = s c_(j-1)k - E c_j(k-1) with p = j(ν+2) + 2k.
/// Terms are kept up to p = 6. For log r only the leading power is used.
fn regular_start(pot: &PotentialSpec, l: usize, e: f64, r: f64) -> f64 {
    let lead = r.powi(l as i32 + 1);
    let PotentialSpec::PowerLaw { a, nu, sign } = *pot else {
        return lead;
    };
    const MAX_P: f64 = 6.0;
    let strength = sign.value() * a;
    let step = nu + 2.0;
    let jmax = (MAX_P / step).floor() as usize;
    let kmax = (MAX_P / 2.0) as usize;
    let mut c = vec![vec![0.0; kmax + 1]; jmax + 1];
    let mut sum = 0.0;
    for j in 0..=jmax {
        for k in 0..=kmax {
            let p = j as f64 * step + 2.0 * k as f64;
            if p > MAX_P {
                break;
            }
            c[j][k] = if j == 0 && k == 0 {
                1.0
            } else {
                let from_v = if j > 0 { strength * c[j - 1][k] } else { 0.0 };
                let from_e = if k > 0 { -e * c[j][k - 1] } else { 0.0 };
                (from_v + from_e) / (p * (2.0 * l as f64 + 1.0 + p))
            };
            sum += c[j][k] * r.powf(p);
        }
    }
    lead * sum
}

/// Outward Numerov recurrence. The first steps near a singular V_eff are
/// too stiff for the recurrence, so values up to the first grid point with
/// h²|Q|/12 <= STIFFNESS_LIMIT (and the one after it) come from `seed`.
fn integrate(q: &[f64], grid: &RadialGridSpec, seed: impl Fn(usize) -> f64, keep: bool) -> Integration {
    let n = q.len();
    let h2_12 = grid.step * grid.step / 12.0;
    let first = q
        .iter()
        .position(|v| h2_12 * v.abs() <= STIFFNESS_LIMIT)
        .unwrap_or(0)
        .min(n - 2);
    let mut values = if keep { Vec::with_capacity(n) } else { Vec::new() };
    if keep {
        values.extend((0..=first + 1).map(&seed));
    }
    let (mut prev, mut cur) = (seed(first), seed(first + 1));
    let mut sign_changes = 0;
    let mut last_sign = cur.signum();
    for i in first + 1..n - 1 {
        let next = (2.0 * cur * (1.0 + 5.0 * h2_12 * q[i]) - prev * (1.0 - h2_12 * q[i - 1]))
            / (1.0 - h2_12 * q[i + 1]);
        prev = cur;
        cur = next;
        if cur != 0.0 && cur.signum() != last_sign {
            sign_changes += 1;
            last_sign = cur.signum();
        }
        if keep {
            values.push(cur);
        }
        if cur.abs() > RESCALE_THRESHOLD {
            prev /= RESCALE_THRESHOLD;
            cur /= RESCALE_THRESHOLD;
            if keep {
                values.iter_mut().for_each(|v| *v /= RESCALE_THRESHOLD);
            }
        }
    }
    Integration {
        values,
        sign_changes,
    }
}

fn q_base(pot: &PotentialSpec, l: usize, grid: &RadialGridSpec) -> Vec<f64> {
    let pot = potential_in(pot, grid.units);
    (0..grid.len()).map(|i| effective(&pot, l, grid.radius(i))).collect()
}

/// Outward Numerov solution at trial energy `e`, unnormalized. Values are
/// rescaled whenever they exceed 1e100; that does not move nodes.
pub fn numerov_integrate(pot: &PotentialSpec, l: usize, e: f64, grid: &RadialGridSpec) -> Result<RadialSamples> {
    let q: Vec<f64> = q_base(pot, l, grid).into_iter().map(|v| v - e).collect();
    if q.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidGrid("potential is not finite on the grid".into()));
    }
    let pot_u = potential_in(pot, grid.units);
    let run = integrate(&q, grid, |i| regular_start(&pot_u, l, e, grid.radius(i)), true);
    Ok(RadialSamples::raw(grid.points(), run.values))
}

/// Bisection on E until the bracket is narrower than `tol`.
pub fn numerov_eigenvalue(
    pot: &PotentialSpec,
    state: QuantumState,
    grid: &RadialGridSpec,
    bracket: (f64, f64),
    tol: f64,
) -> Result<f64> {
    let base = q_base(pot, state.l, grid);
    if base.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidGrid("potential is not finite on the grid".into()));
    }
    let pot_u = potential_in(pot, grid.units);
    let mut q = vec![0.0; base.len()];
    let mut nodes = |e: f64| {
        q.iter_mut().zip(&base).for_each(|(qi, b)| *qi = b - e);
        integrate(&q, grid, |i| regular_start(&pot_u, state.l, e, grid.radius(i)), false).sign_changes
    };
    let (mut lo, mut hi) = (bracket.0.min(bracket.1), bracket.0.max(bracket.1));
    let (nodes_lo, nodes_hi) = (nodes(lo), nodes(hi));
    if nodes_lo > state.n || nodes_hi <= state.n {
        return Err(Error::BracketTooNarrow {
            lo,
            hi,
            target: state.n,
            nodes_lo,
            nodes_hi,
        });
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if nodes(mid) > state.n {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NumerovSolution {
    pub energy: f64,
    pub grid: RadialGridSpec,
}

/// Eigenvalue near `guess` on an automatically sized grid. The bracket is
/// widened geometrically around the guess until the node counts straddle n.
pub fn numerov_solve(pot: &PotentialSpec, state: QuantumState, guess: f64, units: Units) -> Result<NumerovSolution> {
    let spread = 0.05 * guess.abs().max(0.1);
    // energy cap for sizing the grid: a little above the guess, but still
    // bound when the potential tends to zero from below
    let e_cap = if guess < 0.0 {
        0.5 * guess
    } else {
        guess + 4.0 * spread
    };
    let grid = RadialGridSpec::auto(pot, state, e_cap, units)?;
    let solution = |grid: RadialGridSpec, tol: f64| -> Result<f64> {
        let mut lo = guess - spread;
        let mut hi = if guess < 0.0 { (guess + spread).min(0.5 * guess) } else { guess + spread };
        let mut width = spread;
        for _ in 0..60 {
            match numerov_eigenvalue(pot, state, &grid, (lo, hi), tol) {
                Ok(e) => return Ok(e),
                Err(Error::BracketTooNarrow { nodes_lo, nodes_hi, .. }) => {
                    width *= 2.0;
                    if nodes_lo > state.n {
                        lo -= width;
                    }
                    if nodes_hi <= state.n {
                        hi = if guess < 0.0 { (hi + width).min(0.0) } else { hi + width };
                    }
                }
                Err(e) => return Err(e),
            }
        }
        Err(Error::InvalidParameter(format!(
            "could not bracket level n = {} near {guess}",
            state.n
        )))
    };
    let energy = solution(grid, DEFAULT_TOL)?;
    Ok(NumerovSolution { energy, grid })
}

/// Normalized Numerov eigenfunction, cut where the decaying tail stops
/// decaying (beyond that the outward solution is dominated by the growing
/// branch).
pub fn numerov_wavefunction(pot: &PotentialSpec, state: QuantumState, solution: &NumerovSolution) -> Result<RadialSamples> {
    let grid = &solution.grid;
    let raw = numerov_integrate(pot, state.l, solution.energy, grid)?;
    let q = q_base(pot, state.l, grid);
    let turning = q.iter().rposition(|v| *v < solution.energy).unwrap_or(0);
    Ok(trim_tail(raw, turning).normalized().align_sign())
}

fn trim_tail(samples: RadialSamples, turning: usize) -> RadialSamples {
    let vals = &samples.values;
    let mut cut = vals.len();
    for i in turning.max(1)..vals.len() - 1 {
        let (a, b) = (vals[i], vals[i + 1]);
        if b.abs() > a.abs() || (b != 0.0 && b.signum() != a.signum()) {
            cut = i + 1;
            break;
        }
    }
    let mut grid = samples.grid;
    let mut values = samples.values;
    grid.truncate(cut);
    values.truncate(cut);
    RadialSamples::raw(grid, values)
}
