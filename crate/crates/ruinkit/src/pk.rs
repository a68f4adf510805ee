//! Closed-form ruin probabilities for hyperexponential excess claims.
//!
//! With load `ρ < 1` and excess tail `B̄₀(u) = Σ wᵢ e^{-λᵢ u}`, the
//! transform of the all-time maximum factors as
//! `E e^{-sM} = (1-ρ) / (1 - ρ L(s))` where `L(s) = Σ wᵢ λᵢ/(λᵢ+s)`. The
//! conditional maximum `M | M > 0` is again hyperexponential: its transform
//! splits into simple fractions `Σ Rᵢ ηᵢ/(ηᵢ+s)` whose poles `-ηᵢ` are the
//! real roots of `1 - ρ L(-x) = 0`, one in `(0, λ₁)` and one in each
//! `(λᵢ, λᵢ₊₁)`. Inverting termwise gives the ruin probability
//! `ψ̃(u) = ρ Σ Rᵢ e^{-ηᵢ u}` with atom `ψ̃(0) = ρ`.
//!
//! If the hyperexponential input deviates from the true excess tail by at
//! most `ε` in sup norm, then `|ψ - ψ̃| ≤ ε ρ/(1-ρ)` uniformly in `u`;
//! [`certified_bound`] and [`phases_for_bound`] expose the two directions of
//! that relation.

use crate::error::{Error, Result};
use crate::roots::bisect;
use crate::spectral::HyperExp;

/// Laplace transform of the hyperexponential density at real `s >= 0`:
/// `Σ wᵢ λᵢ / (λᵢ + s)`. Equals 1 at `s = 0` and decreases strictly.
pub fn hyperexp_lt(hx: &HyperExp, s: f64) -> f64 {
    debug_assert!(s >= 0.0);
    hx.rates()
        .iter()
        .zip(hx.weights())
        .map(|(l, w)| w * l / (l + s))
        .sum()
}

/// Relative gap under which adjacent rates are merged before root finding.
const MERGE_REL_GAP: f64 = 1e-12;

/// Rates/weights with near-coincident rates merged (weights summed), so
/// that every pole bracket has usable width.
fn merged_parts(hx: &HyperExp) -> (Vec<f64>, Vec<f64>) {
    let mut rates: Vec<f64> = Vec::with_capacity(hx.phases());
    let mut weights: Vec<f64> = Vec::with_capacity(hx.phases());
    for (&l, &w) in hx.rates().iter().zip(hx.weights()) {
        match rates.last() {
            Some(&prev) if l - prev < MERGE_REL_GAP * prev => {
                *weights.last_mut().unwrap() += w;
            }
            _ => {
                rates.push(l);
                weights.push(w);
            }
        }
    }
    (rates, weights)
}

/// `1 - ρ Σ wⱼ λⱼ/(λⱼ - x)`: the function whose zeros are the decay rates.
fn pole_fn(rates: &[f64], weights: &[f64], rho: f64, x: f64) -> f64 {
    let mut s = 0.0;
    for (l, w) in rates.iter().zip(weights) {
        s += w * l / (l - x);
    }
    1.0 - rho * s
}

fn check_rho(rho: f64) -> Result<()> {
    if !(rho > 0.0 && rho < 1.0) {
        return Err(Error::domain(format!(
            "load must lie strictly inside (0,1), got {rho}"
        )));
    }
    Ok(())
}

/// Decay rates of the conditional maximum: the `k` real solutions of
/// `1 - ρ L(-x) = 0`, found by bisection inside the guaranteed brackets
/// `(0, λ₁)` and `(λᵢ, λᵢ₊₁)`. Brackets are shrunk inward by 1e-9 of their
/// width so the poles themselves are never evaluated; bisection then runs to
/// floating-point resolution.
///
/// The returned roots strictly interlace the rates; that structure is
/// asserted on every call.
pub fn solve_roots(hx: &HyperExp, rho: f64) -> Result<Vec<f64>> {
    check_rho(rho)?;
    let (rates, weights) = merged_parts(hx);
    let f = |x: f64| pole_fn(&rates, &weights, rho, x);

    let mut etas = Vec::with_capacity(rates.len());
    let mut left = 0.0;
    for (i, &right) in rates.iter().enumerate() {
        let width = right - left;
        let lo = left + 1e-9 * width;
        let hi = right - 1e-9 * width;
        let eta = bisect(&f, lo, hi, 0.0).map_err(|e| {
            Error::numeric(format!(
                "decay-rate bracket {i} in ({left:.6e}, {right:.6e}) failed: {e}"
            ))
        })?;
        etas.push(eta);
        left = right;
    }

    assert_eq!(etas.len(), rates.len());
    for (i, &eta) in etas.iter().enumerate() {
        let lo = if i == 0 { 0.0 } else { rates[i - 1] };
        assert!(
            lo < eta && eta < rates[i],
            "root {eta} escaped its bracket ({lo}, {})",
            rates[i]
        );
    }
    Ok(etas)
}

/// Mixture coefficients `Rᵢ` of the conditional maximum, from the analytic
/// residues of `(1-ρ)L(s) / (1 - ρ L(s))` at `s = -ηᵢ`:
///
/// `Rᵢ = (1-ρ) L(-ηᵢ) / (ρ ηᵢ Σⱼ wⱼ λⱼ/(λⱼ-ηᵢ)²)`.
///
/// All coefficients are positive and sum to 1; a deviation of the sum beyond
/// 1e-8 means the supplied roots do not belong to this system and is
/// reported as a numeric error.
pub fn residues(hx: &HyperExp, rho: f64, etas: &[f64]) -> Result<Vec<f64>> {
    check_rho(rho)?;
    let (rates, weights) = merged_parts(hx);
    if etas.len() != rates.len() {
        return Err(Error::numeric(format!(
            "expected {} decay rates, got {}",
            rates.len(),
            etas.len()
        )));
    }
    let mut coeffs = Vec::with_capacity(etas.len());
    for &eta in etas {
        let mut lt = 0.0; // L(-eta)
        let mut dsum = 0.0; // Σ w λ/(λ-eta)^2, the exact -L'(-eta)
        for (l, w) in rates.iter().zip(&weights) {
            let d = l - eta;
            lt += w * l / d;
            dsum += w * l / (d * d);
        }
        let r = (1.0 - rho) * lt / (rho * eta * dsum);
        assert!(r > 0.0, "nonpositive mixture coefficient {r} at eta {eta}");
        coeffs.push(r);
    }
    let sum: f64 = coeffs.iter().sum();
    if (sum - 1.0).abs() > 1e-8 {
        return Err(Error::numeric(format!(
            "mixture coefficients sum to {sum:.12}, expected 1 within 1e-8; \
             root set inconsistent with the transform"
        )));
    }
    Ok(coeffs)
}

/// Certified sup-norm bound on the ruin-probability error induced by a fit
/// of accuracy `ε`: `δ = ε ρ / (1 - ρ)`, uniform over all `u >= 0`.
pub fn certified_bound(epsilon: f64, rho: f64) -> f64 {
    debug_assert!(epsilon > 0.0 && epsilon < 1.0);
    debug_assert!(rho > 0.0 && rho < 1.0);
    epsilon * rho / (1.0 - rho)
}

/// Smallest phase count `k` whose certified bound `(1/(k+1)) ρ/(1-ρ)` does
/// not exceed `delta`; clamped below at 1.
pub fn phases_for_bound(delta: f64, rho: f64) -> usize {
    debug_assert!(delta > 0.0);
    debug_assert!(rho > 0.0 && rho < 1.0);
    // Ceiling of rho/((1-rho) delta) minus 1, with a one-ulp-scale snap so
    // exact integer targets are not pushed up by rounding noise. The fix-up
    // loops below correct at most rounding-level steps, so they are bounded.
    let x = rho / ((1.0 - rho) * delta);
    let mut k = (((x * (1.0 - 1e-12)).ceil() as i64) - 1).max(1) as usize;
    let fits = |k: usize| certified_bound(1.0 / (k as f64 + 1.0), rho) <= delta * (1.0 + 1e-12);
    for _ in 0..4 {
        if fits(k) {
            break;
        }
        k += 1;
    }
    for _ in 0..4 {
        if k > 1 && fits(k - 1) {
            k -= 1;
        } else {
            break;
        }
    }
    k
}

/// Closed-form spectral approximation of the ruin probability.
#[derive(Debug, Clone, PartialEq)]
pub struct RuinSolution {
    rho: f64,
    decay_rates: Vec<f64>,
    coefficients: Vec<f64>,
    epsilon: f64,
    delta: f64,
}

impl RuinSolution {
    /// Solve the system for a hyperexponential excess tail and load `rho`.
    pub fn solve(hx: &HyperExp, rho: f64) -> Result<Self> {
        let decay_rates = solve_roots(hx, rho)?;
        let coefficients = residues(hx, rho, &decay_rates)?;
        let epsilon = hx.accuracy();
        Ok(Self {
            rho,
            decay_rates,
            coefficients,
            epsilon,
            delta: certified_bound(epsilon, rho),
        })
    }

    /// `ψ̃(u) = ρ Σ Rᵢ e^{-ηᵢ u}`: the tail of the approximated maximum,
    /// starting from the atom `ψ̃(0) = ρ` and decreasing to 0.
    pub fn ruin(&self, u: f64) -> f64 {
        debug_assert!(u >= 0.0);
        let tail: f64 = self
            .decay_rates
            .iter()
            .zip(&self.coefficients)
            .map(|(eta, r)| r * (-eta * u).exp())
            .sum();
        self.rho * tail
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn phases(&self) -> usize {
        self.decay_rates.len()
    }

    pub fn decay_rates(&self) -> &[f64] {
        &self.decay_rates
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    /// Fit accuracy `ε` this solution inherited from its input.
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Certified uniform bound `δ = ε ρ/(1-ρ)` on `|ψ - ψ̃|`.
    pub fn delta(&self) -> f64 {
        self.delta
    }
}
