//! Spectral (mixing) distributions of the excess claim sizes and the
//! equal-weight hyperexponential fit.
//!
//! A completely monotone tail is a mixture of exponentials,
//! `B̄₀(u) = ∫_0^∞ e^{-yu} dH(y)`, with mixing cdf `H`. Replacing `H` by the
//! step function that jumps by `1/k` at the quantiles `H^{-1}(iε)`,
//! `ε = 1/(k+1)`, `i = 1..k`, yields a k-phase hyperexponential whose tail
//! deviates from `B̄₀` by at most `ε` in sup norm. That bound is what the
//! downstream ruin-probability solver certifies against.
//!
//! Mixing cdfs in closed form:
//! * Pareto(α, b): `H = P(α−1, y/b)` (regularized lower incomplete gamma);
//! * Weibull(1/2, a): `H = Q(3/2, 1/(4ay))` (upper incomplete gamma);
//! * Abate-Whitt(μ): arctangent decomposition of the rational mixing
//!   density `h(y) = μ(1+μ) / (π √y (y+1)(y+μ²))`.
//!
//! Every closed form is cross-checked against adaptive quadrature of the
//! mixing density; construction itself verifies the total mass by
//! quadrature.

use crate::distributions::{ClaimModel, ModelKind};
use crate::error::{Error, Result};
use crate::quad::{integrate, integrate_tail};
use crate::roots::{bisect, expand_bracket_up};
use crate::special::{gamma_p, gamma_q};

/// How a [`SpectralCdf`] evaluates `H(y)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectralForm {
    /// Family-specific closed form (default).
    ClosedForm,
    /// Adaptive quadrature of the mixing density on every call; kept as an
    /// independent evaluation route for validation.
    Quadrature,
}

/// Mixing cdf `H` of the excess claim-size distribution.
#[derive(Debug, Clone, Copy)]
pub struct SpectralCdf {
    model: ClaimModel,
    form: SpectralForm,
    normalizer: f64,
}

const MASS_TOL: f64 = 1e-8;
const QUAD_TOL: f64 = 1e-10;

impl SpectralCdf {
    /// Build the mixing cdf for `model`, verifying by quadrature that the
    /// mixing density integrates to 1 within 1e-8.
    pub fn new(model: ClaimModel) -> Result<Self> {
        Self::with_form(model, SpectralForm::ClosedForm)
    }

    pub fn with_form(model: ClaimModel, form: SpectralForm) -> Result<Self> {
        let normalizer = total_mass(&model)?;
        if (normalizer - 1.0).abs() > MASS_TOL {
            return Err(Error::numeric(format!(
                "mixing density of {} integrates to {normalizer:.12}, expected 1 within {MASS_TOL:.0e}",
                model.family_name()
            )));
        }
        Ok(Self {
            model,
            form,
            normalizer,
        })
    }

    pub fn model(&self) -> &ClaimModel {
        &self.model
    }

    pub fn form(&self) -> SpectralForm {
        self.form
    }

    /// Total mass found by the construction-time quadrature check.
    pub fn normalizer(&self) -> f64 {
        self.normalizer
    }

    /// Mixing density `h(y)` for `y > 0`.
    pub fn density(&self, y: f64) -> f64 {
        if y <= 0.0 {
            return 0.0;
        }
        match self.model.kind() {
            ModelKind::AbateWhitt { mu } => {
                mu * (1.0 + mu) / (std::f64::consts::PI * y.sqrt() * (y + 1.0) * (y + mu * mu))
            }
            ModelKind::WeibullHalf { scale } => {
                // exp-log form so the essential zero at y -> 0 underflows
                // cleanly instead of producing 0/0.
                let a = scale;
                (-1.0 / (4.0 * a * y) - 2.5 * y.ln()).exp()
                    / (4.0 * std::f64::consts::PI.sqrt() * a.powf(1.5))
            }
            ModelKind::Pareto { shape, scale } => {
                // Gamma(shape α−1, scale b) density.
                let s = shape - 1.0;
                let t = y / scale;
                (-t + (s - 1.0) * t.ln() - crate::special::ln_gamma(s)).exp() / scale
            }
        }
    }

    /// `H(y)`, a proper cdf: 0 at 0, nondecreasing, total mass 1.
    pub fn cdf(&self, y: f64) -> f64 {
        debug_assert!(y >= 0.0);
        match self.form {
            SpectralForm::ClosedForm => closed_form_cdf(&self.model, y),
            SpectralForm::Quadrature => quadrature_cdf(&self.model, y)
                .expect("quadrature evaluation of a verified mixing density failed"),
        }
    }

    /// Quadrature route regardless of the configured form; fallible.
    pub fn cdf_by_quadrature(&self, y: f64) -> Result<f64> {
        quadrature_cdf(&self.model, y)
    }

    /// The unique `y` with `H(y) = p`, by bracketed bisection to relative
    /// tolerance 1e-10. `H` is strictly increasing for every family in the
    /// catalog, so the root is simple.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::domain(format!(
                "quantile level must lie in (0,1), got {p}"
            )));
        }
        let f = |y: f64| self.cdf(y) - p;
        let (lo, hi) = if self.cdf(1e-12) >= p {
            (0.0, 1e-12)
        } else if self.cdf(1.0) > p {
            (1e-12, 1.0)
        } else {
            expand_bracket_up(&f, 1.0, 2.0, 1e12)?
        };
        bisect(&f, lo, hi, 1e-10)
    }
}

fn closed_form_cdf(model: &ClaimModel, y: f64) -> f64 {
    if y == 0.0 {
        return 0.0;
    }
    match model.kind() {
        ModelKind::AbateWhitt { mu } => {
            // 2μ(1+μ)/(π(μ²−1)) * (arctan √y − arctan(√y/μ)/μ), valid on
            // both sides of μ = 1.
            let s = y.sqrt();
            let c = 2.0 * mu * (1.0 + mu) / (std::f64::consts::PI * (mu * mu - 1.0));
            (c * (s.atan() - (s / mu).atan() / mu)).clamp(0.0, 1.0)
        }
        ModelKind::WeibullHalf { scale } => {
            let x = 1.0 / (4.0 * scale * y);
            if !x.is_finite() {
                return 0.0;
            }
            gamma_q(1.5, x)
        }
        ModelKind::Pareto { shape, scale } => gamma_p(shape - 1.0, y / scale),
    }
}

fn quadrature_cdf(model: &ClaimModel, y: f64) -> Result<f64> {
    if y == 0.0 {
        return Ok(0.0);
    }
    match model.kind() {
        ModelKind::AbateWhitt { mu } => {
            // Substituting y = t² turns the density into a bounded rational
            // function of t.
            let g = |t: f64| {
                2.0 * mu * (1.0 + mu) / (std::f64::consts::PI * (t * t + 1.0) * (t * t + mu * mu))
            };
            integrate(&g, 0.0, y.sqrt(), QUAD_TOL)
        }
        _ => {
            let cdf = SpectralCdf {
                model: *model,
                form: SpectralForm::ClosedForm,
                normalizer: 1.0,
            };
            integrate(&|t| cdf.density(t), 0.0, y, QUAD_TOL)
        }
    }
}

/// Mass of the mixing density over `(0, ∞)` by adaptive quadrature.
fn total_mass(model: &ClaimModel) -> Result<f64> {
    match model.kind() {
        ModelKind::AbateWhitt { mu } => {
            let g = |t: f64| {
                2.0 * mu * (1.0 + mu) / (std::f64::consts::PI * (t * t + 1.0) * (t * t + mu * mu))
            };
            integrate_tail(&g, 0.0, 1e-9)
        }
        _ => {
            let cdf = SpectralCdf {
                model: *model,
                form: SpectralForm::ClosedForm,
                normalizer: 1.0,
            };
            integrate_tail(&|t| cdf.density(t), 0.0, 1e-9)
        }
    }
}

/// A finite mixture of exponentials: rates `λ₁ < … < λ_k`, positive weights
/// summing to 1, and the sup-norm accuracy `ε` its construction guarantees
/// against the excess tail it approximates.
#[derive(Debug, Clone, PartialEq)]
pub struct HyperExp {
    rates: Vec<f64>,
    weights: Vec<f64>,
    accuracy: f64,
}

impl HyperExp {
    /// Validating constructor; `accuracy` defaults to `1/(k+1)`.
    pub fn new(rates: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        let accuracy = 1.0 / (rates.len() as f64 + 1.0);
        Self::with_accuracy(rates, weights, accuracy)
    }

    pub fn with_accuracy(rates: Vec<f64>, weights: Vec<f64>, accuracy: f64) -> Result<Self> {
        if rates.is_empty() || rates.len() != weights.len() {
            return Err(Error::domain(
                "hyperexponential needs equally many rates and weights, at least one phase",
            ));
        }
        for w in &rates {
            if !(w.is_finite() && *w > 0.0) {
                return Err(Error::domain(format!("rates must be positive, got {w}")));
            }
        }
        for pair in rates.windows(2) {
            if !(pair[0] < pair[1]) {
                return Err(Error::domain(format!(
                    "rates must be strictly increasing, got {} then {}",
                    pair[0], pair[1]
                )));
            }
        }
        let mut sum = 0.0;
        for w in &weights {
            if !(w.is_finite() && *w > 0.0) {
                return Err(Error::domain(format!("weights must be positive, got {w}")));
            }
            sum += w;
        }
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::domain(format!(
                "weights must sum to 1 within 1e-12, got {sum:.15}"
            )));
        }
        if !(accuracy > 0.0 && accuracy < 1.0) {
            return Err(Error::domain(format!(
                "accuracy must lie in (0,1), got {accuracy}"
            )));
        }
        Ok(Self {
            rates,
            weights,
            accuracy,
        })
    }

    pub fn phases(&self) -> usize {
        self.rates.len()
    }

    pub fn rates(&self) -> &[f64] {
        &self.rates
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Guaranteed sup-norm accuracy `ε` of this fit.
    pub fn accuracy(&self) -> f64 {
        self.accuracy
    }

    /// Tail `Σ wᵢ e^{-λᵢ u}`.
    pub fn ccdf(&self, u: f64) -> f64 {
        debug_assert!(u >= 0.0);
        self.rates
            .iter()
            .zip(&self.weights)
            .map(|(l, w)| w * (-l * u).exp())
            .sum()
    }

    /// Mean `Σ wᵢ / λᵢ`.
    pub fn mean(&self) -> f64 {
        self.rates
            .iter()
            .zip(&self.weights)
            .map(|(l, w)| w / l)
            .sum()
    }
}

/// Fit a k-phase equal-weight hyperexponential to the excess distribution of
/// `model` by placing the rates at the `iε` quantiles of the mixing cdf,
/// `ε = 1/(k+1)`.
///
/// The returned fit satisfies `sup_u |B̄₀(u) − Σ (1/k) e^{-λᵢ u}| ≤ ε`.
/// Rates closer together than `1e-12` relative are merged (weights summed)
/// so that downstream pole bracketing stays well conditioned; the merge
/// changes the tail by less than machine precision.
///
/// Phase counts above 10^7 are rejected: such a fit would neither be
/// computable in reasonable time nor representable meaningfully, and the
/// guard keeps bound-derived counts from absurd targets serviceable as
/// clean domain errors.
pub fn fit_hyperexp(model: &ClaimModel, k: usize) -> Result<HyperExp> {
    if k == 0 {
        return Err(Error::domain("phase count must be at least 1"));
    }
    if k > 10_000_000 {
        return Err(Error::domain(format!(
            "phase count {k} exceeds the supported maximum of 10^7"
        )));
    }
    let spectral = SpectralCdf::new(*model)?;
    let eps = 1.0 / (k as f64 + 1.0);
    let weight = 1.0 / k as f64;

    let mut rates: Vec<f64> = Vec::with_capacity(k);
    let mut weights: Vec<f64> = Vec::with_capacity(k);
    for i in 1..=k {
        let lambda = spectral.quantile(i as f64 * eps)?;
        match rates.last() {
            Some(&prev) if lambda - prev < 1e-12 * prev => {
                *weights.last_mut().unwrap() += weight;
            }
            _ => {
                rates.push(lambda);
                weights.push(weight);
            }
        }
    }
    // Weights are x/k sums; renormalize away accumulated rounding.
    let sum: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= sum;
    }
    HyperExp::with_accuracy(rates, weights, eps)
}

/// Convenience wrapper: `H(y)` for the excess distribution of `model`.
pub fn spectral_cdf(model: &ClaimModel, y: f64) -> Result<f64> {
    if y < 0.0 {
        return Err(Error::domain(format!("cdf argument must be >= 0, got {y}")));
    }
    Ok(SpectralCdf::new(*model)?.cdf(y))
}

/// Convenience wrapper: the `p`-quantile of the mixing cdf of `model`.
pub fn spectral_quantile(model: &ClaimModel, p: f64) -> Result<f64> {
    SpectralCdf::new(*model)?.quantile(p)
}
