//! Catalog of the three completely monotone claim-size families.
//!
//! Each family carries exact closed forms for the tail `B̄(u)`, the
//! stationary-excess tail `B̄₀(u) = (1/E U) ∫_u^∞ B̄(t) dt`, and the first
//! three moments (with an explicit marker where a moment diverges):
//!
//! * Abate-Whitt: `B̄(u) = (ζ(u) − μ ζ(μ²u)) / (1 − μ)` with
//!   `ζ(u) = e^u erfc(√u)`; mean `1/μ`, all higher moments infinite.
//! * Weibull with shape 1/2: `B̄(u) = exp(−√(u/a))`; `E Uⁿ = aⁿ Γ(1+2n)`.
//! * Pareto: `B̄(u) = (1 + b u)^(−α)`; `E Uⁿ = n! / (bⁿ ∏_{j=1..n}(α−j))`
//!   for `α > n`.
//!
//! All parameterizations admitted by the constructors have a finite mean,
//! which every downstream consumer (excess distribution, spectral fit,
//! simulation) requires.

use crate::error::{Error, Result};
use crate::special::erfcx;

/// `ζ(u) = e^u · erfc(√u)`, evaluated as `erfcx(√u)` so that it stays finite
/// for any `u` (the naive product overflows past `u ≈ 700`).
///
/// Decreases from `ζ(0) = 1` towards the asymptote `1/√(πu)`.
pub fn zeta(u: f64) -> f64 {
    debug_assert!(u >= 0.0);
    erfcx(u.sqrt())
}

/// A moment that may be infinite (heavy tails).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Moment {
    Finite(f64),
    Infinite,
}

impl Moment {
    pub fn finite(self) -> Option<f64> {
        match self {
            Moment::Finite(x) => Some(x),
            Moment::Infinite => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Moment::Finite(_))
    }
}

/// First three raw moments of the claim size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentSet {
    pub m1: f64,
    pub m2: Moment,
    pub m3: Moment,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum ModelKind {
    AbateWhitt { mu: f64 },
    WeibullHalf { scale: f64 },
    Pareto { shape: f64, scale: f64 },
}

/// A claim-size distribution from the completely monotone catalog.
///
/// Immutable after construction; all evaluation methods are pure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClaimModel {
    kind: ModelKind,
}

impl std::fmt::Display for ClaimModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.kind {
            ModelKind::AbateWhitt { mu } => write!(f, "abate-whitt(mu={mu})"),
            ModelKind::WeibullHalf { scale } => write!(f, "weibull-half(a={scale})"),
            ModelKind::Pareto { shape, scale } => write!(f, "pareto(alpha={shape}, b={scale})"),
        }
    }
}

impl ClaimModel {
    /// Long-tailed family with Laplace transform
    /// `1 − s / ((μ + √s)(1 + √s))`: mean `1/μ`, all higher moments
    /// infinite. `μ` must be positive and bounded away from 1 (the tail
    /// formula has a removable singularity at `μ = 1` that this catalog
    /// does not special-case).
    pub fn abate_whitt(mu: f64) -> Result<Self> {
        if !(mu > 0.0) || !mu.is_finite() {
            return Err(Error::domain(format!(
                "abate-whitt rate parameter must be positive, got {mu}"
            )));
        }
        if (mu - 1.0).abs() <= 1e-9 {
            return Err(Error::domain(
                "abate-whitt rate parameter must differ from 1 by more than 1e-9",
            ));
        }
        Ok(Self {
            kind: ModelKind::AbateWhitt { mu },
        })
    }

    /// Weibull with shape fixed at 1/2 and scale `a > 0`.
    pub fn weibull_half(scale: f64) -> Result<Self> {
        if !(scale > 0.0) || !scale.is_finite() {
            return Err(Error::domain(format!(
                "weibull scale must be positive, got {scale}"
            )));
        }
        Ok(Self {
            kind: ModelKind::WeibullHalf { scale },
        })
    }

    /// Pareto with tail `(1 + b u)^(−α)`. Requires `α > 1` so that the mean
    /// (and with it the excess distribution) exists.
    pub fn pareto(shape: f64, scale: f64) -> Result<Self> {
        if !(shape > 0.0) || !shape.is_finite() {
            return Err(Error::domain(format!(
                "pareto shape must be positive, got {shape}"
            )));
        }
        if !(scale > 0.0) || !scale.is_finite() {
            return Err(Error::domain(format!(
                "pareto scale must be positive, got {scale}"
            )));
        }
        if shape <= 1.0 {
            return Err(Error::domain(format!(
                "pareto shape must exceed 1 for a finite mean, got {shape}"
            )));
        }
        Ok(Self {
            kind: ModelKind::Pareto { shape, scale },
        })
    }

    pub(crate) fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn family_name(&self) -> &'static str {
        match self.kind {
            ModelKind::AbateWhitt { .. } => "abate-whitt",
            ModelKind::WeibullHalf { .. } => "weibull-half",
            ModelKind::Pareto { .. } => "pareto",
        }
    }

    /// Mean claim size; finite for every constructible model.
    pub fn mean(&self) -> f64 {
        match self.kind {
            ModelKind::AbateWhitt { mu } => 1.0 / mu,
            ModelKind::WeibullHalf { scale } => 2.0 * scale,
            ModelKind::Pareto { shape, scale } => 1.0 / (scale * (shape - 1.0)),
        }
    }

    /// First three raw moments.
    pub fn moments(&self) -> MomentSet {
        match self.kind {
            ModelKind::AbateWhitt { mu } => MomentSet {
                m1: 1.0 / mu,
                m2: Moment::Infinite,
                m3: Moment::Infinite,
            },
            ModelKind::WeibullHalf { scale } => MomentSet {
                // E U^n = a^n * Gamma(1 + 2n).
                m1: 2.0 * scale,
                m2: Moment::Finite(24.0 * scale * scale),
                m3: Moment::Finite(720.0 * scale * scale * scale),
            },
            ModelKind::Pareto { shape, scale } => {
                let moment = |n: u32| -> Moment {
                    if shape <= n as f64 {
                        return Moment::Infinite;
                    }
                    let mut v = 1.0;
                    for j in 1..=n {
                        v *= j as f64 / (scale * (shape - j as f64));
                    }
                    Moment::Finite(v)
                };
                MomentSet {
                    m1: 1.0 / (scale * (shape - 1.0)),
                    m2: moment(2),
                    m3: moment(3),
                }
            }
        }
    }

    /// Tail of the claim-size distribution, `B̄(u) = P(U > u)`.
    pub fn claim_ccdf(&self, u: f64) -> f64 {
        debug_assert!(u >= 0.0);
        match self.kind {
            ModelKind::AbateWhitt { mu } => (zeta(u) - mu * zeta(mu * mu * u)) / (1.0 - mu),
            ModelKind::WeibullHalf { scale } => (-(u / scale).sqrt()).exp(),
            ModelKind::Pareto { shape, scale } => (1.0 + scale * u).powf(-shape),
        }
    }

    /// Tail of the stationary-excess distribution,
    /// `B̄₀(u) = (1/E U) ∫_u^∞ B̄(t) dt`, in closed form per family.
    pub fn excess_ccdf(&self, u: f64) -> f64 {
        debug_assert!(u >= 0.0);
        match self.kind {
            // Antiderivative of ζ: dζ/dt = ζ(t) − 1/√(πt), so the tail
            // integral of B̄ telescopes to (ζ(μ²u)/μ − ζ(u)) / (1 − μ).
            ModelKind::AbateWhitt { mu } => (zeta(mu * mu * u) - mu * zeta(u)) / (1.0 - mu),
            ModelKind::WeibullHalf { scale } => {
                let w = (u / scale).sqrt();
                (1.0 + w) * (-w).exp()
            }
            ModelKind::Pareto { shape, scale } => (1.0 + scale * u).powf(-(shape - 1.0)),
        }
    }

    /// Claim-size density; used by the moment and excess oracles.
    #[cfg(test)]
    pub(crate) fn pdf(&self, u: f64) -> f64 {
        match self.kind {
            ModelKind::AbateWhitt { mu } => {
                // −d/du of the tail, with ζ'(u) = ζ(u) − 1/√(πu).
                let mu2 = mu * mu;
                let singular = (1.0 - mu2) / (std::f64::consts::PI * u).sqrt();
                (mu * mu2 * zeta(mu2 * u) - zeta(u) + singular) / (1.0 - mu)
            }
            ModelKind::WeibullHalf { scale } => {
                let w = (u / scale).sqrt();
                (-w).exp() / (2.0 * (scale * u).sqrt())
            }
            ModelKind::Pareto { shape, scale } => {
                shape * scale * (1.0 + scale * u).powf(-(shape + 1.0))
            }
        }
    }

    /// Smallest `u` with `excess_ccdf(u) <= level`, found by bracketed
    /// bisection. This is the default right edge for validation grids
    /// (`level = 1e-4`).
    pub fn excess_ccdf_crossing(&self, level: f64) -> Result<f64> {
        if !(level > 0.0 && level < 1.0) {
            return Err(Error::domain(format!(
                "crossing level must lie in (0,1), got {level}"
            )));
        }
        let f = |u: f64| self.excess_ccdf(u) - level;
        let (lo, hi) = crate::roots::expand_bracket_up(&f, 0.0, self.mean(), 1e30)?;
        crate::roots::bisect(&f, lo, hi, 1e-12)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::{integrate, integrate_tail};

    #[test]
    fn constructor_domain_checks() {
        assert!(ClaimModel::abate_whitt(2.0).is_ok());
        assert!(ClaimModel::abate_whitt(0.5).is_ok());
        assert!(ClaimModel::abate_whitt(0.0).is_err());
        assert!(ClaimModel::abate_whitt(-1.0).is_err());
        assert!(ClaimModel::abate_whitt(1.0).is_err());
        assert!(ClaimModel::abate_whitt(1.0 + 0.5e-9).is_err());
        assert!(ClaimModel::abate_whitt(1.0 + 1.0e-8).is_ok());
        assert!(ClaimModel::weibull_half(3.0).is_ok());
        assert!(ClaimModel::weibull_half(0.0).is_err());
        assert!(ClaimModel::pareto(4.0, 3.0).is_ok());
        assert!(ClaimModel::pareto(1.0, 3.0).is_err());
        assert!(ClaimModel::pareto(0.5, 3.0).is_err());
        assert!(ClaimModel::pareto(4.0, 0.0).is_err());
        assert!(ClaimModel::pareto(4.0, f64::NAN).is_err());
    }

    #[test]
    fn zeta_reference_values() {
        assert_eq!(zeta(0.0), 1.0);
        assert!((zeta(1.0) - 0.42758357615580700441).abs() < 1e-14);
        // Large argument, and the 1/sqrt(pi*u) asymptote within 0.5%.
        let z100 = zeta(100.0);
        assert!((z100 - 0.056140992743822585858).abs() < 1e-14);
        let asym = 1.0 / (100.0 * std::f64::consts::PI).sqrt();
        assert!(((z100 - asym) / asym).abs() < 5e-3);
        // No overflow far past where e^u would blow up.
        assert!(zeta(1e6).is_finite() && zeta(1e6) > 0.0);
    }

    #[test]
    fn claim_ccdf_examples() {
        let pareto = ClaimModel::pareto(4.0, 3.0).unwrap();
        assert_eq!(pareto.claim_ccdf(0.0), 1.0);
        assert!((pareto.claim_ccdf(1.0) - 0.00390625).abs() < 1e-15);

        let weibull = ClaimModel::weibull_half(3.0).unwrap();
        assert!((weibull.claim_ccdf(3.0) - (-1.0f64).exp()).abs() < 1e-15);
        assert_eq!(weibull.claim_ccdf(0.0), 1.0);

        let aw = ClaimModel::abate_whitt(2.0).unwrap();
        assert!((aw.claim_ccdf(0.0) - 1.0).abs() < 1e-14);
        // Frozen high-precision values for the closed form.
        assert!((aw.claim_ccdf(0.1) - 0.383634069092141514).abs() < 1e-13);
        assert!((aw.claim_ccdf(1.0) - 0.0832077764652044833).abs() < 1e-14);
        assert!((aw.claim_ccdf(10.0) - 0.00568335404290491701).abs() < 1e-15);
    }

    #[test]
    fn excess_ccdf_examples() {
        let pareto = ClaimModel::pareto(4.0, 3.0).unwrap();
        assert_eq!(pareto.excess_ccdf(0.0), 1.0);
        assert!((pareto.excess_ccdf(1.0) - 0.015625).abs() < 1e-15);

        let weibull = ClaimModel::weibull_half(3.0).unwrap();
        assert!((weibull.excess_ccdf(3.0) - 0.73575888234288464319).abs() < 1e-14);

        let aw = ClaimModel::abate_whitt(2.0).unwrap();
        assert!((aw.excess_ccdf(0.0) - 1.0).abs() < 1e-14);
        assert!((aw.excess_ccdf(0.5) - 0.71010916501415227387).abs() < 1e-13);
        assert!((aw.excess_ccdf(2.0) - 0.48358672228874455237).abs() < 1e-13);
        assert!((aw.excess_ccdf(10.0) - 0.25302490046750652438).abs() < 1e-13);
        assert!((aw.excess_ccdf(100.0) - 0.084107636746593852396).abs() < 1e-13);
    }

    #[test]
    fn moments_examples() {
        let w = ClaimModel::weibull_half(3.0).unwrap().moments();
        assert_eq!(w.m1, 6.0);
        assert_eq!(w.m2, Moment::Finite(216.0));
        assert_eq!(w.m3, Moment::Finite(19440.0));

        let a = ClaimModel::abate_whitt(2.0).unwrap().moments();
        assert_eq!(a.m1, 0.5);
        assert_eq!(a.m2, Moment::Infinite);
        assert_eq!(a.m3, Moment::Infinite);

        let p = ClaimModel::pareto(4.0, 3.0).unwrap().moments();
        assert!((p.m1 - 1.0 / 9.0).abs() < 1e-16);
        assert!((p.m2.finite().unwrap() - 1.0 / 27.0).abs() < 1e-16);
        assert!((p.m3.finite().unwrap() - 1.0 / 27.0).abs() < 1e-16);

        // Divergence thresholds for Pareto.
        let p2 = ClaimModel::pareto(2.0, 1.0).unwrap().moments();
        assert_eq!(p2.m2, Moment::Infinite);
        let p3 = ClaimModel::pareto(3.0, 1.0).unwrap().moments();
        assert!(p3.m2.is_finite());
        assert_eq!(p3.m3, Moment::Infinite);
    }

    fn all_models() -> Vec<ClaimModel> {
        vec![
            ClaimModel::abate_whitt(2.0).unwrap(),
            ClaimModel::weibull_half(3.0).unwrap(),
            ClaimModel::pareto(4.0, 3.0).unwrap(),
        ]
    }

    #[test]
    fn ccdfs_are_monotone_and_bounded() {
        for model in all_models() {
            let u_max = model.excess_ccdf_crossing(1e-4).unwrap();
            let mut prev_c = f64::INFINITY;
            let mut prev_e = f64::INFINITY;
            for i in 0..=200 {
                let u = u_max * (i as f64 / 200.0).powi(2);
                let c = model.claim_ccdf(u);
                let e = model.excess_ccdf(u);
                assert!(
                    (0.0..=1.0).contains(&c),
                    "{} ccdf({u}) = {c}",
                    model.family_name()
                );
                assert!(
                    (0.0..=1.0).contains(&e),
                    "{} excess({u}) = {e}",
                    model.family_name()
                );
                assert!(c <= prev_c + 1e-14);
                assert!(e <= prev_e + 1e-14);
                prev_c = c;
                prev_e = e;
            }
        }
    }

    #[test]
    fn excess_ccdf_matches_tail_quadrature_of_claim_ccdf() {
        // Independent oracle: B̄₀(u) = (1/m1) ∫_u^∞ B̄(t) dt by adaptive
        // quadrature, compared at 50 points up to the 1e-4 crossing.
        for model in all_models() {
            let m1 = model.mean();
            let u_max = model.excess_ccdf_crossing(1e-4).unwrap();
            for i in 0..50 {
                // Quadratic spacing puts more points where the tail moves.
                let u = u_max * (i as f64 / 49.0).powi(2);
                // Tolerance leaves headroom over the cancellation-noise
                // floor of the closed-form tail at very large arguments.
                let oracle = integrate_tail(&|t| model.claim_ccdf(t), u, 3e-9 * m1).unwrap() / m1;
                let got = model.excess_ccdf(u);
                assert!(
                    (got - oracle).abs() < 1e-8,
                    "{} at u = {u}: closed form {got}, quadrature {oracle}",
                    model.family_name()
                );
            }
        }
    }

    #[test]
    fn moments_match_pdf_quadrature() {
        for model in all_models() {
            let ms = model.moments();
            let far = 50.0;
            for (n, m) in [(1u32, Moment::Finite(ms.m1)), (2, ms.m2), (3, ms.m3)] {
                let Some(want) = m.finite() else { continue };
                let f = |u: f64| u.powi(n as i32) * model.pdf(u);
                // Integrable singularity at 0 for two of the families, so
                // start the finite leg just above 0. Beyond `far` switch by
                // parts to the tail, E U^n |_{>X} = X^n B̄(X) + n ∫ u^{n-1} B̄:
                // the density of the infinite-variance family is a triple
                // cancellation whose noise swamps quadrature at large u,
                // while its tail function is far better conditioned.
                let head = integrate(&f, 1e-250, far, 1e-8 * want).unwrap();
                let g = |u: f64| n as f64 * u.powi(n as i32 - 1) * model.claim_ccdf(u);
                let tail = far.powi(n as i32) * model.claim_ccdf(far)
                    + integrate_tail(&g, far, 1e-8 * want).unwrap();
                let got = head + tail;
                assert!(
                    ((got - want) / want).abs() < 1e-6,
                    "{} moment {n}: quadrature {got}, closed form {want}",
                    model.family_name()
                );
            }
        }
    }

    #[test]
    fn abate_whitt_mean_matches_tail_quadrature() {
        // m1 = ∫_0^∞ B̄(u) du; the only finite moment of this family.
        let model = ClaimModel::abate_whitt(2.0).unwrap();
        let got = integrate_tail(&|u| model.claim_ccdf(u), 0.0, 1e-10).unwrap();
        assert!((got - 0.5).abs() < 1e-7, "tail integral {got}");
    }

    #[test]
    fn abate_whitt_ccdf_matches_spectral_mixture() {
        // B̄(u) = ∫_0^∞ e^{-uy} √y (1+μ) / (π (y+1)(y+μ²)) dy; substituting
        // y = t² makes the integrand rational-times-Gaussian in t.
        let mu = 2.0_f64;
        let model = ClaimModel::abate_whitt(mu).unwrap();
        for i in 1..=20 {
            let u = 0.05 * (i as f64) * (i as f64); // 0.05 .. 20
            let integrand = |t: f64| {
                let y = t * t;
                2.0 * (-u * y).exp() * y * (1.0 + mu)
                    / (std::f64::consts::PI * (y + 1.0) * (y + mu * mu))
            };
            let oracle = integrate_tail(&integrand, 0.0, 1e-10).unwrap();
            let got = model.claim_ccdf(u);
            assert!(
                (got - oracle).abs() < 1e-6,
                "u = {u}: closed form {got}, mixture {oracle}"
            );
        }
    }

    #[test]
    fn crossing_is_consistent() {
        for model in all_models() {
            let u = model.excess_ccdf_crossing(1e-4).unwrap();
            assert!((model.excess_ccdf(u) - 1e-4).abs() < 1e-8);
        }
        // The infinite-variance family has an enormous 1e-4 point.
        let aw = ClaimModel::abate_whitt(2.0).unwrap();
        assert!(aw.excess_ccdf_crossing(1e-4).unwrap() > 1e6);
    }
}
