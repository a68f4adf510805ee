//! Heavy-traffic and heavy-tail approximations with their a-priori bounds.
//!
//! * Heavy traffic (atom-adjusted): `ψ_h(u) = ρ e^{-ρu/E M}` with
//!   `E M = ρ m₂ / (2(1-ρ) m₁)`; needs a finite second claim moment. The
//!   plain exponential `e^{-u/E M}` is exposed separately.
//! * Heavy tail: `ψ_t(u) = (ρ/(1-ρ)) B̄₀(u)`; an asymptotic, deliberately
//!   not clamped to `[0,1]`.
//! * Sup-norm bound between the maximum and its matching exponential:
//!   `(1-ρ) max(2γ, γ/ρ)` with `γ = 2 m₃ m₁ / (3 m₂²)`; needs a finite
//!   third moment. Adding the atom mismatch `1-ρ` extends it to `ψ_h`.
//! * `matched_phases` converts the extended bound into the phase count at
//!   which the spectral approximation certifies the same accuracy.

use crate::distributions::{ClaimModel, Moment};
use crate::error::{Error, Result};
use crate::pk::phases_for_bound;

/// Load, mean of the maximum, and the bound coefficient `γ` (infinite when
/// the third claim moment diverges).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeavyTrafficParams {
    pub rho: f64,
    pub mean_m: f64,
    pub gamma: Moment,
}

impl HeavyTrafficParams {
    /// Requires a finite second moment (for `E M`); `γ` is additionally
    /// gated on the third.
    pub fn new(model: &ClaimModel, rho: f64) -> Result<Self> {
        check_rho(rho)?;
        let ms = model.moments();
        let m2 = ms.m2.finite().ok_or_else(|| {
            Error::domain(format!(
                "heavy-traffic approximation requires a finite second claim moment, \
                 which the {} model does not have",
                model.family_name()
            ))
        })?;
        let mean_m = rho * m2 / (2.0 * (1.0 - rho) * ms.m1);
        let gamma = match ms.m3 {
            Moment::Finite(m3) => Moment::Finite(2.0 * m3 * ms.m1 / (3.0 * m2 * m2)),
            Moment::Infinite => Moment::Infinite,
        };
        Ok(Self { rho, mean_m, gamma })
    }
}

fn check_rho(rho: f64) -> Result<()> {
    if !(rho > 0.0 && rho < 1.0) {
        return Err(Error::domain(format!(
            "load must lie strictly inside (0,1), got {rho}"
        )));
    }
    Ok(())
}

fn check_u(u: f64) -> Result<()> {
    if !(u >= 0.0) {
        return Err(Error::domain(format!("capital must be >= 0, got {u}")));
    }
    Ok(())
}

/// Atom-adjusted heavy-traffic approximation `ρ e^{-ρu/E M}`: mass `ρ` at
/// 0 and mean `E M`, like the exact maximum.
pub fn heavy_traffic(model: &ClaimModel, rho: f64, u: f64) -> Result<f64> {
    check_u(u)?;
    let p = HeavyTrafficParams::new(model, rho)?;
    Ok(rho * (-rho * u / p.mean_m).exp())
}

/// Plain heavy-traffic exponential `e^{-u/E M}` (no atom correction).
pub fn heavy_traffic_plain(model: &ClaimModel, rho: f64, u: f64) -> Result<f64> {
    check_u(u)?;
    let p = HeavyTrafficParams::new(model, rho)?;
    Ok((-u / p.mean_m).exp())
}

/// Heavy-tail approximation `(ρ/(1-ρ)) B̄₀(u)`. Exceeds 1 for small `u`
/// when `ρ > 1/2`; returned as-is since it is an asymptotic, not a
/// probability.
pub fn heavy_tail(model: &ClaimModel, rho: f64, u: f64) -> Result<f64> {
    check_rho(rho)?;
    check_u(u)?;
    Ok(rho / (1.0 - rho) * model.excess_ccdf(u))
}

fn gamma_coefficient(model: &ClaimModel) -> Result<f64> {
    let ms = model.moments();
    let (Moment::Finite(m2), Moment::Finite(m3)) = (ms.m2, ms.m3) else {
        return Err(Error::domain(format!(
            "a finite third claim moment is required for the heavy-traffic bound, \
             which the {} model does not have",
            model.family_name()
        )));
    };
    Ok(2.0 * m3 * ms.m1 / (3.0 * m2 * m2))
}

/// Sup-norm distance bound between the maximum and the exponential with the
/// same mean: `(1-ρ) max(2γ, γ/ρ)`.
pub fn brown_bound(model: &ClaimModel, rho: f64) -> Result<f64> {
    check_rho(rho)?;
    let gamma = gamma_coefficient(model)?;
    Ok((1.0 - rho) * (2.0 * gamma).max(gamma / rho))
}

/// Bound for the atom-adjusted heavy-traffic approximation:
/// `(1-ρ) max(2γ, γ/ρ) + (1-ρ)`.
pub fn extended_bound(model: &ClaimModel, rho: f64) -> Result<f64> {
    Ok(brown_bound(model, rho)? + (1.0 - rho))
}

/// Phase count at which the spectral approximation certifies the same bound
/// as the extended heavy-traffic bound.
pub fn matched_phases(model: &ClaimModel, rho: f64) -> Result<usize> {
    let bound = extended_bound(model, rho)?;
    Ok(phases_for_bound(bound, rho))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::integrate_tail;

    fn weibull() -> ClaimModel {
        ClaimModel::weibull_half(3.0).unwrap()
    }
    fn pareto() -> ClaimModel {
        ClaimModel::pareto(4.0, 3.0).unwrap()
    }
    fn aw() -> ClaimModel {
        ClaimModel::abate_whitt(2.0).unwrap()
    }

    #[test]
    fn mean_of_maximum_example() {
        // Weibull(1/2, 3), rho = 0.9: E M = 0.9*216/(2*0.1*6) = 162.
        let p = HeavyTrafficParams::new(&weibull(), 0.9).unwrap();
        assert!((p.mean_m - 162.0).abs() < 1e-10);
        let v = heavy_traffic(&weibull(), 0.9, 10.0).unwrap();
        assert!((v - 0.9 * (-0.9 * 10.0 / 162.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn heavy_traffic_atom_and_moment_gate() {
        assert!((heavy_traffic(&weibull(), 0.37, 0.0).unwrap() - 0.37).abs() < 1e-15);
        assert!(matches!(
            heavy_traffic(&aw(), 0.5, 1.0),
            Err(Error::Domain(_))
        ));
        // Pareto with infinite second moment hits the same gate.
        let heavy = ClaimModel::pareto(1.8, 1.0).unwrap();
        assert!(matches!(
            heavy_traffic(&heavy, 0.5, 1.0),
            Err(Error::Domain(_))
        ));
        // The plain form shares the gate and has no atom.
        assert!((heavy_traffic_plain(&weibull(), 0.37, 0.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(heavy_traffic_plain(&aw(), 0.5, 1.0).is_err());
    }

    #[test]
    fn heavy_traffic_integrates_to_mean_m() {
        let p = HeavyTrafficParams::new(&weibull(), 0.8).unwrap();
        let integral = integrate_tail(
            &|u| heavy_traffic(&weibull(), 0.8, u).unwrap(),
            0.0,
            1e-7 * p.mean_m,
        )
        .unwrap();
        assert!(((integral - p.mean_m) / p.mean_m).abs() < 1e-6);
    }

    #[test]
    fn heavy_tail_examples() {
        assert!((heavy_tail(&pareto(), 0.5, 1.0).unwrap() - 0.015625).abs() < 1e-15);
        assert!((heavy_tail(&pareto(), 0.5, 0.0).unwrap() - 1.0).abs() < 1e-15);
        // Above 1 and not clamped.
        assert!((heavy_tail(&pareto(), 0.9, 0.0).unwrap() - 9.0).abs() < 1e-12);
        // Ratio form reproduces the excess tail (up to one rounding).
        let rho = 0.73;
        for u in [0.0, 0.5, 2.0, 9.0] {
            let v = heavy_tail(&pareto(), rho, u).unwrap() / (rho / (1.0 - rho));
            let want = pareto().excess_ccdf(u);
            assert!((v - want).abs() <= 1e-15 * want.max(1e-300));
        }
    }

    #[test]
    fn gamma_examples_and_scale_invariance() {
        // Pareto(4, b): gamma = (alpha-2)/(alpha-3) = 2 regardless of b.
        for scale in [0.5, 1.0, 2.7, 3.0, 10.0] {
            let m = ClaimModel::pareto(4.0, scale).unwrap();
            assert!(
                (gamma_coefficient(&m).unwrap() - 2.0).abs() < 1e-12,
                "b = {scale}"
            );
        }
        // Weibull(1/2, a): gamma = 5/3 for every a.
        for scale in [0.3, 1.0, 3.0, 7.0, 40.0] {
            let m = ClaimModel::weibull_half(scale).unwrap();
            assert!(
                (gamma_coefficient(&m).unwrap() - 5.0 / 3.0).abs() < 1e-12,
                "a = {scale}"
            );
        }
        // Pareto(15.6, 2.7): gamma = 13.6/12.6.
        let m = ClaimModel::pareto(15.6, 2.7).unwrap();
        assert!((gamma_coefficient(&m).unwrap() - 13.6 / 12.6).abs() < 1e-10);
    }

    #[test]
    fn brown_bound_examples() {
        let b = brown_bound(&pareto(), 0.82).unwrap();
        assert!((b - 0.18 * 4.0).abs() < 1e-12);
        // Both branches agree at rho = 1/2.
        let m = weibull();
        let g = 5.0 / 3.0;
        let at_half = brown_bound(&m, 0.5).unwrap();
        assert!((at_half - 2.0 * g * 0.5).abs() < 1e-12);
        assert!((at_half - g * 0.5 / 0.5).abs() < 1e-12);
        // Third-moment gate.
        assert!(brown_bound(&aw(), 0.5).is_err());
        assert!(brown_bound(&ClaimModel::pareto(2.5, 1.0).unwrap(), 0.5).is_err());
    }

    #[test]
    fn extended_bound_examples() {
        assert!((extended_bound(&weibull(), 0.82).unwrap() - 0.78).abs() < 5e-4);
        assert!((extended_bound(&pareto(), 0.82).unwrap() - 0.90).abs() < 5e-4);
        // The published 0.568 for Pareto(15.6, 2.7) was computed with gamma
        // rounded to 1.079; the exact value is 0.56857.
        let p2 = ClaimModel::pareto(15.6, 2.7).unwrap();
        assert!((extended_bound(&p2, 0.82).unwrap() - 0.568).abs() < 1e-3);
        // Exactly Brown + (1 - rho).
        for rho in [0.2, 0.5, 0.82, 0.97] {
            let diff =
                extended_bound(&weibull(), rho).unwrap() - brown_bound(&weibull(), rho).unwrap();
            assert!((diff - (1.0 - rho)).abs() < 1e-15);
        }
    }

    #[test]
    fn matched_phase_examples() {
        assert_eq!(matched_phases(&weibull(), 0.82).unwrap(), 5);
        assert_eq!(matched_phases(&weibull(), 0.97).unwrap(), 248);
        assert_eq!(matched_phases(&pareto(), 0.97).unwrap(), 215);
        assert!(matched_phases(&aw(), 0.5).is_err());
    }
}
