//! Experiment descriptions: what to run, on which grid, and where the
//! output goes.

use crate::distributions::ClaimModel;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    /// Fixed load, several phase counts, one table of approximations and
    /// errors against the reference.
    PhasesImpact,
    /// Fixed target bound, several loads; phase counts derived from the
    /// bound, error functions measured per load.
    BoundQuality,
    /// Spectral vs heavy-tail vs heavy-traffic columns over the range where
    /// the reference exceeds the bound.
    ApproxComparison,
    /// Per load: heavy-traffic bound, matching phase count `k*`, and the
    /// measured maximum errors of both approximations.
    BoundMatching,
    /// One-shot evaluation at explicit capital values.
    SingleQuery,
}

impl ExperimentKind {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "phases-impact" => Self::PhasesImpact,
            "bound-quality" => Self::BoundQuality,
            "approx-comparison" => Self::ApproxComparison,
            "bound-matching" => Self::BoundMatching,
            "single-query" => Self::SingleQuery,
            other => {
                return Err(Error::domain(format!(
                    "unknown experiment kind '{other}' (expected phases-impact, bound-quality, \
                     approx-comparison, bound-matching or single-query)"
                )))
            }
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::PhasesImpact => "phases-impact",
            Self::BoundQuality => "bound-quality",
            Self::ApproxComparison => "approx-comparison",
            Self::BoundMatching => "bound-matching",
            Self::SingleQuery => "single-query",
        }
    }
}

/// Where the evaluation points come from.
#[derive(Debug, Clone, PartialEq)]
pub enum GridPolicy {
    /// Caller-provided capital values, echoed verbatim.
    Explicit(Vec<f64>),
    /// 500 log-spaced-plus-linear points from 0 to a crossing of the
    /// reference; the crossing level depends on the experiment kind (the
    /// bound itself for display grids, a quarter of it for max-error
    /// measurement).
    Auto,
}

pub const DEFAULT_SAMPLES: u64 = 1_000_000;
pub const DEFAULT_SEED: u64 = 20130224;
pub const DEFAULT_DIGITS: usize = 6;
pub const AUTO_GRID_POINTS: usize = 500;

/// A full experiment description. Deterministic output is a function of
/// this value alone (the Monte Carlo seed is part of it).
#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub kind: ExperimentKind,
    pub model: ClaimModel,
    pub rhos: Vec<f64>,
    /// Explicit phase counts (phases-impact; optional single-query).
    pub ks: Vec<usize>,
    /// Target bound (bound-quality, approx-comparison; optional
    /// single-query).
    pub delta: Option<f64>,
    pub grid: GridPolicy,
    /// Capital values for single-query.
    pub us: Vec<f64>,
    pub samples: u64,
    pub seed: u64,
    pub digits: usize,
}

impl ExperimentSpec {
    /// Check the cross-field rules: which of `k`/`delta` the kind needs,
    /// load counts, admissible ranges.
    pub fn validate(&self) -> Result<()> {
        if self.rhos.is_empty() {
            return Err(Error::domain("at least one load (--rho) is required"));
        }
        for &rho in &self.rhos {
            if !(rho > 0.0 && rho < 1.0) {
                return Err(Error::domain(format!(
                    "load must lie strictly inside (0,1), got {rho}"
                )));
            }
        }
        for &k in &self.ks {
            if k == 0 {
                return Err(Error::domain("phase counts must be at least 1"));
            }
        }
        if let Some(d) = self.delta {
            if !(d > 0.0) {
                return Err(Error::domain(format!(
                    "bound target must be positive, got {d}"
                )));
            }
        }
        for &u in &self.us {
            if !(u.is_finite() && u >= 0.0) {
                return Err(Error::domain(format!(
                    "capital must be finite and >= 0, got {u}"
                )));
            }
        }
        if self.samples == 0 {
            return Err(Error::domain("sample count must be at least 1"));
        }
        if self.digits == 0 || self.digits > 17 {
            return Err(Error::domain("digits must lie in 1..=17"));
        }
        if let GridPolicy::Explicit(g) = &self.grid {
            if g.is_empty() {
                return Err(Error::domain("explicit grid must not be empty"));
            }
            for &u in g {
                if !(u.is_finite() && u >= 0.0) {
                    return Err(Error::domain(format!(
                        "grid points must be finite and >= 0, got {u}"
                    )));
                }
            }
            for w in g.windows(2) {
                if !(w[0] < w[1]) {
                    return Err(Error::domain("explicit grid must be strictly increasing"));
                }
            }
        }

        use ExperimentKind::*;
        match self.kind {
            PhasesImpact => {
                if self.ks.is_empty() {
                    return Err(Error::domain("phases-impact needs phase counts (--k)"));
                }
                if self.delta.is_some() {
                    return Err(Error::domain(
                        "phases-impact takes phase counts, not a bound target (--delta)",
                    ));
                }
                if self.rhos.len() != 1 {
                    return Err(Error::domain("phases-impact runs at a single load"));
                }
            }
            BoundQuality | ApproxComparison => {
                if self.delta.is_none() {
                    return Err(Error::domain(format!(
                        "{} needs a bound target (--delta)",
                        self.kind.name()
                    )));
                }
                if !self.ks.is_empty() {
                    return Err(Error::domain(format!(
                        "{} derives phase counts from the bound; do not pass --k",
                        self.kind.name()
                    )));
                }
            }
            BoundMatching => {
                if !self.ks.is_empty() || self.delta.is_some() {
                    return Err(Error::domain(
                        "bound-matching derives both the bound and the phase count; \
                         do not pass --k or --delta",
                    ));
                }
            }
            SingleQuery => {
                if self.us.is_empty() {
                    return Err(Error::domain("single-query needs capital values (--u)"));
                }
                if self.rhos.len() != 1 {
                    return Err(Error::domain("single-query runs at a single load"));
                }
                match (self.ks.len(), self.delta) {
                    (1, None) | (0, Some(_)) => {}
                    (0, None) => {
                        return Err(Error::domain(
                            "single-query needs exactly one of --k or --delta",
                        ))
                    }
                    _ => {
                        return Err(Error::domain(
                            "single-query takes exactly one of --k or --delta, not both",
                        ))
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base(kind: ExperimentKind) -> ExperimentSpec {
        ExperimentSpec {
            kind,
            model: ClaimModel::pareto(4.0, 3.0).unwrap(),
            rhos: vec![0.5],
            ks: vec![],
            delta: None,
            grid: GridPolicy::Auto,
            us: vec![],
            samples: 1000,
            seed: 1,
            digits: 6,
        }
    }

    #[test]
    fn kind_parsing_round_trips() {
        for name in [
            "phases-impact",
            "bound-quality",
            "approx-comparison",
            "bound-matching",
            "single-query",
        ] {
            assert_eq!(ExperimentKind::parse(name).unwrap().name(), name);
        }
        assert!(ExperimentKind::parse("nope").is_err());
    }

    #[test]
    fn exactly_one_of_k_or_delta() {
        let mut s = base(ExperimentKind::SingleQuery);
        s.us = vec![1.0];
        assert!(s.validate().is_err()); // neither
        s.ks = vec![10];
        assert!(s.validate().is_ok());
        s.delta = Some(0.02);
        assert!(s.validate().is_err()); // both
        s.ks.clear();
        assert!(s.validate().is_ok()); // delta only

        let mut p = base(ExperimentKind::PhasesImpact);
        assert!(p.validate().is_err());
        p.ks = vec![10, 20];
        assert!(p.validate().is_ok());
        p.delta = Some(0.1);
        assert!(p.validate().is_err());

        let mut b = base(ExperimentKind::BoundQuality);
        assert!(b.validate().is_err());
        b.delta = Some(0.02);
        assert!(b.validate().is_ok());
    }

    #[test]
    fn range_checks() {
        let mut s = base(ExperimentKind::BoundMatching);
        s.rhos = vec![1.5];
        assert!(s.validate().is_err());
        s.rhos = vec![];
        assert!(s.validate().is_err());
        s.rhos = vec![0.9];
        assert!(s.validate().is_ok());
        s.grid = GridPolicy::Explicit(vec![1.0, 0.5]);
        assert!(s.validate().is_err());
    }
}
