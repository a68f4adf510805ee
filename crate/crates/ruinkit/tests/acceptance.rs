//! Acceptance suite: one test per release criterion, each printing a
//! PASS line with the measured numbers (visible with `--nocapture`).
//!
//! Reference values come from the published tables for this model family;
//! tolerances follow the printed precision of each table plus, where a
//! measurement grid is involved, a 5% allowance for grid policy.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ruinkit::classic::{extended_bound, matched_phases};
use ruinkit::cli::measurement_grid;
use ruinkit::distributions::ClaimModel;
use ruinkit::oracle::{exact_ruin_abate_whitt, grid_convolve, mc_ruin, McConfig};
use ruinkit::pk::{
    certified_bound, hyperexp_lt, phases_for_bound, residues, solve_roots, RuinSolution,
};
use ruinkit::spectral::fit_hyperexp;

fn aw() -> ClaimModel {
    ClaimModel::abate_whitt(2.0).unwrap()
}
fn weibull() -> ClaimModel {
    ClaimModel::weibull_half(3.0).unwrap()
}
fn pareto() -> ClaimModel {
    ClaimModel::pareto(4.0, 3.0).unwrap()
}
fn families() -> [ClaimModel; 3] {
    [aw(), weibull(), pareto()]
}

/// Criterion 1: phase counts for the 0.02 bound at loads 0.1/0.5/0.9.
#[test]
fn c01_phase_count_formula() {
    let got = [
        phases_for_bound(0.02, 0.1),
        phases_for_bound(0.02, 0.5),
        phases_for_bound(0.02, 0.9),
    ];
    assert_eq!(got, [5, 49, 449]);
    println!("PASS criterion 1: phases_for_bound(0.02, {{0.1,0.5,0.9}}) = {got:?}");
}

/// Bound columns of the reference ratio tables, printed to 3 decimals.
const BOUND_TABLE: [(usize, [f64; 9]); 3] = [
    (
        10,
        [
            0.010, 0.023, 0.039, 0.061, 0.091, 0.136, 0.212, 0.364, 0.818,
        ],
    ),
    (
        20,
        [
            0.005, 0.012, 0.020, 0.032, 0.048, 0.071, 0.111, 0.190, 0.429,
        ],
    ),
    (
        100,
        [
            0.001, 0.002, 0.004, 0.007, 0.010, 0.015, 0.023, 0.040, 0.089,
        ],
    ),
];

/// Criterion 2: certified bound reproduces all 27 printed entries exactly
/// (after rounding to the printed 3 decimals).
#[test]
fn c02_certified_bound_table() {
    for (k, bounds) in BOUND_TABLE {
        for (i, &printed) in bounds.iter().enumerate() {
            let rho = (i + 1) as f64 / 10.0;
            let bound = certified_bound(1.0 / (k as f64 + 1.0), rho);
            let rounded = (bound * 1000.0).round() / 1000.0;
            assert!(
                (rounded - printed).abs() < 1e-12,
                "k={k} rho={rho}: bound {bound} rounds to {rounded}, table says {printed}"
            );
        }
    }
    println!("PASS criterion 2: all 27 certified-bound entries match to 3 decimals");
}

/// Max-error columns of the reference ratio tables (4 decimals).
const MAX_ERR_TABLE: [(usize, [f64; 9]); 3] = [
    (
        10,
        [
            0.0048, 0.0106, 0.0180, 0.0275, 0.0401, 0.0580, 0.0849, 0.1299, 0.2263,
        ],
    ),
    (
        20,
        [
            0.0026, 0.0057, 0.0097, 0.0150, 0.0222, 0.0326, 0.0490, 0.0787, 0.1479,
        ],
    ),
    (
        100,
        [
            0.0005, 0.0012, 0.0021, 0.0033, 0.0049, 0.0073, 0.0112, 0.0189, 0.0406,
        ],
    ),
];

/// Criterion 3: end-to-end certified bound. For every (rho, k) cell the
/// measured max |psi_exact - psi_spectral| over the auto grid stays under
/// the certified bound, reproduces the published max-error column within
/// 5% (plus the half-ulp of its 4-decimal print), and the bound/error
/// ratio is at least 2.
#[test]
fn c03_bound_holds_and_max_errors_reproduce() {
    let mu = 2.0;
    let mut worst_ratio = f64::INFINITY;
    for (k, errs) in MAX_ERR_TABLE {
        let hx = fit_hyperexp(&aw(), k).unwrap();
        for (i, &printed) in errs.iter().enumerate() {
            let rho = (i + 1) as f64 / 10.0;
            let sol = RuinSolution::solve(&hx, rho).unwrap();
            let delta = sol.delta();
            let psi = |u: f64| exact_ruin_abate_whitt(mu, rho, u).unwrap();
            let grid = measurement_grid(&psi, delta, 500).unwrap();
            let max_err = grid
                .iter()
                .map(|&u| (psi(u) - sol.ruin(u)).abs())
                .fold(0.0, f64::max);
            assert!(
                max_err <= delta,
                "k={k} rho={rho}: measured {max_err} exceeds certified {delta}"
            );
            // Print rounding of the reference column is half a unit in the
            // fourth decimal; the 5% on top is grid-policy allowance.
            let lo = 0.95 * (printed - 5e-5);
            let hi = 1.05 * (printed + 5e-5);
            assert!(
                (lo..=hi).contains(&max_err),
                "k={k} rho={rho}: measured {max_err} outside [{lo}, {hi}] around printed {printed}"
            );
            let ratio = delta / max_err;
            assert!(ratio >= 2.0, "k={k} rho={rho}: ratio {ratio} < 2");
            worst_ratio = worst_ratio.min(ratio);
        }
    }
    println!(
        "PASS criterion 3: 27 cells within bound, reproduce the max-error column, \
         smallest ratio {worst_ratio:.3}"
    );
}

/// Criterion 4: extended heavy-traffic bound columns, printed to 2
/// decimals.
#[test]
fn c04_extended_bound_tables() {
    let rhos = [0.82, 0.85, 0.88, 0.91, 0.94, 0.97];
    let weibull_col = [0.78, 0.65, 0.52, 0.39, 0.26, 0.13];
    let pareto_col = [0.90, 0.75, 0.60, 0.45, 0.30, 0.15];
    for (model, col) in [(weibull(), weibull_col), (pareto(), pareto_col)] {
        for (&rho, &printed) in rhos.iter().zip(&col) {
            let bound = extended_bound(&model, rho).unwrap();
            let rounded = (bound * 100.0).round() / 100.0;
            assert!(
                (rounded - printed).abs() < 1e-12,
                "{model} rho={rho}: {bound} rounds to {rounded}, table says {printed}"
            );
        }
    }
    println!("PASS criterion 4: both heavy-traffic bound columns match to 2 decimals");
}

/// Criterion 5: matched phase counts within one of the published columns
/// (the publication does not state its rounding convention).
#[test]
fn c05_matched_phase_counts() {
    let rhos = [0.82, 0.85, 0.88, 0.91, 0.94, 0.97];
    let weibull_col: [usize; 6] = [5, 8, 13, 25, 59, 248];
    let pareto_col: [usize; 6] = [4, 7, 11, 21, 51, 215];
    let mut shown = Vec::new();
    for (model, col) in [(weibull(), weibull_col), (pareto(), pareto_col)] {
        for (&rho, &printed) in rhos.iter().zip(&col) {
            let k = matched_phases(&model, rho).unwrap();
            let diff = k.abs_diff(printed);
            assert!(
                diff <= 1,
                "{model} rho={rho}: k* = {k}, table says {printed}"
            );
            shown.push(k);
        }
    }
    println!("PASS criterion 5: k* columns within one of the tables: {shown:?}");
}

/// Criterion 6: Monte Carlo reproduces the published reference columns of
/// the Weibull and Pareto tables within 3 half-widths.
#[test]
fn c06_monte_carlo_cross_validation() {
    let cases: [(ClaimModel, &[f64], &[f64]); 2] = [
        (
            weibull(),
            &[0.0, 5.0, 10.0, 15.0, 20.0, 25.0],
            &[0.70000, 0.60745, 0.54574, 0.49580, 0.45312, 0.41603],
        ),
        (
            pareto(),
            &[0.0, 0.10, 0.55, 1.00, 1.45, 1.90],
            &[0.70000, 0.54805, 0.23572, 0.11499, 0.05983, 0.03215],
        ),
    ];
    for (model, grid, expected) in cases {
        let cfg = McConfig::new(1_000_000, 20130224, grid.to_vec()).unwrap();
        let est = mc_ruin(&model, 0.7, &cfg).unwrap();
        for i in 0..grid.len() {
            let err = (est.estimates[i] - expected[i]).abs();
            let tol = 3.0 * est.half_widths[i].max(1e-4);
            assert!(
                err <= tol,
                "{model} u={}: estimate {} vs published {} (|diff| {err} > {tol})",
                grid[i],
                est.estimates[i],
                expected[i]
            );
        }
        println!("PASS criterion 6: {model} reference column reproduced within 3 half-widths");
    }
}

/// Criterion 7: the fit guarantee. Dense-grid sup norm between the excess
/// tail and the fitted hyperexponential stays within 1/(k+1) for every
/// family and phase count.
#[test]
fn c07_sup_norm_fit_bound() {
    for model in families() {
        let u_max = model.excess_ccdf_crossing(1e-4).unwrap();
        for k in [1usize, 5, 10, 20, 100] {
            let hx = fit_hyperexp(&model, k).unwrap();
            let eps = 1.0 / (k as f64 + 1.0);
            let mut sup = 0.0f64;
            for i in 0..=2000 {
                let u = u_max * i as f64 / 2000.0;
                sup = sup.max((model.excess_ccdf(u) - hx.ccdf(u)).abs());
            }
            assert!(
                sup <= eps,
                "{model} k={k}: sup-norm {sup} exceeds epsilon {eps}"
            );
        }
    }
    println!(
        "PASS criterion 7: sup-norm fit bound holds for all families and k in {{1,5,10,20,100}}"
    );
}

/// Criterion 8: convolution bound. On a uniform grid the n-fold convolved
/// cdfs of the true and fitted excess distributions differ by at most
/// n*eps (+0.1 eps discretization slack) for n = 2, 3 at k = 10.
#[test]
fn c08_convolution_bound() {
    // Per-family grid spans: far enough that the cdfs move well away from
    // 0, small enough steps that trapezoid error stays under 0.1*eps.
    let spans: [(ClaimModel, f64); 3] = [(aw(), 50.0), (weibull(), 260.0), (pareto(), 4.0)];
    let n_points = 4001usize;
    for (model, span) in spans {
        let hx = fit_hyperexp(&model, 10).unwrap();
        let eps = hx.accuracy();
        let grid: Vec<f64> = (0..n_points)
            .map(|i| span * i as f64 / (n_points - 1) as f64)
            .collect();
        let true_cdf: Vec<f64> = grid.iter().map(|&u| 1.0 - model.excess_ccdf(u)).collect();
        let fit_cdf: Vec<f64> = grid.iter().map(|&u| 1.0 - hx.ccdf(u)).collect();

        let mut conv_true = true_cdf.clone();
        let mut conv_fit = fit_cdf.clone();
        for n in 2..=3 {
            conv_true = grid_convolve(&conv_true, &true_cdf, &grid).unwrap();
            conv_fit = grid_convolve(&conv_fit, &fit_cdf, &grid).unwrap();
            let sup = conv_true
                .iter()
                .zip(&conv_fit)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            let allowed = n as f64 * eps + 0.1 * eps;
            assert!(
                sup <= allowed,
                "{model} n={n}: convolved difference {sup} exceeds {allowed}"
            );
        }
    }
    println!("PASS criterion 8: n-fold convolution bound holds (n = 2, 3; k = 10; all families)");
}

/// Criterion 9: solver structure on randomized instances — interlacing,
/// positive coefficients summing to 1, and the transform identity.
#[test]
fn c09_solver_structure_randomized() {
    let mut rng = ChaCha8Rng::seed_from_u64(20130224);
    let models = families();
    for trial in 0..100 {
        let model = models[trial % 3];
        let k = rng.gen_range(1..=50);
        let rho: f64 = rng.gen_range(0.05..0.95);
        let hx = fit_hyperexp(&model, k).unwrap();
        let etas = solve_roots(&hx, rho).unwrap();

        let rates = hx.rates();
        assert_eq!(etas.len(), rates.len());
        for (i, &eta) in etas.iter().enumerate() {
            let lo = if i == 0 { 0.0 } else { rates[i - 1] };
            assert!(lo < eta && eta < rates[i], "interlacing violated");
        }

        let rs = residues(&hx, rho, &etas).unwrap();
        assert!(rs.iter().all(|&r| r > 0.0));
        let sum: f64 = rs.iter().sum();
        assert!((sum - 1.0).abs() <= 1e-10, "coefficient sum {sum}");

        let s_max = 10.0 * rates.last().unwrap();
        for _ in 0..20 {
            let s: f64 = rng.gen_range(0.0..s_max);
            let lt = hyperexp_lt(&hx, s);
            let direct = (1.0 - rho) / (1.0 - rho * lt);
            let mixture: f64 = (1.0 - rho)
                + rho
                    * rs.iter()
                        .zip(&etas)
                        .map(|(r, eta)| r * eta / (eta + s))
                        .sum::<f64>();
            assert!(
                (mixture - direct).abs() <= 1e-10,
                "transform identity off by {:e} (k={k}, rho={rho}, s={s})",
                (mixture - direct).abs()
            );
        }
    }
    println!("PASS criterion 9: 100 randomized solves have clean structure");
}

/// Criterion 10: the single-phase (classical exponential-service) case in
/// closed form to machine precision.
#[test]
fn c10_single_phase_closed_form() {
    for lambda in [0.5, 1.0, 2.7] {
        let hx = ruinkit::HyperExp::new(vec![lambda], vec![1.0]).unwrap();
        for rho in [0.1, 0.5, 0.9] {
            let sol = RuinSolution::solve(&hx, rho).unwrap();
            for u in [0.0, 0.5, 2.0, 10.0] {
                let want = rho * (-lambda * (1.0 - rho) * u).exp();
                let got = sol.ruin(u);
                assert!(
                    (got - want).abs() <= 1e-13 * want.max(1e-300),
                    "lambda={lambda} rho={rho} u={u}: {got} vs {want}"
                );
            }
        }
    }
    println!("PASS criterion 10: single-phase solutions are exact to machine precision");
}
