//! C ABI over the ruinkit library.
//!
//! Conventions:
//!
//! * Handles (`RkModel`, `RkHyperExp`, `RkRuinSolution`) are opaque; create
//!   them with the `rk_*` constructors and release them with the matching
//!   `rk_*_free`. Passing a handle to any function other than its `free`
//!   never transfers ownership.
//! * Every fallible call returns an [`RkStatus`]; results travel through
//!   `out` pointers that are written only when the status is `RK_STATUS_OK`.
//!   Status codes mirror the CLI exit codes: 2 for domain errors, 3 for
//!   numeric failures; 1 flags null/invalid pointers and arguments.
//! * After a non-OK status, [`rk_last_error_message`] retrieves a
//!   human-readable description for the calling thread.
//! * All functions are thread-safe; handles are immutable and may be shared
//!   across threads as long as `free` is called exactly once, after all
//!   other uses.

// Negated comparisons like `!(x > 0.0)` deliberately classify NaN as out
// of domain.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use ruinkit::distributions::Moment;
use ruinkit::error::Error;
use ruinkit::{ClaimModel, HyperExp, McConfig, RuinSolution};
use std::cell::RefCell;
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Status code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RkStatus {
    /// Success; out parameters are valid.
    Ok = 0,
    /// Null pointer or structurally invalid argument.
    InvalidArgument = 1,
    /// Input outside the mathematical domain of the operation.
    DomainError = 2,
    /// A numerical procedure failed to converge or was inconsistent.
    NumericError = 3,
}

thread_local! {
    static LAST_ERROR: RefCell<Vec<u8>> = const { RefCell::new(Vec::new()) };
}

fn set_error(msg: &str) {
    LAST_ERROR.with(|slot| {
        let mut v = slot.borrow_mut();
        v.clear();
        v.extend_from_slice(msg.as_bytes());
        v.push(0);
    });
}

fn fail(status: RkStatus, msg: &str) -> RkStatus {
    set_error(msg);
    status
}

fn from_error(e: Error) -> RkStatus {
    let status = match e {
        Error::Domain(_) => RkStatus::DomainError,
        Error::Numeric(_) => RkStatus::NumericError,
    };
    fail(status, &e.to_string())
}

/// Run a body, converting panics into `NumericError` instead of unwinding
/// across the C boundary.
fn guarded<F: FnOnce() -> RkStatus>(body: F) -> RkStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => fail(RkStatus::NumericError, "internal panic"),
    }
}

/// Copy the calling thread's last error message into `buf` (NUL
/// terminated, truncated to `cap` bytes). Returns the full length of the
/// message including the terminator, or 0 when no error is recorded.
///
/// # Safety
/// `buf` must point to `cap` writable bytes, or be null (then only the
/// required length is returned).
#[no_mangle]
pub unsafe extern "C" fn rk_last_error_message(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|slot| {
        let v = slot.borrow();
        if v.is_empty() {
            return 0;
        }
        if !buf.is_null() && cap > 0 {
            let n = v.len().min(cap);
            std::ptr::copy_nonoverlapping(v.as_ptr() as *const c_char, buf, n);
            // Guarantee termination even when truncated.
            *buf.add(n - 1) = 0;
        }
        v.len()
    })
}

/// Opaque claim-size model handle.
pub struct RkModel(ClaimModel);
/// Opaque hyperexponential-fit handle.
pub struct RkHyperExp(HyperExp);
/// Opaque ruin-solution handle.
pub struct RkRuinSolution(RuinSolution);

unsafe fn write_out<T>(out: *mut T, value: T) -> RkStatus {
    if out.is_null() {
        return fail(RkStatus::InvalidArgument, "null out pointer");
    }
    *out = value;
    RkStatus::Ok
}

fn model_from(result: Result<ClaimModel, Error>, out: *mut *mut RkModel) -> RkStatus {
    if out.is_null() {
        return fail(RkStatus::InvalidArgument, "null out pointer");
    }
    match result {
        Ok(model) => {
            unsafe { *out = Box::into_raw(Box::new(RkModel(model))) };
            RkStatus::Ok
        }
        Err(e) => from_error(e),
    }
}

/// Create an Abate-Whitt claim model (mean `1/mu`, higher moments
/// infinite).
///
/// # Safety
/// `out` must be a valid pointer to an `RkModel*`.
#[no_mangle]
pub unsafe extern "C" fn rk_model_abate_whitt(mu: f64, out: *mut *mut RkModel) -> RkStatus {
    model_from(ClaimModel::abate_whitt(mu), out)
}

/// Create a Weibull claim model with shape 1/2 and scale `a`.
///
/// # Safety
/// `out` must be a valid pointer to an `RkModel*`.
#[no_mangle]
pub unsafe extern "C" fn rk_model_weibull_half(a: f64, out: *mut *mut RkModel) -> RkStatus {
    model_from(ClaimModel::weibull_half(a), out)
}

/// Create a Pareto claim model with tail `(1 + b u)^(-alpha)`; `alpha > 1`.
///
/// # Safety
/// `out` must be a valid pointer to an `RkModel*`.
#[no_mangle]
pub unsafe extern "C" fn rk_model_pareto(alpha: f64, b: f64, out: *mut *mut RkModel) -> RkStatus {
    model_from(ClaimModel::pareto(alpha, b), out)
}

/// Release a model handle. Null is ignored.
///
/// # Safety
/// `model` must have come from an `rk_model_*` constructor and must not be
/// used afterwards.
#[no_mangle]
pub unsafe extern "C" fn rk_model_free(model: *mut RkModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

unsafe fn model_ref<'a>(model: *const RkModel) -> Result<&'a ClaimModel, RkStatus> {
    model
        .as_ref()
        .map(|m| &m.0)
        .ok_or_else(|| fail(RkStatus::InvalidArgument, "null model handle"))
}

/// Mean claim size.
///
/// # Safety
/// `model` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rk_model_mean(model: *const RkModel, out: *mut f64) -> RkStatus {
    match model_ref(model) {
        Ok(m) => write_out(out, m.mean()),
        Err(s) => s,
    }
}

/// First three raw moments; diverging moments come back as `INFINITY`.
///
/// # Safety
/// `model` must be a live handle; `m1`, `m2`, `m3` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn rk_model_moments(
    model: *const RkModel,
    m1: *mut f64,
    m2: *mut f64,
    m3: *mut f64,
) -> RkStatus {
    let m = match model_ref(model) {
        Ok(m) => m,
        Err(s) => return s,
    };
    if m1.is_null() || m2.is_null() || m3.is_null() {
        return fail(RkStatus::InvalidArgument, "null out pointer");
    }
    let ms = m.moments();
    let as_f64 = |mm: Moment| mm.finite().unwrap_or(f64::INFINITY);
    *m1 = ms.m1;
    *m2 = as_f64(ms.m2);
    *m3 = as_f64(ms.m3);
    RkStatus::Ok
}

fn check_u(u: f64) -> Result<(), RkStatus> {
    if u.is_finite() && u >= 0.0 {
        Ok(())
    } else {
        Err(fail(
            RkStatus::DomainError,
            &format!("capital must be finite and >= 0, got {u}"),
        ))
    }
}

/// Tail of the claim-size distribution at `u >= 0`.
///
/// # Safety
/// `model` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rk_claim_ccdf(model: *const RkModel, u: f64, out: *mut f64) -> RkStatus {
    match (model_ref(model), check_u(u)) {
        (Ok(m), Ok(())) => write_out(out, m.claim_ccdf(u)),
        (Err(s), _) | (_, Err(s)) => s,
    }
}

/// Tail of the stationary-excess distribution at `u >= 0`.
///
/// # Safety
/// `model` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rk_excess_ccdf(model: *const RkModel, u: f64, out: *mut f64) -> RkStatus {
    match (model_ref(model), check_u(u)) {
        (Ok(m), Ok(())) => write_out(out, m.excess_ccdf(u)),
        (Err(s), _) | (_, Err(s)) => s,
    }
}

/// `zeta(u) = e^u erfc(sqrt(u))`, evaluated without overflow.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rk_zeta(u: f64, out: *mut f64) -> RkStatus {
    match check_u(u) {
        Ok(()) => write_out(out, ruinkit::zeta(u)),
        Err(s) => s,
    }
}

/// Mixing (spectral) cdf of the excess distribution at `y >= 0`.
///
/// # Safety
/// `model` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rk_spectral_cdf(model: *const RkModel, y: f64, out: *mut f64) -> RkStatus {
    let m = match model_ref(model) {
        Ok(m) => m,
        Err(s) => return s,
    };
    guarded(|| match ruinkit::spectral::spectral_cdf(m, y) {
        Ok(v) => write_out(out, v),
        Err(e) => from_error(e),
    })
}

/// Quantile of the mixing cdf at level `p` in (0,1).
///
/// # Safety
/// `model` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rk_spectral_quantile(
    model: *const RkModel,
    p: f64,
    out: *mut f64,
) -> RkStatus {
    let m = match model_ref(model) {
        Ok(m) => m,
        Err(s) => return s,
    };
    guarded(|| match ruinkit::spectral::spectral_quantile(m, p) {
        Ok(v) => write_out(out, v),
        Err(e) => from_error(e),
    })
}

/// Fit the k-phase equal-weight hyperexponential to the excess
/// distribution (sup-norm accuracy `1/(k+1)`).
///
/// # Safety
/// `model` must be a live handle; `out` a valid pointer to an
/// `RkHyperExp*`.
#[no_mangle]
pub unsafe extern "C" fn rk_fit_hyperexp(
    model: *const RkModel,
    k: usize,
    out: *mut *mut RkHyperExp,
) -> RkStatus {
    let m = match model_ref(model) {
        Ok(m) => m,
        Err(s) => return s,
    };
    if out.is_null() {
        return fail(RkStatus::InvalidArgument, "null out pointer");
    }
    guarded(|| match ruinkit::fit_hyperexp(m, k) {
        Ok(hx) => {
            *out = Box::into_raw(Box::new(RkHyperExp(hx)));
            RkStatus::Ok
        }
        Err(e) => from_error(e),
    })
}

/// Release a hyperexponential handle. Null is ignored.
///
/// # Safety
/// `hx` must have come from `rk_fit_hyperexp` and must not be used
/// afterwards.
#[no_mangle]
pub unsafe extern "C" fn rk_hyperexp_free(hx: *mut RkHyperExp) {
    if !hx.is_null() {
        drop(Box::from_raw(hx));
    }
}

unsafe fn hyperexp_ref<'a>(hx: *const RkHyperExp) -> Result<&'a HyperExp, RkStatus> {
    hx.as_ref()
        .map(|h| &h.0)
        .ok_or_else(|| fail(RkStatus::InvalidArgument, "null hyperexponential handle"))
}

/// Number of phases of a fit.
///
/// # Safety
/// `hx` must be a live handle; null yields 0.
#[no_mangle]
pub unsafe extern "C" fn rk_hyperexp_phases(hx: *const RkHyperExp) -> usize {
    hyperexp_ref(hx).map(|h| h.phases()).unwrap_or(0)
}

/// Guaranteed sup-norm accuracy `epsilon` of the fit.
///
/// # Safety
/// `hx` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rk_hyperexp_accuracy(hx: *const RkHyperExp, out: *mut f64) -> RkStatus {
    match hyperexp_ref(hx) {
        Ok(h) => write_out(out, h.accuracy()),
        Err(s) => s,
    }
}

unsafe fn copy_slice(src: &[f64], buf: *mut f64, len: usize) -> RkStatus {
    if buf.is_null() {
        return fail(RkStatus::InvalidArgument, "null buffer");
    }
    if len != src.len() {
        return fail(
            RkStatus::InvalidArgument,
            &format!("buffer holds {len} values, need {}", src.len()),
        );
    }
    std::ptr::copy_nonoverlapping(src.as_ptr(), buf, src.len());
    RkStatus::Ok
}

/// Copy the fitted rates into `buf` (`len` must equal the phase count).
///
/// # Safety
/// `hx` must be a live handle; `buf` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn rk_hyperexp_rates(
    hx: *const RkHyperExp,
    buf: *mut f64,
    len: usize,
) -> RkStatus {
    match hyperexp_ref(hx) {
        Ok(h) => copy_slice(h.rates(), buf, len),
        Err(s) => s,
    }
}

/// Copy the fitted weights into `buf` (`len` must equal the phase count).
///
/// # Safety
/// `hx` must be a live handle; `buf` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn rk_hyperexp_weights(
    hx: *const RkHyperExp,
    buf: *mut f64,
    len: usize,
) -> RkStatus {
    match hyperexp_ref(hx) {
        Ok(h) => copy_slice(h.weights(), buf, len),
        Err(s) => s,
    }
}

/// Tail of the fitted hyperexponential at `u >= 0`.
///
/// # Safety
/// `hx` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rk_hyperexp_ccdf(
    hx: *const RkHyperExp,
    u: f64,
    out: *mut f64,
) -> RkStatus {
    match (hyperexp_ref(hx), check_u(u)) {
        (Ok(h), Ok(())) => write_out(out, h.ccdf(u)),
        (Err(s), _) | (_, Err(s)) => s,
    }
}

/// Laplace transform of the fit at real `s >= 0`.
///
/// # Safety
/// `hx` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rk_hyperexp_lt(hx: *const RkHyperExp, s: f64, out: *mut f64) -> RkStatus {
    if !(s.is_finite() && s >= 0.0) {
        return fail(
            RkStatus::DomainError,
            &format!("transform argument must be finite and >= 0, got {s}"),
        );
    }
    match hyperexp_ref(hx) {
        Ok(h) => write_out(out, ruinkit::pk::hyperexp_lt(h, s)),
        Err(st) => st,
    }
}

/// Solve the ruin system for load `rho` in (0,1).
///
/// # Safety
/// `hx` must be a live handle; `out` a valid pointer to an
/// `RkRuinSolution*`.
#[no_mangle]
pub unsafe extern "C" fn rk_solve(
    hx: *const RkHyperExp,
    rho: f64,
    out: *mut *mut RkRuinSolution,
) -> RkStatus {
    let h = match hyperexp_ref(hx) {
        Ok(h) => h,
        Err(s) => return s,
    };
    if out.is_null() {
        return fail(RkStatus::InvalidArgument, "null out pointer");
    }
    guarded(|| match RuinSolution::solve(h, rho) {
        Ok(sol) => {
            *out = Box::into_raw(Box::new(RkRuinSolution(sol)));
            RkStatus::Ok
        }
        Err(e) => from_error(e),
    })
}

/// Release a solution handle. Null is ignored.
///
/// # Safety
/// `sol` must have come from `rk_solve` and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn rk_solution_free(sol: *mut RkRuinSolution) {
    if !sol.is_null() {
        drop(Box::from_raw(sol));
    }
}

unsafe fn solution_ref<'a>(sol: *const RkRuinSolution) -> Result<&'a RuinSolution, RkStatus> {
    sol.as_ref()
        .map(|s| &s.0)
        .ok_or_else(|| fail(RkStatus::InvalidArgument, "null solution handle"))
}

/// Number of exponential terms of a solution.
///
/// # Safety
/// `sol` must be a live handle; null yields 0.
#[no_mangle]
pub unsafe extern "C" fn rk_solution_phases(sol: *const RkRuinSolution) -> usize {
    solution_ref(sol).map(|s| s.phases()).unwrap_or(0)
}

/// Spectral ruin-probability approximation at capital `u >= 0`.
///
/// # Safety
/// `sol` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rk_solution_ruin(
    sol: *const RkRuinSolution,
    u: f64,
    out: *mut f64,
) -> RkStatus {
    match (solution_ref(sol), check_u(u)) {
        (Ok(s), Ok(())) => write_out(out, s.ruin(u)),
        (Err(st), _) | (_, Err(st)) => st,
    }
}

/// Certified uniform error bound `delta = epsilon rho/(1-rho)`.
///
/// # Safety
/// `sol` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rk_solution_delta(sol: *const RkRuinSolution, out: *mut f64) -> RkStatus {
    match solution_ref(sol) {
        Ok(s) => write_out(out, s.delta()),
        Err(st) => st,
    }
}

/// Fit accuracy `epsilon` the solution inherited.
///
/// # Safety
/// `sol` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rk_solution_epsilon(
    sol: *const RkRuinSolution,
    out: *mut f64,
) -> RkStatus {
    match solution_ref(sol) {
        Ok(s) => write_out(out, s.epsilon()),
        Err(st) => st,
    }
}

/// Copy the decay rates into `buf` (`len` must equal the phase count).
///
/// # Safety
/// `sol` must be a live handle; `buf` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn rk_solution_decay_rates(
    sol: *const RkRuinSolution,
    buf: *mut f64,
    len: usize,
) -> RkStatus {
    match solution_ref(sol) {
        Ok(s) => copy_slice(s.decay_rates(), buf, len),
        Err(st) => st,
    }
}

/// Copy the mixture coefficients into `buf` (`len` must equal the phase
/// count).
///
/// # Safety
/// `sol` must be a live handle; `buf` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn rk_solution_coefficients(
    sol: *const RkRuinSolution,
    buf: *mut f64,
    len: usize,
) -> RkStatus {
    match solution_ref(sol) {
        Ok(s) => copy_slice(s.coefficients(), buf, len),
        Err(st) => st,
    }
}

fn check_rho(rho: f64) -> Result<(), RkStatus> {
    if rho > 0.0 && rho < 1.0 {
        Ok(())
    } else {
        Err(fail(
            RkStatus::DomainError,
            &format!("load must lie strictly inside (0,1), got {rho}"),
        ))
    }
}

/// `delta = epsilon rho/(1-rho)`: the certified uniform ruin-probability
/// error bound for a fit of accuracy `epsilon`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rk_certified_bound(epsilon: f64, rho: f64, out: *mut f64) -> RkStatus {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return fail(
            RkStatus::DomainError,
            &format!("accuracy must lie in (0,1), got {epsilon}"),
        );
    }
    match check_rho(rho) {
        Ok(()) => write_out(out, ruinkit::certified_bound(epsilon, rho)),
        Err(s) => s,
    }
}

/// Smallest phase count whose certified bound does not exceed `delta`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rk_phases_for_bound(delta: f64, rho: f64, out: *mut usize) -> RkStatus {
    if !(delta > 0.0) {
        return fail(
            RkStatus::DomainError,
            &format!("bound target must be positive, got {delta}"),
        );
    }
    match check_rho(rho) {
        Ok(()) => write_out(out, ruinkit::phases_for_bound(delta, rho)),
        Err(s) => s,
    }
}

unsafe fn classic_call(
    model: *const RkModel,
    out: *mut f64,
    f: impl FnOnce(&ClaimModel) -> Result<f64, Error>,
) -> RkStatus {
    let m = match model_ref(model) {
        Ok(m) => m,
        Err(s) => return s,
    };
    match f(m) {
        Ok(v) => write_out(out, v),
        Err(e) => from_error(e),
    }
}

/// Atom-adjusted heavy-traffic approximation `rho e^{-rho u/E M}`;
/// domain error when the second claim moment diverges.
///
/// # Safety
/// `model` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rk_heavy_traffic(
    model: *const RkModel,
    rho: f64,
    u: f64,
    out: *mut f64,
) -> RkStatus {
    classic_call(model, out, |m| ruinkit::classic::heavy_traffic(m, rho, u))
}

/// Plain heavy-traffic exponential `e^{-u/E M}` (no atom adjustment).
///
/// # Safety
/// `model` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rk_heavy_traffic_plain(
    model: *const RkModel,
    rho: f64,
    u: f64,
    out: *mut f64,
) -> RkStatus {
    classic_call(model, out, |m| {
        ruinkit::classic::heavy_traffic_plain(m, rho, u)
    })
}

/// Heavy-tail approximation `(rho/(1-rho)) B̄₀(u)`; may exceed 1.
///
/// # Safety
/// `model` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rk_heavy_tail(
    model: *const RkModel,
    rho: f64,
    u: f64,
    out: *mut f64,
) -> RkStatus {
    classic_call(model, out, |m| ruinkit::classic::heavy_tail(m, rho, u))
}

/// Sup-norm bound `(1-rho) max(2 gamma, gamma/rho)` between the maximum
/// and its matching exponential; domain error without a third moment.
///
/// # Safety
/// `model` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rk_brown_bound(
    model: *const RkModel,
    rho: f64,
    out: *mut f64,
) -> RkStatus {
    classic_call(model, out, |m| ruinkit::classic::brown_bound(m, rho))
}

/// Extended bound for the atom-adjusted heavy-traffic approximation.
///
/// # Safety
/// `model` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rk_extended_bound(
    model: *const RkModel,
    rho: f64,
    out: *mut f64,
) -> RkStatus {
    classic_call(model, out, |m| ruinkit::classic::extended_bound(m, rho))
}

/// Phase count at which the spectral bound matches the extended
/// heavy-traffic bound.
///
/// # Safety
/// `model` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rk_matched_phases(
    model: *const RkModel,
    rho: f64,
    out: *mut usize,
) -> RkStatus {
    let m = match model_ref(model) {
        Ok(m) => m,
        Err(s) => return s,
    };
    match ruinkit::classic::matched_phases(m, rho) {
        Ok(v) => write_out(out, v),
        Err(e) => from_error(e),
    }
}

/// Exact ruin probability for Abate-Whitt claims.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rk_exact_ruin_abate_whitt(
    mu: f64,
    rho: f64,
    u: f64,
    out: *mut f64,
) -> RkStatus {
    match ruinkit::exact_ruin_abate_whitt(mu, rho, u) {
        Ok(v) => write_out(out, v),
        Err(e) => from_error(e),
    }
}

/// Monte Carlo estimate of the ruin probability on a strictly increasing
/// grid of `n` capitals. Writes `n` estimates and, when `half_widths` is
/// non-null, `n` normal-approximation 95% half-widths. Deterministic for a
/// fixed `(seed, samples, grid)`.
///
/// # Safety
/// `model` must be a live handle; `us` must point to `n` readable doubles;
/// `estimates` (and `half_widths` when non-null) to `n` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn rk_mc_ruin(
    model: *const RkModel,
    rho: f64,
    samples: u64,
    seed: u64,
    us: *const f64,
    n: usize,
    estimates: *mut f64,
    half_widths: *mut f64,
) -> RkStatus {
    let m = match model_ref(model) {
        Ok(m) => m,
        Err(s) => return s,
    };
    if us.is_null() || estimates.is_null() || n == 0 {
        return fail(RkStatus::InvalidArgument, "null grid or output buffer");
    }
    let grid = std::slice::from_raw_parts(us, n).to_vec();
    guarded(|| {
        let cfg = match McConfig::new(samples, seed, grid) {
            Ok(cfg) => cfg,
            Err(e) => return from_error(e),
        };
        match ruinkit::mc_ruin(m, rho, &cfg) {
            Ok(est) => {
                std::ptr::copy_nonoverlapping(est.estimates.as_ptr(), estimates, n);
                if !half_widths.is_null() {
                    std::ptr::copy_nonoverlapping(est.half_widths.as_ptr(), half_widths, n);
                }
                RkStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn model_lifecycle_and_evaluation() {
        unsafe {
            let mut model: *mut RkModel = std::ptr::null_mut();
            assert_eq!(rk_model_pareto(4.0, 3.0, &mut model), RkStatus::Ok);
            let mut v = 0.0;
            assert_eq!(rk_claim_ccdf(model, 1.0, &mut v), RkStatus::Ok);
            assert!((v - 0.00390625).abs() < 1e-15);
            assert_eq!(rk_excess_ccdf(model, 1.0, &mut v), RkStatus::Ok);
            assert!((v - 0.015625).abs() < 1e-15);
            let (mut m1, mut m2, mut m3) = (0.0, 0.0, 0.0);
            assert_eq!(
                rk_model_moments(model, &mut m1, &mut m2, &mut m3),
                RkStatus::Ok
            );
            assert!((m1 - 1.0 / 9.0).abs() < 1e-15);
            rk_model_free(model);
        }
    }

    #[test]
    fn invalid_parameters_report_domain_errors() {
        unsafe {
            let mut model: *mut RkModel = std::ptr::null_mut();
            assert_eq!(rk_model_pareto(0.5, 3.0, &mut model), RkStatus::DomainError);
            let mut buf = [0i8; 128];
            let len = rk_last_error_message(buf.as_mut_ptr(), buf.len());
            assert!(len > 0);
            let msg = std::ffi::CStr::from_ptr(buf.as_ptr()).to_string_lossy();
            assert!(msg.contains("shape"), "{msg}");

            assert_eq!(rk_model_abate_whitt(1.0, &mut model), RkStatus::DomainError);
            let mut v = 0.0;
            assert_eq!(rk_zeta(-1.0, &mut v), RkStatus::DomainError);
            assert_eq!(
                rk_claim_ccdf(std::ptr::null(), 1.0, &mut v),
                RkStatus::InvalidArgument
            );
        }
    }

    #[test]
    fn full_pipeline_matches_library() {
        unsafe {
            let mut model: *mut RkModel = std::ptr::null_mut();
            assert_eq!(rk_model_abate_whitt(2.0, &mut model), RkStatus::Ok);
            let mut hx: *mut RkHyperExp = std::ptr::null_mut();
            assert_eq!(rk_fit_hyperexp(model, 20, &mut hx), RkStatus::Ok);
            assert_eq!(rk_hyperexp_phases(hx), 20);
            let mut eps = 0.0;
            assert_eq!(rk_hyperexp_accuracy(hx, &mut eps), RkStatus::Ok);
            assert!((eps - 1.0 / 21.0).abs() < 1e-16);

            let mut rates = vec![0.0; 20];
            assert_eq!(
                rk_hyperexp_rates(hx, rates.as_mut_ptr(), rates.len()),
                RkStatus::Ok
            );
            assert!(rates.windows(2).all(|w| w[0] < w[1]));
            // Wrong buffer size is rejected.
            assert_eq!(
                rk_hyperexp_rates(hx, rates.as_mut_ptr(), 7),
                RkStatus::InvalidArgument
            );

            let mut sol: *mut RkRuinSolution = std::ptr::null_mut();
            assert_eq!(rk_solve(hx, 0.5, &mut sol), RkStatus::Ok);
            let mut psi = 0.0;
            assert_eq!(rk_solution_ruin(sol, 10.0, &mut psi), RkStatus::Ok);
            let mut exact = 0.0;
            assert_eq!(
                rk_exact_ruin_abate_whitt(2.0, 0.5, 10.0, &mut exact),
                RkStatus::Ok
            );
            let mut delta = 0.0;
            assert_eq!(rk_solution_delta(sol, &mut delta), RkStatus::Ok);
            assert!((psi - exact).abs() <= delta);

            // Out-of-domain load is rejected by the solver.
            let mut sol2: *mut RkRuinSolution = std::ptr::null_mut();
            assert_eq!(rk_solve(hx, 1.5, &mut sol2), RkStatus::DomainError);

            rk_solution_free(sol);
            rk_hyperexp_free(hx);
            rk_model_free(model);
        }
    }

    #[test]
    fn classic_surface() {
        unsafe {
            let mut weibull: *mut RkModel = std::ptr::null_mut();
            assert_eq!(rk_model_weibull_half(3.0, &mut weibull), RkStatus::Ok);
            let mut v = 0.0;
            assert_eq!(rk_extended_bound(weibull, 0.82, &mut v), RkStatus::Ok);
            assert!((v - 0.78).abs() < 1e-12);
            let mut k = 0usize;
            assert_eq!(rk_matched_phases(weibull, 0.82, &mut k), RkStatus::Ok);
            assert_eq!(k, 5);
            rk_model_free(weibull);

            let mut aw: *mut RkModel = std::ptr::null_mut();
            assert_eq!(rk_model_abate_whitt(2.0, &mut aw), RkStatus::Ok);
            assert_eq!(
                rk_heavy_traffic(aw, 0.5, 1.0, &mut v),
                RkStatus::DomainError
            );
            assert_eq!(rk_heavy_tail(aw, 0.5, 0.0, &mut v), RkStatus::Ok);
            assert!((v - 1.0).abs() < 1e-12);
            rk_model_free(aw);
        }
    }

    #[test]
    fn monte_carlo_surface_is_deterministic() {
        unsafe {
            let mut model: *mut RkModel = std::ptr::null_mut();
            assert_eq!(rk_model_pareto(4.0, 3.0, &mut model), RkStatus::Ok);
            let us = [0.0, 0.5, 1.0];
            let mut est1 = [0.0; 3];
            let mut est2 = [0.0; 3];
            let mut hw = [0.0; 3];
            for est in [&mut est1, &mut est2] {
                assert_eq!(
                    rk_mc_ruin(
                        model,
                        0.7,
                        100_000,
                        9,
                        us.as_ptr(),
                        3,
                        est.as_mut_ptr(),
                        hw.as_mut_ptr(),
                    ),
                    RkStatus::Ok
                );
            }
            assert_eq!(est1, est2);
            assert!((est1[0] - 0.7).abs() < 3.0 * hw[0].max(1e-3));
            // Decreasing grid is rejected.
            let bad = [1.0, 0.5];
            let mut est = [0.0; 2];
            assert_eq!(
                rk_mc_ruin(
                    model,
                    0.7,
                    1000,
                    9,
                    bad.as_ptr(),
                    2,
                    est.as_mut_ptr(),
                    std::ptr::null_mut(),
                ),
                RkStatus::DomainError
            );
            rk_model_free(model);
        }
    }
}
