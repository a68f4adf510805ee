/* C interface to the ruinkit ruin-probability library. */

#ifndef RUINKIT_H
#define RUINKIT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code of every fallible call.
 */
typedef enum RkStatus {
  /**
   * Success; out parameters are valid.
   */
  RK_STATUS_OK = 0,
  /**
   * Null pointer or structurally invalid argument.
   */
  RK_STATUS_INVALID_ARGUMENT = 1,
  /**
   * Input outside the mathematical domain of the operation.
   */
  RK_STATUS_DOMAIN_ERROR = 2,
  /**
   * A numerical procedure failed to converge or was inconsistent.
   */
  RK_STATUS_NUMERIC_ERROR = 3,
} RkStatus;

/**
 * Opaque hyperexponential-fit handle.
 */
typedef struct RkHyperExp RkHyperExp;

/**
 * Opaque claim-size model handle.
 */
typedef struct RkModel RkModel;

/**
 * Opaque ruin-solution handle.
 */
typedef struct RkRuinSolution RkRuinSolution;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copy the calling thread's last error message into `buf` (NUL
 * terminated, truncated to `cap` bytes). Returns the full length of the
 * message including the terminator, or 0 when no error is recorded.
 *
 * # Safety
 * `buf` must point to `cap` writable bytes, or be null (then only the
 * required length is returned).
 */
size_t rk_last_error_message(char *buf, size_t cap);

/**
 * Create an Abate-Whitt claim model (mean `1/mu`, higher moments
 * infinite).
 *
 * # Safety
 * `out` must be a valid pointer to an `RkModel*`.
 */
enum RkStatus rk_model_abate_whitt(double mu, struct RkModel **out);

/**
 * Create a Weibull claim model with shape 1/2 and scale `a`.
 *
 * # Safety
 * `out` must be a valid pointer to an `RkModel*`.
 */
enum RkStatus rk_model_weibull_half(double a, struct RkModel **out);

/**
 * Create a Pareto claim model with tail `(1 + b u)^(-alpha)`; `alpha > 1`.
 *
 * # Safety
 * `out` must be a valid pointer to an `RkModel*`.
 */
enum RkStatus rk_model_pareto(double alpha, double b, struct RkModel **out);

/**
 * Release a model handle. Null is ignored.
 *
 * # Safety
 * `model` must have come from an `rk_model_*` constructor and must not be
 * used afterwards.
 */
void rk_model_free(struct RkModel *model);

/**
 * Mean claim size.
 *
 * # Safety
 * `model` must be a live handle; `out` a valid pointer.
 */
enum RkStatus rk_model_mean(const struct RkModel *model, double *out);

/**
 * First three raw moments; diverging moments come back as `INFINITY`.
 *
 * # Safety
 * `model` must be a live handle; `m1`, `m2`, `m3` valid pointers.
 */
enum RkStatus rk_model_moments(const struct RkModel *model, double *m1, double *m2, double *m3);

/**
 * Tail of the claim-size distribution at `u >= 0`.
 *
 * # Safety
 * `model` must be a live handle; `out` a valid pointer.
 */
enum RkStatus rk_claim_ccdf(const struct RkModel *model, double u, double *out);

/**
 * Tail of the stationary-excess distribution at `u >= 0`.
 *
 * # Safety
 * `model` must be a live handle; `out` a valid pointer.
 */
enum RkStatus rk_excess_ccdf(const struct RkModel *model, double u, double *out);

/**
 * `zeta(u) = e^u erfc(sqrt(u))`, evaluated without overflow.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum RkStatus rk_zeta(double u, double *out);

/**
 * Mixing (spectral) cdf of the excess distribution at `y >= 0`.
 *
 * # Safety
 * `model` must be a live handle; `out` a valid pointer.
 */
enum RkStatus rk_spectral_cdf(const struct RkModel *model, double y, double *out);

/**
 * Quantile of the mixing cdf at level `p` in (0,1).
 *
 * # Safety
 * `model` must be a live handle; `out` a valid pointer.
 */
enum RkStatus rk_spectral_quantile(const struct RkModel *model, double p, double *out);

/**
 * Fit the k-phase equal-weight hyperexponential to the excess
 * distribution (sup-norm accuracy `1/(k+1)`).
 *
 * # Safety
 * `model` must be a live handle; `out` a valid pointer to an
 * `RkHyperExp*`.
 */
enum RkStatus rk_fit_hyperexp(const struct RkModel *model, size_t k, struct RkHyperExp **out);

/**
 * Release a hyperexponential handle. Null is ignored.
 *
 * # Safety
 * `hx` must have come from `rk_fit_hyperexp` and must not be used
 * afterwards.
 */
void rk_hyperexp_free(struct RkHyperExp *hx);

/**
 * Number of phases of a fit.
 *
 * # Safety
 * `hx` must be a live handle; null yields 0.
 */
size_t rk_hyperexp_phases(const struct RkHyperExp *hx);

/**
 * Guaranteed sup-norm accuracy `epsilon` of the fit.
 *
 * # Safety
 * `hx` must be a live handle; `out` a valid pointer.
 */
enum RkStatus rk_hyperexp_accuracy(const struct RkHyperExp *hx, double *out);

/**
 * Copy the fitted rates into `buf` (`len` must equal the phase count).
 *
 * # Safety
 * `hx` must be a live handle; `buf` must point to `len` writable doubles.
 */
enum RkStatus rk_hyperexp_rates(const struct RkHyperExp *hx, double *buf, size_t len);

/**
 * Copy the fitted weights into `buf` (`len` must equal the phase count).
 *
 * # Safety
 * `hx` must be a live handle; `buf` must point to `len` writable doubles.
 */
enum RkStatus rk_hyperexp_weights(const struct RkHyperExp *hx, double *buf, size_t len);

/**
 * Tail of the fitted hyperexponential at `u >= 0`.
 *
 * # Safety
 * `hx` must be a live handle; `out` a valid pointer.
 */
enum RkStatus rk_hyperexp_ccdf(const struct RkHyperExp *hx, double u, double *out);

/**
 * Laplace transform of the fit at real `s >= 0`.
 *
 * # Safety
 * `hx` must be a live handle; `out` a valid pointer.
 */
enum RkStatus rk_hyperexp_lt(const struct RkHyperExp *hx, double s, double *out);

/**
 * Solve the ruin system for load `rho` in (0,1).
 *
 * # Safety
 * `hx` must be a live handle; `out` a valid pointer to an
 * `RkRuinSolution*`.
 */
enum RkStatus rk_solve(const struct RkHyperExp *hx, double rho, struct RkRuinSolution **out);

/**
 * Release a solution handle. Null is ignored.
 *
 * # Safety
 * `sol` must have come from `rk_solve` and must not be used afterwards.
 */
void rk_solution_free(struct RkRuinSolution *sol);

/**
 * Number of exponential terms of a solution.
 *
 * # Safety
 * `sol` must be a live handle; null yields 0.
 */
size_t rk_solution_phases(const struct RkRuinSolution *sol);

/**
 * Spectral ruin-probability approximation at capital `u >= 0`.
 *
 * # Safety
 * `sol` must be a live handle; `out` a valid pointer.
 */
enum RkStatus rk_solution_ruin(const struct RkRuinSolution *sol, double u, double *out);

/**
 * Certified uniform error bound `delta = epsilon rho/(1-rho)`.
 *
 * # Safety
 * `sol` must be a live handle; `out` a valid pointer.
 */
enum RkStatus rk_solution_delta(const struct RkRuinSolution *sol, double *out);

/**
 * Fit accuracy `epsilon` the solution inherited.
 *
 * # Safety
 * `sol` must be a live handle; `out` a valid pointer.
 */
enum RkStatus rk_solution_epsilon(const struct RkRuinSolution *sol, double *out);

/**
 * Copy the decay rates into `buf` (`len` must equal the phase count).
 *
 * # Safety
 * `sol` must be a live handle; `buf` must point to `len` writable doubles.
 */
enum RkStatus rk_solution_decay_rates(const struct RkRuinSolution *sol, double *buf, size_t len);

/**
 * Copy the mixture coefficients into `buf` (`len` must equal the phase
 * count).
 *
 * # Safety
 * `sol` must be a live handle; `buf` must point to `len` writable doubles.
 */
enum RkStatus rk_solution_coefficients(const struct RkRuinSolution *sol, double *buf, size_t len);

/**
 * `delta = epsilon rho/(1-rho)`: the certified uniform ruin-probability
 * error bound for a fit of accuracy `epsilon`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum RkStatus rk_certified_bound(double epsilon, double rho, double *out);

/**
 * Smallest phase count whose certified bound does not exceed `delta`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum RkStatus rk_phases_for_bound(double delta, double rho, size_t *out);

/**
 * Atom-adjusted heavy-traffic approximation `rho e^{-rho u/E M}`;
 * domain error when the second claim moment diverges.
 *
 * # Safety
 * `model` must be a live handle; `out` a valid pointer.
 */
enum RkStatus rk_heavy_traffic(const struct RkModel *model, double rho, double u, double *out);

/**
 * Plain heavy-traffic exponential `e^{-u/E M}` (no atom adjustment).
 *
 * # Safety
 * `model` must be a live handle; `out` a valid pointer.
 */
enum RkStatus rk_heavy_traffic_plain(const struct RkModel *model,
                                     double rho,
                                     double u,
                                     double *out);

/**
 * Heavy-tail approximation `(rho/(1-rho)) B̄₀(u)`; may exceed 1.
 *
 * # Safety
 * `model` must be a live handle; `out` a valid pointer.
 */
enum RkStatus rk_heavy_tail(const struct RkModel *model, double rho, double u, double *out);

/**
 * Sup-norm bound `(1-rho) max(2 gamma, gamma/rho)` between the maximum
 * and its matching exponential; domain error without a third moment.
 *
 * # Safety
 * `model` must be a live handle; `out` a valid pointer.
 */
enum RkStatus rk_brown_bound(const struct RkModel *model, double rho, double *out);

/**
 * Extended bound for the atom-adjusted heavy-traffic approximation.
 *
 * # Safety
 * `model` must be a live handle; `out` a valid pointer.
 */
enum RkStatus rk_extended_bound(const struct RkModel *model, double rho, double *out);

/**
 * Phase count at which the spectral bound matches the extended
 * heavy-traffic bound.
 *
 * # Safety
 * `model` must be a live handle; `out` a valid pointer.
 */
enum RkStatus rk_matched_phases(const struct RkModel *model, double rho, size_t *out);

/**
 * Exact ruin probability for Abate-Whitt claims.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum RkStatus rk_exact_ruin_abate_whitt(double mu, double rho, double u, double *out);

/**
 * Monte Carlo estimate of the ruin probability on a strictly increasing
 * grid of `n` capitals. Writes `n` estimates and, when `half_widths` is
 * non-null, `n` normal-approximation 95% half-widths. Deterministic for a
 * fixed `(seed, samples, grid)`.
 *
 * # Safety
 * `model` must be a live handle; `us` must point to `n` readable doubles;
 * `estimates` (and `half_widths` when non-null) to `n` writable doubles.
 */
enum RkStatus rk_mc_ruin(const struct RkModel *model,
                         double rho,
                         uint64_t samples,
                         uint64_t seed,
                         const double *us,
                         size_t n,
                         double *estimates,
                         double *half_widths);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RUINKIT_H */
