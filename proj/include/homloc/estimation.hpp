#pragma once
#include <homloc/prob.hpp>

#include <array>
#include <span>

namespace homloc {

/// @brief Multi-start solver settings for the likelihood maximization.
///
/// The likelihood oscillates in s with period of order pi over the typical
/// |kappa . lambda| ~ 1, so the s grid step must stay below pi/2 for the
/// global basin to be hit; the defaults scan s in [0, 10] by 0.25 with a
/// 9 x 16 grid over (theta, phi).
struct SolverConfig {
  double s_grid_max = 10.0;
  double s_grid_step = 0.25;
  int theta_grid_count = 9;
  int phi_grid_count = 16;
  int n_starts = 16;        ///< grid candidates refined, pairwise non-adjacent
  double local_tol = 1e-7;  ///< on the per-record gradient norm |grad log L| / N
  int max_iters = 200;
  double prob_floor = 1e-12;  ///< clamp on 1 + alpha nu cos(.) before the log

  void validate() const;
};

/// @brief Result of one maximum-likelihood estimation.
struct EstimationResult {
  SphericalParams estimate;  ///< canonical; angles flagged undefined at s ~ 0
  double log_likelihood = 0.0;
  bool converged = false;
  int n_starts_used = 0;
  double gradient_norm = 0.0;  ///< |grad log L| / N at the returned point
};

/// @brief Log-likelihood of a detection sample up to parameter-independent
/// terms: sum_i log(1 + alpha(X_i) nu cos(s kappa_i . lambda)). Each summand's
/// argument is clamped below at prob_floor before the log.
double log_likelihood(std::span<const DetectionRecord> sample, const SphericalParams &sph,
                      Visibility nu, double prob_floor = 1e-12);

/// @brief Analytic gradient of log_likelihood in (s, theta, phi); the
/// stationarity system of the likelihood estimators. Summands whose beat
/// factor falls below prob_floor contribute zero, matching the clamped
/// log-likelihood.
std::array<double, 3> score(std::span<const DetectionRecord> sample, const SphericalParams &sph,
                            Visibility nu, double prob_floor = 1e-12);

/// @brief Maps an arbitrary real triple (s, theta, phi) onto the canonical
/// domain using the sign degeneracy of the direction vector: s -> |s| with a
/// direction flip, theta folded into [0, pi/2] (flipping via
/// (theta, phi) -> (pi - theta, phi + pi)), phi reduced modulo 2 pi. The
/// outcome densities are unchanged at every (X, kappa).
SphericalParams canonicalize(double s, double theta, double phi);

/// @brief Multi-start maximum-likelihood estimate of (s, theta, phi).
///
/// Evaluates the log-likelihood on the full (s, theta, phi) grid from cfg,
/// then refines the n_starts best pairwise non-adjacent grid points by BFGS
/// ascent with the analytic score, stopping at local_tol or max_iters. Close
/// to full visibility the beat basins get comparable to the grid pitch, and
/// several candidate basins must be polished for the global maximum to win.
/// The result is canonicalized; at s below the identifiability floor the
/// angles come back flagged undefined. Deterministic for a given sample and
/// config. Throws std::invalid_argument on an empty sample or nu = 0 (flat
/// likelihood).
EstimationResult estimate(std::span<const DetectionRecord> sample, Visibility nu,
                          const SolverConfig &cfg = {});

}  // namespace homloc
