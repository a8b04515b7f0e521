#include <homloc/fisher.hpp>

#include <homloc/errors.hpp>
#include <homloc/quadrature.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace homloc {

namespace {

constexpr double kInvSqrtPi = 0.5641895835477563;

void require_efficiency(double gamma) {
  if (!std::isfinite(gamma) || gamma < 0.0 || gamma > 1.0)
    throw std::invalid_argument("gamma must lie in [0, 1]");
}

double relative_change(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

// Integrals of beta_nu(s x) against e^{-x^2} x^2 dx and e^{-x^2} dx.
struct BetaMoments {
  double second;
  double zeroth;
};

BetaMoments beta_moments(double s, Visibility nu, int nodes) {
  const QuadratureRule &rule = gauss_hermite_cached(nodes);
  BetaMoments acc{0.0, 0.0};
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double x = rule.nodes[i];
    const double b = beta(nu, s * x);
    acc.second += rule.weights[i] * b * x * x;
    acc.zeroth += rule.weights[i] * b;
  }
  return acc;
}

}  // namespace

double beta(Visibility nu, double x) {
  if (nu.nu == 1.0) return 1.0;  // sin^2 / sin^2, continuity value at the zeros
  const double sx = std::sin(x);
  // Factored denominator (1 - nu cos x)(1 + nu cos x) written without
  // cancellation near cos x = +-1.
  const double half = 0.5 * x;
  const double s2 = std::sin(half), c2 = std::cos(half);
  const double lo = (1.0 - nu.nu) + 2.0 * nu.nu * s2 * s2;
  const double hi = (1.0 - nu.nu) + 2.0 * nu.nu * c2 * c2;
  return nu.nu * nu.nu * sx * sx / (lo * hi);
}

FisherMatrix qfi(const SphericalParams &sph) {
  const double st = std::sin(sph.theta);
  return FisherMatrix::diagonal(0.5, 0.5 * sph.s * sph.s, 0.5 * sph.s * sph.s * st * st);
}

FisherMatrix fisher_density(double rho, const SphericalParams &sph, Visibility nu) {
  const double st = std::sin(sph.theta);
  const double common = kInvSqrtPi * std::exp(-rho * rho) * beta(nu, sph.s * rho);
  const double s2 = sph.s * sph.s;
  return FisherMatrix::diagonal(common * rho * rho, common * 0.5 * s2,
                                common * 0.5 * s2 * st * st);
}

FisherMatrix fisher_resolved_quadrature(const SphericalParams &sph, Visibility nu,
                                        double gamma, const QuadratureConfig &cfg) {
  require_efficiency(gamma);
  if (cfg.nodes < 2) throw std::invalid_argument("QuadratureConfig.nodes must be >= 2");

  const double s = sph.s;
  const BetaMoments coarse = beta_moments(s, nu, cfg.nodes);
  const BetaMoments fine = beta_moments(s, nu, 2 * cfg.nodes);
  if (relative_change(coarse.second, fine.second) > cfg.check_tol ||
      relative_change(coarse.zeroth, fine.zeroth) > cfg.check_tol)
    throw numeric_error("fisher_resolved: quadrature not converged at the configured node count");

  const double g2 = gamma * gamma;
  const double st = std::sin(sph.theta);
  const double f_ss = g2 * kInvSqrtPi * coarse.second;
  const double f_tt = g2 * kInvSqrtPi * 0.5 * s * s * coarse.zeroth;
  return FisherMatrix::diagonal(f_ss, f_tt, f_tt * st * st);
}

FisherMatrix fisher_resolved(const SphericalParams &sph, Visibility nu, double gamma) {
  require_efficiency(gamma);
  const double g2 = gamma * gamma;
  if (nu.nu == 1.0) {
    FisherMatrix f = qfi(sph);
    for (double &v : f.m) v *= g2;
    return f;
  }

  const double s = sph.s;
  if (s == 0.0) return FisherMatrix{};  // beta(0) = 0 for nu < 1

  // Integrated Poisson-kernel series: with w = sqrt(1-nu^2), q = (1-w)/(1+w),
  //   integral e^{-r^2} beta(s r) dr / sqrt(pi)    = (1-w)   - 2w S0,
  //   integral e^{-r^2} beta(s r) r^2 dr / sqrt(pi) = (1-w)/2 - 2w S2,
  // where S0 = sum q^k e^{-k^2 s^2} and S2 = sum q^k (1/2 - k^2 s^2) e^{-k^2 s^2}.
  const double w = std::sqrt((1.0 - nu.nu) * (1.0 + nu.nu));
  const double q = (1.0 - w) / (1.0 + w);
  double sum0 = 0.0, sum2 = 0.0;
  double qk = 1.0;
  bool truncated = false;
  for (long k = 1; k <= 2000000; ++k) {
    qk *= q;
    const double kd = static_cast<double>(k);
    const double k2s2 = kd * kd * s * s;
    const double damp = qk * std::exp(-k2s2);
    sum0 += damp;
    sum2 += damp * (0.5 - k2s2);
    // geometric bound on the remaining tail (the Gaussian factor only helps)
    if (damp * (1.5 + k2s2) <= 1e-18 * (1.0 - q)) {
      truncated = true;
      break;
    }
  }
  if (!truncated) throw numeric_error("fisher_resolved: series did not truncate");

  const double zeroth = (1.0 - w) - 2.0 * w * sum0;
  const double second = 0.5 * (1.0 - w) - 2.0 * w * sum2;
  const double st = std::sin(sph.theta);
  const double f_tt = g2 * 0.5 * s * s * zeroth;
  return FisherMatrix::diagonal(g2 * second, f_tt, f_tt * st * st);
}

double fisher_nonresolving(double s, Visibility nu, double gamma) {
  require_efficiency(gamma);
  if (!(s >= 0.0)) throw std::invalid_argument("s must be >= 0");
  if (s == 0.0) return nu.nu == 1.0 ? 0.5 * gamma * gamma : 0.0;
  // e^{s^2/2} - nu^2 = expm1(s^2/2) + (1 - nu^2), stable for small s.
  const double denom = std::expm1(0.5 * s * s) + (1.0 - nu.nu * nu.nu);
  return gamma * gamma * nu.nu * nu.nu * (0.25 * s * s) / denom;
}

CrbReport crb(const FisherMatrix &f, std::uint64_t n) {
  if (n < 1) throw std::invalid_argument("crb: n must be >= 1");
  const auto bound = [n](double fjj) {
    return fjj > 0.0 ? 1.0 / (static_cast<double>(n) * fjj)
                     : std::numeric_limits<double>::infinity();
  };
  return {bound(f.at(0, 0)), bound(f.at(1, 1)), bound(f.at(2, 2)), n};
}

}  // namespace homloc
