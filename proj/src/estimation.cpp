#include <homloc/estimation.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace homloc {

namespace {

constexpr double kPi = std::numbers::pi;
// Below this s the direction carries no usable information and the angle
// estimates are reported undefined.
constexpr double kIdentifiabilityFloor = 1e-8;

struct Basis {
  Vec3 lambda;
  Vec3 dtheta;
  Vec3 dphi;
};

Basis direction_basis(double theta, double phi) {
  const double ct = std::cos(theta), st = std::sin(theta);
  const double cp = std::cos(phi), sp = std::sin(phi);
  return {{ct, st * cp, st * sp}, {-st, ct * cp, ct * sp}, {0.0, -st * sp, st * cp}};
}

// Negative log-likelihood at an unconstrained (s, theta, phi), with the
// gradient filled when requested. Records whose beat factor is clamped
// contribute log(prob_floor) and no gradient, matching the clamped objective.
double eval_negative(std::span<const DetectionRecord> sample, Visibility nu, double prob_floor,
                     const std::array<double, 3> &x,
                     std::array<double, 3> *grad_negative = nullptr) {
  const Basis basis = direction_basis(x[1], x[2]);
  const double s = x[0];
  const double log_floor = std::log(prob_floor);

  double loglik = 0.0, gs = 0.0, gt = 0.0, gp = 0.0;
  for (const DetectionRecord &rec : sample) {
    const Vec3 k = as_vec(rec.kappa);
    const double a = alpha(rec.outcome) * nu.nu;
    const double d = dot(k, basis.lambda);
    const double u = s * d;
    const double w = 1.0 + a * std::cos(u);
    if (w < prob_floor) {
      loglik += log_floor;
      continue;
    }
    loglik += std::log(w);
    if (grad_negative != nullptr) {
      const double coef = -a * std::sin(u) / w;
      gs += coef * d;
      gt += coef * s * dot(k, basis.dtheta);
      gp += coef * s * dot(k, basis.dphi);
    }
  }
  if (grad_negative != nullptr) *grad_negative = {-gs, -gt, -gp};
  return -loglik;
}

double norm3(const std::array<double, 3> &v) {
  return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
}

struct LocalResult {
  std::array<double, 3> x;
  double f;          // negative log-likelihood
  double grad_norm;  // |grad log L| / N
};

// BFGS descent on the negative log-likelihood with Armijo backtracking.
// Bounds are left to the canonicalization map; the landscape is smooth and
// periodic in the angles and even in s.
LocalResult refine(std::span<const DetectionRecord> sample, Visibility nu,
                   const SolverConfig &cfg, std::array<double, 3> x) {
  const double n = static_cast<double>(sample.size());
  std::array<double, 3> g{}, g_new{};
  double f = eval_negative(sample, nu, cfg.prob_floor, x, &g);

  // Inverse-Hessian estimate; the likelihood curvature scales with the
  // sample size, so start at 1/N to keep the first step at parameter scale.
  std::array<std::array<double, 3>, 3> h{};
  const auto reset_h = [&] {
    h = {{{1.0 / n, 0.0, 0.0}, {0.0, 1.0 / n, 0.0}, {0.0, 0.0, 1.0 / n}}};
  };
  reset_h();

  int stalls = 0;
  for (int iter = 0; iter < cfg.max_iters; ++iter) {
    if (norm3(g) / n <= cfg.local_tol) break;

    std::array<double, 3> p{};
    for (int r = 0; r < 3; ++r)
      p[r] = -(h[r][0] * g[0] + h[r][1] * g[1] + h[r][2] * g[2]);
    double slope = p[0] * g[0] + p[1] * g[1] + p[2] * g[2];
    if (slope >= 0.0) {  // not a descent direction; fall back to steepest
      reset_h();
      for (int r = 0; r < 3; ++r) p[r] = -g[r] / n;
      slope = p[0] * g[0] + p[1] * g[1] + p[2] * g[2];
    }

    // Backtracking Armijo search; the full step carries the gradient along,
    // shorter trial steps are function-only until one is accepted.
    double t = 1.0;
    std::array<double, 3> x_new{};
    double f_new = f;
    bool decreased = false, have_gradient = false;
    for (int ls = 0; ls < 60; ++ls) {
      for (int r = 0; r < 3; ++r) x_new[r] = x[r] + t * p[r];
      have_gradient = ls == 0;
      f_new = eval_negative(sample, nu, cfg.prob_floor, x_new, ls == 0 ? &g_new : nullptr);
      if (f_new <= f + 1e-4 * t * slope) {
        decreased = true;
        break;
      }
      t *= 0.5;
    }
    if (decreased && !have_gradient)
      eval_negative(sample, nu, cfg.prob_floor, x_new, &g_new);
    if (!decreased) {  // stalled at line-search resolution; one fresh try
      if (++stalls >= 2) break;
      reset_h();
      continue;
    }
    stalls = 0;

    std::array<double, 3> step{}, y{};
    for (int r = 0; r < 3; ++r) {
      step[r] = x_new[r] - x[r];
      y[r] = g_new[r] - g[r];
    }
    const double sy = step[0] * y[0] + step[1] * y[1] + step[2] * y[2];
    if (sy > 1e-16 * norm3(step) * norm3(y)) {
      const double rho = 1.0 / sy;
      // H <- (I - rho s y^T) H (I - rho y s^T) + rho s s^T
      std::array<std::array<double, 3>, 3> a{};
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
          a[r][c] = (r == c ? 1.0 : 0.0) - rho * step[r] * y[c];
      std::array<std::array<double, 3>, 3> ah{}, next{};
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
          ah[r][c] = a[r][0] * h[0][c] + a[r][1] * h[1][c] + a[r][2] * h[2][c];
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
          next[r][c] = ah[r][0] * a[c][0] + ah[r][1] * a[c][1] + ah[r][2] * a[c][2] +
                       rho * step[r] * step[c];
      h = next;
    } else {
      reset_h();
    }
    x = x_new;
    f = f_new;
    g = g_new;
  }
  return {x, f, norm3(g) / n};
}

}  // namespace

void SolverConfig::validate() const {
  if (!(s_grid_max > 0.0) || !std::isfinite(s_grid_max))
    throw std::invalid_argument("s_grid_max must be finite and > 0");
  if (!(s_grid_step > 0.0) || s_grid_step > kPi / 2)
    throw std::invalid_argument("s_grid_step must lie in (0, pi/2]");
  if (theta_grid_count < 2 || phi_grid_count < 2)
    throw std::invalid_argument("grid counts must be >= 2");
  if (n_starts < 1) throw std::invalid_argument("n_starts must be >= 1");
  if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
  if (!(local_tol > 0.0)) throw std::invalid_argument("local_tol must be > 0");
  if (!(prob_floor > 0.0) || prob_floor >= 1.0)
    throw std::invalid_argument("prob_floor must lie in (0, 1)");
}

double log_likelihood(std::span<const DetectionRecord> sample, const SphericalParams &sph,
                      Visibility nu, double prob_floor) {
  if (sample.empty()) throw std::invalid_argument("sample must be nonempty");
  return -eval_negative(sample, nu, prob_floor, {sph.s, sph.theta, sph.phi});
}

std::array<double, 3> score(std::span<const DetectionRecord> sample, const SphericalParams &sph,
                            Visibility nu, double prob_floor) {
  if (sample.empty()) throw std::invalid_argument("sample must be nonempty");
  std::array<double, 3> grad_negative{};
  eval_negative(sample, nu, prob_floor, {sph.s, sph.theta, sph.phi}, &grad_negative);
  return {-grad_negative[0], -grad_negative[1], -grad_negative[2]};
}

SphericalParams canonicalize(double s, double theta, double phi) {
  if (!std::isfinite(s) || !std::isfinite(theta) || !std::isfinite(phi))
    throw std::invalid_argument("canonicalize: arguments must be finite");

  if (s < 0.0) {  // -s along (theta, phi) equals +s along the flipped direction
    s = -s;
    theta = kPi - theta;
    phi += kPi;
  }
  theta = std::fmod(theta, 2 * kPi);
  if (theta < 0.0) theta += 2 * kPi;
  if (theta > kPi) {  // same direction, polar angle folded into [0, pi]
    theta = 2 * kPi - theta;
    phi += kPi;
  }
  if (theta > kPi / 2) {  // +-lambda degeneracy
    theta = kPi - theta;
    phi += kPi;
  }
  phi = std::fmod(phi, 2 * kPi);
  if (phi < 0.0) phi += 2 * kPi;
  if (phi >= 2 * kPi) phi = 0.0;

  SphericalParams out;
  out.s = s;
  if (s == 0.0) return out;
  out.theta = theta;
  out.theta_defined = true;
  if (theta == 0.0) return out;
  out.phi = phi;
  out.phi_defined = true;
  return out;
}

EstimationResult estimate(std::span<const DetectionRecord> sample, Visibility nu,
                          const SolverConfig &cfg) {
  cfg.validate();
  if (sample.empty()) throw std::invalid_argument("sample must be nonempty");
  if (nu.nu == 0.0)
    throw std::invalid_argument("estimate: the likelihood is flat at nu = 0");

  const std::size_t n_records = sample.size();
  const int n_s = static_cast<int>(cfg.s_grid_max / cfg.s_grid_step + 1e-9) + 1;
  const int n_t = cfg.theta_grid_count;
  const int n_p = cfg.phi_grid_count;

  std::vector<double> signed_nu(n_records);
  for (std::size_t i = 0; i < n_records; ++i)
    signed_nu[i] = alpha(sample[i].outcome) * nu.nu;

  // Full grid scan; the beat dots are hoisted per direction and the cosines
  // along the arithmetic s grid come from the two-term recurrence
  // cos((k+1)u) = 2 cos(u) cos(ku) - cos((k-1)u). Log calls are amortized over
  // chunks of records through running products (each factor lies in
  // [prob_floor, 2], so 16 factors stay comfortably in range).
  constexpr std::size_t kLogChunk = 16;
  std::vector<double> grid(static_cast<std::size_t>(n_s) * n_t * n_p);
  std::vector<double> column(n_s), product(n_s);
  for (int it = 0; it < n_t; ++it) {
    const double theta = it * (kPi / 2) / (n_t - 1);
    for (int ip = 0; ip < n_p; ++ip) {
      const double phi = ip * 2 * kPi / n_p;
      const Vec3 lambda = direction_basis(theta, phi).lambda;
      std::fill(column.begin(), column.end(), 0.0);
      std::fill(product.begin(), product.end(), 1.0);
      std::size_t pending = 0;
      for (std::size_t i = 0; i < n_records; ++i) {
        const double u = cfg.s_grid_step * dot(as_vec(sample[i].kappa), lambda);
        const double a = signed_nu[i];
        const double twice_cos_u = 2.0 * std::cos(u);
        double c_prev = std::cos(u), c_cur = 1.0;  // k = -1 and k = 0
        for (int is = 0; is < n_s; ++is) {
          const double w = 1.0 + a * c_cur;
          product[is] *= w < cfg.prob_floor ? cfg.prob_floor : w;
          const double c_next = twice_cos_u * c_cur - c_prev;
          c_prev = c_cur;
          c_cur = c_next;
        }
        if (++pending == kLogChunk || i + 1 == n_records) {
          for (int is = 0; is < n_s; ++is) {
            column[is] += std::log(product[is]);
            product[is] = 1.0;
          }
          pending = 0;
        }
      }
      double *cell = &grid[(static_cast<std::size_t>(it) * n_p + ip) * n_s];
      for (int is = 0; is < n_s; ++is) cell[is] = column[is];
    }
  }

  const auto grid_point = [&](std::size_t flat) {
    const int is = static_cast<int>(flat % n_s);
    const int ip = static_cast<int>((flat / n_s) % n_p);
    const int it = static_cast<int>(flat / n_s / n_p);
    return std::array<int, 3>{is, it, ip};
  };
  const auto adjacent = [&](const std::array<int, 3> &a, const std::array<int, 3> &b) {
    const int dphi_raw = std::abs(a[2] - b[2]);
    return std::abs(a[0] - b[0]) <= 1 && std::abs(a[1] - b[1]) <= 1 &&
           std::min(dphi_raw, n_p - dphi_raw) <= 1;
  };

  // Candidate starts: the highest grid points, thinned so no two candidates
  // are neighbors. Each candidate marks one plausible beat basin.
  std::vector<std::size_t> order(grid.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return grid[a] > grid[b]; });
  std::vector<std::array<int, 3>> starts;
  for (std::size_t flat : order) {
    const auto idx = grid_point(flat);
    bool blocked = false;
    for (const auto &taken : starts) blocked = blocked || adjacent(idx, taken);
    if (!blocked) starts.push_back(idx);
    if (static_cast<int>(starts.size()) >= cfg.n_starts) break;
  }

  const auto start_of = [&](const std::array<int, 3> &idx) {
    return std::array<double, 3>{idx[0] * cfg.s_grid_step, idx[1] * (kPi / 2) / (n_t - 1),
                                 idx[2] * 2 * kPi / n_p};
  };

  LocalResult best = refine(sample, nu, cfg, start_of(starts.front()));
  for (std::size_t k = 1; k < starts.size(); ++k) {
    LocalResult other = refine(sample, nu, cfg, start_of(starts[k]));
    if (other.f < best.f) best = other;
  }

  EstimationResult result;
  result.n_starts_used = static_cast<int>(starts.size());
  SphericalParams canon = canonicalize(best.x[0], best.x[1], best.x[2]);
  if (canon.s < kIdentifiabilityFloor) {
    SphericalParams degenerate;
    degenerate.s = canon.s;
    canon = degenerate;
  }
  result.estimate = canon;

  std::array<double, 3> grad_negative{};
  result.log_likelihood =
      -eval_negative(sample, nu, cfg.prob_floor, {canon.s, canon.theta, canon.phi}, &grad_negative);
  result.gradient_norm = norm3(grad_negative) / static_cast<double>(n_records);
  result.converged = result.gradient_norm <= cfg.local_tol;
  return result;
}

}  // namespace homloc
