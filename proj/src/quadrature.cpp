#include <homloc/quadrature.hpp>

#include <homloc/errors.hpp>

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace homloc {

namespace {

// Implicit QL diagonalization of a symmetric tridiagonal matrix with
// accumulation of the first eigenvector components (Elhay-Kautsky IQPACK /
// EISPACK lineage). d: diagonal, e: subdiagonal in e[0..n-2], z: vector
// transformed to Q' z. Eigenvalues come back ascending in d.
void imtqlx(int n, std::vector<double> &d, std::vector<double> &e, std::vector<double> &z) {
  if (n == 1) return;
  const double prec = std::numeric_limits<double>::epsilon();
  e[n - 1] = 0.0;

  for (int l = 0; l < n; ++l) {
    int iter = 0;
    for (;;) {
      int m = l;
      while (m < n - 1 && std::abs(e[m]) > prec * (std::abs(d[m]) + std::abs(d[m + 1]))) ++m;
      double p = d[l];
      if (m == l) break;
      if (iter++ >= 30) throw numeric_error("gauss_hermite: QL iteration limit exceeded");

      double g = (d[l + 1] - p) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[m] - p + e[l] / (g + (g >= 0.0 ? r : -r));
      double s = 1.0, c = 1.0;
      p = 0.0;
      for (int i = m - 1; i >= l; --i) {
        double f = s * e[i];
        const double b = c * e[i];
        if (std::abs(g) <= std::abs(f)) {
          c = g / f;
          r = std::hypot(c, 1.0);
          e[i + 1] = f * r;
          s = 1.0 / r;
          c *= s;
        } else {
          s = f / g;
          r = std::hypot(s, 1.0);
          e[i + 1] = g * r;
          c = 1.0 / r;
          s *= c;
        }
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
        f = z[i + 1];
        z[i + 1] = s * z[i] + c * f;
        z[i] = c * z[i] - s * f;
      }
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0;
    }
  }

  for (int i = 0; i < n - 1; ++i) {  // ascending order, carrying z along
    int k = i;
    for (int j = i + 1; j < n; ++j)
      if (d[j] < d[k]) k = j;
    if (k != i) {
      std::swap(d[i], d[k]);
      std::swap(z[i], z[k]);
    }
  }
}

}  // namespace

QuadratureRule gauss_hermite(int n) {
  if (n < 1) throw std::invalid_argument("gauss_hermite: n must be >= 1");

  // Jacobi matrix of the Hermite weight: zero diagonal, b_i = sqrt((i+1)/2).
  std::vector<double> d(n, 0.0), e(n, 0.0), z(n, 0.0);
  for (int i = 0; i + 1 < n; ++i) e[i] = std::sqrt((i + 1) / 2.0);
  z[0] = std::pow(std::numbers::pi, 0.25);  // sqrt of the zeroth moment

  imtqlx(n, d, e, z);

  QuadratureRule rule;
  rule.nodes = std::move(d);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) rule.weights[i] = z[i] * z[i];

  // Enforce the exact symmetry of the rule.
  for (int i = 0; i < n / 2; ++i) {
    const int j = n - 1 - i;
    const double x = 0.5 * (rule.nodes[j] - rule.nodes[i]);
    rule.nodes[i] = -x;
    rule.nodes[j] = x;
    const double w = 0.5 * (rule.weights[i] + rule.weights[j]);
    rule.weights[i] = w;
    rule.weights[j] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

const QuadratureRule &gauss_hermite_cached(int n) {
  static std::mutex mtx;
  static std::map<int, QuadratureRule> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, gauss_hermite(n)).first;
  return it->second;
}

}  // namespace homloc
