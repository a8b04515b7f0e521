#pragma once
#include <vector>

namespace homloc {

/// @brief Nodes and weights of a fixed quadrature rule, ascending in node.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// @brief Gauss-Hermite rule for the weight exp(-x^2) on (-inf, inf):
/// integral of exp(-x^2) f(x) dx ~= sum w_i f(x_i), exact for polynomials of
/// degree <= 2n-1.
///
/// Nodes are the roots of the orthonormal Hermite polynomial, located by
/// Newton iteration on the three-term recurrence; weights follow from the
/// recurrence values at the root. Intermediate values are kept in a scaled
/// representation so large n neither overflows nor underflows. Weights too
/// small for double precision come out as exact zeros.
QuadratureRule gauss_hermite(int n);

/// Cached, thread-safe access to gauss_hermite(n).
const QuadratureRule &gauss_hermite_cached(int n);

}  // namespace homloc
