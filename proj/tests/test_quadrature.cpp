#include <homloc/quadrature.hpp>

#include <cmath>
#include <numbers>

#include <stdexcept>

#include <doctest.h>

#include "oracles.hpp"

using namespace homloc;

namespace {
const double kSqrtPi = std::sqrt(std::numbers::pi);

double apply(const QuadratureRule &rule, double (*f)(double)) {
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) acc += rule.weights[i] * f(rule.nodes[i]);
  return acc;
}
}  // namespace

TEST_CASE("low-order rules match the closed forms") {
  const QuadratureRule one = gauss_hermite(1);
  CHECK(one.nodes[0] == 0.0);
  CHECK(one.weights[0] == doctest::Approx(kSqrtPi).epsilon(1e-14));

  const QuadratureRule two = gauss_hermite(2);
  CHECK(two.nodes[0] == doctest::Approx(-std::sqrt(0.5)).epsilon(1e-14));
  CHECK(two.nodes[1] == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
  CHECK(two.weights[0] == doctest::Approx(kSqrtPi / 2).epsilon(1e-14));

  const QuadratureRule three = gauss_hermite(3);
  CHECK(three.nodes[1] == 0.0);
  CHECK(three.nodes[2] == doctest::Approx(std::sqrt(1.5)).epsilon(1e-14));
  CHECK(three.weights[1] == doctest::Approx(2 * kSqrtPi / 3).epsilon(1e-14));
  CHECK(three.weights[2] == doctest::Approx(kSqrtPi / 6).epsilon(1e-14));
}

TEST_CASE("gaussian moments are exact up to degree 2n-1") {
  for (int n : {7, 32, 201, 402}) {
    const QuadratureRule rule = gauss_hermite(n);
    REQUIRE(rule.nodes.size() == static_cast<std::size_t>(n));

    double w_total = 0.0, m2 = 0.0, m4 = 0.0, m6 = 0.0, odd = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double x = rule.nodes[i], w = rule.weights[i];
      // outermost weights of very large rules underflow to exact zeros
      CHECK(w >= 0.0);
      if (std::abs(x) < 0.8 * rule.nodes.back()) CHECK(w > 0.0);
      w_total += w;
      m2 += w * x * x;
      m4 += w * x * x * x * x;
      m6 += w * x * x * x * x * x * x;
      odd += w * x * x * x;
    }
    CHECK(w_total == doctest::Approx(kSqrtPi).epsilon(1e-13));
    CHECK(m2 == doctest::Approx(kSqrtPi / 2).epsilon(1e-13));
    CHECK(m4 == doctest::Approx(3 * kSqrtPi / 4).epsilon(1e-13));
    CHECK(m6 == doctest::Approx(15 * kSqrtPi / 8).epsilon(1e-13));
    CHECK(std::abs(odd) < 1e-12);

    // symmetric nodes
    for (std::size_t i = 0; i < rule.nodes.size() / 2; ++i) {
      CHECK(rule.nodes[i] == -rule.nodes[rule.nodes.size() - 1 - i]);
      CHECK(rule.weights[i] == rule.weights[rule.nodes.size() - 1 - i]);
    }
  }
}

TEST_CASE("non-polynomial integrand against the closed form and the adaptive oracle") {
  // integral of e^{-x^2} cos(a x) dx = sqrt(pi) e^{-a^2/4}
  const QuadratureRule rule = gauss_hermite(201);
  for (double a : {1.0, 4.0, 9.0}) {
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
      acc += rule.weights[i] * std::cos(a * rule.nodes[i]);
    const double closed = kSqrtPi * std::exp(-a * a / 4);
    CHECK(acc == doctest::Approx(closed).epsilon(1e-13));
    const double adaptive = oracles::integrate1d(
        [a](double x) { return std::exp(-x * x) * std::cos(a * x); }, -12.0, 12.0);
    CHECK(acc == doctest::Approx(adaptive).epsilon(1e-11));
  }
}

TEST_CASE("rejects degenerate node counts and caches rules") {
  CHECK_THROWS_AS(gauss_hermite(0), std::invalid_argument);
  const QuadratureRule &a = gauss_hermite_cached(51);
  const QuadratureRule &b = gauss_hermite_cached(51);
  CHECK(&a == &b);
  CHECK(apply(a, [](double) { return 1.0; }) == doctest::Approx(kSqrtPi).epsilon(1e-13));
}
