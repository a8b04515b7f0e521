#include <homloc/params.hpp>
#include <homloc/rng.hpp>

#include <cmath>
#include <numbers>

#include <stdexcept>

#include <doctest.h>

using namespace homloc;

namespace {
constexpr double kPi = std::numbers::pi;

DetectorModel detector_with(double d_omega, double d_xp, double d_yp) {
  return DetectorModel{1.0, d_omega, d_xp, d_yp, 1.0, 1.0};
}
}  // namespace

TEST_CASE("to_reduced applies the widths scaling") {
  const SourceWidths widths{1e12, 5e5, 5e5};

  const ReducedSeparation zero = to_reduced({0.0, 0.0, 0.0}, widths);
  CHECK(zero.tau == 0.0);
  CHECK(zero.lambda_x == 0.0);
  CHECK(zero.lambda_y == 0.0);

  const ReducedSeparation tau_only = to_reduced({1e-12, 0.0, 0.0}, widths);
  CHECK(tau_only.tau == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(tau_only.lambda_x == 0.0);

  const ReducedSeparation all = to_reduced({1e-12, 2e-6, -1e-6}, widths);
  CHECK(all.tau == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(all.lambda_x == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(all.lambda_y == doctest::Approx(-1.0).epsilon(1e-14));

  CHECK_THROWS_AS(to_reduced({std::nan(""), 0.0, 0.0}, widths), std::invalid_argument);
  CHECK_THROWS_AS(to_reduced({0.0, 0.0, 0.0}, SourceWidths{0.0, 1.0, 1.0}),
                  std::invalid_argument);
}

TEST_CASE("to_spherical handles axes and degeneracies") {
  const SphericalParams tau_only = to_spherical({1.0, 0.0, 0.0});
  CHECK(tau_only.s == doctest::Approx(1.0));
  CHECK(tau_only.theta == 0.0);
  CHECK(tau_only.theta_defined);
  CHECK_FALSE(tau_only.phi_defined);

  const SphericalParams equatorial = to_spherical({0.0, -3.0, 0.0});
  CHECK(equatorial.s == doctest::Approx(3.0));
  CHECK(equatorial.theta == doctest::Approx(kPi / 2));
  CHECK(equatorial.phi == doctest::Approx(0.0));

  const SphericalParams origin = to_spherical({0.0, 0.0, 0.0});
  CHECK(origin.s == 0.0);
  CHECK_FALSE(origin.theta_defined);
  CHECK_FALSE(origin.phi_defined);
}

TEST_CASE("from_spherical evaluates the direction parametrization") {
  const ReducedSeparation zero = from_spherical(SphericalParams::make(0.0, 0.0, 0.0));
  CHECK(zero.tau == 0.0);
  CHECK(zero.lambda_x == 0.0);
  CHECK(zero.lambda_y == 0.0);

  const ReducedSeparation eq = from_spherical(SphericalParams::make(2.0, kPi / 2, kPi));
  CHECK(std::abs(eq.tau) < 1e-15);
  CHECK(eq.lambda_x == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(std::abs(eq.lambda_y) < 1e-14);

  // direct trigonometric evaluation at (3, pi/5, pi/4)
  const ReducedSeparation r = from_spherical(SphericalParams::make(3.0, kPi / 5, kPi / 4));
  CHECK(r.tau == doctest::Approx(2.42705098312484227).epsilon(1e-14));
  CHECK(r.lambda_x == doctest::Approx(-1.24688081333236029).epsilon(1e-14));
  CHECK(r.lambda_y == doctest::Approx(-1.24688081333236029).epsilon(1e-14));
}

TEST_CASE("spherical round trip and sign degeneracy") {
  const SphericalParams p = SphericalParams::make(4.0, kPi / 4, kPi / 3);
  const SphericalParams back = to_spherical(from_spherical(p));
  CHECK(back.s == doctest::Approx(4.0).epsilon(1e-13));
  CHECK(back.theta == doctest::Approx(kPi / 4).epsilon(1e-13));
  CHECK(back.phi == doctest::Approx(kPi / 3).epsilon(1e-13));

  Philox rng(7101, 0);
  for (int i = 0; i < 200; ++i) {
    const double s = 0.1 + 9.9 * rng.uniform01();
    const double theta = 1e-3 + (kPi / 2 - 2e-3) * rng.uniform01();
    const double phi = 2 * kPi * rng.uniform01();
    const SphericalParams in = SphericalParams::make(s, theta, phi);
    const ReducedSeparation red = from_spherical(in);
    const SphericalParams out = to_spherical(red);
    CHECK(std::abs(out.s - s) < 1e-12 * s);
    CHECK(std::abs(out.theta - theta) < 1e-12);
    CHECK(std::abs(out.phi - phi) < 1e-12);

    // +-lambda give the same canonical parameters
    const SphericalParams flipped = to_spherical({-red.tau, -red.lambda_x, -red.lambda_y});
    CHECK(flipped.s == out.s);
    CHECK(flipped.theta == out.theta);
    CHECK(flipped.phi == out.phi);

    // magnitude agrees with the explicit norm to machine precision
    const double norm = std::sqrt(red.tau * red.tau + red.lambda_x * red.lambda_x +
                                  red.lambda_y * red.lambda_y);
    CHECK(out.s == doctest::Approx(norm).epsilon(1e-15));
  }
}

TEST_CASE("camera far-field mapping") {
  DetectorModel det = detector_with(0.0, 0.0, 0.0);
  double kx = -1.0, ky = -1.0;

  camera_to_momentum(0.0, 0.0, 1.88e15, det, kx, ky);
  CHECK(kx == 0.0);
  CHECK(ky == 0.0);

  camera_to_momentum(0.01, 0.0, 1.88e15, det, kx, ky);
  CHECK(kx == doctest::Approx(1.88e15 * 0.01 / kSpeedOfLight).epsilon(1e-15));
  CHECK(ky == 0.0);

  det.distance_d = 2.0;
  double kx2 = 0.0, ky2 = 0.0;
  camera_to_momentum(0.01, 0.0, 1.88e15, det, kx2, ky2);
  CHECK(kx2 == doctest::Approx(kx / 2).epsilon(1e-15));

  // linear in position and frequency
  det.distance_d = 1.0;
  double kxa, kya, kxb, kyb;
  camera_to_momentum(0.003, -0.002, 1.1e15, det, kxa, kya);
  camera_to_momentum(2 * 0.003, 2 * -0.002, 1.1e15, det, kxb, kyb);
  CHECK(kxb == doctest::Approx(2 * kxa).epsilon(1e-15));
  CHECK(kyb == doctest::Approx(2 * kya).epsilon(1e-15));
  camera_to_momentum(0.003, -0.002, 2 * 1.1e15, det, kxb, kyb);
  CHECK(kxb == doctest::Approx(2 * kxa).epsilon(1e-15));
}

TEST_CASE("momentum resolution propagates relative errors in quadrature") {
  double dkx = -1.0, dky = -1.0;

  momentum_resolution(100.0, 50.0, 0.01, 0.02, 1e15, detector_with(0.0, 0.0, 0.0), dkx, dky);
  CHECK(dkx == 0.0);
  CHECK(dky == 0.0);

  momentum_resolution(100.0, 50.0, 0.01, 0.02, 1e15, detector_with(0.0, 1e-4, 0.0), dkx, dky);
  CHECK(dkx == doctest::Approx(0.01 * 100.0).epsilon(1e-12));
  CHECK(dky == 0.0);

  momentum_resolution(100.0, 50.0, 0.01, 0.02, 1e15, detector_with(2e12, 1e-4, 4e-4), dkx, dky);
  CHECK(dkx == doctest::Approx(100.0 * std::sqrt(1e-4 + 4e-6)).epsilon(1e-12));
  CHECK(dky == doctest::Approx(50.0 * std::sqrt(4e-4 + 4e-6)).epsilon(1e-12));

  CHECK_THROWS_AS(
      momentum_resolution(1.0, 1.0, 0.0, 0.02, 1e15, detector_with(0.0, 0.0, 0.0), dkx, dky),
      std::invalid_argument);
  CHECK_THROWS_AS(
      momentum_resolution(1.0, 1.0, 0.01, 0.02, 0.0, detector_with(0.0, 0.0, 0.0), dkx, dky),
      std::invalid_argument);
}

TEST_CASE("feasibility screen") {
  const SourceWidths widths{1e12, 5e5, 5e5};
  const SphericalParams sph = SphericalParams::make(4.0, kPi / 4, kPi / 3);

  const FeasibilityReport clean = feasibility_check(detector_with(0.0, 0.0, 0.0), widths, sph, 0.1);
  CHECK(clean.pass);
  CHECK(clean.resolution_ratio == 0.0);
  CHECK(clean.beat_ratio == 0.0);

  const FeasibilityReport coarse =
      feasibility_check(detector_with(2e12, 0.0, 0.0), widths, sph, 0.1);
  CHECK_FALSE(coarse.pass);
  CHECK(coarse.resolution_ratio == doctest::Approx(1.0));

  // inclusive threshold: ratios exactly at the margin pass
  const double margin = 0.1;
  DetectorModel border = detector_with(2.0 * widths.sigma_omega * margin, 0.0, 0.0);
  SphericalParams on_axis = SphericalParams::make(1.0, 0.0, 0.0);
  const FeasibilityReport edge = feasibility_check(border, widths, on_axis, margin);
  CHECK(edge.resolution_ratio == doctest::Approx(margin).epsilon(1e-15));
  CHECK(edge.beat_ratio == doctest::Approx(margin).epsilon(1e-15));
  CHECK(edge.pass);

  // s = 0: no beats to resolve, second condition passes and is flagged unchecked
  const FeasibilityReport degenerate =
      feasibility_check(detector_with(1e10, 0.0, 0.0), widths, SphericalParams::make(0, 0, 0), 0.1);
  CHECK(degenerate.pass);
  CHECK_FALSE(degenerate.beat_checked);

  CHECK_THROWS_AS(feasibility_check(detector_with(0, 0, 0), widths, sph, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(feasibility_check(detector_with(0, 0, 0), widths, sph, 1.5),
                  std::invalid_argument);
}

TEST_CASE("SphericalParams validation and flags") {
  CHECK_THROWS_AS(SphericalParams::make(-1.0, 0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(SphericalParams::make(1.0, 2.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(SphericalParams::make(1.0, 0.5, -0.1), std::invalid_argument);

  const SphericalParams at_origin = SphericalParams::make(0.0, 0.3, 0.4);
  CHECK_FALSE(at_origin.theta_defined);
  CHECK_FALSE(at_origin.phi_defined);

  const SphericalParams on_axis = SphericalParams::make(2.0, 0.0, 0.4);
  CHECK(on_axis.theta_defined);
  CHECK_FALSE(on_axis.phi_defined);
}
