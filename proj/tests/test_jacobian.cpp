#include "doctest.h"

#include <array>

#include "oracles.hpp"
#include "scenarios.hpp"

using namespace secantlab;

TEST_CASE("even theta constants detect decomposable period matrices") {
  CMatrix diag(2, 2);
  diag << Complex(0.1, 1.1), 0.0, 0.0, Complex(-0.2, 0.9);
  CHECK(min_even_theta_constant(PeriodMatrix(2, diag)) <= 1e-12);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const PeriodMatrix pm = random_jacobian_period_matrix(seed);
    CHECK(min_even_theta_constant(pm) > 1e-6);
    CHECK(pm == random_jacobian_period_matrix(seed));
  }
}

TEST_CASE("theta divisor points") {
  const PeriodMatrix pm = random_jacobian_period_matrix(1);
  std::vector<ComplexPoint> found;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const ThetaDivisorPoint p = find_theta_divisor_point(pm, seed);
    CHECK(p.residual <= 1e-10);
    CHECK(std::abs(theta(pm, p.z)) <= 1e-10);
    CHECK(std::abs(theta(pm, ComplexPoint(-p.z))) <= 1e-10);
    found.push_back(p.z);
    const ThetaDivisorPoint again = find_theta_divisor_point(pm, seed);
    CHECK(again.z == p.z);
  }
  int separated = 0, pairs = 0;
  for (std::size_t i = 0; i + 1 < found.size(); ++i) {
    ++pairs;
    if (lattice_distance(pm, found[i], found[i + 1]) >= 1e-3) ++separated;
  }
  CHECK(separated >= 0.9 * pairs);
}

TEST_CASE("Fay configurations from random divisor points") {
  for (std::uint64_t t = 0; t < 3; ++t) {
    const PeriodMatrix pm = random_jacobian_period_matrix(50 + t);
    for (std::uint64_t k = 0; k < 3; ++k) {
      const auto pts = scenario::divisor_points(pm, 10 * t + k);
      FayResult fay = fay_configuration(pm, pts);
      CHECK(fay.table.size() == 16);
      CHECK(*fay.config.residual <= 1e-7);
      REQUIRE(fay.config.alpha.has_value());
      CHECK(bilinear_residual(fay.config, *fay.config.alpha, 50, k) <= 1e-6);

      const std::array<ThetaDivisorPoint, 4> swapped{pts[0], pts[1], pts[3], pts[2]};
      CHECK(*fay_configuration(pm, swapped).config.residual == *fay.config.residual);
    }
  }
}

TEST_CASE("Fay construction rejects coincident divisor points") {
  const PeriodMatrix pm = random_jacobian_period_matrix(2);
  auto pts = scenario::divisor_points(pm, 1);
  pts[3] = pts[2];
  CHECK_THROWS_AS(fay_configuration(pm, pts), InputError);
}

TEST_CASE("Fay family persists when a divisor point moves along the divisor") {
  const PeriodMatrix pm = random_jacobian_period_matrix(3);
  auto pts = scenario::divisor_points(pm, 4);
  CounterRng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    auto moved = pts;
    const int which = trial % 4;
    const CVector w = theta_divisor_tangent(pm, pts[which].z);
    moved[which] = project_to_theta_divisor(pm, ComplexPoint(pts[which].z + rng.complex_uniform(0.05) * w));
    REQUIRE(moved[which].residual <= 1e-10);
    CHECK(*fay_configuration(pm, moved).config.residual <= 1e-7);
  }
}

TEST_CASE("tangent trisecant from the confluent Fay configuration") {
  for (std::uint64_t t = 0; t < 3; ++t) {
    const scenario::Tangent tan = scenario::tangent(60 + t, t);
    const DegenerateDatum& d = tan.datum;
    const PremiseReport rep = premise_check(tan.pm, 1, d.u, {d.b1});
    CHECK(rep.tangency <= 1e-6);
    // the tangency direction found from the Kummer data is the divisor tangent
    CHECK(projective_distance(rep.direction, d.tangent) <= 1e-6);
    // u and -u collide on the Kummer variety
    const SecondOrderBasis basis(tan.pm);
    CHECK(projective_distance(kummer(basis, d.u), kummer(basis, ComplexPoint(-d.u))) <= 1e-10);
  }
}

TEST_CASE("finite-difference confluence approximates the divisor tangent") {
  const PeriodMatrix pm = random_jacobian_period_matrix(7);
  const ThetaDivisorPoint zd = find_theta_divisor_point(pm, 3);
  const CVector w = theta_divisor_tangent(pm, zd.z);
  CounterRng rng(9);
  // a generic direction, projected back onto the divisor
  CVector v(2);
  v << rng.complex_uniform(1.0), rng.complex_uniform(1.0);
  auto secant_direction = [&](double h) {
    const ThetaDivisorPoint za = project_to_theta_divisor(pm, ComplexPoint(zd.z + h * w + h * h * v));
    return CVector((za.z - zd.z) / h);
  };
  const double h = 1e-4;
  const CVector coarse = secant_direction(h);
  const CVector richardson = 2.0 * secant_direction(h / 2) - coarse;
  CHECK(projective_distance(coarse, w) <= 1e-3);
  CHECK(projective_distance(richardson, w) <= projective_distance(coarse, w) + 1e-9);
  CHECK(lattice_distance(pm, zd.z, zd.z) == 0.0);
}

TEST_CASE("scenario generation is deterministic") {
  const FayResult a = scenario::fay(70, 1);
  const FayResult b = scenario::fay(70, 1);
  CHECK(a.config.zeta == b.config.zeta);
  for (int i = 0; i < 3; ++i) CHECK(a.config.points[i] == b.config.points[i]);
  CHECK(*a.config.residual == *b.config.residual);
}
