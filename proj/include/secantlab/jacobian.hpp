#ifndef SECANTLAB_JACOBIAN_HPP
#define SECANTLAB_JACOBIAN_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "secantlab/secant.hpp"

namespace secantlab {

/// Smallest modulus among the 10 even theta constants theta[a, b](0) of a
/// genus-2 period matrix; zero exactly when tau is decomposable.
double min_even_theta_constant(const PeriodMatrix& pm, double eps = kDefaultEps);

/// Random genus-2 period matrix with Im(tau) reasonably conditioned and all
/// even theta constants above 1e-6, so that it is the period matrix of a
/// smooth genus-2 curve.
PeriodMatrix random_jacobian_period_matrix(std::uint64_t seed);

struct ThetaDivisorPoint {
  ComplexPoint z;
  double residual = 0.0;  // |theta(z)|
};

/// Point of the theta divisor: z_1 is pinned from the seed and z_2 found by
/// damped complex Newton; the result is reduced modulo the lattice.
/// Throws ToleranceError after 20 failed restarts of 100 iterations.
ThetaDivisorPoint find_theta_divisor_point(const PeriodMatrix& pm, std::uint64_t seed,
                                           double eps = kDefaultEps);

/// Newton correction of a nearby point onto the theta divisor along the
/// gradient direction (used to follow the divisor).
ThetaDivisorPoint project_to_theta_divisor(const PeriodMatrix& pm, const ComplexPoint& start,
                                           double eps = kDefaultEps);

struct FayResult {
  SecantConfiguration config;
  Lift lift;
  std::vector<LiftResidual> table;
};

/// Trisecant from z_a, z_b, z_c, z_d on the theta divisor: Y = {z_b, z_c, z_d}
/// and zeta = (z_a - z_b - z_c - z_d)/2 + half_period(lift), so the Kummer
/// arguments are the halves of z_a + z_b - z_c - z_d and its two companions.
/// Every lift is tried; the best is returned. Throws ToleranceError (report
/// holds the lift table) when no lift reaches `tol`.
FayResult fay_configuration(const PeriodMatrix& pm, std::span<const ThetaDivisorPoint, 4> points,
                            double tol = 1e-7, double eps = kDefaultEps);

/// Tangent trisecant from the Fay configuration with z_a -> z_d:
/// u = (z_b - z_c)/2, b_1 = z_d - (z_b + z_c)/2 + half_period(lift), and the
/// curve direction W^(1) is the tangent of the theta divisor at z_d.
struct DegenerateDatum {
  ComplexPoint u;
  ComplexPoint b1;
  CVector tangent;
  Lift lift;
  std::vector<LiftResidual> table;  // tangency residual per lift
  std::vector<ComplexPoint> points;  // (z_b, z_c, z_d)
};

DegenerateDatum degenerate_fay_configuration(const PeriodMatrix& pm,
                                             std::span<const ThetaDivisorPoint, 3> points,
                                             double tol = 1e-6, double eps = kDefaultEps);

/// Tangent direction (d_2 theta, -d_1 theta) of the theta divisor at z.
CVector theta_divisor_tangent(const PeriodMatrix& pm, const ComplexPoint& z, double eps = kDefaultEps);

}  // namespace secantlab

#endif  // SECANTLAB_JACOBIAN_HPP
