#ifndef SECANTLAB_THETA_HPP
#define SECANTLAB_THETA_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "secantlab/types.hpp"

namespace secantlab {

/// A point of the Siegel upper half-space: symmetric tau with Im(tau) > 0.
///
/// Construction validates both invariants and precomputes what every
/// evaluation needs: Y = Im(tau), its inverse, the upper Cholesky factor T
/// (Y = T^T T), the smallest eigenvalue of Y and the shortest vector of the
/// lattice T Z^g.
class PeriodMatrix {
 public:
  PeriodMatrix(int g, const CMatrix& entries);

  int genus() const { return g_; }
  const CMatrix& tau() const { return tau_; }
  const RMatrix& imag() const { return imag_; }
  const RMatrix& imag_inverse() const { return imag_inv_; }
  const RMatrix& cholesky() const { return chol_; }
  double min_eigenvalue() const { return lambda_min_; }
  double shortest_vector() const { return shortest_; }
  std::uint64_t digest() const { return digest_; }

  PeriodMatrix scaled(double factor) const { return PeriodMatrix(g_, tau_ * factor); }

  friend bool operator==(const PeriodMatrix& a, const PeriodMatrix& b) {
    return a.g_ == b.g_ && a.tau_ == b.tau_;
  }

 private:
  int g_;
  CMatrix tau_;
  RMatrix imag_;
  RMatrix imag_inv_;
  RMatrix chol_;
  double lambda_min_ = 0.0;
  double shortest_ = 0.0;
  std::uint64_t digest_ = 0;
};

PeriodMatrix make_period_matrix(int g, const CMatrix& entries);

/// Directions W of a mixed directional derivative; empty means plain value.
struct DerivativeSpec {
  std::vector<CVector> directions;

  int order() const { return static_cast<int>(directions.size()); }
};

/// theta(z) = exp(log_scale) * scaled with log_scale = pi Im(z)^T Y^-1 Im(z).
///
/// The scaled part stays O(1) for any z; accuracy guarantees are stated on
/// it. For real z the two coincide.
struct ScaledComplex {
  Complex scaled;
  double log_scale = 0.0;

  Complex value() const { return scaled * std::exp(log_scale); }
};

/// Taylor coefficients c_0..c_S of eps -> theta(z + sum_r V_r eps^r), with
/// the same scaling convention as ScaledComplex.
struct ScaledSeries {
  std::vector<Complex> coeffs;
  double log_scale = 0.0;
};

/// z = point + tau * tau_shift + real_shift, with Im(point) in the
/// fundamental cell of Y Z^g and Re(point) rounded into [-1/2, 1/2]^g.
struct ReducedPoint {
  ComplexPoint point;
  IVector tau_shift;
  IVector real_shift;
};

double log_scale(const PeriodMatrix& pm, const ComplexPoint& z);

ReducedPoint reduce_point(const PeriodMatrix& pm, const ComplexPoint& z);

/// tau * n + m.
ComplexPoint lattice_vector(const PeriodMatrix& pm, const IVector& n, const IVector& m);

/// Half-period (real_bits + tau * tau_bits) / 2 for lift = (real_bits, tau_bits) in {0,1}^2g.
ComplexPoint half_period(const PeriodMatrix& pm, std::span<const int> lift);

/// Distance from z - w to the nearest lattice vector.
double lattice_distance(const PeriodMatrix& pm, const ComplexPoint& z, const ComplexPoint& w);

/// Ellipsoid radius R such that the lattice-sum tail outside ||T(n + c)|| <= R
/// is below eps, for `order` unit-norm derivative directions.
///
/// Bound: with rho the shortest vector of T Z^g, balls of radius rho/2 around
/// the shifted lattice points are disjoint, so for R - rho >= sqrt(order / 2pi)
///
///   tail <= g (2/rho)^g * int_{R-rho}^inf (a t + b + 1)^order e^{-pi t^2} (t + rho/2)^{g-1} dt
///
/// where a = 2pi / sqrt(lambda_min) and b = 2pi ||Y^-1 Im z|| bound the
/// per-term derivative factor |2 pi n.W|. The integral is a finite sum of
/// upper incomplete gamma functions. The result is monotone: smaller eps or
/// larger order never gives a smaller R.
double truncation_radius(const PeriodMatrix& pm, const ComplexPoint& z, int order, double eps);

/// Riemann theta sum_n exp(i pi n^T tau n + 2 pi i n^T z), each derivative
/// direction W contributing the factor 2 pi i n^T W. Absolute error of the
/// scaled value is at most eps.
ScaledComplex theta_scaled(const PeriodMatrix& pm, const ComplexPoint& z,
                           const DerivativeSpec& deriv = {}, double eps = kDefaultEps);

Complex theta(const PeriodMatrix& pm, const ComplexPoint& z, const DerivativeSpec& deriv = {},
              double eps = kDefaultEps);

/// theta_x(z) = theta(z - x).
Complex theta_translate(const PeriodMatrix& pm, const ComplexPoint& z, const ComplexPoint& x,
                        const DerivativeSpec& deriv = {}, double eps = kDefaultEps);

/// Theta with characteristic [a, 0]: sum over n of exp(i pi (n+a)^T tau (n+a) + 2 pi i (n+a)^T z).
ScaledComplex theta_char_scaled(const PeriodMatrix& pm, const RVector& characteristic,
                                const ComplexPoint& z, const DerivativeSpec& deriv = {},
                                double eps = kDefaultEps);

/// Several derivative stacks of theta[a, 0] at one point, from a single lattice pass.
std::vector<ScaledComplex> theta_batch(const PeriodMatrix& pm, const RVector& characteristic,
                                       const ComplexPoint& z,
                                       std::span<const DerivativeSpec> specs,
                                       double eps = kDefaultEps);

/// Coefficients of theta(z + sum_{r=1}^{order} curve[r-1] eps^r) through eps^order.
/// Per lattice term the series is exp(sum_r 2 pi i n.V_r eps^r), expanded by the
/// exponential recurrence.
ScaledSeries theta_series(const PeriodMatrix& pm, const ComplexPoint& z,
                          std::span<const CVector> curve, int order, double eps = kDefaultEps);

}  // namespace secantlab

#endif  // SECANTLAB_THETA_HPP
