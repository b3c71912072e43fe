#ifndef SECANTLAB_KUMMER_HPP
#define SECANTLAB_KUMMER_HPP

#include <span>
#include <vector>

#include "secantlab/theta.hpp"

namespace secantlab {

/// The 2^g second-order theta functions theta_j(z) = theta[sigma_j, 0](2z; 2 tau),
/// sigma_j running over (1/2) Z^g / Z^g in lexicographic order. With this
/// basis the addition formula
///
///   theta(z + w) theta(z - w) = sum_j theta_j(z) theta_j(w)
///
/// holds with unit coefficients.
class SecondOrderBasis {
 public:
  explicit SecondOrderBasis(const PeriodMatrix& pm);

  const PeriodMatrix& period_matrix() const { return pm_; }
  const PeriodMatrix& doubled() const { return doubled_; }
  const std::vector<RVector>& labels() const { return labels_; }
  int size() const { return static_cast<int>(labels_.size()); }
  int genus() const { return pm_.genus(); }

  // Test hook: multiplies coordinate j by `factor` in every evaluation.
  SecondOrderBasis with_coordinate_scale(int j, Complex factor) const;
  const CVector& coordinate_scale() const { return coordinate_scale_; }

 private:
  PeriodMatrix pm_;
  PeriodMatrix doubled_;
  std::vector<RVector> labels_;
  CVector coordinate_scale_;
};

/// Column vector of basis values; true values are exp(log_scale) * scaled,
/// log_scale = 2 pi Im(z)^T Y^-1 Im(z) being common to all coordinates.
struct ScaledVector {
  CVector scaled;
  double log_scale = 0.0;
};

ScaledVector second_order_values(const SecondOrderBasis& basis, const ComplexPoint& z,
                                 double eps = kDefaultEps);

/// Columns: for each spec, the mixed derivative (directions taken in z) of
/// every basis function at z. Same log_scale as second_order_values.
struct ScaledMatrix {
  CMatrix scaled;
  double log_scale = 0.0;
};

ScaledMatrix second_order_batch(const SecondOrderBasis& basis, const ComplexPoint& z,
                                std::span<const DerivativeSpec> specs, double eps = kDefaultEps);

/// Point of P^(2^g - 1) normalized so its largest-modulus entry equals 1.
class ProjectivePoint {
 public:
  static ProjectivePoint from_coordinates(const CVector& coords);

  const CVector& coords() const { return coords_; }

 private:
  explicit ProjectivePoint(CVector coords) : coords_(std::move(coords)) {}
  CVector coords_;
};

/// Kummer map K(z) = [theta_0(z) : ... : theta_N(z)].
ProjectivePoint kummer(const SecondOrderBasis& basis, const ComplexPoint& z, double eps = kDefaultEps);

/// |theta(z+w) theta(z-w) - sum_j theta_j(z) theta_j(w)| / max(1, |theta(z+w) theta(z-w)|),
/// both sides in the common scaled units.
double addition_residual(const SecondOrderBasis& basis, const ComplexPoint& z, const ComplexPoint& w,
                         double eps = kDefaultEps);

/// sqrt(1 - |<p,q>|^2 / (|p|^2 |q|^2)); zero iff projectively equal.
double projective_distance(const CVector& p, const CVector& q);
double projective_distance(const ProjectivePoint& p, const ProjectivePoint& q);

}  // namespace secantlab

#endif  // SECANTLAB_KUMMER_HPP
