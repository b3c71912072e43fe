#include "secantlab/kummer.hpp"

#include <algorithm>
#include <cmath>

namespace secantlab {

SecondOrderBasis::SecondOrderBasis(const PeriodMatrix& pm) : pm_(pm), doubled_(pm.scaled(2.0)) {
  const int g = pm.genus();
  const int n = 1 << g;
  labels_.reserve(n);
  for (int j = 0; j < n; ++j) {
    RVector sigma(g);
    for (int i = 0; i < g; ++i) sigma(i) = 0.5 * ((j >> (g - 1 - i)) & 1);
    labels_.push_back(sigma);
  }
  coordinate_scale_ = CVector::Ones(n);
}

SecondOrderBasis SecondOrderBasis::with_coordinate_scale(int j, Complex factor) const {
  SecondOrderBasis copy = *this;
  copy.coordinate_scale_(j) *= factor;
  return copy;
}

ScaledMatrix second_order_batch(const SecondOrderBasis& basis, const ComplexPoint& z,
                                std::span<const DerivativeSpec> specs, double eps) {
  // theta_j(z) = theta[sigma_j](2z; 2 tau): a derivative along W in z is a
  // derivative along 2W of the doubled function.
  std::vector<DerivativeSpec> doubled_specs(specs.begin(), specs.end());
  for (auto& spec : doubled_specs)
    for (auto& w : spec.directions) w *= 2.0;
  const ComplexPoint arg = 2.0 * z;
  ScaledMatrix out;
  out.scaled.resize(basis.size(), static_cast<Eigen::Index>(specs.size()));
  for (int j = 0; j < basis.size(); ++j) {
    const auto values = theta_batch(basis.doubled(), basis.labels()[j], arg, doubled_specs, eps);
    for (std::size_t k = 0; k < values.size(); ++k) {
      out.scaled(j, static_cast<Eigen::Index>(k)) = values[k].scaled * basis.coordinate_scale()(j);
    }
    out.log_scale = values.empty() ? log_scale(basis.doubled(), arg) : values.front().log_scale;
  }
  return out;
}

ScaledVector second_order_values(const SecondOrderBasis& basis, const ComplexPoint& z, double eps) {
  const DerivativeSpec plain;
  const ScaledMatrix m = second_order_batch(basis, z, std::span<const DerivativeSpec>(&plain, 1), eps);
  return {m.scaled.col(0), m.log_scale};
}

ProjectivePoint ProjectivePoint::from_coordinates(const CVector& coords) {
  if (coords.size() == 0) throw InputError("projective point needs coordinates");
  Eigen::Index best = 0;
  double largest = 0.0;
  for (Eigen::Index i = 0; i < coords.size(); ++i) {
    if (std::abs(coords(i)) > largest) {
      largest = std::abs(coords(i));
      best = i;
    }
  }
  if (!(largest > 0.0) || !std::isfinite(largest)) throw InputError("projective point is the zero vector");
  CVector normalized = coords / coords(best);
  normalized(best) = 1.0;
  return ProjectivePoint(std::move(normalized));
}

ProjectivePoint kummer(const SecondOrderBasis& basis, const ComplexPoint& z, double eps) {
  const ScaledVector v = second_order_values(basis, z, eps);
  if (v.scaled.cwiseAbs().maxCoeff() < 1e3 * eps) {
    throw ToleranceError("degenerate Kummer point: every second-order value is below 1e3 * eps");
  }
  return ProjectivePoint::from_coordinates(v.scaled);
}

double addition_residual(const SecondOrderBasis& basis, const ComplexPoint& z, const ComplexPoint& w,
                         double eps) {
  const PeriodMatrix& pm = basis.period_matrix();
  // log scales: L(z+w) + L(z-w) = L2(z) + L2(w), so scaled values compare directly.
  const Complex lhs = theta_scaled(pm, ComplexPoint(z + w), {}, eps).scaled *
                      theta_scaled(pm, ComplexPoint(z - w), {}, eps).scaled;
  const ScaledVector vz = second_order_values(basis, z, eps);
  const ScaledVector vw = second_order_values(basis, w, eps);
  const Complex rhs = (vz.scaled.array() * vw.scaled.array()).sum();
  return std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs));
}

double projective_distance(const CVector& p, const CVector& q) {
  if (p.size() != q.size()) throw InputError("projective points live in different spaces");
  const double pp = p.squaredNorm();
  const double qq = q.squaredNorm();
  if (!(pp > 0.0) || !(qq > 0.0)) throw InputError("projective point is the zero vector");
  // Orthogonal component of q relative to p; avoids cancellation in 1 - |cos|^2.
  const CVector pn = p / std::sqrt(pp);
  const CVector qn = q / std::sqrt(qq);
  const CVector residual = qn - pn * pn.dot(qn);
  return std::min(1.0, residual.norm());
}

double projective_distance(const ProjectivePoint& p, const ProjectivePoint& q) {
  return projective_distance(p.coords(), q.coords());
}

}  // namespace secantlab
