#ifndef SECANTLAB_HIERARCHY_HPP
#define SECANTLAB_HIERARCHY_HPP

#include <cstdint>
#include <vector>

#include "secantlab/secant.hpp"
#include "secantlab/series.hpp"

namespace secantlab {

/// Exponents (i_1, ..., i_s) with i_1 + 2 i_2 + ... + s i_s = s and weight 1 / (i_1! ... i_s!).
struct OperatorWord {
  std::vector<int> exponents;
  double weight = 1.0;

  int order() const;
};

/// All words of order s, i.e. one per partition of s. s = 0 gives the empty word.
std::vector<OperatorWord> weighted_partitions(int s);

/// Formal curve 2 zeta(eps) = -a_1 - a_2 + C(eps), C(eps) = sum_j W^(j) eps^j, through
/// a degenerate secant, together with the coefficient series
///
///   alpha_1 = 1 + sum_i alpha1[i-1] eps^i,  alpha_2 = -1,
///   alpha_{j+2} = sum_i alphaj[j-1][i-1] eps^i  (1 <= j <= m-1),  alpha_{m+2} = eps.
///
/// Orders not yet solved hold zeros.
struct HierarchyState {
  PeriodMatrix pm;
  int m = 1;
  ComplexPoint u;
  std::vector<ComplexPoint> b;
  int order = 1;
  std::vector<CVector> W;
  std::vector<Complex> alpha1;
  std::vector<std::vector<Complex>> alphaj;
  std::vector<double> per_order_residuals;
  std::vector<int> per_order_ranks;

  void validate() const;

  /// Number of unknowns solved at each order: 1 + (m - 1) + g.
  int unknowns() const { return m + pm.genus(); }
};

/// Fresh state with W^(1) = w1 and every other unknown zero.
HierarchyState make_hierarchy_state(const PeriodMatrix& pm, int m, const ComplexPoint& u,
                                    const std::vector<ComplexPoint>& b, const CVector& w1, int order);

/// Series alpha_t(eps) through eps^order for the terms t = 0 (u), 1 (-u), 2.. (b_j).
Series alpha_series(const HierarchyState& state, int term, int order);

/// Delta_s applied to theta_x = theta(. - x) at z, where D_j differentiates
/// along sign * scale * W^(j). Scaled like theta at z - x.
ScaledComplex apply_delta(const HierarchyState& state, int s, int sign, double scale, const ComplexPoint& x,
                          const ComplexPoint& z, double eps = kDefaultEps);

/// Coefficients of theta(z + sign * (base + C(eps)/2)) through eps^order.
ScaledSeries factor_series(const HierarchyState& state, const ComplexPoint& base, int sign,
                           const ComplexPoint& z, int order, double eps = kDefaultEps);

/// P_s(z) and Q_s(z) in units of exp(2 pi Im(z)^T Y^-1 Im(z)); the unknowns of
/// order s are taken from the state (P) or set to zero (Q).
Complex assemble_P(const HierarchyState& state, int s, const ComplexPoint& z, double eps = kDefaultEps);
Complex assemble_Q(const HierarchyState& state, int s, const ComplexPoint& z, double eps = kDefaultEps);

/// Sections multiplying the order-s unknowns (same units as assemble_P):
/// theta_u theta_-u, then theta_{b_j} theta_{-b_j} for j < m, then
/// d_i theta_-u theta_u - theta_-u d_i theta_u for each coordinate i.
CVector order_basis(const HierarchyState& state, const ComplexPoint& z, double eps = kDefaultEps);

struct AffineSolution {
  CVector x;
  double residual = 0.0;  // RMS(basis x + offset) / RMS(basis)
  int rank = 0;
};

/// Least squares for basis * x + offset = 0 with column equilibration;
/// throws ToleranceError when the equilibrated basis is rank deficient.
AffineSolution solve_affine_system(const CMatrix& basis, const CVector& offset);

/// Deterministic sample points z = x + tau c with x, c uniform in [-1/2, 1/2]^g.
std::vector<ComplexPoint> hierarchy_samples(const PeriodMatrix& pm, int count, std::uint64_t seed);

/// Solves the order-s unknowns from the samples, stores them and appends the residual.
AffineSolution solve_order(HierarchyState& state, int s, const std::vector<ComplexPoint>& samples,
                           double eps = kDefaultEps);

/// Orders 1..S in turn; throws ToleranceError at the first order whose residual exceeds 1e-4.
HierarchyState run_hierarchy(HierarchyState state, int S, const std::vector<ComplexPoint>& samples,
                             double eps = kDefaultEps);

constexpr double kHierarchyAbortResidual = 1e-4;
constexpr double kHierarchySuccessResidual = 1e-7;

struct PremiseReport {
  double tangency = 0.0;            // sigma_{m+2}/sigma_1 of [K(u), K(b_1..b_m), D_W K(u)]
  CVector direction;                // W, unit norm
  std::vector<double> shifted;      // best over lifts, one per mu = -b_j, j < m
  std::vector<Lift> shifted_lifts;

  bool passed(double tol) const;
};

/// Tangency: W is chosen so that D_W K(u) is closest to span{K(u), K(b_1), ..., K(b_m)};
/// columns are normalized before the rank test.
PremiseReport premise_check(const PeriodMatrix& pm, int m, const ComplexPoint& u,
                            const std::vector<ComplexPoint>& b, double eps = kDefaultEps);

/// Points of G = Theta_u . Theta_-u . Theta_{b_1} ... Theta_{b_{m-1}} by damped
/// Gauss-Newton from `starts` seeded starting points, deduplicated modulo the lattice.
std::vector<ComplexPoint> locate_G_points(const HierarchyState& state, int starts, std::uint64_t seed,
                                          double eps = kDefaultEps);

struct RestrictionReport {
  double discrepancy = 0.0;        // R_s against Delta_{s-1} theta_{-b_m} . theta_{b_m}
  double t_discrepancy = 0.0;      // T_s against its expansion, derivative order s - l
  double t_discrepancy_alt = 0.0;  // same with derivative order s - j
  double r_minus_t = 0.0;          // |R_s - T_s|
};

/// R(z, eps) = P(z + C/2, eps) and T(z, eps) = P(z - C/2, eps) restricted to G.
/// Throws InputError when a point is not on G to 1e-8.
RestrictionReport restriction_identity_check(const HierarchyState& state, int s,
                                             const std::vector<ComplexPoint>& G_points,
                                             double eps = kDefaultEps);

}  // namespace secantlab

#endif  // SECANTLAB_HIERARCHY_HPP
