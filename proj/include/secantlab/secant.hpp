#ifndef SECANTLAB_SECANT_HPP
#define SECANTLAB_SECANT_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "secantlab/kummer.hpp"

namespace secantlab {

using Lift = std::vector<int>;

/// All 2^(2g) half-period lifts, ordered by their binary index.
std::vector<Lift> all_lifts(int g);
std::string lift_to_string(const Lift& lift);
Lift lift_from_string(const std::string& bits, int g);

/// Candidate (m+2)-secant: the Kummer points K(zeta + a_i) on a common m-plane.
///
/// alpha refers to the columns of secant_matrix, which carry the positive
/// factor exp(-2 pi Im(w)^T Y^-1 Im(w)) of each argument w = zeta + a_i.
struct SecantConfiguration {
  PeriodMatrix pm;
  int m = 1;
  std::vector<ComplexPoint> points;
  ComplexPoint zeta;
  std::optional<double> residual;
  std::optional<CVector> alpha;

  /// Point count and lengths only.
  void validate_points() const;
  /// Also requires m + 2 <= 2^g.
  void validate() const;
};

/// Column i holds the scaled second-order values at zeta + a_i.
CMatrix secant_matrix(const SecantConfiguration& cfg, double eps = kDefaultEps);

/// Singular values (descending) of the secant matrix.
RVector secant_singular_values(const SecantConfiguration& cfg, double eps = kDefaultEps);

/// sigma_{m+2} / sigma_1, stored into cfg.residual. Throws ToleranceError when
/// sigma_1 < 1e3 * eps.
double secant_residual(SecantConfiguration& cfg, double eps = kDefaultEps);
double secant_residual(const SecantConfiguration& cfg, double eps = kDefaultEps);

/// Null vector of the secant matrix normalized to largest entry 1, stored
/// into cfg.alpha. Requires secant_residual <= tol; throws ToleranceError
/// when the two smallest singular values are within a factor 10.
CVector secant_coefficients(SecantConfiguration& cfg, double tol = kDefaultSecantTol,
                            double eps = kDefaultEps);

/// Terms theta(z + 2 zeta + a_i) theta(z - a_i), one row per sampled z, in units
/// that make the rows of a true secant annihilate the scaled alpha.
CMatrix bilinear_terms(const SecantConfiguration& cfg, int sample_count, std::uint64_t seed,
                       double eps = kDefaultEps);

/// max over sampled z of |sum_i alpha_i theta(z + 2 zeta + a_i) theta(z - a_i)|
/// relative to max_i |alpha_i theta(z + 2 zeta + a_i) theta(z - a_i)|.
double bilinear_residual(const SecantConfiguration& cfg, const CVector& alpha, int sample_count,
                         std::uint64_t seed, double eps = kDefaultEps);

struct PropagationResult {
  ComplexPoint zeta_prime;
  std::vector<ComplexPoint> b_points;
  Lift lift;
};

/// b_1 = zeta' + a_3 + (a_1 + a_2)/2 + half_period(lift), b_j = b_1 - a_3 + a_{j+2}
/// for 2 <= j <= m, b_{m+1} = a_2 + a_3 - b_1, b_{m+2} = a_1 + a_3 - b_1.
PropagationResult propagate(const SecantConfiguration& cfg, const ComplexPoint& zeta_prime,
                            const Lift& lift);

struct LiftResidual {
  Lift lift;
  double residual = 0.0;
};

struct LiftScan {
  Lift best_lift;
  double best_residual = 0.0;
  std::vector<LiftResidual> table;

  bool passed(double tol) const { return best_residual <= tol; }
};

/// Secant residual of (Y = {b_i}, zeta) for every lift.
LiftScan propagation_secant_check(const SecantConfiguration& cfg, const ComplexPoint& zeta_prime,
                                  double eps = kDefaultEps);

/// Lattice distance between -b_1 - b_2 and -2 zeta' - (a_1 + a_2 + a_3 + a_4)
/// for the quadrisecant propagation with the given lift.
double involution_identity(const PeriodMatrix& pm, std::span<const ComplexPoint, 4> a,
                           const ComplexPoint& zeta_prime, const Lift& lift);

struct SearchOptions {
  int max_iterations = 500;
  double tolerance = 1e-9;
  double initial_step = 0.05;
  std::uint64_t seed = 0;
};

struct SearchResult {
  SecantConfiguration config;
  bool converged = false;
  int iterations = 0;
  std::vector<double> trace;  // best residual after each iteration
};

/// Nelder-Mead over the 2g real coordinates of zeta minimizing secant_residual.
/// Converged when the best residual is below options.tolerance or the simplex
/// has collapsed to that size.
SearchResult secant_search(const PeriodMatrix& pm, int m, const std::vector<ComplexPoint>& points,
                           const ComplexPoint& zeta_seed, const SearchOptions& options = {},
                           double eps = kDefaultEps);

}  // namespace secantlab

#endif  // SECANTLAB_SECANT_HPP
