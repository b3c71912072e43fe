#ifndef SECANTLAB_TYPES_HPP
#define SECANTLAB_TYPES_HPP

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace secantlab {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;
using IVector = Eigen::VectorXi;

// A point z of C^g. Values of this type stand for z, w, zeta, a_i, b_i, u, mu.
using ComplexPoint = CVector;

inline constexpr double kPi = std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};

inline constexpr double kDefaultEps = 1e-12;
inline constexpr double kDefaultSecantTol = 1e-8;
inline constexpr int kMaxDerivativeOrder = 12;

// Malformed or contract-violating input. The CLI maps this to exit code 1.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical criterion was not met (no secant found, residual above
// tolerance, rank deficiency). `report` carries the residual table, if any.
// The CLI maps this to exit code 2.
class ToleranceError : public std::runtime_error {
 public:
  explicit ToleranceError(const std::string& what, std::string report = {})
      : std::runtime_error(what), report_(std::move(report)) {}
  const std::string& report() const noexcept { return report_; }

 private:
  std::string report_;
};

}  // namespace secantlab

#endif  // SECANTLAB_TYPES_HPP
