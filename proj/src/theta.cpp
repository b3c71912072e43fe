#include "secantlab/theta.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <boost/math/special_functions/gamma.hpp>

#include "secantlab/lattice.hpp"

namespace secantlab {

namespace {

std::uint64_t fnv1a(const void* data, std::size_t bytes, std::uint64_t h) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < bytes; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Everything the lattice sum needs after argument reduction.
struct SumSetup {
  ReducedPoint reduced;
  RVector center;     // enumeration center a + c'
  RVector a;          // characteristic
  RVector re_reduced;  // Re of the fully reduced point
  RVector n0;         // tau shift as doubles
  double log_scale = 0.0;
  double phase = 0.0;
  double center_norm = 0.0;  // ||Y^-1 Im z|| of the unreduced point
};

SumSetup prepare(const PeriodMatrix& pm, const RVector& a, const ComplexPoint& z) {
  const int g = pm.genus();
  if (z.size() != g) throw InputError("point has wrong dimension");
  if (!z.allFinite()) throw InputError("point has non-finite entries");
  SumSetup s;
  s.a = a;
  s.reduced = reduce_point(pm, z);
  const RMatrix& y_inv = pm.imag_inverse();
  const RVector y = z.imag();
  const RVector c_orig = y_inv * y;
  s.center_norm = c_orig.norm();
  s.log_scale = kPi * y.dot(c_orig);

  const RVector n0 = s.reduced.tau_shift.cast<double>();
  const RVector m = s.reduced.real_shift.cast<double>();
  const RMatrix x = pm.tau().real();
  // z' = z - tau n0 (before the real shift).
  const RVector re_shifted = z.real() - x * n0;
  s.phase = -kPi * n0.dot(x * n0) - 2.0 * kPi * n0.dot(re_shifted) + 2.0 * kPi * a.dot(m);
  s.phase = std::remainder(s.phase, 2.0 * kPi);
  s.n0 = n0;
  s.re_reduced = s.reduced.point.real();
  s.center = a + y_inv * s.reduced.point.imag();
  return s;
}

// Calls f(term, q) for every lattice point inside the ellipsoid; term is the
// scaled summand exp(-pi ||T(p + c')||^2 + i(pi p.X p + 2 pi p.x'')) and
// q = p - n0 the index of the unreduced sum.
template <class F>
void for_each_term(const PeriodMatrix& pm, const SumSetup& s, double radius, F&& f) {
  const int g = pm.genus();
  const RMatrix& t = pm.cholesky();
  const RMatrix x = pm.tau().real();
  auto points = LatticeCache::global().get(pm.digest(), t, s.center, radius);
  std::vector<double> v(g), p(g), q(g);
  for (std::size_t k = 0; k < points->size(); ++k) {
    const int* n = points->point(k);
    for (int i = 0; i < g; ++i) {
      v[i] = n[i] + s.center(i);
      p[i] = n[i] + s.a(i);
      q[i] = p[i] - s.n0(i);
    }
    double r2 = 0.0;
    for (int i = 0; i < g; ++i) {
      double acc = 0.0;
      for (int j = i; j < g; ++j) acc += t(i, j) * v[j];
      r2 += acc * acc;
    }
    double im = 0.0;
    for (int i = 0; i < g; ++i) {
      double xp = 0.0;
      for (int j = 0; j < g; ++j) xp += x(i, j) * p[j];
      im += p[i] * (kPi * xp + 2.0 * kPi * s.re_reduced(i));
    }
    const Complex term = std::exp(-kPi * r2) * Complex(std::cos(im), std::sin(im));
    f(term, q.data());
  }
}

Complex direction_factor(const double* q, const CVector& w) {
  Complex dot = 0.0;
  for (Eigen::Index i = 0; i < w.size(); ++i) dot += q[i] * w(i);
  return 2.0 * kPi * kI * dot;
}

double tail_bound(int g, double rho, double a, double b, int order, double radius) {
  const double start = radius - rho;
  if (start < std::sqrt(order / (2.0 * kPi))) return std::numeric_limits<double>::infinity();
  // Coefficients of (a t + b + 1)^order (t + rho/2)^(g-1), all nonnegative.
  std::vector<double> poly{1.0};
  auto times_linear = [&poly](double slope, double offset) {
    std::vector<double> next(poly.size() + 1, 0.0);
    for (std::size_t i = 0; i < poly.size(); ++i) {
      next[i] += offset * poly[i];
      next[i + 1] += slope * poly[i];
    }
    poly = std::move(next);
  };
  for (int k = 0; k < order; ++k) times_linear(a, b + 1.0);
  for (int k = 0; k < g - 1; ++k) times_linear(1.0, 0.5 * rho);
  double integral = 0.0;
  const double x = kPi * start * start;
  for (std::size_t p = 0; p < poly.size(); ++p) {
    const double s = 0.5 * (static_cast<double>(p) + 1.0);
    // int_A^inf t^p e^{-pi t^2} dt = pi^{-s} Gamma(s, pi A^2) / 2
    integral += poly[p] * 0.5 * std::pow(kPi, -s) * boost::math::tgamma(s, x);
  }
  return g * std::pow(2.0 / rho, g) * integral;
}

double radius_for(const PeriodMatrix& pm, double center_norm, int order, double eps) {
  const int g = pm.genus();
  const double rho = pm.shortest_vector();
  const double a = 2.0 * kPi / std::sqrt(pm.min_eigenvalue());
  const double b = 2.0 * kPi * center_norm;
  double lo = rho + std::sqrt(order / (2.0 * kPi));
  if (tail_bound(g, rho, a, b, order, lo) <= eps) return lo;
  double hi = lo + 1.0;
  while (tail_bound(g, rho, a, b, order, hi) > eps) hi = lo + 2.0 * (hi - lo);
  for (int it = 0; it < 60 && hi - lo > 1e-6; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (tail_bound(g, rho, a, b, order, mid) <= eps) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

void check_spec(const PeriodMatrix& pm, const DerivativeSpec& spec) {
  if (spec.order() > kMaxDerivativeOrder) throw InputError("derivative order exceeds the configured maximum");
  for (const auto& w : spec.directions) {
    if (w.size() != pm.genus()) throw InputError("derivative direction has wrong dimension");
    if (!w.allFinite()) throw InputError("derivative direction has non-finite entries");
  }
}

double direction_product(const DerivativeSpec& spec) {
  double prod = 1.0;
  for (const auto& w : spec.directions) prod *= w.norm();
  return prod;
}

}  // namespace

PeriodMatrix::PeriodMatrix(int g, const CMatrix& entries) : g_(g) {
  if (g < 1) throw InputError("genus must be positive");
  if (entries.rows() != g || entries.cols() != g) throw InputError("period matrix must be g x g");
  if (!entries.allFinite()) throw InputError("period matrix has non-finite entries");
  const double scale = entries.cwiseAbs().maxCoeff();
  const double asym = (entries - entries.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-14 * scale) {
    std::ostringstream msg;
    msg << "period matrix is not symmetric (max |tau_ij - tau_ji| = " << asym << ")";
    throw InputError(msg.str());
  }
  tau_ = 0.5 * (entries + entries.transpose());
  imag_ = tau_.imag();
  Eigen::SelfAdjointEigenSolver<RMatrix> eig(imag_, Eigen::EigenvaluesOnly);
  lambda_min_ = eig.eigenvalues().minCoeff();
  if (!(lambda_min_ > 0.0)) {
    std::ostringstream msg;
    msg << "imaginary part of the period matrix is not positive definite (smallest eigenvalue "
        << lambda_min_ << ")";
    throw InputError(msg.str());
  }
  Eigen::LLT<RMatrix> llt(imag_);
  if (llt.info() != Eigen::Success) throw InputError("imaginary part of the period matrix is not positive definite");
  chol_ = llt.matrixU();
  imag_inv_ = llt.solve(RMatrix::Identity(g, g));
  shortest_ = shortest_lattice_vector(chol_);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  h = fnv1a(&g_, sizeof g_, h);
  for (Eigen::Index j = 0; j < tau_.cols(); ++j) {
    for (Eigen::Index i = 0; i < tau_.rows(); ++i) {
      const double parts[2] = {tau_(i, j).real(), tau_(i, j).imag()};
      h = fnv1a(parts, sizeof parts, h);
    }
  }
  digest_ = h;
}

PeriodMatrix make_period_matrix(int g, const CMatrix& entries) { return PeriodMatrix(g, entries); }

double log_scale(const PeriodMatrix& pm, const ComplexPoint& z) {
  const RVector y = z.imag();
  return kPi * y.dot(pm.imag_inverse() * y);
}

ReducedPoint reduce_point(const PeriodMatrix& pm, const ComplexPoint& z) {
  const int g = pm.genus();
  ReducedPoint r;
  const RVector c = pm.imag_inverse() * RVector(z.imag());
  r.tau_shift = IVector(g);
  for (int i = 0; i < g; ++i) r.tau_shift(i) = static_cast<int>(std::lround(c(i)));
  ComplexPoint shifted = z - pm.tau() * r.tau_shift.cast<double>().cast<Complex>();
  r.real_shift = IVector(g);
  for (int i = 0; i < g; ++i) {
    r.real_shift(i) = static_cast<int>(std::lround(shifted(i).real()));
    shifted(i) -= static_cast<double>(r.real_shift(i));
  }
  r.point = shifted;
  return r;
}

ComplexPoint lattice_vector(const PeriodMatrix& pm, const IVector& n, const IVector& m) {
  return pm.tau() * n.cast<double>().cast<Complex>() + m.cast<double>().cast<Complex>();
}

ComplexPoint half_period(const PeriodMatrix& pm, std::span<const int> lift) {
  const int g = pm.genus();
  if (static_cast<int>(lift.size()) != 2 * g) throw InputError("lift must have 2g entries");
  IVector m(g), n(g);
  for (int i = 0; i < g; ++i) {
    if ((lift[i] != 0 && lift[i] != 1) || (lift[g + i] != 0 && lift[g + i] != 1)) {
      throw InputError("lift entries must be 0 or 1");
    }
    m(i) = lift[i];
    n(i) = lift[g + i];
  }
  return 0.5 * lattice_vector(pm, n, m);
}

double lattice_distance(const PeriodMatrix& pm, const ComplexPoint& z, const ComplexPoint& w) {
  const int g = pm.genus();
  const ComplexPoint base = reduce_point(pm, z - w).point;
  // Rounding is not nearest-point in a skew lattice; scan the neighbours.
  double best = base.norm();
  const int total = static_cast<int>(std::pow(3, 2 * g));
  IVector n(g), m(g);
  for (int code = 0; code < total; ++code) {
    int rest = code;
    for (int i = 0; i < g; ++i) {
      m(i) = rest % 3 - 1;
      rest /= 3;
    }
    for (int i = 0; i < g; ++i) {
      n(i) = rest % 3 - 1;
      rest /= 3;
    }
    best = std::min(best, (base - lattice_vector(pm, n, m)).norm());
  }
  return best;
}

double truncation_radius(const PeriodMatrix& pm, const ComplexPoint& z, int order, double eps) {
  if (!(eps > 0.0)) throw InputError("eps must be positive");
  if (order < 0) throw InputError("order must be nonnegative");
  const RVector c = pm.imag_inverse() * RVector(z.imag());
  return radius_for(pm, c.norm(), order, eps);
}

std::vector<ScaledComplex> theta_batch(const PeriodMatrix& pm, const RVector& characteristic,
                                       const ComplexPoint& z, std::span<const DerivativeSpec> specs,
                                       double eps) {
  if (!(eps > 0.0)) throw InputError("eps must be positive");
  if (characteristic.size() != pm.genus()) throw InputError("characteristic has wrong dimension");
  const SumSetup setup = prepare(pm, characteristic, z);
  int max_order = 0;
  double max_prod = 0.0;
  for (const auto& spec : specs) {
    check_spec(pm, spec);
    max_order = std::max(max_order, spec.order());
    max_prod = std::max(max_prod, direction_product(spec));
  }
  std::vector<ScaledComplex> out(specs.size(), ScaledComplex{0.0, setup.log_scale});
  if (max_prod == 0.0) return out;
  const double radius = radius_for(pm, setup.center_norm, max_order, eps / std::max(1.0, max_prod));
  std::vector<Complex> sums(specs.size(), 0.0);
  for_each_term(pm, setup, radius, [&](Complex term, const double* q) {
    for (std::size_t j = 0; j < specs.size(); ++j) {
      Complex factor = 1.0;
      for (const auto& w : specs[j].directions) factor *= direction_factor(q, w);
      sums[j] += term * factor;
    }
  });
  const Complex phase(std::cos(setup.phase), std::sin(setup.phase));
  for (std::size_t j = 0; j < specs.size(); ++j) out[j].scaled = phase * sums[j];
  return out;
}

ScaledComplex theta_char_scaled(const PeriodMatrix& pm, const RVector& characteristic,
                                const ComplexPoint& z, const DerivativeSpec& deriv, double eps) {
  return theta_batch(pm, characteristic, z, std::span<const DerivativeSpec>(&deriv, 1), eps).front();
}

ScaledComplex theta_scaled(const PeriodMatrix& pm, const ComplexPoint& z, const DerivativeSpec& deriv,
                           double eps) {
  return theta_char_scaled(pm, RVector::Zero(pm.genus()), z, deriv, eps);
}

Complex theta(const PeriodMatrix& pm, const ComplexPoint& z, const DerivativeSpec& deriv, double eps) {
  return theta_scaled(pm, z, deriv, eps).value();
}

Complex theta_translate(const PeriodMatrix& pm, const ComplexPoint& z, const ComplexPoint& x,
                        const DerivativeSpec& deriv, double eps) {
  if (x.size() != z.size()) throw InputError("translation has wrong dimension");
  return theta(pm, z - x, deriv, eps);
}

ScaledSeries theta_series(const PeriodMatrix& pm, const ComplexPoint& z, std::span<const CVector> curve,
                          int order, double eps) {
  if (!(eps > 0.0)) throw InputError("eps must be positive");
  if (order < 0 || order > kMaxDerivativeOrder) throw InputError("series order out of range");
  if (static_cast<int>(curve.size()) < order) throw InputError("curve has fewer coefficients than the order");
  double vmax = 1.0;
  for (int r = 0; r < order; ++r) {
    if (curve[r].size() != pm.genus()) throw InputError("curve coefficient has wrong dimension");
    vmax = std::max(vmax, curve[r].norm());
  }
  // e_S = [x^S] exp(x / (1 - x)) bounds the summed word weights of order S.
  std::vector<double> weights(order + 1, 0.0);
  weights[0] = 1.0;
  for (int k = 1; k <= order; ++k) {
    double acc = 0.0;
    for (int j = 1; j <= k; ++j) acc += j * weights[k - j];
    weights[k] = acc / k;
  }
  const SumSetup setup = prepare(pm, RVector::Zero(pm.genus()), z);
  const double budget = eps / (weights[order] * std::pow(vmax, order));
  const double radius = radius_for(pm, setup.center_norm, order, budget);

  ScaledSeries out;
  out.log_scale = setup.log_scale;
  out.coeffs.assign(order + 1, 0.0);
  std::vector<Complex> h(order + 1), f(order + 1);
  for_each_term(pm, setup, radius, [&](Complex term, const double* q) {
    for (int r = 1; r <= order; ++r) h[r] = direction_factor(q, curve[r - 1]);
    f[0] = 1.0;
    for (int k = 1; k <= order; ++k) {
      Complex acc = 0.0;
      for (int j = 1; j <= k; ++j) acc += static_cast<double>(j) * h[j] * f[k - j];
      f[k] = acc / static_cast<double>(k);
    }
    for (int k = 0; k <= order; ++k) out.coeffs[k] += term * f[k];
  });
  const Complex phase(std::cos(setup.phase), std::sin(setup.phase));
  for (auto& c : out.coeffs) c *= phase;
  return out;
}

}  // namespace secantlab
