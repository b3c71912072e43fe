#include "secantlab/secant.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "secantlab/rng.hpp"

namespace secantlab {

std::vector<Lift> all_lifts(int g) {
  std::vector<Lift> out;
  const int count = 1 << (2 * g);
  out.reserve(count);
  for (int k = 0; k < count; ++k) {
    Lift lift(2 * g);
    for (int i = 0; i < 2 * g; ++i) lift[i] = (k >> (2 * g - 1 - i)) & 1;
    out.push_back(std::move(lift));
  }
  return out;
}

std::string lift_to_string(const Lift& lift) {
  std::string s;
  for (int bit : lift) s.push_back(bit ? '1' : '0');
  return s;
}

Lift lift_from_string(const std::string& bits, int g) {
  if (static_cast<int>(bits.size()) != 2 * g) {
    throw InputError("lift must have " + std::to_string(2 * g) + " bits, got '" + bits + "'");
  }
  Lift lift;
  for (char c : bits) {
    if (c != '0' && c != '1') throw InputError("lift bits must be 0 or 1, got '" + bits + "'");
    lift.push_back(c - '0');
  }
  return lift;
}

void SecantConfiguration::validate() const {
  validate_points();
  if (m + 2 > (1 << pm.genus())) throw InputError("m + 2 exceeds the 2^g Kummer coordinates");
}

void SecantConfiguration::validate_points() const {
  const int g = pm.genus();
  if (m < 0) throw InputError("m must be nonnegative");
  if (static_cast<int>(points.size()) != m + 2) {
    throw InputError("expected " + std::to_string(m + 2) + " points, got " + std::to_string(points.size()));
  }
  auto check = [g](const ComplexPoint& p, const char* what) {
    if (p.size() != g) throw InputError(std::string(what) + " has wrong length");
    if (!p.allFinite()) throw InputError(std::string(what) + " is not finite");
  };
  for (const auto& p : points) check(p, "secant point");
  check(zeta, "zeta");
  if (alpha && alpha->size() != m + 2) throw InputError("alpha has wrong length");
}

CMatrix secant_matrix(const SecantConfiguration& cfg, double eps) {
  cfg.validate();
  const SecondOrderBasis basis(cfg.pm);
  CMatrix out(basis.size(), cfg.m + 2);
  for (int i = 0; i < cfg.m + 2; ++i) {
    out.col(i) = second_order_values(basis, ComplexPoint(cfg.zeta + cfg.points[i]), eps).scaled;
  }
  return out;
}

namespace {

// Column order sorted by point coordinates, so that permuting Y reproduces
// bit-identical singular values.
std::vector<int> canonical_order(const std::vector<ComplexPoint>& points) {
  std::vector<int> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  auto key = [&](int i) {
    std::vector<double> k;
    for (Eigen::Index c = 0; c < points[i].size(); ++c) {
      k.push_back(points[i](c).real());
      k.push_back(points[i](c).imag());
    }
    return k;
  };
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return key(a) < key(b); });
  return order;
}

struct Decomposition {
  RVector sigma;
  CVector null_vector;  // in the caller's column order
};

Decomposition decompose(const SecantConfiguration& cfg, double eps, bool want_vector) {
  const CMatrix raw = secant_matrix(cfg, eps);
  const std::vector<int> order = canonical_order(cfg.points);
  CMatrix sorted(raw.rows(), raw.cols());
  for (int c = 0; c < raw.cols(); ++c) sorted.col(c) = raw.col(order[c]);
  Decomposition out;
  if (!want_vector) {
    out.sigma = Eigen::JacobiSVD<CMatrix>(sorted).singularValues();
    return out;
  }
  Eigen::JacobiSVD<CMatrix> svd(sorted, Eigen::ComputeFullV);
  out.sigma = svd.singularValues();
  const CVector v = svd.matrixV().col(sorted.cols() - 1);
  out.null_vector.resize(v.size());
  for (int c = 0; c < v.size(); ++c) out.null_vector(order[c]) = v(c);
  return out;
}

double ratio(const RVector& sigma, int m, double eps) {
  if (sigma(0) < 1e3 * eps) {
    std::ostringstream msg;
    msg << "ill-posed secant comparison: largest singular value " << sigma(0) << " below 1e3 * eps";
    throw ToleranceError(msg.str());
  }
  return sigma(m + 1) / sigma(0);
}

}  // namespace

RVector secant_singular_values(const SecantConfiguration& cfg, double eps) {
  return decompose(cfg, eps, false).sigma;
}

double secant_residual(const SecantConfiguration& cfg, double eps) {
  return ratio(secant_singular_values(cfg, eps), cfg.m, eps);
}

double secant_residual(SecantConfiguration& cfg, double eps) {
  const double r = secant_residual(static_cast<const SecantConfiguration&>(cfg), eps);
  cfg.residual = r;
  return r;
}

CVector secant_coefficients(SecantConfiguration& cfg, double tol, double eps) {
  const Decomposition d = decompose(cfg, eps, true);
  const double r = ratio(d.sigma, cfg.m, eps);
  cfg.residual = r;
  if (r > tol) {
    std::ostringstream msg;
    msg << "not a secant: residual " << r << " exceeds tolerance " << tol;
    throw ToleranceError(msg.str());
  }
  const int k = cfg.m + 2;
  if (k >= 2 && d.sigma(k - 2) <= 10.0 * d.sigma(k - 1)) {
    std::ostringstream msg;
    msg << "degenerate secant: singular values " << d.sigma(k - 2) << " and " << d.sigma(k - 1)
        << " are within a factor 10, coefficients not unique";
    throw ToleranceError(msg.str());
  }
  Eigen::Index best = 0;
  d.null_vector.cwiseAbs().maxCoeff(&best);
  CVector alpha = d.null_vector / d.null_vector(best);
  alpha(best) = 1.0;
  cfg.alpha = alpha;
  return alpha;
}

CMatrix bilinear_terms(const SecantConfiguration& cfg, int sample_count, std::uint64_t seed, double eps) {
  cfg.validate();
  if (sample_count < 1) throw InputError("sample count must be positive");
  const int g = cfg.pm.genus();
  // With scaled thetas, L(z + 2 zeta + a) + L(z - a) = L2(z + zeta) + L2(zeta + a):
  // the first part is common to a row and the second is carried by alpha.
  CounterRng rng(seed, 0xb111);
  CMatrix terms(sample_count, cfg.m + 2);
  for (int k = 0; k < sample_count; ++k) {
    ComplexPoint z(g);
    for (int i = 0; i < g; ++i) z(i) = rng.complex_uniform(0.5);
    for (int i = 0; i < cfg.m + 2; ++i) {
      const ComplexPoint& a = cfg.points[i];
      terms(k, i) = theta_scaled(cfg.pm, ComplexPoint(z + 2.0 * cfg.zeta + a), {}, eps).scaled *
                    theta_scaled(cfg.pm, ComplexPoint(z - a), {}, eps).scaled;
    }
  }
  return terms;
}

double bilinear_residual(const SecantConfiguration& cfg, const CVector& alpha, int sample_count,
                         std::uint64_t seed, double eps) {
  cfg.validate();
  if (alpha.size() != cfg.m + 2) throw InputError("alpha has wrong length");
  if (alpha.cwiseAbs().maxCoeff() == 0.0) throw InputError("alpha is the zero vector");
  const CMatrix terms = bilinear_terms(cfg, sample_count, seed, eps);
  double worst = 0.0;
  for (Eigen::Index k = 0; k < terms.rows(); ++k) {
    const CVector row = terms.row(k).transpose().cwiseProduct(alpha);
    const double largest = row.cwiseAbs().maxCoeff();
    if (largest == 0.0) continue;
    worst = std::max(worst, std::abs(row.sum()) / largest);
  }
  return worst;
}

PropagationResult propagate(const SecantConfiguration& cfg, const ComplexPoint& zeta_prime,
                            const Lift& lift) {
  cfg.validate_points();
  const int g = cfg.pm.genus();
  const int m = cfg.m;
  if (m < 1) throw InputError("propagation needs m >= 1");
  if (static_cast<int>(lift.size()) != 2 * g) throw InputError("lift must have 2g entries");
  for (int bit : lift)
    if (bit != 0 && bit != 1) throw InputError("lift entries must be 0 or 1");
  if (zeta_prime.size() != g) throw InputError("zeta' has wrong length");
  const auto& a = cfg.points;
  PropagationResult out;
  out.zeta_prime = zeta_prime;
  out.lift = lift;
  out.b_points.resize(m + 2);
  const ComplexPoint b1 = zeta_prime + a[2] + 0.5 * (a[0] + a[1]) + half_period(cfg.pm, lift);
  out.b_points[0] = b1;
  for (int j = 2; j <= m; ++j) out.b_points[j - 1] = b1 - a[2] + a[j + 1];
  out.b_points[m] = a[1] + a[2] - b1;
  out.b_points[m + 1] = a[0] + a[2] - b1;
  return out;
}

LiftScan propagation_secant_check(const SecantConfiguration& cfg, const ComplexPoint& zeta_prime,
                                  double eps) {
  LiftScan scan;
  scan.best_residual = std::numeric_limits<double>::infinity();
  for (const Lift& lift : all_lifts(cfg.pm.genus())) {
    const PropagationResult prop = propagate(cfg, zeta_prime, lift);
    SecantConfiguration next{cfg.pm, cfg.m, prop.b_points, cfg.zeta, std::nullopt, std::nullopt};
    const double r = secant_residual(static_cast<const SecantConfiguration&>(next), eps);
    scan.table.push_back({lift, r});
    if (r < scan.best_residual) {
      scan.best_residual = r;
      scan.best_lift = lift;
    }
  }
  return scan;
}

double involution_identity(const PeriodMatrix& pm, std::span<const ComplexPoint, 4> a,
                           const ComplexPoint& zeta_prime, const Lift& lift) {
  SecantConfiguration cfg{pm, 2, {a[0], a[1], a[2], a[3]}, ComplexPoint::Zero(pm.genus()),
                          std::nullopt, std::nullopt};
  const PropagationResult prop = propagate(cfg, zeta_prime, lift);
  const ComplexPoint lhs = -prop.b_points[0] - prop.b_points[1];
  const ComplexPoint rhs = -2.0 * zeta_prime - (a[0] + a[1] + a[2] + a[3]);
  return lattice_distance(pm, lhs, rhs);
}

namespace {

struct Vertex {
  RVector x;
  double f;
};

}  // namespace

SearchResult secant_search(const PeriodMatrix& pm, int m, const std::vector<ComplexPoint>& points,
                           const ComplexPoint& zeta_seed, const SearchOptions& options, double eps) {
  const int g = pm.genus();
  SecantConfiguration base{pm, m, points, zeta_seed, std::nullopt, std::nullopt};
  base.validate();
  if (options.max_iterations < 0) throw InputError("max iterations must be nonnegative");
  const int n = 2 * g;

  auto to_zeta = [g](const RVector& x) {
    ComplexPoint z(g);
    for (int i = 0; i < g; ++i) z(i) = Complex(x(i), x(g + i));
    return z;
  };
  auto objective = [&](const RVector& x) {
    SecantConfiguration c = base;
    c.zeta = to_zeta(x);
    try {
      return secant_residual(static_cast<const SecantConfiguration&>(c), eps);
    } catch (const ToleranceError&) {
      return 1.0;
    }
  };

  RVector x0(n);
  for (int i = 0; i < g; ++i) {
    x0(i) = zeta_seed(i).real();
    x0(g + i) = zeta_seed(i).imag();
  }

  CounterRng rng(options.seed, 0x5ea7c4);
  std::vector<Vertex> simplex;
  simplex.push_back({x0, objective(x0)});
  for (int i = 0; i < n; ++i) {
    RVector x = x0;
    // jitter keeps restarts from retracing the same simplex
    x(i) += options.initial_step * (1.0 + 0.1 * rng.uniform());
    simplex.push_back({x, objective(x)});
  }
  auto sort_simplex = [&] {
    std::stable_sort(simplex.begin(), simplex.end(), [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
  };
  auto diameter = [&] {
    double d = 0.0;
    for (std::size_t i = 1; i < simplex.size(); ++i) d = std::max(d, (simplex[i].x - simplex[0].x).norm());
    return d;
  };

  SearchResult result{base, false, 0, {}};
  sort_simplex();
  const double alpha_r = 1.0, gamma_e = 2.0, rho_c = 0.5, sigma_s = 0.5;
  int iter = 0;
  int stagnant = 0;
  double last_best = simplex[0].f;
  while (iter < options.max_iterations) {
    if (simplex[0].f <= options.tolerance || diameter() <= options.tolerance) break;
    ++iter;
    RVector centroid = RVector::Zero(n);
    for (int i = 0; i < n; ++i) centroid += simplex[i].x;
    centroid /= n;
    Vertex& worst = simplex[n];
    const RVector xr = centroid + alpha_r * (centroid - worst.x);
    const double fr = objective(xr);
    if (fr < simplex[0].f) {
      const RVector xe = centroid + gamma_e * (xr - centroid);
      const double fe = objective(xe);
      worst = fe < fr ? Vertex{xe, fe} : Vertex{xr, fr};
    } else if (fr < simplex[n - 1].f) {
      worst = {xr, fr};
    } else {
      const bool outside = fr < worst.f;
      const RVector xc = outside ? RVector(centroid + rho_c * (xr - centroid))
                                 : RVector(centroid + rho_c * (worst.x - centroid));
      const double fc = objective(xc);
      if (fc < (outside ? fr : worst.f)) {
        worst = {xc, fc};
      } else {
        for (int i = 1; i <= n; ++i) {
          simplex[i].x = simplex[0].x + sigma_s * (simplex[i].x - simplex[0].x);
          simplex[i].f = objective(simplex[i].x);
        }
      }
    }
    sort_simplex();
    result.trace.push_back(simplex[0].f);
    stagnant = simplex[0].f < 0.999 * last_best ? 0 : stagnant + 1;
    last_best = std::min(last_best, simplex[0].f);
    if (stagnant >= 40 * n) {
      // rebuild a fresh simplex around the best vertex
      const RVector best = simplex[0].x;
      const double step = std::max(10.0 * diameter(), 1e-4);
      for (int i = 1; i <= n; ++i) {
        RVector x = best;
        x(i - 1) += step * (rng.uniform() < 0.5 ? -1.0 : 1.0);
        simplex[i] = {x, objective(x)};
      }
      sort_simplex();
      stagnant = 0;
    }
  }
  result.iterations = iter;

  result.config.zeta = to_zeta(simplex[0].x);
  result.config.residual = simplex[0].f;
  result.converged = simplex[0].f <= options.tolerance || diameter() <= options.tolerance;
  return result;
}

}  // namespace secantlab
