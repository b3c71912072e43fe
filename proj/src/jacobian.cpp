#include "secantlab/jacobian.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "secantlab/hierarchy.hpp"
#include "secantlab/rng.hpp"

namespace secantlab {

namespace {

void require_genus_two(const PeriodMatrix& pm) {
  if (pm.genus() != 2) throw InputError("Jacobian scenarios are implemented for g = 2 only");
}

struct ThetaAndGradient {
  Complex value;  // scaled
  CVector gradient;  // scaled
  double log_scale;
};

ThetaAndGradient theta_with_gradient(const PeriodMatrix& pm, const ComplexPoint& z, double eps) {
  const int g = pm.genus();
  std::vector<DerivativeSpec> specs(g + 1);
  for (int i = 0; i < g; ++i) specs[i + 1].directions.push_back(CVector::Unit(g, i));
  const auto vals = theta_batch(pm, RVector::Zero(g), z, specs, eps);
  ThetaAndGradient out{vals[0].scaled, CVector(g), vals[0].log_scale};
  for (int i = 0; i < g; ++i) out.gradient(i) = vals[i + 1].scaled;
  return out;
}

double log_abs(const ThetaAndGradient& t) {
  return std::log(std::abs(t.value)) + t.log_scale;
}

ThetaDivisorPoint finish(const PeriodMatrix& pm, const ComplexPoint& z, double eps) {
  ThetaDivisorPoint out;
  out.z = reduce_point(pm, z).point;
  out.residual = std::abs(theta(pm, out.z, {}, eps));
  return out;
}

// Sum of three points in a fixed order independent of how they were passed.
ComplexPoint canonical_sum(std::vector<ComplexPoint> pts) {
  auto key = [](const ComplexPoint& p) {
    std::vector<double> k;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
      k.push_back(p(i).real());
      k.push_back(p(i).imag());
    }
    return k;
  };
  std::sort(pts.begin(), pts.end(), [&](const ComplexPoint& a, const ComplexPoint& b) { return key(a) < key(b); });
  ComplexPoint s = ComplexPoint::Zero(pts.front().size());
  for (const auto& p : pts) s += p;
  return s;
}

}  // namespace

double min_even_theta_constant(const PeriodMatrix& pm, double eps) {
  require_genus_two(pm);
  double smallest = std::numeric_limits<double>::infinity();
  for (int ac = 0; ac < 4; ++ac) {
    for (int bc = 0; bc < 4; ++bc) {
      const int a0 = (ac >> 1) & 1, a1 = ac & 1, b0 = (bc >> 1) & 1, b1 = bc & 1;
      if ((a0 * b0 + a1 * b1) % 2 != 0) continue;
      RVector a(2);
      a << 0.5 * a0, 0.5 * a1;
      ComplexPoint b(2);
      b << 0.5 * b0, 0.5 * b1;
      // theta[a, b](0) = sum exp(i pi (n+a)^T tau (n+a) + 2 pi i (n+a)^T b) = theta[a, 0](b)
      smallest = std::min(smallest, std::abs(theta_char_scaled(pm, a, b, {}, eps).value()));
    }
  }
  return smallest;
}

PeriodMatrix random_jacobian_period_matrix(std::uint64_t seed) {
  CounterRng rng(seed, 0x7a0);
  for (;;) {
    const double y1 = rng.uniform(0.8, 1.6), y2 = rng.uniform(0.8, 1.6), y12 = rng.uniform(-0.35, 0.35);
    const double x1 = rng.uniform(-0.5, 0.5), x2 = rng.uniform(-0.5, 0.5), x12 = rng.uniform(-0.5, 0.5);
    CMatrix tau(2, 2);
    tau << Complex(x1, y1), Complex(x12, y12), Complex(x12, y12), Complex(x2, y2);
    PeriodMatrix pm(2, tau);
    if (pm.min_eigenvalue() >= 0.4 && min_even_theta_constant(pm) > 1e-6) return pm;
  }
}

ThetaDivisorPoint find_theta_divisor_point(const PeriodMatrix& pm, std::uint64_t seed, double eps) {
  require_genus_two(pm);
  constexpr int kRestarts = 20;
  constexpr int kIterations = 100;
  std::ostringstream trace;
  for (int restart = 0; restart < kRestarts; ++restart) {
    CounterRng rng(seed, 0xd1u + restart);
    ComplexPoint z(2);
    z(0) = rng.complex_uniform(0.5);
    z(1) = rng.complex_uniform(0.5);
    ThetaAndGradient t = theta_with_gradient(pm, z, eps);
    bool ok = false;
    for (int it = 0; it < kIterations; ++it) {
      if (std::abs(t.value) * std::exp(t.log_scale) <= 1e-13) {
        ok = true;
        break;
      }
      if (std::abs(t.gradient(1)) == 0.0) break;
      const Complex step = t.value / t.gradient(1);
      double damping = 1.0;
      const double current = log_abs(t);
      ComplexPoint next = z;
      ThetaAndGradient tn = t;
      for (int halvings = 0; halvings < 8; ++halvings) {
        next = z;
        next(1) -= damping * step;
        tn = theta_with_gradient(pm, next, eps);
        if (log_abs(tn) < current) break;
        damping *= 0.5;
      }
      z = next;
      t = tn;
      if (!z.allFinite() || std::abs(z(1).imag()) > 6.0) break;
      if (std::abs(damping * step) < 1e-15) {
        ok = std::abs(t.value) * std::exp(t.log_scale) <= 1e-10;
        break;
      }
    }
    if (ok) {
      ThetaDivisorPoint p = finish(pm, z, eps);
      if (p.residual <= 1e-10) return p;
    }
    trace << "restart " << restart << ": |theta| = " << std::abs(t.value) * std::exp(t.log_scale) << "\n";
  }
  throw ToleranceError("theta divisor search failed after 20 restarts", trace.str());
}

ThetaDivisorPoint project_to_theta_divisor(const PeriodMatrix& pm, const ComplexPoint& start, double eps) {
  ComplexPoint z = start;
  for (int it = 0; it < 50; ++it) {
    const ThetaAndGradient t = theta_with_gradient(pm, z, eps);
    if (std::abs(t.value) * std::exp(t.log_scale) <= 1e-14) break;
    // minimal-norm Newton step for one holomorphic equation
    const ComplexPoint step = t.value * t.gradient.conjugate() / t.gradient.squaredNorm();
    z -= step;
    if (step.norm() < 1e-16) break;
  }
  ThetaDivisorPoint out{z, std::abs(theta(pm, z, {}, eps))};
  return out;
}

CVector theta_divisor_tangent(const PeriodMatrix& pm, const ComplexPoint& z, double eps) {
  require_genus_two(pm);
  const ThetaAndGradient t = theta_with_gradient(pm, z, eps);
  CVector w(2);
  w << t.gradient(1), -t.gradient(0);
  const double n = w.norm();
  if (n == 0.0) throw ToleranceError("theta divisor is singular at the given point");
  return w / n;
}

FayResult fay_configuration(const PeriodMatrix& pm, std::span<const ThetaDivisorPoint, 4> points,
                            double tol, double eps) {
  require_genus_two(pm);
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (lattice_distance(pm, points[i].z, points[j].z) < 1e-3) {
        throw InputError("Fay configuration needs divisor points separated by at least 1e-3");
      }
  const std::vector<ComplexPoint> y{points[1].z, points[2].z, points[3].z};
  const ComplexPoint base = 0.5 * (points[0].z - canonical_sum(y));
  FayResult out{SecantConfiguration{pm, 1, y, base, std::nullopt, std::nullopt}, {}, {}};
  double best = std::numeric_limits<double>::infinity();
  for (const Lift& lift : all_lifts(2)) {
    SecantConfiguration cfg{pm, 1, y, ComplexPoint(base + half_period(pm, lift)), std::nullopt, std::nullopt};
    const double r = secant_residual(cfg, eps);
    out.table.push_back({lift, r});
    if (r < best) {
      best = r;
      out.config = cfg;
      out.lift = lift;
    }
  }
  if (best > tol) {
    std::ostringstream report;
    report << std::setprecision(17);
    report << "lift,residual\n";
    for (const auto& row : out.table) report << lift_to_string(row.lift) << "," << row.residual << "\n";
    throw ToleranceError("no lift gives a Fay trisecant below tolerance", report.str());
  }
  try {
    secant_coefficients(out.config, tol, eps);
  } catch (const ToleranceError&) {
    // coincident Kummer points: the configuration is still a secant, alpha is not unique
  }
  return out;
}

DegenerateDatum degenerate_fay_configuration(const PeriodMatrix& pm,
                                             std::span<const ThetaDivisorPoint, 3> points, double tol,
                                             double eps) {
  require_genus_two(pm);
  const ComplexPoint& zb = points[0].z;
  const ComplexPoint& zc = points[1].z;
  const ComplexPoint& zd = points[2].z;
  if (lattice_distance(pm, zb, zc) < 1e-3) throw InputError("z_b and z_c must be separated");
  DegenerateDatum out;
  out.points = {zb, zc, zd};
  out.u = 0.5 * (zb - zc);
  out.tangent = theta_divisor_tangent(pm, zd, eps);
  const ComplexPoint base = zd - 0.5 * (zb + zc);
  double best = std::numeric_limits<double>::infinity();
  for (const Lift& lift : all_lifts(2)) {
    const ComplexPoint b1 = base + half_period(pm, lift);
    const PremiseReport rep = premise_check(pm, 1, out.u, {b1}, eps);
    out.table.push_back({lift, rep.tangency});
    if (rep.tangency < best) {
      best = rep.tangency;
      out.b1 = b1;
      out.lift = lift;
    }
  }
  if (best > tol) {
    std::ostringstream report;
    report << std::setprecision(17);
    report << "lift,tangency\n";
    for (const auto& row : out.table) report << lift_to_string(row.lift) << "," << row.residual << "\n";
    throw ToleranceError("no lift gives a tangent trisecant below tolerance", report.str());
  }
  return out;
}

}  // namespace secantlab
