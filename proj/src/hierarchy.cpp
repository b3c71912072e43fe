#include "secantlab/hierarchy.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "secantlab/rng.hpp"

namespace secantlab {

int OperatorWord::order() const {
  int s = 0;
  for (std::size_t k = 0; k < exponents.size(); ++k) s += static_cast<int>(k + 1) * exponents[k];
  return s;
}

namespace {

void partitions_from(int k, int remaining, std::vector<int>& exps, std::vector<OperatorWord>& out) {
  const int s = static_cast<int>(exps.size());
  if (remaining == 0) {
    double denom = 1.0;
    for (int e : exps) denom *= std::tgamma(e + 1.0);
    out.push_back({exps, 1.0 / denom});
    return;
  }
  if (k > s) return;
  for (int i = remaining / k; i >= 0; --i) {
    exps[k - 1] = i;
    partitions_from(k + 1, remaining - i * k, exps, out);
  }
  exps[k - 1] = 0;
}

}  // namespace

std::vector<OperatorWord> weighted_partitions(int s) {
  if (s < 0 || s > kMaxDerivativeOrder) throw InputError("operator order out of range");
  std::vector<OperatorWord> out;
  std::vector<int> exps(s, 0);
  partitions_from(1, s, exps, out);
  return out;
}

void HierarchyState::validate() const {
  const int g = pm.genus();
  if (m < 1) throw InputError("hierarchy needs m >= 1");
  if (static_cast<int>(b.size()) != m) throw InputError("expected m points b_j");
  if (order < 1 || order > kMaxDerivativeOrder) throw InputError("hierarchy order must lie in 1..12");
  if (u.size() != g || !u.allFinite()) throw InputError("u must be a finite point of length g");
  for (const auto& p : b)
    if (p.size() != g || !p.allFinite()) throw InputError("b_j must be finite points of length g");
  if (static_cast<int>(W.size()) != order || static_cast<int>(alpha1.size()) != order ||
      static_cast<int>(alphaj.size()) != m - 1) {
    throw InputError("hierarchy coefficient arrays do not match the order");
  }
  for (const auto& w : W)
    if (w.size() != g) throw InputError("curve direction has wrong length");
  for (const auto& a : alphaj)
    if (static_cast<int>(a.size()) != order) throw InputError("alpha series has wrong length");
  if (!(W[0].norm() > 0.0)) throw InputError("W^(1) must be nonzero (D_1 != 0)");
  if (lattice_distance(pm, ComplexPoint(2.0 * u), ComplexPoint::Zero(g)) < 1e-8) {
    throw InputError("2u must be nonzero on the torus");
  }
}

HierarchyState make_hierarchy_state(const PeriodMatrix& pm, int m, const ComplexPoint& u,
                                    const std::vector<ComplexPoint>& b, const CVector& w1, int order) {
  if (order < 1 || order > kMaxDerivativeOrder) throw InputError("hierarchy order must lie in 1..12");
  if (m < 1) throw InputError("hierarchy needs m >= 1");
  HierarchyState st{pm, m, u, b, order, {}, {}, {}, {}, {}};
  st.W.assign(order, CVector::Zero(pm.genus()));
  if (w1.size() == pm.genus()) st.W[0] = w1;
  st.alpha1.assign(order, 0.0);
  st.alphaj.assign(m - 1, std::vector<Complex>(order, 0.0));
  st.validate();
  return st;
}

namespace {

int term_count(const HierarchyState& st) { return st.m + 2; }

ComplexPoint term_point(const HierarchyState& st, int t) {
  if (t == 0) return st.u;
  if (t == 1) return -st.u;
  return st.b[t - 2];
}

double doubled_log_scale(const PeriodMatrix& pm, const ComplexPoint& z) { return 2.0 * log_scale(pm, z); }

CVector curve_direction(const HierarchyState& st, int j) {
  return j <= st.order ? st.W[j - 1] : CVector::Zero(st.pm.genus());
}

// Coefficients sum_words weight * D-word(theta) at `point` for orders 0..order,
// D_j differentiating along factor * W^(j); one lattice pass for all words.
ScaledSeries delta_series(const HierarchyState& st, const ComplexPoint& point, double factor, int order,
                          double eps) {
  std::vector<DerivativeSpec> specs;
  std::vector<std::pair<int, double>> owner;  // (order, weight) per spec
  for (int s = 0; s <= order; ++s) {
    for (const auto& word : weighted_partitions(s)) {
      DerivativeSpec spec;
      bool vanishes = false;
      for (int k = 1; k <= s; ++k) {
        const int count = word.exponents[k - 1];
        if (count == 0) continue;
        const CVector w = factor * curve_direction(st, k);
        if (w.norm() == 0.0) vanishes = true;
        for (int c = 0; c < count; ++c) spec.directions.push_back(w);
      }
      if (vanishes) continue;
      specs.push_back(std::move(spec));
      owner.emplace_back(s, word.weight);
    }
  }
  const auto values = theta_batch(st.pm, RVector::Zero(st.pm.genus()), point, specs, eps);
  ScaledSeries out;
  out.coeffs.assign(order + 1, 0.0);
  out.log_scale = values.empty() ? log_scale(st.pm, point) : values.front().log_scale;
  for (std::size_t k = 0; k < values.size(); ++k) out.coeffs[owner[k].first] += owner[k].second * values[k].scaled;
  return out;
}

HierarchyState zero_order_unknowns(const HierarchyState& st, int s) {
  HierarchyState copy = st;
  copy.alpha1[s - 1] = 0.0;
  for (auto& a : copy.alphaj) a[s - 1] = 0.0;
  copy.W[s - 1].setZero();
  return copy;
}

void check_order(const HierarchyState& st, int s, int lowest) {
  if (s < lowest || s > st.order) {
    throw InputError("order " + std::to_string(s) + " outside " + std::to_string(lowest) + ".." +
                     std::to_string(st.order));
  }
}

}  // namespace

Series alpha_series(const HierarchyState& st, int term, int order) {
  Series a(order + 1, 0.0);
  const int m = st.m;
  auto coeff = [&](const std::vector<Complex>& c, int i) { return i <= st.order ? c[i - 1] : Complex(0.0); };
  if (term == 0) {
    a[0] = 1.0;
    for (int i = 1; i <= order; ++i) a[i] = coeff(st.alpha1, i);
  } else if (term == 1) {
    a[0] = -1.0;
  } else if (term < m + 1) {
    for (int i = 1; i <= order; ++i) a[i] = coeff(st.alphaj[term - 2], i);
  } else if (term == m + 1) {
    if (order >= 1) a[1] = 1.0;
  } else {
    throw InputError("hierarchy term index out of range");
  }
  return a;
}

ScaledComplex apply_delta(const HierarchyState& st, int s, int sign, double scale, const ComplexPoint& x,
                          const ComplexPoint& z, double eps) {
  if (s < 0 || s > kMaxDerivativeOrder) throw InputError("operator order out of range");
  const ScaledSeries series = delta_series(st, ComplexPoint(z - x), sign * scale, s, eps);
  return {series.coeffs[s], series.log_scale};
}

ScaledSeries factor_series(const HierarchyState& st, const ComplexPoint& base, int sign, const ComplexPoint& z,
                           int order, double eps) {
  if (sign != 1 && sign != -1) throw InputError("sign must be +1 or -1");
  // theta(z + sign (base + C/2)): the curve enters with direction sign * W / 2.
  return delta_series(st, ComplexPoint(z + static_cast<double>(sign) * base), 0.5 * sign, order, eps);
}

Complex assemble_P(const HierarchyState& st, int s, const ComplexPoint& z, double eps) {
  if (s < 0 || s > st.order) throw InputError("order out of range");
  const double base_scale = doubled_log_scale(st.pm, z);
  Complex total = 0.0;
  for (int t = 0; t < term_count(st); ++t) {
    const ComplexPoint x = term_point(st, t);
    const ScaledSeries plus = factor_series(st, x, +1, z, s, eps);
    const ScaledSeries minus = factor_series(st, x, -1, z, s, eps);
    const Series product = multiply(alpha_series(st, t, s), multiply(plus.coeffs, minus.coeffs, s), s);
    total += product[s] * std::exp(plus.log_scale + minus.log_scale - base_scale);
  }
  return total;
}

Complex assemble_Q(const HierarchyState& st, int s, const ComplexPoint& z, double eps) {
  check_order(st, s, 1);
  return assemble_P(zero_order_unknowns(st, s), s, z, eps);
}

CVector order_basis(const HierarchyState& st, const ComplexPoint& z, double eps) {
  const int g = st.pm.genus();
  const int m = st.m;
  const double base_scale = doubled_log_scale(st.pm, z);
  std::vector<DerivativeSpec> specs(g + 1);
  for (int i = 0; i < g; ++i) specs[i + 1].directions.push_back(CVector::Unit(g, i));
  const RVector zero = RVector::Zero(g);
  const auto plus = theta_batch(st.pm, zero, ComplexPoint(z + st.u), specs, eps);   // theta_-u and gradient
  const auto minus = theta_batch(st.pm, zero, ComplexPoint(z - st.u), specs, eps);  // theta_u and gradient
  const double pair_scale = std::exp(plus[0].log_scale + minus[0].log_scale - base_scale);
  CVector out(m + g);
  out(0) = plus[0].scaled * minus[0].scaled * pair_scale;
  for (int j = 1; j < m; ++j) {
    const ScaledComplex a = theta_scaled(st.pm, ComplexPoint(z + st.b[j - 1]), {}, eps);
    const ScaledComplex c = theta_scaled(st.pm, ComplexPoint(z - st.b[j - 1]), {}, eps);
    out(j) = a.scaled * c.scaled * std::exp(a.log_scale + c.log_scale - base_scale);
  }
  for (int i = 0; i < g; ++i) {
    out(m + i) = (plus[i + 1].scaled * minus[0].scaled - plus[0].scaled * minus[i + 1].scaled) * pair_scale;
  }
  return out;
}

AffineSolution solve_affine_system(const CMatrix& basis, const CVector& offset) {
  if (basis.rows() != offset.size()) throw InputError("basis and offset sizes differ");
  if (basis.rows() < basis.cols()) throw InputError("fewer equations than unknowns");
  const Eigen::Index n = basis.cols();
  RVector norms = basis.colwise().norm().transpose();
  if (norms.minCoeff() == 0.0) throw ToleranceError("rank-deficient system: a section vanishes at every sample");
  const CMatrix equilibrated = basis * norms.cwiseInverse().asDiagonal();
  Eigen::JacobiSVD<CMatrix> svd(equilibrated, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVector& sigma = svd.singularValues();
  int rank = 0;
  for (Eigen::Index k = 0; k < sigma.size(); ++k)
    if (sigma(k) > 1e-10 * sigma(0)) ++rank;
  if (rank < n) {
    std::ostringstream msg;
    msg << "rank-deficient system: rank " << rank << " of " << n << " (sigma_min / sigma_max = "
        << sigma(n - 1) / sigma(0) << "); resample with more points";
    throw ToleranceError(msg.str());
  }
  AffineSolution out;
  out.rank = rank;
  const CVector y = svd.solve(CVector(-offset));
  out.x = norms.cwiseInverse().asDiagonal() * y;
  const double denom = basis.norm() / std::sqrt(static_cast<double>(basis.size()));
  const double rms = (basis * out.x + offset).norm() / std::sqrt(static_cast<double>(basis.rows()));
  out.residual = rms / denom;
  return out;
}

std::vector<ComplexPoint> hierarchy_samples(const PeriodMatrix& pm, int count, std::uint64_t seed) {
  if (count < 1) throw InputError("sample count must be positive");
  const int g = pm.genus();
  CounterRng rng(seed, 0x5a3);
  std::vector<ComplexPoint> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k) {
    RVector x(g), c(g);
    for (int i = 0; i < g; ++i) {
      x(i) = rng.uniform(-0.5, 0.5);
      c(i) = rng.uniform(-0.5, 0.5);
    }
    out.push_back(x.cast<Complex>() + pm.tau() * c.cast<Complex>());
  }
  return out;
}

AffineSolution solve_order(HierarchyState& st, int s, const std::vector<ComplexPoint>& samples, double eps) {
  st.validate();
  check_order(st, s, 1);
  const int n = st.unknowns();
  if (static_cast<int>(samples.size()) < 2 * n) {
    throw InputError("solve_order needs at least " + std::to_string(2 * n) + " samples");
  }
  const HierarchyState zeroed = zero_order_unknowns(st, s);
  CMatrix basis(samples.size(), n);
  CVector offset(samples.size());
  for (std::size_t k = 0; k < samples.size(); ++k) {
    basis.row(k) = order_basis(st, samples[k], eps).transpose();
    offset(k) = assemble_P(zeroed, s, samples[k], eps);
  }
  const AffineSolution sol = solve_affine_system(basis, offset);
  st.alpha1[s - 1] = sol.x(0);
  for (int j = 1; j < st.m; ++j) st.alphaj[j - 1][s - 1] = sol.x(j);
  st.W[s - 1] = sol.x.tail(st.pm.genus());
  if (static_cast<int>(st.per_order_residuals.size()) < s) {
    st.per_order_residuals.resize(s, 0.0);
    st.per_order_ranks.resize(s, 0);
  }
  st.per_order_residuals[s - 1] = sol.residual;
  st.per_order_ranks[s - 1] = sol.rank;
  return sol;
}

HierarchyState run_hierarchy(HierarchyState st, int S, const std::vector<ComplexPoint>& samples, double eps) {
  if (S < 1 || S > kMaxDerivativeOrder) throw InputError("hierarchy order must lie in 1..12");
  if (S > st.order) {
    st.W.resize(S, CVector::Zero(st.pm.genus()));
    st.alpha1.resize(S, 0.0);
    for (auto& a : st.alphaj) a.resize(S, 0.0);
    st.order = S;
  }
  st.validate();
  st.per_order_residuals.clear();
  st.per_order_ranks.clear();
  for (int s = 1; s <= S; ++s) {
    const AffineSolution sol = solve_order(st, s, samples, eps);
    if (sol.residual > kHierarchyAbortResidual) {
      std::ostringstream msg, report;
      report << std::setprecision(17);
      msg << "hierarchy aborted at order " << s << ": residual " << sol.residual << " exceeds "
          << kHierarchyAbortResidual;
      report << "order,residual,rank\n";
      for (int k = 0; k < s; ++k)
        report << (k + 1) << "," << st.per_order_residuals[k] << "," << st.per_order_ranks[k] << "\n";
      throw ToleranceError(msg.str(), report.str());
    }
  }
  return st;
}

bool PremiseReport::passed(double tol) const {
  if (tangency > tol) return false;
  for (double r : shifted)
    if (r > tol) return false;
  return true;
}

PremiseReport premise_check(const PeriodMatrix& pm, int m, const ComplexPoint& u,
                            const std::vector<ComplexPoint>& b, double eps) {
  const int g = pm.genus();
  const int rows = 1 << g;
  if (m < 1 || static_cast<int>(b.size()) != m) throw InputError("premise check needs m >= 1 and m points b_j");
  if (m + 2 > rows) throw InputError("m + 2 exceeds the 2^g Kummer coordinates");
  const SecondOrderBasis basis(pm);

  std::vector<DerivativeSpec> specs(g + 1);
  for (int i = 0; i < g; ++i) specs[i + 1].directions.push_back(CVector::Unit(g, i));
  const ScaledMatrix at_u = second_order_batch(basis, u, specs, eps);
  const double norm_u = at_u.scaled.col(0).norm();

  CMatrix plane(rows, m + 1);
  plane.col(0) = at_u.scaled.col(0) / norm_u;
  for (int j = 0; j < m; ++j) {
    const CVector v = second_order_values(basis, b[j], eps).scaled;
    plane.col(j + 1) = v / v.norm();
  }
  const CMatrix grad = at_u.scaled.rightCols(g) / norm_u;

  // D_W K(u) closest to the plane: smallest right singular vector of the
  // gradient block projected off the plane.
  Eigen::HouseholderQR<CMatrix> qr(plane);
  const CMatrix q = qr.householderQ() * CMatrix::Identity(rows, m + 1);
  const CMatrix projected = grad - q * (q.adjoint() * grad);
  Eigen::JacobiSVD<CMatrix> svd(projected, Eigen::ComputeFullV);
  PremiseReport rep;
  rep.direction = svd.matrixV().col(g - 1);

  CMatrix augmented(rows, m + 2);
  augmented.leftCols(m + 1) = plane;
  const CVector tangent = grad * rep.direction;
  augmented.col(m + 1) = tangent / tangent.norm();
  const RVector sigma = Eigen::JacobiSVD<CMatrix>(augmented).singularValues();
  rep.tangency = sigma(m + 1) / sigma(0);

  std::vector<ComplexPoint> shifted_points{u, ComplexPoint(-u)};
  for (const auto& p : b) shifted_points.push_back(p);
  for (int j = 0; j + 1 < m; ++j) {
    const ComplexPoint half = -0.5 * (b[m - 1] - b[j]);  // -(b_m + mu)/2 with mu = -b_j
    double best = std::numeric_limits<double>::infinity();
    Lift best_lift;
    for (const Lift& lift : all_lifts(g)) {
      const SecantConfiguration cfg{pm, m, shifted_points, ComplexPoint(half + half_period(pm, lift)),
                                    std::nullopt, std::nullopt};
      const double r = secant_residual(cfg, eps);
      if (r < best) {
        best = r;
        best_lift = lift;
      }
    }
    rep.shifted.push_back(best);
    rep.shifted_lifts.push_back(best_lift);
  }
  return rep;
}

namespace {

std::vector<ComplexPoint> g_shifts(const HierarchyState& st) {
  std::vector<ComplexPoint> ys{st.u, ComplexPoint(-st.u)};
  for (int j = 0; j + 1 < st.m; ++j) ys.push_back(st.b[j]);
  return ys;
}

}  // namespace

std::vector<ComplexPoint> locate_G_points(const HierarchyState& st, int starts, std::uint64_t seed, double eps) {
  const int g = st.pm.genus();
  const std::vector<ComplexPoint> ys = g_shifts(st);
  std::vector<DerivativeSpec> specs(g + 1);
  for (int i = 0; i < g; ++i) specs[i + 1].directions.push_back(CVector::Unit(g, i));
  const RVector zero = RVector::Zero(g);

  auto evaluate = [&](const ComplexPoint& z, CVector& f, CMatrix& jac) {
    f.resize(ys.size());
    jac.resize(ys.size(), g);
    for (std::size_t k = 0; k < ys.size(); ++k) {
      const auto v = theta_batch(st.pm, zero, ComplexPoint(z - ys[k]), specs, eps);
      f(k) = v[0].scaled;
      for (int i = 0; i < g; ++i) jac(k, i) = v[i + 1].scaled;
    }
  };
  auto on_g = [&](const ComplexPoint& z) {
    for (const auto& y : ys)
      if (std::abs(theta(st.pm, ComplexPoint(z - y), {}, eps)) > 1e-10) return false;
    return true;
  };

  std::vector<ComplexPoint> found;
  CounterRng rng(seed, 0x6e0);
  for (int start = 0; start < starts; ++start) {
    RVector x(g), c(g);
    for (int i = 0; i < g; ++i) {
      x(i) = rng.uniform(-0.5, 0.5);
      c(i) = rng.uniform(-0.5, 0.5);
    }
    ComplexPoint z = x.cast<Complex>() + st.pm.tau() * c.cast<Complex>();
    CVector f;
    CMatrix jac;
    evaluate(z, f, jac);
    for (int it = 0; it < 60; ++it) {
      if (f.norm() < 1e-15) break;
      const CVector step = jac.completeOrthogonalDecomposition().solve(f);
      double damping = 1.0;
      ComplexPoint next = z;
      CVector fn;
      CMatrix jn;
      for (int h = 0; h < 10; ++h) {
        next = z - damping * step;
        evaluate(next, fn, jn);
        if (fn.norm() < f.norm()) break;
        damping *= 0.5;
      }
      z = next;
      f = fn;
      jac = jn;
      if (!z.allFinite() || (damping * step).norm() < 1e-16) break;
    }
    if (!z.allFinite()) continue;
    const ComplexPoint reduced = reduce_point(st.pm, z).point;
    if (!on_g(reduced)) continue;
    const bool duplicate = std::any_of(found.begin(), found.end(), [&](const ComplexPoint& p) {
      return lattice_distance(st.pm, p, reduced) < 1e-6;
    });
    if (!duplicate) found.push_back(reduced);
  }
  return found;
}

RestrictionReport restriction_identity_check(const HierarchyState& st, int s,
                                             const std::vector<ComplexPoint>& G_points, double eps) {
  st.validate();
  check_order(st, s, 1);
  const PeriodMatrix& pm = st.pm;
  const int m = st.m;
  const std::vector<ComplexPoint> ys = g_shifts(st);
  for (const auto& z : G_points) {
    for (const auto& y : ys) {
      if (std::abs(theta(pm, ComplexPoint(z - y), {}, eps)) > 1e-8) {
        throw InputError("point is not on G: a defining theta translate exceeds 1e-8");
      }
    }
  }
  std::vector<CVector> plus_curve(st.W.begin(), st.W.begin() + s), minus_curve;
  for (const auto& w : plus_curve) minus_curve.push_back(-w);
  const ComplexPoint& bm = st.b[m - 1];

  RestrictionReport rep;
  for (const auto& z : G_points) {
    const double base = doubled_log_scale(pm, z);
    Complex r = 0.0, t = 0.0;
    for (int k = 0; k < term_count(st); ++k) {
      const ComplexPoint x = term_point(st, k);
      const Series alpha = alpha_series(st, k, s);
      // R: theta(z + x + C) theta(z - x);  T: theta(z + x) theta(z - x - C)
      const ScaledSeries moving_r = theta_series(pm, ComplexPoint(z + x), plus_curve, s, eps);
      const ScaledComplex fixed_r = theta_scaled(pm, ComplexPoint(z - x), {}, eps);
      r += multiply(alpha, moving_r.coeffs, s)[s] * fixed_r.scaled *
           std::exp(moving_r.log_scale + fixed_r.log_scale - base);
      const ScaledSeries moving_t = theta_series(pm, ComplexPoint(z - x), minus_curve, s, eps);
      const ScaledComplex fixed_t = theta_scaled(pm, ComplexPoint(z + x), {}, eps);
      t += multiply(alpha, moving_t.coeffs, s)[s] * fixed_t.scaled *
           std::exp(moving_t.log_scale + fixed_t.log_scale - base);
    }

    // Delta_{s-1} theta_{-b_m} . theta_{b_m}
    const ScaledComplex d_r = apply_delta(st, s - 1, +1, 1.0, ComplexPoint(-bm), z, eps);
    const ScaledComplex th_bm = theta_scaled(pm, ComplexPoint(z - bm), {}, eps);
    const Complex rhs_r = d_r.scaled * th_bm.scaled * std::exp(d_r.log_scale + th_bm.log_scale - base);

    // Delta^-_{s-1} theta_{b_m} . theta_{-b_m} + sum_j sum_l alpha_{j+2,l} theta_{-b_j} Delta^-_{k} theta_{b_j}
    // with k = s - l (primary reading) or k = s - j (alternative reading).
    const ScaledComplex d_t = apply_delta(st, s - 1, -1, 1.0, bm, z, eps);
    const ScaledComplex th_mbm = theta_scaled(pm, ComplexPoint(z + bm), {}, eps);
    Complex rhs_t = d_t.scaled * th_mbm.scaled * std::exp(d_t.log_scale + th_mbm.log_scale - base);
    Complex rhs_t_alt = rhs_t;
    for (int j = 1; j < m; ++j) {
      const ComplexPoint& bj = st.b[j - 1];
      const ScaledComplex th = theta_scaled(pm, ComplexPoint(z + bj), {}, eps);
      for (int l = 1; l <= s; ++l) {
        const Complex a = st.alphaj[j - 1][l - 1];
        if (a == 0.0) continue;
        const ScaledComplex d = apply_delta(st, s - l, -1, 1.0, bj, z, eps);
        rhs_t += a * th.scaled * d.scaled * std::exp(th.log_scale + d.log_scale - base);
        if (s - j >= 0) {
          const ScaledComplex d_alt = apply_delta(st, s - j, -1, 1.0, bj, z, eps);
          rhs_t_alt += a * th.scaled * d_alt.scaled * std::exp(th.log_scale + d_alt.log_scale - base);
        }
      }
    }
    const double norm_r = std::max({1.0, std::abs(r), std::abs(rhs_r)});
    const double norm_t = std::max({1.0, std::abs(t), std::abs(rhs_t)});
    rep.discrepancy = std::max(rep.discrepancy, std::abs(r - rhs_r) / norm_r);
    rep.t_discrepancy = std::max(rep.t_discrepancy, std::abs(t - rhs_t) / norm_t);
    rep.t_discrepancy_alt = std::max(rep.t_discrepancy_alt, std::abs(t - rhs_t_alt) / norm_t);
    rep.r_minus_t = std::max(rep.r_minus_t, std::abs(r - t) / std::max({1.0, std::abs(r), std::abs(t)}));
  }
  return rep;
}

}  // namespace secantlab
