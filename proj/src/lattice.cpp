#include "secantlab/lattice.hpp"

#include <cmath>
#include <limits>
#include <mutex>

namespace secantlab {

namespace {

// Depth-first Fincke-Pohst descent from the last coordinate to the first.
void descend(const RMatrix& t, const RVector& c, int level, double remaining,
             std::vector<int>& current, LatticePoints& out) {
  const int g = static_cast<int>(t.rows());
  double shift = 0.0;
  for (int j = level + 1; j < g; ++j) shift += t(level, j) * (current[j] + c(j));
  const double diag = t(level, level);
  const double reach = std::sqrt(std::max(remaining, 0.0));
  const long lo = static_cast<long>(std::ceil((-shift - reach) / diag - c(level)));
  const long hi = static_cast<long>(std::floor((-shift + reach) / diag - c(level)));
  for (long n = lo; n <= hi; ++n) {
    const double v = diag * (static_cast<double>(n) + c(level)) + shift;
    const double left = remaining - v * v;
    if (left < 0.0) continue;
    current[level] = static_cast<int>(n);
    if (level == 0) {
      out.coords.insert(out.coords.end(), current.begin(), current.end());
    } else {
      descend(t, c, level - 1, left, current, out);
    }
  }
}

}  // namespace

LatticePoints enumerate_ellipsoid(const RMatrix& upper, const RVector& center, double radius) {
  LatticePoints out;
  out.dim = static_cast<int>(upper.rows());
  if (out.dim == 0 || radius < 0.0) return out;
  std::vector<int> current(out.dim, 0);
  descend(upper, center, out.dim - 1, radius * radius, current, out);
  return out;
}

double shortest_lattice_vector(const RMatrix& upper) {
  const int g = static_cast<int>(upper.rows());
  // Any basis column bounds the minimum from above.
  double bound = std::numeric_limits<double>::infinity();
  for (int j = 0; j < g; ++j) bound = std::min(bound, upper.col(j).norm());
  const LatticePoints pts = enumerate_ellipsoid(upper, RVector::Zero(g), bound * (1.0 + 1e-12));
  double best = bound;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const int* n = pts.point(k);
    bool zero = true;
    RVector v(g);
    for (int i = 0; i < g; ++i) {
      v(i) = n[i];
      zero = zero && n[i] == 0;
    }
    if (!zero) best = std::min(best, (upper * v).norm());
  }
  return best;
}

std::shared_ptr<const LatticePoints> LatticeCache::get(std::uint64_t digest, const RMatrix& upper,
                                                       const RVector& center, double radius) {
  Key key{digest, radius, std::vector<double>(center.data(), center.data() + center.size())};
  {
    std::shared_lock lock(mutex_);
    auto it = entries_.find(key);
    if (it != entries_.end()) {
      ++hits_;
      return it->second;
    }
  }
  auto points = std::make_shared<const LatticePoints>(enumerate_ellipsoid(upper, center, radius));
  std::unique_lock lock(mutex_);
  if (entries_.size() >= capacity_) entries_.clear();
  auto [it, inserted] = entries_.emplace(std::move(key), std::move(points));
  return it->second;
}

std::size_t LatticeCache::size() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

void LatticeCache::clear() {
  std::unique_lock lock(mutex_);
  entries_.clear();
}

LatticeCache& LatticeCache::global() {
  static LatticeCache cache;
  return cache;
}

}  // namespace secantlab
