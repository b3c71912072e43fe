#ifndef SECANTLAB_LATTICE_HPP
#define SECANTLAB_LATTICE_HPP

#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <shared_mutex>
#include <tuple>
#include <vector>

#include "secantlab/types.hpp"

namespace secantlab {

// Integer points n of Z^g, stored row-major (dim ints per point).
struct LatticePoints {
  int dim = 0;
  std::vector<int> coords;

  std::size_t size() const { return dim == 0 ? 0 : coords.size() / static_cast<std::size_t>(dim); }
  const int* point(std::size_t k) const { return coords.data() + k * static_cast<std::size_t>(dim); }
};

// All n in Z^g with ||T (n + center)|| <= radius, for T upper triangular with
// positive diagonal. Points come out in a fixed lexicographic order.
LatticePoints enumerate_ellipsoid(const RMatrix& upper, const RVector& center, double radius);

// Shortest nonzero vector length min ||T v||, v in Z^g \ {0}.
double shortest_lattice_vector(const RMatrix& upper);

// Read-mostly store of ellipsoid enumerations keyed by
// (period-matrix digest, radius, center). Concurrent lookups take a shared
// lock; concurrent inserts of the same key are idempotent.
class LatticeCache {
 public:
  explicit LatticeCache(std::size_t capacity = 4096) : capacity_(capacity) {}

  std::shared_ptr<const LatticePoints> get(std::uint64_t digest, const RMatrix& upper,
                                           const RVector& center, double radius);

  std::size_t size() const;
  void clear();
  std::uint64_t hits() const { return hits_.load(); }

  static LatticeCache& global();

 private:
  using Key = std::tuple<std::uint64_t, double, std::vector<double>>;

  std::size_t capacity_;
  mutable std::shared_mutex mutex_;
  std::map<Key, std::shared_ptr<const LatticePoints>> entries_;
  std::atomic<std::uint64_t> hits_{0};
};

}  // namespace secantlab

#endif  // SECANTLAB_LATTICE_HPP
