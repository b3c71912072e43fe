#include "secantlab/series.hpp"

#include <algorithm>

namespace secantlab {

Series multiply(const Series& a, const Series& b, int order) {
  Series out(order + 1, 0.0);
  for (int i = 0; i <= order && i < static_cast<int>(a.size()); ++i) {
    if (a[i] == 0.0) continue;
    for (int j = 0; i + j <= order && j < static_cast<int>(b.size()); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

Series add(const Series& a, const Series& b) {
  Series out(std::max(a.size(), b.size()), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
  return out;
}

Series scale(const Series& a, Complex factor) {
  Series out = a;
  for (auto& c : out) c *= factor;
  return out;
}

}  // namespace secantlab
