#ifndef SECANTLAB_SERIES_HPP
#define SECANTLAB_SERIES_HPP

#include <vector>

#include "secantlab/types.hpp"

namespace secantlab {

// Truncated power series in eps: coefficient k multiplies eps^k.
using Series = std::vector<Complex>;

// Product truncated after eps^order; missing coefficients count as zero.
Series multiply(const Series& a, const Series& b, int order);

Series add(const Series& a, const Series& b);

Series scale(const Series& a, Complex factor);

inline Complex coefficient(const Series& a, int k) {
  return k >= 0 && k < static_cast<int>(a.size()) ? a[k] : Complex(0.0);
}

}  // namespace secantlab

#endif  // SECANTLAB_SERIES_HPP
