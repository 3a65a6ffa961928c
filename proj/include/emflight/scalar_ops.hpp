#pragma once

#include <cmath>

namespace emflight {

inline double square(double x) { return x * x; }

// x |x|, the quadratic drag kernel; C1 everywhere.
inline double signed_square(double x) { return x * std::abs(x); }

}  // namespace emflight
