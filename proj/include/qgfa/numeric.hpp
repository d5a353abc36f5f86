#pragma once

#include <cmath>
#include <stdexcept>

namespace qgfa {

// (1 - e^{-y}) / y with a series switch for small y to avoid cancellation.
inline double one_minus_exp_over(double y) {
    if (std::abs(y) < 1e-4) {
        return 1.0 - y / 2.0 + y * y / 6.0;
    }
    return -std::expm1(-y) / y;
}

inline void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

}  // namespace qgfa
