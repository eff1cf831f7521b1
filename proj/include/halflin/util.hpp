#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <string>
#include <string_view>

namespace halflin {

inline int sgn(double s) { return (s > 0.0) - (s < 0.0); }
inline int sgn(long double s) { return (s > 0.0L) - (s < 0.0L); }

/// log(exp(a) + exp(b)) without overflow.
inline double log_add_exp(double a, double b) {
    if (a == -std::numeric_limits<double>::infinity()) return b;
    if (b == -std::numeric_limits<double>::infinity()) return a;
    const double m = std::max(a, b);
    return m + std::log1p(std::exp(std::min(a, b) - m));
}

/// Fixed-format double for deterministic text output.
inline std::string fmt_double(double v, int precision = 15) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    return buf;
}

inline std::string fmt_long_double(long double v, int precision = 15) {
    char buf[80];
    std::snprintf(buf, sizeof buf, "%.*Lg", precision, v);
    return buf;
}

/// FNV-1a 64-bit hash, used for reproducibility fingerprints of configs.
inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

}  // namespace halflin
