#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace sandwalk {

inline constexpr const char* kVersion = "0.1.0";

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int int_abs(const Int& x) { return x < 0 ? Int(-x) : x; }
inline Rat rat_abs(const Rat& x) { return x < 0 ? Rat(-x) : x; }
inline int sign(const Int& x) { return x < 0 ? -1 : (x > 0 ? 1 : 0); }

inline double to_double(const Int& x) { return x.convert_to<double>(); }
inline double to_double(const Rat& x) { return x.convert_to<double>(); }

inline bool is_integer(const Rat& x) { return denominator(x) == 1; }

// Nearest-integer division; exact halves round toward zero.
inline Int round_div_half_toward_zero(const Int& a, const Int& b) {
    if (b == 0) throw std::domain_error("round_div: division by zero");
    Int q = a / b;  // truncates toward zero
    Int r = a - q * b;
    if (2 * int_abs(r) > int_abs(b)) q += (sign(r) == sign(b)) ? 1 : -1;
    return q;
}

// floor(log2 |x|) for x != 0, exact.
inline long long floor_log2(const Int& x) {
    if (x == 0) throw std::domain_error("floor_log2: zero");
    return static_cast<long long>(msb(int_abs(x)));
}

// Largest e >= 0 with q^e <= x, for q > 1 and x >= 1; exact.
inline long long floor_log_base(const Rat& q, const Rat& x) {
    if (q <= 1) throw std::domain_error("floor_log_base: base must exceed 1");
    if (x < 1) return 0;
    long long e = 0;
    Rat pw = q;
    while (pw <= x) {
        ++e;
        pw *= q;
    }
    return e;
}

}  // namespace sandwalk
