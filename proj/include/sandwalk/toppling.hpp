#pragma once

#include <cstdint>

#include "sandwalk/laurent.hpp"

namespace sandwalk {

/// Result of reducing a polynomial modulo the ideal generated by a
/// dissipative reducer y, with an exact cofactor certificate:
///     input - output == cofactor * reducer.
struct ToppleReport {
    LaurentPoly input;
    LaurentPoly reducer;
    LaurentPoly output;    // Q
    LaurentPoly cofactor;  // x
    std::uint64_t topples = 0;
    std::uint64_t passes = 0;  // sweeps: a pass ends when a site topples twice
    Int final_height;          // K(Q)
    long long final_diameter = 0;  // d(Q), 0 when Q == 0
    Int height_cap;            // C_y = ceil(|y0|/(1-delta*r)) + |y0|
};

/// C_y, the uniform height bound guaranteed for reduced outputs.
Int reducer_height_cap(const EdpReport& edp);

/// One toppling move at degree j: subtracts q * t^{j-i0} * y where q is the
/// nearest integer to p_j / y0 (halves toward zero), leaving |p'_j| <= |y0|/2.
/// Requires edp_check(y).holds and |p_j| >= |y0|.
struct ToppleStep {
    LaurentPoly result;
    LaurentPoly cofactor_increment;
};
ToppleStep topple_once(const LaurentPoly& p, const LaurentPoly& y, long long j);

/// Reduce a constant K modulo <y>.
ToppleReport reduce_constant(const Int& k, const LaurentPoly& y);

/// Reduce an arbitrary polynomial modulo <y>.  Schedule: repeatedly topple
/// the coefficient of largest magnitude, ties broken toward the smallest
/// degree; sites topple while |p_j| >= |y0|.
ToppleReport reduce_poly(const LaurentPoly& p, const LaurentPoly& y);

/// Exact certificate check: input - output == cofactor * reducer.
bool verify_membership(const ToppleReport& report);

}  // namespace sandwalk
