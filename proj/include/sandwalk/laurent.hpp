#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sandwalk/exact_linalg.hpp"
#include "sandwalk/numeric.hpp"

namespace sandwalk {

/// Integer Laurent polynomial in canonical form: a dense coefficient span
/// with an integer offset, no zero coefficients at either end, and the zero
/// polynomial represented by an empty span.
class LaurentPoly {
public:
    LaurentPoly() = default;

    static LaurentPoly constant(Int c);
    static LaurentPoly monomial(Int c, long long degree);
    // Takes coefficients of t^{min_degree}, t^{min_degree+1}, ...; canonicalizes.
    static LaurentPoly from_span(long long min_degree, std::vector<Int> coeffs);

    bool is_zero() const { return coeffs_.empty(); }

    // m(p) / M(p); rejected on the zero polynomial (span undefined).
    long long min_degree() const;
    long long max_degree() const;
    long long diameter() const { return max_degree() - min_degree(); }

    // Coefficient of t^k (zero outside the span).
    const Int& coeff(long long k) const;

    long long term_count() const;  // nonzero coefficients

    // ||p||_P = sum of |coefficients|.
    Int length() const;
    // K(p) = max |coefficient|; 0 for the zero polynomial.
    Int height() const;

    void for_each_term(const std::function<void(long long, const Int&)>& fn) const;

    // Raw span access (used by the toppling sweep).
    long long span_offset() const { return min_deg_; }
    const std::vector<Int>& span() const { return coeffs_; }

    LaurentPoly operator-() const;
    friend LaurentPoly operator+(const LaurentPoly& p, const LaurentPoly& q);
    friend LaurentPoly operator-(const LaurentPoly& p, const LaurentPoly& q);
    friend LaurentPoly operator*(const LaurentPoly& p, const LaurentPoly& q);
    friend bool operator==(const LaurentPoly& p, const LaurentPoly& q);

private:
    long long min_deg_ = 0;
    std::vector<Int> coeffs_;  // empty <=> zero; otherwise front()!=0 && back()!=0

    void trim();
};

LaurentPoly shifted(const LaurentPoly& p, long long k);  // p * t^k
LaurentPoly scaled(const LaurentPoly& p, const Int& c);

struct NormStats {
    Int length_p;  // ||p||_P
    Int height;    // K(p)
    bool span_defined = false;
    long long min_deg = 0, max_deg = 0, diameter = 0;
};

NormStats norm_stats(const LaurentPoly& p);

/// Verdict of the dissipativity predicate on a reducer polynomial y:
/// with y0 the max-magnitude coefficient, delta = ||y||_P - |y0| and
/// r = (second-largest magnitude)/|y0|, the reducer is usable iff
/// delta * r < 1.  Single-term polynomials hold vacuously with r = 0.
struct EdpReport {
    bool holds = false;
    Int y0;             // signed max-magnitude coefficient
    long long i0 = 0;   // its degree (smallest degree on magnitude ties)
    Int delta;
    Rat r;
    Rat contraction;    // delta * r
};

EdpReport edp_check(const LaurentPoly& y);

// Sum_i p_i A^i, exact; A must be invertible when p has negative degrees.
RatMatrix eval_poly(const LaurentPoly& p, const RatMatrix& a);
RatVector eval_poly_vec(const LaurentPoly& p, const RatMatrix& a, const RatVector& w);
std::complex<double> eval_poly(const LaurentPoly& p, std::complex<double> z);

/// Text form: signed integer coefficients with caret powers, e.g.
/// "t^-2+3*t-1".  Parsing round-trips exactly with to_string.
std::string to_string(const LaurentPoly& p, char var = 't');

class PolyParseError : public std::invalid_argument {
public:
    PolyParseError(const std::string& what, std::size_t position)
        : std::invalid_argument(what), position_(position) {}
    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

LaurentPoly parse_poly(std::string_view text);

}  // namespace sandwalk
