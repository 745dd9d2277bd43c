#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sandwalk/laurent.hpp"

namespace sandwalk {

/// Verified factorization p_char = p_plus * p_zero, where p_plus collects the
/// roots off the unit circle (distinct) and p_zero the roots on it
/// (distinct).  Polynomial identities are exact; root moduli and the spectral
/// projections are floating with the recorded tolerances.
struct SpectralSplit {
    LaurentPoly p_char;
    LaurentPoly p_plus;
    LaurentPoly p_zero;
    std::vector<std::complex<double>> plus_roots;
    std::vector<std::complex<double>> zero_roots;
    // Dissipative certificate: p_plus itself or a verified multiple of it.
    LaurentPoly edp_witness;

    double modulus_tol = 1e-9;
    double residual_tol = 1e-8;

    // Filled by projections():
    bool has_projections = false;
    std::vector<std::complex<double>> phi_eigenvalues;
    Eigen::MatrixXcd pi_plus;
    Eigen::MatrixXcd pi_zero;
};

/// Exact integer characteristic polynomial via the trace recursion.
LaurentPoly char_poly(const RatMatrix& phi);

struct SplitVerification {
    std::optional<SpectralSplit> split;
    std::vector<std::string> failures;  // one entry per failed condition
    bool accepted() const { return split.has_value(); }
};

/// Accepts iff (a) exact product equality, (b) both candidates squarefree and
/// coprime (exact gcd), (c) numeric root moduli classify off/on the unit
/// circle, (d) p_plus (or a multiple: supplied, else a bounded search) is
/// dissipative.
SplitVerification verify_split(const LaurentPoly& p_char, const LaurentPoly& p_plus,
                               const LaurentPoly& p_zero, double modulus_tol = 1e-9,
                               double residual_tol = 1e-8,
                               const std::optional<LaurentPoly>& edp_multiplier = std::nullopt);

/// Spectral projections pi_plus / pi_zero of phi from its eigendecomposition,
/// rejecting near-defective matrices.  Checks pi+pi0 ~ I and idempotency
/// within residual_tol.
SpectralSplit projections(const RatMatrix& phi, SpectralSplit split);

/// Distances from the expanding / neutral eigenspaces.
double d_plus(const SpectralSplit& split, const Eigen::VectorXcd& v);
double d_zero(const SpectralSplit& split, const Eigen::VectorXcd& v);
double d_plus(const SpectralSplit& split, const RatVector& v);
double d_zero(const SpectralSplit& split, const RatVector& v);

/// Max-norm of p(phi) * pi, with p(phi) evaluated exactly.
double annihilation_check(const RatMatrix& phi, const LaurentPoly& p,
                          const Eigen::MatrixXcd& pi);

/// Bounded search for a multiplier u (deg <= max_degree, |coeffs| <= max_coeff,
/// positive leading coefficient) with u*p dissipative; u = 1 found first.
std::optional<LaurentPoly> find_edp_multiple(const LaurentPoly& p, int max_degree = 4,
                                             int max_coeff = 8);

/// Roots of a monic ordinary polynomial via its companion matrix.
std::vector<std::complex<double>> poly_roots(const LaurentPoly& p);

/// Exact: gcd(p, p') is constant.
bool poly_squarefree(const LaurentPoly& p);
/// Exact: gcd(p, q) is constant.
bool poly_coprime(const LaurentPoly& p, const LaurentPoly& q);

/// Smallest L <= max_exponent with p | t^L - 1, if any (exact division).
std::optional<int> divides_t_pow_minus_one(const LaurentPoly& p, int max_exponent = 720);

}  // namespace sandwalk
