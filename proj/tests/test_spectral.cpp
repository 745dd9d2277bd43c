#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "sandwalk/catalog.hpp"
#include "sandwalk/escape.hpp"
#include "sandwalk/spectral.hpp"

using namespace sandwalk;

namespace {

const GroupSpec& sol() { return find_group(default_catalog(), "sol"); }
const GroupSpec& g2() { return find_group(default_catalog(), "g2"); }
const GroupSpec& golden() { return find_group(default_catalog(), "golden"); }
const GroupSpec& conner() { return find_group(default_catalog(), "conner_g1"); }

SpectralSplit accepted_split(const GroupSpec& spec) {
    SplitVerification v = verify_split(char_poly(spec.phi), parse_poly(spec.p_plus_text),
                                       parse_poly(spec.p_zero_text));
    REQUIRE(v.accepted());
    return projections(spec.phi, *v.split);
}

}  // namespace

TEST_CASE("characteristic polynomials of the catalog actions") {
    CHECK(char_poly(sol().phi) == parse_poly("t^2-3*t+1"));
    CHECK(char_poly(golden().phi) == parse_poly("t^4-3*t^2+1"));
    CHECK(char_poly(g2().phi) == parse_poly("t^4-3*t^3+2*t^2-3*t+1"));
    CHECK(char_poly(g2().phi) == parse_poly("t^2-3*t+1") * parse_poly("t^2+1"));
    CHECK(char_poly(conner().phi) == parse_poly("t^4-2*t^3+t^2-2*t+1"));

    // rational action with non-integer characteristic coefficients is flagged
    RatMatrix half = rat_zero(1, 1);
    half(0, 0) = Rat(3, 2);
    CHECK_THROWS_AS(char_poly(half), std::domain_error);
}

TEST_CASE("root finding classifies moduli") {
    auto roots = poly_roots(parse_poly("t^2-3*t+1"));
    REQUIRE(roots.size() == 2);
    CHECK(std::abs(roots[0]) == doctest::Approx(2.6180339887).epsilon(1e-9));
    CHECK(std::abs(roots[1]) == doctest::Approx(0.3819660113).epsilon(1e-9));

    auto circle = poly_roots(parse_poly("t^2+1"));
    for (auto z : circle) CHECK(std::abs(std::abs(z) - 1.0) < 1e-12);
}

TEST_CASE("split verification accepts g2 and sol") {
    SplitVerification v = verify_split(char_poly(g2().phi), parse_poly("t^2-3*t+1"),
                                       parse_poly("t^2+1"));
    REQUIRE(v.accepted());
    CHECK(v.split->edp_witness == parse_poly("t^2-3*t+1"));
    for (auto z : v.split->plus_roots) CHECK(std::abs(std::abs(z) - 1.0) > 1e-9);
    for (auto z : v.split->zero_roots) CHECK(std::abs(std::abs(z) - 1.0) <= 1e-9);

    SplitVerification s = verify_split(char_poly(sol().phi), parse_poly("t^2-3*t+1"),
                                       parse_poly("1"));
    CHECK(s.accepted());
}

TEST_CASE("split verification rejections are itemized") {
    // product mismatch for the non-split action
    SplitVerification bad = verify_split(char_poly(conner().phi), parse_poly("t^2-2*t-1"),
                                         parse_poly("t^2+1"));
    CHECK_FALSE(bad.accepted());
    REQUIRE(!bad.failures.empty());
    CHECK(bad.failures[0].find("product") != std::string::npos);

    // repeated roots
    LaurentPoly sq = parse_poly("t^2-2*t+1");
    SplitVerification rep = verify_split(sq * parse_poly("t^2+1"), sq, parse_poly("t^2+1"));
    CHECK_FALSE(rep.accepted());

    // swapped sides trip the modulus classification
    SplitVerification swapped = verify_split(char_poly(g2().phi), parse_poly("t^2+1"),
                                             parse_poly("t^2-3*t+1"));
    CHECK_FALSE(swapped.accepted());

    // non-monic candidates
    SplitVerification nm = verify_split(char_poly(sol().phi), parse_poly("2*t^2-6*t+2"),
                                        parse_poly("1"));
    CHECK_FALSE(nm.accepted());
}

TEST_CASE("projections: whole space expanding for sol") {
    SpectralSplit split = accepted_split(sol());
    CHECK(split.has_projections);
    CHECK((split.pi_plus - Eigen::MatrixXcd::Identity(2, 2)).cwiseAbs().maxCoeff() == 0.0);
    Eigen::VectorXcd v(2);
    v << std::complex<double>(3.7, 0), std::complex<double>(-1.2, 0);
    CHECK(d_plus(split, v) == 0.0);
    CHECK(d_zero(split, v) == doctest::Approx(v.norm()));
}

TEST_CASE("projections: g2 splits into expanding and neutral planes") {
    SpectralSplit split = accepted_split(g2());
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(4, 4);
    CHECK((split.pi_plus + split.pi_zero - id).cwiseAbs().maxCoeff() < 1e-8);
    CHECK((split.pi_plus * split.pi_plus - split.pi_plus).cwiseAbs().maxCoeff() < 1e-8);
    CHECK((split.pi_zero * split.pi_zero - split.pi_zero).cwiseAbs().maxCoeff() < 1e-8);
    CHECK((split.pi_plus * split.pi_zero).cwiseAbs().maxCoeff() < 1e-8);

    Eigen::VectorXcd e1 = Eigen::VectorXcd::Zero(4);
    e1(0) = 1.0;
    CHECK(d_plus(split, e1) + d_zero(split, e1) >= 1.0 - 1e-8);

    // vectors already in range(pi_plus) have no deviation from E_+
    Eigen::VectorXcd v(4);
    v << 1.0, -2.0, 0.5, 3.0;
    Eigen::VectorXcd projected = split.pi_plus * v;
    CHECK(d_plus(split, projected) <= 1e-8 * v.norm() + 1e-12);
}

TEST_CASE("near-defective actions are rejected") {
    const GroupSpec& h = find_group(default_catalog(), "heisenberg_action");
    // char poly (t-1)^2: the squarefree check already rejects the split
    SplitVerification v =
        verify_split(char_poly(h.phi), parse_poly("1"), parse_poly("t^2-2*t+1"));
    CHECK_FALSE(v.accepted());
    // force projections on a defective matrix directly
    SpectralSplit fake;
    fake.p_char = char_poly(h.phi);
    fake.p_plus = parse_poly("t-2");  // wrong on purpose: degrees 1 + 1
    fake.p_zero = parse_poly("t-1");
    CHECK_THROWS_AS(projections(h.phi, fake), std::domain_error);
}

TEST_CASE("annihilation residuals") {
    // Cayley-Hamilton, exact integer arithmetic
    CHECK(annihilation_check(sol().phi, char_poly(sol().phi),
                             Eigen::MatrixXcd::Identity(2, 2)) == 0.0);

    SpectralSplit split = accepted_split(g2());
    CHECK(annihilation_check(g2().phi, split.p_plus, split.pi_plus) < 1e-8);
    CHECK(annihilation_check(g2().phi, split.p_zero, split.pi_zero) < 1e-8);
    // the full characteristic polynomial annihilates everything
    CHECK(annihilation_check(g2().phi, split.p_char,
                             Eigen::MatrixXcd::Identity(4, 4)) == 0.0);
}

TEST_CASE("deviation growth along the orbit") {
    SpectralSplit split = accepted_split(g2());
    const RatVector& w = g2().kernel_gens[0];

    // d_+ stays bounded over phi^k w for k in [-20, 20]
    double max_dplus = 0;
    for (long long k = -20; k <= 20; ++k) {
        RatVector v = mat_vec(mat_pow(g2().phi, k), w);
        max_dplus = std::max(max_dplus, d_plus(split, v));
    }
    CHECK(max_dplus < 10.0);

    // d_0(phi^k w) grows like |lambda_1|^k as k -> +infinity
    double lambda1 = 0;
    for (auto z : split.plus_roots) lambda1 = std::max(lambda1, std::abs(z));
    std::vector<double> ks, logs;
    for (long long k = 5; k <= 20; ++k) {
        RatVector v = mat_vec(mat_pow(g2().phi, k), w);
        ks.push_back(static_cast<double>(k));
        logs.push_back(std::log(d_zero(split, v)));
    }
    double slope_fwd = fit_linear(ks, logs).slope;
    CHECK(slope_fwd <= std::log(lambda1) + 0.05);
    CHECK(slope_fwd >= std::log(lambda1) - 0.05);

    // and like the inverse of the smallest expanding modulus as k -> -infinity
    double lambda_min = 1e9;
    for (auto z : split.plus_roots) lambda_min = std::min(lambda_min, std::abs(z));
    std::vector<double> ks2, logs2;
    for (long long k = 5; k <= 20; ++k) {
        RatVector v = mat_vec(mat_pow(g2().phi, -k), w);
        ks2.push_back(static_cast<double>(k));
        logs2.push_back(std::log(d_zero(split, v)));
    }
    double slope_bwd = fit_linear(ks2, logs2).slope;
    CHECK(slope_bwd <= std::log(1.0 / lambda_min) + 0.05);
    CHECK(slope_bwd >= std::log(1.0 / lambda_min) - 0.05);
}

TEST_CASE("neutral factors divide a cyclotomic-like power") {
    CHECK(divides_t_pow_minus_one(parse_poly("t^2+1")) == 4);
    CHECK(divides_t_pow_minus_one(parse_poly("t-1")) == 1);
    CHECK(divides_t_pow_minus_one(parse_poly("t^2+t+1")) == 3);
    CHECK_FALSE(divides_t_pow_minus_one(parse_poly("t^2-3*t+1")).has_value());

    SpectralSplit split = accepted_split(g2());
    CHECK(poly_squarefree(split.p_zero));
    auto ell = divides_t_pow_minus_one(split.p_zero);
    REQUIRE(ell.has_value());
    CHECK(*ell <= 720);
}

TEST_CASE("bounded search for dissipative multiples") {
    auto u1 = find_edp_multiple(parse_poly("t^2-3*t+1"));
    REQUIRE(u1.has_value());
    CHECK(*u1 == parse_poly("1"));

    auto u2 = find_edp_multiple(parse_poly("t^4-3*t^2+1"));
    REQUIRE(u2.has_value());
    CHECK(*u2 == parse_poly("1"));

    // no multiple of (t-1)^2 can be dissipative: every representative of K
    // modulo it evaluates to K at t = 1, so norms cannot be logarithmic
    CHECK_FALSE(find_edp_multiple(parse_poly("t^2-2*t+1"), 3, 4).has_value());
}
