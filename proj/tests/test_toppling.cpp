#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <complex>

#include "sandwalk/rng.hpp"
#include "sandwalk/spectral.hpp"
#include "sandwalk/toppling.hpp"

using namespace sandwalk;

namespace {

// Independent oracle: binary expansion of K as a polynomial in t, the
// canonical representative modulo <2 - t> (t acts as doubling).
LaurentPoly binary_expansion_poly(Int k) {
    LaurentPoly p;
    long long bit = 0;
    while (k > 0) {
        if (k % 2 == 1) p = p + LaurentPoly::monomial(1, bit);
        k /= 2;
        ++bit;
    }
    return p;
}

// Independent oracle: long division of num by den over the rationals;
// returns true iff the remainder vanishes.
bool divides_exactly(const LaurentPoly& den, const LaurentPoly& num) {
    if (num.is_zero()) return true;
    if (den.is_zero()) return false;
    // shift both to ordinary polynomials
    LaurentPoly n = shifted(num, -num.min_degree());
    LaurentPoly d = shifted(den, -den.min_degree());
    std::vector<Rat> a(static_cast<std::size_t>(n.max_degree()) + 1, Rat(0));
    std::vector<Rat> b(static_cast<std::size_t>(d.max_degree()) + 1, Rat(0));
    n.for_each_term([&](long long deg, const Int& c) { a[static_cast<std::size_t>(deg)] = Rat(c); });
    d.for_each_term([&](long long deg, const Int& c) { b[static_cast<std::size_t>(deg)] = Rat(c); });
    while (a.size() >= b.size()) {
        Rat f = a.back() / b.back();
        std::size_t off = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i) a[off + i] -= f * b[i];
        a.pop_back();
        while (!a.empty() && a.back() == 0) a.pop_back();
        if (a.empty()) return true;
    }
    return a.empty();
}

LaurentPoly random_poly_bounded(SplitMix64& rng, const Int& max_height, int max_span) {
    long long lo = static_cast<long long>(rng.next() % 9) - 4;
    std::size_t span = 1 + rng.next() % static_cast<std::uint64_t>(max_span);
    std::vector<Int> coeffs(span);
    std::uint64_t mod = max_height.convert_to<std::uint64_t>();
    for (auto& c : coeffs) {
        Int v = rng.next() % (2 * mod + 1);
        c = v - Int(mod);
    }
    return LaurentPoly::from_span(lo, std::move(coeffs));
}

}  // namespace

TEST_CASE("single toppling moves") {
    LaurentPoly y_sol = parse_poly("t^2-3*t+1");

    ToppleStep s1 = topple_once(parse_poly("10"), y_sol, 0);
    CHECK(s1.result == parse_poly("3*t^-1+1+3*t"));
    CHECK(s1.cofactor_increment == parse_poly("-3*t^-1"));

    ToppleStep s2 = topple_once(parse_poly("5"), parse_poly("2-t"), 0);
    CHECK(s2.result == parse_poly("1+2*t"));
    CHECK(s2.cofactor_increment == parse_poly("2"));

    ToppleStep s3 = topple_once(y_sol, y_sol, 1);  // j = i0
    CHECK(s3.result.is_zero());
    CHECK(s3.cofactor_increment == parse_poly("1"));

    CHECK_THROWS_AS(topple_once(parse_poly("10"), parse_poly("t^2-2*t+1"), 0),
                    std::domain_error);
    CHECK_THROWS_AS(topple_once(parse_poly("2"), y_sol, 0), std::domain_error);
}

TEST_CASE("topple_once leaves at most half the pivot magnitude") {
    SplitMix64 rng(31);
    LaurentPoly y_sol = parse_poly("t^2-3*t+1");
    for (int it = 0; it < 200; ++it) {
        Int v = Int(rng.next() % 2000) - 1000;
        if (int_abs(v) < 3) continue;
        ToppleStep s = topple_once(LaurentPoly::monomial(v, 0), y_sol, 0);
        CHECK(2 * int_abs(s.result.coeff(0)) <= 3);
        // move identity: p - p' == increment * y
        CHECK(LaurentPoly::monomial(v, 0) - s.result == s.cofactor_increment * y_sol);
    }
}

TEST_CASE("constant reduction examples") {
    SUBCASE("binary case") {
        ToppleReport rep = reduce_constant(5, parse_poly("2-t"));
        CHECK(rep.output == parse_poly("1+t^2"));
        CHECK(rep.output == binary_expansion_poly(5));
        CHECK(rep.cofactor == parse_poly("2+t"));
        CHECK(verify_membership(rep));
    }
    SUBCASE("below threshold") {
        ToppleReport rep = reduce_constant(2, parse_poly("t^2-3*t+1"));
        CHECK(rep.output == parse_poly("2"));
        CHECK(rep.cofactor.is_zero());
        CHECK(rep.topples == 0);
    }
    SUBCASE("largest-first schedule on K=10") {
        ToppleReport rep = reduce_constant(10, parse_poly("t^2-3*t+1"));
        CHECK(rep.output == parse_poly("t^-2+t^-1+t+t^2"));
        CHECK(verify_membership(rep));
        // synthetic division oracle: y divides 10 - Q
        CHECK(divides_exactly(rep.reducer, rep.input - rep.output));
        // evaluating Q at both roots of y recovers 10
        for (auto root : poly_roots(parse_poly("t^2-3*t+1"))) {
            std::complex<double> q = eval_poly(rep.output, root);
            CHECK(std::abs(q - 10.0) < 1e-6);
        }
    }
}

TEST_CASE("binary oracle equality for all K in [1, 1024]") {
    LaurentPoly y = parse_poly("2-t");
    for (Int k = 1; k <= 1024; ++k) {
        ToppleReport rep = reduce_constant(k, y);
        CHECK(rep.output == binary_expansion_poly(k));
        CHECK(verify_membership(rep));
    }
}

TEST_CASE("polynomial reduction examples") {
    LaurentPoly y_sol = parse_poly("t^2-3*t+1");

    ToppleReport zero = reduce_poly(LaurentPoly(), y_sol);
    CHECK(zero.output.is_zero());
    CHECK(zero.cofactor.is_zero());

    ToppleReport self = reduce_poly(y_sol, y_sol);
    CHECK(self.output.is_zero());
    CHECK(self.cofactor == parse_poly("1"));

    ToppleReport shifted_const = reduce_poly(parse_poly("100*t^5"), parse_poly("2-t"));
    CHECK(shifted_const.output == parse_poly("t^11+t^10+t^7"));
    CHECK(shifted_const.output == shifted(binary_expansion_poly(100), 5));
}

TEST_CASE("membership certificates") {
    ToppleReport rep = reduce_poly(parse_poly("17*t^3-44*t+9"), parse_poly("t^2-3*t+1"));
    CHECK(verify_membership(rep));

    ToppleReport tampered = rep;
    tampered.output = tampered.output + parse_poly("1");
    CHECK_FALSE(verify_membership(tampered));

    ToppleReport passthrough;
    passthrough.input = parse_poly("t-1");
    passthrough.output = parse_poly("t-1");
    passthrough.reducer = parse_poly("t^2-3*t+1");
    CHECK(verify_membership(passthrough));
}

TEST_CASE("certificate soundness and uniform height over random inputs") {
    SplitMix64 rng(37);
    std::vector<LaurentPoly> reducers = {parse_poly("t^2-3*t+1"), parse_poly("2-t"),
                                         parse_poly("t^4-3*t^2+1")};
    Int billion = 1000000000;
    for (int it = 0; it < 300; ++it) {
        const LaurentPoly& y = reducers[it % reducers.size()];
        LaurentPoly p = random_poly_bounded(rng, billion, 8);
        ToppleReport rep = reduce_poly(p, y);
        CHECK(verify_membership(rep));
        CHECK(rep.final_height <= rep.height_cap);
    }
}

TEST_CASE("non-dissipative reducers are rejected") {
    CHECK_THROWS_AS(reduce_constant(100, parse_poly("t^2-2*t+1")), std::domain_error);
    CHECK_THROWS_AS(reduce_poly(parse_poly("t^3"), parse_poly("t^2-2*t+1")), std::domain_error);
}

TEST_CASE("already-reduced inputs pass through unchanged") {
    SplitMix64 rng(41);
    LaurentPoly y = parse_poly("t^2-3*t+1");  // threshold |y0| = 3
    for (int it = 0; it < 100; ++it) {
        LaurentPoly q = random_poly_bounded(rng, 2, 6);
        ToppleReport rep = reduce_poly(q, y);
        CHECK(rep.output == q);
        CHECK(rep.topples == 0);
    }
}

TEST_CASE("logarithmic mass and diameter across twelve decades") {
    LaurentPoly y = parse_poly("t^2-3*t+1");
    Int k = 1;
    for (int exp10 = 1; exp10 <= 12; ++exp10) {
        k *= 10;
        ToppleReport rep = reduce_constant(k, y);
        CHECK(verify_membership(rep));
        double log2k = static_cast<double>(floor_log2(k)) + 1.0;
        CHECK(to_double(rep.output.length()) / log2k <= 6.0);
        CHECK(static_cast<double>(rep.final_diameter) / log2k <= 6.0);
        CHECK(rep.final_height <= rep.height_cap);
    }
}

TEST_CASE("single-term reducers degenerate to modular reduction") {
    ToppleReport rep = reduce_constant(17, parse_poly("5"));
    CHECK(verify_membership(rep));
    CHECK(rep.final_height < 5);
    // +-t^k generates the whole ring, so anything reduces to zero
    ToppleReport unit = reduce_poly(parse_poly("7*t^3-4"), parse_poly("t"));
    CHECK(unit.output.is_zero());
    CHECK(verify_membership(unit));
}
