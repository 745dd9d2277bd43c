#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "sandwalk/laurent.hpp"
#include "sandwalk/rng.hpp"

using namespace sandwalk;

namespace {

LaurentPoly random_poly(SplitMix64& rng, int max_span = 6, int max_coeff = 9) {
    long long lo = static_cast<long long>(rng.next() % 9) - 4;
    std::size_t span = 1 + rng.next() % static_cast<std::uint64_t>(max_span);
    std::vector<Int> coeffs(span);
    for (auto& c : coeffs)
        c = static_cast<long long>(rng.next() % (2 * max_coeff + 1)) - max_coeff;
    return LaurentPoly::from_span(lo, std::move(coeffs));
}

RatMatrix random_unimodular(SplitMix64& rng, Index n = 2, int shears = 4) {
    RatMatrix m = rat_identity(n);
    for (int s = 0; s < shears; ++s) {
        RatMatrix e = rat_identity(n);
        Index i = static_cast<Index>(rng.next() % static_cast<std::uint64_t>(n));
        Index j = static_cast<Index>(rng.next() % static_cast<std::uint64_t>(n));
        if (i == j) continue;
        e(i, j) = static_cast<long long>(rng.next() % 5) - 2;
        m = mat_mul(m, e);
    }
    return m;
}

}  // namespace

TEST_CASE("canonical form and span queries") {
    LaurentPoly zero;
    CHECK(zero.is_zero());
    CHECK_THROWS_AS(zero.min_degree(), std::domain_error);
    CHECK_THROWS_AS(zero.max_degree(), std::domain_error);

    LaurentPoly p = LaurentPoly::from_span(-1, {0, 0, 3, 0, -1, 0});
    CHECK(p.min_degree() == 1);
    CHECK(p.max_degree() == 3);
    CHECK(p.coeff(1) == 3);
    CHECK(p.coeff(2) == 0);
    CHECK(p.coeff(3) == -1);
    CHECK(p.coeff(100) == 0);

    // cancelling sums collapse to the canonical zero
    LaurentPoly q = LaurentPoly::monomial(2, 0) - LaurentPoly::monomial(1, 1);  // 2 - t
    LaurentPoly r = LaurentPoly::monomial(1, 1) - LaurentPoly::monomial(2, 0);  // t - 2
    CHECK((q + r).is_zero());
}

TEST_CASE("addition examples") {
    LaurentPoly p = parse_poly("t^2-3*t+1");
    CHECK(p + parse_poly("3*t") == parse_poly("t^2+1"));
    CHECK(p + LaurentPoly() == p);
    CHECK((parse_poly("2-t") + parse_poly("t-2")).is_zero());
}

TEST_CASE("multiplication examples") {
    CHECK(parse_poly("2-t") * parse_poly("2+t") == parse_poly("4-t^2"));
    CHECK(parse_poly("t^-1") * parse_poly("t^2-3*t+1") == parse_poly("t-3+t^-1"));
    // expanded product of the two factors of the g2 characteristic polynomial
    CHECK(parse_poly("t^2-3*t+1") * parse_poly("t^2+1") ==
          parse_poly("t^4-3*t^3+2*t^2-3*t+1"));
}

TEST_CASE("ring axioms on random inputs") {
    SplitMix64 rng(7);
    for (int it = 0; it < 200; ++it) {
        LaurentPoly p = random_poly(rng), q = random_poly(rng), r = random_poly(rng);
        CHECK((p + q) + r == p + (q + r));
        CHECK(p + q == q + p);
        CHECK(p * q == q * p);
        CHECK((p * q) * r == p * (q * r));
        CHECK(p * (q + r) == p * q + p * r);
    }
}

TEST_CASE("norm submultiplicativity and diameter additivity") {
    SplitMix64 rng(11);
    for (int it = 0; it < 200; ++it) {
        LaurentPoly p = random_poly(rng), q = random_poly(rng);
        if (p.is_zero() || q.is_zero()) continue;
        LaurentPoly prod = p * q;
        CHECK(prod.length() <= p.length() * q.length());
        CHECK(prod.diameter() == p.diameter() + q.diameter());
    }
}

TEST_CASE("norm_stats examples") {
    NormStats s = norm_stats(parse_poly("t^2-3*t+1"));
    CHECK(s.length_p == 5);
    CHECK(s.height == 3);
    CHECK(s.min_deg == 0);
    CHECK(s.max_deg == 2);
    CHECK(s.diameter == 2);

    NormStats z = norm_stats(LaurentPoly());
    CHECK(z.length_p == 0);
    CHECK(z.height == 0);
    CHECK_FALSE(z.span_defined);

    NormStats w = norm_stats(parse_poly("2*t^-1-3+2*t"));
    CHECK(w.length_p == 7);
    CHECK(w.height == 3);
    CHECK(w.min_deg == -1);
    CHECK(w.max_deg == 1);
    CHECK(w.diameter == 2);
}

TEST_CASE("dissipativity verdicts") {
    EdpReport a = edp_check(parse_poly("t^2-3*t+1"));
    CHECK(a.holds);
    CHECK(a.y0 == -3);
    CHECK(a.i0 == 1);
    CHECK(a.delta == 2);
    CHECK(a.r == Rat(1, 3));
    CHECK(a.contraction == Rat(2, 3));

    EdpReport b = edp_check(parse_poly("t^2-2*t+1"));
    CHECK_FALSE(b.holds);
    CHECK(b.delta == 2);
    CHECK(b.r == Rat(1, 2));
    CHECK(b.contraction == 1);

    EdpReport c = edp_check(parse_poly("t^4-3*t^2+1"));
    CHECK(c.holds);
    CHECK(c.delta == 2);
    CHECK(c.r == Rat(1, 3));

    EdpReport d = edp_check(parse_poly("2-t"));
    CHECK(d.holds);
    CHECK(d.delta == 1);
    CHECK(d.r == Rat(1, 2));

    // single-term rule
    EdpReport e = edp_check(parse_poly("5"));
    CHECK(e.holds);
    CHECK(e.r == 0);
    CHECK(e.delta == 0);

    CHECK_THROWS_AS(edp_check(LaurentPoly()), std::domain_error);
}

TEST_CASE("dissipativity under unit scaling, shifts, and integer scaling") {
    SplitMix64 rng(13);
    for (int it = 0; it < 100; ++it) {
        LaurentPoly y = random_poly(rng);
        if (y.is_zero()) continue;
        EdpReport base = edp_check(y);
        long long k = static_cast<long long>(rng.next() % 7) - 3;
        CHECK(edp_check(shifted(y, k)).holds == base.holds);
        CHECK(edp_check(scaled(y, -1)).holds == base.holds);
        // |c| > 1 rescales delta and the contraction but leaves r fixed
        Int c = 2 + static_cast<long long>(rng.next() % 3);
        EdpReport scaled_rep = edp_check(scaled(y, c));
        CHECK(scaled_rep.delta == base.delta * c);
        CHECK(scaled_rep.r == base.r);
        CHECK(scaled_rep.contraction == base.contraction * Rat(c));
        CHECK(scaled_rep.holds == (Rat(c) * base.contraction < 1));
    }
}

TEST_CASE("matrix evaluation examples") {
    RatMatrix sol(2, 2);
    sol(0, 0) = 2; sol(0, 1) = 1; sol(1, 0) = 1; sol(1, 1) = 1;

    CHECK(mat_eq(eval_poly(parse_poly("1"), sol), rat_identity(2)));
    CHECK(mat_eq(eval_poly(parse_poly("t"), sol), sol));
    CHECK(mat_is_zero(eval_poly(parse_poly("t^2-3*t+1"), sol)));  // Cayley-Hamilton

    RatMatrix singular = rat_zero(2, 2);
    singular(0, 0) = 1;
    CHECK_THROWS_AS(eval_poly(parse_poly("t^-1"), singular), std::domain_error);
}

TEST_CASE("matrix evaluation is a ring homomorphism") {
    SplitMix64 rng(17);
    for (int it = 0; it < 40; ++it) {
        LaurentPoly p = random_poly(rng, 4, 4), q = random_poly(rng, 4, 4);
        RatMatrix a = random_unimodular(rng);
        CHECK(mat_eq(eval_poly(p + q, a), mat_add(eval_poly(p, a), eval_poly(q, a))));
        CHECK(mat_eq(eval_poly(p * q, a), mat_mul(eval_poly(p, a), eval_poly(q, a))));
    }
}

TEST_CASE("text form round-trips exactly") {
    LaurentPoly p = parse_poly("t^-2+3*t-1");
    CHECK(p.coeff(-2) == 1);
    CHECK(p.coeff(0) == -1);
    CHECK(p.coeff(1) == 3);
    CHECK(parse_poly(to_string(p)) == p);

    CHECK(to_string(parse_poly("t^2-3*t+1")) == "t^2-3*t+1");
    CHECK(to_string(LaurentPoly()) == "0");
    CHECK(parse_poly("0").is_zero());
    CHECK(parse_poly("  - 2 + t ") == parse_poly("t-2"));
    CHECK(parse_poly("x^4-3*x^2+1") == parse_poly("t^4-3*t^2+1"));

    SplitMix64 rng(23);
    for (int it = 0; it < 300; ++it) {
        LaurentPoly q = random_poly(rng);
        CHECK(parse_poly(to_string(q)) == q);
    }
}

TEST_CASE("parse errors carry a position") {
    CHECK_THROWS_AS(parse_poly(""), PolyParseError);
    CHECK_THROWS_AS(parse_poly("t^"), PolyParseError);
    CHECK_THROWS_AS(parse_poly("3 t + * 2"), PolyParseError);
    CHECK_THROWS_AS(parse_poly("x+t"), PolyParseError);
    try {
        parse_poly("t^2 $ 1");
        CHECK(false);
    } catch (const PolyParseError& e) {
        CHECK(e.position() > 0);
    }
}
