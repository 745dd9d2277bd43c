#include "sandwalk/toppling.hpp"

#include <algorithm>
#include <vector>

namespace sandwalk {

Int reducer_height_cap(const EdpReport& edp) {
    Int y0_abs = int_abs(edp.y0);
    if (edp.contraction >= 1)
        throw std::domain_error("reducer_height_cap: reducer is not dissipative");
    // ceil(|y0| / (1 - delta*r)) + |y0|
    Rat bound = Rat(y0_abs) / (Rat(1) - edp.contraction);
    Int num = numerator(bound), den = denominator(bound);
    Int ceil_part = num / den + ((num % den != 0) ? 1 : 0);
    return ceil_part + y0_abs;
}

ToppleStep topple_once(const LaurentPoly& p, const LaurentPoly& y, long long j) {
    EdpReport edp = edp_check(y);
    if (!edp.holds) throw std::domain_error("topple_once: reducer fails the dissipativity check");
    const Int& pj = p.coeff(j);
    if (int_abs(pj) < int_abs(edp.y0))
        throw std::domain_error("topple_once: coefficient below toppling threshold");
    Int q = round_div_half_toward_zero(pj, edp.y0);
    LaurentPoly inc = LaurentPoly::monomial(q, j - edp.i0);
    return ToppleStep{p - inc * y, inc};
}

namespace {

// Dense working buffer over a degree window that grows as mass spreads.
struct Sandpile {
    long long lo = 0;        // degree of cells[0]
    std::vector<Int> cells;

    void init(const LaurentPoly& p) {
        if (p.is_zero()) return;
        lo = p.min_degree();
        cells.assign(p.span().begin(), p.span().end());
    }
    Int& at(long long degree) {
        if (cells.empty()) {
            lo = degree;
            cells.resize(1);
            return cells[0];
        }
        while (degree < lo) {
            cells.insert(cells.begin(), Int(0));
            --lo;
        }
        while (degree >= lo + static_cast<long long>(cells.size()))
            cells.emplace_back(0);
        return cells[static_cast<std::size_t>(degree - lo)];
    }
    LaurentPoly to_poly() const {
        return LaurentPoly::from_span(lo, cells);
    }
};

std::uint64_t topple_cap(const LaurentPoly& p) {
    if (p.is_zero()) return 64;
    long long d = p.diameter();
    long long lg = floor_log2(p.height() + 2) + 2;
    return 64ull * static_cast<std::uint64_t>(d + 2) *
           static_cast<std::uint64_t>(lg) * static_cast<std::uint64_t>(lg);
}

ToppleReport run_reduction(const LaurentPoly& p, const LaurentPoly& y) {
    EdpReport edp = edp_check(y);
    if (!edp.holds)
        throw std::domain_error("reduce: reducer fails the dissipativity check: " +
                                to_string(y));
    ToppleReport report;
    report.input = p;
    report.reducer = y;
    report.height_cap = reducer_height_cap(edp);

    const Int y0_abs = int_abs(edp.y0);
    const std::uint64_t cap = topple_cap(p);

    Sandpile pile;
    pile.init(p);
    LaurentPoly cofactor;

    // Pass bookkeeping: a new pass starts when a site topples a second time.
    std::uint64_t pass = 0;
    std::vector<std::uint64_t> last_pass;  // aligned with a window around pile
    long long last_pass_lo = 0;
    auto pass_mark = [&](long long degree) -> std::uint64_t& {
        if (last_pass.empty()) {
            last_pass_lo = degree;
            last_pass.resize(1, 0);
        }
        while (degree < last_pass_lo) {
            last_pass.insert(last_pass.begin(), 0);
            --last_pass_lo;
        }
        while (degree >= last_pass_lo + static_cast<long long>(last_pass.size()))
            last_pass.push_back(0);
        return last_pass[static_cast<std::size_t>(degree - last_pass_lo)];
    };

    while (true) {
        // Largest-magnitude site at threshold, smallest degree on ties.
        long long site = 0;
        Int best = -1;
        for (std::size_t i = 0; i < pile.cells.size(); ++i) {
            Int a = int_abs(pile.cells[i]);
            if (a >= y0_abs && a > best) {
                best = a;
                site = pile.lo + static_cast<long long>(i);
            }
        }
        if (best < 0) break;

        if (report.topples >= cap)
            throw std::runtime_error("reduce: toppling cap exceeded (internal error)");

        std::uint64_t& mark = pass_mark(site);
        if (mark == pass + 1) ++pass;
        mark = pass + 1;

        Int q = round_div_half_toward_zero(pile.cells[static_cast<std::size_t>(site - pile.lo)], edp.y0);
        y.for_each_term([&](long long deg, const Int& c) {
            pile.at(site - edp.i0 + deg) -= q * c;
        });
        cofactor = cofactor + LaurentPoly::monomial(q, site - edp.i0);
        ++report.topples;
    }

    report.output = pile.to_poly();
    report.cofactor = cofactor;
    report.passes = (report.topples > 0) ? pass + 1 : 0;
    report.final_height = report.output.height();
    report.final_diameter = report.output.is_zero() ? 0 : report.output.diameter();
    return report;
}

}  // namespace

ToppleReport reduce_constant(const Int& k, const LaurentPoly& y) {
    return run_reduction(LaurentPoly::constant(k), y);
}

ToppleReport reduce_poly(const LaurentPoly& p, const LaurentPoly& y) {
    return run_reduction(p, y);
}

bool verify_membership(const ToppleReport& report) {
    return report.input - report.output == report.cofactor * report.reducer;
}

}  // namespace sandwalk
