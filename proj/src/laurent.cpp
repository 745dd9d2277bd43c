#include "sandwalk/laurent.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace sandwalk {

namespace {
const Int kZero = 0;
}

void LaurentPoly::trim() {
    std::size_t lead = 0;
    while (lead < coeffs_.size() && coeffs_[lead] == 0) ++lead;
    if (lead == coeffs_.size()) {
        coeffs_.clear();
        min_deg_ = 0;
        return;
    }
    std::size_t tail = coeffs_.size();
    while (tail > lead && coeffs_[tail - 1] == 0) --tail;
    if (lead > 0) {
        coeffs_.erase(coeffs_.begin(), coeffs_.begin() + static_cast<long>(lead));
        min_deg_ += static_cast<long long>(lead);
    }
    coeffs_.resize(tail - lead);
}

LaurentPoly LaurentPoly::constant(Int c) { return monomial(std::move(c), 0); }

LaurentPoly LaurentPoly::monomial(Int c, long long degree) {
    LaurentPoly p;
    if (c != 0) {
        p.min_deg_ = degree;
        p.coeffs_.push_back(std::move(c));
    }
    return p;
}

LaurentPoly LaurentPoly::from_span(long long min_degree, std::vector<Int> coeffs) {
    LaurentPoly p;
    p.min_deg_ = min_degree;
    p.coeffs_ = std::move(coeffs);
    p.trim();
    return p;
}

long long LaurentPoly::min_degree() const {
    if (is_zero()) throw std::domain_error("span undefined for the zero polynomial");
    return min_deg_;
}

long long LaurentPoly::max_degree() const {
    if (is_zero()) throw std::domain_error("span undefined for the zero polynomial");
    return min_deg_ + static_cast<long long>(coeffs_.size()) - 1;
}

const Int& LaurentPoly::coeff(long long k) const {
    if (is_zero() || k < min_deg_ ||
        k >= min_deg_ + static_cast<long long>(coeffs_.size()))
        return kZero;
    return coeffs_[static_cast<std::size_t>(k - min_deg_)];
}

long long LaurentPoly::term_count() const {
    long long n = 0;
    for (const Int& c : coeffs_)
        if (c != 0) ++n;
    return n;
}

Int LaurentPoly::length() const {
    Int s = 0;
    for (const Int& c : coeffs_) s += int_abs(c);
    return s;
}

Int LaurentPoly::height() const {
    Int best = 0;
    for (const Int& c : coeffs_) {
        Int a = int_abs(c);
        if (a > best) best = a;
    }
    return best;
}

void LaurentPoly::for_each_term(
    const std::function<void(long long, const Int&)>& fn) const {
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        if (coeffs_[i] != 0) fn(min_deg_ + static_cast<long long>(i), coeffs_[i]);
}

LaurentPoly LaurentPoly::operator-() const {
    LaurentPoly p = *this;
    for (Int& c : p.coeffs_) c = -c;
    return p;
}

LaurentPoly operator+(const LaurentPoly& p, const LaurentPoly& q) {
    if (p.is_zero()) return q;
    if (q.is_zero()) return p;
    long long lo = std::min(p.min_deg_, q.min_deg_);
    long long hi = std::max(p.min_deg_ + static_cast<long long>(p.coeffs_.size()),
                            q.min_deg_ + static_cast<long long>(q.coeffs_.size()));
    std::vector<Int> out(static_cast<std::size_t>(hi - lo));
    for (std::size_t i = 0; i < p.coeffs_.size(); ++i)
        out[static_cast<std::size_t>(p.min_deg_ - lo) + i] += p.coeffs_[i];
    for (std::size_t i = 0; i < q.coeffs_.size(); ++i)
        out[static_cast<std::size_t>(q.min_deg_ - lo) + i] += q.coeffs_[i];
    return LaurentPoly::from_span(lo, std::move(out));
}

LaurentPoly operator-(const LaurentPoly& p, const LaurentPoly& q) { return p + (-q); }

LaurentPoly operator*(const LaurentPoly& p, const LaurentPoly& q) {
    if (p.is_zero() || q.is_zero()) return LaurentPoly();
    std::vector<Int> out(p.coeffs_.size() + q.coeffs_.size() - 1);
    for (std::size_t i = 0; i < p.coeffs_.size(); ++i) {
        if (p.coeffs_[i] == 0) continue;
        for (std::size_t j = 0; j < q.coeffs_.size(); ++j)
            out[i + j] += p.coeffs_[i] * q.coeffs_[j];
    }
    return LaurentPoly::from_span(p.min_deg_ + q.min_deg_, std::move(out));
}

bool operator==(const LaurentPoly& p, const LaurentPoly& q) {
    return p.min_deg_ == q.min_deg_ && p.coeffs_ == q.coeffs_;
}

LaurentPoly shifted(const LaurentPoly& p, long long k) {
    if (p.is_zero()) return p;
    return LaurentPoly::from_span(p.min_degree() + k,
                                  std::vector<Int>(p.span().begin(), p.span().end()));
}

LaurentPoly scaled(const LaurentPoly& p, const Int& c) {
    if (c == 0 || p.is_zero()) return LaurentPoly();
    std::vector<Int> out(p.span());
    for (Int& x : out) x *= c;
    return LaurentPoly::from_span(p.span_offset(), std::move(out));
}

NormStats norm_stats(const LaurentPoly& p) {
    NormStats s;
    s.length_p = p.length();
    s.height = p.height();
    if (!p.is_zero()) {
        s.span_defined = true;
        s.min_deg = p.min_degree();
        s.max_deg = p.max_degree();
        s.diameter = p.diameter();
    }
    return s;
}

EdpReport edp_check(const LaurentPoly& y) {
    if (y.is_zero()) throw std::domain_error("edp_check: zero polynomial");
    EdpReport rep;
    // Max-magnitude coefficient, smallest degree wins ties.
    Int best = -1;
    y.for_each_term([&](long long deg, const Int& c) {
        Int a = int_abs(c);
        if (a > best) {
            best = a;
            rep.y0 = c;
            rep.i0 = deg;
        }
    });
    Int max2 = 0;  // second-largest magnitude, counted with multiplicity
    y.for_each_term([&](long long deg, const Int& c) {
        if (deg == rep.i0) return;
        Int a = int_abs(c);
        if (a > max2) max2 = a;
    });
    rep.delta = y.length() - int_abs(rep.y0);
    rep.r = Rat(max2, int_abs(rep.y0));
    rep.contraction = Rat(rep.delta) * rep.r;
    rep.holds = rep.contraction < 1;
    return rep;
}

RatMatrix eval_poly(const LaurentPoly& p, const RatMatrix& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("eval_poly: matrix not square");
    const Index n = a.rows();
    RatMatrix result = rat_zero(n, n);
    if (p.is_zero()) return result;
    const long long lo = p.min_degree();
    const long long hi = p.max_degree();
    if (hi >= 0) {
        // Horner over degrees hi..0.
        for (long long d = hi; d >= 0; --d) {
            if (d != hi) result = mat_mul(a, result);
            const Int& c = p.coeff(d);
            if (c != 0)
                for (Index i = 0; i < n; ++i) result(i, i) += Rat(c);
        }
    }
    if (lo < 0) {
        auto inv = mat_inverse(a);
        if (!inv) throw std::domain_error("eval_poly: singular matrix with negative degrees");
        // Horner in A^{-1} over degrees lo..-1.
        RatMatrix neg = rat_zero(n, n);
        for (long long d = lo; d <= -1; ++d) {
            if (d != lo) neg = mat_mul(*inv, neg);
            const Int& c = p.coeff(d);
            if (c != 0)
                for (Index i = 0; i < n; ++i) neg(i, i) += Rat(c);
        }
        neg = mat_mul(*inv, neg);
        result = mat_add(result, neg);
    }
    return result;
}

RatVector eval_poly_vec(const LaurentPoly& p, const RatMatrix& a, const RatVector& w) {
    const Index n = a.rows();
    RatVector result = rat_zero_vector(n);
    if (p.is_zero()) return result;
    const long long lo = p.min_degree();
    const long long hi = p.max_degree();
    if (hi >= 0) {
        RatVector acc = rat_zero_vector(n);
        for (long long d = hi; d >= 0; --d) {
            if (d != hi) acc = mat_vec(a, acc);
            const Int& c = p.coeff(d);
            if (c != 0) acc = vec_add(acc, vec_scale(Rat(c), w));
        }
        result = acc;
    }
    if (lo < 0) {
        auto inv = mat_inverse(a);
        if (!inv) throw std::domain_error("eval_poly_vec: singular matrix with negative degrees");
        RatVector acc = rat_zero_vector(n);
        for (long long d = lo; d <= -1; ++d) {
            if (d != lo) acc = mat_vec(*inv, acc);
            const Int& c = p.coeff(d);
            if (c != 0) acc = vec_add(acc, vec_scale(Rat(c), w));
        }
        acc = mat_vec(*inv, acc);
        result = vec_add(result, acc);
    }
    return result;
}

std::complex<double> eval_poly(const LaurentPoly& p, std::complex<double> z) {
    std::complex<double> s = 0;
    p.for_each_term([&](long long deg, const Int& c) {
        s += to_double(c) * std::pow(z, static_cast<double>(deg));
    });
    return s;
}

std::string to_string(const LaurentPoly& p, char var) {
    if (p.is_zero()) return "0";
    std::ostringstream out;
    bool first = true;
    for (long long d = p.max_degree(); d >= p.min_degree(); --d) {
        const Int& c = p.coeff(d);
        if (c == 0) continue;
        if (first) {
            if (c < 0) out << '-';
            first = false;
        } else {
            out << (c < 0 ? '-' : '+');
        }
        Int a = int_abs(c);
        if (d == 0) {
            out << a;
        } else {
            if (a != 1) out << a << '*';
            out << var;
            if (d != 1) out << '^' << d;
        }
    }
    return out.str();
}

namespace {

struct PolyParser {
    std::string_view text;
    std::size_t pos = 0;
    char var = 0;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }
    bool done() {
        skip_ws();
        return pos >= text.size();
    }
    char peek() { return text[pos]; }

    [[noreturn]] void fail(const std::string& msg) { throw PolyParseError(msg + " at position " + std::to_string(pos), pos); }

    Int parse_uint() {
        skip_ws();
        if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos])))
            fail("expected digits");
        std::size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        return Int(std::string(text.substr(start, pos - start)));
    }

    long long parse_exponent() {
        skip_ws();
        bool neg = false;
        if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) {
            neg = text[pos] == '-';
            ++pos;
        }
        Int v = parse_uint();
        if (v > 1'000'000) fail("exponent too large");
        long long e = v.convert_to<long long>();
        return neg ? -e : e;
    }

    // term := [coeff] [* ] [var [^ exp]]
    void parse_term(int term_sign, std::vector<std::pair<long long, Int>>& terms) {
        skip_ws();
        Int coeff = 1;
        bool have_coeff = false;
        if (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            coeff = parse_uint();
            have_coeff = true;
        }
        skip_ws();
        if (pos < text.size() && text[pos] == '*') {
            if (!have_coeff) fail("unexpected '*'");
            ++pos;
            skip_ws();
        }
        long long degree = 0;
        if (pos < text.size() && std::isalpha(static_cast<unsigned char>(text[pos]))) {
            char v = text[pos];
            if (var == 0) var = v;
            if (v != var) fail(std::string("inconsistent variable '") + v + "'");
            ++pos;
            degree = 1;
            skip_ws();
            if (pos < text.size() && text[pos] == '^') {
                ++pos;
                degree = parse_exponent();
            }
        } else if (!have_coeff) {
            fail("expected coefficient or variable");
        }
        terms.emplace_back(degree, term_sign < 0 ? Int(-coeff) : coeff);
    }

    LaurentPoly parse() {
        std::vector<std::pair<long long, Int>> terms;
        bool first = true;
        while (!done()) {
            int s = 1;
            skip_ws();
            if (peek() == '+' || peek() == '-') {
                s = (peek() == '-') ? -1 : 1;
                ++pos;
            } else if (!first) {
                fail("expected '+' or '-'");
            }
            parse_term(s, terms);
            first = false;
        }
        if (first) fail("empty polynomial");
        LaurentPoly p;
        for (auto& [deg, c] : terms) p = p + LaurentPoly::monomial(c, deg);
        return p;
    }
};

}  // namespace

LaurentPoly parse_poly(std::string_view text) {
    PolyParser parser{text};
    return parser.parse();
}

}  // namespace sandwalk
