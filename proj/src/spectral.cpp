#include "sandwalk/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>

namespace sandwalk {

LaurentPoly char_poly(const RatMatrix& phi) {
    if (phi.rows() != phi.cols()) throw std::invalid_argument("char_poly: not square");
    const Index n = phi.rows();
    // Faddeev-LeVerrier: c_{n-k} = -tr(phi M_{k-1} + c_{n-k+1} phi ...) / k.
    std::vector<Rat> c(static_cast<std::size_t>(n) + 1);
    c[static_cast<std::size_t>(n)] = 1;
    RatMatrix m = phi;
    c[static_cast<std::size_t>(n - 1)] = -mat_trace(m);
    for (Index k = 2; k <= n; ++k) {
        RatMatrix shifted = m;
        const Rat& ck = c[static_cast<std::size_t>(n - k + 1)];
        for (Index i = 0; i < n; ++i) shifted(i, i) += ck;
        m = mat_mul(phi, shifted);
        c[static_cast<std::size_t>(n - k)] = -mat_trace(m) / Rat(k);
    }
    std::vector<Int> coeffs;
    coeffs.reserve(c.size());
    for (const Rat& x : c) {
        if (!is_integer(x))
            throw std::domain_error("char_poly: non-integer characteristic coefficients");
        coeffs.push_back(numerator(x));
    }
    return LaurentPoly::from_span(0, std::move(coeffs));
}

namespace {

// Dense ascending rational coefficients of an ordinary polynomial.
std::vector<Rat> to_dense_q(const LaurentPoly& p) {
    std::vector<Rat> out;
    if (p.is_zero()) return out;
    if (p.min_degree() < 0)
        throw std::invalid_argument("expected an ordinary (non-Laurent) polynomial");
    out.assign(static_cast<std::size_t>(p.max_degree()) + 1, Rat(0));
    p.for_each_term([&](long long d, const Int& c) { out[static_cast<std::size_t>(d)] = Rat(c); });
    return out;
}

void strip(std::vector<Rat>& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

std::vector<Rat> poly_mod_q(std::vector<Rat> a, const std::vector<Rat>& b) {
    while (a.size() >= b.size() && !a.empty()) {
        Rat f = a.back() / b.back();
        std::size_t off = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i) a[off + i] -= f * b[i];
        a.pop_back();
        strip(a);
    }
    return a;
}

std::vector<Rat> poly_gcd_q(std::vector<Rat> a, std::vector<Rat> b) {
    strip(a);
    strip(b);
    while (!b.empty()) {
        auto r = poly_mod_q(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

std::vector<Rat> derivative_q(const std::vector<Rat>& p) {
    std::vector<Rat> d;
    for (std::size_t i = 1; i < p.size(); ++i) d.push_back(Rat(i) * p[i]);
    strip(d);
    return d;
}

bool is_monic_integer(const LaurentPoly& p) {
    if (p.is_zero() || p.min_degree() < 0) return false;
    return p.coeff(p.max_degree()) == 1;
}

}  // namespace

bool poly_squarefree(const LaurentPoly& p) {
    auto a = to_dense_q(p);
    if (a.size() <= 2) return !a.empty();  // constants and linear are squarefree
    auto g = poly_gcd_q(a, derivative_q(a));
    return g.size() <= 1;
}

bool poly_coprime(const LaurentPoly& p, const LaurentPoly& q) {
    auto g = poly_gcd_q(to_dense_q(p), to_dense_q(q));
    return g.size() <= 1;
}

std::vector<std::complex<double>> poly_roots(const LaurentPoly& p) {
    if (p.is_zero()) throw std::invalid_argument("poly_roots: zero polynomial");
    auto c = to_dense_q(p);
    const std::size_t deg = c.size() - 1;
    if (deg == 0) return {};
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(static_cast<Index>(deg), static_cast<Index>(deg));
    for (std::size_t i = 0; i + 1 < deg; ++i) comp(static_cast<Index>(i + 1), static_cast<Index>(i)) = 1.0;
    for (std::size_t i = 0; i < deg; ++i)
        comp(static_cast<Index>(i), static_cast<Index>(deg - 1)) =
            -to_double(c[i] / c[deg]);
    Eigen::EigenSolver<Eigen::MatrixXd> es(comp);
    std::vector<std::complex<double>> roots(deg);
    for (std::size_t i = 0; i < deg; ++i) roots[i] = es.eigenvalues()(static_cast<Index>(i));
    std::sort(roots.begin(), roots.end(), [](auto x, auto y) {
        return std::abs(x) != std::abs(y) ? std::abs(x) > std::abs(y) : x.real() > y.real();
    });
    return roots;
}

std::optional<LaurentPoly> find_edp_multiple(const LaurentPoly& p, int max_degree, int max_coeff) {
    if (p.is_zero()) return std::nullopt;
    const long long base = 2ll * max_coeff + 1;
    for (int deg = 0; deg <= max_degree; ++deg) {
        long long combos = 1;
        for (int i = 0; i < deg; ++i) combos *= base;
        for (int lead = 1; lead <= max_coeff; ++lead) {
            for (long long idx = 0; idx < combos; ++idx) {
                std::vector<Int> coeffs(static_cast<std::size_t>(deg) + 1);
                long long rest = idx;
                for (int i = 0; i < deg; ++i) {
                    coeffs[static_cast<std::size_t>(i)] = rest % base - max_coeff;
                    rest /= base;
                }
                coeffs[static_cast<std::size_t>(deg)] = lead;
                LaurentPoly u = LaurentPoly::from_span(0, std::move(coeffs));
                if (edp_check(u * p).holds) return u;
            }
        }
    }
    return std::nullopt;
}

SplitVerification verify_split(const LaurentPoly& p_char, const LaurentPoly& p_plus,
                               const LaurentPoly& p_zero, double modulus_tol,
                               double residual_tol,
                               const std::optional<LaurentPoly>& edp_multiplier) {
    SplitVerification v;
    auto fail = [&](const std::string& msg) { v.failures.push_back(msg); };

    if (!is_monic_integer(p_plus)) fail("p_plus is not a monic ordinary integer polynomial");
    if (!is_monic_integer(p_zero)) fail("p_zero is not a monic ordinary integer polynomial");
    if (!v.failures.empty()) return v;

    if (!(p_plus * p_zero == p_char))
        fail("product check: p_plus * p_zero != p_char");

    if (!poly_squarefree(p_plus)) fail("p_plus has repeated roots");
    if (!poly_squarefree(p_zero)) fail("p_zero has repeated roots");
    if (!poly_coprime(p_plus, p_zero)) fail("p_plus and p_zero share a root");

    auto plus_roots = poly_roots(p_plus);
    auto zero_roots = poly_roots(p_zero);
    for (auto z : plus_roots)
        if (std::abs(std::abs(z) - 1.0) <= modulus_tol) {
            fail("p_plus has a root on the unit circle");
            break;
        }
    for (auto z : zero_roots)
        if (std::abs(std::abs(z) - 1.0) > modulus_tol) {
            fail("p_zero has a root off the unit circle");
            break;
        }

    LaurentPoly witness;
    if (edp_check(p_plus).holds) {
        witness = p_plus;
    } else if (edp_multiplier) {
        LaurentPoly candidate = *edp_multiplier * p_plus;
        if (!candidate.is_zero() && edp_check(candidate).holds) witness = candidate;
        else fail("supplied multiplier does not make p_plus dissipative");
    } else if (auto u = find_edp_multiple(p_plus)) {
        witness = *u * p_plus;
    } else {
        fail("no dissipative multiple of p_plus found");
    }

    if (!v.failures.empty()) return v;

    SpectralSplit split;
    split.p_char = p_char;
    split.p_plus = p_plus;
    split.p_zero = p_zero;
    split.plus_roots = std::move(plus_roots);
    split.zero_roots = std::move(zero_roots);
    split.edp_witness = std::move(witness);
    split.modulus_tol = modulus_tol;
    split.residual_tol = residual_tol;
    v.split = std::move(split);
    return v;
}

SpectralSplit projections(const RatMatrix& phi, SpectralSplit split) {
    const Index n = phi.rows();
    using Cplx = std::complex<double>;

    long long plus_deg = split.p_plus.is_zero() ? 0 : split.p_plus.max_degree();
    long long zero_deg = split.p_zero.is_zero() ? 0 : split.p_zero.max_degree();
    if (plus_deg + zero_deg != n)
        throw std::domain_error("projections: split degrees do not sum to the rank");

    if (zero_deg == 0) {
        split.pi_plus = Eigen::MatrixXcd::Identity(n, n);
        split.pi_zero = Eigen::MatrixXcd::Zero(n, n);
        split.has_projections = true;
        return split;
    }
    if (plus_deg == 0) {
        split.pi_plus = Eigen::MatrixXcd::Zero(n, n);
        split.pi_zero = Eigen::MatrixXcd::Identity(n, n);
        split.has_projections = true;
        return split;
    }

    Eigen::EigenSolver<Eigen::MatrixXd> es(to_double_matrix(phi));
    if (es.info() != Eigen::Success)
        throw std::runtime_error("projections: eigensolver failed");
    Eigen::MatrixXcd v = es.eigenvectors();
    Eigen::VectorXcd lambda = es.eigenvalues();

    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(v);
    double cond = svd.singularValues()(0) / svd.singularValues()(n - 1);
    if (!(cond < 1e8))
        throw std::domain_error("projections: eigenvector basis is near-defective");

    Eigen::MatrixXcd sel = Eigen::MatrixXcd::Zero(n, n);
    split.phi_eigenvalues.resize(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) {
        Cplx z = lambda(i);
        split.phi_eigenvalues[static_cast<std::size_t>(i)] = z;
        double on_plus = std::abs(eval_poly(split.p_plus, z));
        double on_zero = std::abs(eval_poly(split.p_zero, z));
        bool expanding = on_plus < on_zero;
        if (expanding != (std::abs(std::abs(z) - 1.0) > split.modulus_tol))
            throw std::domain_error("projections: eigenvalue classification inconsistent");
        if (expanding) sel(i, i) = 1.0;
    }

    Eigen::MatrixXcd vinv = v.inverse();
    split.pi_plus = v * sel * vinv;
    split.pi_zero = v * (Eigen::MatrixXcd::Identity(n, n) - sel) * vinv;

    double r1 = (split.pi_plus + split.pi_zero - Eigen::MatrixXcd::Identity(n, n))
                    .cwiseAbs()
                    .maxCoeff();
    double r2 = (split.pi_plus * split.pi_plus - split.pi_plus).cwiseAbs().maxCoeff();
    double r3 = (split.pi_zero * split.pi_zero - split.pi_zero).cwiseAbs().maxCoeff();
    if (r1 > split.residual_tol || r2 > split.residual_tol || r3 > split.residual_tol)
        throw std::domain_error("projections: projection residuals exceed tolerance");

    split.has_projections = true;
    return split;
}

double d_plus(const SpectralSplit& split, const Eigen::VectorXcd& v) {
    if (!split.has_projections) throw std::logic_error("d_plus: projections not computed");
    return ((Eigen::MatrixXcd::Identity(split.pi_plus.rows(), split.pi_plus.cols()) -
             split.pi_plus) *
            v)
        .norm();
}

double d_zero(const SpectralSplit& split, const Eigen::VectorXcd& v) {
    if (!split.has_projections) throw std::logic_error("d_zero: projections not computed");
    return ((Eigen::MatrixXcd::Identity(split.pi_zero.rows(), split.pi_zero.cols()) -
             split.pi_zero) *
            v)
        .norm();
}

double d_plus(const SpectralSplit& split, const RatVector& v) {
    return d_plus(split, Eigen::VectorXcd(to_complex_vector(v)));
}

double d_zero(const SpectralSplit& split, const RatVector& v) {
    return d_zero(split, Eigen::VectorXcd(to_complex_vector(v)));
}

double annihilation_check(const RatMatrix& phi, const LaurentPoly& p,
                          const Eigen::MatrixXcd& pi) {
    RatMatrix exact = eval_poly(p, phi);
    Eigen::MatrixXcd prod = to_complex_matrix(exact) * pi;
    return prod.cwiseAbs().maxCoeff();
}

std::optional<int> divides_t_pow_minus_one(const LaurentPoly& p, int max_exponent) {
    if (p.is_zero() || p.min_degree() < 0 || !is_monic_integer(p)) return std::nullopt;
    if (p.max_degree() == 0) return 1;  // constant 1 divides everything
    auto mod = to_dense_q(p);
    // Iterate t^L mod p.
    std::vector<Rat> pw{Rat(0), Rat(1)};  // t
    if (pw.size() >= mod.size()) pw = poly_mod_q(pw, mod);
    std::vector<Rat> cur = pw;
    for (int ell = 1; ell <= max_exponent; ++ell) {
        if (ell > 1) {
            // cur *= t, then reduce
            cur.insert(cur.begin(), Rat(0));
            cur = poly_mod_q(std::move(cur), mod);
        }
        // cur == 1?
        if (cur.size() == 1 && cur[0] == 1) return ell;
    }
    return std::nullopt;
}

}  // namespace sandwalk
