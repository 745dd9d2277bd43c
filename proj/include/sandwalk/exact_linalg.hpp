#pragma once

// Exact rational linear algebra on Eigen dense storage.
//
// Boost 1.74's multiprecision/Eigen interop hard-errors when Eigen's
// expression templates probe convertibility of 2D matrix types into
// number backends (their const_iterator is void).  All exact matrix
// arithmetic therefore goes through element-wise free functions;
// Eigen's own expressions and decompositions are used only for
// double / complex<double> scalars.

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/eigen.hpp>

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <stdexcept>

#include "sandwalk/numeric.hpp"

namespace sandwalk {

using RatMatrix = Eigen::Matrix<Rat, Eigen::Dynamic, Eigen::Dynamic>;
using RatVector = Eigen::Matrix<Rat, Eigen::Dynamic, 1>;
using Index = Eigen::Index;

inline RatMatrix rat_identity(Index n) {
    RatMatrix m(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) m(i, j) = (i == j) ? 1 : 0;
    return m;
}

inline RatMatrix rat_zero(Index r, Index c) {
    RatMatrix m(r, c);
    for (Index i = 0; i < r; ++i)
        for (Index j = 0; j < c; ++j) m(i, j) = 0;
    return m;
}

inline RatVector rat_zero_vector(Index n) {
    RatVector v(n);
    for (Index i = 0; i < n; ++i) v(i) = 0;
    return v;
}

inline RatVector rat_unit_vector(Index n, Index i) {
    RatVector v = rat_zero_vector(n);
    v(i) = 1;
    return v;
}

inline RatMatrix mat_mul(const RatMatrix& a, const RatMatrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("mat_mul: shape mismatch");
    RatMatrix c(a.rows(), b.cols());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < b.cols(); ++j) {
            Rat s = 0;
            for (Index k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
            c(i, j) = s;
        }
    return c;
}

inline RatVector mat_vec(const RatMatrix& a, const RatVector& x) {
    if (a.cols() != x.size()) throw std::invalid_argument("mat_vec: shape mismatch");
    RatVector y(a.rows());
    for (Index i = 0; i < a.rows(); ++i) {
        Rat s = 0;
        for (Index k = 0; k < a.cols(); ++k) s += a(i, k) * x(k);
        y(i) = s;
    }
    return y;
}

inline RatMatrix mat_add(const RatMatrix& a, const RatMatrix& b) {
    RatMatrix c(a.rows(), a.cols());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) + b(i, j);
    return c;
}

inline RatMatrix mat_sub(const RatMatrix& a, const RatMatrix& b) {
    RatMatrix c(a.rows(), a.cols());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) - b(i, j);
    return c;
}

inline RatMatrix mat_scale(const Rat& s, const RatMatrix& a) {
    RatMatrix c(a.rows(), a.cols());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j) c(i, j) = s * a(i, j);
    return c;
}

inline RatVector vec_add(const RatVector& a, const RatVector& b) {
    RatVector c(a.size());
    for (Index i = 0; i < a.size(); ++i) c(i) = a(i) + b(i);
    return c;
}

inline RatVector vec_sub(const RatVector& a, const RatVector& b) {
    RatVector c(a.size());
    for (Index i = 0; i < a.size(); ++i) c(i) = a(i) - b(i);
    return c;
}

inline RatVector vec_scale(const Rat& s, const RatVector& a) {
    RatVector c(a.size());
    for (Index i = 0; i < a.size(); ++i) c(i) = s * a(i);
    return c;
}

inline bool mat_eq(const RatMatrix& a, const RatMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j)
            if (a(i, j) != b(i, j)) return false;
    return true;
}

inline bool vec_eq(const RatVector& a, const RatVector& b) {
    if (a.size() != b.size()) return false;
    for (Index i = 0; i < a.size(); ++i)
        if (a(i) != b(i)) return false;
    return true;
}

inline bool mat_is_zero(const RatMatrix& a) {
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j)
            if (a(i, j) != 0) return false;
    return true;
}

inline bool vec_is_zero(const RatVector& a) {
    for (Index i = 0; i < a.size(); ++i)
        if (a(i) != 0) return false;
    return true;
}

// Max absolute row sum.
inline Rat inf_norm(const RatMatrix& a) {
    Rat best = 0;
    for (Index i = 0; i < a.rows(); ++i) {
        Rat s = 0;
        for (Index j = 0; j < a.cols(); ++j) s += rat_abs(a(i, j));
        if (s > best) best = s;
    }
    return best;
}

inline Rat inf_norm(const RatVector& a) {
    Rat best = 0;
    for (Index i = 0; i < a.size(); ++i) {
        Rat v = rat_abs(a(i));
        if (v > best) best = v;
    }
    return best;
}

// Gauss-Jordan; returns nullopt when singular.
inline std::optional<RatMatrix> mat_inverse(const RatMatrix& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("mat_inverse: not square");
    const Index n = a.rows();
    RatMatrix w = a;
    RatMatrix inv = rat_identity(n);
    for (Index col = 0; col < n; ++col) {
        Index piv = -1;
        for (Index r = col; r < n; ++r)
            if (w(r, col) != 0) { piv = r; break; }
        if (piv < 0) return std::nullopt;
        if (piv != col) {
            for (Index j = 0; j < n; ++j) {
                std::swap(w(piv, j), w(col, j));
                std::swap(inv(piv, j), inv(col, j));
            }
        }
        Rat d = w(col, col);
        for (Index j = 0; j < n; ++j) {
            w(col, j) /= d;
            inv(col, j) /= d;
        }
        for (Index r = 0; r < n; ++r) {
            if (r == col || w(r, col) == 0) continue;
            Rat f = w(r, col);
            for (Index j = 0; j < n; ++j) {
                w(r, j) -= f * w(col, j);
                inv(r, j) -= f * inv(col, j);
            }
        }
    }
    return inv;
}

inline Rat mat_det(const RatMatrix& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("mat_det: not square");
    const Index n = a.rows();
    RatMatrix w = a;
    Rat det = 1;
    for (Index col = 0; col < n; ++col) {
        Index piv = -1;
        for (Index r = col; r < n; ++r)
            if (w(r, col) != 0) { piv = r; break; }
        if (piv < 0) return 0;
        if (piv != col) {
            for (Index j = 0; j < n; ++j) std::swap(w(piv, j), w(col, j));
            det = -det;
        }
        det *= w(col, col);
        for (Index r = col + 1; r < n; ++r) {
            if (w(r, col) == 0) continue;
            Rat f = w(r, col) / w(col, col);
            for (Index j = col; j < n; ++j) w(r, j) -= f * w(col, j);
        }
    }
    return det;
}

inline Rat mat_trace(const RatMatrix& a) {
    Rat t = 0;
    for (Index i = 0; i < a.rows(); ++i) t += a(i, i);
    return t;
}

// a^k for any integer k; negative powers require invertibility.
inline RatMatrix mat_pow(const RatMatrix& a, long long k) {
    if (a.rows() != a.cols()) throw std::invalid_argument("mat_pow: not square");
    RatMatrix base = a;
    if (k < 0) {
        auto inv = mat_inverse(a);
        if (!inv) throw std::domain_error("mat_pow: singular matrix with negative exponent");
        base = *inv;
        k = -k;
    }
    RatMatrix result = rat_identity(a.rows());
    while (k > 0) {
        if (k & 1) result = mat_mul(result, base);
        base = mat_mul(base, base);
        k >>= 1;
    }
    return result;
}

// Exact solve of A x = b; nullopt when A is singular.
inline std::optional<RatVector> mat_solve(const RatMatrix& a, const RatVector& b) {
    if (a.rows() != a.cols() || a.rows() != b.size())
        throw std::invalid_argument("mat_solve: shape mismatch");
    const Index n = a.rows();
    RatMatrix w = a;
    RatVector x = b;
    for (Index col = 0; col < n; ++col) {
        Index piv = -1;
        for (Index r = col; r < n; ++r)
            if (w(r, col) != 0) { piv = r; break; }
        if (piv < 0) return std::nullopt;
        if (piv != col) {
            for (Index j = 0; j < n; ++j) std::swap(w(piv, j), w(col, j));
            std::swap(x(piv), x(col));
        }
        Rat d = w(col, col);
        for (Index j = col; j < n; ++j) w(col, j) /= d;
        x(col) /= d;
        for (Index r = 0; r < n; ++r) {
            if (r == col || w(r, col) == 0) continue;
            Rat f = w(r, col);
            for (Index j = col; j < n; ++j) w(r, j) -= f * w(col, j);
            x(r) -= f * x(col);
        }
    }
    return x;
}

inline Eigen::MatrixXd to_double_matrix(const RatMatrix& a) {
    Eigen::MatrixXd m(a.rows(), a.cols());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j) m(i, j) = to_double(a(i, j));
    return m;
}

inline Eigen::VectorXd to_double_vector(const RatVector& a) {
    Eigen::VectorXd v(a.size());
    for (Index i = 0; i < a.size(); ++i) v(i) = to_double(a(i));
    return v;
}

inline Eigen::MatrixXcd to_complex_matrix(const RatMatrix& a) {
    return to_double_matrix(a).cast<std::complex<double>>();
}

inline Eigen::VectorXcd to_complex_vector(const RatVector& a) {
    return to_double_vector(a).cast<std::complex<double>>();
}

// Euclidean norm with overflow-safe scaling.
inline double euclidean_norm(const RatVector& a) {
    double m = 0;
    for (Index i = 0; i < a.size(); ++i) m = std::max(m, std::abs(to_double(a(i))));
    if (m == 0) return 0;
    double s = 0;
    for (Index i = 0; i < a.size(); ++i) {
        double e = to_double(a(i)) / m;
        s += e * e;
    }
    return m * std::sqrt(s);
}

}  // namespace sandwalk
