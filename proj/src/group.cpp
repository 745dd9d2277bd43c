#include "sandwalk/group.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "sandwalk/toppling.hpp"

namespace sandwalk {

namespace {

bool divides_modulus_power(const Int& den, const Int& modulus) {
    Int d = den;
    if (d == 1) return true;
    if (modulus <= 1) return false;
    while (d != 1) {
        Int g = gcd(d, modulus);
        if (g == 1) return false;
        while (d % g == 0) d /= g;
    }
    return true;
}

void check_denominators(const RatMatrix& m, const Int& modulus, const char* what) {
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j)
            if (!divides_modulus_power(denominator(m(i, j)), modulus))
                throw std::invalid_argument(std::string(what) +
                                            ": denominators must divide modulus powers");
}

}  // namespace

GroupSpec make_group_spec(std::string name, const RatMatrix& phi, Int modulus,
                          std::vector<RatVector> kernel_gens,
                          std::vector<std::string> kernel_labels,
                          std::string p_plus_text, std::string p_zero_text) {
    if (phi.rows() != phi.cols() || phi.rows() < 1)
        throw std::invalid_argument("group spec: phi must be square");
    if (modulus < 1) throw std::invalid_argument("group spec: modulus must be >= 1");
    GroupSpec spec;
    spec.name = std::move(name);
    spec.rank = static_cast<int>(phi.rows());
    spec.modulus = std::move(modulus);
    spec.phi = phi;
    auto inv = mat_inverse(phi);
    if (!inv) throw std::invalid_argument("group spec: phi must be invertible");
    spec.phi_inv = *inv;

    // phi must be an automorphism of the kernel: |det| a unit of Z[1/m].
    Rat det = mat_det(phi);
    Rat det_abs = rat_abs(det);
    bool unit = (det_abs == 1);
    if (!unit && spec.modulus > 1)
        unit = divides_modulus_power(numerator(det_abs), spec.modulus) &&
               divides_modulus_power(denominator(det_abs), spec.modulus);
    if (!unit) throw std::invalid_argument("group spec: det(phi) is not a kernel unit");

    check_denominators(spec.phi, spec.modulus, "group spec phi");
    check_denominators(spec.phi_inv, spec.modulus, "group spec phi^-1");

    if (kernel_gens.empty()) throw std::invalid_argument("group spec: no kernel generators");
    if (kernel_labels.size() != kernel_gens.size())
        throw std::invalid_argument("group spec: label/generator count mismatch");
    for (const auto& w : kernel_gens) {
        if (w.size() != spec.rank) throw std::invalid_argument("group spec: generator rank mismatch");
        if (vec_is_zero(w)) throw std::invalid_argument("group spec: zero kernel generator");
    }
    spec.kernel_gens = std::move(kernel_gens);
    spec.kernel_labels = std::move(kernel_labels);
    spec.p_plus_text = std::move(p_plus_text);
    spec.p_zero_text = std::move(p_zero_text);
    return spec;
}

std::vector<Generator> generators(const GroupSpec& spec) {
    std::vector<Generator> gens;
    for (std::size_t i = 0; i < spec.kernel_gens.size(); ++i) {
        Generator plus{spec.kernel_gens[i], 0, static_cast<int>(i), 1, spec.kernel_labels[i]};
        Generator minus{vec_scale(-1, spec.kernel_gens[i]), 0, static_cast<int>(i), -1,
                        spec.kernel_labels[i] + "^-1"};
        gens.push_back(std::move(plus));
        gens.push_back(std::move(minus));
    }
    RatVector zero = rat_zero_vector(spec.rank);
    gens.push_back(Generator{zero, 1, -1, 1, "z"});
    gens.push_back(Generator{zero, -1, -1, -1, "z^-1"});
    return gens;
}

std::size_t z_generator_index(const GroupSpec& spec, int sign) {
    return 2 * spec.kernel_gens.size() + (sign > 0 ? 0 : 1);
}

GroupElement identity(const GroupSpec& spec) {
    return GroupElement{rat_zero_vector(spec.rank), 0};
}

bool is_identity(const GroupElement& g) { return g.k == 0 && vec_is_zero(g.a); }

bool elements_equal(const GroupElement& g, const GroupElement& h) {
    return g.k == h.k && vec_eq(g.a, h.a);
}

GroupElement multiply(const GroupSpec& spec, const GroupElement& g, const GroupElement& h) {
    RatVector shifted_b = mat_vec(mat_pow(spec.phi, g.k), h.a);
    return GroupElement{vec_add(g.a, shifted_b), g.k + h.k};
}

GroupElement inverse(const GroupSpec& spec, const GroupElement& g) {
    RatVector a = mat_vec(mat_pow(spec.phi, -g.k), g.a);
    return GroupElement{vec_scale(-1, a), -g.k};
}

GroupElement generator_element(const GroupSpec& spec, std::size_t index) {
    auto gens = generators(spec);
    if (index >= gens.size()) throw std::invalid_argument("generator index out of range");
    return GroupElement{gens[index].vec, gens[index].shift};
}

GroupElement evaluate_word(const GroupSpec& spec, const Word& word) {
    return evaluate_word_traced(spec, word).element;
}

TracedElement evaluate_word_traced(const GroupSpec& spec, const Word& word) {
    auto gens = generators(spec);
    GroupElement cur = identity(spec);
    RatMatrix phi_k = rat_identity(spec.rank);
    std::vector<LaurentPoly> polys(spec.kernel_gens.size());
    for (int idx : word) {
        if (idx < 0 || static_cast<std::size_t>(idx) >= gens.size())
            throw std::invalid_argument("word: generator index out of range");
        const Generator& s = gens[static_cast<std::size_t>(idx)];
        if (s.orbit >= 0) {
            cur.a = vec_add(cur.a, mat_vec(phi_k, s.vec));
            polys[static_cast<std::size_t>(s.orbit)] =
                polys[static_cast<std::size_t>(s.orbit)] +
                LaurentPoly::monomial(s.sign, cur.k);
        } else {
            cur.k += s.shift;
            phi_k = mat_mul(phi_k, s.shift > 0 ? spec.phi : spec.phi_inv);
        }
    }
    return TracedElement{std::move(cur), std::move(polys)};
}

std::string element_key(const GroupElement& g) {
    std::ostringstream out;
    out << g.k;
    for (Index i = 0; i < g.a.size(); ++i) out << '|' << g.a(i);
    return out.str();
}

long long project_to_Z(const GroupElement& g) { return g.k; }

std::optional<int> Ball::length_of(const GroupElement& g) const {
    auto it = index.find(element_key(g));
    if (it == index.end()) return std::nullopt;
    return lengths[it->second];
}

Ball ball(const GroupSpec& spec, int radius, int radius_cap, std::size_t max_states) {
    if (radius < 0) throw std::invalid_argument("ball: negative radius");
    if (radius > radius_cap) throw std::invalid_argument("ball: radius exceeds configured cap");
    auto gens = generators(spec);

    // phi^k v tables for every height reachable within the radius.
    const long long offset = radius;
    std::vector<std::vector<RatVector>> shifted_gen(gens.size());
    for (std::size_t gi = 0; gi < gens.size(); ++gi) {
        if (gens[gi].orbit < 0) continue;
        shifted_gen[gi].resize(2 * radius + 1);
        for (long long k = -radius; k <= radius; ++k)
            shifted_gen[gi][static_cast<std::size_t>(k + offset)] =
                mat_vec(mat_pow(spec.phi, k), gens[gi].vec);
    }

    Ball b;
    b.radius = radius;
    b.count_by_length.assign(static_cast<std::size_t>(radius) + 1, 0);
    GroupElement id = identity(spec);
    b.index.emplace(element_key(id), 0);
    b.elements.push_back(id);
    b.lengths.push_back(0);
    b.count_by_length[0] = 1;

    std::size_t frontier_begin = 0, frontier_end = 1;
    for (int r = 1; r <= radius; ++r) {
        for (std::size_t ei = frontier_begin; ei < frontier_end; ++ei) {
            GroupElement g = b.elements[ei];
            for (std::size_t gi = 0; gi < gens.size(); ++gi) {
                GroupElement next;
                if (gens[gi].orbit >= 0) {
                    next.a = vec_add(g.a, shifted_gen[gi][static_cast<std::size_t>(g.k + offset)]);
                    next.k = g.k;
                } else {
                    next.a = g.a;
                    next.k = g.k + gens[gi].shift;
                }
                std::string key = element_key(next);
                if (b.index.contains(key)) continue;
                if (b.elements.size() >= max_states)
                    throw std::runtime_error("ball: state budget exceeded");
                b.index.emplace(std::move(key), b.elements.size());
                b.elements.push_back(std::move(next));
                b.lengths.push_back(r);
                ++b.count_by_length[static_cast<std::size_t>(r)];
            }
        }
        frontier_begin = frontier_end;
        frontier_end = b.elements.size();
    }
    return b;
}

std::vector<Rat> max_kernel_norm_by_radius(const Ball& b) {
    std::vector<Rat> best(static_cast<std::size_t>(b.radius) + 1, Rat(0));
    for (std::size_t i = 0; i < b.elements.size(); ++i) {
        Rat norm = inf_norm(b.elements[i].a);
        auto& slot = best[static_cast<std::size_t>(b.lengths[i])];
        if (norm > slot) slot = norm;
    }
    for (std::size_t r = 1; r < best.size(); ++r)
        if (best[r] < best[r - 1]) best[r] = best[r - 1];
    return best;
}

Rat expansion_factor(const GroupSpec& spec) {
    Rat q = inf_norm(spec.phi);
    Rat qi = inf_norm(spec.phi_inv);
    if (qi > q) q = qi;
    return q < 1 ? Rat(1) : q;
}

long long length_lower_bound(const GroupSpec& spec, const GroupElement& g) {
    long long bound = std::llabs(g.k);
    Rat q = expansion_factor(spec);
    Rat c0 = 0;
    for (const auto& w : spec.kernel_gens) {
        Rat nw = inf_norm(w);
        if (nw > c0) c0 = nw;
    }
    Rat norm = inf_norm(g.a);
    if (q > 1 && c0 > 0 && norm > c0)
        bound = std::max(bound, floor_log_base(q, norm / c0));
    return bound;
}

std::vector<LaurentPoly> decompose_kernel(const GroupSpec& spec, const RatVector& a) {
    const std::size_t orbits = spec.kernel_gens.size();
    std::vector<LaurentPoly> polys(orbits);
    if (vec_is_zero(a)) return polys;

    if (spec.modulus > 1) {
        // Covered case: one-dimensional kernel with phi = [+-m].
        if (spec.rank != 1 || orbits != 1)
            throw InexpressibleKernel("decompose: multi-dimensional kernels with modulus > 1 unsupported");
        Rat u = spec.phi(0, 0);
        if (u != Rat(spec.modulus) && u != -Rat(spec.modulus))
            throw InexpressibleKernel("decompose: action is not multiplication by +-modulus");
        Rat x = a(0) / spec.kernel_gens[0](0);
        Int den = denominator(x);
        // Smallest e with den | m^e.
        long long e = 0;
        Int pw = 1;
        while (pw % den != 0) {
            pw *= spec.modulus;
            if (++e > 4096)
                throw InexpressibleKernel("decompose: denominator is not a modulus power");
        }
        Int num = numerator(x) * (pw / den);
        if (u < 0 && (e % 2 != 0)) num = -num;
        polys[0] = LaurentPoly::monomial(num, -e);
        return polys;
    }

    // Lattice kernel: solve over the union of cyclic bases {phi^j w_i}.
    std::vector<std::vector<RatVector>> basis(orbits);
    std::vector<RatVector> columns;
    for (std::size_t i = 0; i < orbits; ++i) {
        RatVector v = spec.kernel_gens[i];
        for (int j = 0; j < spec.rank; ++j) {
            // Keep extending this orbit while the combined system stays independent.
            std::vector<RatVector> trial = columns;
            trial.push_back(v);
            RatMatrix m = rat_zero(spec.rank, static_cast<Index>(trial.size()));
            for (std::size_t c = 0; c < trial.size(); ++c)
                for (Index rr = 0; rr < spec.rank; ++rr) m(rr, static_cast<Index>(c)) = trial[c](rr);
            // Exact rank via elimination.
            Index rank = 0;
            {
                RatMatrix w = m;
                Index rows = w.rows(), cols = w.cols();
                Index row = 0;
                for (Index col = 0; col < cols && row < rows; ++col) {
                    Index piv = -1;
                    for (Index r2 = row; r2 < rows; ++r2)
                        if (w(r2, col) != 0) { piv = r2; break; }
                    if (piv < 0) continue;
                    if (piv != row)
                        for (Index j2 = 0; j2 < cols; ++j2) std::swap(w(piv, j2), w(row, j2));
                    for (Index r2 = row + 1; r2 < rows; ++r2) {
                        if (w(r2, col) == 0) continue;
                        Rat f = w(r2, col) / w(row, col);
                        for (Index j2 = col; j2 < cols; ++j2) w(r2, j2) -= f * w(row, j2);
                    }
                    ++row;
                }
                rank = row;
            }
            if (rank < static_cast<Index>(trial.size())) break;
            columns.push_back(v);
            basis[i].push_back(v);
            v = mat_vec(spec.phi, v);
        }
    }
    if (static_cast<Index>(columns.size()) != spec.rank)
        throw InexpressibleKernel("decompose: kernel generators do not span the lattice");

    RatMatrix B = rat_zero(spec.rank, spec.rank);
    for (std::size_t c = 0; c < columns.size(); ++c)
        for (Index r = 0; r < spec.rank; ++r) B(r, static_cast<Index>(c)) = columns[c](r);
    auto sol = mat_solve(B, a);
    if (!sol) throw InexpressibleKernel("decompose: cyclic basis is singular");

    std::size_t col = 0;
    for (std::size_t i = 0; i < orbits; ++i) {
        LaurentPoly p;
        for (std::size_t j = 0; j < basis[i].size(); ++j, ++col) {
            const Rat& c = (*sol)(static_cast<Index>(col));
            if (!is_integer(c))
                throw InexpressibleKernel("decompose: no integer decomposition over the orbit window");
            p = p + LaurentPoly::monomial(numerator(c), static_cast<long long>(j));
        }
        polys[i] = p;
    }
    return polys;
}

namespace {

void emit_travel(Word& word, const GroupSpec& spec, long long from, long long to) {
    std::size_t up = z_generator_index(spec, 1);
    std::size_t down = z_generator_index(spec, -1);
    while (from < to) { word.push_back(static_cast<int>(up)); ++from; }
    while (from > to) { word.push_back(static_cast<int>(down)); --from; }
}

}  // namespace

LengthWitness length_upper_bound(const GroupSpec& spec, const GroupElement& g,
                                 const LaurentPoly& reducer) {
    if (!mat_is_zero(eval_poly(reducer, spec.phi)))
        throw std::domain_error("length_upper_bound: reducer does not annihilate phi");
    std::vector<LaurentPoly> polys = decompose_kernel(spec, g.a);

    LengthWitness witness;
    Int bound = 0;
    for (std::size_t i = 0; i < polys.size(); ++i) {
        if (polys[i].is_zero()) continue;
        ToppleReport rep = reduce_poly(polys[i], reducer);
        if (!verify_membership(rep))
            throw std::runtime_error("length_upper_bound: reduction certificate failed");
        const LaurentPoly& q = rep.output;
        if (q.is_zero()) continue;
        long long lo = q.min_degree(), hi = q.max_degree();
        bound += q.length() + 2 * (Int(std::llabs(lo)) + Int(std::llabs(hi)));
        // Visit lo..hi from height 0, dropping |q_j| kernel letters at each
        // height, then come back; orbits are emitted independently.
        emit_travel(witness.word, spec, 0, lo);
        for (long long j = lo; j <= hi; ++j) {
            const Int& c = q.coeff(j);
            std::size_t letter = 2 * i + (c >= 0 ? 0 : 1);
            for (Int steps = int_abs(c); steps > 0; --steps)
                witness.word.push_back(static_cast<int>(letter));
            if (j < hi) emit_travel(witness.word, spec, j, j + 1);
        }
        emit_travel(witness.word, spec, hi, 0);
    }
    emit_travel(witness.word, spec, 0, g.k);
    bound += Int(std::llabs(g.k));
    witness.bound = bound.convert_to<long long>();

    if (!elements_equal(evaluate_word(spec, witness.word), g))
        throw std::runtime_error("length_upper_bound: witness does not evaluate to the element");
    return witness;
}

Word sol_trace_word(const GroupSpec& spec, int basis_index, long long k) {
    if (spec.rank != 2 || spec.modulus != 1)
        throw std::domain_error("trace word: requires a 2x2 lattice action");
    if (k < 0) throw std::invalid_argument("trace word: k must be >= 0");
    Rat tr = mat_trace(spec.phi);
    if (rat_abs(tr) <= 2) throw std::domain_error("trace word: action is not hyperbolic");
    Rat det = mat_det(spec.phi);
    if (det != 1 && det != -1) throw std::domain_error("trace word: det must be +-1");

    // Locate e_i (or -e_i) among the kernel generators.
    RatVector target = rat_unit_vector(spec.rank, basis_index);
    int gen_index = -1;
    int gen_sign = 1;
    for (std::size_t i = 0; i < spec.kernel_gens.size(); ++i) {
        if (vec_eq(spec.kernel_gens[i], target)) { gen_index = static_cast<int>(i); break; }
        if (vec_eq(vec_scale(-1, spec.kernel_gens[i]), target)) {
            gen_index = static_cast<int>(i);
            gen_sign = -1;
            break;
        }
    }
    if (gen_index < 0)
        throw std::domain_error("trace word: basis vector is not a kernel generator");

    auto b_letter = [&](int sign) {
        return static_cast<int>(2 * static_cast<std::size_t>(gen_index) +
                                (sign * gen_sign > 0 ? 0 : 1));
    };
    int up = static_cast<int>(z_generator_index(spec, 1));
    int down = static_cast<int>(z_generator_index(spec, -1));

    // det^k decides the sign of the second kernel letter.
    int det_k_sign = (det == -1 && (k % 2 != 0)) ? -1 : 1;

    Word w;
    for (long long i = 0; i < k; ++i) w.push_back(up);
    w.push_back(b_letter(1));
    for (long long i = 0; i < 2 * k; ++i) w.push_back(down);
    w.push_back(b_letter(det_k_sign));
    for (long long i = 0; i < k; ++i) w.push_back(up);
    return w;
}

}  // namespace sandwalk
