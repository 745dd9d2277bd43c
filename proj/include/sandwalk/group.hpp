#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "sandwalk/exact_linalg.hpp"
#include "sandwalk/laurent.hpp"

namespace sandwalk {

/// Presentation of G = A x| Z where A is a rank-D abelian kernel acted on by
/// an exact rational matrix phi.  Lattice kernels have modulus 1 (integer
/// entries); kernels with m-power denominators (e.g. BS(1,m)) declare m.
/// The generating set is {(+-w_i, 0)} for each kernel generator w_i together
/// with the implied (0, +-1).
struct GroupSpec {
    std::string name;
    int rank = 0;
    Int modulus = 1;
    RatMatrix phi;
    RatMatrix phi_inv;
    std::vector<RatVector> kernel_gens;
    std::vector<std::string> kernel_labels;
    // Optional split candidates carried by the catalog (polynomial text).
    std::string p_plus_text;
    std::string p_zero_text;
};

GroupSpec make_group_spec(std::string name, const RatMatrix& phi, Int modulus,
                          std::vector<RatVector> kernel_gens,
                          std::vector<std::string> kernel_labels,
                          std::string p_plus_text = "", std::string p_zero_text = "");

/// Normal form (a, k); the group law is (a,k)(b,l) = (a + phi^k b, k+l).
struct GroupElement {
    RatVector a;
    long long k = 0;
};

struct Generator {
    RatVector vec;   // zero vector for the cyclic generators
    long long shift = 0;
    int orbit = -1;  // index into kernel_gens, -1 for cyclic
    int sign = 1;
    std::string label;
};

/// Symmetric generator list in deterministic order:
/// w_0, w_0^-1, w_1, w_1^-1, ..., z, z^-1.
std::vector<Generator> generators(const GroupSpec& spec);
std::size_t z_generator_index(const GroupSpec& spec, int sign);

using Word = std::vector<int>;  // indices into generators(spec)

GroupElement identity(const GroupSpec& spec);
bool is_identity(const GroupElement& g);
bool elements_equal(const GroupElement& g, const GroupElement& h);
GroupElement multiply(const GroupSpec& spec, const GroupElement& g, const GroupElement& h);
GroupElement inverse(const GroupSpec& spec, const GroupElement& g);
GroupElement generator_element(const GroupSpec& spec, std::size_t index);
GroupElement evaluate_word(const GroupSpec& spec, const Word& word);

/// Word evaluation that also accumulates the polynomial trace per kernel
/// generator: a kernel letter at height k contributes sign * t^k.
struct TracedElement {
    GroupElement element;
    std::vector<LaurentPoly> polys;  // one per kernel generator
};
TracedElement evaluate_word_traced(const GroupSpec& spec, const Word& word);

std::string element_key(const GroupElement& g);
long long project_to_Z(const GroupElement& g);

/// Exact word lengths by breadth-first enumeration.
struct Ball {
    int radius = 0;
    std::vector<GroupElement> elements;
    std::vector<int> lengths;                      // parallel to elements
    std::vector<std::size_t> count_by_length;      // count_by_length[r]
    std::unordered_map<std::string, std::size_t> index;

    std::size_t size() const { return elements.size(); }
    std::optional<int> length_of(const GroupElement& g) const;
};

Ball ball(const GroupSpec& spec, int radius, int radius_cap = 10,
          std::size_t max_states = 10'000'000);

/// Max kernel sup-norm over elements of each exact length 0..radius
/// (cumulative, so the sequence is nondecreasing).
std::vector<Rat> max_kernel_norm_by_radius(const Ball& b);

/// q = max(|phi|_inf, |phi^-1|_inf); satisfies |phi^k v|_inf <= q^|k| |v|_inf.
Rat expansion_factor(const GroupSpec& spec);

/// max(|k|, floor(log_q(|a|_inf / c0))) with c0 the largest kernel-generator
/// norm; never exceeds the exact word length.
long long length_lower_bound(const GroupSpec& spec, const GroupElement& g);

class InexpressibleKernel : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Write a as sum_i P_i(phi) w_i with integer Laurent polynomials P_i, by
/// exact linear solving over the cyclic bases {phi^j w_i}.  Throws
/// InexpressibleKernel when no integer decomposition exists in the window.
std::vector<LaurentPoly> decompose_kernel(const GroupSpec& spec, const RatVector& a);

/// Constructive length upper bound: reduce each P_i modulo the reducer
/// (which must annihilate phi) and emit a witness word that visits the
/// degrees of the reduced polynomial.  The witness evaluates to g exactly.
struct LengthWitness {
    long long bound = 0;
    Word word;
};
LengthWitness length_upper_bound(const GroupSpec& spec, const GroupElement& g,
                                 const LaurentPoly& reducer);

/// The word z^k b_i z^{-2k} b_i^{det^k} z^k of length 4k+2, which evaluates
/// to (trace(phi^k) e_i, 0).  Requires a 2x2 integer action with |trace| > 2
/// and det = +-1, and e_i present among the kernel generators.
Word sol_trace_word(const GroupSpec& spec, int basis_index, long long k);

}  // namespace sandwalk
