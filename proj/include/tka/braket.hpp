#ifndef TKA_BRAKET_HPP
#define TKA_BRAKET_HPP

#include <optional>
#include <set>
#include <utility>

#include "tka/expr.hpp"
#include "tka/matrix.hpp"
#include "tka/semantics.hpp"

namespace tka {

// Binary relation on {0, ..., dim-1}; the truncated stand-in for the
// omega x omega matrix model. Pairs whose pushed index overflows the
// truncation are dropped rather than rejected.
struct IndexRelation {
    int dim = 0;
    std::set<std::pair<int, int>> pairs;

    static IndexRelation empty(int dim) { return IndexRelation{dim, {}}; }
    static IndexRelation identity(int dim);

    IndexRelation compose(const IndexRelation& o) const;
    IndexRelation unite(const IndexRelation& o) const;
    IndexRelation star() const;  // reflexive-transitive closure
    IndexRelation converse() const;
    IndexRelation restrict_to(const std::set<int>& domain) const;

    bool operator==(const IndexRelation&) const = default;
};

template <>
struct SemiringTraits<IndexRelation> {
    static IndexRelation zero_like(const IndexRelation& x) { return IndexRelation::empty(x.dim); }
    static IndexRelation one_like(const IndexRelation& x) {
        return IndexRelation::identity(x.dim);
    }
    static IndexRelation add(const IndexRelation& a, const IndexRelation& b) {
        return a.unite(b);
    }
    static IndexRelation mul(const IndexRelation& a, const IndexRelation& b) {
        return a.compose(b);
    }
    static IndexRelation star(const IndexRelation& a) { return a.star(); }
};

// Opening bracket i as the push relation {(k, mk+i)}, closing bracket as its
// converse, evaluated on indices below the truncation T.
IndexRelation bracket_relation(const Token& t, int m, int T);

// Evaluates a bracket expression (0, 1, brackets, +, product, star) in the
// truncated model. Letters are rejected.
IndexRelation omega_model_eval(ExprRef e, int m, int T);

// Indices whose single push of any symbol stays below T.
std::set<int> overflow_free_domain(int m, int T);

// hat(a)_ij = p_i a q_j, an m x m matrix of relations.
Matrix<IndexRelation> hat_map(const IndexRelation& a, int m);

// check(A) = sum_ij q_i A_ij p_j.
IndexRelation check_map(const Matrix<IndexRelation>& A, int m);

// e = sum_{i<m} q_i p_i, the completeness sum.
ExprRef completeness_sum(int m);

struct RelCompVerdict {
    bool equal = true;
    int bound = 0;
    std::optional<NormalFormWord> witness;
    bool centralizer_ok = true;
};

// Checks p0 phi(e) q0 = p0 phi(1) q0 by bounded equality, and that
// p0 phi(1) q0 passes the bounded centralizer test. phi uses the letter
// `slot` for its free position and may use p0/q0 only inside pi = q0 p0.
RelCompVerdict relative_completeness_check(ExprRef phi, int m, int bound, char slot = 'x');

// Side condition of the relative completeness theorem.
bool pi_side_condition(ExprRef phi);

}  // namespace tka

#endif
