#ifndef TKA_SEMANTICS_HPP
#define TKA_SEMANTICS_HPP

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tka/expr.hpp"
#include "tka/token.hpp"

namespace tka {

// Finite slice of the normal-form image of an expression: all nf(w) for
// source words w in the expression's language with |w| <= bound, zero
// dropped.
struct NfImage {
    int bound = 0;
    std::set<NormalFormWord> words;

    bool contains(const NormalFormWord& w) const { return words.count(w) > 0; }
};

struct EnumLimits {
    std::size_t max_items = 2'000'000;  // frontier plus image cap
    int max_letters = -1;               // drop prefixes with more letters, -1 = off
};

struct EnumerationOverflow : std::runtime_error {
    using std::runtime_error::runtime_error;
};

NfImage enumerate_nf_image(ExprRef e, int bound, const EnumLimits& limits = {});

// Exact membership of a normal form in the image of an expression, decided
// by a memoized product search of the expression's derivative automaton with
// a bracket stack. Absent is definitive when the search space was exhausted
// within the budget; Unknown reports a budget hit.
enum class MemberResult { Found, Absent, Unknown };

struct SearchBudget {
    std::size_t node_cap = 1'000'000;
    int stack_factor = 4;  // stack depth cap = stack_factor * (|target| + 1) + |target opens|
};

MemberResult member_search(ExprRef e, const NormalFormWord& target,
                           const SearchBudget& budget = {});

// Bounded equality of two expressions. `distinct` verdicts carry a witness
// normal form that is in exactly one of the two images: candidates come from
// the bounded images restricted to nf-length <= bound/2 and are confirmed by
// an exact membership search on the opposite side.
struct EqVerdict {
    bool equal = true;
    int bound = 0;
    std::optional<NormalFormWord> witness;
};

EqVerdict equal_bounded(ExprRef a, ExprRef b, int bound, const EnumLimits& limits = {},
                        const SearchBudget& budget = {});

// Bounded necessary test for membership in the centralizer: every word of
// the bounded image must be bracket-free.
bool centralizer_check_bounded(ExprRef e, int bound, const EnumLimits& limits = {});

// Stack-machine recognition of a letter word against an expression of shape
// p0 r q0, where r uses the pair-0 brackets only inside pi = q0 p0 or inside
// recoded groups p0 p1^j / q1^j q0.
enum class RecognizeResult { Accepted, Rejected, BudgetExceeded };

RecognizeResult stack_recognize(ExprRef e, const std::string& word,
                                const SearchBudget& budget = {});

// Shape test used by stack_recognize and the grammar bridge.
bool is_scoped_shape(ExprRef e);

// Every token occurring in the expression (zeros excluded), in stable order.
std::vector<Token> expr_alphabet(ExprRef e);

// Antimirov partial derivatives of e by token t; the derivative automaton
// they generate is the equation form of the position automaton.
std::vector<ExprRef> partial_derivatives(ExprRef e, const Token& t);

}  // namespace tka

#endif
