#ifndef TKA_AUTNF_HPP
#define TKA_AUTNF_HPP

#include <optional>
#include <vector>

#include "tka/cfg.hpp"
#include "tka/expr.hpp"
#include "tka/matrix.hpp"

namespace tka {

// Placeholder letter standing for pi = q0 p0 in pre-processed expressions.
inline constexpr char kPiLetter = '\x7f';

// Automaton with the transition matrix split as A = U + X + V + W pi:
// openers in U, closers in V, bracket-free content in X, splice points in W.
struct SplitAutomaton {
    std::vector<std::uint8_t> start, accept;
    Matrix<ExprRef> U, X, V, W;

    std::size_t size() const { return U.rows(); }
    void validate() const;
    bool w_is_zero() const;

    Matrix<ExprRef> transition() const;
    ExprRef language() const;
};

// Rewrites adjacent q0 p0 factors into the pi placeholder letter.
ExprRef collapse_pi(ExprRef e);

// Kleene-style compilation: the assembled automaton's language equals e.
// With fuse_pi set, pi placeholder letters become W transitions.
SplitAutomaton compile_expr(ExprRef e, bool fuse_pi = false);

// The matrix N, least solution of y >= (U y V + X)*, held both as sealed
// bracket expressions p0 ((U p1 + X + q1 V)*)_ij q0 and as a context-free
// grammar read off N >= 1 + X + U N V + N N entrywise.
struct CentralizerMatrix {
    Matrix<ExprRef> expr;
    cfg::Grammar grammar;
    std::vector<std::vector<int>> nt;  // grammar nonterminal per entry, -1 = empty

    std::size_t size() const { return expr.rows(); }
};

CentralizerMatrix compute_N(const Matrix<ExprRef>& U, const Matrix<ExprRef>& X,
                            const Matrix<ExprRef>& V);

enum class NfKind { First, Reduced, Second };

// Matrix-level normal form: first kind denotes S (NV)* N (UN)* F, reduced
// denotes S N F, second denotes S N (W N)* F.
struct MatrixNormalForm {
    NfKind kind = NfKind::First;
    int m = 2;
    std::vector<std::uint8_t> S, F;
    Matrix<ExprRef> U, V, W;
    CentralizerMatrix N;

    std::size_t size() const { return N.size(); }
    ExprRef denote() const;
};

MatrixNormalForm first_normal_form(const SplitAutomaton& aut);

// Requires the bounded centralizer test to pass for S A* F; returns nothing
// when the bounded surrogate fails (no claim is made either way).
std::optional<MatrixNormalForm> reduced_normal_form(const SplitAutomaton& aut, int bound);

// For automata avoiding the pair-0 brackets; denotes p0 (S A* F) q0.
MatrixNormalForm project_centralizer(const SplitAutomaton& aut);

enum class NfOp { Plus, Concat, PlusClosure, Star };

MatrixNormalForm nf_atom(ExprRef atom, int m = 2);
MatrixNormalForm nf_combine(NfOp op, const MatrixNormalForm& lhs,
                            const MatrixNormalForm* rhs = nullptr);

// Builds a first normal form by structural recursion over the expression,
// combining atoms with nf_combine.
MatrixNormalForm nf_build(ExprRef e, int m = 2);

}  // namespace tka

#endif
