#include "tka/autnf.hpp"

#include <algorithm>

#include "tka/semantics.hpp"

namespace tka {

namespace {

bool is_bracket(ExprRef e) { return e->kind == Expr::Kind::Open || e->kind == Expr::Kind::Close; }

Matrix<ExprRef> zeros(std::size_t r, std::size_t c) {
    return Matrix<ExprRef>(r, c, ex_zero());
}

Matrix<ExprRef> block_diag(const Matrix<ExprRef>& a, const Matrix<ExprRef>& b) {
    Matrix<ExprRef> r = zeros(a.rows() + b.rows(), a.cols() + b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) r.at(i, j) = a.at(i, j);
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) r.at(a.rows() + i, a.cols() + j) = b.at(i, j);
    return r;
}

Matrix<ExprRef> bool_outer(const std::vector<std::uint8_t>& col,
                           const std::vector<std::uint8_t>& row) {
    Matrix<ExprRef> r = zeros(col.size(), row.size());
    for (std::size_t i = 0; i < col.size(); ++i)
        for (std::size_t j = 0; j < row.size(); ++j)
            if (col[i] && row[j]) r.at(i, j) = ex_one();
    return r;
}

Matrix<ExprRef> row_expr(const std::vector<std::uint8_t>& v) {
    Matrix<ExprRef> r = zeros(1, v.size());
    for (std::size_t j = 0; j < v.size(); ++j)
        if (v[j]) r.at(0, j) = ex_one();
    return r;
}

Matrix<ExprRef> col_expr(const std::vector<std::uint8_t>& v) {
    Matrix<ExprRef> r = zeros(v.size(), 1);
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i]) r.at(i, 0) = ex_one();
    return r;
}

// entrywise u -> u p1 and v -> q1 v; the second pair seals the automaton's
// own brackets so that the p0 ... q0 scope annihilates unbalanced paths
Matrix<ExprRef> seal_right(const Matrix<ExprRef>& u) {
    Matrix<ExprRef> r = u;
    for (std::size_t i = 0; i < u.rows(); ++i)
        for (std::size_t j = 0; j < u.cols(); ++j)
            r.at(i, j) = ex_prod2(u.at(i, j), ex_open(1));
    return r;
}

Matrix<ExprRef> seal_left(const Matrix<ExprRef>& v) {
    Matrix<ExprRef> r = v;
    for (std::size_t i = 0; i < v.rows(); ++i)
        for (std::size_t j = 0; j < v.cols(); ++j)
            r.at(i, j) = ex_prod2(ex_close(1), v.at(i, j));
    return r;
}

Matrix<ExprRef> scope_entries(const Matrix<ExprRef>& m) {
    Matrix<ExprRef> r = m;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            r.at(i, j) = ex_prod({ex_open(0), m.at(i, j), ex_close(0)});
    return r;
}

int bracket_index_of(ExprRef e) { return is_bracket(e) ? e->index : -1; }

// Builds grammar symbols for a bracket-free regular expression; returns a
// fresh nonterminal generating its word language.
int regex_to_grammar(cfg::Grammar& g, ExprRef e) {
    switch (e->kind) {
        case Expr::Kind::Zero: {
            return g.add_nt("R" + std::to_string(g.nt_names.size()));
        }
        case Expr::Kind::One: {
            int nt = g.add_nt("R" + std::to_string(g.nt_names.size()));
            g.add_prod(nt, {});
            return nt;
        }
        case Expr::Kind::Letter: {
            int nt = g.add_nt("R" + std::to_string(g.nt_names.size()));
            g.add_prod(nt, {cfg::Sym::t(e->letter)});
            return nt;
        }
        case Expr::Kind::Sum: {
            int nt = g.add_nt("R" + std::to_string(g.nt_names.size()));
            for (ExprRef k : e->kids) g.add_prod(nt, {cfg::Sym::n(regex_to_grammar(g, k))});
            return nt;
        }
        case Expr::Kind::Prod: {
            std::vector<cfg::Sym> rhs;
            for (ExprRef k : e->kids) rhs.push_back(cfg::Sym::n(regex_to_grammar(g, k)));
            int nt = g.add_nt("R" + std::to_string(g.nt_names.size()));
            g.add_prod(nt, std::move(rhs));
            return nt;
        }
        case Expr::Kind::Star: {
            int kid = regex_to_grammar(g, e->kids[0]);
            int nt = g.add_nt("R" + std::to_string(g.nt_names.size()));
            g.add_prod(nt, {});
            g.add_prod(nt, {cfg::Sym::n(kid), cfg::Sym::n(nt)});
            return nt;
        }
        default:
            throw std::invalid_argument("regex_to_grammar: expression has brackets");
    }
}

// Keeps only productive nonterminals' productions (pruning never changes any
// entry nonterminal's language; empty entries simply keep no productions).
void prune_unproductive(cfg::Grammar& g) {
    std::vector<char> productive(g.nt_names.size(), 0);
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& p : g.prods) {
            if (productive[p.head]) continue;
            bool ok = true;
            for (const auto& s : p.rhs)
                if (!s.terminal && !productive[s.nt]) ok = false;
            if (ok) {
                productive[p.head] = 1;
                changed = true;
            }
        }
    }
    std::vector<cfg::Production> kept;
    for (const auto& p : g.prods) {
        bool ok = productive[p.head];
        for (const auto& s : p.rhs)
            if (!s.terminal && !productive[s.nt]) ok = false;
        if (ok) kept.push_back(p);
    }
    g.prods = std::move(kept);
}

}  // namespace

void SplitAutomaton::validate() const {
    const std::size_t n = size();
    if (start.size() != n || accept.size() != n || X.rows() != n || X.cols() != n ||
        V.rows() != n || V.cols() != n || W.rows() != n || W.cols() != n || U.cols() != n)
        throw std::invalid_argument("SplitAutomaton: shape mismatch");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            ExprRef u = U.at(i, j), v = V.at(i, j), x = X.at(i, j), w = W.at(i, j);
            if (u->kind != Expr::Kind::Zero && u->kind != Expr::Kind::Open)
                throw std::invalid_argument("SplitAutomaton: U entry not 0 or opener");
            if (v->kind != Expr::Kind::Zero && v->kind != Expr::Kind::Close)
                throw std::invalid_argument("SplitAutomaton: V entry not 0 or closer");
            if (x->max_bracket >= 0)
                throw std::invalid_argument("SplitAutomaton: X entry has brackets");
            if (w->kind != Expr::Kind::Zero && w->kind != Expr::Kind::One)
                throw std::invalid_argument("SplitAutomaton: W entry not 0 or 1");
        }
}

bool SplitAutomaton::w_is_zero() const {
    for (std::size_t i = 0; i < W.rows(); ++i)
        for (std::size_t j = 0; j < W.cols(); ++j)
            if (W.at(i, j)->kind != Expr::Kind::Zero) return false;
    return true;
}

Matrix<ExprRef> SplitAutomaton::transition() const {
    Matrix<ExprRef> a = matrix_add(matrix_add(U, X), V);
    Matrix<ExprRef> wpi = W;
    for (std::size_t i = 0; i < W.rows(); ++i)
        for (std::size_t j = 0; j < W.cols(); ++j)
            wpi.at(i, j) = ex_prod2(W.at(i, j), ex_pi());
    return matrix_add(a, wpi);
}

ExprRef SplitAutomaton::language() const {
    Automaton<ExprRef> aut{start, transition(), accept};
    return automaton_language(aut);
}

ExprRef collapse_pi(ExprRef e) {
    switch (e->kind) {
        case Expr::Kind::Sum:
        case Expr::Kind::Prod: {
            std::vector<ExprRef> kids;
            kids.reserve(e->kids.size());
            for (ExprRef k : e->kids) kids.push_back(collapse_pi(k));
            if (e->kind == Expr::Kind::Sum) return ex_sum(std::move(kids));
            std::vector<ExprRef> fused;
            for (std::size_t i = 0; i < kids.size(); ++i) {
                if (i + 1 < kids.size() && kids[i]->kind == Expr::Kind::Close &&
                    kids[i]->index == 0 && kids[i + 1]->kind == Expr::Kind::Open &&
                    kids[i + 1]->index == 0) {
                    fused.push_back(ex_letter(kPiLetter));
                    ++i;
                } else {
                    fused.push_back(kids[i]);
                }
            }
            return ex_prod(std::move(fused));
        }
        case Expr::Kind::Star:
            return ex_star(collapse_pi(e->kids[0]));
        default:
            return e;
    }
}

namespace {

SplitAutomaton aut_zero() {
    SplitAutomaton a;
    a.start = {0};
    a.accept = {0};
    a.U = a.X = a.V = a.W = zeros(1, 1);
    return a;
}

SplitAutomaton aut_atom(ExprRef e, bool fuse_pi) {
    SplitAutomaton a;
    a.start = {1, 0};
    a.accept = {0, 1};
    a.U = zeros(2, 2);
    a.V = zeros(2, 2);
    a.W = zeros(2, 2);
    a.X = zeros(2, 2);
    a.X.at(0, 0) = ex_one();
    a.X.at(1, 1) = ex_one();
    if (fuse_pi && e->kind == Expr::Kind::Letter && e->letter == kPiLetter) {
        a.W.at(0, 1) = ex_one();
    } else if (e->kind == Expr::Kind::Open) {
        a.U.at(0, 1) = e;
    } else if (e->kind == Expr::Kind::Close) {
        a.V.at(0, 1) = e;
    } else {
        a.X.at(0, 1) = e;  // letter, 1 or 0
    }
    return a;
}

SplitAutomaton aut_union(const SplitAutomaton& a, const SplitAutomaton& b) {
    SplitAutomaton r;
    r.start = a.start;
    r.start.insert(r.start.end(), b.start.begin(), b.start.end());
    r.accept = a.accept;
    r.accept.insert(r.accept.end(), b.accept.begin(), b.accept.end());
    r.U = block_diag(a.U, b.U);
    r.X = block_diag(a.X, b.X);
    r.V = block_diag(a.V, b.V);
    r.W = block_diag(a.W, b.W);
    return r;
}

SplitAutomaton aut_concat(const SplitAutomaton& a, const SplitAutomaton& b) {
    SplitAutomaton r;
    r.start = a.start;
    r.start.insert(r.start.end(), b.start.size(), 0);
    r.accept.assign(a.accept.size(), 0);
    r.accept.insert(r.accept.end(), b.accept.begin(), b.accept.end());
    r.U = block_diag(a.U, b.U);
    r.V = block_diag(a.V, b.V);
    r.W = block_diag(a.W, b.W);
    r.X = block_diag(a.X, b.X);
    Matrix<ExprRef> bridge = bool_outer(a.accept, b.start);
    for (std::size_t i = 0; i < a.accept.size(); ++i)
        for (std::size_t j = 0; j < b.start.size(); ++j)
            r.X.at(i, a.X.cols() + j) = bridge.at(i, j);
    return r;
}

SplitAutomaton aut_plus(const SplitAutomaton& a) {
    SplitAutomaton r = a;
    Matrix<ExprRef> loop = bool_outer(a.accept, a.start);
    r.X = matrix_add(r.X, loop);
    return r;
}

SplitAutomaton compile_rec(ExprRef e, bool fuse_pi) {
    switch (e->kind) {
        case Expr::Kind::Zero:
            return aut_zero();
        case Expr::Kind::One:
        case Expr::Kind::Letter:
        case Expr::Kind::Open:
        case Expr::Kind::Close:
            return aut_atom(e, fuse_pi);
        case Expr::Kind::Sum: {
            SplitAutomaton r = compile_rec(e->kids[0], fuse_pi);
            for (std::size_t i = 1; i < e->kids.size(); ++i)
                r = aut_union(r, compile_rec(e->kids[i], fuse_pi));
            return r;
        }
        case Expr::Kind::Prod: {
            SplitAutomaton r = compile_rec(e->kids[0], fuse_pi);
            for (std::size_t i = 1; i < e->kids.size(); ++i)
                r = aut_concat(r, compile_rec(e->kids[i], fuse_pi));
            return r;
        }
        case Expr::Kind::Star:
            return aut_union(aut_atom(ex_one(), false), aut_plus(compile_rec(e->kids[0], fuse_pi)));
    }
    return aut_zero();
}

}  // namespace

SplitAutomaton compile_expr(ExprRef e, bool fuse_pi) {
    SplitAutomaton a = compile_rec(fuse_pi ? collapse_pi(e) : e, fuse_pi);
    a.validate();
    return a;
}

CentralizerMatrix compute_N(const Matrix<ExprRef>& U, const Matrix<ExprRef>& X,
                            const Matrix<ExprRef>& V) {
    const std::size_t n = U.rows();
    if (U.cols() != n || X.rows() != n || X.cols() != n || V.rows() != n || V.cols() != n)
        throw std::invalid_argument("compute_N: shape mismatch");

    CentralizerMatrix N;
    Matrix<ExprRef> sealed = matrix_add(matrix_add(seal_right(U), X), seal_left(V));
    N.expr = scope_entries(matrix_star(sealed));

    // grammar form, read off N >= 1 + X + U N V + N N
    N.nt.assign(n, std::vector<int>(n, -1));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            N.nt[i][j] = N.grammar.add_nt("N_" + std::to_string(i + 1) + "_" +
                                          std::to_string(j + 1));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            int nt = N.nt[i][j];
            if (i == j) N.grammar.add_prod(nt, {});
            ExprRef x = X.at(i, j);
            if (x->kind != Expr::Kind::Zero)
                N.grammar.add_prod(nt, {cfg::Sym::n(regex_to_grammar(N.grammar, x))});
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t l = 0; l < n; ++l) {
                    int ui = bracket_index_of(U.at(i, k));
                    int vj = bracket_index_of(V.at(l, j));
                    if (ui >= 0 && ui == vj)
                        N.grammar.add_prod(nt, {cfg::Sym::n(N.nt[k][l])});
                }
            for (std::size_t k = 0; k < n; ++k)
                N.grammar.add_prod(nt, {cfg::Sym::n(N.nt[i][k]), cfg::Sym::n(N.nt[k][j])});
        }
    prune_unproductive(N.grammar);
    return N;
}

ExprRef MatrixNormalForm::denote() const {
    Matrix<ExprRef> s = row_expr(S);
    Matrix<ExprRef> f = col_expr(F);
    switch (kind) {
        case NfKind::First: {
            Matrix<ExprRef> nv = matrix_star(matrix_mul(N.expr, V));
            Matrix<ExprRef> un = matrix_star(matrix_mul(U, N.expr));
            Matrix<ExprRef> mid = matrix_mul(matrix_mul(nv, N.expr), un);
            return matrix_mul(matrix_mul(s, mid), f).at(0, 0);
        }
        case NfKind::Reduced:
            return matrix_mul(matrix_mul(s, N.expr), f).at(0, 0);
        case NfKind::Second: {
            Matrix<ExprRef> wn = matrix_star(matrix_mul(W, N.expr));
            Matrix<ExprRef> mid = matrix_mul(N.expr, wn);
            return matrix_mul(matrix_mul(s, mid), f).at(0, 0);
        }
    }
    throw std::logic_error("denote: bad kind");
}

MatrixNormalForm first_normal_form(const SplitAutomaton& aut) {
    aut.validate();
    if (!aut.w_is_zero())
        throw std::invalid_argument("first_normal_form: W must be zero");
    MatrixNormalForm nf;
    nf.kind = NfKind::First;
    nf.S = aut.start;
    nf.F = aut.accept;
    nf.U = aut.U;
    nf.V = aut.V;
    nf.W = aut.W;
    nf.N = compute_N(aut.U, aut.X, aut.V);
    int mb = 1;
    for (std::size_t i = 0; i < aut.size(); ++i)
        for (std::size_t j = 0; j < aut.size(); ++j)
            mb = std::max({mb, aut.U.at(i, j)->max_bracket, aut.V.at(i, j)->max_bracket});
    nf.m = mb + 1;
    return nf;
}

std::optional<MatrixNormalForm> reduced_normal_form(const SplitAutomaton& aut, int bound) {
    aut.validate();
    if (!aut.w_is_zero())
        throw std::invalid_argument("reduced_normal_form: W must be zero");
    if (!centralizer_check_bounded(aut.language(), bound)) return std::nullopt;
    MatrixNormalForm nf = first_normal_form(aut);
    nf.kind = NfKind::Reduced;
    return nf;
}

MatrixNormalForm project_centralizer(const SplitAutomaton& aut) {
    aut.validate();
    for (std::size_t i = 0; i < aut.size(); ++i)
        for (std::size_t j = 0; j < aut.size(); ++j) {
            if (bracket_index_of(aut.U.at(i, j)) == 0 || bracket_index_of(aut.V.at(i, j)) == 0)
                throw std::invalid_argument(
                    "project_centralizer: automaton must avoid the pair-0 brackets");
        }
    MatrixNormalForm nf;
    nf.kind = NfKind::Second;
    nf.S = aut.start;
    nf.F = aut.accept;
    nf.U = aut.U;
    nf.V = aut.V;
    nf.W = aut.W;
    nf.N = compute_N(aut.U, aut.X, aut.V);
    int mb = 1;
    for (std::size_t i = 0; i < aut.size(); ++i)
        for (std::size_t j = 0; j < aut.size(); ++j)
            mb = std::max({mb, aut.U.at(i, j)->max_bracket, aut.V.at(i, j)->max_bracket});
    nf.m = mb + 1;
    return nf;
}

// ---------------------------------------------------------------------------
// Normal form combinators

namespace {

int import_grammar(cfg::Grammar& dst, const cfg::Grammar& src) {
    int offset = static_cast<int>(dst.nt_names.size());
    for (const auto& name : src.nt_names) dst.add_nt(name);
    for (const auto& p : src.prods) {
        std::vector<cfg::Sym> rhs = p.rhs;
        for (auto& s : rhs)
            if (!s.terminal) s.nt += offset;
        dst.add_prod(p.head + offset, std::move(rhs));
    }
    return offset;
}

// N entries with the generic pattern of compute_N but X given as language
// pieces: per entry an optional expression and grammar alternatives.
struct EntryLang {
    ExprRef expr = nullptr;                       // nullptr = zero
    std::vector<std::vector<cfg::Sym>> rhss;      // grammar alternatives
};

CentralizerMatrix assemble_N(const Matrix<ExprRef>& U, const Matrix<ExprRef>& V,
                             const std::vector<std::vector<EntryLang>>& X,
                             cfg::Grammar base_grammar, const std::string& prefix) {
    const std::size_t n = U.rows();
    CentralizerMatrix N;
    N.grammar = std::move(base_grammar);

    Matrix<ExprRef> xe = zeros(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (X[i][j].expr) xe.at(i, j) = X[i][j].expr;
    Matrix<ExprRef> sealed = matrix_add(matrix_add(seal_right(U), xe), seal_left(V));
    N.expr = scope_entries(matrix_star(sealed));

    N.nt.assign(n, std::vector<int>(n, -1));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            N.nt[i][j] = N.grammar.add_nt(prefix + "_" + std::to_string(i + 1) + "_" +
                                          std::to_string(j + 1));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            int nt = N.nt[i][j];
            if (i == j) N.grammar.add_prod(nt, {});
            for (const auto& rhs : X[i][j].rhss) N.grammar.add_prod(nt, rhs);
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t l = 0; l < n; ++l) {
                    int ui = bracket_index_of(U.at(i, k));
                    int vj = bracket_index_of(V.at(l, j));
                    if (ui >= 0 && ui == vj) N.grammar.add_prod(nt, {cfg::Sym::n(N.nt[k][l])});
                }
            for (std::size_t k = 0; k < n; ++k)
                N.grammar.add_prod(nt, {cfg::Sym::n(N.nt[i][k]), cfg::Sym::n(N.nt[k][j])});
        }
    prune_unproductive(N.grammar);
    return N;
}

}  // namespace

MatrixNormalForm nf_atom(ExprRef atom, int m) {
    MatrixNormalForm nf;
    nf.kind = NfKind::First;
    nf.m = std::max(m, atom->max_bracket + 1);
    if (atom->kind == Expr::Kind::Zero || atom->kind == Expr::Kind::One) {
        nf.S = {static_cast<std::uint8_t>(atom->kind == Expr::Kind::One)};
        nf.F = {1};
        nf.U = nf.V = nf.W = zeros(1, 1);
        nf.N.expr = Matrix<ExprRef>(1, 1, ex_one());
        nf.N.nt.assign(1, {0});
        nf.N.grammar.add_nt("N_1_1");
        nf.N.grammar.add_prod(0, {});
        return nf;
    }
    if (!atom->is_token()) throw std::invalid_argument("nf_atom: not an atom");
    nf.S = {1, 0};
    nf.F = {0, 1};
    nf.U = zeros(2, 2);
    nf.V = zeros(2, 2);
    nf.W = zeros(2, 2);
    nf.N.expr = Matrix<ExprRef>::identity(2, ex_zero());
    nf.N.nt.assign(2, std::vector<int>(2, -1));
    nf.N.nt[0][0] = nf.N.grammar.add_nt("N_1_1");
    nf.N.grammar.add_prod(nf.N.nt[0][0], {});
    nf.N.nt[1][1] = nf.N.grammar.add_nt("N_2_2");
    nf.N.grammar.add_prod(nf.N.nt[1][1], {});
    if (atom->kind == Expr::Kind::Letter) {
        nf.N.expr.at(0, 1) = atom;
        nf.N.nt[0][1] = nf.N.grammar.add_nt("N_1_2");
        nf.N.grammar.add_prod(nf.N.nt[0][1], {cfg::Sym::t(atom->letter)});
    } else if (atom->kind == Expr::Kind::Open) {
        nf.U.at(0, 1) = atom;
    } else {
        nf.V.at(0, 1) = atom;
    }
    return nf;
}

MatrixNormalForm nf_combine(NfOp op, const MatrixNormalForm& lhs, const MatrixNormalForm* rhs) {
    if (lhs.kind != NfKind::First)
        throw std::invalid_argument("nf_combine: operands must be first normal forms");
    if (op == NfOp::Plus || op == NfOp::Concat) {
        if (!rhs || rhs->kind != NfKind::First)
            throw std::invalid_argument("nf_combine: binary operation needs two operands");
        if (lhs.m != rhs->m)
            throw std::invalid_argument("nf_combine: bracket count mismatch");
    }

    const std::size_t n1 = lhs.size();
    MatrixNormalForm out;
    out.kind = NfKind::First;
    out.m = lhs.m;

    if (op == NfOp::Plus || op == NfOp::Concat) {
        const std::size_t n2 = rhs->size();
        const std::size_t n = n1 + n2;
        out.U = block_diag(lhs.U, rhs->U);
        out.V = block_diag(lhs.V, rhs->V);
        out.W = zeros(n, n);
        if (op == NfOp::Plus) {
            out.S = lhs.S;
            out.S.insert(out.S.end(), rhs->S.begin(), rhs->S.end());
            out.F = lhs.F;
            out.F.insert(out.F.end(), rhs->F.begin(), rhs->F.end());
        } else {
            out.S = lhs.S;
            out.S.insert(out.S.end(), n2, 0);
            out.F.assign(n1, 0);
            out.F.insert(out.F.end(), rhs->F.begin(), rhs->F.end());
        }

        cfg::Grammar merged;
        int off1 = import_grammar(merged, lhs.N.grammar);
        int off2 = import_grammar(merged, rhs->N.grammar);
        auto nt1 = [&](std::size_t i, std::size_t j) {
            int v = lhs.N.nt[i][j];
            return v < 0 ? -1 : v + off1;
        };
        auto nt2 = [&](std::size_t i, std::size_t j) {
            int v = rhs->N.nt[i][j];
            return v < 0 ? -1 : v + off2;
        };

        out.N.grammar = std::move(merged);
        out.N.expr = block_diag(lhs.N.expr, rhs->N.expr);
        out.N.nt.assign(n, std::vector<int>(n, -1));
        for (std::size_t i = 0; i < n1; ++i)
            for (std::size_t j = 0; j < n1; ++j) out.N.nt[i][j] = nt1(i, j);
        for (std::size_t i = 0; i < n2; ++i)
            for (std::size_t j = 0; j < n2; ++j) out.N.nt[n1 + i][n1 + j] = nt2(i, j);

        if (op == NfOp::Concat) {
            // alpha block: least solution of z >= N1 U1 z V2 N2 + N1 F1 S2 N2
            Matrix<ExprRef> t1 = matrix_star(matrix_add(
                matrix_add(seal_right(lhs.U), lhs.N.expr), seal_left(lhs.V)));
            Matrix<ExprRef> t2 = matrix_star(matrix_add(
                matrix_add(seal_right(rhs->U), rhs->N.expr), seal_left(rhs->V)));
            Matrix<ExprRef> fs = bool_outer(lhs.F, rhs->S);
            Matrix<ExprRef> alpha = scope_entries(matrix_mul(matrix_mul(t1, fs), t2));
            for (std::size_t i = 0; i < n1; ++i)
                for (std::size_t j = 0; j < n2; ++j) out.N.expr.at(i, n1 + j) = alpha.at(i, j);

            std::vector<std::vector<int>> ant(n1, std::vector<int>(n2, -1));
            for (std::size_t i = 0; i < n1; ++i)
                for (std::size_t j = 0; j < n2; ++j)
                    ant[i][j] = out.N.grammar.add_nt("A_" + std::to_string(i + 1) + "_" +
                                                     std::to_string(j + 1));
            for (std::size_t i = 0; i < n1; ++i)
                for (std::size_t j = 0; j < n2; ++j) {
                    // N1_{ik} F1_k S2_l N2_{lj}
                    for (std::size_t k = 0; k < n1; ++k) {
                        if (!lhs.F[k] || nt1(i, k) < 0) continue;
                        for (std::size_t l = 0; l < n2; ++l) {
                            if (!rhs->S[l] || nt2(l, j) < 0) continue;
                            out.N.grammar.add_prod(
                                ant[i][j], {cfg::Sym::n(nt1(i, k)), cfg::Sym::n(nt2(l, j))});
                        }
                    }
                    // N1_{ik} U1_{k k'} alpha_{k' l'} V2_{l' l} N2_{lj}
                    for (std::size_t k = 0; k < n1; ++k) {
                        if (nt1(i, k) < 0) continue;
                        for (std::size_t kk = 0; kk < n1; ++kk) {
                            int u = bracket_index_of(lhs.U.at(k, kk));
                            if (u < 0) continue;
                            for (std::size_t ll = 0; ll < n2; ++ll)
                                for (std::size_t l = 0; l < n2; ++l) {
                                    if (bracket_index_of(rhs->V.at(ll, l)) != u) continue;
                                    if (nt2(l, j) < 0) continue;
                                    out.N.grammar.add_prod(ant[i][j],
                                                           {cfg::Sym::n(nt1(i, k)),
                                                            cfg::Sym::n(ant[kk][ll]),
                                                            cfg::Sym::n(nt2(l, j))});
                                }
                        }
                    }
                }
            for (std::size_t i = 0; i < n1; ++i)
                for (std::size_t j = 0; j < n2; ++j) out.N.nt[i][n1 + j] = ant[i][j];
            prune_unproductive(out.N.grammar);
        }
        return out;
    }

    if (op == NfOp::PlusClosure) {
        out.S = lhs.S;
        out.F = lhs.F;
        out.U = lhs.U;
        out.V = lhs.V;
        out.W = zeros(n1, n1);
        // N' = least solution of y >= (U y V + N1 + F S)*
        std::vector<std::vector<EntryLang>> x(n1, std::vector<EntryLang>(n1));
        cfg::Grammar base;
        int off = import_grammar(base, lhs.N.grammar);
        for (std::size_t i = 0; i < n1; ++i)
            for (std::size_t j = 0; j < n1; ++j) {
                ExprRef fs = (lhs.F[i] && lhs.S[j]) ? ex_one() : ex_zero();
                ExprRef nexpr = lhs.N.expr.at(i, j);
                ExprRef both = ex_sum2(nexpr, fs);
                if (both->kind != Expr::Kind::Zero) x[i][j].expr = both;
                if (lhs.N.nt[i][j] >= 0)
                    x[i][j].rhss.push_back({cfg::Sym::n(lhs.N.nt[i][j] + off)});
                if (lhs.F[i] && lhs.S[j]) x[i][j].rhss.push_back({});
            }
        out.N = assemble_N(lhs.U, lhs.V, x, std::move(base), "C");
        return out;
    }

    // Star: 1 + plus closure
    MatrixNormalForm one = nf_atom(ex_one(), lhs.m);
    MatrixNormalForm plus = nf_combine(NfOp::PlusClosure, lhs, nullptr);
    return nf_combine(NfOp::Plus, one, &plus);
}

MatrixNormalForm nf_build(ExprRef e, int m) {
    switch (e->kind) {
        case Expr::Kind::Zero:
        case Expr::Kind::One:
        case Expr::Kind::Letter:
        case Expr::Kind::Open:
        case Expr::Kind::Close:
            return nf_atom(e, m);
        case Expr::Kind::Sum: {
            MatrixNormalForm acc = nf_build(e->kids[0], m);
            for (std::size_t i = 1; i < e->kids.size(); ++i) {
                MatrixNormalForm next = nf_build(e->kids[i], m);
                acc = nf_combine(NfOp::Plus, acc, &next);
            }
            return acc;
        }
        case Expr::Kind::Prod: {
            MatrixNormalForm acc = nf_build(e->kids[0], m);
            for (std::size_t i = 1; i < e->kids.size(); ++i) {
                MatrixNormalForm next = nf_build(e->kids[i], m);
                acc = nf_combine(NfOp::Concat, acc, &next);
            }
            return acc;
        }
        case Expr::Kind::Star:
            return nf_combine(NfOp::Star, nf_build(e->kids[0], m), nullptr);
    }
    throw std::logic_error("nf_build: bad expression");
}

}  // namespace tka
