#include "tka/braket.hpp"

namespace tka {

IndexRelation IndexRelation::identity(int dim) {
    IndexRelation r{dim, {}};
    for (int i = 0; i < dim; ++i) r.pairs.insert({i, i});
    return r;
}

IndexRelation IndexRelation::compose(const IndexRelation& o) const {
    IndexRelation r{dim, {}};
    for (const auto& [a, b] : pairs)
        for (const auto& [c, d] : o.pairs)
            if (b == c) r.pairs.insert({a, d});
    return r;
}

IndexRelation IndexRelation::unite(const IndexRelation& o) const {
    IndexRelation r = *this;
    r.pairs.insert(o.pairs.begin(), o.pairs.end());
    return r;
}

IndexRelation IndexRelation::star() const {
    IndexRelation r = unite(identity(dim));
    bool changed = true;
    while (changed) {
        changed = false;
        IndexRelation step = r.compose(r);
        for (const auto& p : step.pairs)
            if (r.pairs.insert(p).second) changed = true;
    }
    return r;
}

IndexRelation IndexRelation::converse() const {
    IndexRelation r{dim, {}};
    for (const auto& [a, b] : pairs) r.pairs.insert({b, a});
    return r;
}

IndexRelation IndexRelation::restrict_to(const std::set<int>& domain) const {
    IndexRelation r{dim, {}};
    for (const auto& p : pairs)
        if (domain.count(p.first) && domain.count(p.second)) r.pairs.insert(p);
    return r;
}

IndexRelation bracket_relation(const Token& t, int m, int T) {
    IndexRelation r{T, {}};
    if (t.kind == TokenKind::Open) {
        for (int k = 0; static_cast<long>(m) * k + t.index < T; ++k)
            r.pairs.insert({k, m * k + t.index});
    } else if (t.kind == TokenKind::Close) {
        for (int k = 0; static_cast<long>(m) * k + t.index < T; ++k)
            r.pairs.insert({m * k + t.index, k});
    } else {
        throw std::invalid_argument("bracket_relation: not a bracket");
    }
    return r;
}

IndexRelation omega_model_eval(ExprRef e, int m, int T) {
    if (T < m) throw std::invalid_argument("omega_model_eval: need T >= m");
    switch (e->kind) {
        case Expr::Kind::Zero:
            return IndexRelation::empty(T);
        case Expr::Kind::One:
            return IndexRelation::identity(T);
        case Expr::Kind::Letter:
            throw std::invalid_argument("omega_model_eval: letters have no interpretation");
        case Expr::Kind::Open:
        case Expr::Kind::Close:
            if (e->index >= m)
                throw std::invalid_argument("omega_model_eval: bracket index out of range");
            return bracket_relation(e->token(), m, T);
        case Expr::Kind::Sum: {
            IndexRelation r = IndexRelation::empty(T);
            for (ExprRef k : e->kids) r = r.unite(omega_model_eval(k, m, T));
            return r;
        }
        case Expr::Kind::Prod: {
            IndexRelation r = IndexRelation::identity(T);
            for (ExprRef k : e->kids) r = r.compose(omega_model_eval(k, m, T));
            return r;
        }
        case Expr::Kind::Star:
            return omega_model_eval(e->kids[0], m, T).star();
    }
    return IndexRelation::empty(T);
}

std::set<int> overflow_free_domain(int m, int T) {
    std::set<int> d;
    for (int k = 0; static_cast<long>(m) * k + m - 1 < T; ++k) d.insert(k);
    return d;
}

Matrix<IndexRelation> hat_map(const IndexRelation& a, int m) {
    const int T = a.dim;
    Matrix<IndexRelation> r(m, m, IndexRelation::empty(T));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            r.at(i, j) = bracket_relation(Token::open(i), m, T)
                             .compose(a)
                             .compose(bracket_relation(Token::close(j), m, T));
    return r;
}

IndexRelation check_map(const Matrix<IndexRelation>& A, int m) {
    if (A.rows() != static_cast<std::size_t>(m) || A.cols() != static_cast<std::size_t>(m))
        throw std::invalid_argument("check_map: shape mismatch");
    const int T = A.at(0, 0).dim;
    IndexRelation r = IndexRelation::empty(T);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            r = r.unite(bracket_relation(Token::close(i), m, T)
                            .compose(A.at(i, j))
                            .compose(bracket_relation(Token::open(j), m, T)));
    return r;
}

ExprRef completeness_sum(int m) {
    std::vector<ExprRef> terms;
    for (int i = 0; i < m; ++i) terms.push_back(ex_prod2(ex_close(i), ex_open(i)));
    return ex_sum(std::move(terms));
}

namespace {

bool pi_only_children(const std::vector<ExprRef>& kids);

bool pi_only(ExprRef e) {
    switch (e->kind) {
        case Expr::Kind::Open:
        case Expr::Kind::Close:
            return e->index != 0;
        case Expr::Kind::Sum:
        case Expr::Kind::Star:
            for (ExprRef k : e->kids)
                if (!pi_only(k)) return false;
            return true;
        case Expr::Kind::Prod:
            return pi_only_children(e->kids);
        default:
            return true;
    }
}

bool pi_only_children(const std::vector<ExprRef>& kids) {
    for (std::size_t i = 0; i < kids.size(); ++i) {
        ExprRef k = kids[i];
        if (k->kind == Expr::Kind::Close && k->index == 0) {
            if (i + 1 < kids.size() && kids[i + 1]->kind == Expr::Kind::Open &&
                kids[i + 1]->index == 0)
                continue;
            return false;
        }
        if (k->kind == Expr::Kind::Open && k->index == 0) {
            if (i > 0 && kids[i - 1]->kind == Expr::Kind::Close && kids[i - 1]->index == 0)
                continue;
            return false;
        }
        if (!pi_only(k)) return false;
    }
    return true;
}

}  // namespace

bool pi_side_condition(ExprRef phi) {
    if (phi->kind == Expr::Kind::Prod) return pi_only_children(phi->kids);
    return pi_only(phi);
}

RelCompVerdict relative_completeness_check(ExprRef phi, int m, int bound, char slot) {
    if (!pi_side_condition(phi))
        throw std::invalid_argument(
            "relative_completeness_check: p0/q0 must occur only inside pi");
    ExprRef with_e = substitute_letter(phi, slot, completeness_sum(m));
    ExprRef with_1 = substitute_letter(phi, slot, ex_one());
    ExprRef lhs = ex_prod({ex_open(0), with_e, ex_close(0)});
    ExprRef rhs = ex_prod({ex_open(0), with_1, ex_close(0)});
    EqVerdict eq = equal_bounded(lhs, rhs, bound);
    RelCompVerdict v;
    v.equal = eq.equal;
    v.bound = bound;
    v.witness = eq.witness;
    v.centralizer_ok = centralizer_check_bounded(rhs, bound);
    return v;
}

}  // namespace tka
