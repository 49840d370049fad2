#include "tka/cfg.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <sstream>
#include <unordered_map>

#include "tka/autnf.hpp"
#include "tka/rewrite.hpp"
#include "tka/semantics.hpp"

namespace tka::cfg {

std::set<char> Grammar::terminals() const {
    std::set<char> out;
    for (const auto& p : prods)
        for (const auto& s : p.rhs)
            if (s.terminal) out.insert(s.ch);
    return out;
}

void Grammar::validate() const {
    const int n = static_cast<int>(nt_names.size());
    if (start < 0 || start >= n) throw std::invalid_argument("grammar: bad start symbol");
    for (const auto& p : prods) {
        if (p.head < 0 || p.head >= n) throw std::invalid_argument("grammar: bad head");
        for (const auto& s : p.rhs)
            if (!s.terminal && (s.nt < 0 || s.nt >= n))
                throw std::invalid_argument("grammar: bad symbol");
    }
}

Grammar parse_grammar(const std::string& text) {
    Grammar g;
    std::istringstream in(text);
    std::string line;
    auto nt_id = [&](const std::string& name) {
        int id = g.find_nt(name);
        return id >= 0 ? id : g.add_nt(name);
    };
    bool have_line = false;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::vector<std::string> toks;
        std::string t;
        while (ls >> t) toks.push_back(t);
        if (toks.empty()) continue;
        if (toks.size() < 2 || toks[1] != "->")
            throw std::runtime_error("grammar line must be 'Head -> alt | alt': " + line);
        if (!(toks[0][0] >= 'A' && toks[0][0] <= 'Z'))
            throw std::runtime_error("nonterminal must start uppercase: " + toks[0]);
        int head = nt_id(toks[0]);
        if (!have_line) {
            g.start = head;
            have_line = true;
        }
        std::vector<Sym> rhs;
        bool rhs_open = false;
        auto flush = [&]() {
            g.add_prod(head, rhs);
            rhs.clear();
            rhs_open = false;
        };
        for (std::size_t i = 2; i < toks.size(); ++i) {
            const std::string& tok = toks[i];
            if (tok == "|") {
                flush();
                continue;
            }
            rhs_open = true;
            if (tok == ";") continue;  // epsilon marker
            if (tok[0] >= 'A' && tok[0] <= 'Z') {
                rhs.push_back(Sym::n(nt_id(tok)));
            } else if (tok.size() == 1) {
                rhs.push_back(Sym::t(tok[0]));
            } else {
                throw std::runtime_error("bad grammar token: " + tok);
            }
        }
        if (rhs_open || toks.size() == 2) flush();
    }
    if (!have_line) throw std::runtime_error("empty grammar");
    g.validate();
    return g;
}

std::string print_grammar(const Grammar& g) {
    // group productions per head, start symbol first
    std::vector<int> order;
    order.push_back(g.start);
    for (int i = 0; i < static_cast<int>(g.nt_names.size()); ++i)
        if (i != g.start) order.push_back(i);
    std::string out;
    for (int head : order) {
        std::vector<std::string> alts;
        for (const auto& p : g.prods) {
            if (p.head != head) continue;
            if (p.rhs.empty()) {
                alts.push_back(";");
                continue;
            }
            std::string alt;
            for (const auto& s : p.rhs) {
                if (!alt.empty()) alt += ' ';
                alt += s.terminal ? std::string(1, s.ch) : g.nt_names[s.nt];
            }
            alts.push_back(alt);
        }
        if (alts.empty()) continue;
        out += g.nt_names[head] + " ->";
        for (std::size_t i = 0; i < alts.size(); ++i) {
            out += (i ? " | " : " ") + alts[i];
        }
        out += '\n';
    }
    return out;
}

// ---------------------------------------------------------------------------
// CYK on Chomsky normal form

namespace {

struct Cnf {
    int num_nt = 0;
    int start = 0;
    bool eps_in_lang = false;
    std::vector<std::array<int, 3>> binary;   // a -> b c
    std::vector<std::pair<int, char>> lexical;  // a -> ch
};

Cnf to_cnf(const Grammar& g) {
    // fresh start
    int n = static_cast<int>(g.nt_names.size());
    int start = n;
    ++n;
    std::vector<Production> prods = g.prods;
    prods.push_back({start, {Sym::n(g.start)}});

    // nullable nonterminals
    std::vector<char> nullable(n, 0);
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& p : prods) {
            if (nullable[p.head]) continue;
            bool all = true;
            for (const auto& s : p.rhs)
                if (s.terminal || !nullable[s.nt]) {
                    all = false;
                    break;
                }
            if (all) {
                nullable[p.head] = 1;
                changed = true;
            }
        }
    }

    // epsilon elimination: emit all variants with nullable occurrences dropped
    std::vector<Production> no_eps;
    for (const auto& p : prods) {
        std::vector<int> optional;
        for (std::size_t i = 0; i < p.rhs.size(); ++i)
            if (!p.rhs[i].terminal && nullable[p.rhs[i].nt])
                optional.push_back(static_cast<int>(i));
        const std::size_t subsets = std::size_t{1} << optional.size();
        std::set<std::vector<Sym>> seen;
        for (std::size_t mask = 0; mask < subsets; ++mask) {
            std::vector<Sym> rhs;
            for (std::size_t i = 0; i < p.rhs.size(); ++i) {
                auto it = std::find(optional.begin(), optional.end(), static_cast<int>(i));
                if (it != optional.end()) {
                    std::size_t bit = static_cast<std::size_t>(it - optional.begin());
                    if (mask & (std::size_t{1} << bit)) continue;  // dropped
                }
                rhs.push_back(p.rhs[i]);
            }
            if (rhs.empty()) continue;
            if (seen.insert(rhs).second) no_eps.push_back({p.head, rhs});
        }
    }

    // unit closure
    std::vector<std::vector<char>> unit(n, std::vector<char>(n, 0));
    for (int i = 0; i < n; ++i) unit[i][i] = 1;
    changed = true;
    while (changed) {
        changed = false;
        for (const auto& p : no_eps) {
            if (p.rhs.size() != 1 || p.rhs[0].terminal) continue;
            for (int a = 0; a < n; ++a)
                if (unit[a][p.head] && !unit[a][p.rhs[0].nt]) {
                    unit[a][p.rhs[0].nt] = 1;
                    changed = true;
                }
        }
    }

    Cnf cnf;
    cnf.start = start;
    cnf.eps_in_lang = nullable[g.start] != 0;

    // replace terminals in long rules and binarize, after expanding units
    std::map<char, int> term_nt;
    auto term_id = [&](char c) {
        auto it = term_nt.find(c);
        if (it != term_nt.end()) return it->second;
        int id = n++;
        term_nt.emplace(c, id);
        cnf.lexical.push_back({id, c});
        return id;
    };
    auto emit = [&](int head, std::vector<int> syms) {
        while (syms.size() > 2) {
            int fresh = n++;
            int last = syms.back();
            syms.pop_back();
            int second = syms.back();
            syms.pop_back();
            cnf.binary.push_back({fresh, second, last});
            syms.push_back(fresh);
        }
        if (syms.size() == 2) cnf.binary.push_back({head, syms[0], syms[1]});
    };
    for (int a = 0; a < static_cast<int>(unit.size()); ++a) {
        for (const auto& p : no_eps) {
            if (!unit[a][p.head]) continue;
            if (p.rhs.size() == 1) {
                if (p.rhs[0].terminal) cnf.lexical.push_back({a, p.rhs[0].ch});
                continue;  // unit productions are absorbed by the closure
            }
            std::vector<int> syms;
            for (const auto& s : p.rhs) syms.push_back(s.terminal ? term_id(s.ch) : s.nt);
            emit(a, syms);
        }
    }
    cnf.num_nt = n;
    return cnf;
}

}  // namespace

bool cyk_member(const Grammar& g, const std::string& word) {
    g.validate();
    Cnf cnf = to_cnf(g);
    const int n = static_cast<int>(word.size());
    if (n == 0) return cnf.eps_in_lang;
    // table[i][j] = set of nonterminals deriving word[i..i+j]
    std::vector<std::vector<std::vector<char>>> table(
        n, std::vector<std::vector<char>>(n + 1, std::vector<char>(cnf.num_nt, 0)));
    for (int i = 0; i < n; ++i)
        for (const auto& [a, c] : cnf.lexical)
            if (c == word[i]) table[i][1][a] = 1;
    for (int len = 2; len <= n; ++len)
        for (int i = 0; i + len <= n; ++i)
            for (int split = 1; split < len; ++split)
                for (const auto& [a, b, c] : cnf.binary)
                    if (!table[i][len][a] && table[i][split][b] && table[i + split][len - split][c])
                        table[i][len][a] = 1;
    return table[0][n][cnf.start] != 0;
}

// ---------------------------------------------------------------------------
// Bounded language enumeration

namespace {

std::set<std::string> combine(const std::set<std::string>& a, const std::set<std::string>& b,
                              int maxlen) {
    std::set<std::string> out;
    for (const auto& u : a)
        for (const auto& v : b)
            if (u.size() + v.size() <= static_cast<std::size_t>(maxlen)) out.insert(u + v);
    return out;
}

}  // namespace

std::set<std::string> cfg_enumerate_from(const Grammar& g, int start_nt, int maxlen,
                                         std::size_t cap) {
    g.validate();
    if (maxlen < 0) throw std::invalid_argument("cfg_enumerate: maxlen must be >= 0");
    std::vector<std::set<std::string>> yields(g.nt_names.size());
    std::size_t total = 0;
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& p : g.prods) {
            std::set<std::string> acc{""};
            for (const auto& s : p.rhs) {
                if (s.terminal) {
                    std::set<std::string> single{std::string(1, s.ch)};
                    acc = combine(acc, single, maxlen);
                } else {
                    acc = combine(acc, yields[s.nt], maxlen);
                }
                if (acc.empty()) break;
            }
            for (const auto& w : acc)
                if (yields[p.head].insert(w).second) {
                    changed = true;
                    if (++total > cap) throw GenerationOverflow("cfg_enumerate: cap exceeded");
                }
        }
    }
    return yields[start_nt];
}

std::set<std::string> cfg_enumerate(const Grammar& g, int maxlen, std::size_t cap) {
    return cfg_enumerate_from(g, g.start, maxlen, cap);
}

// ---------------------------------------------------------------------------
// Chomsky-Schuetzenberger bridge

namespace {

// Symbols of the trace machine: nonterminals first, then sorted terminals.
struct TraceAlphabet {
    int num_nt;
    std::vector<char> terms;
    int count() const { return num_nt + static_cast<int>(terms.size()); }
    int of_nt(int nt) const { return nt; }
    int of_term(char c) const {
        auto it = std::find(terms.begin(), terms.end(), c);
        return num_nt + static_cast<int>(it - terms.begin());
    }
};

// Bracket pair of trace symbol s: pair 1 raw when only one symbol exists,
// otherwise the two-pair recoding p0 p1^{s+1} / q1^{s+1} q0.
ExprRef trace_open(const TraceAlphabet& a, int s) {
    if (a.count() == 1) return ex_open(1);
    std::vector<ExprRef> kids{ex_open(0)};
    for (int k = 0; k <= s; ++k) kids.push_back(ex_open(1));
    return ex_prod(std::move(kids));
}

ExprRef trace_close(const TraceAlphabet& a, int s) {
    if (a.count() == 1) return ex_close(1);
    std::vector<ExprRef> kids;
    for (int k = 0; k <= s; ++k) kids.push_back(ex_close(1));
    kids.push_back(ex_close(0));
    return ex_prod(std::move(kids));
}

int trace_open_len(const TraceAlphabet& a, int s) { return a.count() == 1 ? 1 : s + 2; }
int trace_close_len(const TraceAlphabet& a, int s) { return a.count() == 1 ? 1 : s + 2; }

}  // namespace

ExprRef cfg_to_expr(const Grammar& g) {
    g.validate();
    TraceAlphabet alpha;
    alpha.num_nt = static_cast<int>(g.nt_names.size());
    for (char c : g.terminals()) alpha.terms.push_back(c);

    std::vector<ExprRef> chunks;
    // expansion moves: pop the head, push the right-hand side reversed
    for (const auto& p : g.prods) {
        std::vector<ExprRef> chunk{trace_close(alpha, alpha.of_nt(p.head))};
        for (auto it = p.rhs.rbegin(); it != p.rhs.rend(); ++it) {
            int s = it->terminal ? alpha.of_term(it->ch) : alpha.of_nt(it->nt);
            chunk.push_back(trace_open(alpha, s));
        }
        chunks.push_back(ex_prod(std::move(chunk)));
    }
    // consume moves: pop a terminal, read it
    for (char c : alpha.terms)
        chunks.push_back(ex_prod2(trace_close(alpha, alpha.of_term(c)), ex_letter(c)));

    ExprRef body = ex_prod2(trace_open(alpha, alpha.of_nt(g.start)), ex_star(ex_sum(chunks)));
    return ex_prod({ex_open(0), body, ex_close(0)});
}

int trace_source_bound(const Grammar& g, int maxlen) {
    g.validate();
    TraceAlphabet alpha;
    alpha.num_nt = static_cast<int>(g.nt_names.size());
    for (char c : g.terminals()) alpha.terms.push_back(c);

    // min trace cost per derivable word, as a fixpoint per nonterminal
    using CostMap = std::map<std::string, long>;
    std::vector<CostMap> cost(g.nt_names.size());
    auto term_cost = [&](char c) {
        return static_cast<long>(trace_close_len(alpha, alpha.of_term(c))) + 1 +
               trace_open_len(alpha, alpha.of_term(c));
    };
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& p : g.prods) {
            long base = trace_close_len(alpha, alpha.of_nt(p.head));
            for (const auto& s : p.rhs)
                if (!s.terminal) base += trace_open_len(alpha, alpha.of_nt(s.nt));
            CostMap acc{{"", base}};
            for (const auto& s : p.rhs) {
                CostMap next;
                if (s.terminal) {
                    for (const auto& [w, cst] : acc) {
                        if (w.size() + 1 > static_cast<std::size_t>(maxlen)) continue;
                        std::string w2 = w + s.ch;
                        long c2 = cst + term_cost(s.ch);
                        auto it = next.find(w2);
                        if (it == next.end() || it->second > c2) next[w2] = c2;
                    }
                } else {
                    for (const auto& [w, cst] : acc)
                        for (const auto& [w2, c2] : cost[s.nt]) {
                            if (w.size() + w2.size() > static_cast<std::size_t>(maxlen)) continue;
                            std::string w3 = w + w2;
                            long c3 = cst + c2;
                            auto it = next.find(w3);
                            if (it == next.end() || it->second > c3) next[w3] = c3;
                        }
                }
                acc = std::move(next);
                if (acc.empty()) break;
            }
            for (const auto& [w, cst] : acc) {
                auto it = cost[p.head].find(w);
                if (it == cost[p.head].end() || it->second > cst) {
                    cost[p.head][w] = cst;
                    changed = true;
                }
            }
        }
    }
    long worst = 0;
    for (const auto& [w, cst] : cost[g.start]) worst = std::max(worst, cst);
    return static_cast<int>(2 + trace_open_len(alpha, alpha.of_nt(g.start)) + worst);
}

// ---------------------------------------------------------------------------
// expr_to_cfg

namespace {

// Decodes recoded bracket groups p0 p1^j / q1^j q0 back to single pair-j
// brackets and leaves pi = q0 p0 in place, recursing below sums and stars.
ExprRef decode_groups(ExprRef e) {
    switch (e->kind) {
        case Expr::Kind::Sum: {
            std::vector<ExprRef> kids;
            for (ExprRef k : e->kids) kids.push_back(decode_groups(k));
            return ex_sum(std::move(kids));
        }
        case Expr::Kind::Star:
            return ex_star(decode_groups(e->kids[0]));
        case Expr::Kind::Prod: {
            std::vector<ExprRef> kids;
            for (ExprRef k : e->kids) kids.push_back(decode_groups(k));
            // flatten once more, then scan for groups
            ExprRef flat = ex_prod(std::move(kids));
            if (flat->kind != Expr::Kind::Prod) return flat;
            const auto& ks = flat->kids;
            std::vector<ExprRef> out;
            for (std::size_t i = 0; i < ks.size(); ++i) {
                if (ks[i]->kind == Expr::Kind::Close && ks[i]->index == 1) {
                    std::size_t j = i;
                    while (j < ks.size() && ks[j]->kind == Expr::Kind::Close && ks[j]->index == 1)
                        ++j;
                    if (j < ks.size() && ks[j]->kind == Expr::Kind::Close && ks[j]->index == 0) {
                        out.push_back(ex_close(static_cast<int>(j - i)));
                        i = j;
                        continue;
                    }
                    out.push_back(ks[i]);
                    continue;
                }
                if (ks[i]->kind == Expr::Kind::Open && ks[i]->index == 0 && i + 1 < ks.size() &&
                    ks[i + 1]->kind == Expr::Kind::Open && ks[i + 1]->index == 1) {
                    std::size_t j = i + 1;
                    while (j < ks.size() && ks[j]->kind == Expr::Kind::Open && ks[j]->index == 1)
                        ++j;
                    out.push_back(ex_open(static_cast<int>(j - i - 1)));
                    i = j - 1;
                    continue;
                }
                out.push_back(ks[i]);
            }
            return ex_prod(std::move(out));
        }
        default:
            return e;
    }
}

}  // namespace

Grammar expr_to_cfg(ExprRef e) {
    if (!is_scoped_shape(e))
        throw std::invalid_argument("expr_to_cfg: expression is not of shape p0 r q0");
    std::vector<ExprRef> inner(e->kids.begin() + 1, e->kids.end() - 1);
    ExprRef r = decode_groups(ex_prod(std::move(inner)));
    SplitAutomaton aut = compile_expr(r, /*fuse_pi=*/true);
    MatrixNormalForm nf = project_centralizer(aut);

    const std::size_t n = nf.size();
    Grammar g = nf.N.grammar;
    // M = N (W N)* solves M = N + N W M
    std::vector<std::vector<int>> mnt(n, std::vector<int>(n, -1));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            mnt[i][j] = g.add_nt("M_" + std::to_string(i + 1) + "_" + std::to_string(j + 1));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (nf.N.nt[i][j] >= 0) g.add_prod(mnt[i][j], {Sym::n(nf.N.nt[i][j])});
            for (std::size_t k = 0; k < n; ++k) {
                if (nf.N.nt[i][k] < 0) continue;
                for (std::size_t l = 0; l < n; ++l)
                    if (nf.W.at(k, l)->kind == Expr::Kind::One)
                        g.add_prod(mnt[i][j], {Sym::n(nf.N.nt[i][k]), Sym::n(mnt[l][j])});
            }
        }
    int s0 = g.add_nt("S0");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (nf.S[i] && nf.F[j]) g.add_prod(s0, {Sym::n(mnt[i][j])});
    g.start = s0;

    // cleanup: drop useless symbols, compress trivial unit chains
    // productive
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
    std::vector<Production> kept;
    for (const auto& p : g.prods) {
        bool ok = productive[p.head];
        for (const auto& s : p.rhs)
            if (!s.terminal && !productive[s.nt]) ok = false;
        if (ok) kept.push_back(p);
    }
    g.prods = std::move(kept);
    // reachable
    std::vector<char> reach(g.nt_names.size(), 0);
    if (productive[g.start]) reach[g.start] = 1;
    changed = true;
    while (changed) {
        changed = false;
        for (const auto& p : g.prods) {
            if (!reach[p.head]) continue;
            for (const auto& s : p.rhs)
                if (!s.terminal && !reach[s.nt]) {
                    reach[s.nt] = 1;
                    changed = true;
                }
        }
    }
    std::vector<Production> kept2;
    for (const auto& p : g.prods)
        if (reach[p.head]) kept2.push_back(p);
    g.prods = std::move(kept2);

    // unit-chain compression: a nonterminal whose only production is a single
    // nonterminal reference is replaced by its target
    changed = true;
    while (changed) {
        changed = false;
        std::vector<int> redirect(g.nt_names.size(), -1);
        std::vector<int> count(g.nt_names.size(), 0);
        std::vector<int> only(g.nt_names.size(), -1);
        for (std::size_t pi = 0; pi < g.prods.size(); ++pi) {
            const auto& p = g.prods[pi];
            ++count[p.head];
            only[p.head] = static_cast<int>(pi);
        }
        for (int a = 0; a < static_cast<int>(g.nt_names.size()); ++a) {
            if (count[a] != 1) continue;
            const auto& p = g.prods[only[a]];
            if (p.rhs.size() == 1 && !p.rhs[0].terminal && p.rhs[0].nt != a)
                redirect[a] = p.rhs[0].nt;
        }
        auto target = [&](int a) {
            std::set<int> seen;
            while (redirect[a] >= 0 && seen.insert(a).second) a = redirect[a];
            return a;
        };
        std::vector<Production> next;
        for (const auto& p : g.prods) {
            if (redirect[p.head] >= 0) {
                changed = true;
                continue;  // the chain link disappears
            }
            Production q = p;
            for (auto& s : q.rhs)
                if (!s.terminal && redirect[s.nt] >= 0) {
                    s.nt = target(s.nt);
                    changed = true;
                }
            next.push_back(std::move(q));
        }
        if (redirect[g.start] >= 0) g.start = target(g.start);
        g.prods = std::move(next);
    }
    // renumber to drop unused names
    std::vector<int> newid(g.nt_names.size(), -1);
    std::vector<std::string> names;
    auto assign = [&](int a) {
        if (newid[a] < 0) {
            newid[a] = static_cast<int>(names.size());
            names.push_back(g.nt_names[a]);
        }
    };
    assign(g.start);
    for (const auto& p : g.prods) {
        assign(p.head);
        for (const auto& s : p.rhs)
            if (!s.terminal) assign(s.nt);
    }
    for (auto& p : g.prods) {
        p.head = newid[p.head];
        for (auto& s : p.rhs)
            if (!s.terminal) s.nt = newid[s.nt];
    }
    g.start = newid[g.start];
    g.nt_names = std::move(names);
    g.validate();
    return g;
}

}  // namespace tka::cfg
