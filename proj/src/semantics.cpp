#include "tka/semantics.hpp"

#include <algorithm>
#include <deque>
#include <mutex>
#include <unordered_map>
#include <unordered_set>

#include "tka/rewrite.hpp"

namespace tka {

namespace {

std::uint32_t token_key(const Token& t) {
    switch (t.kind) {
        case TokenKind::Letter: return 0x100u | static_cast<unsigned char>(t.letter);
        case TokenKind::Open: return 0x10000u | static_cast<std::uint32_t>(t.index);
        case TokenKind::Close: return 0x20000u | static_cast<std::uint32_t>(t.index);
        case TokenKind::Zero: return 0x30000u;
    }
    return 0;
}

struct PdKey {
    std::uint64_t node;
    std::uint32_t tok;
    bool operator==(const PdKey&) const = default;
};
struct PdKeyHash {
    std::size_t operator()(const PdKey& k) const {
        return k.node * 0x9e3779b97f4a7c15ULL ^ k.tok;
    }
};

struct Memo {
    std::mutex mu;
    std::unordered_map<std::uint64_t, std::vector<Token>> alphabet;
    std::unordered_map<PdKey, std::vector<ExprRef>, PdKeyHash> pd;
};

Memo& memo() {
    static Memo* m = new Memo();
    return *m;
}

void collect_alphabet(ExprRef e, std::vector<Token>& out, std::unordered_set<std::uint64_t>& seen) {
    if (!seen.insert(e->id).second) return;
    if (e->is_token()) {
        Token t = e->token();
        if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
        return;
    }
    for (ExprRef k : e->kids) collect_alphabet(k, out, seen);
}

std::vector<ExprRef> pd_uncached(ExprRef e, const Token& t) {
    switch (e->kind) {
        case Expr::Kind::Zero:
        case Expr::Kind::One:
            return {};
        case Expr::Kind::Letter:
        case Expr::Kind::Open:
        case Expr::Kind::Close:
            if (e->token() == t) return {ex_one()};
            return {};
        case Expr::Kind::Sum: {
            std::vector<ExprRef> out;
            std::unordered_set<ExprRef> seen;
            for (ExprRef k : e->kids)
                for (ExprRef d : partial_derivatives(k, t))
                    if (seen.insert(d).second) out.push_back(d);
            return out;
        }
        case Expr::Kind::Prod: {
            std::vector<ExprRef> out;
            std::unordered_set<ExprRef> seen;
            // pd(t, x1...xn) = sum over nullable prefixes of pd(t, xi) . rest
            for (std::size_t i = 0; i < e->kids.size(); ++i) {
                for (ExprRef d : partial_derivatives(e->kids[i], t)) {
                    std::vector<ExprRef> rest{d};
                    rest.insert(rest.end(), e->kids.begin() + i + 1, e->kids.end());
                    ExprRef term = ex_prod(std::move(rest));
                    if (seen.insert(term).second) out.push_back(term);
                }
                if (!e->kids[i]->nullable) break;
            }
            return out;
        }
        case Expr::Kind::Star: {
            std::vector<ExprRef> out;
            std::unordered_set<ExprRef> seen;
            for (ExprRef d : partial_derivatives(e->kids[0], t)) {
                ExprRef term = ex_prod2(d, e);
                if (seen.insert(term).second) out.push_back(term);
            }
            return out;
        }
    }
    return {};
}

}  // namespace

std::vector<Token> expr_alphabet(ExprRef e) {
    {
        std::lock_guard<std::mutex> lock(memo().mu);
        auto it = memo().alphabet.find(e->id);
        if (it != memo().alphabet.end()) return it->second;
    }
    std::vector<Token> out;
    std::unordered_set<std::uint64_t> seen;
    collect_alphabet(e, out, seen);
    out.erase(std::remove(out.begin(), out.end(), Token::zero()), out.end());
    std::lock_guard<std::mutex> lock(memo().mu);
    memo().alphabet.emplace(e->id, out);
    return out;
}

std::vector<ExprRef> partial_derivatives(ExprRef e, const Token& t) {
    PdKey key{e->id, token_key(t)};
    {
        std::lock_guard<std::mutex> lock(memo().mu);
        auto it = memo().pd.find(key);
        if (it != memo().pd.end()) return it->second;
    }
    std::vector<ExprRef> out = pd_uncached(e, t);
    std::lock_guard<std::mutex> lock(memo().mu);
    memo().pd.emplace(key, out);
    return out;
}

// ---------------------------------------------------------------------------
// Bounded enumeration

namespace {

std::string pack_pair(std::uint64_t state, const NormalFormWord& nf) {
    std::string s;
    s.reserve(10 + nf.length());
    for (int i = 0; i < 8; ++i) s.push_back(static_cast<char>((state >> (8 * i)) & 0xff));
    s += nf.pack();
    return s;
}

}  // namespace

NfImage enumerate_nf_image(ExprRef e, int bound, const EnumLimits& limits) {
    if (bound < 0) throw std::invalid_argument("enumerate_nf_image: bound must be >= 0");
    NfImage image;
    image.bound = bound;

    std::vector<std::pair<ExprRef, NormalFormWord>> frontier;
    std::unordered_set<std::string> visited;
    auto add = [&](std::vector<std::pair<ExprRef, NormalFormWord>>& dst, ExprRef state,
                   const NormalFormWord& nf) {
        if (nf.zero) return;
        if (limits.max_letters >= 0 &&
            nf.letters.size() > static_cast<std::size_t>(limits.max_letters))
            return;
        std::string key = pack_pair(state->id, nf);
        if (!visited.insert(std::move(key)).second) return;
        if (visited.size() > limits.max_items)
            throw EnumerationOverflow("enumerate_nf_image: item cap exceeded");
        dst.emplace_back(state, nf);
        if (state->nullable) image.words.insert(nf);
    };

    add(frontier, e, NormalFormWord::unit());
    for (int step = 0; step < bound && !frontier.empty(); ++step) {
        std::vector<std::pair<ExprRef, NormalFormWord>> next;
        for (const auto& [state, nf] : frontier) {
            for (const Token& t : expr_alphabet(state)) {
                NormalFormWord nf2 = nf_mul_token(nf, t);
                if (nf2.zero) continue;
                for (ExprRef d : partial_derivatives(state, t)) add(next, d, nf2);
            }
        }
        frontier = std::move(next);
    }
    return image;
}

// ---------------------------------------------------------------------------
// Exact membership search

namespace {

struct SearchConfig {
    ExprRef state;
    std::size_t closes_done;
    std::size_t letters_done;
    std::vector<int> stack;
};

std::string pack_config(const SearchConfig& c) {
    std::string s;
    s.reserve(12 + c.stack.size());
    std::uint64_t state = c.state->id;
    for (int i = 0; i < 8; ++i) s.push_back(static_cast<char>((state >> (8 * i)) & 0xff));
    s.push_back(static_cast<char>(c.closes_done));
    s.push_back(static_cast<char>(c.letters_done));
    for (int v : c.stack) s.push_back(static_cast<char>(v));
    return s;
}

}  // namespace

MemberResult member_search(ExprRef e, const NormalFormWord& target, const SearchBudget& budget) {
    if (target.zero) return MemberResult::Absent;  // zero is not a member of any image
    const std::size_t total = target.length();
    const std::size_t depth_cap =
        static_cast<std::size_t>(budget.stack_factor) * (total + 1) + target.opens.size() + 4;

    bool tainted = false;
    std::size_t nodes = 0;
    std::unordered_set<std::string> visited;
    std::deque<SearchConfig> queue;

    auto push = [&](SearchConfig c) {
        if (c.stack.size() > depth_cap) {
            tainted = true;
            return;
        }
        std::string key = pack_config(c);
        if (!visited.insert(std::move(key)).second) return;
        queue.push_back(std::move(c));
    };

    push(SearchConfig{e, 0, 0, {}});
    while (!queue.empty()) {
        if (++nodes > budget.node_cap) return MemberResult::Unknown;
        SearchConfig c = std::move(queue.front());
        queue.pop_front();

        if (c.state->nullable && c.closes_done == target.closes.size() &&
            c.letters_done == target.letters.size() &&
            c.stack.size() == target.opens.size() &&
            std::equal(c.stack.begin(), c.stack.end(), target.opens.begin()))
            return MemberResult::Found;

        for (const Token& t : expr_alphabet(c.state)) {
            SearchConfig n = c;
            switch (t.kind) {
                case TokenKind::Letter:
                    if (n.letters_done >= target.letters.size() ||
                        target.letters[n.letters_done] != t.letter)
                        continue;
                    ++n.letters_done;
                    break;
                case TokenKind::Open:
                    n.stack.push_back(t.index);
                    break;
                case TokenKind::Close:
                    if (!n.stack.empty()) {
                        if (n.stack.back() != t.index) continue;
                        n.stack.pop_back();
                    } else {
                        // falls through into the Q-prefix, in arrival order
                        if (n.closes_done >= target.closes.size() ||
                            target.closes[n.closes_done] != t.index)
                            continue;
                        ++n.closes_done;
                    }
                    break;
                case TokenKind::Zero:
                    continue;
            }
            for (ExprRef d : partial_derivatives(c.state, t)) {
                SearchConfig nn = n;
                nn.state = d;
                push(std::move(nn));
            }
        }
    }
    return tainted ? MemberResult::Unknown : MemberResult::Absent;
}

// ---------------------------------------------------------------------------
// Bounded equality

EqVerdict equal_bounded(ExprRef a, ExprRef b, int bound, const EnumLimits& limits,
                        const SearchBudget& budget) {
    NfImage ia = enumerate_nf_image(a, bound, limits);
    NfImage ib = enumerate_nf_image(b, bound, limits);
    std::vector<std::pair<NormalFormWord, ExprRef>> candidates;  // witness, absent side
    for (const NormalFormWord& w : ia.words)
        if (!ib.contains(w)) candidates.emplace_back(w, b);
    for (const NormalFormWord& w : ib.words)
        if (!ia.contains(w)) candidates.emplace_back(w, a);
    std::sort(candidates.begin(), candidates.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    const std::size_t max_len = static_cast<std::size_t>(bound) / 2;
    for (const auto& [w, side] : candidates) {
        if (w.length() > max_len) continue;
        if (member_search(side, w, budget) == MemberResult::Absent)
            return EqVerdict{false, bound, w};
    }
    return EqVerdict{true, bound, std::nullopt};
}

bool centralizer_check_bounded(ExprRef e, int bound, const EnumLimits& limits) {
    NfImage image = enumerate_nf_image(e, bound, limits);
    for (const NormalFormWord& w : image.words)
        if (!w.bracket_free()) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Scoped shape check and recognition

namespace {

bool valid_scoped_children(const std::vector<ExprRef>& kids);

// r may use the pair-0 brackets only inside pi = q0 p0, or inside recoded
// groups p0 p1^j (openers) and q1^j q0 (closers).
bool valid_inner(ExprRef e) {
    switch (e->kind) {
        case Expr::Kind::Open:
        case Expr::Kind::Close:
            return e->index != 0;
        case Expr::Kind::Sum:
        case Expr::Kind::Star:
            for (ExprRef k : e->kids)
                if (!valid_inner(k)) return false;
            return true;
        case Expr::Kind::Prod:
            return valid_scoped_children(e->kids);
        default:
            return true;
    }
}

bool is_open1(ExprRef e) { return e->kind == Expr::Kind::Open && e->index == 1; }
bool is_close1(ExprRef e) { return e->kind == Expr::Kind::Close && e->index == 1; }

bool valid_scoped_children(const std::vector<ExprRef>& kids) {
    for (std::size_t i = 0; i < kids.size(); ++i) {
        ExprRef k = kids[i];
        if (k->kind == Expr::Kind::Open && k->index == 0) {
            // pi second half, or start of a recoded opener group
            if (i > 0 && kids[i - 1]->kind == Expr::Kind::Close && kids[i - 1]->index == 0)
                continue;
            if (i + 1 < kids.size() && is_open1(kids[i + 1])) continue;
            return false;
        }
        if (k->kind == Expr::Kind::Close && k->index == 0) {
            // pi first half, or end of a recoded closer group
            if (i + 1 < kids.size() && kids[i + 1]->kind == Expr::Kind::Open &&
                kids[i + 1]->index == 0)
                continue;
            if (i > 0 && is_close1(kids[i - 1])) continue;
            return false;
        }
        if (!valid_inner(k)) return false;
    }
    return true;
}

}  // namespace

bool is_scoped_shape(ExprRef e) {
    if (e->kind != Expr::Kind::Prod || e->kids.size() < 2) return false;
    ExprRef first = e->kids.front();
    ExprRef last = e->kids.back();
    if (first->kind != Expr::Kind::Open || first->index != 0) return false;
    if (last->kind != Expr::Kind::Close || last->index != 0) return false;
    std::vector<ExprRef> inner(e->kids.begin() + 1, e->kids.end() - 1);
    return valid_scoped_children(inner);
}

RecognizeResult stack_recognize(ExprRef e, const std::string& word, const SearchBudget& budget) {
    if (!is_scoped_shape(e))
        throw std::invalid_argument("stack_recognize: expression is not of shape p0 r q0");
    NormalFormWord target;
    target.letters.assign(word.begin(), word.end());
    switch (member_search(e, target, budget)) {
        case MemberResult::Found: return RecognizeResult::Accepted;
        case MemberResult::Absent: return RecognizeResult::Rejected;
        case MemberResult::Unknown: return RecognizeResult::BudgetExceeded;
    }
    return RecognizeResult::Rejected;
}

}  // namespace tka
