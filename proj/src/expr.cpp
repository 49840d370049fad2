#include "tka/expr.hpp"

#include <algorithm>
#include <deque>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <unordered_set>

#include "tka/rewrite.hpp"

namespace tka {

Token Expr::token() const {
    switch (kind) {
        case Kind::Letter: return Token::make_letter(letter);
        case Kind::Open: return Token::open(index);
        case Kind::Close: return Token::close(index);
        default: throw std::logic_error("Expr::token on non-token node");
    }
}

namespace {

struct NodeKey {
    Expr::Kind kind;
    char letter;
    int index;
    std::vector<ExprRef> kids;
    bool operator==(const NodeKey&) const = default;
};

struct NodeKeyHash {
    std::size_t operator()(const NodeKey& k) const {
        std::size_t h = static_cast<std::size_t>(k.kind) * 1000003u;
        h ^= static_cast<std::size_t>(static_cast<unsigned char>(k.letter)) + 0x9e3779b9 + (h << 6);
        h ^= static_cast<std::size_t>(k.index + 7) * 2654435761u;
        for (ExprRef e : k.kids) h = h * 1099511628211ULL + e->id;
        return h;
    }
};

struct InternPool {
    std::mutex mu;
    std::deque<Expr> nodes;
    std::unordered_map<NodeKey, ExprRef, NodeKeyHash> table;

    ExprRef intern(Expr::Kind kind, char letter, int index, std::vector<ExprRef> kids) {
        NodeKey key{kind, letter, index, kids};
        std::lock_guard<std::mutex> lock(mu);
        auto it = table.find(key);
        if (it != table.end()) return it->second;
        Expr node;
        node.kind = kind;
        node.letter = letter;
        node.index = index;
        node.kids = std::move(kids);
        node.id = nodes.size();
        switch (kind) {
            case Expr::Kind::Zero:
                node.nullable = false;
                break;
            case Expr::Kind::One:
                node.nullable = true;
                break;
            case Expr::Kind::Letter:
            case Expr::Kind::Open:
            case Expr::Kind::Close:
                node.nullable = false;
                break;
            case Expr::Kind::Sum: {
                node.nullable = false;
                for (ExprRef k : node.kids) node.nullable = node.nullable || k->nullable;
                break;
            }
            case Expr::Kind::Prod: {
                node.nullable = true;
                for (ExprRef k : node.kids) node.nullable = node.nullable && k->nullable;
                break;
            }
            case Expr::Kind::Star:
                node.nullable = true;
                break;
        }
        node.max_bracket = (kind == Expr::Kind::Open || kind == Expr::Kind::Close) ? index : -1;
        std::uint64_t size = 1;
        constexpr std::uint64_t kSat = 1ULL << 50;
        for (ExprRef k : node.kids) {
            node.max_bracket = std::max(node.max_bracket, k->max_bracket);
            size = std::min(kSat, size + k->tree_size);
        }
        node.tree_size = size;
        nodes.push_back(std::move(node));
        ExprRef ref = &nodes.back();
        table.emplace(std::move(key), ref);
        return ref;
    }
};

InternPool& pool() {
    static InternPool* p = new InternPool();
    return *p;
}

}  // namespace

ExprRef ex_zero() { return pool().intern(Expr::Kind::Zero, 0, -1, {}); }
ExprRef ex_one() { return pool().intern(Expr::Kind::One, 0, -1, {}); }
ExprRef ex_letter(char c) { return pool().intern(Expr::Kind::Letter, c, -1, {}); }

ExprRef ex_open(int i) {
    if (i < 0) throw std::invalid_argument("bracket index must be >= 0");
    return pool().intern(Expr::Kind::Open, 0, i, {});
}

ExprRef ex_close(int i) {
    if (i < 0) throw std::invalid_argument("bracket index must be >= 0");
    return pool().intern(Expr::Kind::Close, 0, i, {});
}

ExprRef ex_token(const Token& t) {
    switch (t.kind) {
        case TokenKind::Letter: return ex_letter(t.letter);
        case TokenKind::Open: return ex_open(t.index);
        case TokenKind::Close: return ex_close(t.index);
        case TokenKind::Zero: return ex_zero();
    }
    return ex_zero();
}

ExprRef ex_sum(std::vector<ExprRef> kids) {
    std::vector<ExprRef> flat;
    for (ExprRef k : kids) {
        if (k->kind == Expr::Kind::Zero) continue;
        if (k->kind == Expr::Kind::Sum) {
            flat.insert(flat.end(), k->kids.begin(), k->kids.end());
        } else {
            flat.push_back(k);
        }
    }
    // drop structural duplicates, keeping first occurrence order
    std::vector<ExprRef> uniq;
    std::unordered_set<ExprRef> seen;
    for (ExprRef k : flat)
        if (seen.insert(k).second) uniq.push_back(k);
    if (uniq.empty()) return ex_zero();
    if (uniq.size() == 1) return uniq[0];
    return pool().intern(Expr::Kind::Sum, 0, -1, std::move(uniq));
}

ExprRef ex_sum2(ExprRef a, ExprRef b) { return ex_sum({a, b}); }

ExprRef ex_prod(std::vector<ExprRef> kids) {
    std::vector<ExprRef> flat;
    for (ExprRef k : kids) {
        if (k->kind == Expr::Kind::Zero) return ex_zero();
        if (k->kind == Expr::Kind::One) continue;
        if (k->kind == Expr::Kind::Prod) {
            for (ExprRef g : k->kids) {
                if (g->kind == Expr::Kind::Star && !flat.empty() && flat.back() == g) continue;
                flat.push_back(g);
            }
        } else {
            if (k->kind == Expr::Kind::Star && !flat.empty() && flat.back() == k) continue;
            flat.push_back(k);
        }
    }
    if (flat.empty()) return ex_one();
    if (flat.size() == 1) return flat[0];
    return pool().intern(Expr::Kind::Prod, 0, -1, std::move(flat));
}

ExprRef ex_prod2(ExprRef a, ExprRef b) { return ex_prod({a, b}); }

ExprRef ex_star(ExprRef a) {
    if (a->kind == Expr::Kind::Zero || a->kind == Expr::Kind::One) return ex_one();
    if (a->kind == Expr::Kind::Star) return a;
    if (a->kind == Expr::Kind::Sum) {
        // (x + 1)* = x* and (x + y*)* = (x + y)*
        std::vector<ExprRef> kids;
        bool changed = false;
        for (ExprRef k : a->kids) {
            if (k->kind == Expr::Kind::One) {
                changed = true;
            } else if (k->kind == Expr::Kind::Star) {
                kids.push_back(k->kids[0]);
                changed = true;
            } else {
                kids.push_back(k);
            }
        }
        if (changed) return ex_star(ex_sum(std::move(kids)));
    }
    return pool().intern(Expr::Kind::Star, 0, -1, {a});
}

ExprRef ex_word(const Word& w) {
    std::vector<ExprRef> kids;
    kids.reserve(w.size());
    for (const Token& t : w) kids.push_back(ex_token(t));
    return ex_prod(std::move(kids));
}

ExprRef ex_pi() { return ex_prod2(ex_close(0), ex_open(0)); }

// ---------------------------------------------------------------------------
// Parsing

namespace {

class Parser {
  public:
    Parser(const std::string& text, int m) : text_(text), m_(m) {}

    ExprRef parse() {
        ExprRef e = parse_sum();
        skip_ws();
        if (pos_ != text_.size()) throw ParseError("trailing input", pos_);
        return e;
    }

  private:
    const std::string& text_;
    int m_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' ||
                                       text_[pos_] == '\n' || text_[pos_] == '\r'))
            ++pos_;
    }

    bool at_atom_start() {
        skip_ws();
        if (pos_ >= text_.size()) return false;
        char c = text_[pos_];
        return c == '(' || c == '0' || c == '1' || c == '\'' || (c >= 'a' && c <= 'z');
    }

    ExprRef parse_sum() {
        std::vector<ExprRef> terms{parse_term()};
        while (true) {
            skip_ws();
            if (pos_ < text_.size() && text_[pos_] == '+') {
                ++pos_;
                terms.push_back(parse_term());
            } else {
                break;
            }
        }
        return ex_sum(std::move(terms));
    }

    ExprRef parse_term() {
        std::vector<ExprRef> factors{parse_factor()};
        while (true) {
            skip_ws();
            if (pos_ < text_.size() && text_[pos_] == '.') {
                ++pos_;
                factors.push_back(parse_factor());
            } else if (at_atom_start()) {
                factors.push_back(parse_factor());
            } else {
                break;
            }
        }
        return ex_prod(std::move(factors));
    }

    ExprRef parse_factor() {
        ExprRef e = parse_atom();
        while (true) {
            skip_ws();
            if (pos_ < text_.size() && text_[pos_] == '*') {
                ++pos_;
                e = ex_star(e);
            } else {
                break;
            }
        }
        return e;
    }

    int check_index(int i) {
        if (i >= m_)
            throw ParseError("bracket index " + std::to_string(i) + " out of range for m=" +
                                 std::to_string(m_),
                             pos_);
        return i;
    }

    ExprRef parse_atom() {
        skip_ws();
        if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            ExprRef e = parse_sum();
            skip_ws();
            if (pos_ >= text_.size() || text_[pos_] != ')')
                throw ParseError("expected ')'", pos_);
            ++pos_;
            return e;
        }
        if (c == '0') {
            ++pos_;
            return ex_zero();
        }
        if (c == '1') {
            ++pos_;
            return ex_one();
        }
        if (c == '\'') {
            if (pos_ + 2 >= text_.size() || text_[pos_ + 2] != '\'')
                throw ParseError("unterminated quoted letter", pos_);
            char l = text_[pos_ + 1];
            pos_ += 3;
            return ex_letter(l);
        }
        if (c == 'p' || c == 'q') {
            std::size_t start = pos_ + 1;
            std::size_t end = start;
            while (end < text_.size() && text_[end] >= '0' && text_[end] <= '9') ++end;
            if (end > start) {
                int idx = std::stoi(text_.substr(start, end - start));
                check_index(idx);
                pos_ = end;
                return c == 'p' ? ex_open(idx) : ex_close(idx);
            }
            ++pos_;
            return c == 'p' ? ex_open(check_index(1)) : ex_close(check_index(1));
        }
        if (c >= 'a' && c <= 'z') {
            ++pos_;
            return ex_letter(c);
        }
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }
};

void print_rec(ExprRef e, std::string& out, int parent_prec);

// precedence: sum 0, prod 1, star 2
void print_child(ExprRef e, std::string& out, int prec) {
    int own;
    switch (e->kind) {
        case Expr::Kind::Sum: own = 0; break;
        case Expr::Kind::Prod: own = 1; break;
        default: own = 3; break;
    }
    if (own < prec) {
        out += '(';
        print_rec(e, out, 0);
        out += ')';
    } else {
        print_rec(e, out, prec);
    }
}

void print_rec(ExprRef e, std::string& out, int) {
    switch (e->kind) {
        case Expr::Kind::Zero: out += '0'; return;
        case Expr::Kind::One: out += '1'; return;
        case Expr::Kind::Letter:
        case Expr::Kind::Open:
        case Expr::Kind::Close:
            out += print_token(e->token());
            return;
        case Expr::Kind::Sum:
            for (std::size_t i = 0; i < e->kids.size(); ++i) {
                if (i) out += " + ";
                print_child(e->kids[i], out, 1);
            }
            return;
        case Expr::Kind::Prod:
            for (std::size_t i = 0; i < e->kids.size(); ++i) {
                if (i) out += ' ';
                print_child(e->kids[i], out, 2);
            }
            return;
        case Expr::Kind::Star:
            print_child(e->kids[0], out, 3);
            out += '*';
            return;
    }
}

}  // namespace

ExprRef parse_expr(const std::string& text, int m) { return Parser(text, m).parse(); }

std::string print_expr(ExprRef e) {
    std::string out;
    print_rec(e, out, 0);
    return out;
}

ExprRef substitute_letter(ExprRef e, char slot, ExprRef value) {
    switch (e->kind) {
        case Expr::Kind::Letter:
            return e->letter == slot ? value : e;
        case Expr::Kind::Sum:
        case Expr::Kind::Prod: {
            std::vector<ExprRef> kids;
            kids.reserve(e->kids.size());
            for (ExprRef k : e->kids) kids.push_back(substitute_letter(k, slot, value));
            return e->kind == Expr::Kind::Sum ? ex_sum(std::move(kids)) : ex_prod(std::move(kids));
        }
        case Expr::Kind::Star:
            return ex_star(substitute_letter(e->kids[0], slot, value));
        default:
            return e;
    }
}

ExprRef recode_expr(ExprRef e, int m, bool braket_mode) {
    switch (e->kind) {
        case Expr::Kind::Open:
        case Expr::Kind::Close: {
            Word piece = encode_bracket_token(e->token(), m,
                                              braket_mode ? EncodeMode::Braket
                                                          : EncodeMode::Polycyclic);
            return ex_word(piece);
        }
        case Expr::Kind::Sum:
        case Expr::Kind::Prod: {
            std::vector<ExprRef> kids;
            kids.reserve(e->kids.size());
            for (ExprRef k : e->kids) kids.push_back(recode_expr(k, m, braket_mode));
            return e->kind == Expr::Kind::Sum ? ex_sum(std::move(kids)) : ex_prod(std::move(kids));
        }
        case Expr::Kind::Star:
            return ex_star(recode_expr(e->kids[0], m, braket_mode));
        default:
            return e;
    }
}

}  // namespace tka
