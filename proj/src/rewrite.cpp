#include "tka/rewrite.hpp"

namespace tka {

NormalFormWord nf_reduce(const Word& w) {
    NormalFormWord r;
    for (const Token& t : w) {
        switch (t.kind) {
            case TokenKind::Zero:
                return NormalFormWord::make_zero();
            case TokenKind::Letter:
                r.letters.push_back(t.letter);
                break;
            case TokenKind::Open:
                r.opens.push_back(t.index);
                break;
            case TokenKind::Close:
                if (r.opens.empty()) {
                    // falls through all letters into the Q-prefix
                    r.closes.push_back(t.index);
                } else if (r.opens.back() == t.index) {
                    r.opens.pop_back();  // p_i q_i = 1
                } else {
                    return NormalFormWord::make_zero();  // p_i q_j = 0
                }
                break;
        }
    }
    return r;
}

NormalFormWord nf_mul(const NormalFormWord& u, const NormalFormWord& v) {
    if (u.zero || v.zero) return NormalFormWord::make_zero();
    Word w = u.flatten();
    Word tail = v.flatten();
    w.insert(w.end(), tail.begin(), tail.end());
    return nf_reduce(w);
}

NormalFormWord nf_mul_token(const NormalFormWord& u, const Token& t) {
    if (u.zero) return u;
    NormalFormWord r = u;
    switch (t.kind) {
        case TokenKind::Zero:
            return NormalFormWord::make_zero();
        case TokenKind::Letter:
            // letters commute to the left of any pending openers
            r.letters.push_back(t.letter);
            return r;
        case TokenKind::Open:
            r.opens.push_back(t.index);
            return r;
        case TokenKind::Close:
            if (r.opens.empty()) {
                r.closes.push_back(t.index);
            } else if (r.opens.back() == t.index) {
                r.opens.pop_back();
            } else {
                return NormalFormWord::make_zero();
            }
            return r;
    }
    return r;
}

Word encode_bracket_token(const Token& t, int m, EncodeMode mode) {
    Word out;
    if (t.kind != TokenKind::Open && t.kind != TokenKind::Close) {
        out.push_back(t);
        return out;
    }
    int i = t.index;
    if (i < 0 || i >= m) throw std::runtime_error("encode_brackets: index out of range");
    if (mode == EncodeMode::Polycyclic) {
        if (t.kind == TokenKind::Open) {
            out.push_back(Token::open(0));
            for (int k = 0; k <= i; ++k) out.push_back(Token::open(1));
        } else {
            for (int k = 0; k <= i; ++k) out.push_back(Token::close(1));
            out.push_back(Token::close(0));
        }
    } else {
        // braket recoding of Prop-style case split; identity for m = 2
        if (t.kind == TokenKind::Open) {
            if (i < m - 1) {
                out.push_back(Token::open(0));
                for (int k = 0; k < i; ++k) out.push_back(Token::open(1));
            } else {
                for (int k = 0; k < i; ++k) out.push_back(Token::open(1));
            }
        } else {
            if (i < m - 1) {
                for (int k = 0; k < i; ++k) out.push_back(Token::close(1));
                out.push_back(Token::close(0));
            } else {
                for (int k = 0; k < i; ++k) out.push_back(Token::close(1));
            }
        }
    }
    return out;
}

Word encode_brackets(const Word& w, int m, EncodeMode mode) {
    if (m < 2) throw std::runtime_error("encode_brackets: m must be >= 2");
    Word out;
    for (const Token& t : w) {
        Word piece = encode_bracket_token(t, m, mode);
        out.insert(out.end(), piece.begin(), piece.end());
    }
    return out;
}

}  // namespace tka
