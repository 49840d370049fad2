#include "tka/token.hpp"

#include <sstream>

namespace tka {

std::string print_token(const Token& t) {
    switch (t.kind) {
        case TokenKind::Letter:
            if (is_plain_letter(t.letter)) return std::string(1, t.letter);
            return "'" + std::string(1, t.letter) + "'";
        case TokenKind::Open:
            return "p" + std::to_string(t.index);
        case TokenKind::Close:
            return "q" + std::to_string(t.index);
        case TokenKind::Zero:
            return "_0_";
    }
    return "?";
}

Word NormalFormWord::flatten() const {
    Word w;
    if (zero) {
        w.push_back(Token::zero());
        return w;
    }
    for (int i : closes) w.push_back(Token::close(i));
    for (char c : letters) w.push_back(Token::make_letter(c));
    for (int i : opens) w.push_back(Token::open(i));
    return w;
}

bool NormalFormWord::operator<(const NormalFormWord& o) const {
    if (zero != o.zero) return o.zero;  // zero sorts last
    if (length() != o.length()) return length() < o.length();
    if (closes != o.closes) return closes < o.closes;
    if (letters != o.letters) return letters < o.letters;
    return opens < o.opens;
}

std::string NormalFormWord::pack() const {
    std::string s;
    if (zero) {
        s.push_back('\xff');
        return s;
    }
    s.reserve(length() + 2);
    for (int i : closes) s.push_back(static_cast<char>(i));
    s.push_back('\x01');
    s.append(letters.begin(), letters.end());
    s.push_back('\x01');
    for (int i : opens) s.push_back(static_cast<char>(i));
    return s;
}

std::string print_nf(const NormalFormWord& w) {
    if (w.zero) return "_0_";
    if (w.is_unit()) return "1";
    std::string out;
    bool first = true;
    auto emit = [&](const std::string& tok) {
        if (!first) out += ' ';
        out += tok;
        first = false;
    };
    for (int i : w.closes) emit("q" + std::to_string(i));
    for (char c : w.letters) emit(print_token(Token::make_letter(c)));
    for (int i : w.opens) emit("p" + std::to_string(i));
    return out;
}

std::string print_word(const Word& w) {
    if (w.empty()) return "1";
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) out += ' ';
        out += print_token(w[i]);
    }
    return out;
}

namespace {

int parse_index(const std::string& tok, std::size_t from) {
    int v = 0;
    for (std::size_t i = from; i < tok.size(); ++i) {
        if (tok[i] < '0' || tok[i] > '9') return -1;
        v = v * 10 + (tok[i] - '0');
    }
    return v;
}

}  // namespace

Word parse_word(const std::string& text, int m) {
    Word out;
    std::istringstream in(text);
    std::string tok;
    auto check_index = [&](int i) {
        if (i < 0 || i >= m)
            throw std::runtime_error("bracket index out of range for m=" + std::to_string(m) +
                                     ": " + tok);
    };
    while (in >> tok) {
        if (tok == "_0_" || tok == "0") {
            out.push_back(Token::zero());
        } else if (tok == "1") {
            // empty word, contributes nothing
        } else if (tok.size() == 1) {
            char c = tok[0];
            if (c == 'p') {
                out.push_back(Token::open(1));
            } else if (c == 'q') {
                out.push_back(Token::close(1));
            } else if (is_plain_letter(c)) {
                out.push_back(Token::make_letter(c));
            } else {
                throw std::runtime_error("unknown word token: " + tok);
            }
            if (!out.empty() && (out.back().kind == TokenKind::Open || out.back().kind == TokenKind::Close))
                check_index(out.back().index);
        } else if (tok[0] == 'p' || tok[0] == 'q') {
            int i = parse_index(tok, 1);
            if (i < 0) throw std::runtime_error("unknown word token: " + tok);
            check_index(i);
            out.push_back(tok[0] == 'p' ? Token::open(i) : Token::close(i));
        } else if (tok.size() == 3 && tok[0] == '\'' && tok[2] == '\'') {
            out.push_back(Token::make_letter(tok[1]));
        } else {
            throw std::runtime_error("unknown word token: " + tok);
        }
    }
    return out;
}

}  // namespace tka
