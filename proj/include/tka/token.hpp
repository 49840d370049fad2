#ifndef TKA_TOKEN_HPP
#define TKA_TOKEN_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace tka {

// Letters of X, brackets p_i/q_i, and the annihilating zero marker.
enum class TokenKind : std::uint8_t { Letter, Open, Close, Zero };

struct Token {
    TokenKind kind = TokenKind::Zero;
    char letter = 0;  // set for Letter
    int index = -1;   // set for Open/Close, 0 <= index < m

    static Token make_letter(char c) { return Token{TokenKind::Letter, c, -1}; }
    static Token open(int i) { return Token{TokenKind::Open, 0, i}; }
    static Token close(int i) { return Token{TokenKind::Close, 0, i}; }
    static Token zero() { return Token{TokenKind::Zero, 0, -1}; }

    bool operator==(const Token&) const = default;
};

using Word = std::vector<Token>;

// Names reserved for the bracket syntax: p and q name brackets (p3, q0, and
// the bare second-pair aliases p, q), so they cannot be X-letters.
inline bool is_reserved_letter(char c) { return c == 'p' || c == 'q'; }
inline bool is_plain_letter(char c) {
    return c >= 'a' && c <= 'z' && !is_reserved_letter(c);
}

std::string print_token(const Token& t);

// The unique representative in Q_m^* X^* P_m^*, or the distinguished zero.
struct NormalFormWord {
    bool zero = false;
    std::vector<int> closes;    // Q-part, left to right
    std::vector<char> letters;  // X-part
    std::vector<int> opens;     // P-part, left to right (innermost last)

    static NormalFormWord make_zero() {
        NormalFormWord w;
        w.zero = true;
        return w;
    }
    static NormalFormWord unit() { return NormalFormWord{}; }

    bool is_unit() const { return !zero && closes.empty() && letters.empty() && opens.empty(); }
    bool bracket_free() const { return !zero && closes.empty() && opens.empty(); }
    std::size_t length() const { return closes.size() + letters.size() + opens.size(); }

    Word flatten() const;

    bool operator==(const NormalFormWord&) const = default;
    bool operator<(const NormalFormWord& o) const;

    // Compact byte encoding, usable as a hash key.
    std::string pack() const;
};

std::string print_nf(const NormalFormWord& w);
std::string print_word(const Word& w);

// Parses the whitespace-separated word format, e.g. "p0 a p1 q1 b q0";
// `_0_` is the zero word and `1` the empty word.
Word parse_word(const std::string& text, int m);

}  // namespace tka

#endif
