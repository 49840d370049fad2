#ifndef TKA_EXPR_HPP
#define TKA_EXPR_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "tka/token.hpp"

namespace tka {

// Regular expression over X + Delta_m denoting an element of R(X*) (x) C_m'.
// Nodes are hash-consed: structurally equal expressions share one node, so
// pointer equality is structural equality after canonicalization.
class Expr {
  public:
    enum class Kind : std::uint8_t { Zero, One, Letter, Open, Close, Sum, Prod, Star };

    Kind kind;
    char letter = 0;
    int index = -1;
    std::vector<const Expr*> kids;

    std::uint64_t id = 0;       // intern order, stable per process
    bool nullable = false;      // 1 in the word-language sense
    int max_bracket = -1;       // largest bracket index occurring, -1 if none
    std::uint64_t tree_size = 1;  // unfolded size, saturating

    bool is_atom() const {
        return kind == Kind::Zero || kind == Kind::One || kind == Kind::Letter ||
               kind == Kind::Open || kind == Kind::Close;
    }
    bool is_token() const {
        return kind == Kind::Letter || kind == Kind::Open || kind == Kind::Close;
    }
    Token token() const;
};

using ExprRef = const Expr*;

// Interning factory. Applies light canonicalization: 0/1 absorption,
// flattening of + and products, duplicate removal in sums, star collapsing.
ExprRef ex_zero();
ExprRef ex_one();
ExprRef ex_letter(char c);
ExprRef ex_open(int i);
ExprRef ex_close(int i);
ExprRef ex_token(const Token& t);
ExprRef ex_sum(std::vector<ExprRef> kids);
ExprRef ex_sum2(ExprRef a, ExprRef b);
ExprRef ex_prod(std::vector<ExprRef> kids);
ExprRef ex_prod2(ExprRef a, ExprRef b);
ExprRef ex_star(ExprRef a);

ExprRef ex_word(const Word& w);

// pi = q0 p0, the splice element.
ExprRef ex_pi();

struct ParseError : std::runtime_error {
    std::size_t position;
    ParseError(const std::string& msg, std::size_t pos)
        : std::runtime_error(msg + " at position " + std::to_string(pos)), position(pos) {}
};

// Text syntax: letters a..z (minus the reserved b,d,p,q), brackets p0..p9 /
// q0..q9 plus the two-pair aliases b,p,d,q, constants 0 and 1, operators +,
// juxtaposition or '.', postfix '*', parentheses. Bracket indices must be < m.
ExprRef parse_expr(const std::string& text, int m = 2);

std::string print_expr(ExprRef e);

// Replaces every occurrence of the letter `slot` by `value`.
ExprRef substitute_letter(ExprRef e, char slot, ExprRef value);

// Applies the bracket recoding of encode_brackets to every bracket leaf.
ExprRef recode_expr(ExprRef e, int m, bool braket_mode);

}  // namespace tka

#endif
