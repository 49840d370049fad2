#ifndef TKA_REWRITE_HPP
#define TKA_REWRITE_HPP

#include <vector>

#include "tka/token.hpp"

namespace tka {

// Reduces a word over X, the brackets of Delta_m and 0 to its normal form in
// Q_m^* X^* P_m^* or 0. Single left-to-right scan with a pushdown of pending
// opening brackets; letters fall through, closing brackets either match the
// innermost pending opener or join the Q-prefix.
NormalFormWord nf_reduce(const Word& w);

// Monoid product of normal forms: reduce the concatenation.
NormalFormWord nf_mul(const NormalFormWord& u, const NormalFormWord& v);

// Extends a normal form by one token on the right.
NormalFormWord nf_mul_token(const NormalFormWord& u, const Token& t);

enum class EncodeMode {
    Polycyclic,  // p_i -> b p^{i+1},          q_i -> q^{i+1} d
    Braket,      // p_i -> b p^i (p^i if i=m-1), mirrored for q_i
};

// Recodes the m bracket pairs of a word into the two pairs of Delta_2,
// leaving X-letters and 0 untouched. For m = 2 the braket recoding is the
// identity.
Word encode_brackets(const Word& w, int m, EncodeMode mode);

// Recoding of a single bracket token.
Word encode_bracket_token(const Token& t, int m, EncodeMode mode);

}  // namespace tka

#endif
