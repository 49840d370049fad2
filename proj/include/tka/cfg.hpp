#ifndef TKA_CFG_HPP
#define TKA_CFG_HPP

#include <set>
#include <string>
#include <vector>

#include "tka/expr.hpp"

namespace tka::cfg {

struct Sym {
    bool terminal = false;
    int nt = -1;   // nonterminal id
    char ch = 0;   // terminal letter

    static Sym t(char c) { return Sym{true, -1, c}; }
    static Sym n(int id) { return Sym{false, id, 0}; }
    auto operator<=>(const Sym&) const = default;
};

struct Production {
    int head;
    std::vector<Sym> rhs;
};

struct Grammar {
    std::vector<std::string> nt_names;
    std::vector<Production> prods;
    int start = 0;

    int add_nt(const std::string& name) {
        nt_names.push_back(name);
        return static_cast<int>(nt_names.size()) - 1;
    }
    void add_prod(int head, std::vector<Sym> rhs) { prods.push_back({head, std::move(rhs)}); }

    int find_nt(const std::string& name) const {
        for (std::size_t i = 0; i < nt_names.size(); ++i)
            if (nt_names[i] == name) return static_cast<int>(i);
        return -1;
    }
    std::set<char> terminals() const;
    void validate() const;
};

// One production group per line: `S -> a S b | ;` with `;` for the empty
// word. Tokens are whitespace-separated; names starting with an uppercase
// letter are nonterminals, single other characters are terminals.
Grammar parse_grammar(const std::string& text);
std::string print_grammar(const Grammar& g);

// Exact CFL membership via CYK on an internal Chomsky normal form.
bool cyk_member(const Grammar& g, const std::string& word);

struct GenerationOverflow : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// All words of the language with length <= maxlen.
std::set<std::string> cfg_enumerate(const Grammar& g, int maxlen, std::size_t cap = 2'000'000);
std::set<std::string> cfg_enumerate_from(const Grammar& g, int start_nt, int maxlen,
                                         std::size_t cap = 2'000'000);

// Chomsky-Schuetzenberger style representation p0 r q0 of L(G): r is the
// trace language of the nondeterministic top-down stack machine of G, one
// bracket pair per grammar symbol, recoded into the two pairs of Delta_2
// when more than one inner pair is needed.
ExprRef cfg_to_expr(const Grammar& g);

// Inverse bridge: compile the scope of a p0 r q0 expression, project it to
// the centralizer and read a grammar off the N (W N)* entries.
Grammar expr_to_cfg(ExprRef e);

// Source-word length needed so that the bounded image of cfg_to_expr(g)
// covers every word of the language up to word length maxlen.
int trace_source_bound(const Grammar& g, int maxlen);

}  // namespace tka::cfg

#endif
