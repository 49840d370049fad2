#ifndef TKA_TESTS_CORPUS_HPP
#define TKA_TESTS_CORPUS_HPP

// The shared grammar corpus used across the bridge and acceptance suites.

#include <string>
#include <vector>

#include "tka/cfg.hpp"

namespace tka::corpus {

struct Entry {
    std::string name;
    cfg::Grammar grammar;
};

inline std::vector<Entry> golden_grammars() {
    std::vector<Entry> out;
    out.push_back({"anbn", cfg::parse_grammar("S -> a S b | ;\n")});
    out.push_back({"dyck", cfg::parse_grammar("S -> ( S ) S | ;\n")});
    out.push_back({"palindromes", cfg::parse_grammar("S -> a S a | b S b | a | b | ;\n")});
    out.push_back({"anbn_ambm",
                   cfg::parse_grammar("S -> A B\nA -> a A b | ;\nB -> a B b | ;\n")});
    out.push_back({"just_eps", cfg::parse_grammar("S -> ;\n")});
    out.push_back({"regular_an", cfg::parse_grammar("S -> a S | ;\n")});
    return out;
}

}  // namespace tka::corpus

#endif
