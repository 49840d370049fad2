#include <doctest.h>

#include "corpus.hpp"
#include "oracles.hpp"
#include "random_gen.hpp"
#include "tka/cfg.hpp"
#include "tka/semantics.hpp"

using namespace tka;

namespace {

cfg::Grammar anbn() { return cfg::parse_grammar("S -> a S b | ;\n"); }

std::set<std::string> words_up_to(int maxlen, const std::string& alphabet) {
    std::set<std::string> out{""};
    std::vector<std::string> frontier{""};
    for (int len = 1; len <= maxlen; ++len) {
        std::vector<std::string> next;
        for (const auto& w : frontier)
            for (char c : alphabet) {
                next.push_back(w + c);
                out.insert(w + c);
            }
        frontier = std::move(next);
    }
    return out;
}

cfg::Grammar random_grammar(gen::Rng& rng) {
    cfg::Grammar g;
    int nts = 1 + rng.below(3);
    for (int i = 0; i < nts; ++i) g.add_nt(std::string(1, static_cast<char>('S' + i)));
    int prods = 1 + rng.below(5);
    for (int i = 0; i < prods; ++i) {
        int head = rng.below(nts);
        std::vector<cfg::Sym> rhs;
        int len = rng.below(4);
        for (int j = 0; j < len; ++j) {
            if (rng.chance(55))
                rhs.push_back(cfg::Sym::t(rng.chance(50) ? 'a' : 'b'));
            else
                rhs.push_back(cfg::Sym::n(rng.below(nts)));
        }
        g.add_prod(head, std::move(rhs));
    }
    return g;
}

}  // namespace

TEST_CASE("grammar text round trip") {
    cfg::Grammar g = cfg::parse_grammar("S -> a S b | ;\n");
    CHECK(g.nt_names.size() == 1);
    CHECK(g.prods.size() == 2);
    std::string printed = cfg::print_grammar(g);
    cfg::Grammar again = cfg::parse_grammar(printed);
    CHECK(cfg::print_grammar(again) == printed);
    CHECK_THROWS(cfg::parse_grammar("s -> a\n"));
    CHECK_THROWS(cfg::parse_grammar("S a b\n"));
}

TEST_CASE("cyk membership basics") {
    cfg::Grammar g = anbn();
    CHECK(cfg::cyk_member(g, "ab"));
    CHECK(!cfg::cyk_member(g, "ba"));
    CHECK(cfg::cyk_member(g, ""));
    CHECK(cfg::cyk_member(g, "aaabbb"));
    CHECK(!cfg::cyk_member(g, "aab"));
}

TEST_CASE("cyk agrees with the derivation-search oracle on random grammars") {
    gen::Rng rng(0x5CA1E);
    auto words = words_up_to(6, "ab");
    for (int trial = 0; trial < 40; ++trial) {
        cfg::Grammar g = random_grammar(rng);
        for (const auto& w : words)
            CHECK(cfg::cyk_member(g, w) == oracles::derivation_member(g, w, 12));
    }
}

TEST_CASE("cfg_enumerate examples") {
    CHECK(cfg_enumerate(anbn(), 6) == std::set<std::string>{"", "ab", "aabb", "aaabbb"});
    cfg::Grammar ss = cfg::parse_grammar("S -> S S | a\n");
    CHECK(cfg_enumerate(ss, 3) == std::set<std::string>{"a", "aa", "aaa"});
    cfg::Grammar eps = cfg::parse_grammar("S -> ;\n");
    CHECK(cfg_enumerate(eps, 4) == std::set<std::string>{""});
    CHECK_THROWS_AS(cfg_enumerate(cfg::parse_grammar("S -> a S | b S | ;\n"), 30, 100),
                    cfg::GenerationOverflow);
}

TEST_CASE("cfg_to_expr represents the grammar language") {
    cfg::Grammar g = anbn();
    ExprRef e = cfg::cfg_to_expr(g);
    CHECK(is_scoped_shape(e));
    CHECK(stack_recognize(e, "aabb") == RecognizeResult::Accepted);
    CHECK(stack_recognize(e, "aab") == RecognizeResult::Rejected);
    CHECK(centralizer_check_bounded(e, 12));

    int bound = cfg::trace_source_bound(g, 10);
    EnumLimits limits;
    limits.max_letters = 10;
    NfImage img = enumerate_nf_image(e, bound, limits);
    std::set<std::string> got;
    for (const auto& w : img.words) {
        REQUIRE(w.bracket_free());
        if (w.letters.size() <= 10) got.insert(std::string(w.letters.begin(), w.letters.end()));
    }
    CHECK(got == cfg_enumerate(g, 10));
}

TEST_CASE("cfg_to_expr of the trivial grammar is the unit") {
    cfg::Grammar eps = cfg::parse_grammar("S -> ;\n");
    ExprRef e = cfg::cfg_to_expr(eps);
    CHECK(equal_bounded(e, ex_one(), 8).equal);
}

TEST_CASE("dyck grammar recognizer agrees with a balance counter") {
    cfg::Grammar dyck = cfg::parse_grammar("S -> ( S ) S | ;\n");
    ExprRef e = cfg::cfg_to_expr(dyck);
    for (const auto& w : words_up_to(8, "()")) {
        bool expected = oracles::balanced(w, '(', ')');
        CHECK(cfg::cyk_member(dyck, w) == expected);
        CHECK((stack_recognize(e, w) == RecognizeResult::Accepted) == expected);
    }
}

TEST_CASE("expr_to_cfg on scoped expressions") {
    cfg::Grammar g = cfg::expr_to_cfg(parse_expr("p0 (a p1)* (q1 b)* q0"));
    CHECK(cfg_enumerate(g, 8) == std::set<std::string>{"", "ab", "aabb", "aaabbb", "aaaabbbb"});

    cfg::Grammar unit = cfg::expr_to_cfg(parse_expr("p0 q0"));
    CHECK(cfg_enumerate(unit, 4) == std::set<std::string>{""});

    // pi-spliced product expression
    ExprRef prod = parse_expr("p0 (a p1)* (q1 b)* q0 p0 (a p1)* (q1 b)* q0");
    cfg::Grammar gprod = cfg::expr_to_cfg(prod);
    cfg::Grammar expected = cfg::parse_grammar("S -> A B\nA -> a A b | ;\nB -> a B b | ;\n");
    CHECK(cfg_enumerate(gprod, 6) == cfg_enumerate(expected, 6));

    CHECK_THROWS_AS(cfg::expr_to_cfg(parse_expr("(a p1)*")), std::invalid_argument);
}

TEST_CASE("round trip grammar -> expression -> grammar preserves the language") {
    for (const auto& entry : corpus::golden_grammars()) {
        CAPTURE(entry.name);
        ExprRef e = cfg::cfg_to_expr(entry.grammar);
        cfg::Grammar back = cfg::expr_to_cfg(e);
        CHECK(cfg_enumerate(back, 10) == cfg_enumerate(entry.grammar, 10));
    }
}

TEST_CASE("cfg_to_expr output always passes the bounded centralizer test") {
    for (const auto& entry : corpus::golden_grammars()) {
        CAPTURE(entry.name);
        CHECK(centralizer_check_bounded(cfg::cfg_to_expr(entry.grammar), 10));
    }
}

TEST_CASE("three-way consistency between cyk, recognizer and enumeration") {
    // trimmed variant of the acceptance criterion, at word length <= 6
    const int wordlen = 6;
    for (const auto& entry : corpus::golden_grammars()) {
        CAPTURE(entry.name);
        ExprRef e = cfg::cfg_to_expr(entry.grammar);
        int bound = cfg::trace_source_bound(entry.grammar, wordlen);
        EnumLimits limits;
        limits.max_letters = wordlen;
        NfImage img = enumerate_nf_image(e, bound, limits);
        std::string alphabet;
        for (char c : entry.grammar.terminals()) alphabet.push_back(c);
        if (alphabet.empty()) alphabet = "a";
        for (const auto& w : words_up_to(wordlen, alphabet)) {
            bool by_cyk = cfg::cyk_member(entry.grammar, w);
            bool by_stack = stack_recognize(e, w) == RecognizeResult::Accepted;
            NormalFormWord nf;
            nf.letters.assign(w.begin(), w.end());
            bool by_enum = img.contains(nf);
            CHECK(by_cyk == by_stack);
            CHECK(by_cyk == by_enum);
        }
    }
}
