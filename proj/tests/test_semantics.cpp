#include <doctest.h>

#include "random_gen.hpp"
#include "tka/rewrite.hpp"
#include "tka/semantics.hpp"

using namespace tka;

namespace {

std::set<std::string> image_words(ExprRef e, int bound) {
    std::set<std::string> out;
    for (const auto& w : enumerate_nf_image(e, bound).words) out.insert(print_nf(w));
    return out;
}

NormalFormWord letters_nf(const std::string& s) {
    NormalFormWord w;
    w.letters.assign(s.begin(), s.end());
    return w;
}

}  // namespace

TEST_CASE("bounded image of the a^n b^n expression") {
    ExprRef e = parse_expr("p0 (a p1)* (q1 b)* q0");
    CHECK(image_words(e, 14) ==
          std::set<std::string>{"1", "a b", "a a b b", "a a a b b b"});
    CHECK(image_words(parse_expr("0"), 10).empty());
    CHECK(image_words(parse_expr("(p1 q1)*"), 6) == std::set<std::string>{"1"});
}

TEST_CASE("image enumeration is monotone in the bound") {
    gen::Rng rng(0xAB);
    gen::ExprGenOptions opt;
    opt.max_nodes = 6;
    opt.letters = "ab";
    opt.open_indices = {0, 1};
    opt.close_indices = {0, 1};
    for (int trial = 0; trial < 60; ++trial) {
        ExprRef e = gen::random_expr(rng, opt);
        NfImage small = enumerate_nf_image(e, 4);
        NfImage big = enumerate_nf_image(e, 7);
        for (const auto& w : small.words) CHECK(big.contains(w));
    }
}

TEST_CASE("enumeration overflow reports an explicit error") {
    ExprRef e = parse_expr("(a + b)*");
    EnumLimits limits;
    limits.max_items = 50;
    CHECK_THROWS_AS(enumerate_nf_image(e, 12, limits), EnumerationOverflow);
}

TEST_CASE("equal_bounded examples") {
    CHECK(equal_bounded(parse_expr("p1 q1"), parse_expr("1"), 4).equal);

    EqVerdict v = equal_bounded(parse_expr("p1"), parse_expr("q1"), 2);
    REQUIRE(!v.equal);
    CHECK(print_nf(*v.witness) == "p1");

    // (b+a+d)* vs (N d)* N (b N)* with N = b(bp+a+qd)*d, paper bracket names
    ExprRef b = ex_open(0), d = ex_close(0), p = ex_open(1), q = ex_close(1);
    ExprRef a = ex_letter('a');
    ExprRef n = ex_prod({b, ex_star(ex_sum({ex_prod2(b, p), a, ex_prod2(q, d)})), d});
    ExprRef lhs = ex_star(ex_sum({b, a, d}));
    ExprRef rhs = ex_prod({ex_star(ex_prod2(n, d)), n, ex_star(ex_prod2(b, n))});
    CHECK(equal_bounded(lhs, rhs, 8).equal);
}

TEST_CASE("distinct witnesses separate the two images") {
    gen::Rng rng(0x77);
    gen::ExprGenOptions opt;
    opt.max_nodes = 5;
    opt.letters = "ab";
    opt.open_indices = {0, 1};
    opt.close_indices = {0, 1};
    int distinct_seen = 0;
    for (int trial = 0; trial < 80; ++trial) {
        ExprRef e1 = gen::random_expr(rng, opt);
        ExprRef e2 = gen::random_expr(rng, opt);
        EqVerdict v = equal_bounded(e1, e2, 6);
        if (v.equal) continue;
        ++distinct_seen;
        bool in1 = enumerate_nf_image(e1, 6).contains(*v.witness);
        bool in2 = enumerate_nf_image(e2, 6).contains(*v.witness);
        CHECK(in1 != in2);
        // membership re-check via the exact search
        MemberResult m1 = member_search(e1, *v.witness);
        MemberResult m2 = member_search(e2, *v.witness);
        CHECK(((m1 == MemberResult::Found) != (m2 == MemberResult::Found)));
    }
    CHECK(distinct_seen > 10);
}

TEST_CASE("centralizer_check_bounded examples") {
    CHECK(centralizer_check_bounded(parse_expr("p0 (a p1)* (q1 b)* q0"), 12));
    CHECK(!centralizer_check_bounded(parse_expr("p1"), 4));
    CHECK(!centralizer_check_bounded(parse_expr("(a p1)* (q1 b)*"), 4));
}

TEST_CASE("stack_recognize examples") {
    ExprRef e = parse_expr("p0 (a p1)* (q1 b)* q0");
    CHECK(stack_recognize(e, "aabb") == RecognizeResult::Accepted);
    CHECK(stack_recognize(e, "aab") == RecognizeResult::Rejected);
    CHECK(stack_recognize(parse_expr("p0 q0"), "") == RecognizeResult::Accepted);
    CHECK_THROWS_AS(stack_recognize(parse_expr("p1 q1"), "a"), std::invalid_argument);
    // p0 occurring outside pi or a recoded group violates the shape
    CHECK_THROWS_AS(stack_recognize(parse_expr("p0 p0 a q0"), "a"), std::invalid_argument);
    // pi splice is accepted
    ExprRef prod = parse_expr("p0 (a p1)* (q1 b)* q0 p0 (a p1)* (q1 b)* q0");
    CHECK(stack_recognize(prod, "abab") == RecognizeResult::Accepted);
    CHECK(stack_recognize(prod, "abba") == RecognizeResult::Rejected);
}

TEST_CASE("stack_recognize agrees with the enumeration oracle on bracket-free words") {
    ExprRef e = parse_expr("p0 (a p1)* (q1 b)* q0");
    NfImage img = enumerate_nf_image(e, 12);
    for (int n = 0; n <= 2; ++n)
        for (int m = 0; m <= 2; ++m) {
            std::string w(n, 'a');
            w.append(m, 'b');
            bool in_img = img.contains(letters_nf(w));
            if (4 * std::max(n, m) + 2 <= 12)
                CHECK((stack_recognize(e, w) == RecognizeResult::Accepted) == in_img);
        }
}

TEST_CASE("member_search handles bracketed targets") {
    ExprRef e = parse_expr("q1 a p0");
    NormalFormWord target;
    target.closes = {1};
    target.letters = {'a'};
    target.opens = {0};
    CHECK(member_search(e, target) == MemberResult::Found);
    target.opens = {1};
    CHECK(member_search(e, target) == MemberResult::Absent);
}

TEST_CASE("expressions with empty image act as zero in bounded tests") {
    ExprRef dead = parse_expr("p1 q0");  // mismatched pair
    CHECK(image_words(dead, 8).empty());
    ExprRef f = parse_expr("(a + p1 b q1)*");
    CHECK(equal_bounded(ex_sum2(dead, f), f, 8).equal);
    CHECK(image_words(ex_prod2(dead, f), 8).empty());
}
