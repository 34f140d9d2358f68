#include <catch_amalgamated.hpp>

#include "barlearn/random.hpp"
#include "barlearn/teacher.hpp"
#include "barlearn/text.hpp"
#include "support.hpp"

using namespace barlearn;
using namespace testing_support;

namespace {

BarString S(const char* s) { return parse_bar_string(s); }
BarTree T(const char* s) { return parse_tree(s); }

const BarAlphabet aa{P("a"), B("a")};

HiddenTarget<BarNfa> only(const char* w) { return {singleton_automaton(S(w), letters_of(S(w)))}; }

bool bound_names_outside(const BarString& w, const BarAlphabet& u) {
    const auto nf = nf_string(w);
    for (std::size_t i = 0; i < w.size(); ++i)
        if (!nf[i].is_free() && u.names().count(w[i].name))
            return false;
    return true;
}

/// Brute-force bar-language membership: some literally accepted word of the
/// same length is α-equivalent.
bool brute_member(const BarNfa& a, const BarString& w) {
    for (const auto& v : accepted_of_length(a, w.size()))
        if (brute_alpha_eq(v, w))
            return true;
    return false;
}

} // namespace

TEST_CASE("membership in the hidden bar language") {
    const auto t = only("|a a");
    CHECK(sim_mq(t, S("|z z")));
    CHECK_FALSE(sim_mq(t, S("z")));
    CHECK(sim_mq(t, S("|a a")));
    CHECK_FALSE(sim_mq(t, S("|z a")));
    CHECK_FALSE(sim_mq(t, S("")));
}

TEST_CASE("membership agrees with the brute-force definition") {
    Rng rng(51);
    const BarAlphabet hidden{P("a"), B("a"), B("b")};
    const BarAlphabet queries{P("a"), B("a"), P("b"), B("b"), P("c"), B("c")};
    const auto words = words_up_to(queries, 5);
    for (int i = 0; i < 6; ++i) {
        const HiddenTarget<BarNfa> t{random_nfa(rng, hidden, 1 + rng.below(4), 0.3)};
        SimulatedWordTeacher teacher(t.hidden);
        for (const auto& w : words)
            REQUIRE(teacher.alpha_membership(w) == brute_member(t.hidden, w));
        CHECK(teacher.stats().membership_queries == words.size());
    }
}

TEST_CASE("tree membership agrees with the brute-force definition") {
    Rng rng(52);
    const Signature fc{{"f", 2}, {"c", 0}};
    const BarAlphabet hidden{P("a"), B("a"), B("b")};
    const BarAlphabet queries{P("a"), B("a"), P("b"), B("b"), B("c")};
    const auto sources = trees_up_to(hidden, fc, 2);
    const auto trees = trees_up_to(queries, fc, 2);
    for (int i = 0; i < 8; ++i) {
        const HiddenTarget<BarNftaBottomUp> t{random_nfta(rng, hidden, fc, 1 + rng.below(4), 0.2)};
        for (const auto& x : trees)
            REQUIRE(sim_mq(t, x) == brute_alpha_member(t.hidden, sources, x));
    }
    const HiddenTarget<BarNftaBottomUp> leaf{singleton_automaton(T("|a.f(a.c, a.c)"), aa, fc)};
    CHECK(sim_mq(leaf, T("|q.f(q.c, q.c)")));
    CHECK_FALSE(sim_mq(leaf, T("|q.f(q.c, a.c)")));
}

TEST_CASE("ultimately periodic membership") {
    BarBuchi loop(BarAlphabet{B("a")}, 1);
    loop.add_transition(0, 0, 0);
    loop.set_final(0);
    const HiddenTarget<BarBuchi> t{loop};
    CHECK(sim_mq_up(t, parse_up_word("; |b")));
    CHECK(sim_mq_up(t, parse_up_word("|a ; |b |c")));
    CHECK_FALSE(sim_mq_up(t, parse_up_word("; c")));
    CHECK_FALSE(sim_mq_up(t, parse_up_word("; |b b")));
    const HiddenTarget<BarBuchi> empty{BarBuchi(BarAlphabet{B("a")}, 1)};
    CHECK_FALSE(sim_mq_up(empty, parse_up_word("; |a")));
}

TEST_CASE("equivalence queries") {
    const auto t = only("|a a");
    CHECK_FALSE(sim_eq(t, t.hidden));
    CHECK_FALSE(sim_eq(t, close_word(t.hidden, t.alphabet())));
    const BarNfa empty(aa);
    const auto c = sim_eq(t, empty);
    REQUIRE(c);
    CHECK(alpha_eq_string(*c, S("|a a")));
    const auto r = sim_eq(t, empty, {AdversaryMode::RenameOutsideAlphabet, 7});
    REQUIRE(r);
    CHECK(*r == S("|z1 z1"));

    // a hypothesis over other names with the same bar language
    CHECK_FALSE(sim_eq(t, singleton_automaton(S("|q q"), BarAlphabet{P("q"), B("q")})));
    CHECK(sim_eq(t, singleton_automaton(S("|q a"), BarAlphabet{P("a"), B("q")})));

    const BarNftaBottomUp other(aa, Signature{{"g", 0}});
    const HiddenTarget<BarNftaBottomUp> tt{BarNftaBottomUp(aa, Signature{{"c", 0}})};
    CHECK_THROWS_AS(sim_eq(tt, other), std::invalid_argument);
    CHECK_THROWS_AS(sim_eq(HiddenTarget<BarBuchi>{BarBuchi(aa)}, BarBuchi(aa)), UnsupportedKind);
}

TEST_CASE("equivalence agrees with bounded language comparison") {
    Rng rng(53);
    const BarAlphabet ha{P("a"), B("a"), B("b")};
    const BarAlphabet hb{P("a"), B("a"), P("b")};
    const BarAlphabet u = unite(ha, hb);
    const auto words = words_up_to(u, 6);
    int differing = 0;
    for (int i = 0; i < 25; ++i) {
        const HiddenTarget<BarNfa> t{random_nfa(rng, ha, 1 + rng.below(3), 0.3)};
        const BarNfa h = i % 3 == 0 ? close_word(t.hidden, hb) : random_nfa(rng, hb, 1 + rng.below(3), 0.3);
        const auto ct = close_word(t.hidden, u);
        const auto chyp = close_word(h, u);
        bool agree = true;
        for (const auto& w : words)
            agree = agree && literal_member_word(ct, w) == literal_member_word(chyp, w);
        for (const auto mode : {AdversaryMode::Off, AdversaryMode::RenameOutsideAlphabet}) {
            const auto c = sim_eq(t, h, {mode, static_cast<std::uint64_t>(i)});
            REQUIRE(c.has_value() == !agree);
            if (c) {
                REQUIRE(sim_mq(t, *c) != alpha_member(h, *c));
                if (mode != AdversaryMode::Off)
                    REQUIRE(bound_names_outside(*c, u));
            }
        }
        differing += agree ? 0 : 1;
    }
    CHECK(differing > 5);
}

TEST_CASE("adversarial renaming keeps the α-class") {
    Rng rng(54);
    const BarAlphabet a{P("a"), B("a"), P("b"), B("b"), P("z1")};
    for (int i = 0; i < 300; ++i) {
        const auto w = random_bar_string(rng, a, rng.below(9));
        const auto r = adversarial_rename(w, a, static_cast<std::uint64_t>(i));
        REQUIRE(alpha_eq_string(r, w));
        REQUIRE(bound_names_outside(r, a));
        REQUIRE(r == adversarial_rename(w, a, static_cast<std::uint64_t>(i)));
        REQUIRE(alpha_eq_string(adversarial_rename(r, a, 3), w));
    }
    CHECK(adversarial_rename(S("a b a"), a, 1) == S("a b a"));
    CHECK(adversarial_rename(S("|a a"), aa, 0) == S("|z1 z1"));
    // free names are never captured
    CHECK(adversarial_rename(S("z1 |a a"), aa, 0) == S("z1 |z2 z2"));

    const Signature fc{{"f", 2}, {"c", 0}};
    for (int i = 0; i < 200; ++i) {
        const auto t = random_tree(rng, a, fc, 4);
        const auto r = adversarial_rename(t, a, static_cast<std::uint64_t>(i));
        REQUIRE(alpha_eq_tree(r, t));
        REQUIRE(brute_alpha_eq_tree(r, t));
        for (const auto& n : names_of(r))
            if (!free_names(t).count(n))
                REQUIRE_FALSE(a.names().count(n));
    }
}

TEST_CASE("simulated teacher counts queries") {
    SimulatedWordTeacher teacher(only("|a a").hidden, {AdversaryMode::RenameOutsideAlphabet, 1});
    CHECK(teacher.alpha_membership(S("|b b")));
    CHECK_FALSE(teacher.alpha_membership(S("b")));
    const auto c = teacher.alpha_equivalence(BarNfa(aa));
    REQUIRE(c);
    CHECK(bound_names_outside(*c, aa));
    CHECK_FALSE(teacher.alpha_equivalence(close_word(only("|a a").hidden, aa)));
    CHECK(teacher.stats().membership_queries == 2);
    CHECK(teacher.stats().equivalence_queries == 2);
}
