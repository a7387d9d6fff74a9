#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "regbis/errors.hpp"
#include "regbis/fo.hpp"
#include "regbis/ops.hpp"
#include "regbis/regex.hpp"
#include "regbis/weights.hpp"
#include "support/fo_oracle.hpp"
#include "support/test_util.hpp"

using namespace regbis;
using namespace regbis::testutil;
namespace F = regbis::fo;

namespace {

TrackWord bits(const std::string& s) {
    TrackWord w;
    for (char c : s) w.push_back(static_cast<Symbol>(c - '0'));
    return w;
}

F::Binding word_binding() {
    F::Binding b;
    std::vector<std::string> syms{"a", "b"};
    b.sorts["U"] = universe(alpha1(syms));
    b.relations["eq"] = F::builtin_eq(syms);
    b.relations["neq"] = F::builtin_neq(syms);
    b.relations["prefix"] = F::builtin_prefix(syms);
    b.relations["succ_a"] = F::builtin_succ(syms, "a");
    b.relations["eqL"] = F::builtin_eqL(syms, syms);
    return b;
}

F::Binding weight_binding() {
    F::Binding b;
    b.sorts["P"] = weight_universe();
    b.relations["add"] = F::builtin_add();
    b.relations["eq"] = F::builtin_eq(weight_symbols());
    b.relations["zero"] = Mta::epsilon_language(TrackAlphabet({weight_symbols()}));
    return b;
}

}  // namespace

TEST_CASE("add relation on small sums") {
    Mta add = F::builtin_add();
    // 2 + 3 = 5, LSB-first.
    CHECK(add.accepts(convolve({bits("01"), bits("11"), bits("101")}, add.alphabet)));
    CHECK(!add.accepts(convolve({bits("01"), bits("11"), bits("11")}, add.alphabet)));
    // 0 + 0 = 0 with canonical zero = empty word.
    CHECK(add.accepts(convolve({{}, {}, {}}, add.alphabet)));
    // Non-canonical operand (trailing zero letter) is rejected.
    CHECK(!add.accepts(convolve({bits("10"), bits("1"), bits("01")}, add.alphabet)));
    for (uint64_t x = 0; x < 64; ++x)
        for (uint64_t y = 0; y < 64; y += 7) {
            Word w = convolve({encode_weight(x), encode_weight(y), encode_weight(x + y)},
                              add.alphabet);
            CHECK(add.accepts(w));
            Word bad = convolve({encode_weight(x), encode_weight(y), encode_weight(x + y + 1)},
                                add.alphabet);
            CHECK(!add.accepts(bad));
        }
}

TEST_CASE("add is a total function on canonical weights") {
    auto b = weight_binding();
    auto f = F::forall(
        "x", "P",
        F::forall("y", "P",
                  F::exists("z", "P",
                            F::land({F::atom("add", {"x", "y", "z"}),
                                     F::forall("w", "P",
                                               F::implies(F::atom("add", {"x", "y", "w"}),
                                                          F::atom("eq", {"z", "w"})))}))));
    CHECK(F::holds(f, b).holds);
}

TEST_CASE("eqL and prefix basics") {
    TrackAlphabet a4 = alpha1({"a", "b", "c", "d"});
    Mta eqL = F::builtin_eqL({"a", "b", "c", "d"}, {"a", "b", "c", "d"});
    auto cw = [&](const std::string& x, const std::string& y) {
        return convolve({track_word_chars(eqL.alphabet, 0, x), track_word_chars(eqL.alphabet, 1, y)},
                        eqL.alphabet);
    };
    CHECK(eqL.accepts(cw("ab", "cd")));
    CHECK(!eqL.accepts(cw("a", "bc")));
    Mta pre = F::builtin_prefix({"a", "b"});
    auto cw2 = [&](const std::string& x, const std::string& y) {
        return convolve({track_word_chars(pre.alphabet, 0, x), track_word_chars(pre.alphabet, 1, y)},
                        pre.alphabet);
    };
    CHECK(pre.accepts(cw2("ab", "abb")));
    CHECK(pre.accepts(cw2("ab", "ab")));
    CHECK(pre.accepts(cw2("", "ab")));
    CHECK(!pre.accepts(cw2("b", "ab")));
}

TEST_CASE("compile of an existential equality is the universe") {
    auto b = word_binding();
    Mta r = F::compile(F::exists("y", "U", F::atom("eq", {"x", "y"})), b, {{"x", "U"}});
    CHECK(equivalent(r, b.sorts["U"]).equal);
}

TEST_CASE("adding zero is the identity") {
    auto b = weight_binding();
    auto f = F::forall("z", "P",
                       F::implies(F::exists("y", "P", F::land({F::atom("zero", {"y"}),
                                                               F::atom("add", {"x", "y", "z"})})),
                                  F::atom("eq", {"x", "z"})));
    Mta r = F::compile(f, b, {{"x", "P"}});
    CHECK(equivalent(r, b.sorts["P"]).equal);
}

TEST_CASE("a word never precedes its own extension backwards") {
    auto b = word_binding();
    Mta r = F::compile(
        F::exists("y", "U", F::land({F::atom("succ_a", {"x", "y"}), F::atom("prefix", {"y", "x"})})),
        b, {{"x", "U"}});
    CHECK(r.is_empty_language());
}

TEST_CASE("holds on reflexivity and a refuted sentence") {
    auto b = word_binding();
    CHECK(F::holds(F::forall("x", "U", F::atom("eq", {"x", "x"})), b).holds);
    auto r = F::holds(F::forall("x", "U", F::forall("y", "U", F::atom("eq", {"x", "y"}))), b);
    REQUIRE(!r.holds);
    REQUIRE(r.witness.size() == 2);
    CHECK(r.witness[0].second != r.witness[1].second);
    // Shortest violating assignment: the convolution has a single letter.
    CHECK(std::max(r.witness[0].second.size(), r.witness[1].second.size()) == 1);
}

TEST_CASE("sort relativization restricts quantifiers") {
    auto b = word_binding();
    // Even-length words of a's only.
    TrackAlphabet a1 = alpha1({"a", "b"});
    Mta even_a = Re::star(Re::seq({Re::lit(L1(a1, "a")), Re::lit(L1(a1, "a"))})).to_mta(a1);
    b.sorts["Even"] = even_a;
    Mta r = F::compile(F::exists("y", "Even", F::atom("eq", {"x", "y"})), b, {{"x", "U"}});
    CHECK(equivalent(r, even_a).equal);
}

TEST_CASE("double negation is stable") {
    auto b = word_binding();
    std::mt19937_64 rng(5150);
    for (int i = 0; i < 10; ++i) {
        Mta rel = random_nfa(rng, alpha2({"a", "b"}), 4, 0.25);
        b.relations["Rnd"] = rel;
        auto f = F::exists("y", "U", F::atom("Rnd", {"x", "y"}));
        Mta once = F::compile(f, b, {{"x", "U"}});
        Mta twice = F::compile(F::lnot(F::lnot(f)), b, {{"x", "U"}});
        CHECK(equivalent(once, twice).equal);
    }
}

TEST_CASE("compile input validation") {
    auto b = word_binding();
    CHECK_THROWS_AS(F::compile(F::atom("nosuch", {"x"}), b, {{"x", "U"}}), invalid_input_error);
    CHECK_THROWS_AS(F::compile(F::atom("eq", {"x"}), b, {{"x", "U"}}), invalid_input_error);
    CHECK_THROWS_AS(F::compile(F::atom("eq", {"x", "y"}), b, {{"x", "U"}}), invalid_input_error);
    // Shadowing is rejected.
    CHECK_THROWS_AS(
        F::holds(F::forall("x", "U", F::forall("x", "U", F::atom("eq", {"x", "x"}))), b),
        invalid_input_error);
}

TEST_CASE("random sentences agree with explicit evaluation") {
    // Quantifiers range over the words of length <= 5, so the symbolic and
    // the enumerating evaluation decide the same statement.
    std::mt19937_64 rng(424242);
    TrackAlphabet a2 = alpha2({"a", "b"});
    TrackAlphabet a1 = alpha1({"a", "b"});
    Mta any = Re::lits({L1(a1, "a"), L1(a1, "b")}).to_mta(a1);
    Mta u5 = Re::repeat(Re::opt(Re::lits({L1(a1, "a"), L1(a1, "b")})), 5).to_mta(a1);
    int checked = 0;
    for (int round = 0; round < 12; ++round) {
        F::Binding b = word_binding();
        b.sorts["U"] = u5;
        b.relations["R1"] = random_nfa(rng, a2, 4, 0.3);
        b.relations["R2"] = random_nfa(rng, a2, 3, 0.35);
        b.relations["Q"] = random_nfa(rng, a1, 4, 0.4);
        FoOracle oracle(b, 5);
        SentenceGen gen(rng, {{"R1", 2}, {"R2", 2}, {"Q", 1}, {"eq", 2}, {"prefix", 2}}, "U");
        for (int i = 0; i < 5; ++i) {
            auto s = gen.sentence(3);
            bool expect = oracle.eval(s);
            bool got = F::holds(s, b).holds;
            CHECK(got == expect);
            ++checked;
        }
    }
    CHECK(checked == 60);
    (void)any;
}
