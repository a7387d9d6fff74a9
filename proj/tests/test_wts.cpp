#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "regbis/bisim.hpp"
#include "regbis/convolution.hpp"
#include "regbis/corpus.hpp"
#include "regbis/errors.hpp"
#include "regbis/ops.hpp"
#include "regbis/regex.hpp"
#include "regbis/weights.hpp"
#include "support/test_util.hpp"

using namespace regbis;
using namespace regbis::testutil;

TEST_CASE("ppda model validates with branching bound 3") {
    auto cm = corpus::load("ppda_example");
    auto rep = validate(cm.model);
    CHECK(rep.branching.ok);
    CHECK(rep.functional.ok);
    CHECK(rep.stochastic.ok);
    CHECK(rep.all_ok());
    // Tightening the bound to 2 must produce a witness (cX has 3 successors).
    RegularWts tight = cm.model;
    tight.branching_bound = 2;
    auto rep2 = validate(tight);
    CHECK(!rep2.branching.ok);
    CHECK(!rep2.branching.witness.empty());
}

TEST_CASE("double weight for one transition is flagged") {
    std::vector<std::string> syms{"a", "b"};
    TrackAlphabet a3({syms, syms, weight_symbols()});
    TrackAlphabet a1({syms});
    RegularWts m;
    m.config_universe = universe(a1);
    m.weight_universe = weight_universe();
    m.actions = {"step"};
    auto mk = [&](const char* s, const char* t, uint64_t w) {
        return convolve({track_word(a3, 0, {s}), track_word(a3, 1, {t}), encode_weight(w)}, a3);
    };
    Mta d;
    d.alphabet = a3;
    d.num_states = 0;
    d.deterministic = true;
    // word set {a->b w1, a->b w2}
    std::vector<Word> ws{mk("a", "b", 1), mk("a", "b", 2)};
    std::vector<Re> parts;
    for (auto& w : ws) {
        std::vector<Re> seq;
        for (Letter l : w) seq.push_back(Re::lit(l));
        parts.push_back(Re::seq(std::move(seq)));
    }
    m.delta = {Re::alt(std::move(parts)).to_mta(a3)};
    m.branching_bound = 2;
    m.kind = WtsKind::kWts;
    auto rep = validate(m);
    CHECK(!rep.functional.ok);
    CHECK(rep.functional.witness.find("a") != std::string::npos);
}

TEST_CASE("random walk validates as a Markov chain") {
    auto cm = corpus::load("random_walk");
    auto rep = validate(cm.model);
    CHECK(rep.branching.ok);
    CHECK(rep.functional.ok);
    CHECK(rep.stochastic.ok);
    CHECK(rep.length_preserving.ok);
    // Cross-check stochasticity by enumerating instances.
    for (size_t len = 2; len <= 6; ++len) {
        FiniteWts inst = instantiate(cm.model, len);
        auto adj = inst.adjacency();
        for (uint32_t s = 0; s < inst.states.size(); ++s) {
            uint64_t total = 0;
            for (auto& row : adj[s])
                for (auto& [t, w] : row) total += w;
            CHECK(total == cm.model.q);
        }
    }
}

TEST_CASE("random walk instance at the smallest length") {
    auto cm = corpus::load("random_walk");
    FiniteWts inst = instantiate(cm.model, 2);
    REQUIRE(inst.states.size() == 3);
    auto center = inst.state_index(track_word(inst.config_alpha, 0, {"w", "X"}));
    auto left = inst.state_index(track_word(inst.config_alpha, 0, {"l", "o"}));
    auto right = inst.state_index(track_word(inst.config_alpha, 0, {"r", "o"}));
    REQUIRE(center);
    REQUIRE(left);
    REQUIRE(right);
    CHECK(inst.weight(*center, 0, *left) == 1);
    CHECK(inst.weight(*center, 0, *right) == 1);
    CHECK(inst.weight(*left, 0, *left) == 2);
    CHECK(inst.weight(*right, 0, *right) == 2);
    CHECK(inst.edges.size() == 4);
}

TEST_CASE("instantiate requires length preservation and honors the cap") {
    auto cm = corpus::load("ppda_example");
    CHECK_THROWS_AS(instantiate(cm.model, 3), unsupported_operation_error);
    auto walk = corpus::load("random_walk");
    CHECK_THROWS_AS(instantiate(walk.model, 6, 2), resource_error);
    // An empty length yields an empty instance.
    FiniteWts inst = instantiate(walk.model, 1);
    CHECK(inst.states.empty());
}

TEST_CASE("reverse is an involution and swaps edges") {
    auto cm = corpus::load("figure3_chain");
    RegularWts rev = reverse(cm.model);
    CHECK(rev.kind == WtsKind::kWts);
    RegularWts back = reverse(rev);
    CHECK(equivalent(back.delta[0], cm.model.delta[0]).equal);
    // q2's only reversed edge besides its self-loop goes to b with full weight.
    FiniteWts inst = instantiate(rev, 1);
    auto q2 = inst.state_index(track_word(inst.config_alpha, 0, {"2"}));
    auto b = inst.state_index(track_word(inst.config_alpha, 0, {"b"}));
    REQUIRE(q2);
    REQUIRE(b);
    CHECK(inst.weight(*q2, 0, *b) == 3);
    size_t out = 0;
    for (auto& e : inst.edges)
        if (e.src == *q2) ++out;
    CHECK(out == 2);
    // reversed instance edges = forward instance edges with endpoints swapped
    FiniteWts fwd = instantiate(cm.model, 1);
    for (auto& e : fwd.edges) CHECK(inst.weight(e.dst, e.act, e.src) == e.weight);
    // multi-action systems cannot be reversed
    auto dcp = corpus::load("dcp_anonymity");
    CHECK_THROWS_AS(reverse(dcp.model), unsupported_operation_error);
}

TEST_CASE("disjoint union doubles instances under fresh tags") {
    auto cm = corpus::load("random_walk");
    RegularWts uni = disjoint_union(cm.model, cm.model);
    CHECK(uni.kind == WtsKind::kMarkovChain);
    CHECK(uni.branching_bound == 2);
    for (size_t len = 2; len <= 4; ++len) {
        FiniteWts orig = instantiate(cm.model, len);
        FiniteWts both = instantiate(uni, len + 1);
        CHECK(both.states.size() == 2 * orig.states.size());
        CHECK(both.edges.size() == 2 * orig.edges.size());
    }
    auto rep = validate(uni);
    CHECK(rep.branching.ok);
    CHECK(rep.stochastic.ok);
}

TEST_CASE("padding an already length-preserving model with the identity bound") {
    auto cm = corpus::load("figure3_chain");
    Mta ident = diagonal(cm.model.config_universe);
    RegularWts padded = pad(cm.model, ident);
    CHECK(padded.length_preserving);
    // Same language up to the symbol-set extension.
    std::vector<std::string> syms = cm.model.config_symbols();
    syms.push_back("_");
    CHECK(equivalent(padded.config_universe, lift_symbols(cm.model.config_universe, {syms})).equal);
    CHECK(equivalent(padded.delta[0],
                     lift_symbols(cm.model.delta[0], {syms, syms, weight_symbols()}))
              .equal);
}

TEST_CASE("pad relation pads with the fresh letter") {
    std::vector<std::string> syms{"a", "b", "_"};
    Mta pr = pad_relation(syms, "_");
    TrackAlphabet a2({syms, syms});
    auto cw = [&](const std::string& x, const std::string& y) {
        return convolve({track_word_chars(a2, 0, x), track_word_chars(a2, 1, y)}, a2);
    };
    CHECK(pr.accepts(cw("ab", "ab__")));
    CHECK(pr.accepts(cw("ab", "ab")));
    CHECK(!pr.accepts(cw("ab", "a_b")));
    // Pad(ab) intersected with length 4 is exactly ab__.
    TrackAlphabet a1({syms});
    Mta ab = Re::seq({Re::lit(L1(a1, "a")), Re::lit(L1(a1, "b"))}).to_mta(a1);
    auto j = join(pr, {0, 1}, ab, {0});
    Mta pads_of_ab = project_track(j.aut, 0);
    auto words = length_slice(pads_of_ab, 4).enumerate(4);
    REQUIRE(words.size() == 1);
    CHECK(track_word_str(a1, 0, (*deconvolve(words[0], a1))[0]) == "ab__");
}

TEST_CASE("padding a shrinking counter preserves bisimilarity") {
    // Counter: a^{k+1} -> a^k with weight 2; the empty word loops.
    std::vector<std::string> syms{"a"};
    TrackAlphabet a1({syms});
    RegularWts m;
    m.config_universe = universe(a1);
    m.weight_universe = weight_universe();
    m.actions = {"step"};
    // Build the (s,t) pair languages and attach the weight 2 = "01" by join.
    TrackAlphabet a2({syms, syms});
    TrackAlphabet aw({weight_symbols()});
    Mta shrink_pairs = Re::seq({Re::star(Re::lit(a2.encode(std::vector<Symbol>{0, 0}))),
                                Re::lit(a2.encode(std::vector<Symbol>{0, a2.blank(1)}))})
                           .to_mta(a2);
    Mta w2 = Re::seq({Re::lit(aw.encode(std::vector<Symbol>{0})),
                      Re::lit(aw.encode(std::vector<Symbol>{1}))})
                 .to_mta(aw);
    auto d1 = join(shrink_pairs, {0, 1}, w2, {2});
    auto d2 = join(Mta::epsilon_language(a2), {0, 1}, w2, {2});
    m.delta = {product(d1.aut, d2.aut, ProductMode::kOr)};
    m.branching_bound = 1;
    m.kind = WtsKind::kMarkovChain;
    m.q = 2;
    m.length_preserving = false;

    // size bound: pad everything to length exactly 4.
    std::vector<std::string> padded_syms{"a", "_"};
    TrackAlphabet ap({padded_syms, padded_syms});
    Mta pr = pad_relation(padded_syms, "_");
    Mta len4 = length_slice(universe(TrackAlphabet({padded_syms})), 4);
    auto jj = join(pr, {0, 1}, len4, {1});
    Mta size_bound = jj.aut;
    RegularWts padded = pad(m, size_bound);
    CHECK(padded.length_preserving);
    auto rep = validate(padded);
    CHECK(rep.branching.ok);
    CHECK(rep.functional.ok);

    FiniteWts inst = instantiate(padded, 4);
    REQUIRE(inst.states.size() == 5);  // a^k . _^(4-k), k = 0..4
    // Bisimilarity in the padded instance matches the hand-built original.
    FiniteWts orig;
    orig.config_alpha = a1;
    for (int k = 0; k <= 4; ++k) orig.states.push_back(TrackWord(k, 0));
    std::sort(orig.states.begin(), orig.states.end());
    orig.actions = {"step"};
    orig.kind = WtsKind::kMarkovChain;
    orig.q = 2;
    for (int k = 1; k <= 4; ++k)
        orig.edges.push_back({*orig.state_index(TrackWord(k, 0)), 0,
                              *orig.state_index(TrackWord(k - 1, 0)), 2});
    orig.edges.push_back({*orig.state_index(TrackWord{}), 0, *orig.state_index(TrackWord{}), 2});
    std::sort(orig.edges.begin(), orig.edges.end(),
              [](const FiniteWts::Edge& x, const FiniteWts::Edge& y) {
                  return std::tie(x.src, x.act, x.dst) < std::tie(y.src, y.act, y.dst);
              });
    auto po = greatest_bisimulation(orig);
    auto pp = greatest_bisimulation(inst);
    // Map a^k to its padded form and compare all pairs.
    auto padded_index = [&](int k) {
        TrackWord w(static_cast<size_t>(k), inst.config_alpha.symbol_index(0, "a"));
        while (w.size() < 4) w.push_back(inst.config_alpha.symbol_index(0, "_"));
        return *inst.state_index(w);
    };
    for (int i = 0; i <= 4; ++i)
        for (int j = 0; j <= 4; ++j) {
            bool orig_b = po.same_block(*orig.state_index(TrackWord(i, 0)),
                                        *orig.state_index(TrackWord(j, 0)));
            bool pad_b = pp.same_block(padded_index(i), padded_index(j));
            CHECK(orig_b == pad_b);
        }
    // A size bound that pads one word to two different lengths is rejected.
    Mta bad = product(jj.aut, join(pr, {0, 1}, length_slice(universe(TrackAlphabet({padded_syms})), 5), {1}).aut,
                      ProductMode::kOr);
    CHECK_THROWS_AS(pad(m, bad), invalid_input_error);
}
