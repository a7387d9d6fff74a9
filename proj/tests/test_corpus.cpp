#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "regbis/bisim.hpp"
#include "regbis/convolution.hpp"
#include "regbis/corpus.hpp"
#include "regbis/errors.hpp"
#include "regbis/ops.hpp"
#include "regbis/weights.hpp"

using namespace regbis;
namespace C = regbis::corpus;

TEST_CASE("every corpus model validates with its declared kind") {
    for (auto& name : C::corpus_names()) {
        CAPTURE(name);
        auto cm = C::load(name);
        auto rep = validate(cm.model);
        CHECK(rep.branching.ok);
        CHECK(rep.functional.ok);
        CHECK(rep.stochastic.ok);
        CHECK(rep.length_preserving.ok);
        // E stays within configuration pairs.
        auto ju = join(cm.model.config_universe, {0}, cm.model.config_universe, {1});
        CHECK(product(cm.pairs, ju.aut, ProductMode::kDiff).is_empty_language());
        // I within the universe.
        CHECK(product(cm.initial, cm.model.config_universe, ProductMode::kDiff)
                  .is_empty_language());
    }
}

TEST_CASE("figure 3 reach probabilities are one half each") {
    auto cm = C::load("figure3_chain");
    FiniteWts inst = instantiate(cm.model, 1);
    auto s = C::states_in(inst, cm.initial);
    REQUIRE(s.size() == 1);
    auto q1 = inst.state_index(track_word(inst.config_alpha, 0, {"1"}));
    auto q2 = inst.state_index(track_word(inst.config_alpha, 0, {"2"}));
    auto dist = C::reach_distribution(inst, s[0], {*q1, *q2});
    CHECK(dist[*q1] == Rat(1, 2));
    CHECK(dist[*q2] == Rat(1, 2));
    auto oc = C::uniformity_oracle(cm, 1);
    CHECK(oc.ok);
}

TEST_CASE("two state chain absorbs with probability one") {
    FiniteWts m;
    m.config_alpha = TrackAlphabet(std::vector<std::vector<std::string>>{{"a", "b"}});
    m.states = {{0}, {1}};
    m.actions = {"step"};
    m.kind = WtsKind::kMarkovChain;
    m.q = 4;
    m.edges = {{0, 0, 1, 4}, {1, 0, 1, 4}};
    auto dist = C::reach_distribution(m, 0, {1});
    CHECK(dist[1] == Rat(1));
    CHECK_THROWS_AS(C::reach_distribution(m, 0, {0}), invalid_input_error);
}

TEST_CASE("random walk oracle confirms both walls at one half") {
    auto cm = C::load("random_walk");
    for (size_t len : C::instance_lengths(cm, 6)) {
        auto oc = C::uniformity_oracle(cm, len);
        CAPTURE(len);
        CAPTURE(oc.detail);
        CHECK(oc.ok);
    }
}

TEST_CASE("random sum matches the binomial distribution") {
    auto cm = C::load("random_sum");
    FiniteWts inst = instantiate(cm.model, 5);  // 4 coins
    auto initials = C::states_in(inst, cm.initial);
    REQUIRE(initials.size() == 1);
    std::vector<uint32_t> finals;
    for (uint32_t st = 0; st < inst.states.size(); ++st)
        if (cm.final_info(inst, st)) finals.push_back(st);
    auto dist = C::reach_distribution(inst, initials[0], finals);
    std::map<std::string, Rat> by_class;
    for (auto& [t, p] : dist) by_class[cm.final_info(inst, t)->second] += p;
    CHECK(by_class["sum=1"] == Rat(4, 16));
    CHECK(by_class["sum=3"] == Rat(4, 16));
    CHECK(by_class["sum=0"] == Rat(1, 16));
    CHECK(by_class["sum=2"] == Rat(6, 16));
    auto oc = C::uniformity_oracle(cm, 5);
    CHECK(oc.ok);
}

TEST_CASE("knuth yao outputs are exactly uniform") {
    auto cm = C::load("knuth_yao_rng");
    for (size_t len : C::instance_lengths(cm, 5)) {
        auto oc = C::uniformity_oracle(cm, len);
        CAPTURE(len);
        CAPTURE(oc.detail);
        CHECK(oc.ok);
    }
    // n in {3,5,6,7} live at lengths 4 and 5; check 1/n explicitly.
    FiniteWts inst = instantiate(cm.model, 5);
    for (uint32_t s0 : C::states_in(inst, cm.initial)) {
        const TrackWord& w = inst.states[s0];
        uint64_t n = 0;
        for (size_t i = w.size(); i-- > 1;)
            n = n * 2 + (inst.config_alpha.symbol_name(0, w[i])[2] - '0');
        std::vector<uint32_t> finals;
        for (uint32_t st = 0; st < inst.states.size(); ++st)
            if (cm.final_info(inst, st)) finals.push_back(st);
        auto dist = C::reach_distribution(inst, s0, finals);
        std::map<std::string, Rat> by_class;
        for (auto& [t, p] : dist)
            if (p != Rat(0)) by_class[cm.final_info(inst, t)->second] += p;
        CHECK(by_class.size() == n);
        for (auto& [cls, p] : by_class) CHECK(p == Rat(1, Int(n)));
    }
}

TEST_CASE("naive rng is uniform per restart budget") {
    auto cm = C::load("naive_rng");
    for (size_t len : C::instance_lengths(cm, 4)) {
        auto oc = C::uniformity_oracle(cm, len);
        CAPTURE(len);
        CAPTURE(oc.detail);
        CHECK(oc.ok);
    }
}

TEST_CASE("ballot reflection holds") {
    auto cm = C::load("ballot");
    for (size_t len : C::instance_lengths(cm, 5)) {
        auto oc = C::uniformity_oracle(cm, len);
        CAPTURE(len);
        CAPTURE(oc.detail);
        CHECK(oc.ok);
    }
}

TEST_CASE("dcp program is uniform over compatible announcements") {
    auto cm = C::load("dcp_uniform");
    for (size_t len : C::instance_lengths(cm, 6)) {
        auto oc = C::uniformity_oracle(cm, len);
        CAPTURE(len);
        CAPTURE(oc.detail);
        CHECK(oc.ok);
    }
}

TEST_CASE("ppda transition weights from cX") {
    auto cm = C::load("ppda_example");
    // enumerate successors of cX via the delta automaton
    TrackAlphabet a1 = cm.model.config_universe.alphabet;
    TrackWord cx = track_word(a1, 0, {"c", "X"});
    Mta cx_aut = [&] {
        Word w = convolve({cx}, a1);
        Mta m = Mta::epsilon_language(a1);
        // build a single-word automaton
        m.num_states = static_cast<uint32_t>(w.size() + 1);
        m.initial = {0};
        m.accepting.assign(m.num_states, 0);
        m.accepting[w.size()] = 1;
        m.trans.assign(m.num_states, {});
        for (size_t i = 0; i < w.size(); ++i)
            m.trans[i].emplace_back(w[i], static_cast<State>(i + 1));
        m.deterministic = true;
        return m;
    }();
    auto j = join(cm.model.delta[0], {0, 1, 2}, cx_aut, {0});
    std::multiset<uint64_t> weights;
    for (auto& w : j.aut.enumerate(8)) {
        auto tw = deconvolve(w, j.aut.alphabet);
        weights.insert(*decode_weight((*tw)[2]));
    }
    CHECK(weights == std::multiset<uint64_t>({2, 3, 5}));
}

TEST_CASE("dcp anonymity trace masses") {
    auto cm = C::load("dcp_anonymity");
    // n = 3 cells at length 4
    FiniteWts inst = instantiate(cm.model, 4);
    auto oc = C::anonymity_oracle(cm, 4, 8);
    CAPTURE(oc.detail);
    CHECK(oc.ok);
    // Unrelated initial pair (different parity) distinguishes at depth 2n+2.
    auto initials = C::states_in(inst, cm.initial);
    bool found = false;
    for (size_t i = 0; i < initials.size() && !found; ++i)
        for (size_t j = 0; j < initials.size() && !found; ++j) {
            if (i == j) continue;
            Word w = convolve({inst.states[initials[i]], inst.states[initials[j]]},
                              cm.pairs.alphabet);
            if (cm.pairs.accepts(w)) continue;
            auto mi = C::trace_masses(inst, initials[i], 8);
            auto mj = C::trace_masses(inst, initials[j], 8);
            if (mi != mj) found = true;
        }
    CHECK(found);
}

TEST_CASE("trace distribution under explicit adversaries") {
    auto cm = C::load("dcp_anonymity");
    FiniteWts inst = instantiate(cm.model, 4);
    auto initials = C::states_in(inst, cm.initial);
    // A fixed observational adversary: H at coin choices, announce bit 1 if
    // possible, otherwise 0; encoded by position.
    size_t aH = cm.model.action_index("H");
    size_t aX = cm.model.action_index("X");
    size_t a1 = cm.model.action_index("1");
    C::Adversary adv = [&](const C::Trace& t) -> std::optional<uint32_t> {
        size_t step = t.size();
        if (step == 0 || step == 2) return static_cast<uint32_t>(aH);
        if (step == 1) return static_cast<uint32_t>(aX);
        return static_cast<uint32_t>(a1);
    };
    // E-related pairs get identical distributions.
    for (size_t i = 0; i < initials.size(); ++i)
        for (size_t j = i + 1; j < initials.size(); ++j) {
            Word w = convolve({inst.states[initials[i]], inst.states[initials[j]]},
                              cm.pairs.alphabet);
            if (!cm.pairs.accepts(w)) continue;
            auto di = C::trace_distribution(inst, initials[i], adv, 8);
            auto dj = C::trace_distribution(inst, initials[j], adv, 8);
            CHECK(di == dj);
        }
    // A single-path chain yields the unique trace with probability one.
    auto fig = C::load("figure3_chain");
    FiniteWts f = instantiate(fig.model, 1);
    auto b = f.state_index(track_word(f.config_alpha, 0, {"b"}));
    C::Adversary step0 = [](const C::Trace&) -> std::optional<uint32_t> { return 0; };
    auto d = C::trace_distribution(f, *b, step0, 3);
    CHECK(d[C::Trace{0, 0, 0}] == Rat(1));
    // Selecting a globally disabled action is a contract violation.
    C::Adversary bad = [&](const C::Trace&) -> std::optional<uint32_t> { return 7; };
    CHECK_THROWS_AS(C::trace_distribution(inst, initials[0], bad, 2), invalid_input_error);
}
