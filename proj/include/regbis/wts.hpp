#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "regbis/automaton.hpp"

namespace regbis {

enum class WtsKind { kWts, kMarkovChain, kMdp };

std::string to_string(WtsKind k);

// Regular presentation of a parameterized weighted transition system. The
// transition function of each action is a 3-track automaton over source,
// target and weight tracks; weights are canonical LSB-first binary words.
struct RegularWts {
    Mta config_universe;            // 1-track
    Mta weight_universe;            // 1-track over {0,1}
    std::vector<std::string> actions;
    std::vector<Mta> delta;         // per action, tracks (s, t, p)
    uint32_t branching_bound = 1;
    WtsKind kind = WtsKind::kWts;
    uint64_t q = 0;                 // stochasticity constant for MC/MDP
    bool length_preserving = false;

    const std::vector<std::string>& config_symbols() const {
        return config_universe.alphabet.track_symbols(0);
    }
    size_t action_index(const std::string& name) const;
};

struct ConditionReport {
    bool ok = true;
    std::string witness;  // rendered assignment when !ok
};

struct ValidationReport {
    ConditionReport branching;
    ConditionReport functional;
    ConditionReport stochastic;
    ConditionReport length_preserving;
    bool all_ok() const {
        return branching.ok && functional.ok && stochastic.ok && length_preserving.ok;
    }
};

// Checks the well-formedness conditions of a regular presentation: bounded
// branching, weight functionality, kind-specific stochasticity, and the
// declared length preservation. Failures carry shortest witnesses.
ValidationReport validate(const RegularWts& m);

// Explicit finite instance at one configuration length.
struct FiniteWts {
    TrackAlphabet config_alpha;              // 1-track, for display
    std::vector<TrackWord> states;           // sorted
    std::vector<std::string> actions;
    WtsKind kind = WtsKind::kWts;
    uint64_t q = 0;
    struct Edge {
        uint32_t src, act, dst;
        uint64_t weight;
    };
    std::vector<Edge> edges;                 // sorted by (src, act, dst)

    std::optional<uint32_t> state_index(const TrackWord& w) const;
    std::string state_name(uint32_t i) const;
    // weight of (src, act, dst), 0 when absent
    uint64_t weight(uint32_t src, uint32_t act, uint32_t dst) const;
    std::vector<std::vector<std::vector<std::pair<uint32_t, uint64_t>>>> adjacency() const;
};

inline constexpr size_t kDefaultInstanceCap = 200000;

FiniteWts instantiate(const RegularWts& m, size_t length, size_t state_cap = kDefaultInstanceCap);

// The forward closure of the seed configurations: enough of the instance to
// decide bisimilarity of the seeds. State indices refer to this sub-instance.
FiniteWts instantiate_closure(const RegularWts& m, const std::vector<TrackWord>& seeds,
                              size_t state_cap = kDefaultInstanceCap);

// Swaps source and target of a single-action system; the result is a plain
// WTS since reversal need not be stochastic.
RegularWts reverse(const RegularWts& m);

// Tags each side with a fresh prefix letter so the universes are disjoint.
RegularWts disjoint_union(const RegularWts& m1, const RegularWts& m2);

// Length-preserving variant over an extended alphabet with a pad letter.
// size_bound relates each configuration to its padded forms; it must lie in
// the padding relation and be functional in length.
RegularWts pad(const RegularWts& m, const Mta& size_bound, const std::string& pad_symbol = "_");

// {(x, x . tag)} style helpers used by union/padding and the fixtures.
Mta prepend_letter_relation(const std::vector<std::string>& symbols, const std::string& tag);
Mta pad_relation(const std::vector<std::string>& symbols_with_pad, const std::string& pad_symbol);

// Lifts a 1-track (or per-track) automaton onto a larger symbol set by name.
Mta lift_symbols(const Mta& a, const std::vector<std::vector<std::string>>& new_symbols);

}  // namespace regbis
