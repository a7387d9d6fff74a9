#pragma once

#include <functional>
#include <map>

#include "regbis/rational.hpp"
#include "regbis/wts.hpp"

namespace regbis::corpus {

enum class Property { kAnonymity, kUniformity, kCheckOnly };

std::string to_string(Property p);

// A bundled case study: regular presentation, initial set, required pairs,
// and hooks for the exact reference computation used in acceptance runs.
struct CorpusModel {
    std::string name;
    RegularWts model;
    Mta initial;            // I: 1-track
    Mta pairs;              // E: 2-track (final-pair relation for uniformity)
    std::optional<Mta> invariant;
    Property property = Property::kCheckOnly;
    // Branching bound of the reversed system (uniformity runs check the
    // reversed chain); 0 means same as the forward bound.
    uint32_t reverse_branching_bound = 0;
    std::string notes;      // encoding documentation

    // Uniformity fixtures: classifies a final state into (set, class); the
    // reachability mass of every class within one set must be equal.
    std::function<std::optional<std::pair<std::string, std::string>>(const FiniteWts&,
                                                                     uint32_t)> final_info;
    // When set, the exact probability every class must attain from s0.
    std::function<std::optional<Rat>(const FiniteWts&, uint32_t)> expected_class_prob;
};

std::vector<std::string> corpus_names();
CorpusModel load(const std::string& name);

// The Example-2 style equivalence relation for the pushdown fixture and its
// single-disjunct corruptions (index 0..3).
Mta ppda_relation();
Mta ppda_relation_corrupted(int disjunct);

// ---- exact reference computations -------------------------------------

// Absorption probabilities from s0 into each target (targets absorbing).
// States that cannot reach any absorbing state are excluded and flagged.
std::map<uint32_t, Rat> reach_distribution(const FiniteWts& m, uint32_t s0,
                                           const std::vector<uint32_t>& targets,
                                           bool* flagged = nullptr);

// Adversary-free trace masses: for every action word up to the depth, the
// total path weight following it. Two states induce the same trace
// distribution under every observational adversary iff these maps agree.
using Trace = std::vector<uint32_t>;
std::map<Trace, Rat> trace_masses(const FiniteWts& m, uint32_t s0, size_t depth);

// Trace distribution under an explicit deterministic observational
// adversary; terminal states loop through a dummy action (id = #actions).
using Adversary = std::function<std::optional<uint32_t>(const Trace&)>;
std::map<Trace, Rat> trace_distribution(const FiniteWts& m, uint32_t s0, const Adversary& f,
                                        size_t depth);

// ---- oracle drivers -----------------------------------------------------

struct OracleOutcome {
    bool ok = true;
    std::string detail;                                      // first failure
    std::vector<std::pair<std::string, std::string>> lines;  // key=value facts
};

// Checks exact uniform reachability over every final set of every initial
// configuration present at the given length.
OracleOutcome uniformity_oracle(const CorpusModel& cm, size_t length);

// Checks that all E-related initial pairs have identical trace masses up to
// the depth, and that at least one non-E pair differs (when one exists).
OracleOutcome anonymity_oracle(const CorpusModel& cm, size_t length, size_t depth);

// Instance lengths (ascending) at which the initial set is nonempty.
std::vector<size_t> instance_lengths(const CorpusModel& cm, size_t max_length);

// States of the instance accepted by a 1-track set automaton.
std::vector<uint32_t> states_in(const FiniteWts& inst, const Mta& set);

}  // namespace regbis::corpus
