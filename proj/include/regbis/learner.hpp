#pragma once

#include <algorithm>
#include <iosfwd>
#include <map>

#include "regbis/automaton.hpp"

namespace regbis::learn {

// Active-learning teacher surface: membership and equivalence queries about
// one target regular language.
class Oracle {
public:
    virtual ~Oracle() = default;
    virtual bool membership(const Word& w) = 0;

    struct EquivAnswer {
        enum Kind { kOk, kRefuted, kCounterexample } kind = kOk;
        Word counterexample;   // for kCounterexample
        bool classification = false;  // true iff the word is in the target
        std::string message;   // teacher-side detail for ok/refuted
    };
    virtual EquivAnswer equivalence(const Mta& hypothesis) = 0;
};

struct LearnerLimits {
    size_t max_cells = 1'000'000;
    size_t max_equivalence = 200;
};

struct LearnStats {
    size_t membership_queries = 0;   // distinct words asked of the teacher
    size_t equivalence_queries = 0;
    size_t longest_counterexample = 0;
};

// L* observation table with Rivest-Schapire counterexample analysis: one
// distinguishing suffix is added per counterexample.
class ObservationTable {
public:
    ObservationTable(TrackAlphabet alphabet, std::vector<Letter> letters, Oracle& oracle,
                     LearnerLimits limits, std::ostream* log = nullptr);

    // Moves boundary rows into W until every row has a matching state row.
    void close();
    bool is_closed();
    // Requires a closed table; a total DFA over the learning letters.
    Mta hypothesis();
    // Adds one suffix of the counterexample to D (binary search over the
    // hypothesis run); the word must genuinely separate target and
    // hypothesis.
    void refine(const Word& counterexample, bool target_accepts);

    const LearnStats& stats() const { return stats_; }
    void note_equivalence() { ++stats_.equivalence_queries; }
    void note_counterexample(size_t len) {
        stats_.longest_counterexample = std::max(stats_.longest_counterexample, len);
    }
    size_t states() const { return prefixes_.size(); }
    size_t suffixes() const { return suffixes_.size(); }
    size_t cells() const { return prefixes_.size() * (1 + letters_.size()) * suffixes_.size(); }

private:
    bool member(const Word& w);
    std::vector<char> row(const Word& prefix);
    int find_state_row(const std::vector<char>& r);

    TrackAlphabet alphabet_;
    std::vector<Letter> letters_;
    Oracle& oracle_;
    LearnerLimits limits_;
    std::ostream* log_;
    std::vector<Word> prefixes_;   // W, epsilon first
    std::vector<Word> suffixes_;   // D, epsilon first
    std::map<Word, bool> cache_;
    LearnStats stats_;
};

struct LearnResult {
    enum Outcome { kAccepted, kRefuted, kCapped } outcome = kCapped;
    Mta hypothesis;
    std::string message;   // teacher payload for accepted/refuted
    LearnStats stats;
};

// The Algorithm-1 loop: close, hypothesize, ask, refine; stops on the
// teacher's verdict or when a limit trips (kCapped carries the last
// hypothesis).
LearnResult learn(Oracle& oracle, const TrackAlphabet& alphabet,
                  const std::vector<Letter>& letters, LearnerLimits limits = {},
                  std::ostream* log = nullptr);

// Learnable letters of a relation alphabet: the blank-free composite
// letters, plus the half-blank ones unless the model is length preserving.
std::vector<Letter> learning_letters(const TrackAlphabet& alphabet, bool length_preserving);

}  // namespace regbis::learn
