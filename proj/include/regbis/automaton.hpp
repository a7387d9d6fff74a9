#pragma once

#include <string>
#include <utility>
#include <vector>

#include "regbis/alphabet.hpp"

namespace regbis {

// A word over composite letters.
using Word = std::vector<Letter>;
// A plain word on one track, as symbol indices (no blanks).
using TrackWord = std::vector<Symbol>;

// Finite automaton over a multi-track padded alphabet. Kept partial: a
// missing (state, letter) entry means reject. Normalized automata accept
// only convolution-shaped words: per track the blanks form a suffix and no
// letter is blank on every track.
struct Mta {
    TrackAlphabet alphabet;
    uint32_t num_states = 0;
    std::vector<State> initial;                                  // sorted, unique
    std::vector<char> accepting;                                 // size num_states
    std::vector<std::vector<std::pair<Letter, State>>> trans;    // per source, sorted
    bool deterministic = false;
    bool normalized = true;

    static Mta empty_language(TrackAlphabet a);
    static Mta epsilon_language(TrackAlphabet a);

    bool is_empty_language() const;
    bool accepts_epsilon() const;

    size_t transition_count() const;

    void add_transition(State src, Letter l, State dst);
    // Sorts transition lists and initial states; drops duplicates.
    void canonicalize_storage();

    bool accepts(const Word& w) const;
    // All accepted words with length <= max_len, length-lexicographic.
    std::vector<Word> enumerate(size_t max_len) const;
    // Accepted words of exactly the given length.
    std::vector<Word> enumerate_exact(size_t len) const;
    // As enumerate, aborting with resource_error when a BFS layer or the
    // result exceeds the node budget.
    std::vector<Word> enumerate_capped(size_t max_len, size_t max_nodes) const;

    std::string to_dot(const std::string& name = "mta") const;

    // Structural equality; meaningful for canonical (minimized) automata.
    bool same_structure(const Mta& o) const;

    void check_valid() const;  // throws invalid_input_error on broken indices
};

}  // namespace regbis
