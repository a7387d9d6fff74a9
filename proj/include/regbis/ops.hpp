#pragma once

#include <functional>
#include <optional>

#include "regbis/automaton.hpp"

namespace regbis {

// Guard against runaway constructions; tuned for desk-scale inputs.
inline constexpr size_t kMaxConstructionStates = 2'000'000;
inline constexpr uint64_t kMaxUniverseLetters = 4'000'000;

// Keeps states reachable from an initial state and co-reachable to an
// accepting state. Preserves determinism and language.
Mta trim(const Mta& a);

// Subset construction; result is deterministic and trim on the reachable side.
Mta determinize(const Mta& a);

// Canonical minimal partial DFA: trim, Moore refinement, BFS renumbering in
// letter order. Two language-equal inputs yield structurally equal results.
Mta minimize(const Mta& a);

Mta determinize_minimize(const Mta& a);

// All normalized convolution words over the alphabet: per track the blanks
// form a suffix, no letter is blank everywhere, the empty word included.
Mta universe(const TrackAlphabet& alphabet);

// Words of the universe with exactly / at most the given length.
Mta universe_exact_length(const TrackAlphabet& alphabet, size_t len);

enum class ProductMode { kAnd, kOr, kDiff };

// Boolean combination over the same alphabet; result canonical minimal.
Mta product(const Mta& a, const Mta& b, ProductMode mode);

// Normalized-universe complement (totalizes internally).
Mta complement(const Mta& a);

// And-join of relations over named tracks. a_tracks/b_tracks give, per input
// track, its id in a global variable space; the result covers the sorted
// union of ids. Shared tracks must carry the same symbols.
struct Joined {
    Mta aut;
    std::vector<uint32_t> tracks;  // sorted global ids
};
Joined join(const Mta& a, const std::vector<uint32_t>& a_tracks, const Mta& b,
            const std::vector<uint32_t>& b_tracks);

// Existential projection: drops the track, applies blank-suffix saturation,
// then determinizes and minimizes.
Mta project_track(const Mta& a, size_t track);

// Letters permuted so that new track i carries old track perm[i].
Mta reorder_tracks(const Mta& a, const std::vector<size_t>& perm);

// Rewrites every letter; dropping a letter removes its transitions.
Mta letter_map(const Mta& a, const TrackAlphabet& new_alphabet,
               const std::function<std::optional<Letter>(Letter)>& fn);

// {(w,w) : w in L(a)} for a 1-track automaton.
Mta diagonal(const Mta& a);

struct Equivalence {
    bool equal = true;
    Word witness;  // shortest word in the symmetric difference when !equal
};
Equivalence equivalent(const Mta& a, const Mta& b);

// Shortest accepted word (BFS, letters ascending); nullopt when empty.
std::optional<Word> shortest_word(const Mta& a);

// L(a) restricted to words of exactly the given length.
Mta length_slice(const Mta& a, size_t len);

}  // namespace regbis
