#pragma once

#include <optional>

#include "regbis/automaton.hpp"

namespace regbis {

// Convolution of one word per track, padded with blanks to the longest.
Word convolve(const std::vector<TrackWord>& words, const TrackAlphabet& alphabet);

// Splits a padded word back into per-track words. Fails (nullopt) when the
// word is not convolution-shaped: a letter blank on all tracks, or a track
// resuming after its blanks started.
std::optional<std::vector<TrackWord>> deconvolve(const Word& w, const TrackAlphabet& alphabet);

// Convenience conversions between symbol words and name lists.
TrackWord track_word(const TrackAlphabet& alphabet, size_t track,
                     const std::vector<std::string>& names);
// One-letter-per-character form, for test fixtures with single-char symbols.
TrackWord track_word_chars(const TrackAlphabet& alphabet, size_t track, const std::string& chars);
std::string track_word_str(const TrackAlphabet& alphabet, size_t track, const TrackWord& w);
std::string word_str(const TrackAlphabet& alphabet, const Word& w);

}  // namespace regbis
