#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace regbis {

using State = uint32_t;
using Letter = uint64_t;
// Per-track symbol index. The blank symbol of track t is the index
// track_size(t); it is never listed among the track's symbols.
using Symbol = uint16_t;

// Alphabet of a k-track automaton. A composite letter is a tuple with one
// entry per track, drawn from that track's symbols plus the blank. Letters
// are stored as mixed-radix codes with track 0 most significant, so the
// numeric order of codes equals the tuple order of per-track indices
// (blank sorting last on each track).
class TrackAlphabet {
public:
    TrackAlphabet() = default;
    explicit TrackAlphabet(std::vector<std::vector<std::string>> track_symbols);

    size_t track_count() const { return tracks_.size(); }
    size_t track_size(size_t t) const { return tracks_[t].size(); }
    uint32_t radix(size_t t) const { return static_cast<uint32_t>(tracks_[t].size()) + 1; }
    Symbol blank(size_t t) const { return static_cast<Symbol>(tracks_[t].size()); }
    const std::vector<std::string>& track_symbols(size_t t) const { return tracks_[t]; }

    uint64_t letter_count() const { return letter_count_; }

    Letter encode(std::span<const Symbol> digits) const;
    Symbol digit(Letter l, size_t t) const {
        return static_cast<Symbol>((l / stride_[t]) % radix(t));
    }
    bool is_blank_at(Letter l, size_t t) const { return digit(l, t) == blank(t); }
    Letter all_blank() const;
    bool is_all_blank(Letter l) const { return l == all_blank(); }
    std::vector<Symbol> digits(Letter l) const;

    // Index of a symbol name on a track; throws invalid_input_error if absent.
    Symbol symbol_index(size_t t, const std::string& name) const;
    const std::string& symbol_name(size_t t, Symbol s) const;

    // Renders a letter as "(a,b,#)"; single-track letters render bare.
    std::string letter_name(Letter l) const;

    bool operator==(const TrackAlphabet& o) const { return tracks_ == o.tracks_; }
    bool operator!=(const TrackAlphabet& o) const { return !(*this == o); }

    // Alphabet for a selection of this alphabet's tracks, in the given order.
    TrackAlphabet select(std::span<const size_t> tracks) const;

private:
    std::vector<std::vector<std::string>> tracks_;
    std::vector<uint64_t> stride_;
    uint64_t letter_count_ = 1;
};

}  // namespace regbis
