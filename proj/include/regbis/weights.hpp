#pragma once

#include <cstdint>
#include <optional>

#include "regbis/automaton.hpp"

namespace regbis {

// Weights are natural numbers written in binary, least-significant bit
// first, with no trailing zero letters; zero is the empty word.
TrackWord encode_weight(uint64_t value);
std::optional<uint64_t> decode_weight(const TrackWord& w);  // nullopt if non-canonical

// Symbols of the weight sort, in index order: "0", "1".
std::vector<std::string> weight_symbols();

// 1-track automaton of all canonical weight words.
Mta weight_universe();

}  // namespace regbis
