#include "regbis/weights.hpp"

#include "regbis/ops.hpp"

namespace regbis {

TrackWord encode_weight(uint64_t value) {
    TrackWord w;
    while (value) {
        w.push_back(static_cast<Symbol>(value & 1));
        value >>= 1;
    }
    return w;
}

std::optional<uint64_t> decode_weight(const TrackWord& w) {
    if (!w.empty() && w.back() != 1) return std::nullopt;
    if (w.size() > 63) return std::nullopt;
    uint64_t v = 0;
    for (size_t i = w.size(); i-- > 0;) {
        if (w[i] > 1) return std::nullopt;
        v = (v << 1) | w[i];
    }
    return v;
}

std::vector<std::string> weight_symbols() { return {"0", "1"}; }

Mta weight_universe() {
    // Empty word or any word whose last letter is 1.
    TrackAlphabet a({weight_symbols()});
    Mta m;
    m.alphabet = a;
    m.num_states = 2;
    m.initial = {0};
    m.accepting = {1, 0};
    m.trans.resize(2);
    Symbol zero = 0, one = 1;
    m.trans[0].emplace_back(a.encode(std::vector<Symbol>{zero}), 1);
    m.trans[0].emplace_back(a.encode(std::vector<Symbol>{one}), 0);
    m.trans[1].emplace_back(a.encode(std::vector<Symbol>{zero}), 1);
    m.trans[1].emplace_back(a.encode(std::vector<Symbol>{one}), 0);
    m.canonicalize_storage();
    m.deterministic = true;
    m.normalized = true;
    return minimize(m);
}

}  // namespace regbis
