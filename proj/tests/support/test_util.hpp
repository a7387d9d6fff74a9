#pragma once

#include <algorithm>
#include <random>
#include <set>

#include "regbis/convolution.hpp"
#include "regbis/ops.hpp"

namespace regbis::testutil {

inline TrackAlphabet alpha1(std::vector<std::string> syms) { return TrackAlphabet({std::move(syms)}); }

inline TrackAlphabet alpha2(std::vector<std::string> syms) {
    return TrackAlphabet({syms, syms});
}

inline Letter L1(const TrackAlphabet& a, const std::string& s) {
    Symbol d = a.symbol_index(0, s);
    return a.encode(std::vector<Symbol>{d});
}

inline Letter L2(const TrackAlphabet& a, const std::string& x, const std::string& y) {
    std::vector<Symbol> d{a.symbol_index(0, x), a.symbol_index(1, y)};
    return a.encode(d);
}

inline Letter L3(const TrackAlphabet& a, const std::string& x, const std::string& y,
                 const std::string& z) {
    std::vector<Symbol> d{a.symbol_index(0, x), a.symbol_index(1, y), a.symbol_index(2, z)};
    return a.encode(d);
}

inline Word word1(const TrackAlphabet& a, const std::string& chars) {
    Word w;
    for (char c : chars) w.push_back(L1(a, std::string(1, c)));
    return w;
}

// Random NFA over the alphabet, normalized by intersecting with the universe.
inline Mta random_nfa(std::mt19937_64& rng, const TrackAlphabet& a, uint32_t states,
                      double density) {
    Mta m;
    m.alphabet = a;
    m.num_states = states;
    m.trans.resize(states);
    m.accepting.assign(states, 0);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::uniform_int_distribution<State> st(0, states - 1);
    for (State s = 0; s < states; ++s) {
        m.accepting[s] = coin(rng) < 0.4;
        for (Letter l = 0; l < a.letter_count(); ++l) {
            if (a.is_all_blank(l)) continue;
            if (coin(rng) < density) m.trans[s].emplace_back(l, st(rng));
            if (coin(rng) < density * 0.3) m.trans[s].emplace_back(l, st(rng));
        }
    }
    m.initial = {0};
    m.canonicalize_storage();
    m.deterministic = false;
    m.normalized = false;
    return product(m, universe(a), ProductMode::kAnd);
}

inline std::set<Word> language(const Mta& m, size_t max_len) {
    auto v = m.enumerate(max_len);
    return std::set<Word>(v.begin(), v.end());
}

}  // namespace regbis::testutil
