#include "regbis/ops.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <unordered_map>

#include "regbis/errors.hpp"

namespace regbis {

namespace {

std::vector<char> reachable_forward(const Mta& a) {
    std::vector<char> seen(a.num_states, 0);
    std::vector<State> stack;
    for (State s : a.initial)
        if (!seen[s]) {
            seen[s] = 1;
            stack.push_back(s);
        }
    while (!stack.empty()) {
        State s = stack.back();
        stack.pop_back();
        for (auto& [l, d] : a.trans[s])
            if (!seen[d]) {
                seen[d] = 1;
                stack.push_back(d);
            }
    }
    return seen;
}

std::vector<char> reachable_backward(const Mta& a) {
    std::vector<std::vector<State>> rev(a.num_states);
    for (State s = 0; s < a.num_states; ++s)
        for (auto& [l, d] : a.trans[s]) rev[d].push_back(s);
    std::vector<char> seen(a.num_states, 0);
    std::vector<State> stack;
    for (State s = 0; s < a.num_states; ++s)
        if (a.accepting[s]) {
            seen[s] = 1;
            stack.push_back(s);
        }
    while (!stack.empty()) {
        State s = stack.back();
        stack.pop_back();
        for (State p : rev[s])
            if (!seen[p]) {
                seen[p] = 1;
                stack.push_back(p);
            }
    }
    return seen;
}

// Renumbers states in BFS order from the initial state, letters ascending.
// Input must be deterministic and trim.
Mta canonical_renumber(const Mta& a) {
    if (a.initial.empty()) return Mta::empty_language(a.alphabet);
    std::vector<State> order;
    std::vector<State> newid(a.num_states, UINT32_MAX);
    std::deque<State> queue;
    State start = a.initial[0];
    newid[start] = 0;
    order.push_back(start);
    queue.push_back(start);
    while (!queue.empty()) {
        State s = queue.front();
        queue.pop_front();
        for (auto& [l, d] : a.trans[s])
            if (newid[d] == UINT32_MAX) {
                newid[d] = static_cast<State>(order.size());
                order.push_back(d);
                queue.push_back(d);
            }
    }
    Mta out;
    out.alphabet = a.alphabet;
    out.num_states = static_cast<uint32_t>(order.size());
    out.initial = {0};
    out.accepting.assign(out.num_states, 0);
    out.trans.resize(out.num_states);
    for (State ns = 0; ns < out.num_states; ++ns) {
        State os = order[ns];
        out.accepting[ns] = a.accepting[os];
        for (auto& [l, d] : a.trans[os]) out.trans[ns].emplace_back(l, newid[d]);
        std::sort(out.trans[ns].begin(), out.trans[ns].end());
    }
    out.deterministic = true;
    out.normalized = a.normalized;
    return out;
}

}  // namespace

Mta trim(const Mta& a) {
    auto fwd = reachable_forward(a);
    auto bwd = reachable_backward(a);
    std::vector<State> newid(a.num_states, UINT32_MAX);
    uint32_t n = 0;
    for (State s = 0; s < a.num_states; ++s)
        if (fwd[s] && bwd[s]) newid[s] = n++;
    Mta out;
    out.alphabet = a.alphabet;
    out.num_states = n;
    out.accepting.assign(n, 0);
    out.trans.resize(n);
    for (State s = 0; s < a.num_states; ++s) {
        if (newid[s] == UINT32_MAX) continue;
        out.accepting[newid[s]] = a.accepting[s];
        for (auto& [l, d] : a.trans[s])
            if (newid[d] != UINT32_MAX) out.trans[newid[s]].emplace_back(l, newid[d]);
        std::sort(out.trans[newid[s]].begin(), out.trans[newid[s]].end());
    }
    for (State s : a.initial)
        if (newid[s] != UINT32_MAX) out.initial.push_back(newid[s]);
    std::sort(out.initial.begin(), out.initial.end());
    out.deterministic = a.deterministic;
    out.normalized = a.normalized;
    return out;
}

Mta determinize(const Mta& a) {
    Mta t = trim(a);
    if (t.initial.empty()) return Mta::empty_language(a.alphabet);
    std::map<std::vector<State>, State> ids;
    std::vector<std::vector<State>> subsets;
    auto intern = [&](std::vector<State> v) {
        auto it = ids.find(v);
        if (it != ids.end()) return it->second;
        State id = static_cast<State>(subsets.size());
        if (subsets.size() > kMaxConstructionStates)
            throw resource_error("determinization exceeded state limit");
        ids.emplace(v, id);
        subsets.push_back(std::move(v));
        return id;
    };
    std::vector<State> start(t.initial.begin(), t.initial.end());
    intern(start);
    Mta out;
    out.alphabet = a.alphabet;
    out.initial = {0};
    std::vector<std::vector<std::pair<Letter, State>>> otrans;
    std::vector<char> oacc;
    for (State id = 0; id < subsets.size(); ++id) {
        const auto& sub = subsets[id];
        bool acc = false;
        std::vector<std::pair<Letter, State>> all;
        for (State s : sub) {
            acc = acc || t.accepting[s];
            all.insert(all.end(), t.trans[s].begin(), t.trans[s].end());
        }
        std::sort(all.begin(), all.end());
        std::vector<std::pair<Letter, State>> row;
        size_t i = 0;
        while (i < all.size()) {
            Letter l = all[i].first;
            std::vector<State> succ;
            while (i < all.size() && all[i].first == l) {
                if (succ.empty() || succ.back() != all[i].second) succ.push_back(all[i].second);
                ++i;
            }
            row.emplace_back(l, intern(std::move(succ)));
        }
        otrans.push_back(std::move(row));
        oacc.push_back(acc);
    }
    out.num_states = static_cast<uint32_t>(subsets.size());
    out.accepting = std::move(oacc);
    out.trans = std::move(otrans);
    out.deterministic = true;
    out.normalized = a.normalized;
    return out;
}

Mta minimize(const Mta& a) {
    Mta d = (a.deterministic && a.initial.size() <= 1) ? trim(a) : determinize(a);
    d = trim(d);
    if (d.initial.empty()) return Mta::empty_language(a.alphabet);
    // Moore refinement; missing letters are an implicit dead class, which is
    // sound on trim automata. Each round refines the previous partition, so
    // an unchanged class count means a fixpoint.
    std::vector<uint32_t> cls(d.num_states, 0);
    for (State s = 0; s < d.num_states; ++s) cls[s] = d.accepting[s] ? 1 : 0;
    uint32_t num_classes = 0;
    for (;;) {
        std::map<std::pair<uint32_t, std::vector<std::pair<Letter, uint32_t>>>, uint32_t> sig_ids;
        std::vector<uint32_t> next(d.num_states);
        for (State s = 0; s < d.num_states; ++s) {
            std::vector<std::pair<Letter, uint32_t>> sig;
            sig.reserve(d.trans[s].size());
            for (auto& [l, t] : d.trans[s]) sig.emplace_back(l, cls[t]);
            auto key = std::make_pair(cls[s], std::move(sig));
            auto it = sig_ids.find(key);
            if (it == sig_ids.end())
                it = sig_ids.emplace(std::move(key), static_cast<uint32_t>(sig_ids.size())).first;
            next[s] = it->second;
        }
        uint32_t next_count = static_cast<uint32_t>(sig_ids.size());
        cls = std::move(next);
        if (next_count == num_classes) break;
        num_classes = next_count;
    }
    Mta merged;
    merged.alphabet = d.alphabet;
    merged.num_states = num_classes;
    merged.accepting.assign(num_classes, 0);
    merged.trans.resize(num_classes);
    std::vector<char> done(num_classes, 0);
    for (State s = 0; s < d.num_states; ++s) {
        uint32_t c = cls[s];
        if (done[c]) continue;
        done[c] = 1;
        merged.accepting[c] = d.accepting[s];
        for (auto& [l, t] : d.trans[s]) merged.trans[c].emplace_back(l, cls[t]);
        std::sort(merged.trans[c].begin(), merged.trans[c].end());
    }
    merged.initial = {cls[d.initial[0]]};
    merged.deterministic = true;
    merged.normalized = a.normalized;
    return canonical_renumber(merged);
}

Mta determinize_minimize(const Mta& a) { return minimize(a); }

Mta universe(const TrackAlphabet& alphabet) {
    size_t k = alphabet.track_count();
    if (k > 20) throw invalid_input_error("too many tracks");
    if (alphabet.letter_count() > kMaxUniverseLetters)
        throw resource_error("universe alphabet too large to materialize");
    uint32_t full = (k >= 1) ? ((1u << k) - 1) : 0;
    // State = bitmask of blanked tracks; blanks are permanent per track.
    std::vector<uint32_t> mask_of_state;
    std::map<uint32_t, State> id;
    auto intern = [&](uint32_t m) {
        auto it = id.find(m);
        if (it != id.end()) return it->second;
        State s = static_cast<State>(mask_of_state.size());
        id.emplace(m, s);
        mask_of_state.push_back(m);
        return s;
    };
    intern(0);
    Mta out;
    out.alphabet = alphabet;
    std::vector<std::vector<std::pair<Letter, State>>> trans;
    Letter blank_letter = alphabet.all_blank();
    for (State s = 0; s < mask_of_state.size(); ++s) {
        uint32_t m = mask_of_state[s];
        std::vector<std::pair<Letter, State>> row;
        for (Letter l = 0; l < alphabet.letter_count(); ++l) {
            if (l == blank_letter) continue;
            uint32_t lm = 0;
            for (size_t t = 0; t < k; ++t)
                if (alphabet.is_blank_at(l, t)) lm |= 1u << t;
            if ((lm & m) != m) continue;  // a blanked track must stay blank
            uint32_t nm = m | lm;
            if (nm == full) continue;  // cannot happen for non-blank letters, defensive
            row.emplace_back(l, intern(nm));
        }
        trans.push_back(std::move(row));
    }
    out.num_states = static_cast<uint32_t>(mask_of_state.size());
    out.initial = {0};
    out.accepting.assign(out.num_states, 1);
    out.trans = std::move(trans);
    out.deterministic = true;
    out.normalized = true;
    return minimize(out);
}

Mta universe_exact_length(const TrackAlphabet& alphabet, size_t len) {
    return length_slice(universe(alphabet), len);
}

namespace {

// L(a) . blank^*  via a fresh padding state. Internal; breaks normalization.
Mta pad_closure(const Mta& a) {
    Mta out = a;
    Letter blank = a.alphabet.all_blank();
    State pad = out.num_states++;
    out.accepting.push_back(1);
    out.trans.emplace_back();
    out.trans[pad].emplace_back(blank, pad);
    for (State s = 0; s < pad; ++s)
        if (out.accepting[s]) out.trans[s].emplace_back(blank, pad);
    out.canonicalize_storage();
    out.deterministic = false;
    out.normalized = false;
    return out;
}

}  // namespace

Mta product(const Mta& a0, const Mta& b0, ProductMode mode) {
    if (a0.alphabet != b0.alphabet) throw invalid_input_error("product: alphabet mismatch");
    // Or/diff need deterministic operands (implicit dead-state totalization).
    const bool need_dfa = mode != ProductMode::kAnd;
    Mta a = (need_dfa && !a0.deterministic) ? determinize(a0) : a0;
    Mta b = (need_dfa && !b0.deterministic) ? determinize(b0) : b0;

    constexpr State kDead = UINT32_MAX;
    std::map<std::pair<State, State>, State> ids;
    std::vector<std::pair<State, State>> pairs;
    auto intern = [&](State x, State y) {
        auto key = std::make_pair(x, y);
        auto it = ids.find(key);
        if (it != ids.end()) return it->second;
        State id = static_cast<State>(pairs.size());
        if (pairs.size() > kMaxConstructionStates) throw resource_error("product state limit");
        ids.emplace(key, id);
        pairs.push_back(key);
        return id;
    };

    Mta out;
    out.alphabet = a.alphabet;
    std::vector<State> a_init = a.initial, b_init = b.initial;
    if (mode == ProductMode::kAnd) {
        for (State x : a_init)
            for (State y : b_init) intern(x, y);
    } else {
        State x = a_init.empty() ? kDead : a_init[0];
        State y = b_init.empty() ? kDead : b_init[0];
        intern(x, y);
    }
    size_t init_count = pairs.size();
    std::vector<std::vector<std::pair<Letter, State>>> trans;
    std::vector<char> acc;
    for (State id = 0; id < pairs.size(); ++id) {
        auto [x, y] = pairs[id];
        bool xa = x != kDead && a.accepting[x];
        bool yb = y != kDead && b.accepting[y];
        switch (mode) {
            case ProductMode::kAnd: acc.push_back(xa && yb); break;
            case ProductMode::kOr: acc.push_back(xa || yb); break;
            case ProductMode::kDiff: acc.push_back(xa && !yb); break;
        }
        std::vector<std::pair<Letter, State>> row;
        if (mode == ProductMode::kAnd) {
            const auto& tx = a.trans[x];
            const auto& ty = b.trans[y];
            size_t i = 0, j = 0;
            while (i < tx.size() && j < ty.size()) {
                if (tx[i].first < ty[j].first)
                    ++i;
                else if (ty[j].first < tx[i].first)
                    ++j;
                else {
                    Letter l = tx[i].first;
                    size_t i2 = i, j2 = j;
                    while (i2 < tx.size() && tx[i2].first == l) ++i2;
                    while (j2 < ty.size() && ty[j2].first == l) ++j2;
                    for (size_t u = i; u < i2; ++u)
                        for (size_t v = j; v < j2; ++v)
                            row.emplace_back(l, intern(tx[u].second, ty[v].second));
                    i = i2;
                    j = j2;
                }
            }
        } else {
            // Deterministic walk over the union of present letters.
            const auto& tx = x == kDead ? std::vector<std::pair<Letter, State>>{} : a.trans[x];
            const auto& ty = y == kDead ? std::vector<std::pair<Letter, State>>{} : b.trans[y];
            size_t i = 0, j = 0;
            while (i < tx.size() || j < ty.size()) {
                Letter l;
                State nx = kDead, ny = kDead;
                if (j >= ty.size() || (i < tx.size() && tx[i].first < ty[j].first)) {
                    l = tx[i].first;
                    nx = tx[i].second;
                    ++i;
                } else if (i >= tx.size() || ty[j].first < tx[i].first) {
                    l = ty[j].first;
                    ny = ty[j].second;
                    ++j;
                } else {
                    l = tx[i].first;
                    nx = tx[i].second;
                    ny = ty[j].second;
                    ++i;
                    ++j;
                }
                if (mode == ProductMode::kDiff && nx == kDead) continue;
                row.emplace_back(l, intern(nx, ny));
            }
        }
        std::sort(row.begin(), row.end());
        trans.push_back(std::move(row));
    }
    out.num_states = static_cast<uint32_t>(pairs.size());
    for (State i = 0; i < init_count; ++i) out.initial.push_back(i);
    out.accepting = std::move(acc);
    out.trans = std::move(trans);
    out.deterministic = mode != ProductMode::kAnd ? true : (a.deterministic && b.deterministic);
    switch (mode) {
        case ProductMode::kAnd: out.normalized = a0.normalized || b0.normalized; break;
        case ProductMode::kOr: out.normalized = a0.normalized && b0.normalized; break;
        case ProductMode::kDiff: out.normalized = a0.normalized; break;
    }
    return minimize(out);
}

Mta complement(const Mta& a) {
    return product(universe(a.alphabet), a, ProductMode::kDiff);
}

Joined join(const Mta& a, const std::vector<uint32_t>& a_tracks, const Mta& b,
            const std::vector<uint32_t>& b_tracks) {
    if (a_tracks.size() != a.alphabet.track_count() || b_tracks.size() != b.alphabet.track_count())
        throw invalid_input_error("join: track id count mismatch");
    // Result ids: sorted union.
    std::vector<uint32_t> ids = a_tracks;
    ids.insert(ids.end(), b_tracks.begin(), b_tracks.end());
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());

    auto pos_of = [&](const std::vector<uint32_t>& v, uint32_t id) -> int {
        for (size_t i = 0; i < v.size(); ++i)
            if (v[i] == id) return static_cast<int>(i);
        return -1;
    };

    std::vector<std::vector<std::string>> symbols(ids.size());
    std::vector<int> from_a(ids.size(), -1), from_b(ids.size(), -1);
    for (size_t r = 0; r < ids.size(); ++r) {
        from_a[r] = pos_of(a_tracks, ids[r]);
        from_b[r] = pos_of(b_tracks, ids[r]);
        if (from_a[r] >= 0)
            symbols[r] = a.alphabet.track_symbols(from_a[r]);
        else
            symbols[r] = b.alphabet.track_symbols(from_b[r]);
        if (from_a[r] >= 0 && from_b[r] >= 0 &&
            a.alphabet.track_symbols(from_a[r]) != b.alphabet.track_symbols(from_b[r]))
            throw invalid_input_error("join: shared track symbol mismatch");
    }
    TrackAlphabet ralpha(symbols);

    // Shared track positions (a-position, b-position).
    std::vector<std::pair<int, int>> shared;
    for (size_t r = 0; r < ids.size(); ++r)
        if (from_a[r] >= 0 && from_b[r] >= 0) shared.emplace_back(from_a[r], from_b[r]);

    Mta ap = pad_closure(a);
    Mta bp = pad_closure(b);

    // Group b transitions by shared-digit key per state.
    auto shared_key_b = [&](Letter l) {
        uint64_t key = 0;
        for (auto& [pa, pb] : shared) key = key * 4096 + bp.alphabet.digit(l, pb);
        return key;
    };
    auto shared_key_a = [&](Letter l) {
        uint64_t key = 0;
        for (auto& [pa, pb] : shared) key = key * 4096 + ap.alphabet.digit(l, pa);
        return key;
    };
    std::vector<std::unordered_map<uint64_t, std::vector<std::pair<Letter, State>>>> bgroups(
        bp.num_states);
    for (State s = 0; s < bp.num_states; ++s)
        for (auto& [l, d] : bp.trans[s]) bgroups[s][shared_key_b(l)].emplace_back(l, d);

    std::map<std::pair<State, State>, State> pids;
    std::vector<std::pair<State, State>> pairs;
    auto intern = [&](State x, State y) {
        auto key = std::make_pair(x, y);
        auto it = pids.find(key);
        if (it != pids.end()) return it->second;
        State id = static_cast<State>(pairs.size());
        if (pairs.size() > kMaxConstructionStates) throw resource_error("join state limit");
        pids.emplace(key, id);
        pairs.push_back(key);
        return id;
    };
    for (State x : ap.initial)
        for (State y : bp.initial) intern(x, y);
    size_t init_count = pairs.size();

    Letter rblank = ralpha.all_blank();
    std::vector<Symbol> digits(ids.size());
    std::vector<std::vector<std::pair<Letter, State>>> trans;
    std::vector<char> acc;
    for (State id = 0; id < pairs.size(); ++id) {
        auto [x, y] = pairs[id];
        acc.push_back(ap.accepting[x] && bp.accepting[y]);
        std::vector<std::pair<Letter, State>> row;
        for (auto& [la, xd] : ap.trans[x]) {
            auto it = bgroups[y].find(shared_key_a(la));
            if (it == bgroups[y].end()) continue;
            for (auto& [lb, yd] : it->second) {
                for (size_t r = 0; r < ids.size(); ++r)
                    digits[r] = from_a[r] >= 0 ? ap.alphabet.digit(la, from_a[r])
                                               : bp.alphabet.digit(lb, from_b[r]);
                Letter rl = ralpha.encode(digits);
                if (rl == rblank) continue;  // both sides padding
                row.emplace_back(rl, intern(xd, yd));
            }
        }
        std::sort(row.begin(), row.end());
        row.erase(std::unique(row.begin(), row.end()), row.end());
        trans.push_back(std::move(row));
    }
    Mta out;
    out.alphabet = ralpha;
    out.num_states = static_cast<uint32_t>(pairs.size());
    for (State i = 0; i < init_count; ++i) out.initial.push_back(i);
    out.accepting = std::move(acc);
    out.trans = std::move(trans);
    out.deterministic = false;
    out.normalized = true;
    return {minimize(out), ids};
}

Mta project_track(const Mta& a, size_t track) {
    size_t k = a.alphabet.track_count();
    if (k < 2) throw invalid_input_error("project_track: need at least two tracks");
    if (track >= k) throw invalid_input_error("project_track: track index out of range");
    std::vector<size_t> keep;
    for (size_t t = 0; t < k; ++t)
        if (t != track) keep.push_back(t);
    TrackAlphabet ralpha = a.alphabet.select(keep);
    Letter rblank = ralpha.all_blank();

    Mta out;
    out.alphabet = ralpha;
    out.num_states = a.num_states;
    out.initial = a.initial;
    out.accepting = a.accepting;
    out.trans.resize(a.num_states);
    // Transitions whose projection is all-blank carry only padding of the
    // dropped track; they count toward acceptance but are not kept.
    std::vector<std::vector<State>> blank_edges(a.num_states);
    std::vector<Symbol> digits(keep.size());
    for (State s = 0; s < a.num_states; ++s)
        for (auto& [l, d] : a.trans[s]) {
            for (size_t i = 0; i < keep.size(); ++i) digits[i] = a.alphabet.digit(l, keep[i]);
            Letter rl = ralpha.encode(digits);
            if (rl == rblank)
                blank_edges[s].push_back(d);
            else
                out.trans[s].emplace_back(rl, d);
        }
    // Saturate: accepting if an accepting state is reachable through letters
    // blank on all surviving tracks.
    std::vector<std::vector<State>> rev(a.num_states);
    for (State s = 0; s < a.num_states; ++s)
        for (State d : blank_edges[s]) rev[d].push_back(s);
    std::vector<State> stack;
    for (State s = 0; s < a.num_states; ++s)
        if (out.accepting[s]) stack.push_back(s);
    while (!stack.empty()) {
        State s = stack.back();
        stack.pop_back();
        for (State p : rev[s])
            if (!out.accepting[p]) {
                out.accepting[p] = 1;
                stack.push_back(p);
            }
    }
    out.canonicalize_storage();
    out.deterministic = false;
    out.normalized = a.normalized;
    return minimize(out);
}

Mta reorder_tracks(const Mta& a, const std::vector<size_t>& perm) {
    if (perm.size() != a.alphabet.track_count())
        throw invalid_input_error("reorder_tracks: bad permutation size");
    TrackAlphabet ralpha = a.alphabet.select(perm);
    std::vector<Symbol> digits(perm.size());
    return letter_map(a, ralpha, [&](Letter l) -> std::optional<Letter> {
        for (size_t i = 0; i < perm.size(); ++i) digits[i] = a.alphabet.digit(l, perm[i]);
        return ralpha.encode(digits);
    });
}

Mta letter_map(const Mta& a, const TrackAlphabet& new_alphabet,
               const std::function<std::optional<Letter>(Letter)>& fn) {
    Mta out;
    out.alphabet = new_alphabet;
    out.num_states = a.num_states;
    out.initial = a.initial;
    out.accepting = a.accepting;
    out.trans.resize(a.num_states);
    for (State s = 0; s < a.num_states; ++s)
        for (auto& [l, d] : a.trans[s])
            if (auto nl = fn(l)) out.trans[s].emplace_back(*nl, d);
    out.canonicalize_storage();
    out.deterministic = false;
    out.normalized = a.normalized;
    return minimize(out);
}

Mta diagonal(const Mta& a) {
    if (a.alphabet.track_count() != 1) throw invalid_input_error("diagonal: 1-track input required");
    TrackAlphabet dalpha({a.alphabet.track_symbols(0), a.alphabet.track_symbols(0)});
    std::vector<Symbol> digits(2);
    return letter_map(a, dalpha, [&](Letter l) -> std::optional<Letter> {
        digits[0] = digits[1] = a.alphabet.digit(l, 0);
        return dalpha.encode(digits);
    });
}

Equivalence equivalent(const Mta& a0, const Mta& b0) {
    if (a0.alphabet != b0.alphabet) throw invalid_input_error("equivalent: alphabet mismatch");
    Mta a = a0.deterministic ? a0 : determinize(a0);
    Mta b = b0.deterministic ? b0 : determinize(b0);
    constexpr State kDead = UINT32_MAX;
    struct Node {
        State x, y;
        uint32_t parent;
        Letter via;
    };
    std::map<std::pair<State, State>, char> seen;
    std::vector<Node> nodes;
    State sx = a.initial.empty() ? kDead : a.initial[0];
    State sy = b.initial.empty() ? kDead : b.initial[0];
    nodes.push_back({sx, sy, UINT32_MAX, 0});
    seen[{sx, sy}] = 1;
    for (uint32_t qi = 0; qi < nodes.size(); ++qi) {
        Node n = nodes[qi];
        bool xa = n.x != kDead && a.accepting[n.x];
        bool ya = n.y != kDead && b.accepting[n.y];
        if (xa != ya) {
            Word w;
            for (uint32_t c = qi; nodes[c].parent != UINT32_MAX; c = nodes[c].parent)
                w.push_back(nodes[c].via);
            std::reverse(w.begin(), w.end());
            return {false, std::move(w)};
        }
        const auto& tx = n.x == kDead ? std::vector<std::pair<Letter, State>>{} : a.trans[n.x];
        const auto& ty = n.y == kDead ? std::vector<std::pair<Letter, State>>{} : b.trans[n.y];
        size_t i = 0, j = 0;
        auto push = [&](Letter l, State nx, State ny) {
            if (seen.emplace(std::make_pair(nx, ny), 1).second) nodes.push_back({nx, ny, qi, l});
        };
        while (i < tx.size() || j < ty.size()) {
            if (j >= ty.size() || (i < tx.size() && tx[i].first < ty[j].first)) {
                push(tx[i].first, tx[i].second, kDead);
                ++i;
            } else if (i >= tx.size() || ty[j].first < tx[i].first) {
                push(ty[j].first, kDead, ty[j].second);
                ++j;
            } else {
                push(tx[i].first, tx[i].second, ty[j].second);
                ++i;
                ++j;
            }
        }
    }
    return {true, {}};
}

std::optional<Word> shortest_word(const Mta& a) {
    Equivalence e = equivalent(a, Mta::empty_language(a.alphabet));
    if (e.equal) return std::nullopt;
    return e.witness;
}

Mta length_slice(const Mta& a, size_t len) {
    // Chain automaton accepting every letter sequence of the given length.
    if (a.alphabet.letter_count() > kMaxUniverseLetters)
        throw resource_error("length_slice alphabet too large");
    Mta chain;
    chain.alphabet = a.alphabet;
    chain.num_states = static_cast<uint32_t>(len + 1);
    chain.initial = {0};
    chain.accepting.assign(len + 1, 0);
    chain.accepting[len] = 1;
    chain.trans.resize(len + 1);
    Letter blank = a.alphabet.all_blank();
    for (size_t i = 0; i < len; ++i)
        for (Letter l = 0; l < a.alphabet.letter_count(); ++l)
            if (l != blank) chain.trans[i].emplace_back(l, static_cast<State>(i + 1));
    chain.deterministic = true;
    chain.normalized = false;
    return product(a, chain, ProductMode::kAnd);
}

}  // namespace regbis
