#include "regbis/corpus.hpp"

#include <algorithm>
#include <deque>

#include "regbis/bisim.hpp"
#include "regbis/convolution.hpp"
#include "regbis/errors.hpp"
#include "regbis/fo.hpp"
#include "regbis/ops.hpp"
#include "regbis/regex.hpp"
#include "regbis/weights.hpp"

namespace regbis::corpus {

std::string to_string(Property p) {
    switch (p) {
        case Property::kAnonymity: return "anonymity";
        case Property::kUniformity: return "uniformity";
        case Property::kCheckOnly: return "check_only";
    }
    return "?";
}

namespace {

// ---- small construction helpers ----------------------------------------

Mta word_set(const TrackAlphabet& a, const std::vector<Word>& words) {
    std::vector<Re> parts;
    for (auto& w : words) {
        std::vector<Re> seq;
        for (Letter l : w) seq.push_back(Re::lit(l));
        parts.push_back(seq.empty() ? Re::eps() : Re::seq(std::move(seq)));
    }
    return Re::alt(std::move(parts)).to_mta(a);
}

// Per-cell scanner over one track: control letter, then cells driven by a
// small step function.
struct Scan1 {
    int num_states;
    int initial;
    std::function<int(int, Symbol)> step;     // -1 rejects
    std::function<bool(int)> accept;
};

Mta build_scan1(const TrackAlphabet& a, const std::vector<Symbol>& ctrls, const Scan1& spec) {
    Mta m;
    m.alphabet = a;
    m.num_states = static_cast<uint32_t>(spec.num_states + 1);
    m.initial = {0};
    m.accepting.assign(m.num_states, 0);
    m.trans.resize(m.num_states);
    for (Symbol c : ctrls)
        m.trans[0].emplace_back(a.encode(std::vector<Symbol>{c}),
                                static_cast<State>(1 + spec.initial));
    for (int st = 0; st < spec.num_states; ++st) {
        m.accepting[1 + st] = spec.accept(st);
        for (Symbol s = 0; s < a.track_size(0); ++s) {
            int nx = spec.step(st, s);
            if (nx >= 0)
                m.trans[1 + st].emplace_back(a.encode(std::vector<Symbol>{s}),
                                             static_cast<State>(1 + nx));
        }
    }
    m.canonicalize_storage();
    m.normalized = true;
    return minimize(m);
}

// Same over pairs of tracks; the first letter is a control pair.
struct Scan2 {
    int num_states;
    int initial;
    std::function<int(int, Symbol, Symbol)> step;
    std::function<bool(int)> accept;
};

Mta build_scan2(const TrackAlphabet& a2, const std::vector<std::pair<Symbol, Symbol>>& ctrls,
                const Scan2& spec) {
    Mta m;
    m.alphabet = a2;
    m.num_states = static_cast<uint32_t>(spec.num_states + 1);
    m.initial = {0};
    m.accepting.assign(m.num_states, 0);
    m.trans.resize(m.num_states);
    for (auto& [cs, ct] : ctrls)
        m.trans[0].emplace_back(a2.encode(std::vector<Symbol>{cs, ct}),
                                static_cast<State>(1 + spec.initial));
    size_t n = a2.track_size(0);
    for (int st = 0; st < spec.num_states; ++st) {
        m.accepting[1 + st] = spec.accept(st);
        for (Symbol s = 0; s < n; ++s)
            for (Symbol t = 0; t < n; ++t) {
                int nx = spec.step(st, s, t);
                if (nx >= 0)
                    m.trans[1 + st].emplace_back(a2.encode(std::vector<Symbol>{s, t}),
                                                 static_cast<State>(1 + nx));
            }
    }
    m.canonicalize_storage();
    m.normalized = true;
    return minimize(m);
}

Mta attach_weight(const Mta& pair_lang, uint64_t w) {
    std::vector<std::string> wnames;
    for (Symbol b : encode_weight(w)) wnames.emplace_back(1, static_cast<char>('0' + b));
    Mta wc = fo::builtin_const(weight_symbols(), wnames);
    auto j = join(pair_lang, {0, 1}, wc, {2});
    return j.aut;
}

Mta delta_union(std::vector<Mta> parts) {
    if (parts.empty()) throw invalid_input_error("empty delta");
    Mta acc = parts[0];
    for (size_t i = 1; i < parts.size(); ++i) acc = product(acc, parts[i], ProductMode::kOr);
    return acc;
}

// Clamps a delta to universe endpoints.
Mta restrict_delta(const Mta& delta, const Mta& universe_aut) {
    auto j1 = join(delta, {0, 1, 2}, universe_aut, {0});
    auto j2 = join(j1.aut, j1.tracks, universe_aut, {1});
    return j2.aut;
}

// {(lhs . u, rhs . u) : u over tail_syms}; |len(rhs) - len(lhs)| <= 1.
Mta shift_tail_pair(const std::vector<std::string>& syms,
                    const std::vector<std::string>& tail_syms,
                    const std::vector<std::string>& lhs, const std::vector<std::string>& rhs) {
    TrackAlphabet a({syms, syms});
    auto idx = [&](const std::string& s) { return a.symbol_index(0, s); };
    std::vector<Symbol> tail;
    for (auto& s : tail_syms) tail.push_back(idx(s));
    int d = static_cast<int>(rhs.size()) - static_cast<int>(lhs.size());
    size_t shorter = std::min(lhs.size(), rhs.size());
    auto enc = [&](Symbol x, Symbol y) { return a.encode(std::vector<Symbol>{x, y}); };

    std::vector<Re> seq;
    for (size_t i = 0; i < shorter; ++i) seq.push_back(Re::lit(enc(idx(lhs[i]), idx(rhs[i]))));
    if (d == 0) {
        std::vector<Letter> same;
        for (Symbol g : tail) same.push_back(enc(g, g));
        seq.push_back(Re::star(Re::lits(same)));
        return Re::seq(std::move(seq)).to_mta(a);
    }
    // One-letter delay buffer on the longer side.
    Symbol extra = d > 0 ? idx(rhs.back()) : idx(lhs.back());
    Mta buf;
    buf.alphabet = a;
    // state 0 = before tail; states 1+i = carrying tail[i]; last = done
    buf.num_states = static_cast<uint32_t>(tail.size() + 2);
    buf.initial = {0};
    buf.accepting.assign(buf.num_states, 0);
    State done = static_cast<State>(tail.size() + 1);
    buf.accepting[done] = 1;
    buf.trans.resize(buf.num_states);
    for (size_t i = 0; i < tail.size(); ++i) {
        Symbol g = tail[i];
        // First tail letter alongside the longer side's final literal.
        if (d > 0)
            buf.trans[0].emplace_back(enc(g, extra), static_cast<State>(1 + i));
        else
            buf.trans[0].emplace_back(enc(extra, g), static_cast<State>(1 + i));
    }
    if (d > 0)
        buf.trans[0].emplace_back(enc(a.blank(0), extra), done);
    else
        buf.trans[0].emplace_back(enc(extra, a.blank(1)), done);
    for (size_t i = 0; i < tail.size(); ++i) {
        Symbol carried = tail[i];
        for (size_t j = 0; j < tail.size(); ++j) {
            Symbol g = tail[j];
            if (d > 0)
                buf.trans[1 + i].emplace_back(enc(g, carried), static_cast<State>(1 + j));
            else
                buf.trans[1 + i].emplace_back(enc(carried, g), static_cast<State>(1 + j));
        }
        if (d > 0)
            buf.trans[1 + i].emplace_back(enc(a.blank(0), carried), done);
        else
            buf.trans[1 + i].emplace_back(enc(carried, a.blank(1)), done);
    }
    buf.canonicalize_storage();
    buf.normalized = true;
    Mta tail_part = minimize(buf);
    // Concatenate literals with the buffered tail: rebuild via regex on the
    // literal part and a product-free splice.
    Mta lit_part = seq.empty() ? Mta::epsilon_language(a) : Re::seq(std::move(seq)).to_mta(a);
    // Splice: words of lit_part have fixed length = shorter, so append by
    // redirecting lit_part's accepting states into tail_part's initial.
    Mta out;
    out.alphabet = a;
    out.num_states = lit_part.num_states + tail_part.num_states;
    out.initial = lit_part.initial;
    out.accepting.assign(out.num_states, 0);
    out.trans.resize(out.num_states);
    for (State s = 0; s < lit_part.num_states; ++s)
        for (auto& [l, t2] : lit_part.trans[s]) out.trans[s].emplace_back(l, t2);
    uint32_t off = lit_part.num_states;
    for (State s = 0; s < tail_part.num_states; ++s) {
        out.accepting[off + s] = tail_part.accepting[s];
        for (auto& [l, t2] : tail_part.trans[s]) out.trans[off + s].emplace_back(l, off + t2);
    }
    for (State s = 0; s < lit_part.num_states; ++s)
        if (lit_part.accepting[s])
            for (State i0 : tail_part.initial) {
                if (tail_part.accepting[i0]) out.accepting[s] = 1;
                for (auto& [l, t2] : tail_part.trans[i0]) out.trans[s].emplace_back(l, off + t2);
            }
    out.canonicalize_storage();
    out.normalized = true;
    return minimize(out);
}

uint64_t bit_of(const TrackAlphabet& a, Symbol s, size_t pos) {
    return a.symbol_name(0, s)[pos] == '1' ? 1 : 0;
}

// ---- figure 3 chain -----------------------------------------------------

CorpusModel make_figure3() {
    std::vector<std::string> syms{"s", "t", "m", "b", "1", "2"};
    TrackAlphabet a1({syms});
    TrackAlphabet a3({syms, syms, weight_symbols()});
    auto edge = [&](const std::string& x, const std::string& y, uint64_t w) {
        return convolve({track_word(a3, 0, {x}), track_word(a3, 1, {y}), encode_weight(w)}, a3);
    };
    std::vector<Word> edges{edge("s", "t", 1), edge("s", "m", 1), edge("s", "b", 1),
                            edge("t", "s", 1), edge("t", "1", 2), edge("m", "s", 2),
                            edge("m", "1", 1), edge("b", "2", 3), edge("1", "1", 3),
                            edge("2", "2", 3)};
    CorpusModel cm;
    cm.name = "figure3_chain";
    cm.model.config_universe = [&] {
        std::vector<Letter> ls;
        for (Symbol s = 0; s < a1.track_size(0); ++s)
            ls.push_back(a1.encode(std::vector<Symbol>{s}));
        return Re::lits(ls).to_mta(a1);
    }();
    cm.model.weight_universe = weight_universe();
    cm.model.actions = {"step"};
    cm.model.delta = {word_set(a3, edges)};
    cm.model.branching_bound = 3;
    cm.model.kind = WtsKind::kMarkovChain;
    cm.model.q = 3;
    cm.model.length_preserving = true;
    cm.initial = word_set(a1, {convolve({track_word(a1, 0, {"s"})}, a1)});
    TrackAlphabet a2({syms, syms});
    std::vector<Word> epairs;
    for (auto x : {"1", "2"})
        for (auto y : {"1", "2"})
            epairs.push_back(convolve({track_word(a2, 0, {x}), track_word(a2, 1, {y})}, a2));
    cm.pairs = word_set(a2, epairs);
    cm.property = Property::kUniformity;
    cm.notes = "six-state chain; final states 1 and 2 are reached with probability 1/2 each";
    cm.final_info = [](const FiniteWts& m, uint32_t s) -> std::optional<std::pair<std::string, std::string>> {
        std::string n = m.state_name(s);
        if (n == "1") return std::make_pair(std::string("F"), std::string("q1"));
        if (n == "2") return std::make_pair(std::string("F"), std::string("q2"));
        return std::nullopt;
    };
    cm.expected_class_prob = [](const FiniteWts&, uint32_t) -> std::optional<Rat> {
        return Rat(1, 2);
    };
    cm.reverse_branching_bound = 3;
    return cm;
}

// ---- random walk ----------------------------------------------------------
//
// Word: control . cells, cells ordered from the walls inward. "L"/"R" mark
// the walker's distance from the left/right wall, "X" marks the center,
// controls "l"/"r" are the absorbing ends.

CorpusModel make_random_walk() {
    std::vector<std::string> syms{"w", "l", "r", "o", "X", "L", "R"};
    TrackAlphabet a1({syms});
    TrackAlphabet a2({syms, syms});
    auto S1 = [&](const char* s) { return a1.encode(std::vector<Symbol>{a1.symbol_index(0, s)}); };
    auto P = [&](const char* x, const char* y) {
        return a2.encode(std::vector<Symbol>{a2.symbol_index(0, x), a2.symbol_index(1, y)});
    };
    Re EQ = Re::lits({P("o", "o")});
    auto mk = [&](std::vector<Re> seq, uint64_t w) {
        return attach_weight(Re::seq(std::move(seq)).to_mta(a2), w);
    };

    std::vector<Mta> parts;
    // marker moves, weight 1 each
    for (auto [mk_, mirror] : {std::pair{"L", "R"}, std::pair{"R", "L"}}) {
        (void)mirror;
        std::string M = mk_;
        // inward: d -> d+1 with at least one cell left after the target
        parts.push_back(mk({Re::lit(P("w", "w")), Re::star(EQ), Re::lit(P(M.c_str(), "o")),
                            Re::lit(P("o", M.c_str())), Re::plus(EQ)},
                           1));
        // outward: d -> d-1 (d >= 2)
        parts.push_back(mk({Re::lit(P("w", "w")), Re::star(EQ), Re::lit(P("o", M.c_str())),
                            Re::lit(P(M.c_str(), "o")), Re::star(EQ)},
                           1));
        // d = n-1 -> center
        parts.push_back(mk({Re::lit(P("w", "w")), Re::star(EQ), Re::lit(P(M.c_str(), "o")),
                            Re::lit(P("o", "X"))},
                           1));
    }
    // center -> L/R at n-1 (n >= 2)
    parts.push_back(mk({Re::lit(P("w", "w")), Re::star(EQ), Re::lit(P("o", "L")), Re::lit(P("X", "o"))}, 1));
    parts.push_back(mk({Re::lit(P("w", "w")), Re::star(EQ), Re::lit(P("o", "R")), Re::lit(P("X", "o"))}, 1));
    // n = 1: center straight into the walls
    parts.push_back(mk({Re::lit(P("w", "l")), Re::lit(P("X", "o"))}, 1));
    parts.push_back(mk({Re::lit(P("w", "r")), Re::lit(P("X", "o"))}, 1));
    // hitting a wall from d = 1
    parts.push_back(mk({Re::lit(P("w", "l")), Re::lit(P("L", "o")), Re::star(EQ)}, 1));
    parts.push_back(mk({Re::lit(P("w", "r")), Re::lit(P("R", "o")), Re::star(EQ)}, 1));
    // absorbing ends
    parts.push_back(mk({Re::lit(P("l", "l")), Re::plus(EQ)}, 2));
    parts.push_back(mk({Re::lit(P("r", "r")), Re::plus(EQ)}, 2));

    CorpusModel cm;
    cm.name = "random_walk";
    Re o = Re::lits({S1("o")});
    cm.model.config_universe =
        Re::alt({Re::seq({Re::lits({S1("w")}),
                          Re::alt({Re::seq({Re::star(o), Re::lits({S1("L"), S1("R")}), Re::plus(o)}),
                                   Re::seq({Re::star(o), Re::lits({S1("X")})})})}),
                 Re::seq({Re::lits({S1("l"), S1("r")}), Re::plus(o)})})
            .to_mta(a1);
    cm.model.weight_universe = weight_universe();
    cm.model.actions = {"step"};
    cm.model.delta = {restrict_delta(delta_union(std::move(parts)), cm.model.config_universe)};
    cm.model.branching_bound = 2;
    cm.model.kind = WtsKind::kMarkovChain;
    cm.model.q = 2;
    cm.model.length_preserving = true;
    cm.initial = Re::seq({Re::lits({S1("w")}), Re::star(o), Re::lits({S1("X")})}).to_mta(a1);
    cm.pairs = Re::seq({Re::lits({P("l", "l"), P("l", "r"), P("r", "l"), P("r", "r")}),
                        Re::plus(EQ)})
                   .to_mta(a2);
    cm.property = Property::kUniformity;
    cm.notes = "walker starts at the center marker; ends absorb; both walls equally likely";
    cm.final_info = [](const FiniteWts& m, uint32_t s) -> std::optional<std::pair<std::string, std::string>> {
        const TrackWord& w = m.states[s];
        std::string c = m.config_alpha.symbol_name(0, w[0]);
        if (c == "l") return std::make_pair(std::string("F"), std::string("left"));
        if (c == "r") return std::make_pair(std::string("F"), std::string("right"));
        return std::nullopt;
    };
    cm.expected_class_prob = [](const FiniteWts&, uint32_t) -> std::optional<Rat> {
        return Rat(1, 2);
    };
    cm.reverse_branching_bound = 2;
    return cm;
}

// ---- random sum -----------------------------------------------------------
//
// Cells: "n" untouched, "z" stepped coin 0, "o" stepped coin 1. The final
// coin vector pairs with its cellwise complement in E.

CorpusModel make_random_sum() {
    std::vector<std::string> syms{"r", "f", "n", "z", "o"};
    TrackAlphabet a1({syms});
    TrackAlphabet a2({syms, syms});
    auto S1 = [&](const char* s) { return a1.encode(std::vector<Symbol>{a1.symbol_index(0, s)}); };
    auto P = [&](const char* x, const char* y) {
        return a2.encode(std::vector<Symbol>{a2.symbol_index(0, x), a2.symbol_index(1, y)});
    };
    Re done = Re::lits({P("z", "z"), P("o", "o")});
    std::vector<Mta> parts;
    parts.push_back(attach_weight(
        Re::seq({Re::lit(P("r", "r")), Re::star(done), Re::lits({P("n", "z"), P("n", "o")}),
                 Re::star(Re::lit(P("n", "n")))})
            .to_mta(a2),
        1));
    parts.push_back(attach_weight(
        Re::seq({Re::lit(P("r", "f")), Re::plus(done)}).to_mta(a2), 2));
    parts.push_back(attach_weight(
        Re::seq({Re::lit(P("f", "f")), Re::plus(done)}).to_mta(a2), 2));

    CorpusModel cm;
    cm.name = "random_sum";
    Re zo = Re::lits({S1("z"), S1("o")});
    Re nn = Re::lits({S1("n")});
    cm.model.config_universe =
        Re::alt({Re::seq({Re::lits({S1("r")}),
                          Re::alt({Re::seq({Re::plus(zo), Re::star(nn)}), Re::plus(nn)})}),
                 Re::seq({Re::lits({S1("f")}), Re::plus(zo)})})
            .to_mta(a1);
    cm.model.weight_universe = weight_universe();
    cm.model.actions = {"step"};
    cm.model.delta = {restrict_delta(delta_union(std::move(parts)), cm.model.config_universe)};
    cm.model.branching_bound = 2;
    cm.model.kind = WtsKind::kMarkovChain;
    cm.model.q = 2;
    cm.model.length_preserving = true;
    cm.initial = Re::seq({Re::lits({S1("r")}), Re::plus(nn)}).to_mta(a1);
    cm.pairs =
        Re::seq({Re::lit(P("f", "f")), Re::plus(Re::lits({P("z", "o"), P("o", "z")}))}).to_mta(a2);
    cm.property = Property::kUniformity;
    cm.notes = "sum of fair coin flips; a final history pairs with its complement";
    cm.final_info = [](const FiniteWts& m, uint32_t s) -> std::optional<std::pair<std::string, std::string>> {
        const TrackWord& w = m.states[s];
        if (m.config_alpha.symbol_name(0, w[0]) != "f") return std::nullopt;
        size_t ones = 0, cells = w.size() - 1;
        for (size_t i = 1; i < w.size(); ++i)
            if (m.config_alpha.symbol_name(0, w[i]) == "o") ++ones;
        size_t k = std::min(ones, cells - ones);
        return std::make_pair("pair_k" + std::to_string(k), "sum=" + std::to_string(ones));
    };
    cm.expected_class_prob = nullptr;
    cm.reverse_branching_bound = 2;
    return cm;
}

// ---- Knuth-Yao and the naive RNG -------------------------------------------
//
// Cells hold (x, y, n[, rc]) bits, least significant first; the modulus n is
// carried by the word with its top bit fixed at the second-to-last cell.

struct RngLayout {
    bool naive;
    std::vector<std::string> syms;   // controls then cells
    TrackAlphabet a1, a2;
    size_t ctrl_count;

    explicit RngLayout(bool nv) : naive(nv) {
        syms = nv ? std::vector<std::string>{"c", "t", "f", "z", "u"}
                  : std::vector<std::string>{"c", "t", "f"};
        ctrl_count = syms.size();
        int fields = nv ? 4 : 3;
        for (int v = 0; v < (1 << fields); ++v) {
            std::string name;
            for (int b = fields - 1; b >= 0; --b) name += char('0' + ((v >> b) & 1));
            syms.push_back(name);
        }
        a1 = TrackAlphabet({syms});
        a2 = TrackAlphabet({syms, syms});
    }
    bool is_cell(Symbol s) const { return s >= ctrl_count; }
    // field order in the name: x, y, n[, rc]
    int fx(Symbol s) const { return syms[s][0] - '0'; }
    int fy(Symbol s) const { return syms[s][1] - '0'; }
    int fn(Symbol s) const { return syms[s][2] - '0'; }
    int fr(Symbol s) const { return naive ? syms[s][3] - '0' : 0; }
    Symbol cell(int x, int y, int n, int rc) const {
        std::string name;
        name += char('0' + x);
        name += char('0' + y);
        name += char('0' + n);
        if (naive) name += char('0' + rc);
        return a1.symbol_index(0, name);
    }
    Symbol ctrl(const char* c) const { return a1.symbol_index(0, c); }
};

CorpusModel make_rng(bool naive) {
    RngLayout L(naive);
    auto& a1 = L.a1;
    auto& a2 = L.a2;

    // Universe: n's top bit sits at the second-to-last cell; the rc field is
    // a unary prefix.
    Scan1 uni;
    // state: 2 bits of history for (n of prev cell) x rc-phase
    // encode: phase*3 + last_n in {0(unseen),1,2(=n0),..} -- simpler: track
    // (rc_done, last_two) where last_two in {0..3} encodes n bits of the two
    // most recent cells as (prev<<1)|cur with 2 = none yet.
    // We only need: final two cells have n = 1 then 0.
    struct U {
        int prev_n;   // n bit of previous cell, 2 = none
        int cur_n;    // n bit of current cell, 2 = none
        bool rc_zero; // rc prefix has ended
        int id() const { return ((prev_n * 3 + cur_n) * 2) + (rc_zero ? 1 : 0); }
    };
    uni.num_states = 18;
    uni.initial = U{2, 2, false}.id();
    uni.step = [L](int st, Symbol s) -> int {
        if (!L.is_cell(s)) return -1;
        bool rc_zero = st & 1;
        int prev = (st >> 1) / 3, cur = (st >> 1) % 3;
        (void)prev;
        int rc = L.fr(s);
        if (rc == 1 && rc_zero) return -1;  // rc resumed after its prefix
        bool nrc_zero = rc_zero || rc == 0;
        return U{cur, L.fn(s), nrc_zero}.id();
    };
    uni.accept = [](int st) {
        int prev = (st >> 1) / 3, cur = (st >> 1) % 3;
        return prev == 1 && cur == 0;
    };
    std::vector<Symbol> all_ctrls{L.ctrl("c"), L.ctrl("t"), L.ctrl("f")};
    if (naive) {
        all_ctrls.push_back(L.ctrl("z"));
        all_ctrls.push_back(L.ctrl("u"));
    }
    Mta universe_aut = build_scan1(a1, all_ctrls, uni);

    // Initial set: x = 0, y = 1, rc = 0.
    Scan1 init;
    init.num_states = 18;
    init.initial = U{2, 2, false}.id();
    init.step = [L](int st, Symbol s) -> int {
        if (!L.is_cell(s)) return -1;
        int prev = (st >> 1) / 3, cur = (st >> 1) % 3;
        bool first = prev == 2 && cur == 2;
        if (L.fx(s) != 0 || L.fr(s) != 0) return -1;
        if (first ? L.fy(s) != 1 : L.fy(s) != 0) return -1;
        return U{cur, L.fn(s), false}.id();
    };
    init.accept = uni.accept;
    Mta initial_aut = build_scan1(a1, {L.ctrl("c")}, init);

    std::vector<Mta> parts;
    auto cellpair_scan = [&](std::vector<std::pair<Symbol, Symbol>> ctrls, const Scan2& sc,
                             uint64_t w) {
        parts.push_back(attach_weight(build_scan2(a2, ctrls, sc), w));
    };

    // c -> t : x' = 2x + b, y' = 2y (shift with a fresh low bit).
    {
        Scan2 sc;
        // state: 0 = first cell pending; 1 + (cx*2+cy) afterwards
        sc.num_states = 5;
        sc.initial = 0;
        sc.step = [L](int st, Symbol s, Symbol t) -> int {
            if (!L.is_cell(s) || !L.is_cell(t)) return -1;
            if (L.fn(s) != L.fn(t) || L.fr(s) != L.fr(t)) return -1;
            if (st == 0) {
                if (L.fy(t) != 0) return -1;  // 2y has low bit zero
                return 1 + L.fx(s) * 2 + L.fy(s);
            }
            int cx = (st - 1) / 2, cy = (st - 1) % 2;
            if (L.fx(t) != cx || L.fy(t) != cy) return -1;
            return 1 + L.fx(s) * 2 + L.fy(s);
        };
        sc.accept = [](int st) { return st != 0; };
        cellpair_scan({{L.ctrl("c"), L.ctrl("t")}}, sc, 1);
    }

    // Comparison automata against the embedded n: status 0 lt, 1 eq, 2 gt,
    // updated most-significant-last.
    auto cmp_step = [](int status, int bit, int nbit) {
        if (bit == nbit) return status;
        return bit < nbit ? 0 : 2;
    };

    // t -> c when y < n (identity on cells).
    {
        Scan2 sc;
        sc.num_states = 3;
        sc.initial = 1;
        sc.step = [L, cmp_step](int st, Symbol s, Symbol t) -> int {
            if (s != t || !L.is_cell(s)) return -1;
            return cmp_step(st, L.fy(s), L.fn(s));
        };
        sc.accept = [](int st) { return st == 0; };
        cellpair_scan({{L.ctrl("t"), L.ctrl("c")}}, sc, 2);
    }

    // t -> f when y >= n and x < n (identity on cells).
    {
        Scan2 sc;
        sc.num_states = 9;
        sc.initial = 1 * 3 + 1;
        sc.step = [L, cmp_step](int st, Symbol s, Symbol t) -> int {
            if (s != t || !L.is_cell(s)) return -1;
            int sx = cmp_step(st / 3, L.fx(s), L.fn(s));
            int sy = cmp_step(st % 3, L.fy(s), L.fn(s));
            return sx * 3 + sy;
        };
        sc.accept = [](int st) { return st / 3 == 0 && st % 3 != 0; };
        cellpair_scan({{L.ctrl("t"), L.ctrl("f")}}, sc, 2);
    }

    if (!naive) {
        // t -> c with x -= n, y -= n when both at least n (borrow scan).
        Scan2 sc;
        sc.num_states = 4;  // borrow_x * 2 + borrow_y
        sc.initial = 0;
        sc.step = [L](int st, Symbol s, Symbol t) -> int {
            if (!L.is_cell(s) || !L.is_cell(t)) return -1;
            if (L.fn(s) != L.fn(t)) return -1;
            int bx = st / 2, by = st % 2;
            int dx = L.fx(s) - L.fn(s) - bx;
            int dy = L.fy(s) - L.fn(s) - by;
            int nbx = dx < 0 ? 1 : 0, nby = dy < 0 ? 1 : 0;
            if (L.fx(t) != ((dx + 2) & 1) || L.fy(t) != ((dy + 2) & 1)) return -1;
            return nbx * 2 + nby;
        };
        sc.accept = [](int st) { return st == 0; };
        cellpair_scan({{L.ctrl("t"), L.ctrl("c")}}, sc, 2);
    } else {
        // Restart by unwinding: t moves to the unwind control with the
        // restart counter bumped; unwinding halves x and y until (0,1),
        // which re-enters the sampling loop. Every reversed state then has
        // at most three predecessors.
        // t -> u: identity on x, y, n; rc gains one unary tick.
        Scan2 sc;
        sc.num_states = 18;  // (status_x, status_y, rc flip phase)
        sc.initial = (1 * 3 + 1) * 2 + 0;
        sc.step = [L, cmp_step](int st, Symbol s, Symbol t) -> int {
            if (!L.is_cell(s) || !L.is_cell(t)) return -1;
            if (L.fx(s) != L.fx(t) || L.fy(s) != L.fy(t) || L.fn(s) != L.fn(t)) return -1;
            int sx = st / 6, sy = (st / 2) % 3, ph = st % 2;
            int nph;
            if (ph == 0) {
                if (L.fr(s) == 1) {
                    if (L.fr(t) != 1) return -1;
                    nph = 0;
                } else {
                    if (L.fr(t) != 1) return -1;  // the tick lands here
                    nph = 1;
                }
            } else {
                if (L.fr(s) != 0 || L.fr(t) != 0) return -1;
                nph = 1;
            }
            int nx = cmp_step(sx, L.fx(s), L.fn(s));
            int ny = cmp_step(sy, L.fy(s), L.fn(s));
            return (nx * 3 + ny) * 2 + nph;
        };
        sc.accept = [](int st) {
            int sx = st / 6, sy = (st / 2) % 3, ph = st % 2;
            return sx != 0 && sy != 0 && ph == 1;
        };
        cellpair_scan({{L.ctrl("t"), L.ctrl("u")}}, sc, 2);

        // t -> z abort when the counter is exhausted and a restart is due.
        Scan2 sca;
        sca.num_states = 9;
        sca.initial = 1 * 3 + 1;
        sca.step = [L, cmp_step](int st, Symbol s, Symbol t) -> int {
            if (s != t || !L.is_cell(s)) return -1;
            if (L.fr(s) != 1) return -1;  // every rc bit set = counter full
            int nx = cmp_step(st / 3, L.fx(s), L.fn(s));
            int ny = cmp_step(st % 3, L.fy(s), L.fn(s));
            return nx * 3 + ny;
        };
        sca.accept = [](int st) { return st / 3 != 0 && st % 3 != 0; };
        cellpair_scan({{L.ctrl("t"), L.ctrl("z")}}, sca, 2);

        // u -> u: halve x and y while y is even and at least 2.
        Scan2 scu;
        // state: (first cell pending) or 1 + (prev_tx*2 + prev_ty)*2 + yhigh
        scu.num_states = 9;
        scu.initial = 0;
        scu.step = [L](int st, Symbol s, Symbol t) -> int {
            if (!L.is_cell(s) || !L.is_cell(t)) return -1;
            if (L.fn(s) != L.fn(t) || L.fr(s) != L.fr(t)) return -1;
            if (st == 0) {
                if (L.fy(s) != 0) return -1;  // y must be even
                return 1 + (L.fx(t) * 2 + L.fy(t)) * 2 + 0;
            }
            int core = st - 1;
            int ptx = core / 4, pty = (core / 2) % 2, yhigh = core % 2;
            if (L.fx(s) != ptx || L.fy(s) != pty) return -1;  // t = s shifted right
            int nyhigh = yhigh || L.fy(s) == 1;
            return 1 + (L.fx(t) * 2 + L.fy(t)) * 2 + nyhigh;
        };
        scu.accept = [](int st) {
            if (st == 0) return false;
            int core = st - 1;
            int ptx = core / 4, pty = (core / 2) % 2, yhigh = core % 2;
            // the dropped top bits are zero, and y >= 2 was witnessed
            return ptx == 0 && pty == 0 && yhigh == 1;
        };
        cellpair_scan({{L.ctrl("u"), L.ctrl("u")}}, scu, 2);

        // u -> c when fully unwound to x = 0, y = 1.
        Scan2 scc;
        scc.num_states = 2;  // first cell pending / done
        scc.initial = 0;
        scc.step = [L](int st, Symbol s, Symbol t) -> int {
            if (s != t || !L.is_cell(s)) return -1;
            if (st == 0) return (L.fx(s) == 0 && L.fy(s) == 1) ? 1 : -1;
            return (L.fx(s) == 0 && L.fy(s) == 0) ? 1 : -1;
        };
        scc.accept = [](int st) { return st == 1; };
        cellpair_scan({{L.ctrl("u"), L.ctrl("c")}}, scc, 2);

        // u -> z for the junk unwind states: y odd above 1, or y zero, or a
        // nonzero x alongside y = 1.
        Scan2 scj;
        // state: (first done, y0 bit, x nonzero, y high bit seen)
        scj.num_states = 16;
        scj.initial = 0;
        scj.step = [L](int st, Symbol s, Symbol t) -> int {
            if (s != t || !L.is_cell(s)) return -1;
            int done = st & 1, y0 = (st >> 1) & 1, xnz = (st >> 2) & 1, yhigh = (st >> 3) & 1;
            if (!done)
                y0 = L.fy(s);
            else
                yhigh = yhigh || L.fy(s);
            xnz = xnz || L.fx(s);
            return 1 | (y0 << 1) | (xnz << 2) | (yhigh << 3);
        };
        scj.accept = [](int st) {
            int done = st & 1, y0 = (st >> 1) & 1, xnz = (st >> 2) & 1, yhigh = (st >> 3) & 1;
            if (!done) return false;
            bool halvable = y0 == 0 && yhigh == 1;
            bool at_origin = y0 == 1 && !yhigh && !xnz;
            return !halvable && !at_origin;
        };
        cellpair_scan({{L.ctrl("u"), L.ctrl("z")}}, scj, 2);

        // z absorbs.
        Scan2 scz;
        scz.num_states = 1;
        scz.initial = 0;
        scz.step = [L](int, Symbol s, Symbol t) -> int { return (s == t && L.is_cell(s)) ? 0 : -1; };
        scz.accept = [](int) { return true; };
        cellpair_scan({{L.ctrl("z"), L.ctrl("z")}}, scz, 2);
    }

    // f absorbs.
    {
        Scan2 sc;
        sc.num_states = 1;
        sc.initial = 0;
        sc.step = [L](int, Symbol s, Symbol t) -> int { return (s == t && L.is_cell(s)) ? 0 : -1; };
        sc.accept = [](int) { return true; };
        cellpair_scan({{L.ctrl("f"), L.ctrl("f")}}, sc, 2);
    }

    CorpusModel cm;
    cm.name = naive ? "naive_rng" : "knuth_yao_rng";
    cm.model.config_universe = universe_aut;
    cm.model.weight_universe = weight_universe();
    cm.model.actions = {"step"};
    cm.model.delta = {restrict_delta(delta_union(std::move(parts)), universe_aut)};
    cm.model.branching_bound = 2;
    cm.model.kind = WtsKind::kMarkovChain;
    cm.model.q = 2;
    cm.model.length_preserving = true;
    cm.initial = initial_aut;

    // E: sources both final with equal y, n (and rc), both x below n.
    {
        Scan2 sc;
        sc.num_states = 9;
        sc.initial = 1 * 3 + 1;
        auto cs = [L](int status, int bit, int nbit) {
            if (bit == nbit) return status;
            return bit < nbit ? 0 : 2;
        };
        sc.step = [L, cs](int st, Symbol s, Symbol t) -> int {
            if (!L.is_cell(s) || !L.is_cell(t)) return -1;
            if (L.fy(s) != L.fy(t) || L.fn(s) != L.fn(t) || L.fr(s) != L.fr(t)) return -1;
            int a = cs(st / 3, L.fx(s), L.fn(s));
            int b = cs(st % 3, L.fx(t), L.fn(t));
            return a * 3 + b;
        };
        sc.accept = [](int st) { return st / 3 == 0 && st % 3 == 0; };
        cm.pairs = build_scan2(a2, {{L.ctrl("f"), L.ctrl("f")}}, sc);
    }
    cm.property = Property::kUniformity;
    cm.notes = naive ? "rejection sampler; restarts unwind the registers bit by bit"
                     : "Knuth-Yao sampler; outputs are uniform over 0..n-1";
    RngLayout Lcopy(naive);
    cm.final_info = [Lcopy](const FiniteWts& m, uint32_t s)
        -> std::optional<std::pair<std::string, std::string>> {
        const TrackWord& w = m.states[s];
        if (m.config_alpha.symbol_name(0, w[0]) != "f") return std::nullopt;
        uint64_t x = 0;
        for (size_t i = w.size(); i-- > 1;) {
            Symbol cell = w[i];
            x = x * 2 + (m.config_alpha.symbol_name(0, cell)[0] - '0');
        }
        return std::make_pair(std::string("F"), "x=" + std::to_string(x));
    };
    cm.reverse_branching_bound = naive ? 3 : 2;
    if (!naive) {
        cm.expected_class_prob = [Lcopy](const FiniteWts& m, uint32_t s0) -> std::optional<Rat> {
            const TrackWord& w = m.states[s0];
            uint64_t n = 0;
            for (size_t i = w.size(); i-- > 1;)
                n = n * 2 + (m.config_alpha.symbol_name(0, w[i])[2] - '0');
            return Rat(1, Int(n));
        };
    }
    return cm;
}

// ---- ballot ---------------------------------------------------------------
//
// Cells carry (step, a, b) unary-prefix bits; controls carry the first-vote
// and tie flags.

struct BallotLayout {
    std::vector<std::string> syms{"rnu", "rau", "rat", "rbu", "rbt", "fau",
                                  "fat", "fbu", "fbt", "000", "100", "110", "101", "111"};
    TrackAlphabet a1, a2;
    BallotLayout() : a1({syms}), a2({syms, syms}) {}
    bool is_cell(Symbol s) const { return s >= 9; }
    int fs(Symbol s) const { return syms[s][0] - '0'; }
    int fa(Symbol s) const { return syms[s][1] - '0'; }
    int fb(Symbol s) const { return syms[s][2] - '0'; }
    Symbol cell(int st, int a, int b) const {
        std::string n;
        n += char('0' + st);
        n += char('0' + a);
        n += char('0' + b);
        return a1.symbol_index(0, n);
    }
    Symbol ctrl(const char* c) const { return a1.symbol_index(0, c); }
};

CorpusModel make_ballot() {
    BallotLayout L;
    auto& a1 = L.a1;
    auto& a2 = L.a2;

    // Universe: every field is a unary prefix.
    Scan1 uni;
    uni.num_states = 8;  // bit per field: still inside the 1-prefix?
    uni.initial = 7;
    uni.step = [L](int st, Symbol s) -> int {
        if (!L.is_cell(s)) return -1;
        int bs = L.fs(s), ba = L.fa(s), bb = L.fb(s);
        int ps = (st >> 2) & 1, pa = (st >> 1) & 1, pb = st & 1;
        if ((bs && !ps) || (ba && !pa) || (bb && !pb)) return -1;
        return (bs << 2) | (ba << 1) | bb;
    };
    uni.accept = [](int) { return true; };
    std::vector<Symbol> rctrls{L.ctrl("rnu"), L.ctrl("rau"), L.ctrl("rat"), L.ctrl("rbu"),
                               L.ctrl("rbt")};
    std::vector<Symbol> fctrls{L.ctrl("fau"), L.ctrl("fat"), L.ctrl("fbu"), L.ctrl("fbt")};
    std::vector<Symbol> all_ctrls = rctrls;
    all_ctrls.insert(all_ctrls.end(), fctrls.begin(), fctrls.end());
    Mta mono = build_scan1(a1, all_ctrls, uni);
    // rnu only with zero votes; f-controls only with a full step field; at
    // least one cell always.
    Re c000 = Re::lits({a1.encode(std::vector<Symbol>{L.cell(0, 0, 0)})});
    std::vector<Letter> stepped, anycell;
    for (Symbol s = 9; s < a1.track_size(0); ++s) {
        anycell.push_back(a1.encode(std::vector<Symbol>{s}));
        if (L.fs(s) == 1) stepped.push_back(a1.encode(std::vector<Symbol>{s}));
    }
    auto ctrl_lits = [&](std::vector<Symbol> cs) {
        std::vector<Letter> ls;
        for (Symbol c : cs) ls.push_back(a1.encode(std::vector<Symbol>{c}));
        return Re::lits(ls);
    };
    Mta shape =
        Re::alt({Re::seq({ctrl_lits({L.ctrl("rnu")}), Re::plus(c000)}),
                 Re::seq({ctrl_lits({L.ctrl("rau"), L.ctrl("rat"), L.ctrl("rbu"), L.ctrl("rbt")}),
                          Re::lits(stepped), Re::star(Re::lits(anycell))}),
                 Re::seq({ctrl_lits(fctrls), Re::plus(Re::lits(stepped))})})
            .to_mta(a1);
    Mta universe_aut = product(mono, shape, ProductMode::kAnd);

    // Vote transitions: one count flips, the step marker advances, the tie
    // flag follows the equality of the updated a and b fields.
    std::vector<Mta> parts;
    // phase: 0 before the count flip, 1 between, 2 after the step flip;
    // eq: target a-field equals target b-field so far.
    auto vote_scan = [&](bool voteA, Symbol c_from, Symbol c_to, int need_eq) {
        Scan2 sc;
        sc.num_states = 6;  // phase * 2 + eq
        sc.initial = 0 * 2 + 1;
        sc.step = [L, voteA](int st, Symbol s, Symbol t) -> int {
            if (!L.is_cell(s) || !L.is_cell(t)) return -1;
            int ph = st / 2, eq = st % 2;
            int ss = L.fs(s), sa = L.fa(s), sb = L.fb(s);
            int ts = L.fs(t), ta = L.fa(t), tb = L.fb(t);
            int neq = (eq && ta == tb) ? 1 : 0;
            int nph;
            if (ph == 0) {
                if (s == t && ss == 1) {
                    nph = 0;  // before the count flip
                } else if (voteA && ss == 1 && ts == 1 && sa == 0 && ta == 1 && sb == tb) {
                    nph = 1;  // count flip, step flip still ahead
                } else if (!voteA && ss == 1 && ts == 1 && sb == 0 && tb == 1 && sa == ta) {
                    nph = 1;
                } else if (voteA && ss == 0 && ts == 1 && sa == 0 && ta == 1 && sb == 0 && tb == 0) {
                    nph = 2;  // count and step flip in the same cell
                } else if (!voteA && ss == 0 && ts == 1 && sb == 0 && tb == 1 && sa == 0 && ta == 0) {
                    nph = 2;
                } else {
                    return -1;
                }
            } else if (ph == 1) {
                if (s == t && ss == 1) {
                    nph = 1;
                } else if (ss == 0 && ts == 1 && sa == 0 && ta == 0 && sb == 0 && tb == 0) {
                    nph = 2;  // step flip
                } else {
                    return -1;
                }
            } else {
                if (s == t && ss == 0) {
                    nph = 2;
                } else {
                    return -1;
                }
            }
            return nph * 2 + neq;
        };
        sc.accept = [need_eq](int st) {
            if (st / 2 != 2) return false;
            if (need_eq == -1) return true;
            return (st % 2) == need_eq;
        };
        parts.push_back(attach_weight(build_scan2(a2, {{c_from, c_to}}, sc), 1));
    };
    // vote A
    vote_scan(true, L.ctrl("rnu"), L.ctrl("rau"), 0);
    vote_scan(true, L.ctrl("rau"), L.ctrl("rau"), 0);
    vote_scan(true, L.ctrl("rau"), L.ctrl("rat"), 1);
    vote_scan(true, L.ctrl("rat"), L.ctrl("rat"), -1);
    vote_scan(true, L.ctrl("rbu"), L.ctrl("rbu"), 0);
    vote_scan(true, L.ctrl("rbu"), L.ctrl("rbt"), 1);
    vote_scan(true, L.ctrl("rbt"), L.ctrl("rbt"), -1);
    // vote B
    vote_scan(false, L.ctrl("rnu"), L.ctrl("rbu"), 0);
    vote_scan(false, L.ctrl("rau"), L.ctrl("rau"), 0);
    vote_scan(false, L.ctrl("rau"), L.ctrl("rat"), 1);
    vote_scan(false, L.ctrl("rat"), L.ctrl("rat"), -1);
    vote_scan(false, L.ctrl("rbu"), L.ctrl("rbu"), 0);
    vote_scan(false, L.ctrl("rbu"), L.ctrl("rbt"), 1);
    vote_scan(false, L.ctrl("rbt"), L.ctrl("rbt"), -1);
    // finish: all cells stepped, control moves to f preserving the flags
    auto finish = [&](const char* from, const char* to) {
        Scan2 sc;
        sc.num_states = 1;
        sc.initial = 0;
        sc.step = [L](int, Symbol s, Symbol t) -> int {
            return (s == t && L.is_cell(s) && L.fs(s) == 1) ? 0 : -1;
        };
        sc.accept = [](int) { return true; };
        parts.push_back(attach_weight(build_scan2(a2, {{L.ctrl(from), L.ctrl(to)}}, sc), 2));
    };
    finish("rau", "fau");
    finish("rat", "fat");
    finish("rbu", "fbu");
    finish("rbt", "fbt");
    // absorbing finals
    {
        Scan2 sc;
        sc.num_states = 1;
        sc.initial = 0;
        sc.step = [L](int, Symbol s, Symbol t) -> int { return (s == t && L.is_cell(s)) ? 0 : -1; };
        sc.accept = [](int) { return true; };
        std::vector<std::pair<Symbol, Symbol>> selfs;
        for (Symbol c : fctrls) selfs.emplace_back(c, c);
        parts.push_back(attach_weight(build_scan2(a2, selfs, sc), 2));
    }

    CorpusModel cm;
    cm.name = "ballot";
    cm.model.config_universe = universe_aut;
    cm.model.weight_universe = weight_universe();
    cm.model.actions = {"step"};
    cm.model.delta = {restrict_delta(delta_union(std::move(parts)), universe_aut)};
    cm.model.branching_bound = 2;
    cm.model.kind = WtsKind::kMarkovChain;
    cm.model.q = 2;
    cm.model.length_preserving = true;
    cm.initial = Re::seq({ctrl_lits({L.ctrl("rnu")}), Re::plus(c000)}).to_mta(a1);
    // E: tied finals with opposite first vote and swapped counts.
    {
        Scan2 sc;
        sc.num_states = 1;
        sc.initial = 0;
        sc.step = [L](int, Symbol s, Symbol t) -> int {
            if (!L.is_cell(s) || !L.is_cell(t)) return -1;
            return (L.fs(s) == L.fs(t) && L.fa(s) == L.fb(t) && L.fb(s) == L.fa(t)) ? 0 : -1;
        };
        sc.accept = [](int) { return true; };
        cm.pairs = build_scan2(a2,
                               {{L.ctrl("fat"), L.ctrl("fbt")}, {L.ctrl("fbt"), L.ctrl("fat")}},
                               sc);
    }
    cm.property = Property::kUniformity;
    cm.notes = "vote counting; first vote A then tie pairs with first vote B then tie";
    BallotLayout Lc;
    cm.final_info = [Lc](const FiniteWts& m, uint32_t s)
        -> std::optional<std::pair<std::string, std::string>> {
        std::string c = m.config_alpha.symbol_name(0, m.states[s][0]);
        if (c == "fat") return std::make_pair(std::string("tied"), std::string("first=A"));
        if (c == "fbt") return std::make_pair(std::string("tied"), std::string("first=B"));
        return std::nullopt;
    };
    cm.expected_class_prob = nullptr;
    cm.reverse_branching_bound = 2;
    return cm;
}

// ---- dining cryptographers, probabilistic-program form ---------------------
//
// Cells carry (x, y, step); the observer's coins are fixed to zero so the
// loop flips y[i-1], y[i] for i = 2..n-1.

struct DcpULayout {
    std::vector<std::string> syms{"r", "f", "000", "010", "100", "110", "001",
                                  "011", "101", "111"};
    TrackAlphabet a1, a2;
    DcpULayout() : a1({syms}), a2({syms, syms}) {}
    bool is_cell(Symbol s) const { return s >= 2; }
    int fx(Symbol s) const { return syms[s][0] - '0'; }
    int fy(Symbol s) const { return syms[s][1] - '0'; }
    int fs(Symbol s) const { return syms[s][2] - '0'; }
    Symbol ctrl(const char* c) const { return a1.symbol_index(0, c); }
};

CorpusModel make_dcp_uniform() {
    DcpULayout L;
    auto& a1 = L.a1;
    auto& a2 = L.a2;

    // Universe: step field is a unary prefix of length >= 2, word has >= 3
    // cells; f needs the prefix complete.
    Scan1 uni;
    uni.num_states = 6;  // min(position,3) while stepped, then 4/5 unstepped
    uni.initial = 0;
    uni.step = [L](int st, Symbol s) -> int {
        if (!L.is_cell(s)) return -1;
        int stepped = L.fs(s);
        if (st <= 2) {
            if (stepped) return std::min(st + 1, 3);
            return st >= 2 ? 4 : -1;  // prefix must cover the first two cells
        }
        if (st == 3) return stepped ? 3 : 4;
        return stepped ? -1 : 4;
    };
    uni.accept = [](int st) { return st >= 3; };
    Mta uni_r = build_scan1(a1, {L.ctrl("r")}, uni);
    Scan1 unif = uni;
    unif.accept = [](int st) { return st == 3; };
    Mta uni_f = build_scan1(a1, {L.ctrl("f")}, unif);
    Mta universe_aut = product(uni_r, uni_f, ProductMode::kOr);

    std::vector<Mta> parts;
    // Coin at the first unstepped cell i >= 2: optionally flips y[i-1], y[i].
    for (int b : {0, 1}) {
        Scan2 sc;
        // state: cells consumed before the flip (0,1,2+), then 3 = at i-1
        // flipped (b=1 only), 4 = done
        sc.num_states = 5;
        sc.initial = 0;
        sc.step = [L, b](int st, Symbol s, Symbol t) -> int {
            if (!L.is_cell(s) || !L.is_cell(t)) return -1;
            int same = s == t;
            bool flip_y = L.fx(s) == L.fx(t) && L.fy(s) != L.fy(t);
            if (st <= 2) {
                if (same && L.fs(s) == 1) return std::min(st + 1, 2);
                if (b == 1) {
                    // y flip at cell i-1 (i >= 2, so at least one cell before)
                    if (st >= 1 && flip_y && L.fs(s) == 1 && L.fs(t) == 1) return 3;
                    return -1;
                }
                // b = 0: the step marker flips at cell i >= 2
                if (st < 2 || same) return -1;
                if (L.fx(s) == L.fx(t) && L.fy(s) == L.fy(t) && L.fs(s) == 0 && L.fs(t) == 1)
                    return 4;
                return -1;
            }
            if (st == 3) {
                if (flip_y && L.fs(s) == 0 && L.fs(t) == 1) return 4;
                return -1;
            }
            if (same && L.fs(s) == 0) return 4;
            return -1;
        };
        sc.accept = [](int st) { return st == 4; };
        parts.push_back(attach_weight(build_scan2(a2, {{L.ctrl("r"), L.ctrl("r")}}, sc), 1));
    }
    // Finish and absorb.
    {
        Scan2 sc;
        sc.num_states = 1;
        sc.initial = 0;
        sc.step = [L](int, Symbol s, Symbol t) -> int {
            return (s == t && L.is_cell(s) && L.fs(s) == 1) ? 0 : -1;
        };
        sc.accept = [](int) { return true; };
        parts.push_back(attach_weight(build_scan2(a2, {{L.ctrl("r"), L.ctrl("f")}}, sc), 2));
        parts.push_back(attach_weight(build_scan2(a2, {{L.ctrl("f"), L.ctrl("f")}}, sc), 2));
    }

    CorpusModel cm;
    cm.name = "dcp_uniform";
    cm.model.config_universe = universe_aut;
    cm.model.weight_universe = weight_universe();
    cm.model.actions = {"step"};
    cm.model.delta = {restrict_delta(delta_union(std::move(parts)), universe_aut)};
    cm.model.branching_bound = 2;
    cm.model.kind = WtsKind::kMarkovChain;
    cm.model.q = 2;
    cm.model.length_preserving = true;
    // I: y = x, steps 1,1,0... with at least one pending coin.
    {
        Scan1 init;
        init.num_states = 4;  // two stepped cells, then unstepped ones
        init.initial = 0;
        init.step = [L](int st, Symbol s) -> int {
            if (!L.is_cell(s)) return -1;
            if (L.fx(s) != L.fy(s)) return -1;
            if (st < 2) return L.fs(s) == 1 ? st + 1 : -1;
            return L.fs(s) == 0 ? 3 : -1;
        };
        init.accept = [](int st) { return st == 3; };
        cm.initial = build_scan1(a1, {L.ctrl("r")}, init);
    }
    // E: same x field, both parities of x xor y vanish, first cells y = x.
    {
        Scan2 sc;
        sc.num_states = 8;  // first-cell-done, parity_s, parity_t
        sc.initial = 0;
        sc.step = [L](int st, Symbol s, Symbol t) -> int {
            if (!L.is_cell(s) || !L.is_cell(t)) return -1;
            if (L.fx(s) != L.fx(t) || L.fs(s) != 1 || L.fs(t) != 1) return -1;
            int done = st & 1, ps = (st >> 1) & 1, pt = (st >> 2) & 1;
            if (!done && (L.fy(s) != L.fx(s) || L.fy(t) != L.fx(t))) return -1;
            ps ^= L.fx(s) ^ L.fy(s);
            pt ^= L.fx(t) ^ L.fy(t);
            return 1 | (ps << 1) | (pt << 2);
        };
        sc.accept = [](int st) { return st == 1; };
        cm.pairs = build_scan2(a2, {{L.ctrl("f"), L.ctrl("f")}}, sc);
    }
    cm.property = Property::kUniformity;
    cm.notes = "announcement vector is uniform over the parity- and first-bit-compatible set";
    DcpULayout Lc;
    cm.final_info = [Lc](const FiniteWts& m, uint32_t s)
        -> std::optional<std::pair<std::string, std::string>> {
        const TrackWord& w = m.states[s];
        if (m.config_alpha.symbol_name(0, w[0]) != "f") return std::nullopt;
        std::string x = "x:", y = "y=";
        for (size_t i = 1; i < w.size(); ++i) {
            const std::string& n = m.config_alpha.symbol_name(0, w[i]);
            x += n[0];
            y += n[1];
        }
        return std::make_pair(x, y);
    };
    cm.expected_class_prob = [](const FiniteWts& m, uint32_t s0) -> std::optional<Rat> {
        size_t cells = m.states[s0].size() - 1;
        Int denom = Int(1) << (cells - 2);
        return Rat(1, denom);
    };
    cm.reverse_branching_bound = 2;
    return cm;
}

// ---- dining cryptographers, MDP form ---------------------------------------
//
// Cells carry (bit, upd, ann). The observer's two coins are the adversary's
// H/T choices; the other coins are probabilistic with action X; the
// announcement phase emits the bits as actions.

struct DcpALayout {
    std::vector<std::string> syms{"m",   "000", "010", "100", "110",
                                  "001", "011", "101", "111"};
    TrackAlphabet a1, a2;
    DcpALayout() : a1({syms}), a2({syms, syms}) {}
    bool is_cell(Symbol s) const { return s >= 1; }
    int fb(Symbol s) const { return syms[s][0] - '0'; }
    int fu(Symbol s) const { return syms[s][1] - '0'; }
    int fa(Symbol s) const { return syms[s][2] - '0'; }
    Symbol ctrl() const { return a1.symbol_index(0, "m"); }
};

CorpusModel make_dcp_anonymity() {
    DcpALayout L;
    auto& a1 = L.a1;
    auto& a2 = L.a2;

    // Universe: upd and ann are unary prefixes; ann may only start once upd
    // is complete; at least 3 cells.
    Scan1 uni;
    // state: (upd prefix open, ann prefix open, upd zero seen, ann one seen,
    // cells count capped at 3) — compress: (u_open, a_open, u0seen, a1seen)
    // with count tracked separately 0..3.
    uni.num_states = 16 * 4;
    uni.initial = (1 | 2) * 4 + 0;
    uni.step = [L](int st, Symbol s) -> int {
        if (!L.is_cell(s)) return -1;
        int flags = st / 4, cnt = st % 4;
        bool u_open = flags & 1, a_open = flags & 2, u0 = flags & 4, a1s = flags & 8;
        int u = L.fu(s), a = L.fa(s);
        if (u == 1 && !u_open) return -1;
        if (a == 1 && !a_open) return -1;
        if (u == 0) {
            u_open = false;
            u0 = true;
        }
        if (a == 0) a_open = false;
        if (a == 1) a1s = true;
        if (a1s && u0) return -1;  // announcements before updates finished
        int nf = (u_open ? 1 : 0) | (a_open ? 2 : 0) | (u0 ? 4 : 0) | (a1s ? 8 : 0);
        return nf * 4 + std::min(cnt + 1, 3);
    };
    uni.accept = [](int st) { return st % 4 == 3; };
    Mta universe_aut = build_scan1(a1, {L.ctrl()}, uni);

    std::vector<Mta> parts;
    std::vector<std::string> actions{"H", "T", "X", "0", "1"};
    std::vector<Mta> deltas;
    auto scan = [&](const Scan2& sc) {
        return build_scan2(a2, {{L.ctrl(), L.ctrl()}}, sc);
    };
    auto cellok = [L](Symbol s, Symbol t) { return L.is_cell(s) && L.is_cell(t); };

    // X: coin i in 1..n-2; b=0 sets upd[i], b=1 also flips bit[i], bit[i+1].
    Mta delta_X;
    {
        std::vector<Mta> xs;
        for (int b : {0, 1}) {
            Scan2 sc;
            // 4: no pre cell yet; 0: in pre cells; 1: after flip at i (b=1);
            // 2: after the bit flip at i+1 (b=1); 5: flipped, post cell still
            // required (b=0); 3: in post cells (b=0 complete)
            sc.num_states = 6;
            sc.initial = 4;
            sc.step = [L, b, cellok](int st, Symbol s, Symbol t) -> int {
                if (!cellok(s, t)) return -1;
                bool same = s == t;
                bool pre_ok = same && L.fu(s) == 1 && L.fa(s) == 0;
                bool flip_i = L.fu(s) == 0 && L.fu(t) == 1 && L.fa(s) == 0 && L.fa(t) == 0 &&
                              (b == 0 ? L.fb(s) == L.fb(t) : L.fb(s) != L.fb(t));
                bool flip_i1 = L.fb(s) != L.fb(t) && L.fu(s) == 0 && L.fu(t) == 0 &&
                               L.fa(s) == 0 && L.fa(t) == 0;
                bool post_ok = same && L.fu(s) == 0 && L.fa(s) == 0;
                switch (st) {
                    case 4:
                        if (pre_ok) return 0;
                        return -1;
                    case 0:
                        if (pre_ok) return 0;
                        if (flip_i) return b == 0 ? 5 : 1;
                        return -1;
                    case 1:
                        if (flip_i1) return 2;
                        return -1;
                    case 2:
                        if (post_ok) return 2;
                        return -1;
                    case 5:
                    case 3:
                        if (post_ok) return 3;
                        return -1;
                }
                return -1;
            };
            // b=0 needs a cell after i; b=1 reaches i+1 anyway.
            sc.accept = b == 0 ? std::function<bool(int)>([](int st) { return st == 3; })
                               : std::function<bool(int)>([](int st) { return st == 2; });
            xs.push_back(attach_weight(scan(sc), 1));
        }
        delta_X = delta_union(std::move(xs));
    }
    // H/T at i = 0: first cell upd flips; T also flips bit[0] and bit[1].
    auto coin0 = [&](bool flip) {
        Scan2 sc;
        sc.num_states = 3;  // 0 start, 1 = after cell0 (flip? need cell1), 2 done
        sc.initial = 0;
        sc.step = [L, flip, cellok](int st, Symbol s, Symbol t) -> int {
            if (!cellok(s, t)) return -1;
            if (st == 0) {
                bool bit_ok = flip ? L.fb(s) != L.fb(t) : L.fb(s) == L.fb(t);
                if (bit_ok && L.fu(s) == 0 && L.fu(t) == 1 && L.fa(s) == 0 && L.fa(t) == 0)
                    return flip ? 1 : 2;
                return -1;
            }
            if (st == 1) {
                if (L.fb(s) != L.fb(t) && L.fu(s) == 0 && L.fu(t) == 0 && L.fa(s) == 0 &&
                    L.fa(t) == 0)
                    return 2;
                return -1;
            }
            bool same = s == t && L.fu(s) == 0 && L.fa(s) == 0;
            return same ? 2 : -1;
        };
        sc.accept = [](int st) { return st == 2; };
        return attach_weight(scan(sc), 2);
    };
    // H/T at i = n-1: the last cell's upd flips; T also flips bit[n-1], bit[0].
    auto coin_last = [&](bool flip) {
        Scan2 sc;
        sc.num_states = 3;  // 0 at first cell, 1 middle, 2 after final flip
        sc.initial = 0;
        sc.step = [L, flip, cellok](int st, Symbol s, Symbol t) -> int {
            if (!cellok(s, t)) return -1;
            bool mid_ok = s == t && L.fu(s) == 1 && L.fa(s) == 0;
            bool final_ok = (flip ? L.fb(s) != L.fb(t) : L.fb(s) == L.fb(t)) && L.fu(s) == 0 &&
                            L.fu(t) == 1 && L.fa(s) == 0 && L.fa(t) == 0;
            if (st == 0) {
                bool first_ok = (flip ? L.fb(s) != L.fb(t) : s == t) && L.fu(s) == 1 &&
                                L.fu(t) == 1 && L.fa(s) == 0 && L.fa(t) == 0;
                return first_ok ? 1 : -1;
            }
            if (st == 1) {
                if (mid_ok) return 1;
                if (final_ok) return 2;
                return -1;
            }
            return -1;  // the flip must be the last cell
        };
        sc.accept = [](int st) { return st == 2; };
        return attach_weight(scan(sc), 2);
    };
    Mta delta_H = delta_union({coin0(false), coin_last(false)});
    Mta delta_T = delta_union({coin0(true), coin_last(true)});
    // Announce bit v at the first ann-0 cell; all upd bits set.
    auto announce = [&](int v) {
        Scan2 sc;
        sc.num_states = 2;  // 0 pre (ann=1), 1 post (ann=0)
        sc.initial = 0;
        sc.step = [L, v, cellok](int st, Symbol s, Symbol t) -> int {
            if (!cellok(s, t)) return -1;
            if (L.fu(s) != 1 || L.fu(t) != 1) return -1;
            if (st == 0) {
                if (s == t && L.fa(s) == 1) return 0;
                if (L.fb(s) == v && L.fb(t) == v && L.fb(s) == L.fb(t) && L.fa(s) == 0 &&
                    L.fa(t) == 1)
                    return 1;
                return -1;
            }
            return (s == t && L.fa(s) == 0) ? 1 : -1;
        };
        sc.accept = [](int st) { return st == 1; };
        return attach_weight(scan(sc), 2);
    };

    CorpusModel cm;
    cm.name = "dcp_anonymity";
    cm.model.config_universe = universe_aut;
    cm.model.weight_universe = weight_universe();
    cm.model.actions = actions;
    cm.model.delta = {restrict_delta(delta_H, universe_aut), restrict_delta(delta_T, universe_aut),
                      restrict_delta(delta_X, universe_aut),
                      restrict_delta(announce(0), universe_aut),
                      restrict_delta(announce(1), universe_aut)};
    cm.model.branching_bound = 2;
    cm.model.kind = WtsKind::kMdp;
    cm.model.q = 2;
    cm.model.length_preserving = true;
    // I: all flags clear.
    {
        Scan1 init;
        init.num_states = 1;
        init.initial = 0;
        init.step = [L](int, Symbol s) -> int {
            if (!L.is_cell(s)) return -1;
            return (L.fu(s) == 0 && L.fa(s) == 0) ? 0 : -1;
        };
        init.accept = [](int) { return true; };
        Mta flags_clear = build_scan1(a1, {L.ctrl()}, init);
        cm.initial = product(flags_clear, universe_aut, ProductMode::kAnd);
    }
    // E: initial pairs with equal first bit and equal parity.
    {
        Scan2 sc;
        sc.num_states = 4;  // first-done | parity difference
        sc.initial = 0;
        sc.step = [L, cellok](int st, Symbol s, Symbol t) -> int {
            if (!cellok(s, t)) return -1;
            if (L.fu(s) != 0 || L.fa(s) != 0 || L.fu(t) != 0 || L.fa(t) != 0) return -1;
            int done = st & 1, par = (st >> 1) & 1;
            if (!done && L.fb(s) != L.fb(t)) return -1;
            par ^= L.fb(s) ^ L.fb(t);
            return 1 | (par << 1);
        };
        sc.accept = [](int st) { return st == 1; };
        Mta raw = build_scan2(a2, {{L.ctrl(), L.ctrl()}}, sc);
        auto j1 = join(raw, {0, 1}, cm.initial, {0});
        auto j2 = join(j1.aut, j1.tracks, cm.initial, {1});
        cm.pairs = j2.aut;
    }
    cm.property = Property::kAnonymity;
    cm.notes = "observer is participant 0; its coins are the H/T actions, announcements "
               "reveal the updated bits";
    return cm;
}

// ---- probabilistic pushdown example ----------------------------------------

std::vector<std::string> ppda_syms() { return {"b", "c", "d", "X", "X'", "Y", "Z"}; }
std::vector<std::string> ppda_stack() { return {"X", "X'", "Y", "Z"}; }

CorpusModel make_ppda() {
    auto syms = ppda_syms();
    TrackAlphabet a1({syms});
    auto rule = [&](std::vector<std::string> lhs, std::vector<std::string> rhs, uint64_t w) {
        return attach_weight(shift_tail_pair(syms, ppda_stack(), lhs, rhs), w);
    };
    std::vector<Mta> parts{
        rule({"d", "X"}, {"b", "X", "X"}, 5), rule({"d", "X"}, {"d"}, 5),
        rule({"b", "X"}, {"d", "X", "X"}, 10), rule({"c", "Y"}, {"c", "X", "X"}, 10),
        rule({"c", "X"}, {"c", "Y", "X"}, 3), rule({"c", "X"}, {"c", "Y", "X'"}, 2),
        rule({"c", "X"}, {"c"}, 5), rule({"c", "X'"}, {"c", "Y", "X"}, 4),
        rule({"c", "X'"}, {"c", "Y", "X'"}, 1), rule({"c", "X'"}, {"c"}, 5)};

    CorpusModel cm;
    cm.name = "ppda_example";
    auto S1 = [&](const char* s) { return a1.encode(std::vector<Symbol>{a1.symbol_index(0, s)}); };
    std::vector<Letter> stack_lits;
    for (auto& s : ppda_stack()) stack_lits.push_back(S1(s.c_str()));
    cm.model.config_universe =
        Re::seq({Re::lits({S1("b"), S1("c"), S1("d")}), Re::star(Re::lits(stack_lits))}).to_mta(a1);
    cm.model.weight_universe = weight_universe();
    cm.model.actions = {"step"};
    cm.model.delta = {restrict_delta(delta_union(std::move(parts)), cm.model.config_universe)};
    cm.model.branching_bound = 3;
    cm.model.kind = WtsKind::kWts;
    cm.model.q = 10;
    cm.model.length_preserving = false;
    cm.initial = word_set(a1, {convolve({track_word(a1, 0, {"d", "X", "Z"})}, a1)});
    TrackAlphabet a2({syms, syms});
    cm.pairs = word_set(a2, {convolve({track_word(a2, 0, {"d", "X", "Z"}),
                                       track_word(a2, 1, {"c", "X"})},
                                      a2)});
    cm.property = Property::kCheckOnly;
    cm.notes = "pushdown chain; dXZ and cX are bisimilar";
    return cm;
}

Mta ppda_disjunct(int i, bool corrupted) {
    auto syms = ppda_syms();
    TrackAlphabet a2({syms, syms});
    auto P = [&](const char* x, const char* y) {
        std::vector<Symbol> d{x ? a2.symbol_index(0, x) : a2.blank(0),
                              y ? a2.symbol_index(1, y) : a2.blank(1)};
        return a2.encode(d);
    };
    Re XX = Re::lits({P("X", "X"), P("X", "X'")});
    Re WW = Re::lits({P("X", "X"), P("X", "X'"), P("X'", "X"), P("X'", "X'")});
    switch (i) {
        case 0:  // d X^k Z ~ c w_k
            return corrupted
                       ? Re::seq({Re::lit(P("d", "c")), Re::star(XX),
                                  Re::lits({P("Z", "X"), P("Z", "X'")})})
                             .to_mta(a2)
                       : Re::seq({Re::lit(P("d", "c")), Re::star(XX), Re::lit(P("Z", nullptr))})
                             .to_mta(a2);
        case 1:  // c w ~ c w' with |w| = |w'|
            return corrupted
                       ? Re::seq({Re::lit(P("c", "c")), Re::star(WW),
                                  Re::lits({P("X", nullptr), P("X'", nullptr)})})
                             .to_mta(a2)
                       : Re::seq({Re::lit(P("c", "c")), Re::star(WW)}).to_mta(a2);
        case 2:  // b X^k Z ~ c Y w_{k-1}
            return corrupted
                       ? Re::seq({Re::lit(P("b", "c")), Re::lit(P("X", "Y")), Re::star(XX),
                                  Re::lits({P("Z", "X"), P("Z", "X'")})})
                             .to_mta(a2)
                       : Re::seq({Re::lit(P("b", "c")), Re::lit(P("X", "Y")), Re::star(XX),
                                  Re::lit(P("Z", nullptr))})
                             .to_mta(a2);
        case 3:  // c Y w ~ c Y w' with |w| = |w'|
            return corrupted
                       ? Re::seq({Re::lit(P("c", "c")), Re::lit(P("Y", "Y")), Re::star(WW),
                                  Re::lits({P("X", nullptr), P("X'", nullptr)})})
                             .to_mta(a2)
                       : Re::seq({Re::lit(P("c", "c")), Re::lit(P("Y", "Y")), Re::star(WW)})
                             .to_mta(a2);
    }
    throw invalid_input_error("disjunct index out of range");
}

Mta ppda_relation_impl(int corrupt_index) {
    auto syms = ppda_syms();
    TrackAlphabet a1({syms});
    auto S1 = [&](const char* s) { return a1.encode(std::vector<Symbol>{a1.symbol_index(0, s)}); };
    std::vector<Letter> all;
    for (auto& s : syms) all.push_back(S1(s.c_str()));
    Mta ident = diagonal(Re::seq({Re::lits({S1("b"), S1("c"), S1("d")}),
                                  Re::star(Re::lits({S1("X"), S1("X'"), S1("Y"), S1("Z")}))})
                             .to_mta(a1));
    Mta acc = ident;
    for (int i = 0; i < 4; ++i) {
        Mta d = ppda_disjunct(i, corrupt_index == i);
        acc = product(acc, d, ProductMode::kOr);
        acc = product(acc, reorder_tracks(d, {1, 0}), ProductMode::kOr);
    }
    return acc;
}

}  // namespace

Mta ppda_relation() { return ppda_relation_impl(-1); }
Mta ppda_relation_corrupted(int disjunct) { return ppda_relation_impl(disjunct); }

std::vector<std::string> corpus_names() {
    return {"figure3_chain", "random_walk", "random_sum",   "knuth_yao_rng", "naive_rng",
            "ballot",        "dcp_uniform", "dcp_anonymity", "ppda_example"};
}

CorpusModel load(const std::string& name) {
    CorpusModel cm = [&] {
        if (name == "figure3_chain") return make_figure3();
        if (name == "random_walk") return make_random_walk();
        if (name == "random_sum") return make_random_sum();
        if (name == "knuth_yao_rng") return make_rng(false);
        if (name == "naive_rng") return make_rng(true);
        if (name == "ballot") return make_ballot();
        if (name == "dcp_uniform") return make_dcp_uniform();
        if (name == "dcp_anonymity") return make_dcp_anonymity();
        if (name == "ppda_example") return make_ppda();
        throw invalid_input_error("unknown corpus model: " + name);
    }();
    // Clamp the declared sets to the configuration universe.
    const Mta& u = cm.model.config_universe;
    cm.initial = product(cm.initial, u, ProductMode::kAnd);
    auto j1 = join(cm.pairs, {0, 1}, u, {0});
    auto j2 = join(j1.aut, j1.tracks, u, {1});
    cm.pairs = j2.aut;
    return cm;
}

// ---- oracles ---------------------------------------------------------------

std::map<uint32_t, Rat> reach_distribution(const FiniteWts& m, uint32_t s0,
                                           const std::vector<uint32_t>& targets, bool* flagged) {
    if (m.kind != WtsKind::kMarkovChain)
        throw invalid_input_error("reach_distribution expects a Markov chain");
    auto adj = m.adjacency();
    size_t n = m.states.size();
    // Absorbing = only self-loops.
    std::vector<char> absorbing(n, 1);
    for (uint32_t s = 0; s < n; ++s)
        for (size_t a = 0; a < m.actions.size(); ++a)
            for (auto& [t, w] : adj[s][a])
                if (t != s) absorbing[s] = 0;
    for (uint32_t t : targets)
        if (!absorbing[t]) throw invalid_input_error("reach target is not absorbing");
    // Reachable set.
    std::vector<char> reach(n, 0);
    std::deque<uint32_t> queue{s0};
    reach[s0] = 1;
    while (!queue.empty()) {
        uint32_t s = queue.front();
        queue.pop_front();
        for (size_t a = 0; a < m.actions.size(); ++a)
            for (auto& [t, w] : adj[s][a])
                if (!reach[t]) {
                    reach[t] = 1;
                    queue.push_back(t);
                }
    }
    // States that can reach an absorbing state.
    std::vector<std::vector<uint32_t>> rev(n);
    for (auto& e : m.edges)
        if (e.src != e.dst) rev[e.dst].push_back(e.src);
    std::vector<char> useful(n, 0);
    for (uint32_t s = 0; s < n; ++s)
        if (absorbing[s] && reach[s]) {
            useful[s] = 1;
            queue.push_back(s);
        }
    while (!queue.empty()) {
        uint32_t s = queue.front();
        queue.pop_front();
        for (uint32_t p : rev[s])
            if (reach[p] && !useful[p]) {
                useful[p] = 1;
                queue.push_back(p);
            }
    }
    bool any_excluded = false;
    std::vector<uint32_t> transient;
    std::vector<int> row(n, -1);
    for (uint32_t s = 0; s < n; ++s) {
        if (!reach[s]) continue;
        if (absorbing[s]) continue;
        if (!useful[s]) {
            any_excluded = true;
            continue;
        }
        row[s] = static_cast<int>(transient.size());
        transient.push_back(s);
    }
    if (flagged) *flagged = any_excluded;

    std::map<uint32_t, Rat> out;
    Rat zero(0);
    if (absorbing[s0]) {
        for (uint32_t t : targets) out[t] = (t == s0) ? Rat(1) : zero;
        return out;
    }
    size_t tn = transient.size();
    // (I - Q) X = B over the transient states.
    std::vector<std::vector<Rat>> A(tn, std::vector<Rat>(tn + targets.size(), zero));
    for (size_t i = 0; i < tn; ++i) A[i][i] = Rat(1);
    for (size_t i = 0; i < tn; ++i) {
        uint32_t s = transient[i];
        for (size_t a = 0; a < m.actions.size(); ++a)
            for (auto& [t, w] : adj[s][a]) {
                Rat p(Int(w), Int(m.q));
                if (row[t] >= 0) A[i][row[t]] -= p;
                for (size_t k = 0; k < targets.size(); ++k)
                    if (targets[k] == t) A[i][tn + k] += p;
            }
    }
    // Gaussian elimination.
    for (size_t col = 0; col < tn; ++col) {
        size_t piv = col;
        while (piv < tn && A[piv][col] == zero) ++piv;
        if (piv == tn) throw invalid_input_error("singular absorption system");
        std::swap(A[piv], A[col]);
        Rat inv = Rat(1) / A[col][col];
        for (size_t j = col; j < tn + targets.size(); ++j) A[col][j] *= inv;
        for (size_t i2 = 0; i2 < tn; ++i2) {
            if (i2 == col || A[i2][col] == zero) continue;
            Rat f = A[i2][col];
            for (size_t j = col; j < tn + targets.size(); ++j) A[i2][j] -= f * A[col][j];
        }
    }
    for (size_t k = 0; k < targets.size(); ++k) out[targets[k]] = A[row[s0]][tn + k];
    return out;
}

namespace {

void masses_rec(const FiniteWts& m,
                const std::vector<std::vector<std::vector<std::pair<uint32_t, uint64_t>>>>& adj,
                uint32_t s, Trace& trace, const Rat& mass, size_t depth,
                std::map<Trace, Rat>& out) {
    out[trace] += mass;
    if (trace.size() >= depth) return;
    for (size_t a = 0; a < m.actions.size(); ++a) {
        for (auto& [t, w] : adj[s][a]) {
            trace.push_back(static_cast<uint32_t>(a));
            Rat nm = mass * Rat(Int(w), Int(m.q));
            masses_rec(m, adj, t, trace, nm, depth, out);
            trace.pop_back();
        }
    }
}

}  // namespace

std::map<Trace, Rat> trace_masses(const FiniteWts& m, uint32_t s0, size_t depth) {
    if (m.q == 0) throw invalid_input_error("trace_masses needs a stochastic model");
    auto adj = m.adjacency();
    std::map<Trace, Rat> out;
    Trace t;
    masses_rec(m, adj, s0, t, Rat(1), depth, out);
    return out;
}

std::map<Trace, Rat> trace_distribution(const FiniteWts& m, uint32_t s0, const Adversary& f,
                                        size_t depth) {
    if (m.q == 0) throw invalid_input_error("trace_distribution needs a stochastic model");
    auto adj = m.adjacency();
    uint32_t alpha = static_cast<uint32_t>(m.actions.size());
    // Globally enabled actions.
    std::vector<char> enabled(m.actions.size(), 0);
    for (auto& e : m.edges) enabled[e.act] = 1;

    std::map<Trace, Rat> out;
    struct Frame {
        uint32_t s;
        Trace trace;
        Rat mass;
    };
    std::deque<Frame> queue;
    queue.push_back({s0, {}, Rat(1)});
    while (!queue.empty()) {
        Frame fr = queue.front();
        queue.pop_front();
        out[fr.trace] += fr.mass;
        if (fr.trace.size() >= depth) continue;
        bool terminal = true;
        for (size_t a = 0; a < m.actions.size() && terminal; ++a)
            if (!adj[fr.s][a].empty()) terminal = false;
        if (terminal) {
            Trace nt = fr.trace;
            nt.push_back(alpha);
            queue.push_back({fr.s, std::move(nt), fr.mass});
            continue;
        }
        auto choice = f(fr.trace);
        if (!choice) continue;  // adversary halts
        if (*choice >= m.actions.size() || !enabled[*choice])
            throw invalid_input_error("adversary selected a globally disabled action");
        for (auto& [t, w] : adj[fr.s][*choice]) {
            Trace nt = fr.trace;
            nt.push_back(*choice);
            queue.push_back({t, std::move(nt), fr.mass * Rat(Int(w), Int(m.q))});
        }
    }
    return out;
}

std::vector<size_t> instance_lengths(const CorpusModel& cm, size_t max_length) {
    std::vector<size_t> out;
    for (size_t len = 1; len <= max_length; ++len)
        if (!length_slice(cm.initial, len).is_empty_language()) out.push_back(len);
    return out;
}

std::vector<uint32_t> states_in(const FiniteWts& inst, const Mta& set) {
    std::vector<uint32_t> out;
    for (uint32_t i = 0; i < inst.states.size(); ++i)
        if (set.accepts(convolve({inst.states[i]}, set.alphabet))) out.push_back(i);
    return out;
}

OracleOutcome uniformity_oracle(const CorpusModel& cm, size_t length) {
    OracleOutcome oc;
    FiniteWts inst = instantiate(cm.model, length);
    auto initials = states_in(inst, cm.initial);
    std::vector<uint32_t> finals;
    for (uint32_t s = 0; s < inst.states.size(); ++s)
        if (cm.final_info && cm.final_info(inst, s)) finals.push_back(s);
    for (uint32_t s0 : initials) {
        auto dist = reach_distribution(inst, s0, finals);
        // Group by (set, class).
        std::map<std::string, std::map<std::string, Rat>> sets;
        for (auto& [t, p] : dist) {
            if (p == Rat(0)) continue;
            auto info = cm.final_info(inst, t);
            sets[info->first][info->second] += p;
        }
        auto expect = cm.expected_class_prob ? cm.expected_class_prob(inst, s0)
                                             : std::optional<Rat>{};
        for (auto& [set_key, classes] : sets) {
            const Rat* first = nullptr;
            for (auto& [cls, p] : classes) {
                oc.lines.emplace_back("prob[" + inst.state_name(s0) + "][" + set_key + "][" + cls +
                                          "]",
                                      regbis::to_string(p));
                if (!first) {
                    first = &p;
                } else if (*first != p) {
                    oc.ok = false;
                    if (oc.detail.empty())
                        oc.detail = "non-uniform classes in set " + set_key + " from " +
                                    inst.state_name(s0);
                }
                if (expect && p != *expect) {
                    oc.ok = false;
                    if (oc.detail.empty())
                        oc.detail = "class " + cls + " from " + inst.state_name(s0) +
                                    " misses the expected probability";
                }
            }
        }
        if (cm.name == "knuth_yao_rng" && expect) {
            // Every residue must appear: n classes of probability 1/n.
            size_t classes = sets.count("F") ? sets["F"].size() : 0;
            Rat total(0);
            if (sets.count("F"))
                for (auto& [cls, p] : sets["F"]) total += p;
            if (total != Rat(1) || Rat(1, Int(classes)) != *expect) {
                oc.ok = false;
                if (oc.detail.empty())
                    oc.detail = "outputs of " + inst.state_name(s0) + " are not exactly uniform";
            }
        }
    }
    return oc;
}

OracleOutcome anonymity_oracle(const CorpusModel& cm, size_t length, size_t depth) {
    OracleOutcome oc;
    FiniteWts inst = instantiate(cm.model, length);
    auto initials = states_in(inst, cm.initial);
    std::map<uint32_t, std::map<Trace, Rat>> masses;
    for (uint32_t s : initials) masses[s] = trace_masses(inst, s, depth);
    size_t epairs = 0;
    bool found_diff = false;
    for (size_t i = 0; i < initials.size(); ++i)
        for (size_t j = 0; j < initials.size(); ++j) {
            if (i == j) continue;
            Word w = convolve({inst.states[initials[i]], inst.states[initials[j]]},
                              cm.pairs.alphabet);
            bool in_e = cm.pairs.accepts(w);
            bool equal = masses[initials[i]] == masses[initials[j]];
            if (in_e) {
                ++epairs;
                if (!equal) {
                    oc.ok = false;
                    if (oc.detail.empty())
                        oc.detail = "trace masses differ for the related pair (" +
                                    inst.state_name(initials[i]) + ", " +
                                    inst.state_name(initials[j]) + ")";
                }
            } else if (!equal) {
                found_diff = true;
            }
        }
    oc.lines.emplace_back("e_pairs", std::to_string(epairs));
    oc.lines.emplace_back("depth", std::to_string(depth));
    if (initials.size() > 1 && !found_diff) {
        oc.ok = false;
        if (oc.detail.empty()) oc.detail = "no unrelated pair distinguishes; oracle too weak";
    }
    return oc;
}

}  // namespace regbis::corpus
