#include "regbis/wts.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "regbis/convolution.hpp"
#include "regbis/errors.hpp"
#include "regbis/fo.hpp"
#include "regbis/ops.hpp"
#include "regbis/regex.hpp"
#include "regbis/weights.hpp"

namespace regbis {

namespace F = fo;

std::string to_string(WtsKind k) {
    switch (k) {
        case WtsKind::kWts: return "wts";
        case WtsKind::kMarkovChain: return "markov_chain";
        case WtsKind::kMdp: return "mdp";
    }
    return "?";
}

size_t RegularWts::action_index(const std::string& name) const {
    for (size_t i = 0; i < actions.size(); ++i)
        if (actions[i] == name) return i;
    throw invalid_input_error("unknown action: " + name);
}

namespace {

std::string render_witness(const F::HoldsResult& r, const TrackAlphabet& config_alpha) {
    std::string out;
    for (auto& [var, w] : r.witness) {
        if (!out.empty()) out += ", ";
        out += var + "=";
        std::string s = track_word_str(config_alpha, 0, w);
        out += s.empty() ? "(eps)" : s;
    }
    return out;
}

// Renders mixed config/weight assignments; weight variables start with 'p'
// or 'w' by convention of the sentences below.
std::string render_mixed(const F::HoldsResult& r, const TrackAlphabet& config_alpha) {
    std::string out;
    TrackAlphabet walpha({weight_symbols()});
    for (auto& [var, w] : r.witness) {
        if (!out.empty()) out += ", ";
        bool is_weight = !var.empty() && (var[0] == 'p' || var[0] == 'w');
        const TrackAlphabet& a = is_weight ? walpha : config_alpha;
        std::string s = track_word_str(a, 0, w);
        out += var + "=" + (s.empty() ? "(eps)" : s);
    }
    return out;
}

struct ValidateContext {
    const RegularWts& m;
    F::Binding b;
    std::vector<Mta> edge;  // per action, 2-track (s,t), weight nonzero

    explicit ValidateContext(const RegularWts& model) : m(model) {
        auto csyms = m.config_symbols();
        b.sorts["S"] = m.config_universe;
        b.sorts["P"] = m.weight_universe;
        b.relations["eqS"] = F::builtin_eq(csyms);
        b.relations["neqS"] = F::builtin_neq(csyms);
        b.relations["eqP"] = F::builtin_eq(weight_symbols());
        b.relations["eqLS"] = F::builtin_eqL(csyms, csyms);
        b.relations["add"] = F::builtin_add();
        b.relations["nzP"] = F::builtin_nonempty(weight_symbols());
        b.relations["zeroP"] = Mta::epsilon_language(TrackAlphabet({weight_symbols()}));
        b.relations["qP"] = F::builtin_const(weight_symbols(), weight_names(m.q));
        for (size_t a = 0; a < m.actions.size(); ++a) {
            b.relations["delta_" + m.actions[a]] = m.delta[a];
            Mta e = F::compile(F::exists("p", "P",
                                         F::land({F::atom("delta_" + m.actions[a], {"s", "t", "p"}),
                                                  F::atom("nzP", {"p"})})),
                               b, {{"s", "S"}, {"t", "S"}});
            b.relations["edge_" + m.actions[a]] = e;
            b.pre_relativized.insert("edge_" + m.actions[a]);
            edge.push_back(std::move(e));
        }
    }

    static std::vector<std::string> weight_names(uint64_t v) {
        std::vector<std::string> out;
        for (Symbol s : encode_weight(v)) out.emplace_back(1, static_cast<char>('0' + s));
        return out;
    }

    // mass_<action>(s, w): total outgoing weight of s under the action.
    void build_mass_relations() {
        for (size_t a = 0; a < m.actions.size(); ++a) {
            std::string ed = "edge_" + m.actions[a];
            std::string de = "delta_" + m.actions[a];
            std::vector<F::FormulaPtr> cases;
            for (uint32_t cnt = 0; cnt <= m.branching_bound; ++cnt)
                cases.push_back(mass_case(de, ed, cnt));
            Mta mass = F::compile(F::lor(std::move(cases)), b, {{"s", "S"}, {"w", "P"}});
            b.relations["mass_" + m.actions[a]] = mass;
            b.pre_relativized.insert("mass_" + m.actions[a]);
        }
    }

    // Exactly cnt successors t1..tcnt, all distinct, covering every
    // successor, with weights summing to w.
    F::FormulaPtr mass_case(const std::string& delta_rel, const std::string& edge_rel,
                            uint32_t cnt) {
        auto tv = [](uint32_t i) { return "t" + std::to_string(i); };
        auto pv = [](uint32_t i) { return "p" + std::to_string(i); };
        std::vector<F::FormulaPtr> conj;
        for (uint32_t i = 0; i < cnt; ++i) {
            conj.push_back(F::atom(delta_rel, {"s", tv(i), pv(i)}));
            conj.push_back(F::atom("nzP", {pv(i)}));
        }
        for (uint32_t i = 0; i < cnt; ++i)
            for (uint32_t j = i + 1; j < cnt; ++j)
                conj.push_back(F::atom("neqS", {tv(i), tv(j)}));
        // Covering: no successor outside t1..tcnt.
        std::vector<F::FormulaPtr> inner{F::atom(edge_rel, {"s", "t"})};
        for (uint32_t i = 0; i < cnt; ++i) inner.push_back(F::atom("neqS", {"t", tv(i)}));
        conj.push_back(F::lnot(F::exists("t", "S", F::land(std::move(inner)))));
        // Chain sum into w, with partial sums q1..q_{cnt-2}.
        if (cnt == 0) {
            conj.push_back(F::atom("zeroP", {"w"}));
        } else if (cnt == 1) {
            conj.push_back(F::atom("eqP", {pv(0), "w"}));
        } else {
            std::string acc = pv(0);
            for (uint32_t i = 1; i < cnt; ++i) {
                std::string nxt = i + 1 == cnt ? "w" : "q" + std::to_string(i);
                conj.push_back(F::atom("add", {acc, pv(i), nxt}));
                acc = nxt;
            }
        }
        F::FormulaPtr f = F::land(std::move(conj));
        for (uint32_t i = 1; i + 1 < cnt; ++i) f = F::exists("q" + std::to_string(i), "P", f);
        for (uint32_t i = cnt; i-- > 0;) f = F::exists(pv(i), "P", f);
        for (uint32_t i = cnt; i-- > 0;) f = F::exists(tv(i), "S", f);
        return f;
    }
};

}  // namespace

ValidationReport validate(const RegularWts& m) {
    if (m.actions.size() != m.delta.size())
        throw invalid_input_error("validate: action/delta count mismatch");
    for (auto& d : m.delta) {
        d.check_valid();
        if (d.alphabet.track_count() != 3)
            throw invalid_input_error("validate: delta must have 3 tracks");
    }
    ValidateContext ctx(m);
    ValidationReport rep;

    // Condition 1: branching bounded per action.
    {
        uint32_t n1 = m.branching_bound + 1;
        for (size_t a = 0; a < m.actions.size() && rep.branching.ok; ++a) {
            std::vector<F::FormulaPtr> conj;
            auto tv = [](uint32_t i) { return "t" + std::to_string(i); };
            for (uint32_t i = 0; i < n1; ++i)
                conj.push_back(F::atom("edge_" + m.actions[a], {"s", tv(i)}));
            for (uint32_t i = 0; i < n1; ++i)
                for (uint32_t j = i + 1; j < n1; ++j)
                    conj.push_back(F::atom("neqS", {tv(i), tv(j)}));
            F::FormulaPtr f = F::land(std::move(conj));
            for (uint32_t i = n1; i-- > 0;) f = F::exists(tv(i), "S", f);
            auto r = F::holds(F::forall("s", "S", F::lnot(f)), ctx.b);
            if (!r.holds) {
                rep.branching.ok = false;
                rep.branching.witness =
                    "action " + m.actions[a] + ": " + render_witness(r, m.config_universe.alphabet);
            }
        }
    }

    // Condition 2: at most one weight per (s, t).
    for (size_t a = 0; a < m.actions.size() && rep.functional.ok; ++a) {
        std::string de = "delta_" + m.actions[a];
        auto f = F::forall(
            "s", "S",
            F::forall("t", "S",
                      F::forall("p0", "P",
                                F::forall("p1", "P",
                                          F::implies(F::land({F::atom(de, {"s", "t", "p0"}),
                                                              F::atom(de, {"s", "t", "p1"})}),
                                                     F::atom("eqP", {"p0", "p1"}))))));
        auto r = F::holds(f, ctx.b);
        if (!r.holds) {
            rep.functional.ok = false;
            rep.functional.witness =
                "action " + m.actions[a] + ": " + render_mixed(r, m.config_universe.alphabet);
        }
    }

    // Condition 3: stochasticity for chains and decision processes.
    if (m.kind != WtsKind::kWts && rep.functional.ok && rep.branching.ok) {
        ctx.build_mass_relations();
        if (m.kind == WtsKind::kMdp) {
            for (size_t a = 0; a < m.actions.size() && rep.stochastic.ok; ++a) {
                auto f = F::forall(
                    "s", "S",
                    F::exists("w", "P",
                              F::land({F::atom("mass_" + m.actions[a], {"s", "w"}),
                                       F::lor({F::atom("zeroP", {"w"}), F::atom("qP", {"w"})})})));
                auto r = F::holds(f, ctx.b);
                if (!r.holds) {
                    rep.stochastic.ok = false;
                    rep.stochastic.witness = "action " + m.actions[a] + ": " +
                                             render_witness(r, m.config_universe.alphabet);
                }
            }
        } else {
            // Markov chain: the masses of all actions sum to q everywhere.
            std::vector<F::FormulaPtr> conj;
            auto wv = [](size_t i) { return "w" + std::to_string(i); };
            for (size_t a = 0; a < m.actions.size(); ++a)
                conj.push_back(F::atom("mass_" + m.actions[a], {"s", wv(a)}));
            if (m.actions.size() == 1) {
                conj.push_back(F::atom("qP", {wv(0)}));
            } else {
                std::string acc = wv(0);
                for (size_t a = 1; a < m.actions.size(); ++a) {
                    std::string nxt = a + 1 == m.actions.size() ? "wsum" : "u" + std::to_string(a);
                    conj.push_back(F::atom("add", {acc, wv(a), nxt}));
                    acc = nxt;
                }
                conj.push_back(F::atom("qP", {"wsum"}));
            }
            F::FormulaPtr f = F::land(std::move(conj));
            if (m.actions.size() > 1) {
                f = F::exists("wsum", "P", f);
                for (size_t a = m.actions.size() - 1; a >= 2; --a)
                    f = F::exists("u" + std::to_string(a - 1) + "", "P", f);
            }
            for (size_t a = m.actions.size(); a-- > 0;) f = F::exists(wv(a), "P", f);
            auto r = F::holds(F::forall("s", "S", f), ctx.b);
            if (!r.holds) {
                rep.stochastic.ok = false;
                rep.stochastic.witness = render_witness(r, m.config_universe.alphabet);
            }
        }
    }

    // Declared length preservation.
    if (m.length_preserving) {
        for (size_t a = 0; a < m.actions.size() && rep.length_preserving.ok; ++a) {
            auto f = F::forall(
                "s", "S",
                F::forall("t", "S",
                          F::implies(F::atom("edge_" + m.actions[a], {"s", "t"}),
                                     F::atom("eqLS", {"s", "t"}))));
            auto r = F::holds(f, ctx.b);
            if (!r.holds) {
                rep.length_preserving.ok = false;
                rep.length_preserving.witness =
                    "action " + m.actions[a] + ": " + render_witness(r, m.config_universe.alphabet);
            }
        }
    }
    return rep;
}

std::optional<uint32_t> FiniteWts::state_index(const TrackWord& w) const {
    auto it = std::lower_bound(states.begin(), states.end(), w);
    if (it == states.end() || *it != w) return std::nullopt;
    return static_cast<uint32_t>(it - states.begin());
}

std::string FiniteWts::state_name(uint32_t i) const {
    std::string s = track_word_str(config_alpha, 0, states[i]);
    return s.empty() ? "(eps)" : s;
}

uint64_t FiniteWts::weight(uint32_t src, uint32_t act, uint32_t dst) const {
    Edge probe{src, act, dst, 0};
    auto it = std::lower_bound(edges.begin(), edges.end(), probe, [](const Edge& a, const Edge& b) {
        return std::tie(a.src, a.act, a.dst) < std::tie(b.src, b.act, b.dst);
    });
    if (it != edges.end() && it->src == src && it->act == act && it->dst == dst) return it->weight;
    return 0;
}

std::vector<std::vector<std::vector<std::pair<uint32_t, uint64_t>>>> FiniteWts::adjacency() const {
    std::vector<std::vector<std::vector<std::pair<uint32_t, uint64_t>>>> adj(
        states.size(), std::vector<std::vector<std::pair<uint32_t, uint64_t>>>(actions.size()));
    for (auto& e : edges) adj[e.src][e.act].emplace_back(e.dst, e.weight);
    return adj;
}

FiniteWts instantiate(const RegularWts& m, size_t length, size_t state_cap) {
    if (!m.length_preserving)
        throw unsupported_operation_error("instantiate requires a length-preserving model");
    FiniteWts f;
    f.config_alpha = m.config_universe.alphabet;
    f.actions = m.actions;
    f.kind = m.kind;
    f.q = m.q;
    std::vector<Word> words;
    try {
        words = m.config_universe.enumerate_capped(length, 4 * state_cap + 64);
    } catch (const resource_error&) {
        throw resource_error("instance exceeds state cap at length " + std::to_string(length));
    }
    for (auto& w : words) {
        if (w.size() != length) continue;
        auto tw = deconvolve(w, f.config_alpha);
        f.states.push_back((*tw)[0]);
        if (f.states.size() > state_cap)
            throw resource_error("instance exceeds state cap at length " + std::to_string(length));
    }
    std::sort(f.states.begin(), f.states.end());

    Mta len_u = length_slice(m.config_universe, length);
    for (size_t a = 0; a < m.actions.size(); ++a) {
        auto j1 = join(m.delta[a], {0, 1, 2}, len_u, {0});
        auto j2 = join(j1.aut, j1.tracks, len_u, {1});
        const Mta& sliced = j2.aut;
        // The sliced language is finite; words are at most as long as the
        // configuration length plus the weight width.
        size_t max_len = length + 66;
        for (auto& w : sliced.enumerate(max_len)) {
            auto tw = deconvolve(w, sliced.alphabet);
            if (!tw) throw invalid_input_error("delta language is not convolution-shaped");
            auto& s_w = (*tw)[0];
            auto& t_w = (*tw)[1];
            auto pv = decode_weight((*tw)[2]);
            if (!pv) throw invalid_input_error("non-canonical weight in delta");
            if (*pv == 0) continue;
            auto si = f.state_index(s_w), ti = f.state_index(t_w);
            if (!si || !ti) throw invalid_input_error("delta endpoint outside the universe");
            f.edges.push_back({*si, static_cast<uint32_t>(a), *ti, *pv});
        }
    }
    std::sort(f.edges.begin(), f.edges.end(), [](const FiniteWts::Edge& a, const FiniteWts::Edge& b) {
        return std::tie(a.src, a.act, a.dst) < std::tie(b.src, b.act, b.dst);
    });
    for (size_t i = 1; i < f.edges.size(); ++i) {
        auto& p = f.edges[i - 1];
        auto& c = f.edges[i];
        if (p.src == c.src && p.act == c.act && p.dst == c.dst)
            throw invalid_input_error("two weights for one transition at length " +
                                      std::to_string(length));
    }
    // Local stochasticity.
    if (f.kind != WtsKind::kWts) {
        std::vector<std::vector<uint64_t>> mass(f.states.size(),
                                                std::vector<uint64_t>(f.actions.size(), 0));
        for (auto& e : f.edges) mass[e.src][e.act] += e.weight;
        for (size_t s = 0; s < f.states.size(); ++s) {
            if (f.kind == WtsKind::kMarkovChain) {
                uint64_t total = 0;
                for (uint64_t x : mass[s]) total += x;
                if (total != f.q)
                    throw invalid_input_error("instance not stochastic at state " + f.state_name(s));
            } else {
                for (uint64_t x : mass[s])
                    if (x != 0 && x != f.q)
                        throw invalid_input_error("instance action mass not in {0,q} at state " +
                                                  f.state_name(s));
            }
        }
    }
    return f;
}

FiniteWts instantiate_closure(const RegularWts& m, const std::vector<TrackWord>& seeds,
                              size_t state_cap) {
    if (!m.length_preserving)
        throw unsupported_operation_error("instantiate requires a length-preserving model");
    FiniteWts f;
    f.config_alpha = m.config_universe.alphabet;
    f.actions = m.actions;
    f.kind = m.kind;
    f.q = m.q;
    // Successor queries against the transducers, one source word at a time.
    std::set<TrackWord> seen;
    std::deque<TrackWord> queue;
    for (auto& s0 : seeds) {
        if (!m.config_universe.accepts(convolve({s0}, f.config_alpha)))
            throw invalid_input_error("closure seed outside the universe");
        if (seen.insert(s0).second) queue.push_back(s0);
    }
    struct RawEdge {
        TrackWord src, dst;
        uint32_t act;
        uint64_t weight;
    };
    std::vector<RawEdge> raw;
    while (!queue.empty()) {
        TrackWord src = queue.front();
        queue.pop_front();
        if (seen.size() > state_cap) throw resource_error("closure exceeds the state cap");
        // Word automaton for the source.
        Mta w;
        w.alphabet = f.config_alpha;
        w.num_states = static_cast<uint32_t>(src.size() + 1);
        w.initial = {0};
        w.accepting.assign(w.num_states, 0);
        w.accepting[src.size()] = 1;
        w.trans.resize(w.num_states);
        for (size_t i = 0; i < src.size(); ++i)
            w.trans[i].emplace_back(f.config_alpha.encode(std::vector<Symbol>{src[i]}),
                                    static_cast<State>(i + 1));
        w.deterministic = true;
        for (size_t a = 0; a < m.actions.size(); ++a) {
            auto j = join(m.delta[a], {0, 1, 2}, w, {0});
            for (auto& word : j.aut.enumerate(src.size() + 66)) {
                auto tw = deconvolve(word, j.aut.alphabet);
                auto pv = decode_weight((*tw)[2]);
                if (!pv) throw invalid_input_error("non-canonical weight in delta");
                if (*pv == 0) continue;
                raw.push_back({src, (*tw)[1], static_cast<uint32_t>(a), *pv});
                if (seen.insert((*tw)[1]).second) queue.push_back((*tw)[1]);
            }
        }
    }
    f.states.assign(seen.begin(), seen.end());
    for (auto& e : raw)
        f.edges.push_back({*f.state_index(e.src), e.act, *f.state_index(e.dst), e.weight});
    std::sort(f.edges.begin(), f.edges.end(), [](const FiniteWts::Edge& a, const FiniteWts::Edge& b) {
        return std::tie(a.src, a.act, a.dst) < std::tie(b.src, b.act, b.dst);
    });
    return f;
}

RegularWts reverse(const RegularWts& m) {
    if (m.actions.size() != 1)
        throw unsupported_operation_error("reverse requires a single-action system");
    RegularWts r = m;
    r.delta[0] = reorder_tracks(m.delta[0], {1, 0, 2});
    r.kind = WtsKind::kWts;
    return r;
}

Mta prepend_letter_relation(const std::vector<std::string>& symbols, const std::string& tag) {
    TrackAlphabet a({symbols, symbols});
    Symbol tag_s = a.symbol_index(1, tag);
    // Track 1 equals tag . track 0; one letter of delay buffer.
    size_t n = symbols.size();
    // states: 0 = start, 1..n = carrying symbol (i-1), n+1 = done
    Mta m;
    m.alphabet = a;
    m.num_states = static_cast<uint32_t>(n + 2);
    m.initial = {0};
    m.accepting.assign(m.num_states, 0);
    m.accepting[n + 1] = 1;
    m.trans.resize(m.num_states);
    auto enc = [&](Symbol x, Symbol y) { return a.encode(std::vector<Symbol>{x, y}); };
    for (Symbol x = 0; x < n; ++x) m.trans[0].emplace_back(enc(x, tag_s), static_cast<State>(x + 1));
    m.trans[0].emplace_back(enc(a.blank(0), tag_s), static_cast<State>(n + 1));
    for (Symbol c = 0; c < n; ++c) {
        for (Symbol x = 0; x < n; ++x)
            m.trans[c + 1].emplace_back(enc(x, c), static_cast<State>(x + 1));
        m.trans[c + 1].emplace_back(enc(a.blank(0), c), static_cast<State>(n + 1));
    }
    m.canonicalize_storage();
    m.deterministic = true;
    m.normalized = true;
    return minimize(m);
}

Mta pad_relation(const std::vector<std::string>& symbols_with_pad, const std::string& pad_symbol) {
    TrackAlphabet a({symbols_with_pad, symbols_with_pad});
    Symbol pad_s = a.symbol_index(0, pad_symbol);
    std::vector<Letter> same, tail;
    for (Symbol x = 0; x < a.track_size(0); ++x)
        if (x != pad_s) same.push_back(a.encode(std::vector<Symbol>{x, x}));
    tail.push_back(a.encode(std::vector<Symbol>{a.blank(0), pad_s}));
    return Re::seq({Re::star(Re::lits(same)), Re::star(Re::lits(tail))}).to_mta(a);
}

Mta lift_symbols(const Mta& a, const std::vector<std::vector<std::string>>& new_symbols) {
    if (new_symbols.size() != a.alphabet.track_count())
        throw invalid_input_error("lift_symbols: track count mismatch");
    TrackAlphabet na(new_symbols);
    std::vector<std::vector<Symbol>> remap(a.alphabet.track_count());
    for (size_t t = 0; t < remap.size(); ++t) {
        remap[t].resize(a.alphabet.track_size(t) + 1);
        for (Symbol s = 0; s < a.alphabet.track_size(t); ++s)
            remap[t][s] = na.symbol_index(t, a.alphabet.symbol_name(t, s));
        remap[t][a.alphabet.track_size(t)] = na.blank(t);
    }
    std::vector<Symbol> digits(remap.size());
    return letter_map(a, na, [&](Letter l) -> std::optional<Letter> {
        for (size_t t = 0; t < remap.size(); ++t) digits[t] = remap[t][a.alphabet.digit(l, t)];
        return na.encode(digits);
    });
}

RegularWts disjoint_union(const RegularWts& m1, const RegularWts& m2) {
    if (m1.actions != m2.actions) throw invalid_input_error("disjoint_union: action mismatch");
    // Fresh tags and the combined symbol set.
    std::vector<std::string> syms = m1.config_symbols();
    for (auto& s : m2.config_symbols())
        if (std::find(syms.begin(), syms.end(), s) == syms.end()) syms.push_back(s);
    auto fresh = [&](std::string base) {
        while (std::find(syms.begin(), syms.end(), base) != syms.end()) base += "~";
        syms.push_back(base);
        return base;
    };
    std::string tag1 = fresh("~1"), tag2 = fresh("~2");

    auto wsyms = weight_symbols();
    auto lift1 = [&](const Mta& a) { return lift_symbols(a, {syms}); };
    auto lift3 = [&](const Mta& a) { return lift_symbols(a, {syms, syms, wsyms}); };

    Mta prep1 = prepend_letter_relation(syms, tag1);
    Mta prep2 = prepend_letter_relation(syms, tag2);

    auto transform = [&](const Mta& delta, const Mta& prep) {
        // delta'(s', t', p) = exists s, t. prep(s, s') and prep(t, t') and delta(s,t,p)
        Mta d = lift3(delta);
        // variable ids: s=0, s'=1, t=2, t'=3, p=4
        auto j1 = join(d, {0, 2, 4}, prep, {0, 1});
        Joined cur = j1;
        {
            auto j2 = join(cur.aut, cur.tracks, prep, {2, 3});
            cur = j2;
        }
        // project s (id 0) then t (id 2)
        auto drop = [&](uint32_t id) {
            auto it = std::find(cur.tracks.begin(), cur.tracks.end(), id);
            size_t pos = static_cast<size_t>(it - cur.tracks.begin());
            cur.aut = project_track(cur.aut, pos);
            cur.tracks.erase(cur.tracks.begin() + pos);
        };
        drop(0);
        drop(2);
        // remaining tracks: s'=1, t'=3, p=4 in sorted order
        return cur.aut;
    };

    RegularWts out;
    out.actions = m1.actions;
    out.weight_universe = m1.weight_universe;
    out.branching_bound = std::max(m1.branching_bound, m2.branching_bound);
    out.length_preserving = m1.length_preserving && m2.length_preserving;
    out.kind = (m1.kind == m2.kind && m1.q == m2.q) ? m1.kind : WtsKind::kWts;
    out.q = out.kind == WtsKind::kWts ? 0 : m1.q;

    // Universe: tag1 . U1 | tag2 . U2 via the same prepend relations.
    auto prep_universe = [&](const Mta& u, const Mta& prep) {
        Mta ul = lift1(u);
        auto j = join(ul, {0}, prep, {0, 1});
        auto it = std::find(j.tracks.begin(), j.tracks.end(), 0u);
        return project_track(j.aut, static_cast<size_t>(it - j.tracks.begin()));
    };
    Mta u1 = prep_universe(m1.config_universe, prep1);
    Mta u2 = prep_universe(m2.config_universe, prep2);
    out.config_universe = product(u1, u2, ProductMode::kOr);

    for (size_t a = 0; a < m1.actions.size(); ++a) {
        Mta d1 = transform(m1.delta[a], prep1);
        Mta d2 = transform(m2.delta[a], prep2);
        out.delta.push_back(product(d1, d2, ProductMode::kOr));
    }
    return out;
}

RegularWts pad(const RegularWts& m, const Mta& size_bound, const std::string& pad_symbol) {
    std::vector<std::string> syms = m.config_symbols();
    if (std::find(syms.begin(), syms.end(), pad_symbol) != syms.end())
        throw invalid_input_error("pad symbol collides with a configuration symbol");
    syms.push_back(pad_symbol);
    if (size_bound.alphabet.track_count() != 2)
        throw invalid_input_error("size_bound must be a 2-track automaton");
    Mta sb = lift_symbols(size_bound, {syms, syms});
    Mta pads = pad_relation(syms, pad_symbol);

    // size_bound must lie inside the padding relation.
    if (!product(sb, pads, ProductMode::kDiff).is_empty_language())
        throw invalid_input_error("size_bound relates words not of the form s . pad^k");
    // Functional in length: all paddings of one configuration share a length.
    {
        F::Binding b;
        b.sorts["X"] = universe(TrackAlphabet({syms}));
        b.relations["sb"] = sb;
        b.relations["eqL"] = F::builtin_eqL(syms, syms);
        auto f = F::forall(
            "x", "X",
            F::forall("y", "X",
                      F::forall("z", "X",
                                F::implies(F::land({F::atom("sb", {"x", "y"}),
                                                    F::atom("sb", {"x", "z"})}),
                                           F::atom("eqL", {"y", "z"})))));
        if (!F::holds(f, b).holds)
            throw invalid_input_error("size_bound is not functional in length");
    }

    RegularWts out;
    out.actions = m.actions;
    out.weight_universe = m.weight_universe;
    out.branching_bound = m.branching_bound;
    out.kind = m.kind;
    out.q = m.q;
    out.length_preserving = true;

    Mta u = lift_symbols(m.config_universe, {syms});
    // Padded universe: the image of size_bound over the original universe.
    auto ju = join(sb, {0, 1}, u, {0});
    out.config_universe = project_track(ju.aut, 0);

    auto wsyms = weight_symbols();
    for (size_t a = 0; a < m.actions.size(); ++a) {
        Mta d = lift_symbols(m.delta[a], {syms, syms, wsyms});
        // delta'(s',t',p) = (exists s,t. pads(s,s') & pads(t,t') & delta) & eqL & universes
        auto j1 = join(d, {0, 2, 4}, pads, {0, 1});
        auto j2 = join(j1.aut, j1.tracks, pads, {2, 3});
        Joined cur = j2;
        auto drop = [&](uint32_t id) {
            auto it = std::find(cur.tracks.begin(), cur.tracks.end(), id);
            cur.aut = project_track(cur.aut, static_cast<size_t>(it - cur.tracks.begin()));
            cur.tracks.erase(std::find(cur.tracks.begin(), cur.tracks.end(), id));
        };
        drop(0);
        drop(2);
        // cur over (s'=1, t'=3, p=4); clamp to equal length and the universe.
        Mta eqL = F::builtin_eqL(syms, syms);
        auto j3 = join(cur.aut, {0, 1, 2}, eqL, {0, 1});
        auto j4 = join(j3.aut, j3.tracks, out.config_universe, {0});
        auto j5 = join(j4.aut, j4.tracks, out.config_universe, {1});
        out.delta.push_back(j5.aut);
    }
    return out;
}

}  // namespace regbis
