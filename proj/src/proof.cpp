#include "regbis/proof.hpp"

#include <algorithm>

#include "regbis/convolution.hpp"
#include "regbis/errors.hpp"
#include "regbis/fo.hpp"
#include "regbis/ops.hpp"
#include "regbis/weights.hpp"

namespace regbis::proof {

namespace F = fo;

std::string Verdict::to_string() const {
    std::string out;
    switch (status) {
        case kProved: return "proved";
        case kCounterexample: out = "counterexample"; break;
        case kNotApplicable: out = "not_applicable"; break;
    }
    if (!condition.empty()) out += " condition=" + condition;
    if (!action.empty()) out += " action=" + action;
    for (auto& w : witness) out += " " + w;
    if (!detail.empty()) out += " (" + detail + ")";
    return out;
}

namespace {

std::string word_of(const TrackAlphabet& a, size_t track, const TrackWord& w) {
    std::string s = track_word_str(a, track, w);
    return s.empty() ? "(eps)" : s;
}

}  // namespace

BisimChecker::BisimChecker(const RegularWts& m) : model_(m) {
    auto j = join(m.config_universe, {0}, m.config_universe, {1});
    pair_universe_ = j.aut;
    edge_.resize(m.actions.size());
    nosucc_.resize(m.actions.size());
    action_ready_.assign(m.actions.size(), 0);
}

void BisimChecker::ensure_action(size_t a) {
    if (action_ready_[a]) return;
    F::Binding b;
    b.sorts["S"] = model_.config_universe;
    b.sorts["P"] = model_.weight_universe;
    b.relations["delta"] = model_.delta[a];
    b.relations["nzP"] = F::builtin_nonempty(weight_symbols());
    edge_[a] = F::compile(
        F::exists("p", "P", F::land({F::atom("delta", {"s", "t", "p"}), F::atom("nzP", {"p"})})),
        b, {{"s", "S"}, {"t", "S"}});
    b.relations["edge"] = edge_[a];
    b.pre_relativized.insert("edge");
    nosucc_[a] =
        F::compile(F::lnot(F::exists("t", "S", F::atom("edge", {"s", "t"}))), b, {{"s", "S"}});
    action_ready_[a] = 1;
}

const Mta& BisimChecker::msum(size_t a, uint32_t k) {
    auto key = std::make_pair(a, k);
    auto it = msum_.find(key);
    if (it != msum_.end()) return it->second;
    ensure_action(a);
    F::Binding b;
    b.sorts["S"] = model_.config_universe;
    b.sorts["P"] = model_.weight_universe;
    b.relations["delta"] = model_.delta[a];
    b.relations["add"] = F::builtin_add();
    b.relations["eqP"] = F::builtin_eq(weight_symbols());
    std::vector<F::FormulaPtr> conj;
    auto xv = [](uint32_t i) { return "x" + std::to_string(i); };
    auto pv = [](uint32_t i) { return "p" + std::to_string(i); };
    for (uint32_t i = 0; i < k; ++i) conj.push_back(F::atom("delta", {"s", xv(i), pv(i)}));
    if (k == 1) {
        conj.push_back(F::atom("eqP", {pv(0), "w"}));
    } else {
        std::string acc = pv(0);
        for (uint32_t i = 1; i < k; ++i) {
            std::string nxt = (i + 1 == k) ? "w" : "q" + std::to_string(i);
            conj.push_back(F::atom("add", {acc, pv(i), nxt}));
            acc = nxt;
        }
    }
    F::FormulaPtr f = F::land(std::move(conj));
    for (uint32_t i = 1; i + 1 < k; ++i) f = F::exists("q" + std::to_string(i), "P", f);
    for (uint32_t i = k; i-- > 0;) f = F::exists(pv(i), "P", f);
    std::vector<F::FreeVar> free{{"s", "S"}};
    for (uint32_t i = 0; i < k; ++i) free.emplace_back(xv(i), "S");
    free.emplace_back("w", "P");
    Mta out = F::compile(f, b, free);
    return msum_.emplace(key, std::move(out)).first->second;
}

const Mta& BisimChecker::covers(size_t a, uint32_t m) {
    auto key = std::make_pair(a, m);
    auto it = covers_.find(key);
    if (it != covers_.end()) return it->second;
    ensure_action(a);
    if (m == 0) return covers_.emplace(key, nosucc_[a]).first->second;
    F::Binding b;
    b.sorts["S"] = model_.config_universe;
    b.relations["edge"] = edge_[a];
    b.pre_relativized.insert("edge");
    b.relations["neqS"] = F::builtin_neq(model_.config_symbols());
    auto uv = [](uint32_t i) { return "u" + std::to_string(i); };
    std::vector<F::FormulaPtr> conj;
    for (uint32_t i = 0; i < m; ++i) conj.push_back(F::atom("edge", {"s", uv(i)}));
    std::vector<F::FormulaPtr> inner{F::atom("edge", {"s", "t"})};
    for (uint32_t i = 0; i < m; ++i) inner.push_back(F::atom("neqS", {"t", uv(i)}));
    conj.push_back(F::lnot(F::exists("t", "S", F::land(std::move(inner)))));
    std::vector<F::FreeVar> free{{"s", "S"}};
    for (uint32_t i = 0; i < m; ++i) free.emplace_back(uv(i), "S");
    Mta out = F::compile(F::land(std::move(conj)), b, free);
    return covers_.emplace(key, std::move(out)).first->second;
}

std::vector<BisimChecker::Pattern> BisimChecker::patterns_for(uint32_t m, uint32_t mp) const {
    // Multisets of per-class size pairs (>= (1,1)) summing to (m, mp); each
    // class spans both sides, otherwise its mass equality is unsatisfiable.
    std::vector<Pattern> out;
    if (m == 0 && mp == 0) {
        out.push_back({{}, 0, 0});
        return out;
    }
    if (m == 0 || mp == 0) return out;
    std::vector<std::pair<uint32_t, uint32_t>> current;
    std::function<void(uint32_t, uint32_t, std::pair<uint32_t, uint32_t>)> rec =
        [&](uint32_t ru, uint32_t rv, std::pair<uint32_t, uint32_t> max_pair) {
            if (ru == 0 && rv == 0) {
                out.push_back({current, m, mp});
                return;
            }
            if (ru == 0 || rv == 0) return;
            for (uint32_t ku = ru; ku >= 1; --ku)
                for (uint32_t kv = rv; kv >= 1; --kv) {
                    std::pair<uint32_t, uint32_t> p{ku, kv};
                    if (p > max_pair) continue;  // canonical non-increasing order
                    current.push_back(p);
                    rec(ru - ku, rv - kv, p);
                    current.pop_back();
                }
        };
    rec(m, mp, {m, mp});
    return out;
}

Mta BisimChecker::compile_pattern(size_t a, const Pattern& p, const Mta& R, const Mta& notR) {
    ensure_action(a);
    if (p.m == 0 && p.mp == 0) {
        auto j = join(nosucc_[a], {0}, nosucc_[a], {1});
        return j.aut;
    }
    F::Binding b;
    b.sorts["S"] = model_.config_universe;
    b.sorts["P"] = model_.weight_universe;
    b.relations["R"] = R;
    b.relations["nR"] = notR;
    b.pre_relativized.insert("R");
    b.pre_relativized.insert("nR");
    b.relations["neqS"] = F::builtin_neq(model_.config_symbols());
    b.relations["covU"] = covers(a, p.m);
    b.relations["covV"] = covers(a, p.mp);
    b.pre_relativized.insert("covU");
    b.pre_relativized.insert("covV");
    for (auto& [ku, kv] : p.classes) {
        b.relations["msum" + std::to_string(ku)] = msum(a, ku);
        b.relations["msum" + std::to_string(kv)] = msum(a, kv);
        b.pre_relativized.insert("msum" + std::to_string(ku));
        b.pre_relativized.insert("msum" + std::to_string(kv));
    }

    auto uv = [](uint32_t i) { return "u" + std::to_string(i); };
    auto vv = [](uint32_t i) { return "v" + std::to_string(i); };
    // slot -> class id, slots assigned to classes in order
    std::vector<uint32_t> ucls, vcls;
    for (uint32_t c = 0; c < p.classes.size(); ++c) {
        for (uint32_t i = 0; i < p.classes[c].first; ++i) ucls.push_back(c);
        for (uint32_t i = 0; i < p.classes[c].second; ++i) vcls.push_back(c);
    }

    std::vector<F::FormulaPtr> conj;
    {
        std::vector<std::string> args{"s"};
        for (uint32_t i = 0; i < p.m; ++i) args.push_back(uv(i));
        conj.push_back(F::atom("covU", std::move(args)));
    }
    {
        std::vector<std::string> args{"s2"};
        for (uint32_t i = 0; i < p.mp; ++i) args.push_back(vv(i));
        conj.push_back(F::atom("covV", std::move(args)));
    }
    // Per-class equal masses through a shared weight variable.
    for (uint32_t c = 0; c < p.classes.size(); ++c) {
        auto [ku, kv] = p.classes[c];
        std::string w = "w" + std::to_string(c);
        std::vector<std::string> au{"s"};
        for (uint32_t i = 0; i < p.m; ++i)
            if (ucls[i] == c) au.push_back(uv(i));
        au.push_back(w);
        conj.push_back(F::atom("msum" + std::to_string(ku), std::move(au)));
        std::vector<std::string> av{"s2"};
        for (uint32_t i = 0; i < p.mp; ++i)
            if (vcls[i] == c) av.push_back(vv(i));
        av.push_back(w);
        conj.push_back(F::atom("msum" + std::to_string(kv), std::move(av)));
    }
    // Joint compatibility over all slots: same class iff related.
    std::vector<std::pair<std::string, uint32_t>> slots;
    for (uint32_t i = 0; i < p.m; ++i) slots.emplace_back(uv(i), ucls[i]);
    for (uint32_t i = 0; i < p.mp; ++i) slots.emplace_back(vv(i), vcls[i]);
    for (size_t i = 0; i < slots.size(); ++i)
        for (size_t j = i + 1; j < slots.size(); ++j) {
            if (slots[i].second == slots[j].second)
                conj.push_back(F::atom("R", {slots[i].first, slots[j].first}));
            else
                conj.push_back(F::atom("nR", {slots[i].first, slots[j].first}));
        }
    // Distinctness within a side (cross-side slots may coincide).
    for (uint32_t i = 0; i < p.m; ++i)
        for (uint32_t j = i + 1; j < p.m; ++j)
            if (ucls[i] == ucls[j]) conj.push_back(F::atom("neqS", {uv(i), uv(j)}));
    for (uint32_t i = 0; i < p.mp; ++i)
        for (uint32_t j = i + 1; j < p.mp; ++j)
            if (vcls[i] == vcls[j]) conj.push_back(F::atom("neqS", {vv(i), vv(j)}));

    F::FormulaPtr f = F::land(std::move(conj));
    for (uint32_t c = static_cast<uint32_t>(p.classes.size()); c-- > 0;)
        f = F::exists("w" + std::to_string(c), "P", f);
    for (uint32_t i = p.mp; i-- > 0;) f = F::exists(vv(i), "S", f);
    for (uint32_t i = p.m; i-- > 0;) f = F::exists(uv(i), "S", f);
    return F::compile(f, b, {{"s", "S"}, {"s2", "S"}});
}

Mta BisimChecker::lambda_for_action(size_t a, const Mta& R) {
    Mta notR = product(pair_universe_, R, ProductMode::kDiff);
    Mta acc = Mta::empty_language(pair_universe_.alphabet);
    for (uint32_t m = 0; m <= model_.branching_bound; ++m)
        for (uint32_t mp = 0; mp <= model_.branching_bound; ++mp)
            for (auto& p : patterns_for(m, mp))
                acc = product(acc, compile_pattern(a, p, R, notR), ProductMode::kOr);
    return acc;
}

Verdict BisimChecker::check_equivalence(const Mta& R) {
    if (R.alphabet != pair_universe_.alphabet)
        throw invalid_input_error("relation alphabet does not match the configuration pairs");
    Verdict v;
    // R within S x S
    Mta outside = product(R, pair_universe_, ProductMode::kDiff);
    if (auto w = shortest_word(outside)) {
        v.status = Verdict::kNotApplicable;
        v.condition = "relation_scope";
        v.detail = "relation relates words outside the configuration universe";
        auto tw = deconvolve(*w, R.alphabet);
        v.witness = {word_of(R.alphabet, 0, (*tw)[0]), word_of(R.alphabet, 1, (*tw)[1])};
        v.witness_word = *w;
        return v;
    }
    // Reflexivity over the whole universe.
    Mta diag_missing = product(diagonal(model_.config_universe), R, ProductMode::kDiff);
    if (auto w = shortest_word(diag_missing)) {
        v.status = Verdict::kCounterexample;
        v.condition = "reflexivity";
        auto tw = deconvolve(*w, R.alphabet);
        v.witness = {word_of(R.alphabet, 0, (*tw)[0])};
        v.witness_word = *w;
        return v;
    }
    // Symmetry.
    Mta transposed = reorder_tracks(R, {1, 0});
    if (auto w = shortest_word(product(R, transposed, ProductMode::kDiff))) {
        v.status = Verdict::kCounterexample;
        v.condition = "symmetry";
        auto tw = deconvolve(*w, R.alphabet);
        v.witness = {word_of(R.alphabet, 0, (*tw)[0]), word_of(R.alphabet, 1, (*tw)[1])};
        v.witness_word = *w;
        return v;
    }
    // Transitivity.
    {
        F::Binding b;
        b.sorts["S"] = model_.config_universe;
        b.relations["R"] = R;
        b.pre_relativized.insert("R");
        Mta chain = F::compile(F::land({F::atom("R", {"x", "y"}), F::atom("R", {"y", "z"})}), b,
                               {{"x", "S"}, {"y", "S"}, {"z", "S"}});
        Mta rxz;
        {
            auto j = join(R, {0, 2}, model_.config_universe, {1});
            rxz = j.aut;
        }
        Mta viol = product(chain, rxz, ProductMode::kDiff);
        if (auto w = shortest_word(viol)) {
            v.status = Verdict::kCounterexample;
            v.condition = "transitivity";
            auto tw = deconvolve(*w, viol.alphabet);
            v.witness = {word_of(viol.alphabet, 0, (*tw)[0]), word_of(viol.alphabet, 1, (*tw)[1]),
                         word_of(viol.alphabet, 2, (*tw)[2])};
            // The learner-facing pair is (x, z).
            v.witness_word = convolve({(*tw)[0], (*tw)[2]}, R.alphabet);
            return v;
        }
    }
    return v;
}

Verdict BisimChecker::check_bisimulation(const Mta& R) {
    Verdict eq = check_equivalence(R);
    if (!eq.proved()) return eq;
    Mta notR = product(pair_universe_, R, ProductMode::kDiff);
    for (size_t a = 0; a < model_.actions.size(); ++a) {
        Mta remaining = R;
        for (uint32_t m = 0; m <= model_.branching_bound && !remaining.is_empty_language(); ++m)
            for (uint32_t mp = 0; mp <= model_.branching_bound; ++mp)
                for (auto& p : patterns_for(m, mp)) {
                    if (remaining.is_empty_language()) break;
                    remaining = product(remaining, compile_pattern(a, p, R, notR),
                                        ProductMode::kDiff);
                }
        if (auto w = shortest_word(remaining)) {
            Verdict v;
            v.status = Verdict::kCounterexample;
            v.condition = "lambda";
            v.action = model_.actions[a];
            auto tw = deconvolve(*w, R.alphabet);
            v.witness = {word_of(R.alphabet, 0, (*tw)[0]), word_of(R.alphabet, 1, (*tw)[1])};
            v.witness_word = *w;
            return v;
        }
    }
    return {};
}

Verdict check_equivalence(const RegularWts& m, const Mta& R) {
    BisimChecker c(m);
    return c.check_equivalence(R);
}

Verdict check_bisimulation(const RegularWts& m, const Mta& R) {
    BisimChecker c(m);
    return c.check_bisimulation(R);
}

Verdict check_lts_bisimulation(const RegularWts& m, const Mta& R) {
    // All weights must be 0 or 1.
    {
        F::Binding b;
        b.sorts["S"] = m.config_universe;
        b.sorts["P"] = m.weight_universe;
        b.relations["one"] = F::builtin_const(weight_symbols(), {"1"});
        b.relations["zero"] = Mta::epsilon_language(TrackAlphabet({weight_symbols()}));
        for (size_t a = 0; a < m.actions.size(); ++a) {
            b.relations["delta"] = m.delta[a];
            auto f = F::forall(
                "s", "S",
                F::forall("t", "S",
                          F::forall("p", "P",
                                    F::implies(F::atom("delta", {"s", "t", "p"}),
                                               F::lor({F::atom("zero", {"p"}),
                                                       F::atom("one", {"p"})})))));
            if (!F::holds(f, b).holds) {
                Verdict v;
                v.status = Verdict::kNotApplicable;
                v.condition = "boolean_weights";
                v.detail = "action " + m.actions[a] + " carries a weight other than 0 or 1";
                return v;
            }
        }
    }
    BisimChecker chk(m);
    Verdict eq = chk.check_equivalence(R);
    if (!eq.proved()) return eq;
    F::Binding b;
    b.sorts["S"] = m.config_universe;
    b.sorts["P"] = m.weight_universe;
    b.relations["R"] = R;
    b.pre_relativized.insert("R");
    b.relations["nzP"] = F::builtin_nonempty(weight_symbols());
    for (size_t a = 0; a < m.actions.size(); ++a) {
        b.relations["delta"] = m.delta[a];
        Mta edge = F::compile(F::exists("p", "P", F::land({F::atom("delta", {"s", "t", "p"}),
                                                           F::atom("nzP", {"p"})})),
                              b, {{"s", "S"}, {"t", "S"}});
        b.relations["edge"] = edge;
        b.pre_relativized.insert("edge");
        for (int dir = 0; dir < 2; ++dir) {
            // forward: s moves, s2 must answer; backward symmetric.
            const char* mover = dir == 0 ? "s" : "s2";
            const char* other = dir == 0 ? "s2" : "s";
            auto answer = dir == 0 ? F::atom("R", {"t", "t2"}) : F::atom("R", {"t2", "t"});
            auto bad = F::exists(
                "t", "S",
                F::land({F::atom("edge", {mover, "t"}),
                         F::lnot(F::exists("t2", "S", F::land({F::atom("edge", {other, "t2"}),
                                                               answer})))}));
            Mta viol_body = F::compile(bad, b, {{"s", "S"}, {"s2", "S"}});
            Mta viol = product(R, viol_body, ProductMode::kAnd);
            if (auto w = shortest_word(viol)) {
                Verdict v;
                v.status = Verdict::kCounterexample;
                v.condition = dir == 0 ? "forward_simulation" : "backward_simulation";
                v.action = m.actions[a];
                auto tw = deconvolve(*w, R.alphabet);
                v.witness = {word_of(R.alphabet, 0, (*tw)[0]), word_of(R.alphabet, 1, (*tw)[1])};
                v.witness_word = *w;
                return v;
            }
        }
    }
    return {};
}

namespace {

Verdict subset_violation(const Mta& lhs, const Mta& rhs, const std::string& condition) {
    Mta outside = product(lhs, rhs, ProductMode::kDiff);
    Verdict v;
    if (auto w = shortest_word(outside)) {
        v.status = Verdict::kNotApplicable;
        v.condition = condition;
        auto tw = deconvolve(*w, lhs.alphabet);
        v.witness = {word_of(lhs.alphabet, 0, (*tw)[0]), word_of(lhs.alphabet, 1, (*tw)[1])};
        v.witness_word = *w;
    }
    return v;
}

}  // namespace

Verdict verify_anonymity(const RegularWts& m, const Mta& I, const Mta& E, const Mta& R,
                         bool reference_mode) {
    if (m.kind != WtsKind::kMdp) {
        Verdict v;
        v.status = Verdict::kNotApplicable;
        v.condition = "kind";
        v.detail = "anonymity verification expects a Markov decision process";
        return v;
    }
    Verdict e_in_r = subset_violation(E, R, "e_subset");
    if (!e_in_r.proved()) return e_in_r;
    if (reference_mode) {
        auto j1 = join(R, {0, 1}, I, {0});
        auto j2 = join(j1.aut, j1.tracks, I, {1});
        Mta on_initials = j2.aut;
        Mta viol = product(on_initials, diagonal(I), ProductMode::kDiff);
        if (auto w = shortest_word(viol)) {
            Verdict v;
            v.status = Verdict::kNotApplicable;
            v.condition = "initial_identity";
            auto tw = deconvolve(*w, R.alphabet);
            v.witness = {word_of(R.alphabet, 0, (*tw)[0]), word_of(R.alphabet, 1, (*tw)[1])};
            v.witness_word = *w;
            return v;
        }
    }
    return check_bisimulation(m, R);
}

Verdict verify_uniformity(const RegularWts& program, const Mta& I, const Mta& E_final,
                          const Mta& R) {
    if (program.kind != WtsKind::kMarkovChain) {
        Verdict v;
        v.status = Verdict::kNotApplicable;
        v.condition = "kind";
        v.detail = "uniformity verification expects a Markov chain program";
        return v;
    }
    Verdict e_in_r = subset_violation(E_final, R, "condition-i");
    if (!e_in_r.proved()) return e_in_r;
    {
        auto j1 = join(R, {0, 1}, I, {0});
        auto j2 = join(j1.aut, j1.tracks, I, {1});
        Mta viol = product(j2.aut, diagonal(I), ProductMode::kDiff);
        if (auto w = shortest_word(viol)) {
            Verdict v;
            v.status = Verdict::kNotApplicable;
            v.condition = "condition-ii";
            v.detail = "an initial configuration is related to another one";
            auto tw = deconvolve(*w, R.alphabet);
            v.witness = {word_of(R.alphabet, 0, (*tw)[0]), word_of(R.alphabet, 1, (*tw)[1])};
            v.witness_word = *w;
            return v;
        }
    }
    return check_bisimulation(reverse(program), R);
}

}  // namespace regbis::proof
