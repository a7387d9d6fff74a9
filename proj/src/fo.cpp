#include "regbis/fo.hpp"

#include <algorithm>

#include "regbis/convolution.hpp"
#include "regbis/errors.hpp"
#include "regbis/ops.hpp"
#include "regbis/regex.hpp"
#include "regbis/weights.hpp"

namespace regbis::fo {

namespace {

FormulaPtr make(Formula f) { return std::make_shared<Formula>(std::move(f)); }

}  // namespace

FormulaPtr atom(std::string rel, std::vector<std::string> args) {
    Formula f;
    f.kind = Formula::kAtom;
    f.rel = std::move(rel);
    f.args = std::move(args);
    return make(std::move(f));
}
FormulaPtr lnot(FormulaPtr f) {
    Formula g;
    g.kind = Formula::kNot;
    g.kids = {std::move(f)};
    return make(std::move(g));
}
FormulaPtr land(std::vector<FormulaPtr> fs) {
    Formula g;
    g.kind = Formula::kAnd;
    g.kids = std::move(fs);
    return make(std::move(g));
}
FormulaPtr lor(std::vector<FormulaPtr> fs) {
    Formula g;
    g.kind = Formula::kOr;
    g.kids = std::move(fs);
    return make(std::move(g));
}
FormulaPtr implies(FormulaPtr a, FormulaPtr b) {
    Formula g;
    g.kind = Formula::kImplies;
    g.kids = {std::move(a), std::move(b)};
    return make(std::move(g));
}
FormulaPtr iff(FormulaPtr a, FormulaPtr b) {
    Formula g;
    g.kind = Formula::kIff;
    g.kids = {std::move(a), std::move(b)};
    return make(std::move(g));
}
FormulaPtr exists(std::string var, std::string sort, FormulaPtr body) {
    Formula g;
    g.kind = Formula::kExists;
    g.var = std::move(var);
    g.sort = std::move(sort);
    g.kids = {std::move(body)};
    return make(std::move(g));
}
FormulaPtr forall(std::string var, std::string sort, FormulaPtr body) {
    Formula g;
    g.kind = Formula::kForall;
    g.var = std::move(var);
    g.sort = std::move(sort);
    g.kids = {std::move(body)};
    return make(std::move(g));
}

namespace {

using VarId = uint32_t;

struct VarInfo {
    VarId id;
    std::string sort;
};

// A compiled subformula: either a constant (no free variables) or an
// automaton over the sorted ids of its free variables.
struct CR {
    bool is_const = false;
    bool value = false;
    Mta aut;
    std::vector<VarId> tracks;
};

struct Compiler {
    const Binding& binding;
    std::map<std::string, VarInfo> env;     // in-scope variables
    std::vector<std::string> sort_of_var;   // by VarId
    VarId next_id = 0;

    explicit Compiler(const Binding& b) : binding(b) {}

    const Mta& sort_aut(const std::string& name) const {
        auto it = binding.sorts.find(name);
        if (it == binding.sorts.end()) throw invalid_input_error("unknown sort: " + name);
        return it->second;
    }

    VarId declare(const std::string& name, const std::string& sort) {
        if (env.count(name)) throw invalid_input_error("variable shadowed or redeclared: " + name);
        if (!binding.sorts.count(sort)) throw invalid_input_error("unknown sort: " + sort);
        VarId id = next_id++;
        env.emplace(name, VarInfo{id, sort});
        sort_of_var.push_back(sort);
        return id;
    }
    void undeclare(const std::string& name) { env.erase(name); }

    // Sort product over the given variable ids (sorted), as a CompiledRel.
    CR sort_product(const std::vector<VarId>& ids) {
        CR out;
        if (ids.empty()) {
            out.is_const = true;
            out.value = true;
            return out;
        }
        out.tracks = {ids[0]};
        out.aut = sort_aut(sort_of_var[ids[0]]);
        for (size_t i = 1; i < ids.size(); ++i) {
            auto j = join(out.aut, out.tracks, sort_aut(sort_of_var[ids[i]]), {ids[i]});
            out.aut = std::move(j.aut);
            out.tracks = std::move(j.tracks);
        }
        return out;
    }

    CR make_true() {
        CR c;
        c.is_const = true;
        c.value = true;
        return c;
    }
    CR make_false() {
        CR c;
        c.is_const = true;
        c.value = false;
        return c;
    }

    CR compile_atom(const Formula& f) {
        auto it = binding.relations.find(f.rel);
        if (it == binding.relations.end())
            throw invalid_input_error("unbound relation: " + f.rel);
        const Mta& rel = it->second;
        if (rel.alphabet.track_count() != f.args.size())
            throw invalid_input_error("arity mismatch for relation " + f.rel);
        std::vector<VarId> pos_ids(f.args.size());
        for (size_t i = 0; i < f.args.size(); ++i) {
            auto v = env.find(f.args[i]);
            if (v == env.end()) throw invalid_input_error("unbound variable: " + f.args[i]);
            pos_ids[i] = v->second.id;
        }
        // Collapse duplicate arguments by keeping letters whose digits agree.
        std::vector<VarId> uniq = pos_ids;
        std::sort(uniq.begin(), uniq.end());
        uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
        std::vector<std::vector<std::string>> symbols;
        for (VarId id : uniq) {
            // Use the first atom position for this id.
            for (size_t i = 0; i < pos_ids.size(); ++i)
                if (pos_ids[i] == id) {
                    symbols.push_back(rel.alphabet.track_symbols(i));
                    break;
                }
        }
        TrackAlphabet ralpha(symbols);
        std::vector<Symbol> digits(uniq.size());
        Mta collapsed = letter_map(rel, ralpha, [&](Letter l) -> std::optional<Letter> {
            for (size_t k = 0; k < uniq.size(); ++k) {
                Symbol d = 0;
                bool first = true;
                for (size_t i = 0; i < pos_ids.size(); ++i) {
                    if (pos_ids[i] != uniq[k]) continue;
                    Symbol di = rel.alphabet.digit(l, i);
                    if (first) {
                        d = di;
                        first = false;
                    } else if (d != di) {
                        return std::nullopt;
                    }
                }
                digits[k] = d;
            }
            Letter nl = ralpha.encode(digits);
            if (nl == ralpha.all_blank()) return std::nullopt;
            return nl;
        });
        CR out;
        out.aut = std::move(collapsed);
        out.tracks = uniq;
        if (!binding.pre_relativized.count(f.rel)) {
            CR sorts = sort_product(uniq);
            auto j = join(out.aut, out.tracks, sorts.aut, sorts.tracks);
            out.aut = std::move(j.aut);
            out.tracks = std::move(j.tracks);
        }
        if (out.aut.is_empty_language() && out.tracks.empty()) return make_false();
        return out;
    }

    CR negate(const CR& c) {
        if (c.is_const) {
            CR out = c;
            out.value = !out.value;
            return out;
        }
        CR sorts = sort_product(c.tracks);
        CR out;
        out.tracks = c.tracks;
        out.aut = product(sorts.aut, c.aut, ProductMode::kDiff);
        return out;
    }

    CR conjoin(CR a, CR b) {
        if (a.is_const) return a.value ? b : a;
        if (b.is_const) return b.value ? a : b;
        auto j = join(a.aut, a.tracks, b.aut, b.tracks);
        CR out;
        out.aut = std::move(j.aut);
        out.tracks = std::move(j.tracks);
        return out;
    }

    // Extends to the union of track sets with sort universes, then unions.
    CR disjoin(CR a, CR b) {
        if (a.is_const) return a.value ? a : b;
        if (b.is_const) return b.value ? b : a;
        std::vector<VarId> all = a.tracks;
        all.insert(all.end(), b.tracks.begin(), b.tracks.end());
        std::sort(all.begin(), all.end());
        all.erase(std::unique(all.begin(), all.end()), all.end());
        auto extend = [&](CR& c) {
            std::vector<VarId> missing;
            for (VarId id : all)
                if (!std::binary_search(c.tracks.begin(), c.tracks.end(), id)) missing.push_back(id);
            if (missing.empty()) return;
            CR sorts = sort_product(missing);
            auto j = join(c.aut, c.tracks, sorts.aut, sorts.tracks);
            c.aut = std::move(j.aut);
            c.tracks = std::move(j.tracks);
        };
        extend(a);
        extend(b);
        CR out;
        out.tracks = all;
        out.aut = product(a.aut, b.aut, ProductMode::kOr);
        return out;
    }

    CR project_out(CR c, VarId id) {
        if (c.is_const) return c;
        auto it = std::find(c.tracks.begin(), c.tracks.end(), id);
        if (it == c.tracks.end()) return c;
        size_t pos = static_cast<size_t>(it - c.tracks.begin());
        if (c.tracks.size() == 1) {
            // Projecting the last track yields a constant: nonemptiness.
            CR out;
            out.is_const = true;
            out.value = !c.aut.is_empty_language();
            return out;
        }
        CR out;
        out.aut = project_track(c.aut, pos);
        out.tracks = c.tracks;
        out.tracks.erase(out.tracks.begin() + pos);
        return out;
    }

    // Existential block: eliminate vars innermost-first from a conjunct set,
    // merging only the conjuncts that mention the variable being dropped.
    CR compile_exists_block(const std::vector<std::pair<std::string, std::string>>& vars,
                            const FormulaPtr& body) {
        std::vector<VarId> ids;
        for (auto& [v, s] : vars) ids.push_back(declare(v, s));
        std::vector<CR> conjuncts;
        gather_conjuncts(body, conjuncts);
        for (auto& [v, s] : vars) undeclare(v);

        for (auto& c : conjuncts)
            if (c.is_const && !c.value) return make_false();
        conjuncts.erase(std::remove_if(conjuncts.begin(), conjuncts.end(),
                                       [](const CR& c) { return c.is_const; }),
                        conjuncts.end());

        // Eliminate in reverse declaration order (innermost binder first).
        for (size_t vi = ids.size(); vi-- > 0;) {
            VarId id = ids[vi];
            std::vector<CR> with, without;
            for (auto& c : conjuncts) {
                if (std::binary_search(c.tracks.begin(), c.tracks.end(), id))
                    with.push_back(std::move(c));
                else
                    without.push_back(std::move(c));
            }
            if (with.empty()) {
                // Unused variable: existence over its sort.
                if (sort_aut(sort_of_var[id]).is_empty_language()) return make_false();
                conjuncts = std::move(without);
                continue;
            }
            CR merged = merge_all(std::move(with));
            if (merged.is_const) {
                if (!merged.value) return make_false();
                conjuncts = std::move(without);
                continue;
            }
            merged = project_out(std::move(merged), id);
            if (merged.is_const && !merged.value) return make_false();
            conjuncts = std::move(without);
            if (!merged.is_const) conjuncts.push_back(std::move(merged));
        }
        if (conjuncts.empty()) return make_true();
        return merge_all(std::move(conjuncts));
    }

    // Greedy pairwise join preferring small combined track sets.
    CR merge_all(std::vector<CR> cs) {
        if (cs.empty()) return make_true();
        while (cs.size() > 1) {
            size_t bi = 0, bj = 1;
            size_t best = SIZE_MAX;
            for (size_t i = 0; i < cs.size(); ++i)
                for (size_t j = i + 1; j < cs.size(); ++j) {
                    std::vector<VarId> u = cs[i].tracks;
                    u.insert(u.end(), cs[j].tracks.begin(), cs[j].tracks.end());
                    std::sort(u.begin(), u.end());
                    u.erase(std::unique(u.begin(), u.end()), u.end());
                    size_t score = u.size() * 1000 +
                                   std::min<size_t>(999, cs[i].aut.num_states + cs[j].aut.num_states);
                    if (score < best) {
                        best = score;
                        bi = i;
                        bj = j;
                    }
                }
            CR merged = conjoin(std::move(cs[bi]), std::move(cs[bj]));
            if (merged.is_const && !merged.value) return merged;
            cs.erase(cs.begin() + bj);
            cs.erase(cs.begin() + bi);
            if (!(merged.is_const && merged.value)) cs.push_back(std::move(merged));
            if (cs.empty()) return make_true();
        }
        return std::move(cs[0]);
    }

    void gather_conjuncts(const FormulaPtr& f, std::vector<CR>& out) {
        if (f->kind == Formula::kAnd) {
            for (auto& k : f->kids) gather_conjuncts(k, out);
            return;
        }
        out.push_back(compile_rec(f));
    }

    CR compile_rec(const FormulaPtr& f) {
        switch (f->kind) {
            case Formula::kAtom: return compile_atom(*f);
            case Formula::kNot: return negate(compile_rec(f->kids[0]));
            case Formula::kAnd: {
                std::vector<CR> cs;
                gather_conjuncts(f, cs);
                for (auto& c : cs)
                    if (c.is_const && !c.value) return make_false();
                cs.erase(std::remove_if(cs.begin(), cs.end(),
                                        [](const CR& c) { return c.is_const; }),
                         cs.end());
                return merge_all(std::move(cs));
            }
            case Formula::kOr: {
                CR acc = make_false();
                for (auto& k : f->kids) acc = disjoin(std::move(acc), compile_rec(k));
                return acc;
            }
            case Formula::kImplies:
                return disjoin(negate(compile_rec(f->kids[0])), compile_rec(f->kids[1]));
            case Formula::kIff: {
                CR a = compile_rec(f->kids[0]);
                CR b = compile_rec(f->kids[1]);
                CR both = conjoin(a, b);
                CR neither = conjoin(negate(a), negate(b));
                return disjoin(std::move(both), std::move(neither));
            }
            case Formula::kExists: {
                // Flatten a chain of existentials over one body.
                std::vector<std::pair<std::string, std::string>> vars;
                const Formula* cur = f.get();
                while (cur->kind == Formula::kExists) {
                    vars.emplace_back(cur->var, cur->sort);
                    cur = cur->kids[0].get();
                }
                const Formula* last = f.get();
                FormulaPtr body = f->kids[0];
                while (body->kind == Formula::kExists) {
                    last = body.get();
                    body = body->kids[0];
                }
                (void)last;
                return compile_exists_block(vars, body);
            }
            case Formula::kForall: {
                // forall x:S. g  ==  not exists x:S. not g
                FormulaPtr inner = exists(f->var, f->sort, lnot(f->kids[0]));
                return negate(compile_rec(inner));
            }
        }
        throw std::logic_error("unreachable formula kind");
    }
};

void collect_free(const FormulaPtr& f, std::set<std::string>& bound, std::set<std::string>& free) {
    switch (f->kind) {
        case Formula::kAtom:
            for (auto& a : f->args)
                if (!bound.count(a)) free.insert(a);
            break;
        case Formula::kExists:
        case Formula::kForall: {
            if (bound.count(f->var))
                throw invalid_input_error("variable shadowed: " + f->var);
            bound.insert(f->var);
            collect_free(f->kids[0], bound, free);
            bound.erase(f->var);
            break;
        }
        default:
            for (auto& k : f->kids) collect_free(k, bound, free);
    }
}

}  // namespace

Mta compile(const FormulaPtr& f, const Binding& binding, const std::vector<FreeVar>& free_order) {
    std::set<std::string> bound, free;
    for (auto& [v, s] : free_order) bound.insert(v);
    collect_free(f, bound, free);
    if (!free.empty()) throw invalid_input_error("free variable not declared: " + *free.begin());
    bound.clear();
    std::set<std::string> freevars;
    collect_free(f, bound, freevars);
    for (const auto& v : freevars) {
        bool found = false;
        for (auto& [fv, s] : free_order) found = found || fv == v;
        if (!found) throw invalid_input_error("free variable not in free_order: " + v);
    }
    if (freevars.size() != free_order.size())
        throw invalid_input_error("free_order must list exactly the free variables");

    Compiler c(binding);
    std::vector<VarId> order_ids;
    for (auto& [v, s] : free_order) order_ids.push_back(c.declare(v, s));
    CR r = c.compile_rec(f);
    if (r.is_const)
        throw std::logic_error("compile: sentence passed where free variables expected");
    // r.tracks is sorted ascending = declaration order of free vars; reorder
    // to match free_order (ids are 0..k-1 in declaration order already).
    std::vector<size_t> perm(r.tracks.size());
    for (size_t i = 0; i < order_ids.size(); ++i) {
        auto it = std::find(r.tracks.begin(), r.tracks.end(), order_ids[i]);
        if (it == r.tracks.end()) throw std::logic_error("compile lost a free variable track");
        perm[i] = static_cast<size_t>(it - r.tracks.begin());
    }
    return reorder_tracks(r.aut, perm);
}

HoldsResult holds(const FormulaPtr& sentence, const Binding& binding) {
    std::set<std::string> bound, free;
    collect_free(sentence, bound, free);
    if (!free.empty())
        throw invalid_input_error("holds: formula has free variables (" + *free.begin() + ")");

    // Universal prefix gets a witness on refutation.
    if (sentence->kind == Formula::kForall) {
        std::vector<FreeVar> vars;
        FormulaPtr body = sentence;
        while (body->kind == Formula::kForall) {
            vars.emplace_back(body->var, body->sort);
            body = body->kids[0];
        }
        std::set<std::string> bound2, used;
        collect_free(body, bound2, used);
        std::vector<FreeVar> order;
        for (auto& v : vars) {
            if (used.count(v.first)) {
                order.push_back(v);
            } else {
                auto it = binding.sorts.find(v.second);
                if (it == binding.sorts.end())
                    throw invalid_input_error("unknown sort: " + v.second);
                // A universal over an empty sort holds vacuously.
                if (it->second.is_empty_language()) return {true, {}};
            }
        }
        if (order.empty()) return holds(body, binding);
        Mta viol = compile(lnot(body), binding, order);
        auto w = shortest_word(viol);
        if (!w) return {true, {}};
        auto tws = deconvolve(*w, viol.alphabet);
        HoldsResult res;
        res.holds = false;
        std::map<std::string, TrackWord> got;
        for (size_t i = 0; i < order.size(); ++i) got[order[i].first] = (*tws)[i];
        for (auto& v : vars) {
            if (got.count(v.first)) {
                res.witness.emplace_back(v.first, got[v.first]);
            } else {
                auto sw = shortest_word(binding.sorts.at(v.second));
                auto tw = deconvolve(*sw, binding.sorts.at(v.second).alphabet);
                res.witness.emplace_back(v.first, (*tw)[0]);
            }
        }
        return res;
    }
    switch (sentence->kind) {
        case Formula::kNot: {
            auto r = holds(sentence->kids[0], binding);
            return {!r.holds, {}};
        }
        case Formula::kAnd: {
            for (auto& k : sentence->kids) {
                auto r = holds(k, binding);
                if (!r.holds) return r;
            }
            return {true, {}};
        }
        case Formula::kOr: {
            for (auto& k : sentence->kids)
                if (holds(k, binding).holds) return {true, {}};
            return {false, {}};
        }
        case Formula::kImplies: {
            if (!holds(sentence->kids[0], binding).holds) return {true, {}};
            return holds(sentence->kids[1], binding);
        }
        case Formula::kIff: {
            bool a = holds(sentence->kids[0], binding).holds;
            bool b = holds(sentence->kids[1], binding).holds;
            return {a == b, {}};
        }
        case Formula::kExists: {
            std::vector<FreeVar> vars;
            FormulaPtr body = sentence;
            while (body->kind == Formula::kExists) {
                vars.emplace_back(body->var, body->sort);
                body = body->kids[0];
            }
            std::set<std::string> bound2, used;
            collect_free(body, bound2, used);
            std::vector<FreeVar> order;
            for (auto& v : vars) {
                if (used.count(v.first)) {
                    order.push_back(v);
                } else {
                    auto it = binding.sorts.find(v.second);
                    if (it == binding.sorts.end())
                        throw invalid_input_error("unknown sort: " + v.second);
                    if (it->second.is_empty_language()) return {false, {}};
                }
            }
            if (order.empty()) return holds(body, binding);
            Mta a = compile(body, binding, order);
            return {!a.is_empty_language(), {}};
        }
        default: throw invalid_input_error("holds: not a sentence");
    }
}

Mta builtin_eq(const std::vector<std::string>& symbols) {
    return diagonal(universe(TrackAlphabet({symbols})));
}

Mta builtin_neq(const std::vector<std::string>& symbols) {
    return product(universe(TrackAlphabet({symbols, symbols})), builtin_eq(symbols),
                   ProductMode::kDiff);
}

Mta builtin_eqL(const std::vector<std::string>& a_symbols,
                const std::vector<std::string>& b_symbols) {
    TrackAlphabet a({a_symbols, b_symbols});
    Mta m;
    m.alphabet = a;
    m.num_states = 1;
    m.initial = {0};
    m.accepting = {1};
    m.trans.resize(1);
    for (Letter l = 0; l < a.letter_count(); ++l)
        if (!a.is_blank_at(l, 0) && !a.is_blank_at(l, 1)) m.trans[0].emplace_back(l, 0);
    m.canonicalize_storage();
    m.deterministic = true;
    return minimize(m);
}

Mta builtin_prefix(const std::vector<std::string>& symbols) {
    TrackAlphabet a({symbols, symbols});
    std::vector<Letter> same, tail;
    for (Letter l = 0; l < a.letter_count(); ++l) {
        if (a.is_all_blank(l)) continue;
        Symbol d0 = a.digit(l, 0), d1 = a.digit(l, 1);
        if (d0 == d1 && d0 != a.blank(0)) same.push_back(l);
        if (d0 == a.blank(0) && d1 != a.blank(1)) tail.push_back(l);
    }
    return regbis::Re::seq({regbis::Re::star(regbis::Re::lits(same)), regbis::Re::star(regbis::Re::lits(tail))}).to_mta(a);
}

Mta builtin_succ(const std::vector<std::string>& symbols, const std::string& letter) {
    TrackAlphabet a({symbols, symbols});
    std::vector<Letter> same;
    for (Symbol s = 0; s < a.track_size(0); ++s)
        same.push_back(a.encode(std::vector<Symbol>{s, s}));
    Symbol ls = a.symbol_index(1, letter);
    Letter last = a.encode(std::vector<Symbol>{a.blank(0), ls});
    return regbis::Re::seq({regbis::Re::star(regbis::Re::lits(same)), regbis::Re::lit(last)}).to_mta(a);
}

Mta builtin_const(const std::vector<std::string>& symbols, const std::vector<std::string>& word) {
    TrackAlphabet a({symbols});
    Mta m;
    m.alphabet = a;
    m.num_states = static_cast<uint32_t>(word.size()) + 1;
    m.initial = {0};
    m.accepting.assign(m.num_states, 0);
    m.accepting[word.size()] = 1;
    m.trans.resize(m.num_states);
    for (size_t i = 0; i < word.size(); ++i) {
        Symbol s = a.symbol_index(0, word[i]);
        m.trans[i].emplace_back(a.encode(std::vector<Symbol>{s}), static_cast<State>(i + 1));
    }
    m.deterministic = true;
    return minimize(m);
}

Mta builtin_nonempty(const std::vector<std::string>& symbols) {
    TrackAlphabet a({symbols});
    Mta u = universe(a);
    return product(u, Mta::epsilon_language(a), ProductMode::kDiff);
}

Mta builtin_add() {
    auto wsyms = weight_symbols();
    TrackAlphabet a({wsyms, wsyms, wsyms});
    // State: carry plus blanked flags for the three tracks.
    auto sid = [](int carry, int mask) { return static_cast<State>(carry * 8 + mask); };
    Mta m;
    m.alphabet = a;
    m.num_states = 16;
    m.initial = {sid(0, 0)};
    m.accepting.assign(16, 0);
    for (int mask = 0; mask < 8; ++mask) m.accepting[sid(0, mask)] = 1;
    m.trans.resize(16);
    for (int carry = 0; carry < 2; ++carry)
        for (int mask = 0; mask < 8; ++mask)
            for (Letter l = 0; l < a.letter_count(); ++l) {
                if (a.is_all_blank(l)) continue;
                int digits[3], nmask = mask;
                bool ok = true;
                for (int t = 0; t < 3; ++t) {
                    Symbol d = a.digit(l, t);
                    if (d == a.blank(t)) {
                        digits[t] = 0;
                        nmask |= 1 << t;
                    } else {
                        if (mask & (1 << t)) ok = false;  // track resumed after blank
                        digits[t] = d;
                    }
                }
                if (!ok) continue;
                int sum = digits[0] + digits[1] + carry;
                if ((sum & 1) != digits[2]) continue;
                m.trans[sid(carry, mask)].emplace_back(l, sid(sum >> 1, nmask));
            }
    m.canonicalize_storage();
    m.deterministic = true;
    m.normalized = true;
    // Restrict to canonical weight words on every track.
    Mta wu = weight_universe();
    auto j1 = join(m, {0, 1, 2}, wu, {0});
    auto j2 = join(j1.aut, j1.tracks, wu, {1});
    auto j3 = join(j2.aut, j2.tracks, wu, {2});
    return j3.aut;
}

Mta identity_on(const Mta& sort) { return diagonal(sort); }

Mta builtin(const std::string& name, const std::vector<std::string>& symbols,
            const std::map<std::string, Mta>& sorts) {
    if (name == "eq") return builtin_eq(symbols);
    if (name == "neq") return builtin_neq(symbols);
    if (name == "eqL") return builtin_eqL(symbols, symbols);
    if (name == "prefix") return builtin_prefix(symbols);
    if (name == "nonempty") return builtin_nonempty(symbols);
    if (name == "add") return builtin_add();
    if (name.rfind("succ_", 0) == 0) return builtin_succ(symbols, name.substr(5));
    if (name.rfind("const_", 0) == 0) {
        std::vector<std::string> w;
        for (char c : name.substr(6)) w.emplace_back(1, c);
        return builtin_const(symbols, w);
    }
    if (name.rfind("id_", 0) == 0) {
        auto it = sorts.find(name.substr(3));
        if (it == sorts.end()) throw invalid_input_error("unknown sort in " + name);
        return identity_on(it->second);
    }
    throw invalid_input_error("unknown builtin: " + name);
}

}  // namespace regbis::fo
