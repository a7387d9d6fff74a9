#include "regbis/teacher.hpp"

#include <algorithm>
#include <ostream>
#include <thread>

#include "regbis/convolution.hpp"
#include "regbis/errors.hpp"
#include "regbis/fo.hpp"
#include "regbis/ops.hpp"
#include "regbis/weights.hpp"

namespace regbis::teach {

namespace F = fo;

namespace {

Mta restrict_universe(const Mta& u, const Mta& inv) { return product(u, inv, ProductMode::kAnd); }

Mta restrict_delta3(const Mta& delta, const Mta& set) {
    auto j1 = join(delta, {0, 1, 2}, set, {0});
    auto j2 = join(j1.aut, j1.tracks, set, {1});
    return j2.aut;
}

Mta pairs_within(const Mta& rel, const Mta& set) {
    auto j1 = join(rel, {0, 1}, set, {0});
    auto j2 = join(j1.aut, j1.tracks, set, {1});
    return j2.aut;
}

}  // namespace

BisimTeacher::BisimTeacher(const RegularWts& model, Mta required_pairs,
                           std::optional<Mta> invariant, Mta initials, TeacherOptions opts,
                           std::ostream* log)
    : model_(model),
      full_universe_(model.config_universe),
      invariant_(std::move(invariant)),
      required_pairs_(std::move(required_pairs)),
      initials_(std::move(initials)),
      opts_(opts),
      log_(log) {
    if (!model.length_preserving)
        throw unsupported_operation_error(
            "the bisimulation teacher requires a length-preserving model");
    if (invariant_) {
        // The invariant must be inductive: transitions stay inside it.
        F::Binding b;
        b.sorts["S"] = model.config_universe;
        b.sorts["P"] = model.weight_universe;
        b.relations["inv"] = *invariant_;
        b.relations["nzP"] = fo::builtin_nonempty(weight_symbols());
        for (size_t a = 0; a < model.actions.size(); ++a) {
            b.relations["delta"] = model.delta[a];
            auto f = fo::forall(
                "s", "S",
                fo::forall(
                    "t", "S",
                    fo::implies(fo::land({fo::exists("p", "P",
                                                     fo::land({fo::atom("delta", {"s", "t", "p"}),
                                                               fo::atom("nzP", {"p"})})),
                                          fo::atom("inv", {"s"})}),
                                fo::atom("inv", {"t"}))));
            if (!fo::holds(f, b).holds)
                throw invalid_input_error("the supplied invariant is not inductive");
        }
        model_.config_universe = restrict_universe(model.config_universe, *invariant_);
        for (auto& d : model_.delta) d = restrict_delta3(d, model_.config_universe);
        // Required pairs must live inside the invariant.
        Mta clamped = pairs_within(required_pairs_, model_.config_universe);
        if (!product(required_pairs_, clamped, ProductMode::kDiff).is_empty_language())
            throw invalid_input_error("required pairs leave the invariant");
        required_pairs_ = std::move(clamped);
        initials_ = product(initials_, model_.config_universe, ProductMode::kAnd);
    }
    auto csyms = model_.config_symbols();
    auto j = join(model_.config_universe, {0}, model_.config_universe, {1});
    pair_universe_ =
        product(j.aut, fo::builtin_eqL(csyms, csyms), ProductMode::kAnd);
    checker_ = std::make_unique<proof::BisimChecker>(model_);
}

BisimTeacher::InstanceData& BisimTeacher::instance(size_t length, size_t cap) {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    auto it = cache_.find(length);
    if (it != cache_.end()) return *it->second;
    auto data = std::make_unique<InstanceData>();
    data->inst = instantiate(model_, length, cap);
    data->plain = greatest_bisimulation(data->inst);
    if (opts_.refine_initials) {
        std::vector<uint32_t> seeds;
        for (uint32_t s = 0; s < data->inst.states.size(); ++s)
            if (initials_.accepts(convolve({data->inst.states[s]}, initials_.alphabet)))
                seeds.push_back(s);
        data->target = greatest_bisimulation_refining(
            data->inst, singleton_seed(data->inst.states.size(), seeds));
    } else {
        data->target = data->plain;
    }
    auto [pos, inserted] = cache_.emplace(length, std::move(data));
    return *pos->second;
}

Mta& BisimTeacher::target_slice(size_t length) {
    InstanceData& d = instance(length, opts_.slice_instance_cap);
    if (!d.slice_built) {
        // Union over blocks of all same-block pairs.
        Mta acc = Mta::empty_language(pair_universe_.alphabet);
        TrackAlphabet a1 = d.inst.config_alpha;
        for (auto& block : d.target.blocks) {
            // Word trie of the block members.
            Mta words;
            words.alphabet = a1;
            words.num_states = 1;
            words.initial = {0};
            words.accepting = {0};
            words.trans.resize(1);
            for (uint32_t s : block) {
                State cur = 0;
                for (Symbol sym : d.inst.states[s]) {
                    Letter l = a1.encode(std::vector<Symbol>{sym});
                    State nxt = words.num_states;
                    bool found = false;
                    for (auto& [ll, dd] : words.trans[cur])
                        if (ll == l) {
                            nxt = dd;
                            found = true;
                            break;
                        }
                    if (!found) {
                        words.num_states++;
                        words.accepting.push_back(0);
                        words.trans.emplace_back();
                        words.trans[cur].emplace_back(l, nxt);
                    }
                    cur = nxt;
                }
                words.accepting[cur] = 1;
            }
            words.deterministic = true;
            words.canonicalize_storage();
            auto jb = join(words, {0}, words, {1});
            acc = product(acc, jb.aut, ProductMode::kOr);
        }
        d.target_slice = std::move(acc);
        d.slice_built = true;
    }
    return d.target_slice;
}

bool BisimTeacher::target_accepts(size_t length, const TrackWord& v, const TrackWord& u) {
    bool use_full = true;
    {
        std::lock_guard<std::mutex> lock(cache_mutex_);
        use_full = !oversized_lengths_.count(length);
    }
    if (use_full) {
        try {
            InstanceData& d = instance(length, opts_.membership_instance_cap);
            auto vi = d.inst.state_index(v);
            auto ui = d.inst.state_index(u);
            if (!vi || !ui) return false;
            return d.target.same_block(*vi, *ui);
        } catch (const resource_error&) {
            std::lock_guard<std::mutex> lock(cache_mutex_);
            oversized_lengths_.insert(length);
        }
    }
    // Bisimilarity of the pair is decided by its forward closure.
    FiniteWts sub = instantiate_closure(model_, {v, u}, opts_.instance_state_cap);
    Partition part;
    if (opts_.refine_initials) {
        std::vector<uint32_t> seeds;
        for (uint32_t s = 0; s < sub.states.size(); ++s)
            if (initials_.accepts(convolve({sub.states[s]}, initials_.alphabet)))
                seeds.push_back(s);
        part = greatest_bisimulation_refining(sub, singleton_seed(sub.states.size(), seeds));
    } else {
        part = greatest_bisimulation(sub);
    }
    return part.same_block(*sub.state_index(v), *sub.state_index(u));
}

bool BisimTeacher::membership(const Word& w) {
    auto tw = deconvolve(w, pair_universe_.alphabet);
    if (!tw) return false;
    const TrackWord& v = (*tw)[0];
    const TrackWord& u = (*tw)[1];
    if (v.size() != u.size()) return false;
    if (!model_.config_universe.accepts(convolve({v}, full_universe_.alphabet))) return false;
    if (!model_.config_universe.accepts(convolve({u}, full_universe_.alphabet))) return false;
    return target_accepts(v.size(), v, u);
}

std::vector<char> BisimTeacher::membership_batch(const std::vector<Word>& words) {
    std::vector<char> out(words.size(), 0);
    size_t jobs = std::max<size_t>(1, opts_.jobs);
    if (jobs == 1 || words.size() < 2) {
        for (size_t i = 0; i < words.size(); ++i) out[i] = membership(words[i]);
        return out;
    }
    // Pre-warm the caches serially, then answer in parallel.
    for (auto& w : words) {
        auto tw = deconvolve(w, pair_universe_.alphabet);
        if (tw && (*tw)[0].size() == (*tw)[1].size()) membership(w);
    }
    std::vector<std::thread> pool;
    std::atomic<size_t> next{0};
    for (size_t t = 0; t < jobs; ++t)
        pool.emplace_back([&] {
            for (;;) {
                size_t i = next.fetch_add(1);
                if (i >= words.size()) return;
                out[i] = membership(words[i]);
            }
        });
    for (auto& th : pool) th.join();
    return out;
}

learn::Oracle::EquivAnswer BisimTeacher::counterexample(const Word& w, bool classification) {
    EquivAnswer ans;
    ans.kind = EquivAnswer::kCounterexample;
    ans.counterexample = w;
    ans.classification = classification;
    return ans;
}

learn::Oracle::EquivAnswer BisimTeacher::classify_pair(const Mta& R, const TrackWord& v,
                                                       const TrackWord& u) {
    size_t n = std::max(v.size(), u.size());
    bool in_target = target_accepts(n, v, u);
    Word w = convolve({v, u}, pair_universe_.alphabet);
    bool in_r = R.accepts(w);
    bool in_e = required_pairs_.accepts(w);
    if (in_e && !in_target) {
        // Check against the unseeded greatest bisimulation before declaring
        // the pair non-bisimilar.
        InstanceData& d = instance(n, opts_.slice_instance_cap);
        auto vi = d.inst.state_index(v);
        auto ui = d.inst.state_index(u);
        bool plain_bisim = vi && ui && d.plain.same_block(*vi, *ui);
        if (!plain_bisim) {
            refuted_ = RefutedPair{v, u};
            EquivAnswer ans;
            ans.kind = EquivAnswer::kRefuted;
            ans.message = "non-bisimilar required pair at length " + std::to_string(n);
            return ans;
        }
        throw unsupported_operation_error(
            "a required pair is bisimilar but separated by the initial-identity refinement");
    }
    if (in_r != in_target) return counterexample(w, in_target);
    // The reported pair agrees on both sides; find a genuine discrepancy at
    // the same length.
    Mta r_slice = length_slice(R, n);
    auto e = equivalent(r_slice, target_slice(n));
    if (e.equal)
        throw std::logic_error("symbolic verdict disagrees with the finite instance");
    auto tw = deconvolve(e.witness, pair_universe_.alphabet);
    return counterexample(e.witness, target_accepts(n, (*tw)[0], (*tw)[1]));
}

learn::Oracle::EquivAnswer BisimTeacher::equivalence(const Mta& hyp) {
    // Normalize the hypothesis to a relation over equal-length pairs.
    Mta R = product(determinize_minimize(hyp), pair_universe_, ProductMode::kAnd);

    // E contained in R.
    {
        Mta missing = product(required_pairs_, R, ProductMode::kDiff);
        if (auto w = shortest_word(missing)) {
            auto tw = deconvolve(*w, pair_universe_.alphabet);
            return classify_pair(R, (*tw)[0], (*tw)[1]);
        }
    }
    // Uniformity mode: initial configurations may only relate to themselves.
    if (opts_.refine_initials) {
        Mta on_initials = pairs_within(R, initials_);
        Mta viol = product(on_initials, diagonal(initials_), ProductMode::kDiff);
        if (auto w = shortest_word(viol)) {
            auto tw = deconvolve(*w, pair_universe_.alphabet);
            return classify_pair(R, (*tw)[0], (*tw)[1]);
        }
    }
    // Shortest-first screening against small instances.
    {
        size_t screened = 0;
        for (size_t len = 1; len <= opts_.max_probe_length && screened < opts_.screen_lengths;
             ++len) {
            if (length_slice(model_.config_universe, len).is_empty_language()) continue;
            InstanceData* d = nullptr;
            try {
                d = &instance(len, opts_.screen_state_cap);
            } catch (const resource_error&) {
                break;
            }
            ++screened;
            (void)d;
            auto e = equivalent(length_slice(R, len), target_slice(len));
            if (!e.equal) {
                auto tw = deconvolve(e.witness, pair_universe_.alphabet);
                return classify_pair(R, (*tw)[0], (*tw)[1]);
            }
        }
    }
    // Full symbolic check.
    proof::Verdict v = checker_->check_bisimulation(R);
    if (v.status == proof::Verdict::kNotApplicable)
        throw invalid_input_error("hypothesis relation rejected: " + v.to_string());
    if (!v.proved()) {
        auto tw = deconvolve(v.witness_word, pair_universe_.alphabet);
        return classify_pair(R, (*tw)[0], (*tw)[1]);
    }
    // Accepted; extend over the configurations outside the invariant.
    Mta result = R;
    if (invariant_) {
        Mta outside = product(full_universe_, *invariant_, ProductMode::kDiff);
        result = product(result, diagonal(outside), ProductMode::kOr);
    }
    accepted_ = std::move(result);
    EquivAnswer ans;
    ans.kind = EquivAnswer::kOk;
    ans.message = "bisimulation containing the required pairs";
    return ans;
}

std::vector<Letter> BisimTeacher::learning_letters() const {
    return learn::learning_letters(pair_universe_.alphabet, true);
}

size_t BisimTeacher::instances_built() const { return cache_.size(); }

size_t BisimTeacher::largest_instance() const {
    size_t m = 0;
    for (auto& [len, d] : cache_) m = std::max(m, d->inst.states.size());
    return m;
}

}  // namespace regbis::teach
