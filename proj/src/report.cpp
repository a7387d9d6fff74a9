#include "regbis/report.hpp"

#include <chrono>
#include <fstream>
#include <ostream>

#include "regbis/bisim.hpp"
#include "regbis/convolution.hpp"
#include "regbis/errors.hpp"
#include "regbis/formula_text.hpp"
#include "regbis/learner.hpp"
#include "regbis/ops.hpp"
#include "regbis/proof.hpp"
#include "regbis/teacher.hpp"
#include "regbis/weights.hpp"

namespace regbis::driver {

void RunReport::print(std::ostream& os) const {
    for (auto& h : human) os << h << "\n";
    for (auto& t : timing) os << t << "\n";
    os << "---\n";
    for (auto& [k, v] : kv) os << k << "=" << v << "\n";
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0).count() / 1000.0;
}

std::string fmt_seconds(double s) {
    char buf[32];
    snprintf(buf, sizeof(buf), "%.2fs", s);
    return buf;
}

void set_verdict(RunReport& r, const proof::Verdict& v) {
    switch (v.status) {
        case proof::Verdict::kProved:
            r.exit_code = 0;
            r.set("verdict", "proved");
            break;
        case proof::Verdict::kCounterexample:
            r.exit_code = 1;
            r.set("verdict", "counterexample");
            break;
        case proof::Verdict::kNotApplicable:
            r.exit_code = 2;
            r.set("verdict", "not_applicable");
            break;
    }
    if (!v.condition.empty()) r.set("condition", v.condition);
    if (!v.action.empty()) r.set("action", v.action);
    for (size_t i = 0; i < v.witness.size(); ++i)
        r.set("witness" + std::to_string(i), v.witness[i]);
    if (!v.detail.empty()) r.note(v.detail);
}

void add_oracle_lines(RunReport& r, const fmt::Bundle& b, const RunOptions& opts) {
    if (!b.corpus_name) return;
    auto cm = corpus::load(*b.corpus_name);
    if (cm.property == corpus::Property::kUniformity) {
        auto lens = corpus::instance_lengths(cm, opts.oracle_length_cap);
        if (!lens.empty()) {
            auto oc = corpus::uniformity_oracle(cm, lens.front());
            for (auto& [k, v] : oc.lines) r.set(k, v);
            r.set("oracle_ok", oc.ok ? "true" : "false");
        }
    }
}

struct LearnOutcome {
    learn::LearnResult result;
    std::optional<Mta> relation;
    std::optional<teach::BisimTeacher::RefutedPair> refuted;
    double bisim_seconds = 0;
    double lstar_seconds = 0;
    size_t instances = 0, largest = 0;
};

LearnOutcome run_learning(const fmt::Bundle& b, const RunOptions& opts, std::ostream* log) {
    RegularWts work = b.model;
    teach::TeacherOptions topts;
    topts.jobs = opts.jobs;
    if (b.property == corpus::Property::kUniformity) {
        work = reverse(b.model);
        if (b.reverse_branching_bound) work.branching_bound = b.reverse_branching_bound;
        topts.refine_initials = true;
    }
    auto t0 = Clock::now();
    teach::BisimTeacher teacher(work, b.pairs, b.invariant, b.initial, topts, log);
    learn::LearnerLimits limits;
    limits.max_cells = opts.max_cells;
    limits.max_equivalence = opts.max_queries;
    LearnOutcome out;
    out.result = learn::learn(teacher, teacher.pair_alphabet(), teacher.learning_letters(),
                              limits, log);
    out.lstar_seconds = seconds_since(t0);
    out.relation = teacher.accepted();
    out.refuted = teacher.refuted();
    out.instances = teacher.instances_built();
    out.largest = teacher.largest_instance();
    return out;
}

void add_learn_stats(RunReport& r, const LearnOutcome& lo) {
    r.set("hypothesis_states", std::to_string(lo.result.hypothesis.num_states));
    r.set("membership_queries", std::to_string(lo.result.stats.membership_queries));
    r.set("equivalence_queries", std::to_string(lo.result.stats.equivalence_queries));
    r.set("longest_counterexample", std::to_string(lo.result.stats.longest_counterexample));
    r.set("instances", std::to_string(lo.instances));
    r.set("largest_instance", std::to_string(lo.largest));
    if (lo.relation) {
        r.set("proof_states", std::to_string(lo.relation->num_states));
        r.set("proof_transitions", std::to_string(lo.relation->transition_count()));
    }
}

void maybe_dot(const RunOptions& opts, const std::string& name, const Mta& a) {
    if (opts.dot_out.empty()) return;
    std::ofstream out(opts.dot_out + "/" + name + ".dot");
    out << a.to_dot(name);
}

}  // namespace

RunReport do_validate(const fmt::Bundle& b) {
    RunReport r;
    auto rep = validate(b.model);
    r.set("branching_ok", rep.branching.ok ? "true" : "false");
    r.set("functional_ok", rep.functional.ok ? "true" : "false");
    r.set("stochastic_ok", rep.stochastic.ok ? "true" : "false");
    r.set("length_preserving_ok", rep.length_preserving.ok ? "true" : "false");
    auto witness = [&](const char* key, const ConditionReport& c) {
        if (!c.ok) r.set(std::string(key) + "_witness", c.witness);
    };
    witness("branching", rep.branching);
    witness("functional", rep.functional);
    witness("stochastic", rep.stochastic);
    witness("length_preserving", rep.length_preserving);
    r.exit_code = rep.all_ok() ? 0 : 1;
    r.note(rep.all_ok() ? "model is well-formed" : "model violates a well-formedness condition");
    return r;
}

RunReport do_instantiate(const fmt::Bundle& b, size_t length) {
    RunReport r;
    FiniteWts inst = instantiate(b.model, length);
    r.set("length", std::to_string(length));
    r.set("states", std::to_string(inst.states.size()));
    r.set("transitions", std::to_string(inst.edges.size()));
    r.note("instance at length " + std::to_string(length) + ": " +
           std::to_string(inst.states.size()) + " states, " + std::to_string(inst.edges.size()) +
           " transitions");
    for (auto& e : inst.edges)
        r.note(inst.state_name(e.src) + " -" + inst.actions[e.act] + "/" +
               std::to_string(e.weight) + "-> " + inst.state_name(e.dst));
    return r;
}

RunReport do_check(const fmt::Bundle& b, const Mta& relation, const RunOptions& opts) {
    RunReport r;
    auto t0 = Clock::now();
    auto vr = validate(b.model);
    if (!vr.all_ok()) {
        r.exit_code = 2;
        r.set("verdict", "not_applicable");
        r.set("condition", "model_validation");
        r.note("the model fails validation; run the validate command for details");
        return r;
    }
    proof::Verdict v;
    if (b.property == corpus::Property::kUniformity) {
        v = proof::verify_uniformity(b.model, b.initial, b.pairs, relation);
    } else if (b.property == corpus::Property::kAnonymity) {
        v = proof::verify_anonymity(b.model, b.initial, b.pairs, relation);
    } else {
        v = proof::check_bisimulation(b.model, relation);
        if (v.proved() && !b.pairs.is_empty_language()) {
            Mta missing = product(b.pairs, relation, ProductMode::kDiff);
            if (auto w = shortest_word(missing)) {
                v.status = proof::Verdict::kNotApplicable;
                v.condition = "e_subset";
                auto tw = deconvolve(*w, relation.alphabet);
                v.witness = {track_word_str(relation.alphabet, 0, (*tw)[0]),
                             track_word_str(relation.alphabet, 1, (*tw)[1])};
            }
        }
    }
    set_verdict(r, v);
    r.set("relation_states", std::to_string(relation.num_states));
    r.timing.push_back("total " + fmt_seconds(seconds_since(t0)));
    maybe_dot(opts, "relation", relation);
    return r;
}

namespace {

RunReport learn_or_verify(const fmt::Bundle& b, const RunOptions& opts, bool verify) {
    RunReport r;
    auto t0 = Clock::now();
    std::ofstream log_stream;
    std::ostream* log = nullptr;
    if (!opts.log_path.empty()) {
        log_stream.open(opts.log_path);
        log = &log_stream;
    }
    auto vr = validate(b.model);
    if (!vr.all_ok()) {
        r.exit_code = 2;
        r.set("verdict", "not_applicable");
        r.set("condition", "model_validation");
        return r;
    }
    LearnOutcome lo = run_learning(b, opts, log);
    add_learn_stats(r, lo);
    switch (lo.result.outcome) {
        case learn::LearnResult::kRefuted: {
            r.exit_code = 1;
            r.set("verdict", "refuted");
            if (lo.refuted) {
                const auto& a1 = b.model.config_universe.alphabet;
                r.set("witness0", track_word_str(a1, 0, lo.refuted->v));
                r.set("witness1", track_word_str(a1, 0, lo.refuted->u));
                r.note("a required pair is not bisimilar");
            }
            break;
        }
        case learn::LearnResult::kCapped:
            r.exit_code = 2;
            r.set("verdict", "unknown");
            r.note("resource limit reached before convergence: " + lo.result.message);
            break;
        case learn::LearnResult::kAccepted: {
            const Mta& R = *lo.relation;
            maybe_dot(opts, "proof", R);
            if (!verify) {
                r.exit_code = 0;
                r.set("verdict", "learned");
                r.note("learned a bisimulation containing the required pairs");
                break;
            }
            proof::Verdict v;
            if (b.property == corpus::Property::kUniformity)
                v = proof::verify_uniformity(b.model, b.initial, b.pairs, R);
            else if (b.property == corpus::Property::kAnonymity)
                v = proof::verify_anonymity(b.model, b.initial, b.pairs, R);
            else
                v = proof::check_bisimulation(b.model, R);
            set_verdict(r, v);
            if (v.proved()) add_oracle_lines(r, b, opts);
            break;
        }
    }
    r.timing.push_back("lstar+bisim " + fmt_seconds(lo.lstar_seconds));
    r.timing.push_back("total " + fmt_seconds(seconds_since(t0)));
    return r;
}

}  // namespace

RunReport do_learn(const fmt::Bundle& b, const RunOptions& opts) {
    return learn_or_verify(b, opts, false);
}

RunReport do_verify(const fmt::Bundle& b, const RunOptions& opts) {
    return learn_or_verify(b, opts, true);
}

RunReport do_query(const fmt::Bundle& b, const std::string& formula_text) {
    RunReport r;
    fo::FormulaPtr f = fmt::parse_formula(formula_text);
    fo::Binding binding;
    binding.sorts["S"] = b.model.config_universe;
    binding.sorts["P"] = b.model.weight_universe;
    auto csyms = b.model.config_symbols();
    for (size_t a = 0; a < b.model.actions.size(); ++a)
        binding.relations["delta_" + b.model.actions[a]] = b.model.delta[a];
    binding.relations["initial"] = b.initial;
    binding.relations["pairs"] = b.pairs;
    for (auto name : {"eq", "neq", "eqL", "prefix", "nonempty"})
        binding.relations[name] = fo::builtin(name, csyms, binding.sorts);
    binding.relations["add"] = fo::builtin_add();
    binding.relations["eqP"] = fo::builtin_eq(weight_symbols());
    for (auto& s : csyms) binding.relations["succ_" + s] = fo::builtin_succ(csyms, s);
    auto res = fo::holds(f, binding);
    r.exit_code = res.holds ? 0 : 1;
    r.set("holds", res.holds ? "true" : "false");
    const auto& a1 = b.model.config_universe.alphabet;
    for (auto& [var, w] : res.witness) {
        std::string rendered = track_word_str(a1, 0, w);
        r.set("witness_" + var, rendered.empty() ? "(eps)" : rendered);
    }
    r.note(res.holds ? "the sentence holds" : "the sentence is refuted");
    return r;
}

}  // namespace regbis::driver
