#pragma once

#include <memory>
#include <mutex>
#include <set>

#include "regbis/bisim.hpp"
#include "regbis/learner.hpp"
#include "regbis/proof.hpp"

namespace regbis::teach {

struct TeacherOptions {
    size_t instance_state_cap = kDefaultInstanceCap;
    // Full instances are materialized for membership only up to this size;
    // beyond it, queries fall back to the forward closure of the asked pair,
    // which decides bisimilarity just as well.
    size_t membership_instance_cap = 20000;
    size_t slice_instance_cap = 60000;
    size_t screen_state_cap = 1500;   // pre-screen only instances this small
    size_t screen_lengths = 2;        // number of instance lengths to screen
    size_t max_probe_length = 24;     // when searching for populated lengths
    // Uniformity mode: the target refines the partition separating every
    // initial configuration, so accepted relations satisfy the
    // initial-identity side condition.
    bool refine_initials = false;
    size_t jobs = 1;
};

// Answers membership through fixed-length bisimulations and equivalence
// through the symbolic checker, classifying witnesses against the greatest
// fixed-length bisimulation (Algorithm 2).
class BisimTeacher : public learn::Oracle {
public:
    BisimTeacher(const RegularWts& model, Mta required_pairs, std::optional<Mta> invariant,
                 Mta initials, TeacherOptions opts = {}, std::ostream* log = nullptr);

    bool membership(const Word& w) override;
    EquivAnswer equivalence(const Mta& hyp) override;

    // Batch membership under a bounded worker pool; answers in input order.
    std::vector<char> membership_batch(const std::vector<Word>& words);

    struct RefutedPair {
        TrackWord v, u;
    };
    const std::optional<RefutedPair>& refuted() const { return refuted_; }
    // The accepted relation, extended with the identity outside the
    // invariant when one is set.
    const std::optional<Mta>& accepted() const { return accepted_; }

    const TrackAlphabet& pair_alphabet() const { return pair_universe_.alphabet; }
    std::vector<Letter> learning_letters() const;
    const RegularWts& working_model() const { return model_; }

    // Statistics for reports.
    size_t instances_built() const;
    size_t largest_instance() const;

private:
    struct InstanceData {
        FiniteWts inst;
        Partition target;          // seeded when refine_initials
        Partition plain;           // unseeded greatest bisimulation
        Mta target_slice;          // language of target-related pairs
        bool slice_built = false;
    };
    InstanceData& instance(size_t length, size_t cap);
    Mta& target_slice(size_t length);
    bool target_accepts(size_t length, const TrackWord& v, const TrackWord& u);
    EquivAnswer classify_pair(const Mta& R, const TrackWord& v, const TrackWord& u);
    EquivAnswer counterexample(const Word& w, bool classification);

    RegularWts model_;             // invariant-restricted when invariant set
    Mta full_universe_;            // the unrestricted configuration universe
    std::optional<Mta> invariant_;
    Mta required_pairs_;
    Mta initials_;
    Mta pair_universe_;            // equal-length pairs over the working universe
    TeacherOptions opts_;
    std::ostream* log_;
    std::unique_ptr<proof::BisimChecker> checker_;
    std::map<size_t, std::unique_ptr<InstanceData>> cache_;
    std::set<size_t> oversized_lengths_;
    std::mutex cache_mutex_;
    std::optional<RefutedPair> refuted_;
    std::optional<Mta> accepted_;
};

}  // namespace regbis::teach
