#pragma once

#include <map>

#include "regbis/wts.hpp"

namespace regbis::proof {

struct Verdict {
    enum Status { kProved, kCounterexample, kNotApplicable } status = kProved;
    std::string condition;               // violated condition id
    std::string action;                  // action of a lambda/simulation violation
    std::vector<std::string> witness;    // rendered witness words
    Word witness_word;                   // raw convolution for learner consumption
    std::string detail;

    bool proved() const { return status == kProved; }
    std::string to_string() const;
};

// Checks candidate bisimulations against one model, caching the pieces of
// the verification condition that do not depend on the relation: per-action
// edge relations, successor covers, and bounded weight-sum automata.
class BisimChecker {
public:
    explicit BisimChecker(const RegularWts& m);

    const RegularWts& model() const { return model_; }

    // R is an equivalence on the configurations (reflexive over the whole
    // universe, symmetric, transitive). Shortest violating tuple reported.
    Verdict check_equivalence(const Mta& R);

    // The full bisimulation condition: equivalence plus, for every action,
    // matching per-class successor masses realized by the canonical label
    // patterns up to the branching bound.
    Verdict check_bisimulation(const Mta& R);

    // Per-action pattern disjunction; exposed for tests.
    Mta lambda_for_action(size_t action, const Mta& R);

private:
    struct Pattern {
        // class sizes (u side, v side), canonically sorted
        std::vector<std::pair<uint32_t, uint32_t>> classes;
        uint32_t m, mp;
    };
    void ensure_action(size_t a);
    const Mta& msum(size_t a, uint32_t k);
    const Mta& covers(size_t a, uint32_t m);
    std::vector<Pattern> patterns_for(uint32_t m, uint32_t mp) const;
    Mta compile_pattern(size_t a, const Pattern& p, const Mta& R, const Mta& notR);

    RegularWts model_;
    Mta pair_universe_;
    std::map<std::pair<size_t, uint32_t>, Mta> msum_, covers_;
    std::vector<Mta> edge_, nosucc_;
    std::vector<char> action_ready_;
};

Verdict check_equivalence(const RegularWts& m, const Mta& R);
Verdict check_bisimulation(const RegularWts& m, const Mta& R);

// The non-weighted rule: forward and backward simulation clauses on 0/1
// weighted systems; a fast pre-filter and regression target.
Verdict check_lts_bisimulation(const RegularWts& m, const Mta& R);

// Theorem 4 driver. With a reference system (disjoint union), R restricted
// to I x I must be the identity; the intra-system form skips that clause.
Verdict verify_anonymity(const RegularWts& m, const Mta& I, const Mta& E, const Mta& R,
                         bool reference_mode = false);

// Theorem 5 driver over the reversed program. Partial correctness only.
Verdict verify_uniformity(const RegularWts& program, const Mta& I, const Mta& E_final,
                          const Mta& R);

}  // namespace regbis::proof
