#pragma once

#include <map>
#include <random>

#include "regbis/convolution.hpp"
#include "regbis/fo.hpp"
#include "regbis/ops.hpp"

namespace regbis::testutil {

// Brute-force evaluator for sentences: quantifiers range over all sort words
// up to the bound, atoms answered by direct NFA membership. Independent of
// the compile pipeline.
class FoOracle {
public:
    FoOracle(const fo::Binding& binding, size_t word_bound) : binding_(binding) {
        for (auto& [name, aut] : binding.sorts) {
            std::vector<TrackWord> words;
            for (auto& w : aut.enumerate(word_bound)) {
                auto tw = deconvolve(w, aut.alphabet);
                words.push_back((*tw)[0]);
            }
            domains_[name] = std::move(words);
        }
    }

    bool eval(const fo::FormulaPtr& f) {
        std::map<std::string, TrackWord> env;
        return eval_rec(f, env);
    }

private:
    bool eval_rec(const fo::FormulaPtr& f, std::map<std::string, TrackWord>& env) {
        using fo::Formula;
        switch (f->kind) {
            case Formula::kAtom: {
                const Mta& rel = binding_.relations.at(f->rel);
                std::vector<TrackWord> args;
                for (auto& a : f->args) args.push_back(env.at(a));
                return rel.accepts(convolve(args, rel.alphabet));
            }
            case Formula::kNot: return !eval_rec(f->kids[0], env);
            case Formula::kAnd:
                for (auto& k : f->kids)
                    if (!eval_rec(k, env)) return false;
                return true;
            case Formula::kOr:
                for (auto& k : f->kids)
                    if (eval_rec(k, env)) return true;
                return false;
            case Formula::kImplies: return !eval_rec(f->kids[0], env) || eval_rec(f->kids[1], env);
            case Formula::kIff: return eval_rec(f->kids[0], env) == eval_rec(f->kids[1], env);
            case Formula::kExists: {
                for (auto& w : domains_.at(f->sort)) {
                    env[f->var] = w;
                    bool r = eval_rec(f->kids[0], env);
                    env.erase(f->var);
                    if (r) return true;
                }
                return false;
            }
            case Formula::kForall: {
                for (auto& w : domains_.at(f->sort)) {
                    env[f->var] = w;
                    bool r = eval_rec(f->kids[0], env);
                    env.erase(f->var);
                    if (!r) return false;
                }
                return true;
            }
        }
        return false;
    }

    const fo::Binding& binding_;
    std::map<std::string, std::vector<TrackWord>> domains_;
};

// Random sentences of bounded quantifier depth over the binding's relations.
class SentenceGen {
public:
    SentenceGen(std::mt19937_64& rng, std::vector<std::pair<std::string, size_t>> rels,
                std::string sort)
        : rng_(rng), rels_(std::move(rels)), sort_(std::move(sort)) {}

    fo::FormulaPtr sentence(size_t depth) {
        counter_ = 0;
        std::vector<std::string> scope;
        return quantified(depth, scope);
    }

private:
    fo::FormulaPtr quantified(size_t depth, std::vector<std::string>& scope) {
        std::string v = "v" + std::to_string(counter_++);
        scope.push_back(v);
        fo::FormulaPtr inner =
            depth > 1 && chance(0.7) ? quantified(depth - 1, scope) : body(scope);
        scope.pop_back();
        return chance(0.5) ? fo::forall(v, sort_, inner) : fo::exists(v, sort_, inner);
    }

    fo::FormulaPtr body(const std::vector<std::string>& scope) {
        return boolean(2, scope);
    }

    fo::FormulaPtr boolean(size_t depth, const std::vector<std::string>& scope) {
        if (depth == 0 || chance(0.4)) return atom(scope);
        double r = real();
        if (r < 0.2) return fo::lnot(boolean(depth - 1, scope));
        if (r < 0.5)
            return fo::land({boolean(depth - 1, scope), boolean(depth - 1, scope)});
        if (r < 0.8) return fo::lor({boolean(depth - 1, scope), boolean(depth - 1, scope)});
        if (r < 0.9)
            return fo::implies(boolean(depth - 1, scope), boolean(depth - 1, scope));
        return fo::iff(boolean(depth - 1, scope), boolean(depth - 1, scope));
    }

    fo::FormulaPtr atom(const std::vector<std::string>& scope) {
        auto& [name, arity] = rels_[std::uniform_int_distribution<size_t>(0, rels_.size() - 1)(rng_)];
        std::vector<std::string> args;
        std::uniform_int_distribution<size_t> pick(0, scope.size() - 1);
        for (size_t i = 0; i < arity; ++i) args.push_back(scope[pick(rng_)]);
        return fo::atom(name, args);
    }

    bool chance(double p) { return real() < p; }
    double real() { return std::uniform_real_distribution<double>(0, 1)(rng_); }

    std::mt19937_64& rng_;
    std::vector<std::pair<std::string, size_t>> rels_;
    std::string sort_;
    int counter_ = 0;
};

}  // namespace regbis::testutil
