#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>

#include "regbis/automaton.hpp"

namespace regbis::fo {

// First-order formulas over named regular relations. Variables carry a sort
// (a named 1-track universe); quantifiers always range over their sort.
struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
    enum Kind { kAtom, kNot, kAnd, kOr, kImplies, kIff, kExists, kForall } kind;
    // kAtom
    std::string rel;
    std::vector<std::string> args;
    // connectives
    std::vector<FormulaPtr> kids;
    // quantifiers
    std::string var, sort;
};

FormulaPtr atom(std::string rel, std::vector<std::string> args);
FormulaPtr lnot(FormulaPtr f);
FormulaPtr land(std::vector<FormulaPtr> fs);
FormulaPtr lor(std::vector<FormulaPtr> fs);
FormulaPtr implies(FormulaPtr a, FormulaPtr b);
FormulaPtr iff(FormulaPtr a, FormulaPtr b);
FormulaPtr exists(std::string var, std::string sort, FormulaPtr body);
FormulaPtr forall(std::string var, std::string sort, FormulaPtr body);

struct Binding {
    std::map<std::string, Mta> relations;
    std::map<std::string, Mta> sorts;
    // Relations already known to lie inside the sort product of their
    // argument positions may be listed here to skip re-relativization.
    std::set<std::string> pre_relativized;
};

// Declared free variable with its sort name.
using FreeVar = std::pair<std::string, std::string>;

// Compiles to a normalized minimal automaton whose tracks follow free_order.
// Every compiled language lies within the sort product of its free variables.
Mta compile(const FormulaPtr& f, const Binding& binding, const std::vector<FreeVar>& free_order);

struct HoldsResult {
    bool holds = true;
    // For a refuted universal prefix: shortest violating assignment.
    std::vector<std::pair<std::string, TrackWord>> witness;
};
HoldsResult holds(const FormulaPtr& sentence, const Binding& binding);

// Built-in relations of the universal word structure and weight arithmetic.
Mta builtin_eq(const std::vector<std::string>& symbols);
Mta builtin_neq(const std::vector<std::string>& symbols);
Mta builtin_eqL(const std::vector<std::string>& a_symbols,
                const std::vector<std::string>& b_symbols);
Mta builtin_prefix(const std::vector<std::string>& symbols);
Mta builtin_succ(const std::vector<std::string>& symbols, const std::string& letter);
Mta builtin_const(const std::vector<std::string>& symbols, const std::vector<std::string>& word);
Mta builtin_nonempty(const std::vector<std::string>& symbols);
// 3-track {(x,y,z) : x + y = z} over canonical weight words.
Mta builtin_add();
Mta identity_on(const Mta& sort);

// Name-based lookup per the CLI surface: eq, neq, eqL, prefix, nonempty,
// succ_<sym>, const_<word>, add, id_<sort>. Throws on unknown names.
Mta builtin(const std::string& name, const std::vector<std::string>& symbols,
            const std::map<std::string, Mta>& sorts);

}  // namespace regbis::fo
