#pragma once

#include <iosfwd>
#include <optional>

#include "regbis/corpus.hpp"
#include "regbis/wts.hpp"

namespace regbis::fmt {

// Parsed model file: named alphabets, named automata, one WTS section, the
// verification sets, and the property selector.
struct ModelFile {
    std::vector<std::pair<std::string, std::vector<std::string>>> alphabets;
    struct AutomatonDef {
        std::string name;
        std::vector<std::string> tracks;  // alphabet names
        Mta aut;
    };
    std::vector<AutomatonDef> automata;

    bool has_wts = false;
    WtsKind kind = WtsKind::kWts;
    uint64_t q = 0;
    uint32_t branching = 1;
    uint32_t reverse_branching = 0;
    bool length_preserving = false;
    std::string universe;
    std::vector<std::pair<std::string, std::string>> actions;  // name -> automaton

    std::string initial, pairs, invariant;
    std::string property;  // anonymity | uniformity | check_only

    const AutomatonDef* find(const std::string& name) const;
};

ModelFile parse_model(std::istream& in);
ModelFile parse_model_file(const std::string& path);
std::string print_model(const ModelFile& f);

// A resolved verification problem.
struct Bundle {
    RegularWts model;
    Mta initial;
    Mta pairs;
    std::optional<Mta> invariant;
    corpus::Property property = corpus::Property::kCheckOnly;
    uint32_t reverse_branching_bound = 0;
    std::optional<std::string> corpus_name;  // set when loaded from the corpus
};

Bundle resolve(const ModelFile& f);
ModelFile to_model_file(const Bundle& b);
Bundle bundle_of(const corpus::CorpusModel& cm);

}  // namespace regbis::fmt
