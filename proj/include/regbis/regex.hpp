#pragma once

#include <memory>

#include "regbis/automaton.hpp"

namespace regbis {

// Small combinator layer for building fixture automata. Expressions denote
// languages over composite letters of a fixed alphabet; to_mta compiles via
// Thompson-style NFA construction and minimizes.
class Re {
public:
    static Re eps();
    static Re none();
    static Re lit(Letter l);
    static Re lits(std::vector<Letter> ls);           // one letter from the set
    static Re seq(std::vector<Re> parts);
    static Re alt(std::vector<Re> parts);
    static Re star(Re inner);
    static Re plus(Re inner);
    static Re opt(Re inner);
    static Re repeat(Re inner, size_t n);

    Mta to_mta(const TrackAlphabet& alphabet) const;

    struct Node;

private:
    std::shared_ptr<const Node> node_;
};

}  // namespace regbis
