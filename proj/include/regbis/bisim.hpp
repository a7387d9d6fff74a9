#pragma once

#include "regbis/wts.hpp"

namespace regbis {

// Block partition of a finite instance's states. Blocks are numbered by
// their smallest member so results are reproducible.
struct Partition {
    std::vector<uint32_t> block_of;
    std::vector<std::vector<uint32_t>> blocks;

    bool same_block(uint32_t s, uint32_t t) const { return block_of[s] == block_of[t]; }
    size_t size() const { return blocks.size(); }
    void check_consistent() const;
};

// Coarsest partition refining `seed` in which related states emit equal
// weight into every block for every action; signature-based splitting until
// fixpoint. With the default trivial seed this is the greatest bisimulation.
Partition greatest_bisimulation(const FiniteWts& m);
Partition greatest_bisimulation_refining(const FiniteWts& m, const Partition& seed);

Partition trivial_partition(size_t n);
// Every listed state becomes a singleton block; the rest form one block.
Partition singleton_seed(size_t n, const std::vector<uint32_t>& singletons);

bool bisimilar(const FiniteWts& m, uint32_t s, uint32_t t);

}  // namespace regbis
