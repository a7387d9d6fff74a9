#include "regbis/bisim.hpp"

#include <algorithm>
#include <map>

#include "regbis/errors.hpp"

namespace regbis {

void Partition::check_consistent() const {
    std::vector<char> seen(block_of.size(), 0);
    for (size_t b = 0; b < blocks.size(); ++b)
        for (uint32_t s : blocks[b]) {
            if (s >= block_of.size() || block_of[s] != b || seen[s])
                throw invalid_input_error("inconsistent partition");
            seen[s] = 1;
        }
    for (char c : seen)
        if (!c) throw invalid_input_error("partition misses a state");
}

namespace {

// Renumbers blocks by smallest member and rebuilds the block lists.
Partition canonical(std::vector<uint32_t> block_of) {
    size_t n = block_of.size();
    std::map<uint32_t, std::vector<uint32_t>> by_old;
    for (uint32_t s = 0; s < n; ++s) by_old[block_of[s]].push_back(s);
    std::vector<std::vector<uint32_t>> blocks;
    blocks.reserve(by_old.size());
    for (auto& [old_id, members] : by_old) blocks.push_back(members);
    std::sort(blocks.begin(), blocks.end(),
              [](const auto& a, const auto& b) { return a[0] < b[0]; });
    Partition p;
    p.blocks = std::move(blocks);
    p.block_of.assign(n, 0);
    for (size_t b = 0; b < p.blocks.size(); ++b)
        for (uint32_t s : p.blocks[b]) p.block_of[s] = static_cast<uint32_t>(b);
    return p;
}

}  // namespace

Partition trivial_partition(size_t n) {
    Partition p;
    p.block_of.assign(n, 0);
    p.blocks.resize(n ? 1 : 0);
    for (uint32_t s = 0; s < n; ++s) p.blocks[0].push_back(s);
    return p;
}

Partition singleton_seed(size_t n, const std::vector<uint32_t>& singletons) {
    std::vector<uint32_t> block_of(n, 0);
    uint32_t next = 1;
    for (uint32_t s : singletons) {
        if (s >= n) throw invalid_input_error("singleton seed state out of range");
        block_of[s] = next++;
    }
    return canonical(std::move(block_of));
}

Partition greatest_bisimulation_refining(const FiniteWts& m, const Partition& seed) {
    size_t n = m.states.size();
    if (seed.block_of.size() != n) throw invalid_input_error("seed partition size mismatch");
    auto adj = m.adjacency();
    std::vector<uint32_t> cls = seed.block_of;
    size_t num_classes = seed.blocks.size();
    for (;;) {
        // Signature: old class plus, per action, the weight emitted into
        // each current class (exact natural sums).
        std::map<std::pair<uint32_t, std::vector<std::vector<std::pair<uint32_t, uint64_t>>>>,
                 uint32_t>
            ids;
        std::vector<uint32_t> next(n);
        for (uint32_t s = 0; s < n; ++s) {
            std::vector<std::vector<std::pair<uint32_t, uint64_t>>> sig(m.actions.size());
            for (size_t a = 0; a < m.actions.size(); ++a) {
                std::map<uint32_t, uint64_t> mass;
                for (auto& [t, w] : adj[s][a]) mass[cls[t]] += w;
                sig[a].assign(mass.begin(), mass.end());
            }
            auto key = std::make_pair(cls[s], std::move(sig));
            auto it = ids.find(key);
            if (it == ids.end())
                it = ids.emplace(std::move(key), static_cast<uint32_t>(ids.size())).first;
            next[s] = it->second;
        }
        size_t next_count = ids.size();
        cls = std::move(next);
        if (next_count == num_classes) break;
        num_classes = next_count;
    }
    return canonical(std::move(cls));
}

Partition greatest_bisimulation(const FiniteWts& m) {
    return greatest_bisimulation_refining(m, trivial_partition(m.states.size()));
}

bool bisimilar(const FiniteWts& m, uint32_t s, uint32_t t) {
    if (s >= m.states.size() || t >= m.states.size())
        throw invalid_input_error("bisimilar: state index out of range");
    return greatest_bisimulation(m).same_block(s, t);
}

}  // namespace regbis
