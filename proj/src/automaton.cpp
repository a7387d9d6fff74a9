#include "regbis/automaton.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "regbis/errors.hpp"

namespace regbis {

Mta Mta::empty_language(TrackAlphabet a) {
    Mta m;
    m.alphabet = std::move(a);
    m.deterministic = true;
    m.normalized = true;
    return m;
}

Mta Mta::epsilon_language(TrackAlphabet a) {
    Mta m;
    m.alphabet = std::move(a);
    m.num_states = 1;
    m.initial = {0};
    m.accepting = {1};
    m.trans.resize(1);
    m.deterministic = true;
    m.normalized = true;
    return m;
}

bool Mta::is_empty_language() const {
    if (initial.empty()) return true;
    // Reachable accepting state?
    std::vector<char> seen(num_states, 0);
    std::vector<State> stack(initial.begin(), initial.end());
    for (State s : stack) seen[s] = 1;
    while (!stack.empty()) {
        State s = stack.back();
        stack.pop_back();
        if (accepting[s]) return false;
        for (auto& [l, d] : trans[s])
            if (!seen[d]) {
                seen[d] = 1;
                stack.push_back(d);
            }
    }
    return true;
}

bool Mta::accepts_epsilon() const {
    for (State s : initial)
        if (accepting[s]) return true;
    return false;
}

size_t Mta::transition_count() const {
    size_t n = 0;
    for (auto& t : trans) n += t.size();
    return n;
}

void Mta::add_transition(State src, Letter l, State dst) {
    trans[src].emplace_back(l, dst);
}

void Mta::canonicalize_storage() {
    std::sort(initial.begin(), initial.end());
    initial.erase(std::unique(initial.begin(), initial.end()), initial.end());
    for (auto& v : trans) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    }
}

bool Mta::accepts(const Word& w) const {
    std::set<State> cur(initial.begin(), initial.end());
    for (Letter l : w) {
        if (l >= alphabet.letter_count()) throw invalid_input_error("letter outside alphabet");
        std::set<State> next;
        for (State s : cur) {
            const auto& v = trans[s];
            auto lo = std::lower_bound(v.begin(), v.end(), std::make_pair(l, State{0}));
            for (auto it = lo; it != v.end() && it->first == l; ++it) next.insert(it->second);
        }
        cur.swap(next);
        if (cur.empty()) return false;
    }
    for (State s : cur)
        if (accepting[s]) return true;
    return false;
}

std::vector<Word> Mta::enumerate(size_t max_len) const {
    return enumerate_capped(max_len, SIZE_MAX);
}

std::vector<Word> Mta::enumerate_capped(size_t max_len, size_t max_nodes) const {
    std::vector<Word> out;
    if (initial.empty()) return out;
    // BFS over words in length-lex order; state = set of NFA states.
    struct Node {
        Word word;
        std::vector<State> states;
    };
    std::vector<Node> layer;
    layer.push_back({{}, initial});
    auto is_accepting = [&](const std::vector<State>& ss) {
        for (State s : ss)
            if (accepting[s]) return true;
        return false;
    };
    if (is_accepting(layer[0].states)) out.push_back({});
    for (size_t len = 1; len <= max_len && !layer.empty(); ++len) {
        std::vector<Node> next_layer;
        if (layer.size() > max_nodes || out.size() > max_nodes)
            throw resource_error("word enumeration exceeds the node budget");
        for (auto& node : layer) {
            // Group successors by letter, letters ascending.
            std::vector<std::pair<Letter, State>> all;
            for (State s : node.states)
                all.insert(all.end(), trans[s].begin(), trans[s].end());
            std::sort(all.begin(), all.end());
            size_t i = 0;
            while (i < all.size()) {
                Letter l = all[i].first;
                std::vector<State> succ;
                while (i < all.size() && all[i].first == l) {
                    if (succ.empty() || succ.back() != all[i].second) succ.push_back(all[i].second);
                    ++i;
                }
                std::sort(succ.begin(), succ.end());
                succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
                Node n;
                n.word = node.word;
                n.word.push_back(l);
                n.states = std::move(succ);
                if (is_accepting(n.states)) out.push_back(n.word);
                next_layer.push_back(std::move(n));
            }
        }
        layer.swap(next_layer);
    }
    return out;
}

std::vector<Word> Mta::enumerate_exact(size_t len) const {
    std::vector<Word> all = enumerate(len);
    std::vector<Word> out;
    for (auto& w : all)
        if (w.size() == len) out.push_back(std::move(w));
    return out;
}

std::string Mta::to_dot(const std::string& name) const {
    std::ostringstream os;
    os << "digraph " << name << " {\n  rankdir=LR;\n  node [shape=circle];\n";
    for (State s : initial) os << "  init" << s << " [shape=point]; init" << s << " -> " << s << ";\n";
    for (State s = 0; s < num_states; ++s)
        if (accepting[s]) os << "  " << s << " [shape=doublecircle];\n";
    for (State s = 0; s < num_states; ++s)
        for (auto& [l, d] : trans[s])
            os << "  " << s << " -> " << d << " [label=\"" << alphabet.letter_name(l) << "\"];\n";
    os << "}\n";
    return os.str();
}

bool Mta::same_structure(const Mta& o) const {
    return alphabet == o.alphabet && num_states == o.num_states && initial == o.initial &&
           accepting == o.accepting && trans == o.trans;
}

void Mta::check_valid() const {
    if (accepting.size() != num_states || trans.size() != num_states)
        throw invalid_input_error("automaton arrays disagree with state count");
    for (State s : initial)
        if (s >= num_states) throw invalid_input_error("initial state out of range");
    for (State s = 0; s < num_states; ++s)
        for (auto& [l, d] : trans[s]) {
            if (d >= num_states) throw invalid_input_error("transition target out of range");
            if (l >= alphabet.letter_count()) throw invalid_input_error("letter outside alphabet");
        }
}

}  // namespace regbis
