#include "regbis/regex.hpp"

#include "regbis/errors.hpp"
#include "regbis/ops.hpp"

namespace regbis {

struct Re::Node {
    enum Kind { kEps, kNone, kLits, kSeq, kAlt, kStar } kind;
    std::vector<Letter> letters;
    std::vector<std::shared_ptr<const Node>> kids;
};

Re Re::eps() {
    auto n = std::make_shared<Node>();
    n->kind = Node::kEps;
    Re r;
    r.node_ = n;
    return r;
}

Re Re::none() {
    auto n = std::make_shared<Node>();
    n->kind = Node::kNone;
    Re r;
    r.node_ = n;
    return r;
}

Re Re::lit(Letter l) { return lits({l}); }

Re Re::lits(std::vector<Letter> ls) {
    auto n = std::make_shared<Node>();
    n->kind = Node::kLits;
    n->letters = std::move(ls);
    Re r;
    r.node_ = n;
    return r;
}

Re Re::seq(std::vector<Re> parts) {
    auto n = std::make_shared<Node>();
    n->kind = Node::kSeq;
    for (auto& p : parts) n->kids.push_back(p.node_);
    Re r;
    r.node_ = n;
    return r;
}

Re Re::alt(std::vector<Re> parts) {
    auto n = std::make_shared<Node>();
    n->kind = Node::kAlt;
    for (auto& p : parts) n->kids.push_back(p.node_);
    Re r;
    r.node_ = n;
    return r;
}

Re Re::star(Re inner) {
    auto n = std::make_shared<Node>();
    n->kind = Node::kStar;
    n->kids.push_back(inner.node_);
    Re r;
    r.node_ = n;
    return r;
}

Re Re::plus(Re inner) { return seq({inner, star(inner)}); }

Re Re::opt(Re inner) { return alt({eps(), inner}); }

Re Re::repeat(Re inner, size_t n) {
    std::vector<Re> parts;
    for (size_t i = 0; i < n; ++i) parts.push_back(inner);
    return parts.empty() ? eps() : seq(std::move(parts));
}

namespace {

// NFA fragment construction with epsilon edges.
struct Builder {
    std::vector<std::vector<std::pair<Letter, State>>> trans;
    std::vector<std::vector<State>> eps;
    State fresh() {
        trans.emplace_back();
        eps.emplace_back();
        return static_cast<State>(trans.size() - 1);
    }
    std::pair<State, State> build(const Re::Node* n) {
        State s = fresh(), e = fresh();
        switch (n->kind) {
            case Re::Node::kEps: eps[s].push_back(e); break;
            case Re::Node::kNone: break;
            case Re::Node::kLits:
                for (Letter l : n->letters) trans[s].emplace_back(l, e);
                break;
            case Re::Node::kSeq: {
                State cur = s;
                for (auto& k : n->kids) {
                    auto [ks, ke] = build(k.get());
                    eps[cur].push_back(ks);
                    cur = ke;
                }
                eps[cur].push_back(e);
                break;
            }
            case Re::Node::kAlt:
                for (auto& k : n->kids) {
                    auto [ks, ke] = build(k.get());
                    eps[s].push_back(ks);
                    eps[ke].push_back(e);
                }
                break;
            case Re::Node::kStar: {
                auto [ks, ke] = build(n->kids[0].get());
                eps[s].push_back(e);
                eps[s].push_back(ks);
                eps[ke].push_back(ks);
                eps[ke].push_back(e);
                break;
            }
        }
        return {s, e};
    }
};

}  // namespace

Mta Re::to_mta(const TrackAlphabet& alphabet) const {
    Builder b;
    auto [start, end] = b.build(node_.get());
    size_t n = b.trans.size();
    std::vector<std::vector<State>> closure(n);
    for (State s = 0; s < n; ++s) {
        std::vector<char> seen(n, 0);
        std::vector<State> stack = {s};
        seen[s] = 1;
        while (!stack.empty()) {
            State c = stack.back();
            stack.pop_back();
            closure[s].push_back(c);
            for (State d : b.eps[c])
                if (!seen[d]) {
                    seen[d] = 1;
                    stack.push_back(d);
                }
        }
    }
    Mta m;
    m.alphabet = alphabet;
    m.num_states = static_cast<uint32_t>(n);
    m.accepting.assign(n, 0);
    m.trans.resize(n);
    for (State s = 0; s < n; ++s) {
        for (State c : closure[s]) {
            if (c == end) m.accepting[s] = 1;
            for (auto& [l, d] : b.trans[c]) {
                if (l >= alphabet.letter_count())
                    throw invalid_input_error("regex letter outside alphabet");
                m.trans[s].emplace_back(l, d);
            }
        }
    }
    m.initial = {start};
    m.canonicalize_storage();
    m.deterministic = false;
    m.normalized = true;  // caller must not write blank-invalid words
    return minimize(m);
}

}  // namespace regbis
