#include "regbis/model_format.hpp"

#include <fstream>
#include <sstream>

#include "regbis/errors.hpp"
#include "regbis/ops.hpp"
#include "regbis/weights.hpp"

namespace regbis::fmt {

namespace {

std::vector<std::string> tokens(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream is(line);
    std::string t;
    while (is >> t) {
        if (t[0] == '#') break;
        out.push_back(t);
    }
    return out;
}

Letter parse_letter(const TrackAlphabet& a, const std::string& text, int line) {
    std::vector<std::string> parts;
    if (!text.empty() && text.front() == '(') {
        if (text.back() != ')') throw parse_error(line, "unterminated letter tuple");
        std::string body = text.substr(1, text.size() - 2);
        std::string cur;
        for (char c : body) {
            if (c == ',') {
                parts.push_back(cur);
                cur.clear();
            } else {
                cur += c;
            }
        }
        parts.push_back(cur);
    } else {
        parts.push_back(text);
    }
    if (parts.size() != a.track_count())
        throw parse_error(line, "letter arity does not match the automaton tracks");
    std::vector<Symbol> digits(parts.size());
    for (size_t t = 0; t < parts.size(); ++t) {
        if (parts[t].empty()) throw parse_error(line, "empty symbol in letter");
        try {
            digits[t] = a.symbol_index(t, parts[t]);
        } catch (const invalid_input_error& e) {
            throw parse_error(line, e.what());
        }
    }
    return a.encode(digits);
}

uint64_t parse_num(const std::string& s, int line) {
    try {
        size_t pos = 0;
        uint64_t v = std::stoull(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing junk");
        return v;
    } catch (...) {
        throw parse_error(line, "expected a number, found '" + s + "'");
    }
}

}  // namespace

const ModelFile::AutomatonDef* ModelFile::find(const std::string& name) const {
    for (auto& d : automata)
        if (d.name == name) return &d;
    return nullptr;
}

ModelFile parse_model(std::istream& in) {
    ModelFile f;
    std::string line;
    int lineno = 0;
    enum Section { kNone, kAlphabet, kAutomaton, kWts, kSets } section = kNone;
    std::string cur_alpha_name;
    std::vector<std::string> cur_alpha_syms;
    ModelFile::AutomatonDef cur_aut;
    std::vector<std::tuple<int, std::string, std::string, std::string>> pending_trans;
    std::vector<State> cur_initial;
    std::vector<State> cur_accepting;
    uint32_t cur_states = 0;
    int aut_line = 0;

    auto alphabet_of = [&](const std::vector<std::string>& names, int at) {
        std::vector<std::vector<std::string>> per_track;
        for (auto& n : names) {
            bool found = false;
            for (auto& [an, syms] : f.alphabets)
                if (an == n) {
                    per_track.push_back(syms);
                    found = true;
                }
            if (!found) throw parse_error(at, "unknown alphabet '" + n + "'");
        }
        return TrackAlphabet(per_track);
    };

    auto finish_automaton = [&]() {
        TrackAlphabet a = alphabet_of(cur_aut.tracks, aut_line);
        Mta m;
        m.alphabet = a;
        m.num_states = cur_states;
        m.initial = cur_initial;
        m.accepting.assign(cur_states, 0);
        for (State s : cur_accepting) {
            if (s >= cur_states) throw parse_error(aut_line, "accepting state out of range");
            m.accepting[s] = 1;
        }
        m.trans.resize(cur_states);
        for (auto& [ln, src, letter, dst] : pending_trans) {
            uint64_t si = parse_num(src, ln), di = parse_num(dst, ln);
            if (si >= cur_states || di >= cur_states)
                throw parse_error(ln, "transition endpoint out of range");
            m.add_transition(static_cast<State>(si), parse_letter(a, letter, ln),
                             static_cast<State>(di));
        }
        for (State s : cur_initial)
            if (s >= cur_states) throw parse_error(aut_line, "initial state out of range");
        m.canonicalize_storage();
        m.deterministic = false;
        m.normalized = true;
        m.check_valid();
        cur_aut.aut = std::move(m);
        f.automata.push_back(std::move(cur_aut));
        cur_aut = {};
        pending_trans.clear();
        cur_initial.clear();
        cur_accepting.clear();
        cur_states = 0;
    };

    while (std::getline(in, line)) {
        ++lineno;
        auto tk = tokens(line);
        if (tk.empty()) continue;
        const std::string& head = tk[0];
        if (section == kNone) {
            if (head == "ALPHABET") {
                if (tk.size() != 2) throw parse_error(lineno, "ALPHABET needs a name");
                section = kAlphabet;
                cur_alpha_name = tk[1];
                cur_alpha_syms.clear();
            } else if (head == "AUTOMATON") {
                if (tk.size() != 2) throw parse_error(lineno, "AUTOMATON needs a name");
                section = kAutomaton;
                cur_aut.name = tk[1];
                aut_line = lineno;
            } else if (head == "WTS") {
                section = kWts;
                f.has_wts = true;
            } else if (head == "SETS") {
                section = kSets;
            } else if (head == "PROPERTY") {
                if (tk.size() != 2) throw parse_error(lineno, "PROPERTY needs a value");
                if (tk[1] != "anonymity" && tk[1] != "uniformity" && tk[1] != "check_only")
                    throw parse_error(lineno, "unknown property '" + tk[1] + "'");
                f.property = tk[1];
            } else {
                throw parse_error(lineno, "unexpected '" + head + "'");
            }
            continue;
        }
        if (head == "END") {
            if (section == kAlphabet) {
                if (cur_alpha_syms.empty()) throw parse_error(lineno, "alphabet has no symbols");
                f.alphabets.emplace_back(cur_alpha_name, cur_alpha_syms);
            } else if (section == kAutomaton) {
                finish_automaton();
            }
            section = kNone;
            continue;
        }
        switch (section) {
            case kAlphabet:
                if (head == "symbols") {
                    for (size_t i = 1; i < tk.size(); ++i) cur_alpha_syms.push_back(tk[i]);
                } else {
                    throw parse_error(lineno, "unexpected '" + head + "' in ALPHABET");
                }
                break;
            case kAutomaton:
                if (head == "tracks") {
                    cur_aut.tracks.assign(tk.begin() + 1, tk.end());
                } else if (head == "states") {
                    cur_states = static_cast<uint32_t>(parse_num(tk.at(1), lineno));
                } else if (head == "initial") {
                    for (size_t i = 1; i < tk.size(); ++i)
                        cur_initial.push_back(static_cast<State>(parse_num(tk[i], lineno)));
                } else if (head == "accepting") {
                    for (size_t i = 1; i < tk.size(); ++i)
                        cur_accepting.push_back(static_cast<State>(parse_num(tk[i], lineno)));
                } else if (head == "trans") {
                    if (tk.size() != 4) throw parse_error(lineno, "trans needs: src letter dst");
                    pending_trans.emplace_back(lineno, tk[1], tk[2], tk[3]);
                } else {
                    throw parse_error(lineno, "unexpected '" + head + "' in AUTOMATON");
                }
                break;
            case kWts:
                if (head == "kind") {
                    const std::string& k = tk.at(1);
                    if (k == "wts")
                        f.kind = WtsKind::kWts;
                    else if (k == "markov_chain")
                        f.kind = WtsKind::kMarkovChain;
                    else if (k == "mdp")
                        f.kind = WtsKind::kMdp;
                    else
                        throw parse_error(lineno, "unknown kind '" + k + "'");
                } else if (head == "q") {
                    f.q = parse_num(tk.at(1), lineno);
                } else if (head == "branching") {
                    f.branching = static_cast<uint32_t>(parse_num(tk.at(1), lineno));
                } else if (head == "reverse_branching") {
                    f.reverse_branching = static_cast<uint32_t>(parse_num(tk.at(1), lineno));
                } else if (head == "length_preserving") {
                    f.length_preserving = tk.at(1) == "true";
                } else if (head == "universe") {
                    f.universe = tk.at(1);
                } else if (head == "action") {
                    if (tk.size() != 3) throw parse_error(lineno, "action needs: name automaton");
                    f.actions.emplace_back(tk[1], tk[2]);
                } else {
                    throw parse_error(lineno, "unexpected '" + head + "' in WTS");
                }
                break;
            case kSets:
                if (head == "initial")
                    f.initial = tk.at(1);
                else if (head == "pairs")
                    f.pairs = tk.at(1);
                else if (head == "invariant")
                    f.invariant = tk.at(1);
                else
                    throw parse_error(lineno, "unexpected '" + head + "' in SETS");
                break;
            default: throw parse_error(lineno, "unexpected content");
        }
    }
    if (section != kNone) throw parse_error(lineno, "unterminated section");
    return f;
}

ModelFile parse_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw invalid_input_error("cannot open model file: " + path);
    return parse_model(in);
}

std::string print_model(const ModelFile& f) {
    std::ostringstream os;
    for (auto& [name, syms] : f.alphabets) {
        os << "ALPHABET " << name << "\n  symbols";
        for (auto& s : syms) os << " " << s;
        os << "\nEND\n\n";
    }
    for (auto& d : f.automata) {
        os << "AUTOMATON " << d.name << "\n  tracks";
        for (auto& t : d.tracks) os << " " << t;
        os << "\n  states " << d.aut.num_states << "\n  initial";
        for (State s : d.aut.initial) os << " " << s;
        os << "\n  accepting";
        for (State s = 0; s < d.aut.num_states; ++s)
            if (d.aut.accepting[s]) os << " " << s;
        os << "\n";
        for (State s = 0; s < d.aut.num_states; ++s)
            for (auto& [l, t] : d.aut.trans[s])
                os << "  trans " << s << " " << d.aut.alphabet.letter_name(l) << " " << t << "\n";
        os << "END\n\n";
    }
    if (f.has_wts) {
        os << "WTS\n  kind " << to_string(f.kind) << "\n";
        if (f.kind != WtsKind::kWts) os << "  q " << f.q << "\n";
        os << "  branching " << f.branching << "\n";
        if (f.reverse_branching) os << "  reverse_branching " << f.reverse_branching << "\n";
        os << "  length_preserving " << (f.length_preserving ? "true" : "false") << "\n";
        os << "  universe " << f.universe << "\n";
        for (auto& [a, aut] : f.actions) os << "  action " << a << " " << aut << "\n";
        os << "END\n\n";
    }
    if (!f.initial.empty() || !f.pairs.empty() || !f.invariant.empty()) {
        os << "SETS\n";
        if (!f.initial.empty()) os << "  initial " << f.initial << "\n";
        if (!f.pairs.empty()) os << "  pairs " << f.pairs << "\n";
        if (!f.invariant.empty()) os << "  invariant " << f.invariant << "\n";
        os << "END\n\n";
    }
    if (!f.property.empty()) os << "PROPERTY " << f.property << "\n";
    return os.str();
}

Bundle resolve(const ModelFile& f) {
    if (!f.has_wts) throw invalid_input_error("model file has no WTS section");
    Bundle b;
    auto need = [&](const std::string& name, const char* what) -> const Mta& {
        const auto* d = f.find(name);
        if (!d) throw invalid_input_error(std::string(what) + " references unknown automaton '" +
                                          name + "'");
        return d->aut;
    };
    b.model.config_universe = need(f.universe, "universe");
    if (b.model.config_universe.alphabet.track_count() != 1)
        throw invalid_input_error("the universe automaton must have one track");
    b.model.weight_universe = weight_universe();
    for (auto& [a, aut] : f.actions) {
        b.model.actions.push_back(a);
        const Mta& d = need(aut, "action");
        if (d.alphabet.track_count() != 3)
            throw invalid_input_error("action '" + a + "' needs a 3-track automaton");
        b.model.delta.push_back(determinize_minimize(d));
    }
    if (b.model.actions.empty()) throw invalid_input_error("the WTS declares no actions");
    b.model.branching_bound = f.branching;
    b.model.kind = f.kind;
    b.model.q = f.q;
    b.model.length_preserving = f.length_preserving;
    b.model.config_universe = determinize_minimize(b.model.config_universe);
    b.reverse_branching_bound = f.reverse_branching;

    if (!f.initial.empty()) b.initial = determinize_minimize(need(f.initial, "initial"));
    else b.initial = Mta::empty_language(b.model.config_universe.alphabet);
    if (!f.pairs.empty()) b.pairs = determinize_minimize(need(f.pairs, "pairs"));
    else {
        TrackAlphabet a2({b.model.config_symbols(), b.model.config_symbols()});
        b.pairs = Mta::empty_language(a2);
    }
    if (!f.invariant.empty()) b.invariant = determinize_minimize(need(f.invariant, "invariant"));
    if (f.property == "anonymity")
        b.property = corpus::Property::kAnonymity;
    else if (f.property == "uniformity")
        b.property = corpus::Property::kUniformity;
    else
        b.property = corpus::Property::kCheckOnly;
    return b;
}

namespace {

ModelFile::AutomatonDef def_of(std::string name, std::vector<std::string> tracks, const Mta& a) {
    ModelFile::AutomatonDef d;
    d.name = std::move(name);
    d.tracks = std::move(tracks);
    d.aut = determinize_minimize(a);
    return d;
}

}  // namespace

ModelFile to_model_file(const Bundle& b) {
    ModelFile f;
    f.alphabets.emplace_back("config", b.model.config_symbols());
    f.alphabets.emplace_back("weight", weight_symbols());
    f.automata.push_back(def_of("universe", {"config"}, b.model.config_universe));
    for (size_t a = 0; a < b.model.actions.size(); ++a)
        f.automata.push_back(def_of("delta_" + b.model.actions[a],
                                    {"config", "config", "weight"}, b.model.delta[a]));
    if (!b.initial.is_empty_language() || true)
        f.automata.push_back(def_of("initial_set", {"config"}, b.initial));
    f.automata.push_back(def_of("pair_set", {"config", "config"}, b.pairs));
    if (b.invariant) f.automata.push_back(def_of("invariant_set", {"config"}, *b.invariant));
    f.has_wts = true;
    f.kind = b.model.kind;
    f.q = b.model.q;
    f.branching = b.model.branching_bound;
    f.reverse_branching = b.reverse_branching_bound;
    f.length_preserving = b.model.length_preserving;
    f.universe = "universe";
    for (auto& a : b.model.actions) f.actions.emplace_back(a, "delta_" + a);
    f.initial = "initial_set";
    f.pairs = "pair_set";
    if (b.invariant) f.invariant = "invariant_set";
    f.property = corpus::to_string(b.property);
    return f;
}

Bundle bundle_of(const corpus::CorpusModel& cm) {
    Bundle b;
    b.model = cm.model;
    b.initial = cm.initial;
    b.pairs = cm.pairs;
    b.invariant = cm.invariant;
    b.property = cm.property;
    b.reverse_branching_bound = cm.reverse_branching_bound;
    b.corpus_name = cm.name;
    return b;
}

}  // namespace regbis::fmt
