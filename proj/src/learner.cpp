#include "regbis/learner.hpp"

#include <algorithm>
#include <ostream>

#include "regbis/convolution.hpp"
#include "regbis/errors.hpp"
#include "regbis/ops.hpp"

namespace regbis::learn {

ObservationTable::ObservationTable(TrackAlphabet alphabet, std::vector<Letter> letters,
                                   Oracle& oracle, LearnerLimits limits, std::ostream* log)
    : alphabet_(std::move(alphabet)),
      letters_(std::move(letters)),
      oracle_(oracle),
      limits_(limits),
      log_(log) {
    std::sort(letters_.begin(), letters_.end());
    prefixes_.push_back({});
    suffixes_.push_back({});
}

bool ObservationTable::member(const Word& w) {
    auto it = cache_.find(w);
    if (it != cache_.end()) return it->second;
    if (cache_.size() >= limits_.max_cells)
        throw resource_error("observation table exceeded the cell limit");
    bool r = oracle_.membership(w);
    if (log_) {
        *log_ << "QUERY membership " << word_str(alphabet_, w) << "\n"
              << "ANSWER membership " << (r ? "accept" : "reject") << "\n";
    }
    ++stats_.membership_queries;
    cache_.emplace(w, r);
    return r;
}

std::vector<char> ObservationTable::row(const Word& prefix) {
    std::vector<char> r(suffixes_.size());
    for (size_t i = 0; i < suffixes_.size(); ++i) {
        Word w = prefix;
        w.insert(w.end(), suffixes_[i].begin(), suffixes_[i].end());
        r[i] = member(w);
    }
    return r;
}

int ObservationTable::find_state_row(const std::vector<char>& r) {
    for (size_t i = 0; i < prefixes_.size(); ++i)
        if (row(prefixes_[i]) == r) return static_cast<int>(i);
    return -1;
}

bool ObservationTable::is_closed() {
    for (auto& x : prefixes_)
        for (Letter a : letters_) {
            Word xa = x;
            xa.push_back(a);
            if (find_state_row(row(xa)) < 0) return false;
        }
    return true;
}

void ObservationTable::close() {
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t i = 0; i < prefixes_.size() && !changed; ++i)
            for (Letter a : letters_) {
                Word xa = prefixes_[i];
                xa.push_back(a);
                if (find_state_row(row(xa)) < 0) {
                    prefixes_.push_back(std::move(xa));
                    changed = true;
                    break;
                }
            }
    }
}

Mta ObservationTable::hypothesis() {
    // Rows of W are pairwise distinct; every boundary row matches a state.
    std::vector<std::vector<char>> state_rows;
    for (auto& x : prefixes_) state_rows.push_back(row(x));
    Mta h;
    h.alphabet = alphabet_;
    h.num_states = static_cast<uint32_t>(prefixes_.size());
    h.initial = {0};
    h.accepting.assign(h.num_states, 0);
    h.trans.resize(h.num_states);
    for (size_t i = 0; i < prefixes_.size(); ++i) {
        h.accepting[i] = state_rows[i][0];
        for (Letter a : letters_) {
            Word xa = prefixes_[i];
            xa.push_back(a);
            auto r = row(xa);
            int j = -1;
            for (size_t s = 0; s < state_rows.size(); ++s)
                if (state_rows[s] == r) {
                    j = static_cast<int>(s);
                    break;
                }
            if (j < 0) throw std::logic_error("hypothesis requested on an unclosed table");
            h.trans[i].emplace_back(a, static_cast<State>(j));
        }
        std::sort(h.trans[i].begin(), h.trans[i].end());
    }
    h.deterministic = true;
    h.normalized = false;  // total over the learning letters, may accept junk
    return h;
}

void ObservationTable::refine(const Word& w, bool target_accepts) {
    // Hypothesis states along the run of w, as access strings.
    Mta h = hypothesis();
    std::vector<State> run{h.initial[0]};
    for (Letter a : w) {
        const auto& tr = h.trans[run.back()];
        auto it = std::lower_bound(tr.begin(), tr.end(), std::make_pair(a, State{0}));
        if (it == tr.end() || it->first != a)
            throw invalid_input_error("counterexample uses a letter outside the learning alphabet");
        run.push_back(it->second);
    }
    if (h.accepting[run.back()] == target_accepts)
        throw invalid_input_error("refine called with a word that is not a counterexample");
    // f(i) = Mem(access(run[i]) . w[i:]); f(0) != f(|w|), find a flip point.
    auto f = [&](size_t i) {
        Word q = prefixes_[run[i]];
        q.insert(q.end(), w.begin() + i, w.end());
        return member(q);
    };
    size_t lo = 0, hi = w.size();
    bool f0 = f(0);
    if (f0 != target_accepts)
        throw invalid_input_error("teacher classification disagrees with membership");
    // Invariant: f(lo) == f0, f(hi) != f0.
    while (hi - lo > 1) {
        size_t mid = (lo + hi) / 2;
        if (f(mid) == f0)
            lo = mid;
        else
            hi = mid;
    }
    Word suffix(w.begin() + hi, w.end());
    // The suffix distinguishes row(access(run[lo]) . w[lo]) from access(run[hi]).
    if (std::find(suffixes_.begin(), suffixes_.end(), suffix) != suffixes_.end())
        throw std::logic_error("distinguishing suffix already present");
    suffixes_.push_back(std::move(suffix));
}

LearnResult learn(Oracle& oracle, const TrackAlphabet& alphabet,
                  const std::vector<Letter>& letters, LearnerLimits limits, std::ostream* log) {
    ObservationTable table(alphabet, letters, oracle, limits, log);
    LearnResult result;
    size_t last_states = 0;
    for (;;) {
        table.close();
        if (table.states() <= last_states)
            throw std::logic_error("learner failed to make progress");
        last_states = table.states();
        Mta hyp = table.hypothesis();
        if (table.stats().equivalence_queries >= limits.max_equivalence) {
            result.outcome = LearnResult::kCapped;
            result.hypothesis = std::move(hyp);
            result.stats = table.stats();
            result.message = "equivalence query limit reached";
            return result;
        }
        if (log) *log << "QUERY equivalence states=" << hyp.num_states << "\n";
        auto ans = oracle.equivalence(hyp);
        table.note_equivalence();
        switch (ans.kind) {
            case Oracle::EquivAnswer::kOk:
                if (log) *log << "ANSWER equivalence ok\n";
                result.outcome = LearnResult::kAccepted;
                result.hypothesis = std::move(hyp);
                result.message = ans.message;
                result.stats = table.stats();
                return result;
            case Oracle::EquivAnswer::kRefuted:
                if (log) *log << "ANSWER equivalence refuted " << ans.message << "\n";
                result.outcome = LearnResult::kRefuted;
                result.hypothesis = std::move(hyp);
                result.message = ans.message;
                result.stats = table.stats();
                return result;
            case Oracle::EquivAnswer::kCounterexample: {
                if (log)
                    *log << "ANSWER equivalence counterexample "
                         << word_str(alphabet, ans.counterexample) << " "
                         << (ans.classification ? "accept" : "reject") << "\n";
                table.note_counterexample(ans.counterexample.size());
                // Guard: the teacher's classification must match one fresh
                // membership answer, and the hypothesis must disagree.
                bool hyp_says = hyp.accepts(ans.counterexample);
                if (hyp_says == ans.classification)
                    throw invalid_input_error("teacher returned a non-counterexample");
                table.refine(ans.counterexample, ans.classification);
                break;
            }
        }
    }
}

std::vector<Letter> learning_letters(const TrackAlphabet& alphabet, bool length_preserving) {
    std::vector<Letter> out;
    for (Letter l = 0; l < alphabet.letter_count(); ++l) {
        if (alphabet.is_all_blank(l)) continue;
        if (length_preserving) {
            bool any_blank = false;
            for (size_t t = 0; t < alphabet.track_count(); ++t)
                any_blank = any_blank || alphabet.is_blank_at(l, t);
            if (any_blank) continue;
        }
        out.push_back(l);
    }
    return out;
}

}  // namespace regbis::learn
