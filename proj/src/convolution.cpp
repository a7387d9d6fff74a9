#include "regbis/convolution.hpp"

#include <algorithm>

#include "regbis/errors.hpp"

namespace regbis {

Word convolve(const std::vector<TrackWord>& words, const TrackAlphabet& alphabet) {
    if (words.size() != alphabet.track_count())
        throw invalid_input_error("convolve: track count mismatch");
    size_t len = 0;
    for (size_t t = 0; t < words.size(); ++t) {
        for (Symbol s : words[t])
            if (s >= alphabet.track_size(t))
                throw invalid_input_error("convolve: symbol outside track alphabet");
        len = std::max(len, words[t].size());
    }
    Word out;
    out.reserve(len);
    std::vector<Symbol> digits(words.size());
    for (size_t i = 0; i < len; ++i) {
        for (size_t t = 0; t < words.size(); ++t)
            digits[t] = i < words[t].size() ? words[t][i] : alphabet.blank(t);
        out.push_back(alphabet.encode(digits));
    }
    return out;
}

std::optional<std::vector<TrackWord>> deconvolve(const Word& w, const TrackAlphabet& alphabet) {
    size_t k = alphabet.track_count();
    std::vector<TrackWord> out(k);
    std::vector<char> blanked(k, 0);
    for (Letter l : w) {
        if (alphabet.is_all_blank(l)) return std::nullopt;
        for (size_t t = 0; t < k; ++t) {
            Symbol d = alphabet.digit(l, t);
            if (d == alphabet.blank(t)) {
                blanked[t] = 1;
            } else {
                if (blanked[t]) return std::nullopt;
                out[t].push_back(d);
            }
        }
    }
    return out;
}

TrackWord track_word(const TrackAlphabet& alphabet, size_t track,
                     const std::vector<std::string>& names) {
    TrackWord w;
    w.reserve(names.size());
    for (const auto& n : names) {
        Symbol s = alphabet.symbol_index(track, n);
        if (s == alphabet.blank(track)) throw invalid_input_error("blank inside track word");
        w.push_back(s);
    }
    return w;
}

TrackWord track_word_chars(const TrackAlphabet& alphabet, size_t track, const std::string& chars) {
    std::vector<std::string> names;
    names.reserve(chars.size());
    for (char c : chars) names.emplace_back(1, c);
    return track_word(alphabet, track, names);
}

std::string track_word_str(const TrackAlphabet& alphabet, size_t track, const TrackWord& w) {
    std::string out;
    for (size_t i = 0; i < w.size(); ++i) {
        const std::string& n = alphabet.symbol_name(track, w[i]);
        if (n.size() > 1 && !out.empty()) out += " ";
        out += n;
    }
    return out;
}

std::string word_str(const TrackAlphabet& alphabet, const Word& w) {
    std::string out;
    for (Letter l : w) out += alphabet.letter_name(l);
    if (w.empty()) out = "(eps)";
    return out;
}

}  // namespace regbis
