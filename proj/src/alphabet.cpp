#include "regbis/alphabet.hpp"

#include <algorithm>

#include "regbis/errors.hpp"

namespace regbis {

TrackAlphabet::TrackAlphabet(std::vector<std::vector<std::string>> track_symbols)
    : tracks_(std::move(track_symbols)) {
    stride_.assign(tracks_.size(), 1);
    letter_count_ = 1;
    for (size_t t = tracks_.size(); t-- > 0;) {
        if (tracks_[t].empty())
            throw invalid_input_error("track " + std::to_string(t) + " has no symbols");
        for (const auto& s : tracks_[t])
            if (s == "#" || s.empty())
                throw invalid_input_error("reserved or empty symbol on track " + std::to_string(t));
        stride_[t] = letter_count_;
        letter_count_ *= radix(t);
    }
}

Letter TrackAlphabet::encode(std::span<const Symbol> digits) const {
    Letter l = 0;
    for (size_t t = 0; t < tracks_.size(); ++t) l += stride_[t] * digits[t];
    return l;
}

Letter TrackAlphabet::all_blank() const {
    Letter l = 0;
    for (size_t t = 0; t < tracks_.size(); ++t) l += stride_[t] * blank(t);
    return l;
}

std::vector<Symbol> TrackAlphabet::digits(Letter l) const {
    std::vector<Symbol> d(tracks_.size());
    for (size_t t = 0; t < tracks_.size(); ++t) d[t] = digit(l, t);
    return d;
}

Symbol TrackAlphabet::symbol_index(size_t t, const std::string& name) const {
    if (name == "#") return blank(t);
    const auto& syms = tracks_[t];
    auto it = std::find(syms.begin(), syms.end(), name);
    if (it == syms.end())
        throw invalid_input_error("unknown symbol '" + name + "' on track " + std::to_string(t));
    return static_cast<Symbol>(it - syms.begin());
}

const std::string& TrackAlphabet::symbol_name(size_t t, Symbol s) const {
    static const std::string kBlank = "#";
    if (s == blank(t)) return kBlank;
    return tracks_[t][s];
}

std::string TrackAlphabet::letter_name(Letter l) const {
    if (tracks_.size() == 1) return symbol_name(0, digit(l, 0));
    std::string out = "(";
    for (size_t t = 0; t < tracks_.size(); ++t) {
        if (t) out += ",";
        out += symbol_name(t, digit(l, t));
    }
    out += ")";
    return out;
}

TrackAlphabet TrackAlphabet::select(std::span<const size_t> tracks) const {
    std::vector<std::vector<std::string>> ts;
    ts.reserve(tracks.size());
    for (size_t t : tracks) ts.push_back(tracks_[t]);
    return TrackAlphabet(std::move(ts));
}

}  // namespace regbis
