#pragma once

#include <algorithm>
#include <compare>
#include <cstdlib>
#include <numeric>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "khlab/diagram.hpp"
#include "khlab/errors.hpp"

namespace khlab {

/// One Artin generator sigma_i^{sign}, with 1 <= i <= strands-1.
struct Letter {
    int generator = 1;
    int sign = +1;

    friend bool operator==(const Letter&, const Letter&) = default;
};

class BraidWord {
public:
    BraidWord() = default;

    BraidWord(int strands, std::vector<Letter> letters)
        : strands_(strands), letters_(std::move(letters)) {
        if (strands_ < 1) throw InputError("braid needs at least one strand");
        for (const auto& l : letters_) {
            if (l.sign != 1 && l.sign != -1) throw InputError("letter sign must be +1 or -1");
            if (l.generator < 1 || l.generator >= strands_)
                throw InputError("generator " + std::to_string(l.generator) +
                                 " is out of range for " + std::to_string(strands_) +
                                 " strands");
        }
    }

    int strands() const { return strands_; }
    const std::vector<Letter>& letters() const { return letters_; }
    std::size_t size() const { return letters_.size(); }
    bool empty() const { return letters_.empty(); }

    bool is_positive() const {
        return std::all_of(letters_.begin(), letters_.end(),
                           [](const Letter& l) { return l.sign > 0; });
    }

    /// Letters only, e.g. "1 -2 1".
    std::string letters_text() const {
        std::ostringstream out;
        for (std::size_t k = 0; k < letters_.size(); ++k) {
            if (k) out << ' ';
            out << letters_[k].generator * letters_[k].sign;
        }
        return out.str();
    }

    /// Canonical text with an explicit strand directive, e.g. "p=3; 1 -2 1".
    std::string to_string() const {
        std::string s = "p=" + std::to_string(strands_) + ";";
        if (!letters_.empty()) s += " " + letters_text();
        return s;
    }

    friend bool operator==(const BraidWord&, const BraidWord&) = default;

private:
    int strands_ = 1;
    std::vector<Letter> letters_;
};

/// Parses "[p=<int>;] k1 k2 ..." where a negative k means sigma_{|k|}^{-1}.
inline BraidWord parse_braid(std::string_view text) {
    text = detail::trim(text);
    int explicit_strands = 0;
    if (text.starts_with("p=")) {
        auto semi = text.find(';');
        if (semi == std::string_view::npos) throw InputError("strand directive must end with ';'");
        explicit_strands = detail::parse_int(text.substr(2, semi - 2), "strand count");
        if (explicit_strands < 1) throw InputError("strand count must be positive");
        text = text.substr(semi + 1);
    }
    std::vector<Letter> letters;
    std::istringstream in{std::string(text)};
    std::string token;
    int max_generator = 0;
    while (in >> token) {
        int k = detail::parse_int(token, "braid letter");
        if (k == 0) throw InputError("0 is not a braid generator");
        int g = std::abs(k);
        if (explicit_strands && g >= explicit_strands)
            throw InputError("generator " + std::to_string(g) + " needs more than " +
                             std::to_string(explicit_strands) + " strands");
        max_generator = std::max(max_generator, g);
        letters.push_back({g, k > 0 ? +1 : -1});
    }
    int strands = explicit_strands ? explicit_strands : max_generator + 1;
    return BraidWord(strands, std::move(letters));
}

/// Crossing (i, alpha): the alpha-th occurrence of sigma_i, counted top to
/// bottom. Ordered by generator first, then occurrence.
struct CrossingId {
    int generator = 0;
    int occurrence = 0;

    friend auto operator<=>(const CrossingId&, const CrossingId&) = default;
};

struct CrossingClassification {
    std::vector<CrossingId> ordered;       // sorted by (i, alpha)
    std::vector<CrossingId> by_letter;     // letter position -> id
    std::vector<int> rank_of_letter;       // letter position -> index in `ordered`
    std::vector<int> letter_of_rank;       // index in `ordered` -> letter position
};

inline CrossingClassification classify_crossings(const BraidWord& w) {
    CrossingClassification out;
    std::vector<int> seen(w.strands(), 0);
    for (const auto& l : w.letters())
        out.by_letter.push_back({l.generator, ++seen[l.generator]});
    out.letter_of_rank.resize(w.size());
    std::iota(out.letter_of_rank.begin(), out.letter_of_rank.end(), 0);
    std::sort(out.letter_of_rank.begin(), out.letter_of_rank.end(),
              [&](int a, int b) { return out.by_letter[a] < out.by_letter[b]; });
    out.rank_of_letter.resize(w.size());
    for (std::size_t r = 0; r < w.size(); ++r) {
        out.ordered.push_back(out.by_letter[out.letter_of_rank[r]]);
        out.rank_of_letter[out.letter_of_rank[r]] = static_cast<int>(r);
    }
    return out;
}

/// Strand permutation of a braid; positions are 0-based here.
struct BraidPermutation {
    std::vector<int> mapping;               // start position -> end position
    std::vector<std::vector<int>> cycles;   // each cycle starts at its smallest element

    int component_count() const { return static_cast<int>(cycles.size()); }
};

inline BraidPermutation braid_permutation(const BraidWord& w) {
    // strand_at[k] = which starting strand currently occupies position k
    std::vector<int> strand_at(w.strands());
    std::iota(strand_at.begin(), strand_at.end(), 0);
    for (const auto& l : w.letters())
        std::swap(strand_at[l.generator - 1], strand_at[l.generator]);
    BraidPermutation out;
    out.mapping.resize(w.strands());
    for (int pos = 0; pos < w.strands(); ++pos) out.mapping[strand_at[pos]] = pos;
    std::vector<bool> done(w.strands(), false);
    for (int s = 0; s < w.strands(); ++s) {
        if (done[s]) continue;
        auto& cycle = out.cycles.emplace_back();
        for (int x = s; !done[x]; x = out.mapping[x]) {
            done[x] = true;
            cycle.push_back(x);
        }
    }
    return out;
}

/// Closure of a braid as a signed crossing diagram. Crossings are listed in
/// (i, alpha) order; the top arc of strand position k (1-based) is labelled
/// k, and untouched positions become free loops.
inline Diagram braid_closure(const BraidWord& w) {
    const int p = w.strands();
    std::vector<int> current(p);
    std::iota(current.begin(), current.end(), 1);
    std::vector<bool> touched(p, false);
    int next_label = p + 1;
    std::vector<Crossing> in_word_order;
    in_word_order.reserve(w.size());
    for (const auto& l : w.letters()) {
        const int i = l.generator - 1;
        const int x = current[i], y = current[i + 1];
        const int x_out = next_label++, y_out = next_label++;
        // x continues to position i+1 as x_out, y to position i as y_out.
        // Positive: x is the under-strand; negative: y is.
        Crossing c;
        c.sign = l.sign;
        c.arcs = l.sign > 0 ? std::array<int, 4>{x, y_out, x_out, y}
                            : std::array<int, 4>{y, x, y_out, x_out};
        in_word_order.push_back(c);
        current[i] = y_out;
        current[i + 1] = x_out;
        touched[i] = touched[i + 1] = true;
    }
    // Glue the bottom of every touched position back to its top arc.
    std::vector<int> rename(next_label, 0);
    std::iota(rename.begin(), rename.end(), 0);
    for (int k = 0; k < p; ++k)
        if (touched[k]) rename[current[k]] = k + 1;
    for (auto& c : in_word_order)
        for (int& a : c.arcs) a = rename[a];

    std::vector<StrandAnchor> anchors;
    int free_loops = 0;
    for (int k = 0; k < p; ++k) {
        if (touched[k])
            anchors.push_back({false, k + 1});
        else
            anchors.push_back({true, free_loops++});
    }
    const auto cls = classify_crossings(w);
    std::vector<Crossing> ordered;
    ordered.reserve(w.size());
    for (int letter : cls.letter_of_rank) ordered.push_back(in_word_order[letter]);
    return Diagram(std::move(ordered), free_loops, std::move(anchors));
}

/// One occurrence of every generator used by a positive word, in increasing
/// generator order, on the same strands.
inline BraidWord reduced_diagram(const BraidWord& w) {
    if (!w.is_positive()) throw NotPositiveError("reduction requires a positive braid word");
    std::vector<bool> used(w.strands(), false);
    for (const auto& l : w.letters()) used[l.generator] = true;
    std::vector<Letter> letters;
    for (int g = 1; g < w.strands(); ++g)
        if (used[g]) letters.push_back({g, +1});
    return BraidWord(w.strands(), std::move(letters));
}

}  // namespace khlab
