#pragma once

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <set>
#include <vector>

#include "syntax.hpp"

namespace barlearn {

/// Finite set of letters, kept sorted in the letter order. Automata refer to
/// letters by their index in this order.
class BarAlphabet {
public:
    BarAlphabet() = default;
    BarAlphabet(std::initializer_list<Letter> letters) : BarAlphabet(std::vector<Letter>(letters)) {}
    explicit BarAlphabet(std::vector<Letter> letters) : letters_(std::move(letters)) {
        std::sort(letters_.begin(), letters_.end());
        letters_.erase(std::unique(letters_.begin(), letters_.end()), letters_.end());
    }
    explicit BarAlphabet(const std::set<Letter>& letters) : letters_(letters.begin(), letters.end()) {}

    std::size_t size() const noexcept { return letters_.size(); }
    bool empty() const noexcept { return letters_.empty(); }
    const std::vector<Letter>& letters() const noexcept { return letters_; }
    const Letter& operator[](std::size_t i) const { return letters_[i]; }
    auto begin() const { return letters_.begin(); }
    auto end() const { return letters_.end(); }

    std::optional<std::uint32_t> index_of(const Letter& l) const {
        auto it = std::lower_bound(letters_.begin(), letters_.end(), l);
        if (it == letters_.end() || *it != l)
            return std::nullopt;
        return static_cast<std::uint32_t>(it - letters_.begin());
    }
    bool contains(const Letter& l) const { return index_of(l).has_value(); }

    /// Names that occur as plain letters, in name order.
    std::vector<Name> plains() const {
        std::vector<Name> out;
        for (const auto& l : letters_)
            if (l.is_plain())
                out.push_back(l.name);
        return out;
    }

    std::vector<Name> bars() const {
        std::vector<Name> out;
        for (const auto& l : letters_)
            if (l.is_bar())
                out.push_back(l.name);
        return out;
    }

    std::set<Name> names() const {
        std::set<Name> out;
        for (const auto& l : letters_)
            out.insert(l.name);
        return out;
    }

    bool includes(const BarAlphabet& other) const {
        return std::includes(letters_.begin(), letters_.end(), other.letters_.begin(), other.letters_.end());
    }

    BarAlphabet with(const Letter& l) const {
        auto v = letters_;
        v.push_back(l);
        return BarAlphabet(std::move(v));
    }

    friend BarAlphabet unite(const BarAlphabet& a, const BarAlphabet& b) {
        std::vector<Letter> v;
        std::set_union(a.letters_.begin(), a.letters_.end(), b.letters_.begin(), b.letters_.end(),
                       std::back_inserter(v));
        return BarAlphabet(std::move(v));
    }

    friend bool operator==(const BarAlphabet&, const BarAlphabet&) = default;
    friend auto operator<=>(const BarAlphabet&, const BarAlphabet&) = default;

private:
    std::vector<Letter> letters_;
};

inline BarAlphabet letters_of(const BarString& w) { return BarAlphabet(std::vector<Letter>(w.begin(), w.end())); }

inline BarAlphabet letters_of(const UltPeriodicWord& x) { return unite(letters_of(x.stem), letters_of(x.loop)); }

inline BarAlphabet letters_of(const BarTree& t) {
    std::set<Letter> s;
    collect_letters(t, s);
    return BarAlphabet(s);
}

inline bool is_over(const BarString& w, const BarAlphabet& a) {
    return std::all_of(w.begin(), w.end(), [&](const Letter& l) { return a.contains(l); });
}

inline bool is_over(const BarTree& t, const BarAlphabet& a) { return a.includes(letters_of(t)); }

inline bool is_over(const UltPeriodicWord& x, const BarAlphabet& a) { return is_over(x.stem, a) && is_over(x.loop, a); }

} // namespace barlearn
