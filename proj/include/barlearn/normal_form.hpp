#pragma once

// De Bruijn level normal forms and α-equivalence for bar strings,
// ultimately periodic words and bar trees.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "syntax.hpp"

namespace barlearn {

/// Either a free name or a binding level (levels start at 1).
struct NfSymbol {
    std::uint32_t level = 0; // 0 means free
    Name name;               // set only when free

    static NfSymbol free(Name n) { return {0, std::move(n)}; }
    static NfSymbol bound(std::uint32_t level) { return {level, Name()}; }

    bool is_free() const noexcept { return level == 0; }

    friend auto operator<=>(const NfSymbol&, const NfSymbol&) = default;
    friend bool operator==(const NfSymbol&, const NfSymbol&) = default;
};

using NfString = std::vector<NfSymbol>;

struct NfTree {
    NfSymbol symbol;
    std::string fsym;
    std::vector<NfTree> children;

    friend bool operator==(const NfTree&, const NfTree&) = default;
};

/// Incremental normal-form computation: feed letters left to right.
/// A bar is the (k+1)-th level when k bars precede it; a plain name refers to
/// the level of the most recent bar on it, or stays free.
class NfBuilder {
public:
    NfSymbol push(const Letter& l) {
        if (l.is_bar()) {
            ++bars_;
            auto [it, inserted] = binder_.try_emplace(l.name, bars_);
            if (!inserted) {
                saved_.emplace_back(l.name, it->second);
                it->second = bars_;
            } else {
                saved_.emplace_back(l.name, 0);
            }
            return NfSymbol::bound(bars_);
        }
        saved_.emplace_back(Name(), 0); // placeholder so pop() stays symmetric
        auto it = binder_.find(l.name);
        return it == binder_.end() ? NfSymbol::free(l.name) : NfSymbol::bound(it->second);
    }

    /// Undo the last push (used for root-to-node paths in trees).
    void pop(const Letter& l) {
        auto [name, prev] = std::move(saved_.back());
        saved_.pop_back();
        if (!l.is_bar())
            return;
        --bars_;
        if (prev == 0)
            binder_.erase(l.name);
        else
            binder_[l.name] = prev;
    }

    std::uint32_t bars() const noexcept { return bars_; }

private:
    std::uint32_t bars_ = 0;
    std::map<Name, std::uint32_t> binder_;
    std::vector<std::pair<Name, std::uint32_t>> saved_;
};

inline NfString nf_string(const BarString& w) {
    NfString out;
    out.reserve(w.size());
    std::uint32_t bars = 0;
    std::map<Name, std::uint32_t> binder;
    for (const auto& l : w) {
        if (l.is_bar()) {
            binder[l.name] = ++bars;
            out.push_back(NfSymbol::bound(bars));
        } else if (auto it = binder.find(l.name); it != binder.end()) {
            out.push_back(NfSymbol::bound(it->second));
        } else {
            out.push_back(NfSymbol::free(l.name));
        }
    }
    return out;
}

inline bool alpha_eq_string(const BarString& v, const BarString& w) {
    return v.size() == w.size() && nf_string(v) == nf_string(w);
}

namespace detail {

/// Moves the first d letters of the loop into the stem; the denoted infinite
/// word is unchanged.
inline UltPeriodicWord unroll_stem(const UltPeriodicWord& x, std::size_t d) {
    BarString stem = x.stem;
    for (std::size_t i = 0; i < d; ++i)
        stem.push_back(x.loop[i % x.loop.size()]);
    BarString loop;
    const std::size_t shift = d % x.loop.size();
    loop.insert(loop.end(), x.loop.begin() + static_cast<std::ptrdiff_t>(shift), x.loop.end());
    loop.insert(loop.end(), x.loop.begin(), x.loop.begin() + static_cast<std::ptrdiff_t>(shift));
    return {std::move(stem), std::move(loop)};
}

} // namespace detail

/// α-equivalence of u1·v1^ω and u2·v2^ω: after equalizing stem lengths,
/// compares the prefixes u1·v1^(2|v2|) and u2·v2^(2|v1|).
inline bool alpha_eq_up(const UltPeriodicWord& x, const UltPeriodicWord& y) {
    UltPeriodicWord a = x, b = y;
    if (a.stem.size() < b.stem.size())
        a = detail::unroll_stem(a, b.stem.size() - a.stem.size());
    else if (b.stem.size() < a.stem.size())
        b = detail::unroll_stem(b, a.stem.size() - b.stem.size());
    const std::size_t n = a.stem.size() + 2 * a.loop.size() * b.loop.size();
    return nf_string(a.prefix(n)) == nf_string(b.prefix(n));
}

namespace detail {

inline NfTree nf_tree_rec(const BarTree& t, NfBuilder& nb) {
    NfTree out{nb.push(t.letter), t.symbol, {}};
    out.children.reserve(t.children.size());
    for (const auto& c : t.children)
        out.children.push_back(nf_tree_rec(c, nb));
    nb.pop(t.letter);
    return out;
}

} // namespace detail

/// Each node carries the last symbol of the normal form of its root path.
inline NfTree nf_tree(const BarTree& t) {
    NfBuilder nb;
    return detail::nf_tree_rec(t, nb);
}

inline bool alpha_eq_tree(const BarTree& s, const BarTree& t) { return nf_tree(s) == nf_tree(t); }

/// Test oracle following the generative definition of α-equivalence:
/// plain heads must agree with equivalent tails; bar heads |a, |b require
/// (a c)·tail ≡ (b c)·tail' for a fresh c. Exponential; small inputs only.
inline bool brute_alpha_eq(const BarString& v, const BarString& w, std::size_t max_length = 12) {
    if (v.size() > max_length || w.size() > max_length)
        throw std::length_error("brute_alpha_eq: input longer than " + std::to_string(max_length));
    if (v.size() != w.size())
        return false;
    if (v.empty())
        return true;
    const Letter& x = v.front();
    const Letter& y = w.front();
    if (x.kind != y.kind)
        return false;
    BarString tv(v.begin() + 1, v.end()), tw(w.begin() + 1, w.end());
    if (x.is_plain())
        return x.name == y.name && brute_alpha_eq(tv, tw, max_length);
    auto used = names_of(v);
    for (const auto& n : names_of(w))
        used.insert(n);
    const Name c = FreshNames(used).next();
    return brute_alpha_eq(apply_perm(Permutation::transposition(x.name, c), tv),
                          apply_perm(Permutation::transposition(y.name, c), tw), max_length);
}

/// Free names read off a normal form.
inline std::set<Name> free_names(const NfString& nf) {
    std::set<Name> out;
    for (const auto& s : nf)
        if (s.is_free())
            out.insert(s.name);
    return out;
}

/// Number of bar positions (the highest level) in a normal form.
inline std::uint32_t bar_count(const NfString& nf) {
    std::uint32_t m = 0;
    for (const auto& s : nf)
        m = std::max(m, s.level);
    return m;
}

} // namespace barlearn
