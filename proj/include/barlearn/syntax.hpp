#pragma once

// Names, letters, bar strings, ultimately periodic words, bar trees and
// finite permutations of names.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace barlearn {

/// A name drawn from the countable universe of atoms. Names are ordered by
/// their identifier string.
class Name {
public:
    Name() = default;
    explicit Name(std::string id) : id_(std::move(id)) {}

    const std::string& str() const noexcept { return id_; }

    friend auto operator<=>(const Name&, const Name&) = default;
    friend bool operator==(const Name&, const Name&) = default;

private:
    std::string id_;
};

/// Deterministic enumeration prefix1, prefix2, ... skipping every name in
/// `used`.
class FreshNames {
public:
    explicit FreshNames(std::set<Name> used, std::string prefix = "n")
        : used_(std::move(used)), prefix_(std::move(prefix)) {}

    Name next() {
        for (;;) {
            Name candidate(prefix_ + std::to_string(++counter_));
            if (used_.insert(candidate).second)
                return candidate;
        }
    }

private:
    std::set<Name> used_;
    std::string prefix_;
    std::uint64_t counter_ = 0;
};

enum class LetterKind : std::uint8_t { Plain = 0, Bar = 1 };

/// A plain name `a` or a bar name `|a`. Ordered by name, then Plain < Bar.
struct Letter {
    Name name;
    LetterKind kind = LetterKind::Plain;

    static Letter plain(Name n) { return {std::move(n), LetterKind::Plain}; }
    static Letter bar(Name n) { return {std::move(n), LetterKind::Bar}; }
    static Letter plain(std::string n) { return plain(Name(std::move(n))); }
    static Letter bar(std::string n) { return bar(Name(std::move(n))); }

    bool is_bar() const noexcept { return kind == LetterKind::Bar; }
    bool is_plain() const noexcept { return kind == LetterKind::Plain; }

    friend auto operator<=>(const Letter&, const Letter&) = default;
    friend bool operator==(const Letter&, const Letter&) = default;
};

using BarString = std::vector<Letter>;

/// The infinite word stem · loop · loop · ...
/// The representation is not unique: (ε, "a") and ("a", "a a") denote the
/// same word.
struct UltPeriodicWord {
    BarString stem;
    BarString loop;

    UltPeriodicWord() = default;
    UltPeriodicWord(BarString s, BarString l) : stem(std::move(s)), loop(std::move(l)) {
        if (loop.empty())
            throw std::invalid_argument("ultimately periodic word needs a nonempty loop");
    }

    /// Letter at position i of the infinite word.
    const Letter& at(std::size_t i) const {
        return i < stem.size() ? stem[i] : loop[(i - stem.size()) % loop.size()];
    }

    /// First n letters of the infinite word.
    BarString prefix(std::size_t n) const {
        BarString out;
        out.reserve(n);
        for (std::size_t i = 0; i < n; ++i)
            out.push_back(at(i));
        return out;
    }

    friend bool operator==(const UltPeriodicWord&, const UltPeriodicWord&) = default;
};

/// Ranked alphabet of tree symbols.
class Signature {
public:
    Signature() = default;
    Signature(std::initializer_list<std::pair<std::string, unsigned>> symbols) {
        for (const auto& [s, a] : symbols)
            add(s, a);
    }

    void add(const std::string& symbol, unsigned arity) {
        auto [it, inserted] = arity_.emplace(symbol, arity);
        if (!inserted && it->second != arity)
            throw std::invalid_argument("symbol '" + symbol + "' declared with two arities");
    }

    bool contains(const std::string& symbol) const { return arity_.count(symbol) != 0; }

    unsigned arity(const std::string& symbol) const {
        auto it = arity_.find(symbol);
        if (it == arity_.end())
            throw std::invalid_argument("unknown symbol '" + symbol + "'");
        return it->second;
    }

    const std::map<std::string, unsigned>& symbols() const noexcept { return arity_; }
    std::size_t size() const noexcept { return arity_.size(); }

    bool has_constant() const {
        for (const auto& [s, a] : arity_)
            if (a == 0)
                return true;
        return false;
    }

    friend bool operator==(const Signature&, const Signature&) = default;

private:
    std::map<std::string, unsigned> arity_;
};

/// A tree over letters × symbols: `letter.symbol(children...)`.
struct BarTree {
    Letter letter;
    std::string symbol;
    std::vector<BarTree> children;

    BarTree() = default;
    BarTree(Letter l, std::string sym, std::vector<BarTree> kids = {})
        : letter(std::move(l)), symbol(std::move(sym)), children(std::move(kids)) {}

    std::size_t size() const {
        std::size_t n = 1;
        for (const auto& c : children)
            n += c.size();
        return n;
    }

    std::size_t depth() const {
        std::size_t d = 0;
        for (const auto& c : children)
            d = std::max(d, c.depth());
        return d + 1;
    }

    friend bool operator==(const BarTree&, const BarTree&) = default;
};

namespace detail {

inline void preorder(const BarTree& t, std::vector<std::pair<const Letter*, const std::string*>>& out) {
    out.emplace_back(&t.letter, &t.symbol);
    for (const auto& c : t.children)
        preorder(c, out);
}

} // namespace detail

/// Tree order: size first, then the preorder sequence of (letter, symbol).
inline bool tree_less(const BarTree& a, const BarTree& b) {
    const auto sa = a.size(), sb = b.size();
    if (sa != sb)
        return sa < sb;
    std::vector<std::pair<const Letter*, const std::string*>> pa, pb;
    detail::preorder(a, pa);
    detail::preorder(b, pb);
    for (std::size_t i = 0; i < pa.size(); ++i) {
        if (*pa[i].first != *pb[i].first)
            return *pa[i].first < *pb[i].first;
        if (*pa[i].second != *pb[i].second)
            return *pa[i].second < *pb[i].second;
    }
    return false;
}

struct TreeLess {
    bool operator()(const BarTree& a, const BarTree& b) const { return tree_less(a, b); }
};

/// Word order used for counterexamples and table rows: length, then
/// lexicographic in the letter order.
inline bool shortlex_less(const BarString& a, const BarString& b) {
    if (a.size() != b.size())
        return a.size() < b.size();
    return a < b;
}

struct ShortlexLess {
    bool operator()(const BarString& a, const BarString& b) const { return shortlex_less(a, b); }
};

/// Checks that the tree only uses symbols of `sig` with matching arity.
inline bool conforms(const BarTree& t, const Signature& sig) {
    if (!sig.contains(t.symbol) || sig.arity(t.symbol) != t.children.size())
        return false;
    for (const auto& c : t.children)
        if (!conforms(c, sig))
            return false;
    return true;
}

/// A finite permutation of names; identity outside its domain.
class Permutation {
public:
    Permutation() = default;

    /// Builds a permutation from an explicit map; the map must be a bijection
    /// of its domain onto itself.
    explicit Permutation(std::map<Name, Name> mapping) : map_(std::move(mapping)) {
        std::set<Name> image;
        for (const auto& [from, to] : map_) {
            image.insert(to);
            if (!map_.count(to))
                throw std::invalid_argument("permutation image leaves its domain: " + to.str());
        }
        if (image.size() != map_.size())
            throw std::invalid_argument("permutation is not injective");
        normalize();
    }

    static Permutation transposition(const Name& a, const Name& b) {
        if (a == b)
            return {};
        return Permutation(std::map<Name, Name>{{a, b}, {b, a}});
    }

    Name operator()(const Name& n) const {
        auto it = map_.find(n);
        return it == map_.end() ? n : it->second;
    }

    Letter operator()(const Letter& l) const { return {(*this)(l.name), l.kind}; }

    /// (this ∘ other)(n) = this(other(n)).
    Permutation compose(const Permutation& other) const {
        std::map<Name, Name> m;
        std::set<Name> dom;
        for (const auto& [k, v] : map_)
            dom.insert(k);
        for (const auto& [k, v] : other.map_)
            dom.insert(k);
        for (const auto& n : dom)
            m.emplace(n, (*this)(other(n)));
        return Permutation(std::move(m));
    }

    Permutation inverse() const {
        std::map<Name, Name> m;
        for (const auto& [k, v] : map_)
            m.emplace(v, k);
        return Permutation(std::move(m));
    }

    const std::map<Name, Name>& mapping() const noexcept { return map_; }

    friend bool operator==(const Permutation&, const Permutation&) = default;

private:
    void normalize() {
        for (auto it = map_.begin(); it != map_.end();)
            it = it->first == it->second ? map_.erase(it) : std::next(it);
    }

    std::map<Name, Name> map_;
};

inline BarString apply_perm(const Permutation& p, const BarString& w) {
    BarString out;
    out.reserve(w.size());
    for (const auto& l : w)
        out.push_back(p(l));
    return out;
}

inline BarTree apply_perm(const Permutation& p, const BarTree& t) {
    BarTree out(p(t.letter), t.symbol);
    out.children.reserve(t.children.size());
    for (const auto& c : t.children)
        out.children.push_back(apply_perm(p, c));
    return out;
}

inline UltPeriodicWord apply_perm(const Permutation& p, const UltPeriodicWord& x) {
    return {apply_perm(p, x.stem), apply_perm(p, x.loop)};
}

/// Erases all bars.
inline std::vector<Name> ub(const BarString& w) {
    std::vector<Name> out;
    out.reserve(w.size());
    for (const auto& l : w)
        out.push_back(l.name);
    return out;
}

/// Names with a plain occurrence before the first bar on the same name.
inline std::set<Name> free_names(const BarString& w) {
    std::set<Name> bound, free;
    for (const auto& l : w) {
        if (l.is_bar())
            bound.insert(l.name);
        else if (!bound.count(l.name))
            free.insert(l.name);
    }
    return free;
}

inline std::set<Name> free_names(const BarTree& t) {
    std::set<Name> out;
    for (const auto& c : t.children) {
        auto sub = free_names(c);
        out.insert(sub.begin(), sub.end());
    }
    if (t.letter.is_bar())
        out.erase(t.letter.name);
    else
        out.insert(t.letter.name);
    return out;
}

inline bool is_closed(const BarString& w) { return free_names(w).empty(); }

/// Bar names pairwise distinct and none of them free.
inline bool is_clean(const BarString& w) {
    const auto fn = free_names(w);
    std::set<Name> barred;
    for (const auto& l : w) {
        if (!l.is_bar())
            continue;
        if (!barred.insert(l.name).second || fn.count(l.name))
            return false;
    }
    return true;
}

/// Tree variant: bar names pairwise distinct across the whole tree and none
/// of them free.
inline bool is_clean(const BarTree& t) {
    const auto fn = free_names(t);
    std::set<Name> barred;
    bool ok = true;
    std::function<void(const BarTree&)> walk = [&](const BarTree& n) {
        if (n.letter.is_bar() && (!barred.insert(n.letter.name).second || fn.count(n.letter.name)))
            ok = false;
        for (const auto& c : n.children)
            walk(c);
    };
    walk(t);
    return ok;
}

inline std::set<Name> names_of(const BarString& w) {
    std::set<Name> out;
    for (const auto& l : w)
        out.insert(l.name);
    return out;
}

inline void collect_letters(const BarTree& t, std::set<Letter>& out) {
    out.insert(t.letter);
    for (const auto& c : t.children)
        collect_letters(c, out);
}

inline std::set<Name> names_of(const BarTree& t) {
    std::set<Letter> letters;
    collect_letters(t, letters);
    std::set<Name> out;
    for (const auto& l : letters)
        out.insert(l.name);
    return out;
}

inline BarString concat(BarString a, const BarString& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

} // namespace barlearn

template <>
struct std::hash<barlearn::Name> {
    std::size_t operator()(const barlearn::Name& n) const noexcept { return std::hash<std::string>{}(n.str()); }
};
