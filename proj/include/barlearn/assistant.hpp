#pragma once

// Learning bar languages with a classical learner over a finite alphabet.
// The assistant sits between the learner and an α-level teacher: queries go
// through unchanged, counterexamples are translated into words over the
// learning alphabet.

#include <algorithm>
#include <chrono>
#include <functional>
#include <optional>
#include <set>
#include <stdexcept>
#include <variant>
#include <vector>

#include "alphabet.hpp"
#include "closure.hpp"
#include "errors.hpp"
#include "learners.hpp"
#include "normal_form.hpp"
#include "teacher.hpp"

namespace barlearn {

/// No word over the learning alphabet is α-equivalent to the counterexample.
class AlphabetTooSmall : public std::runtime_error {
public:
    explicit AlphabetTooSmall(std::variant<BarString, BarTree> cex)
        : std::runtime_error("counterexample has no representative over the learning alphabet"),
          counterexample_(std::move(cex)) {}

    const std::variant<BarString, BarTree>& counterexample() const noexcept { return counterexample_; }

private:
    std::variant<BarString, BarTree> counterexample_;
};

namespace detail {

inline void add_symbols(const BarTree& t, Signature& sig) {
    sig.add(t.symbol, static_cast<unsigned>(t.children.size()));
    for (const auto& c : t.children)
        add_symbols(c, sig);
}

} // namespace detail

/// The symbols of t with the arities they are used at.
inline Signature signature_of(const BarTree& t) {
    Signature sig;
    detail::add_symbols(t, sig);
    return sig;
}

// ---------------------------------------------------------------------------
// Step 1: a representative over the learning alphabet

/// Least word over a0 (shortlex, so of the same length) α-equivalent to w.
inline std::optional<BarString> representative_word(const BarString& w, const BarAlphabet& a0) {
    const auto single = singleton_automaton(w, unite(a0, letters_of(w)));
    auto r = shortest_accepted(close_word(single, a0, RestrictionPolicy::Maximal));
    if (r && !alpha_eq_string(*r, w))
        throw std::logic_error("representative_word: result is not α-equivalent to the input");
    return r;
}

/// Least tree over a0 in the tree order α-equivalent to t.
inline std::optional<BarTree> representative_tree(const BarTree& t, const BarAlphabet& a0) {
    const auto single = singleton_automaton(t, unite(a0, letters_of(t)), signature_of(t));
    auto r = shortest_accepted_tree(close_tree(single, a0, RestrictionPolicy::Maximal));
    if (r && !alpha_eq_tree(*r, t))
        throw std::logic_error("representative_tree: result is not α-equivalent to the input");
    return r;
}

inline std::optional<UltPeriodicWord> representative_up(const UltPeriodicWord& x, const BarAlphabet& a0) {
    const auto single = singleton_automaton(x, unite(a0, letters_of(x)));
    const BarBuchi closed = close_buchi(single, a0, RestrictionPolicy::Maximal);
    const auto lasso = buchi_lasso_search(closed);
    if (!lasso)
        return std::nullopt;
    UltPeriodicWord r = lasso->word();
    if (!verify_lasso(closed, *lasso) || !alpha_eq_up(r, x))
        throw std::logic_error("representative_up: lasso is not α-equivalent to the input");
    return r;
}

inline std::optional<BarString> representative(const BarString& w, const BarAlphabet& a0) {
    return representative_word(w, a0);
}
inline std::optional<BarTree> representative(const BarTree& t, const BarAlphabet& a0) {
    return representative_tree(t, a0);
}
inline std::optional<UltPeriodicWord> representative(const UltPeriodicWord& x, const BarAlphabet& a0) {
    return representative_up(x, a0);
}

// ---------------------------------------------------------------------------
// Step 2: an α-equivalent word the hypothesis accepts literally

inline std::optional<BarString> alpha_witness_in_hypothesis(const BarNfa& h, const BarString& w) {
    const auto closed = close_word(singleton_automaton(w, h.alphabet()), h.alphabet(), RestrictionPolicy::Maximal);
    return shortest_accepted(product_intersection(closed, h));
}

inline std::optional<BarTree> alpha_witness_in_hypothesis(const BarNftaBottomUp& h, const BarTree& t) {
    const auto closed = close_tree(singleton_automaton(t, h.alphabet(), h.signature()), h.alphabet(),
                                   RestrictionPolicy::Maximal);
    return shortest_accepted_tree(product_intersection(closed, h));
}

inline std::optional<UltPeriodicWord> alpha_witness_in_hypothesis(const BarBuchi& h, const UltPeriodicWord& x) {
    const auto closed = close_buchi(singleton_automaton(x, h.alphabet()), h.alphabet(), RestrictionPolicy::Maximal);
    const BarBuchi product = product_intersection(closed, h);
    const auto lasso = buchi_lasso_search(product);
    if (!lasso)
        return std::nullopt;
    UltPeriodicWord r = lasso->word();
    if (!verify_lasso(product, *lasso) || !alpha_eq_up(r, x))
        throw std::logic_error("alpha_witness_in_hypothesis: lasso is not α-equivalent to the input");
    return r;
}

/// Turns an α-level counterexample into one over a0 for the internal
/// learner. If the hypothesis accepts some α-variant, that variant is
/// wrongly accepted; otherwise the representative is wrongly rejected.
template <class Hypothesis, class Item>
Item ta_process_counterexample(const Hypothesis& h, const Item& cex, const BarAlphabet& a0) {
    auto w = representative(cex, a0);
    if (!w)
        throw AlphabetTooSmall(cex);
    if (auto in_h = alpha_witness_in_hypothesis(h, *w))
        return *in_h;
    return *w;
}

// ---------------------------------------------------------------------------
// Sessions

struct TaConfig {
    BarAlphabet initial_alphabet;
    /// 0 means unlimited.
    std::size_t max_counterexample_size = 0;
    std::size_t max_restarts = 32;
    std::uint64_t seed = 0;
};

template <class Hypothesis>
struct SessionResult {
    Hypothesis automaton;
    BarAlphabet alphabet;
    QueryStats stats;
    /// Learning alphabets in the order they were tried.
    std::vector<BarAlphabet> alphabets;
    double wall_time_ms = 0;
};

namespace detail {

inline std::size_t item_size(const BarString& w) { return w.size(); }
inline std::size_t item_size(const BarTree& t) { return t.size(); }

/// The internal learner's view of the α-teacher.
template <class Item, class Hypothesis>
class AssistedTeacher : public Teacher<Item, Hypothesis> {
public:
    AssistedTeacher(AlphaTeacher<Item, Hypothesis>& teacher, const BarAlphabet& a0, const TaConfig& config,
                    QueryStats& forwarded)
        : teacher_(teacher), a0_(a0), config_(config), forwarded_(forwarded) {}

    bool membership(const Item& x) override {
        ++forwarded_.membership_queries;
        return teacher_.alpha_membership(x);
    }

    std::optional<Item> equivalence(const Hypothesis& h) override {
        ++forwarded_.equivalence_queries;
        auto cex = teacher_.alpha_equivalence(h);
        if (!cex)
            return std::nullopt;
        if (config_.max_counterexample_size && item_size(*cex) > config_.max_counterexample_size)
            throw LimitExceeded("counterexample larger than the configured maximum");
        return ta_process_counterexample(h, *cex, a0_);
    }

private:
    AlphaTeacher<Item, Hypothesis>& teacher_;
    const BarAlphabet& a0_;
    const TaConfig& config_;
    QueryStats& forwarded_;
};

template <class Item, class Hypothesis>
LearnResult<Hypothesis> run_session(AlphaTeacher<Item, Hypothesis>& teacher, const BarAlphabet& a0,
                                    Learner<Item, Hypothesis>& learner, const TaConfig& config,
                                    QueryStats& forwarded) {
    AssistedTeacher<Item, Hypothesis> assisted(teacher, a0, config, forwarded);
    auto r = learner.learn(assisted, a0);
    if (r.stats.membership_queries != forwarded.membership_queries ||
        r.stats.equivalence_queries != forwarded.equivalence_queries)
        throw std::logic_error("learner statistics differ from the forwarded queries");
    return r;
}

inline double elapsed_ms(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

} // namespace detail

/// Learns the teacher's bar language with the given learner over the fixed
/// alphabet a0. Throws AlphabetTooSmall if a counterexample cannot be
/// written over a0.
template <class Item, class Hypothesis>
SessionResult<Hypothesis> learn_bar_language(AlphaTeacher<Item, Hypothesis>& teacher, const BarAlphabet& a0,
                                             Learner<Item, Hypothesis>& learner, const TaConfig& config = {}) {
    const auto start = std::chrono::steady_clock::now();
    QueryStats forwarded;
    auto r = detail::run_session(teacher, a0, learner, config, forwarded);
    return {std::move(r.automaton), a0, forwarded, {a0}, detail::elapsed_ms(start)};
}

namespace detail {

inline std::uint32_t binding_levels(const BarString& w) { return bar_count(nf_string(w)); }
inline std::uint32_t binding_levels(const BarTree& t) { return max_level(nf_tree(t)); }

/// Subsets of `pool` with exactly k elements, as index lists in
/// lexicographic order.
inline void for_subsets(std::size_t n, std::size_t k, const std::function<void(const std::vector<std::size_t>&)>& f) {
    std::vector<std::size_t> pick(k);
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t from, std::size_t i) {
        if (i == k) {
            f(pick);
            return;
        }
        for (std::size_t j = from; j + (k - i) <= n; ++j) {
            pick[i] = j;
            rec(j + 1, i + 1);
        }
    };
    rec(0, 0);
}

} // namespace detail

/// Smallest superset of a0 over which the counterexample has a
/// representative. Free names must be added as plain letters. Every other
/// name is either one already mentioned (by a0 or free in the input) or a
/// fresh one; fresh names are interchangeable, so a candidate only needs to
/// fix how many fresh names come with both letters and how many with only a
/// bar (a fresh plain letter without its bar is never used). Candidates are
/// tried by number of added letters, ties in letter order.
template <class Item>
BarAlphabet minimal_extension(const Item& cex, const BarAlphabet& a0, std::size_t max_pool = 20) {
    if (representative(cex, a0))
        return a0;
    std::vector<Letter> forced;
    std::set<Name> known = a0.names();
    for (const auto& n : free_names(cex)) {
        known.insert(n);
        if (!a0.contains(Letter::plain(n)))
            forced.push_back(Letter::plain(n));
    }
    std::vector<Letter> pool;
    for (const auto& n : known)
        for (const auto& l : {Letter::plain(n), Letter::bar(n)})
            if (!a0.contains(l) && std::find(forced.begin(), forced.end(), l) == forced.end())
                pool.push_back(l);
    if (pool.size() > max_pool)
        throw LimitExceeded("minimal_extension: too many candidate letters");
    std::set<Name> used = known;
    for (const auto& n : names_of(cex))
        used.insert(n);
    FreshNames gen(used);
    std::vector<Name> fresh;
    for (std::uint32_t i = 0; i < detail::binding_levels(cex); ++i)
        fresh.push_back(gen.next());

    const BarAlphabet base = unite(a0, BarAlphabet(forced));
    const std::size_t m = fresh.size();
    for (std::size_t k = 0; k <= pool.size() + 2 * m; ++k) {
        std::vector<BarAlphabet> candidates;
        for (std::size_t j = 0; j <= std::min(k, pool.size()); ++j) {
            const std::size_t rest = k - j;
            for (std::size_t p = 0; 2 * p <= rest && p <= m; ++p) {
                const std::size_t q = rest - 2 * p;
                if (p + q > m)
                    continue;
                std::vector<Letter> added;
                for (std::size_t i = 0; i < p + q; ++i) {
                    added.push_back(Letter::bar(fresh[i]));
                    if (i < p)
                        added.push_back(Letter::plain(fresh[i]));
                }
                detail::for_subsets(pool.size(), j, [&](const std::vector<std::size_t>& pick) {
                    auto letters = added;
                    for (auto i : pick)
                        letters.push_back(pool[i]);
                    candidates.push_back(unite(base, BarAlphabet(letters)));
                });
            }
        }
        std::sort(candidates.begin(), candidates.end(), [](const BarAlphabet& x, const BarAlphabet& y) {
            return x.letters() < y.letters();
        });
        for (const auto& c : candidates)
            if (representative(cex, c))
                return c;
    }
    throw std::logic_error("minimal_extension: no candidate alphabet is large enough");
}

/// Smallest superset of a0 within a0 ∪ letters(x) over which x has a
/// representative; free names are always included.
inline BarAlphabet minimal_extension_up(const UltPeriodicWord& x, const BarAlphabet& a0) {
    if (representative_up(x, a0))
        return a0;
    std::vector<Letter> forced;
    for (const auto& n : free_names(concat(x.stem, x.loop)))
        forced.push_back(Letter::plain(n));
    const BarAlphabet base = unite(a0, BarAlphabet(forced));
    std::vector<Letter> pool;
    for (const auto& l : letters_of(x))
        if (!base.contains(l))
            pool.push_back(l);
    for (std::size_t k = 0; k <= pool.size(); ++k) {
        std::optional<BarAlphabet> found;
        detail::for_subsets(pool.size(), k, [&](const std::vector<std::size_t>& pick) {
            if (found)
                return;
            std::vector<Letter> letters;
            for (auto i : pick)
                letters.push_back(pool[i]);
            const auto c = unite(base, BarAlphabet(letters));
            if (representative_up(x, c))
                found = c;
        });
        if (found)
            return *found;
    }
    throw std::logic_error("minimal_extension_up: x has no representative over its own letters");
}

/// Learns without knowing a suitable alphabet: starts from the configured
/// initial alphabet (empty by default) and restarts with a minimally extended
/// alphabet whenever a counterexample cannot be represented.
template <class Item, class Hypothesis>
SessionResult<Hypothesis> learn_unknown_alphabet(AlphaTeacher<Item, Hypothesis>& teacher,
                                                 Learner<Item, Hypothesis>& learner, const TaConfig& config = {}) {
    const auto start = std::chrono::steady_clock::now();
    SessionResult<Hypothesis> out;
    BarAlphabet a = config.initial_alphabet;
    for (;;) {
        out.alphabets.push_back(a);
        QueryStats forwarded;
        try {
            auto r = detail::run_session(teacher, a, learner, config, forwarded);
            out.stats += forwarded;
            out.automaton = std::move(r.automaton);
            out.alphabet = a;
            out.wall_time_ms = detail::elapsed_ms(start);
            return out;
        } catch (const AlphabetTooSmall& e) {
            out.stats += forwarded;
            if (++out.stats.restarts > config.max_restarts)
                throw LimitExceeded("restart limit reached");
            const auto& cex = std::get<Item>(e.counterexample());
            BarAlphabet next = minimal_extension(cex, a);
            if (next.size() <= a.size())
                throw std::logic_error("alphabet extension did not grow the alphabet");
            a = std::move(next);
        }
    }
}

} // namespace barlearn
