#pragma once

// A simulated teacher for bar languages, backed by a hidden bar automaton.

#include <map>
#include <optional>
#include <stdexcept>
#include <type_traits>
#include <vector>

#include "alphabet.hpp"
#include "closure.hpp"
#include "errors.hpp"
#include "learners.hpp"
#include "normal_form.hpp"
#include "random.hpp"
#include "syntax.hpp"
#include "tree_automata.hpp"
#include "word_automata.hpp"

namespace barlearn {

/// Teacher for a bar language: answers are about α-classes, and a
/// counterexample may use any names.
template <class Item, class Hypothesis>
class AlphaTeacher {
public:
    using item_type = Item;
    using hypothesis_type = Hypothesis;

    virtual ~AlphaTeacher() = default;
    virtual bool alpha_membership(const Item& x) = 0;
    /// Nothing if Lα(h) is the target language, otherwise an element of the
    /// symmetric difference.
    virtual std::optional<Item> alpha_equivalence(const Hypothesis& h) = 0;
};

using AlphaWordTeacher = AlphaTeacher<BarString, BarNfa>;
using AlphaTreeTeacher = AlphaTeacher<BarTree, BarNftaBottomUp>;

enum class AdversaryMode { Off, RenameOutsideAlphabet };

struct AdversaryConfig {
    AdversaryMode mode = AdversaryMode::Off;
    std::uint64_t seed = 0;
};

template <class Automaton>
struct HiddenTarget {
    Automaton hidden;

    const BarAlphabet& alphabet() const { return hidden.alphabet(); }
};

namespace detail {

inline BarNfa close_any(const BarNfa& a, const BarAlphabet& u) { return close_word(a, u, RestrictionPolicy::Maximal); }
inline BarNftaBottomUp close_any(const BarNftaBottomUp& a, const BarAlphabet& u) {
    return close_tree(a, u, RestrictionPolicy::Maximal);
}
inline bool literal_member(const BarNfa& a, const BarString& w) { return literal_member_word(a, w); }
inline bool literal_member(const BarNftaBottomUp& a, const BarTree& t) { return literal_member_tree(a, t); }

inline void check_same_kind(const BarNfa&, const BarNfa&) {}
inline void check_same_kind(const BarNftaBottomUp& a, const BarNftaBottomUp& b) {
    if (a.signature() != b.signature())
        throw std::invalid_argument("hypothesis and hidden automaton have different signatures");
}

/// Fresh names for levels 1..m, avoiding `used`, assigned in a seeded order.
inline std::vector<Name> level_names(std::uint32_t m, std::set<Name> used, std::uint64_t seed) {
    FreshNames fresh(std::move(used), "z");
    std::vector<Name> out;
    for (std::uint32_t i = 0; i < m; ++i)
        out.push_back(fresh.next());
    Rng rng(seed);
    for (std::size_t i = out.size(); i > 1; --i)
        std::swap(out[i - 1], out[rng.below(i)]);
    return out;
}

inline std::uint32_t max_level(const NfTree& t) {
    std::uint32_t m = t.symbol.level;
    for (const auto& c : t.children)
        m = std::max(m, max_level(c));
    return m;
}

inline BarTree rename_levels(const BarTree& t, const NfTree& nf, const std::vector<Name>& names) {
    BarTree out(t.letter, t.symbol);
    if (!nf.symbol.is_free())
        out.letter.name = names[nf.symbol.level - 1];
    for (std::size_t i = 0; i < t.children.size(); ++i)
        out.children.push_back(rename_levels(t.children[i], nf.children[i], names));
    return out;
}

} // namespace detail

/// Rebuilds c from its normal form with one fresh name per binding level.
/// The fresh names avoid U and every name of c, so free names are never
/// captured; the seed only permutes which level gets which name.
inline BarString adversarial_rename(const BarString& c, const BarAlphabet& u, std::uint64_t seed) {
    const NfString nf = nf_string(c);
    auto used = u.names();
    for (const auto& n : names_of(c))
        used.insert(n);
    const auto names = detail::level_names(bar_count(nf), std::move(used), seed);
    BarString out = c;
    for (std::size_t i = 0; i < c.size(); ++i)
        if (!nf[i].is_free())
            out[i].name = names[nf[i].level - 1];
    return out;
}

inline BarTree adversarial_rename(const BarTree& c, const BarAlphabet& u, std::uint64_t seed) {
    const NfTree nf = nf_tree(c);
    auto used = u.names();
    for (const auto& n : names_of(c))
        used.insert(n);
    return detail::rename_levels(c, nf, detail::level_names(detail::max_level(nf), std::move(used), seed));
}

/// Membership in the bar language of the hidden automaton.
template <class Automaton, class Item>
bool sim_mq(const HiddenTarget<Automaton>& target, const Item& x) {
    return detail::literal_member(detail::close_any(target.hidden, unite(target.alphabet(), letters_of(x))), x);
}

/// Membership of an ultimately periodic word in the bar language of a hidden
/// Büchi automaton.
inline bool sim_mq_up(const HiddenTarget<BarBuchi>& target, const UltPeriodicWord& x) {
    const BarAlphabet u = unite(target.alphabet(), letters_of(x));
    const BarBuchi closed = close_buchi(target.hidden, u, RestrictionPolicy::Maximal);
    const BarBuchi product = product_intersection(closed, singleton_automaton(x, u));
    const auto lasso = buchi_lasso_search(product);
    if (!lasso)
        return false;
    if (!verify_lasso(product, *lasso) || !alpha_eq_up(lasso->word(), x))
        throw std::logic_error("sim_mq_up: product lasso does not spell the query word");
    return true;
}

namespace detail {

/// A word in Lα(h) ⊕ Lα(t), given closures of both over each other's
/// alphabet.
///
/// Every word of Lα(t) is α-equivalent to a word over t's alphabet A_t, and
/// likewise for h and A_h. So if the two bar languages agree on A_t-words and
/// on A_h-words they are equal, and a literal difference between closures
/// over one of the alphabets is an α-level counterexample. Comparing over A_h
/// and A_t separately keeps the alphabets, and with them the subset
/// construction behind the comparison, smaller than closing over A_h ∪ A_t.
template <class Automaton, class CloseTarget>
auto alpha_difference(const Automaton& h, const BarAlphabet& target_alphabet, CloseTarget&& close_target) {
    auto w = shortest_in_symmetric_difference(close_any(h, h.alphabet()), close_target(h.alphabet()));
    if (!w && h.alphabet() != target_alphabet)
        w = shortest_in_symmetric_difference(close_any(h, target_alphabet), close_target(target_alphabet));
    return w;
}

} // namespace detail

/// Equivalence of Lα(h) with the hidden bar language. The returned witness
/// is least among those over h's alphabet, or failing that over the hidden
/// automaton's alphabet; the adversary then renames its bound names away
/// from both alphabets.
template <class Automaton>
auto sim_eq(const HiddenTarget<Automaton>& target, const Automaton& h, const AdversaryConfig& adv = {}) {
    detail::check_same_kind(target.hidden, h);
    auto w = detail::alpha_difference(h, target.alphabet(),
                                      [&](const BarAlphabet& a) { return detail::close_any(target.hidden, a); });
    if (w && adv.mode == AdversaryMode::RenameOutsideAlphabet)
        w = adversarial_rename(*w, unite(target.alphabet(), h.alphabet()), adv.seed);
    return w;
}

inline std::optional<UltPeriodicWord> sim_eq(const HiddenTarget<BarBuchi>&, const BarBuchi&,
                                             const AdversaryConfig& = {}) {
    throw UnsupportedKind("sim_eq: equivalence of Büchi automata is not supported");
}

/// Simulated teacher with query counting; closures of the hidden automaton
/// are cached per target alphabet.
template <class Automaton>
class SimulatedTeacher
    : public AlphaTeacher<std::conditional_t<std::is_same_v<Automaton, BarNfa>, BarString, BarTree>, Automaton> {
public:
    using Item = std::conditional_t<std::is_same_v<Automaton, BarNfa>, BarString, BarTree>;

    explicit SimulatedTeacher(Automaton hidden, AdversaryConfig adv = {}) : target_{std::move(hidden)}, adv_(adv) {}

    bool alpha_membership(const Item& x) override {
        ++stats_.membership_queries;
        return detail::literal_member(closure(unite(target_.alphabet(), letters_of(x))), x);
    }

    std::optional<Item> alpha_equivalence(const Automaton& h) override {
        ++stats_.equivalence_queries;
        detail::check_same_kind(target_.hidden, h);
        auto w = detail::alpha_difference(h, target_.alphabet(),
                                          [&](const BarAlphabet& a) -> const Automaton& { return closure(a); });
        if (w && adv_.mode == AdversaryMode::RenameOutsideAlphabet)
            w = adversarial_rename(*w, unite(target_.alphabet(), h.alphabet()), adv_.seed);
        return w;
    }

    const HiddenTarget<Automaton>& target() const { return target_; }
    const QueryStats& stats() const { return stats_; }

    /// The hidden bar language restricted to u, as a closed automaton.
    const Automaton& closure(const BarAlphabet& u) {
        auto it = cache_.find(u);
        if (it == cache_.end())
            it = cache_.emplace(u, detail::close_any(target_.hidden, u)).first;
        return it->second;
    }

private:
    HiddenTarget<Automaton> target_;
    AdversaryConfig adv_;
    QueryStats stats_;
    std::map<BarAlphabet, Automaton> cache_;
};

using SimulatedWordTeacher = SimulatedTeacher<BarNfa>;
using SimulatedTreeTeacher = SimulatedTeacher<BarNftaBottomUp>;

} // namespace barlearn
