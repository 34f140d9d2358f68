#pragma once

// Register closure: from a bar automaton over A0 and a finite target alphabet,
// builds an automaton whose literal language is the set of target words
// (trees) α-equivalent to some accepted word (tree).
//
// Registers 1..k stand for the plain names a1 < ... < ak of A0 and hold the
// name currently playing that role, ranging over plains(A0) and the names of
// the target alphabet.

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <vector>

#include "alphabet.hpp"
#include "errors.hpp"
#include "tree_automata.hpp"
#include "word_automata.hpp"

namespace barlearn {

/// Partial injective map from register slots to names; an empty optional
/// marks an unassigned slot.
struct RegisterAssignment {
    std::vector<std::optional<Name>> slots;

    bool injective() const {
        std::set<Name> seen;
        for (const auto& s : slots)
            if (s && !seen.insert(*s).second)
                return false;
        return true;
    }

    std::size_t assigned() const {
        std::size_t n = 0;
        for (const auto& s : slots)
            n += s.has_value();
        return n;
    }

    friend auto operator<=>(const RegisterAssignment&, const RegisterAssignment&) = default;
    friend bool operator==(const RegisterAssignment&, const RegisterAssignment&) = default;
};

struct ClosureState {
    State base = 0;
    RegisterAssignment regs;

    friend auto operator<=>(const ClosureState&, const ClosureState&) = default;
    friend bool operator==(const ClosureState&, const ClosureState&) = default;
};

/// Which restrictions r' <= r a plain step may move to. `All` follows the
/// construction literally; `Maximal` keeps only r' = r (and the forced drops
/// on bar steps), which accepts the same language with fewer states.
enum class RestrictionPolicy { All, Maximal };

template <class Automaton>
struct ClosureResult {
    Automaton automaton;
    std::vector<ClosureState> states; // index = state id of `automaton`
    std::size_t state_bound = 0;
};

namespace detail {

class RegisterMachine {
public:
    RegisterMachine(const BarAlphabet& source, const BarAlphabet& target, RestrictionPolicy policy)
        : plains_(source.plains()), policy_(policy) {
        std::set<Name> pool(plains_.begin(), plains_.end());
        for (const auto& n : target.names())
            pool.insert(n);
        pool_size_ = pool.size();
    }

    std::size_t k() const { return plains_.size(); }

    RegisterAssignment initial() const {
        RegisterAssignment r;
        for (const auto& a : plains_)
            r.slots.emplace_back(a);
        return r;
    }

    std::optional<std::size_t> slot_of(const Name& a) const {
        auto it = std::lower_bound(plains_.begin(), plains_.end(), a);
        if (it == plains_.end() || *it != a)
            return std::nullopt;
        return static_cast<std::size_t>(it - plains_.begin());
    }

    /// |Q| times the number of partial injective maps from k slots into the
    /// register-name pool.
    std::size_t bound(std::size_t base_states) const {
        std::size_t total = 0;
        for (std::size_t d = 0; d <= k(); ++d) {
            std::size_t choose = 1, perm = 1;
            for (std::size_t i = 0; i < d; ++i) {
                choose = choose * (k() - i) / (i + 1);
                perm *= pool_size_ >= i ? pool_size_ - i : 0;
            }
            total += choose * perm;
        }
        return total * base_states;
    }

    /// Assignments reachable from r by reading target letter `target` through
    /// source letter `source`; empty if the step is impossible.
    std::vector<RegisterAssignment> successors(const RegisterAssignment& r, const Letter& source,
                                               const Letter& target) const {
        if (source.kind != target.kind)
            return {};
        if (source.is_plain()) {
            auto i = slot_of(source.name);
            if (!i || r.slots[*i] != target.name)
                return {};
            return restrictions(r);
        }
        // bar step: slot i (if the bound name is a plain of A0) takes the new
        // name; any other slot holding it is dropped
        const auto i = slot_of(source.name);
        RegisterAssignment base = r;
        for (std::size_t j = 0; j < base.slots.size(); ++j)
            if (base.slots[j] == target.name)
                base.slots[j].reset();
        if (i)
            base.slots[*i] = target.name;
        return restrictions(base);
    }

private:
    std::vector<RegisterAssignment> restrictions(const RegisterAssignment& r) const {
        if (policy_ == RestrictionPolicy::Maximal)
            return {r};
        std::vector<std::size_t> dom;
        for (std::size_t j = 0; j < r.slots.size(); ++j)
            if (r.slots[j])
                dom.push_back(j);
        std::vector<RegisterAssignment> out;
        const std::size_t n = std::size_t{1} << dom.size();
        out.reserve(n);
        // mask bit set = slot dropped; mask 0 (maximal) comes first
        for (std::size_t mask = 0; mask < n; ++mask) {
            RegisterAssignment s = r;
            for (std::size_t b = 0; b < dom.size(); ++b)
                if (mask >> b & 1)
                    s.slots[dom[b]].reset();
            out.push_back(std::move(s));
        }
        return out;
    }

    std::vector<Name> plains_;
    std::size_t pool_size_ = 0;
    RestrictionPolicy policy_;
};

inline void check_register_invariants(const std::vector<ClosureState>& states, std::size_t bound) {
    for (const auto& s : states)
        if (!s.regs.injective())
            throw std::logic_error("closure: non-injective register assignment");
    if (states.size() > bound)
        throw std::logic_error("closure: state count " + std::to_string(states.size()) + " exceeds bound " +
                               std::to_string(bound));
}

template <class Acc>
ClosureResult<WordAutomaton<Acc>> close_word_automaton(const WordAutomaton<Acc>& a, const BarAlphabet& target,
                                                       RestrictionPolicy policy) {
    const RegisterMachine rm(a.alphabet(), target, policy);
    ClosureResult<WordAutomaton<Acc>> res{WordAutomaton<Acc>(target), {}, rm.bound(a.num_states())};
    std::map<ClosureState, State> ids;
    res.states.push_back({a.initial(), rm.initial()});
    ids.emplace(res.states.front(), 0);
    res.automaton.set_final(0, a.is_final(a.initial()));
    for (std::size_t idx = 0; idx < res.states.size(); ++idx) {
        const ClosureState cur = res.states[idx];
        for (std::uint32_t tl = 0; tl < target.size(); ++tl) {
            const Letter& b = target[tl];
            for (std::uint32_t sl = 0; sl < a.alphabet().size(); ++sl) {
                const auto& succ = a.successors(cur.base, sl);
                if (succ.empty())
                    continue;
                for (auto& regs : rm.successors(cur.regs, a.alphabet()[sl], b)) {
                    for (State q2 : succ) {
                        ClosureState next{q2, regs};
                        auto [it, inserted] = ids.try_emplace(next, static_cast<State>(res.states.size()));
                        if (inserted) {
                            res.states.push_back(next);
                            res.automaton.set_final(res.automaton.add_state(), a.is_final(q2));
                        }
                        res.automaton.add_transition(static_cast<State>(idx), tl, it->second);
                    }
                }
            }
        }
    }
    check_register_invariants(res.states, res.state_bound);
    return res;
}

template <class F>
void for_product(const std::vector<std::vector<RegisterAssignment>>& options, F&& f) {
    std::vector<std::size_t> pick(options.size(), 0);
    for (const auto& o : options)
        if (o.empty())
            return;
    for (;;) {
        f(pick);
        std::size_t i = 0;
        while (i < pick.size() && ++pick[i] == options[i].size())
            pick[i++] = 0;
        if (i == pick.size())
            return;
    }
}

} // namespace detail

inline ClosureResult<BarNfa> close_word_detailed(const BarNfa& a, const BarAlphabet& target,
                                                 RestrictionPolicy policy = RestrictionPolicy::All) {
    return detail::close_word_automaton(a, target, policy);
}

inline BarNfa close_word(const BarNfa& a, const BarAlphabet& target, RestrictionPolicy policy = RestrictionPolicy::All) {
    return close_word_detailed(a, target, policy).automaton;
}

inline ClosureResult<BarBuchi> close_buchi_detailed(const BarBuchi& a, const BarAlphabet& target,
                                                    RestrictionPolicy policy = RestrictionPolicy::All) {
    return detail::close_word_automaton(a, target, policy);
}

inline BarBuchi close_buchi(const BarBuchi& a, const BarAlphabet& target,
                            RestrictionPolicy policy = RestrictionPolicy::All) {
    return close_buchi_detailed(a, target, policy).automaton;
}

/// Tree closure: converts to top-down form, runs the register construction
/// with one independent register choice per child, and converts back. The
/// reported states are those of the top-down construction.
inline ClosureResult<BarNftaBottomUp> close_tree_detailed(const BarNftaBottomUp& a, const BarAlphabet& target,
                                                          RestrictionPolicy policy = RestrictionPolicy::All) {
    const BarNftaTopDown td = topdown_of_bottomup(a);
    const detail::RegisterMachine rm(a.alphabet(), target, policy);
    std::vector<ClosureState> states{{td.initial(), rm.initial()}};
    std::map<ClosureState, State> ids{{states.front(), 0}};
    std::vector<BarNftaTopDown::Rule> rules;
    auto intern = [&](const ClosureState& s) {
        auto [it, inserted] = ids.try_emplace(s, static_cast<State>(states.size()));
        if (inserted)
            states.push_back(s);
        return it->second;
    };
    for (std::size_t idx = 0; idx < states.size(); ++idx) {
        const ClosureState cur = states[idx];
        const auto out_rules = td.rules_from(cur.base);
        for (std::uint32_t tl = 0; tl < target.size(); ++tl) {
            for (const auto& r : out_rules) {
                auto regs = rm.successors(cur.regs, a.alphabet()[r.letter], target[tl]);
                if (regs.empty())
                    continue;
                if (r.children.empty()) {
                    rules.push_back({static_cast<State>(idx), tl, r.symbol, {}});
                    continue;
                }
                std::vector<std::vector<RegisterAssignment>> options(r.children.size(), regs);
                detail::for_product(options, [&](const std::vector<std::size_t>& pick) {
                    std::vector<State> kids;
                    for (std::size_t c = 0; c < pick.size(); ++c)
                        kids.push_back(intern({r.children[c], regs[pick[c]]}));
                    rules.push_back({static_cast<State>(idx), tl, r.symbol, std::move(kids)});
                });
            }
        }
    }
    ClosureResult<BarNftaBottomUp> res;
    res.state_bound = rm.bound(td.num_states());
    detail::check_register_invariants(states, res.state_bound);
    BarNftaTopDown closed(target, a.signature(), states.size(), 0);
    for (auto& r : rules)
        closed.add_rule(std::move(r));
    res.automaton = bottomup_of_topdown(closed);
    res.states = std::move(states);
    return res;
}

inline BarNftaBottomUp close_tree(const BarNftaBottomUp& a, const BarAlphabet& target,
                                  RestrictionPolicy policy = RestrictionPolicy::All) {
    return close_tree_detailed(a, target, policy).automaton;
}

inline bool is_closed_automaton(const BarNfa& a) { return literally_equal(close_word(a, a.alphabet()), a); }

inline bool is_closed_automaton(const BarNftaBottomUp& a) { return literally_equal(close_tree(a, a.alphabet()), a); }

inline bool is_closed_automaton(const BarBuchi&) {
    throw UnsupportedKind("is_closed_automaton: Büchi automata need ω-language equality, which is not supported");
}

/// Bar-language membership: w is accepted up to α-equivalence.
inline bool alpha_member(const BarNfa& a, const BarString& w) {
    return literal_member_word(close_word(a, unite(a.alphabet(), letters_of(w)), RestrictionPolicy::Maximal), w);
}

inline bool alpha_member(const BarNftaBottomUp& a, const BarTree& t) {
    return literal_member_tree(close_tree(a, unite(a.alphabet(), letters_of(t)), RestrictionPolicy::Maximal), t);
}

namespace detail {

inline BarAlphabet with_names(BarAlphabet alphabet, const std::set<Name>& names) {
    for (const auto& n : names)
        alphabet = alphabet.with(Letter::plain(n)).with(Letter::bar(n));
    return alphabet;
}

inline void check_data_bound(std::size_t n, std::size_t max_size) {
    if (n > max_size)
        throw LimitExceeded("data membership: input size " + std::to_string(n) + " exceeds bound " +
                            std::to_string(max_size));
}

template <class Accept>
bool any_barring(const std::vector<Name>& u, Accept accept) {
    const std::size_t n = std::size_t{1} << u.size();
    for (std::size_t mask = 0; mask < n; ++mask) {
        BarString w;
        for (std::size_t i = 0; i < u.size(); ++i)
            w.push_back({u[i], (mask >> i & 1) ? LetterKind::Bar : LetterKind::Plain});
        if (accept(w))
            return true;
    }
    return false;
}

inline void tree_nodes(BarTree& t, std::vector<BarTree*>& out) {
    out.push_back(&t);
    for (auto& c : t.children)
        tree_nodes(c, out);
}

inline bool data_member_tree(const BarNftaBottomUp& a, const BarTree& u, bool global, std::size_t max_size) {
    check_data_bound(u.size(), max_size);
    const auto closed = close_tree(a, with_names(a.alphabet(), names_of(u)), RestrictionPolicy::Maximal);
    BarTree w = u;
    std::vector<BarTree*> nodes;
    tree_nodes(w, nodes);
    const std::size_t n = std::size_t{1} << nodes.size();
    for (std::size_t mask = 0; mask < n; ++mask) {
        for (std::size_t i = 0; i < nodes.size(); ++i)
            nodes[i]->letter.kind = (mask >> i & 1) ? LetterKind::Bar : LetterKind::Plain;
        if ((!global || is_clean(w)) && literal_member_tree(closed, w))
            return true;
    }
    return false;
}

} // namespace detail

/// Some barring of the data word is in the bar language (local freshness).
inline bool data_member_local(const BarNfa& a, const std::vector<Name>& u, std::size_t max_size = 16) {
    detail::check_data_bound(u.size(), max_size);
    const auto closed =
        close_word(a, detail::with_names(a.alphabet(), std::set<Name>(u.begin(), u.end())), RestrictionPolicy::Maximal);
    return detail::any_barring(u, [&](const BarString& w) { return literal_member_word(closed, w); });
}

/// Some clean barring of the data word is in the bar language (global
/// freshness).
inline bool data_member_global(const BarNfa& a, const std::vector<Name>& u, std::size_t max_size = 16) {
    detail::check_data_bound(u.size(), max_size);
    const auto closed =
        close_word(a, detail::with_names(a.alphabet(), std::set<Name>(u.begin(), u.end())), RestrictionPolicy::Maximal);
    return detail::any_barring(u, [&](const BarString& w) { return is_clean(w) && literal_member_word(closed, w); });
}

/// Tree variants; the letter kinds of `u` are ignored, only names matter.
inline bool data_member_local(const BarNftaBottomUp& a, const BarTree& u, std::size_t max_size = 12) {
    return detail::data_member_tree(a, u, false, max_size);
}

inline bool data_member_global(const BarNftaBottomUp& a, const BarTree& u, std::size_t max_size = 12) {
    return detail::data_member_tree(a, u, true, max_size);
}

} // namespace barlearn
