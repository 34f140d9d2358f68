#pragma once

// Bottom-up and top-down tree automata over (bar letter × ranked symbol),
// read literally.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "alphabet.hpp"
#include "syntax.hpp"
#include "word_automata.hpp"

namespace barlearn {

/// Rule letter.symbol(children) -> target. Symbols are indexed in the
/// signature's name order, letters in the alphabet order.
struct TreeRule {
    std::uint32_t symbol = 0;
    std::uint32_t letter = 0;
    std::vector<State> children;
    State target = 0;

    friend auto operator<=>(const TreeRule&, const TreeRule&) = default;
    friend bool operator==(const TreeRule&, const TreeRule&) = default;
};

namespace detail {

inline std::vector<std::string> symbol_table(const Signature& sig) {
    std::vector<std::string> out;
    for (const auto& [s, a] : sig.symbols())
        out.push_back(s);
    return out;
}

} // namespace detail

class BarNftaBottomUp {
public:
    BarNftaBottomUp() = default;
    BarNftaBottomUp(BarAlphabet alphabet, Signature signature, std::size_t states = 0)
        : alphabet_(std::move(alphabet)), signature_(std::move(signature)), symbols_(detail::symbol_table(signature_)) {
        for (std::size_t i = 0; i < states; ++i)
            add_state();
    }

    State add_state() {
        final_.push_back(false);
        return static_cast<State>(final_.size() - 1);
    }

    void set_final(State q, bool f = true) { final_.at(q) = f; }

    void add_rule(TreeRule r) {
        if (r.symbol >= symbols_.size() || r.letter >= alphabet_.size())
            throw std::out_of_range("rule symbol or letter out of range");
        if (r.children.size() != signature_.arity(symbols_[r.symbol]))
            throw std::invalid_argument("rule arity does not match signature");
        for (State c : r.children)
            check_state(c);
        check_state(r.target);
        if (rules_.insert(r).second)
            by_head_[{r.symbol, r.letter}].push_back(std::move(r));
    }

    void add_rule(const std::string& symbol, const Letter& letter, std::vector<State> children, State target) {
        auto l = alphabet_.index_of(letter);
        if (!l)
            throw std::invalid_argument("letter not in alphabet");
        add_rule(TreeRule{symbol_index(symbol), *l, std::move(children), target});
    }

    std::uint32_t symbol_index(const std::string& s) const {
        auto it = std::lower_bound(symbols_.begin(), symbols_.end(), s);
        if (it == symbols_.end() || *it != s)
            throw std::invalid_argument("unknown symbol '" + s + "'");
        return static_cast<std::uint32_t>(it - symbols_.begin());
    }

    const BarAlphabet& alphabet() const noexcept { return alphabet_; }
    const Signature& signature() const noexcept { return signature_; }
    const std::vector<std::string>& symbols() const noexcept { return symbols_; }
    unsigned arity(std::uint32_t symbol) const { return signature_.arity(symbols_.at(symbol)); }
    std::size_t num_states() const noexcept { return final_.size(); }
    bool is_final(State q) const { return final_.at(q); }
    const std::set<TreeRule>& rules() const noexcept { return rules_; }

    std::vector<State> finals() const {
        std::vector<State> out;
        for (State q = 0; q < num_states(); ++q)
            if (final_[q])
                out.push_back(q);
        return out;
    }

    /// Rules with the given head, in rule order.
    const std::vector<TreeRule>& rules_for(std::uint32_t symbol, std::uint32_t letter) const {
        static const std::vector<TreeRule> none;
        auto it = by_head_.find({symbol, letter});
        return it == by_head_.end() ? none : it->second;
    }

    bool is_deterministic() const {
        std::set<std::tuple<std::uint32_t, std::uint32_t, std::vector<State>>> seen;
        for (const auto& r : rules_)
            if (!seen.emplace(r.symbol, r.letter, r.children).second)
                return false;
        return true;
    }

    bool is_complete() const {
        if (num_states() == 0)
            return symbols_.empty() || alphabet_.empty() ? true : !has_nullary();
        std::set<std::tuple<std::uint32_t, std::uint32_t, std::vector<State>>> heads;
        for (const auto& r : rules_)
            heads.emplace(r.symbol, r.letter, r.children);
        std::size_t expected = 0;
        for (std::uint32_t s = 0; s < symbols_.size(); ++s) {
            std::size_t tuples = 1;
            for (unsigned i = 0; i < arity(s); ++i)
                tuples *= num_states();
            expected += tuples * alphabet_.size();
        }
        return heads.size() == expected;
    }

    friend bool operator==(const BarNftaBottomUp& a, const BarNftaBottomUp& b) {
        return a.alphabet_ == b.alphabet_ && a.signature_ == b.signature_ && a.final_ == b.final_ && a.rules_ == b.rules_;
    }

private:
    bool has_nullary() const {
        for (std::uint32_t s = 0; s < symbols_.size(); ++s)
            if (arity(s) == 0)
                return true;
        return false;
    }

    void check_state(State q) const {
        if (q >= final_.size())
            throw std::out_of_range("state out of range");
    }

    BarAlphabet alphabet_;
    Signature signature_;
    std::vector<std::string> symbols_;
    std::vector<bool> final_;
    std::set<TreeRule> rules_;
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::vector<TreeRule>> by_head_;
};

/// Top-down form: a single initial state and rules q --letter.symbol--> (q1..qn).
class BarNftaTopDown {
public:
    struct Rule {
        State state = 0;
        std::uint32_t letter = 0;
        std::uint32_t symbol = 0;
        std::vector<State> children;

        friend auto operator<=>(const Rule&, const Rule&) = default;
        friend bool operator==(const Rule&, const Rule&) = default;
    };

    BarNftaTopDown() = default;
    BarNftaTopDown(BarAlphabet alphabet, Signature signature, std::size_t states, State initial)
        : alphabet_(std::move(alphabet)), signature_(std::move(signature)), symbols_(detail::symbol_table(signature_)),
          num_states_(states), initial_(initial) {
        if (initial >= states)
            throw std::out_of_range("initial state out of range");
    }

    void add_rule(Rule r) {
        if (r.state >= num_states_)
            throw std::out_of_range("state out of range");
        for (State c : r.children)
            if (c >= num_states_)
                throw std::out_of_range("state out of range");
        if (r.children.size() != signature_.arity(symbols_.at(r.symbol)))
            throw std::invalid_argument("rule arity does not match signature");
        rules_.insert(std::move(r));
    }

    const BarAlphabet& alphabet() const noexcept { return alphabet_; }
    const Signature& signature() const noexcept { return signature_; }
    const std::vector<std::string>& symbols() const noexcept { return symbols_; }
    std::size_t num_states() const noexcept { return num_states_; }
    State initial() const noexcept { return initial_; }
    const std::set<Rule>& rules() const noexcept { return rules_; }

    /// Rules leaving q, ordered by (letter, symbol, children).
    std::vector<Rule> rules_from(State q) const {
        auto lo = rules_.lower_bound(Rule{q, 0, 0, {}});
        std::vector<Rule> out;
        for (auto it = lo; it != rules_.end() && it->state == q; ++it)
            out.push_back(*it);
        return out;
    }

private:
    BarAlphabet alphabet_;
    Signature signature_;
    std::vector<std::string> symbols_;
    std::size_t num_states_ = 0;
    State initial_ = 0;
    std::set<Rule> rules_;
};

namespace detail {

inline void check_signature(const BarTree& t, const Signature& sig) {
    if (!conforms(t, sig))
        throw std::invalid_argument("tree does not conform to the automaton signature");
}

// Set of states reachable at the root of t; nullopt when a letter is outside
// the alphabet.
inline std::optional<std::vector<State>> eval_tree(const BarNftaBottomUp& a, const BarTree& t) {
    std::vector<std::vector<State>> kids;
    for (const auto& c : t.children) {
        auto s = eval_tree(a, c);
        if (!s)
            return std::nullopt;
        kids.push_back(std::move(*s));
    }
    auto l = a.alphabet().index_of(t.letter);
    if (!l)
        return std::nullopt;
    std::vector<State> out;
    for (const auto& r : a.rules_for(a.symbol_index(t.symbol), *l)) {
        bool ok = true;
        for (std::size_t i = 0; i < r.children.size() && ok; ++i)
            ok = std::binary_search(kids[i].begin(), kids[i].end(), r.children[i]);
        if (ok)
            out.push_back(r.target);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

} // namespace detail

/// Literal membership; throws if the tree does not fit the signature, rejects
/// letters outside the alphabet.
inline bool literal_member_tree(const BarNftaBottomUp& a, const BarTree& t) {
    detail::check_signature(t, a.signature());
    auto s = detail::eval_tree(a, t);
    return s && std::any_of(s->begin(), s->end(), [&](State q) { return a.is_final(q); });
}

inline bool literal_member_tree(const BarNftaTopDown& a, const BarTree& t) {
    detail::check_signature(t, a.signature());
    std::function<bool(State, const BarTree&)> run = [&](State q, const BarTree& n) {
        auto l = a.alphabet().index_of(n.letter);
        if (!l)
            return false;
        auto sym = static_cast<std::uint32_t>(
            std::lower_bound(a.symbols().begin(), a.symbols().end(), n.symbol) - a.symbols().begin());
        for (const auto& r : a.rules_from(q)) {
            if (r.letter != *l || r.symbol != sym)
                continue;
            bool ok = true;
            for (std::size_t i = 0; i < n.children.size() && ok; ++i)
                ok = run(r.children[i], n.children[i]);
            if (ok)
                return true;
        }
        return false;
    };
    return run(a.initial(), t);
}

inline BarNftaBottomUp with_alphabet(const BarNftaBottomUp& a, const BarAlphabet& target) {
    if (!target.includes(a.alphabet()))
        throw std::invalid_argument("with_alphabet: target must include the automaton alphabet");
    BarNftaBottomUp out(target, a.signature(), a.num_states());
    for (State q = 0; q < a.num_states(); ++q)
        out.set_final(q, a.is_final(q));
    for (auto r : a.rules()) {
        r.letter = *target.index_of(a.alphabet()[r.letter]);
        out.add_rule(std::move(r));
    }
    return out;
}

/// Keeps productive states that can reach a final state; states are renumbered
/// in bottom-up saturation order.
inline BarNftaBottomUp trim(const BarNftaBottomUp& a) {
    // productive: derivable bottom-up
    std::vector<char> productive(a.num_states(), 0);
    std::vector<State> order;
    for (bool changed = true; changed;) {
        changed = false;
        for (const auto& r : a.rules()) {
            if (productive[r.target])
                continue;
            if (std::all_of(r.children.begin(), r.children.end(), [&](State c) { return productive[c] != 0; })) {
                productive[r.target] = 1;
                order.push_back(r.target);
                changed = true;
            }
        }
    }
    // useful: occurs below a final state in some productive rule
    std::vector<char> useful(a.num_states(), 0);
    for (State q = 0; q < a.num_states(); ++q)
        useful[q] = productive[q] && a.is_final(q);
    for (bool changed = true; changed;) {
        changed = false;
        for (const auto& r : a.rules()) {
            if (!useful[r.target])
                continue;
            if (!std::all_of(r.children.begin(), r.children.end(), [&](State c) { return productive[c] != 0; }))
                continue;
            for (State c : r.children)
                if (!useful[c])
                    useful[c] = 1, changed = true;
        }
    }
    std::vector<State> renum(a.num_states(), static_cast<State>(-1));
    BarNftaBottomUp out(a.alphabet(), a.signature());
    for (State q : order)
        if (useful[q]) {
            renum[q] = out.add_state();
            out.set_final(renum[q], a.is_final(q));
        }
    for (const auto& r : a.rules()) {
        if (renum[r.target] == static_cast<State>(-1))
            continue;
        TreeRule nr{r.symbol, r.letter, {}, renum[r.target]};
        bool ok = true;
        for (State c : r.children) {
            if (renum[c] == static_cast<State>(-1)) {
                ok = false;
                break;
            }
            nr.children.push_back(renum[c]);
        }
        if (ok)
            out.add_rule(std::move(nr));
    }
    return out;
}

namespace detail {

// Calls f(tuple) for every tuple in {0..k}^n with at least one coordinate k.
template <class F>
void for_tuples_touching(std::size_t n, State k, F&& f) {
    if (n == 0)
        return;
    std::vector<State> t(n, 0);
    for (;;) {
        if (std::find(t.begin(), t.end(), k) != t.end())
            f(t);
        std::size_t i = 0;
        while (i < n && t[i] == k)
            t[i++] = 0;
        if (i == n)
            return;
        ++t[i];
    }
}

// Generic bottom-up saturation: `compute(symbol, letter, child keys)` yields
// the key of the combined state; keys are interned in discovery order.
template <class Key, class Compute, class OnNew>
void saturate(const BarNftaBottomUp& shape, std::vector<Key>& keys, std::map<Key, State>& ids,
              std::vector<TreeRule>& rules, Compute compute, OnNew on_new) {
    auto intern = [&](Key k) {
        auto [it, inserted] = ids.try_emplace(k, static_cast<State>(keys.size()));
        if (inserted) {
            keys.push_back(std::move(k));
            on_new(keys.back());
        }
        return it->second;
    };
    const auto nsym = static_cast<std::uint32_t>(shape.symbols().size());
    const auto nlet = static_cast<std::uint32_t>(shape.alphabet().size());
    for (std::uint32_t s = 0; s < nsym; ++s)
        if (shape.arity(s) == 0)
            for (std::uint32_t l = 0; l < nlet; ++l) {
                State t = intern(compute(s, l, std::vector<const Key*>{}));
                rules.push_back({s, l, {}, t});
            }
    for (State k = 0; k < keys.size(); ++k) {
        for (std::uint32_t s = 0; s < nsym; ++s) {
            const unsigned n = shape.arity(s);
            if (n == 0)
                continue;
            for_tuples_touching(n, k, [&](const std::vector<State>& tuple) {
                for (std::uint32_t l = 0; l < nlet; ++l) {
                    std::vector<const Key*> kids;
                    for (State c : tuple)
                        kids.push_back(&keys[c]);
                    Key next = compute(s, l, kids);
                    State t = intern(std::move(next));
                    rules.push_back({s, l, tuple, t});
                }
            });
        }
    }
}

inline std::vector<State> tree_step(const BarNftaBottomUp& a, std::uint32_t s, std::uint32_t l,
                                    const std::vector<const std::vector<State>*>& kids) {
    std::vector<State> out;
    for (const auto& r : a.rules_for(s, l)) {
        bool ok = true;
        for (std::size_t i = 0; i < kids.size() && ok; ++i)
            ok = std::binary_search(kids[i]->begin(), kids[i]->end(), r.children[i]);
        if (ok)
            out.push_back(r.target);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

} // namespace detail

/// Bottom-up subset construction over the trimmed automaton; only reachable
/// subsets are built, the result is deterministic and complete.
inline BarNftaBottomUp determinize_tree(const BarNftaBottomUp& input) {
    const BarNftaBottomUp a = trim(input);
    std::vector<std::vector<State>> keys;
    std::map<std::vector<State>, State> ids;
    std::vector<TreeRule> rules;
    detail::saturate(
        a, keys, ids, rules,
        [&](std::uint32_t s, std::uint32_t l, const std::vector<const std::vector<State>*>& kids) {
            return detail::tree_step(a, s, l, kids);
        },
        [](const std::vector<State>&) {});
    BarNftaBottomUp out(a.alphabet(), a.signature(), keys.size());
    for (State q = 0; q < keys.size(); ++q)
        out.set_final(q, std::any_of(keys[q].begin(), keys[q].end(), [&](State p) { return a.is_final(p); }));
    for (auto& r : rules)
        out.add_rule(std::move(r));
    return out;
}

inline BarNftaBottomUp complement_tree(const BarNftaBottomUp& a) {
    if (!a.is_deterministic() || !a.is_complete())
        throw std::invalid_argument("complement_tree: automaton must be deterministic and complete");
    BarNftaBottomUp out = a;
    for (State q = 0; q < a.num_states(); ++q)
        out.set_final(q, !a.is_final(q));
    return out;
}

/// Reachable part of the product; `accept` decides finality of a state pair.
template <class Accept>
BarNftaBottomUp product_tree(const BarNftaBottomUp& a, const BarNftaBottomUp& b, Accept accept) {
    if (a.alphabet() != b.alphabet() || a.signature() != b.signature())
        throw std::invalid_argument("product_intersection: alphabet or signature differs");
    using Key = std::pair<State, State>;
    std::vector<Key> keys;
    std::map<Key, State> ids;
    std::vector<TreeRule> rules;
    // one product key per pair of rules, so the saturation runs over pairs
    const auto nsym = static_cast<std::uint32_t>(a.symbols().size());
    const auto nlet = static_cast<std::uint32_t>(a.alphabet().size());
    auto intern = [&](Key k) {
        auto [it, inserted] = ids.try_emplace(k, static_cast<State>(keys.size()));
        if (inserted)
            keys.push_back(k);
        return it->second;
    };
    auto combine = [&](std::uint32_t s, std::uint32_t l, const std::vector<State>& tuple) {
        for (const auto& ra : a.rules_for(s, l))
            for (const auto& rb : b.rules_for(s, l)) {
                bool ok = true;
                for (std::size_t i = 0; i < tuple.size() && ok; ++i)
                    ok = ra.children[i] == keys[tuple[i]].first && rb.children[i] == keys[tuple[i]].second;
                if (ok)
                    rules.push_back({s, l, tuple, intern({ra.target, rb.target})});
            }
    };
    for (std::uint32_t s = 0; s < nsym; ++s)
        if (a.arity(s) == 0)
            for (std::uint32_t l = 0; l < nlet; ++l)
                combine(s, l, {});
    for (State k = 0; k < keys.size(); ++k)
        for (std::uint32_t s = 0; s < nsym; ++s)
            detail::for_tuples_touching(a.arity(s), k, [&](const std::vector<State>& tuple) {
                for (std::uint32_t l = 0; l < nlet; ++l)
                    combine(s, l, tuple);
            });
    BarNftaBottomUp out(a.alphabet(), a.signature(), keys.size());
    for (State q = 0; q < keys.size(); ++q)
        out.set_final(q, accept(keys[q].first, keys[q].second));
    for (auto& r : rules)
        out.add_rule(std::move(r));
    return out;
}

inline BarNftaBottomUp product_intersection(const BarNftaBottomUp& a, const BarNftaBottomUp& b) {
    return product_tree(a, b, [&](State p, State q) { return a.is_final(p) && b.is_final(q); });
}

/// Least accepted tree in the tree order (size, then preorder), computed by a
/// Dijkstra-style saturation: each state gets its least derivable tree.
inline std::optional<BarTree> shortest_accepted_tree(const BarNftaBottomUp& a) {
    std::vector<std::optional<BarTree>> best(a.num_states());
    std::vector<char> done(a.num_states(), 0);
    auto build = [&](const TreeRule& r) {
        BarTree t(a.alphabet()[r.letter], a.symbols()[r.symbol]);
        for (State c : r.children)
            t.children.push_back(*best[c]);
        return t;
    };
    auto offer = [&](const TreeRule& r) {
        if (done[r.target])
            return;
        for (State c : r.children)
            if (!done[c])
                return;
        BarTree t = build(r);
        if (!best[r.target] || tree_less(t, *best[r.target]))
            best[r.target] = std::move(t);
    };
    std::vector<std::vector<const TreeRule*>> uses(a.num_states());
    for (const auto& r : a.rules())
        for (State c : r.children)
            uses[c].push_back(&r);
    for (const auto& r : a.rules())
        if (r.children.empty())
            offer(r);
    for (;;) {
        std::optional<State> pick;
        for (State q = 0; q < a.num_states(); ++q)
            if (!done[q] && best[q] && (!pick || tree_less(*best[q], *best[*pick])))
                pick = q;
        if (!pick)
            break;
        done[*pick] = 1;
        for (const TreeRule* r : uses[*pick])
            offer(*r);
    }
    std::optional<BarTree> out;
    for (State q = 0; q < a.num_states(); ++q)
        if (a.is_final(q) && best[q] && (!out || tree_less(*best[q], *out)))
            out = best[q];
    return out;
}

/// Least tree (tree order) accepted by exactly one of the automata, over the
/// union of their alphabets. Signatures must agree.
inline std::optional<BarTree> shortest_in_symmetric_difference(const BarNftaBottomUp& a_in,
                                                               const BarNftaBottomUp& b_in) {
    if (a_in.signature() != b_in.signature())
        throw std::invalid_argument("shortest_in_symmetric_difference: signatures differ");
    const BarAlphabet u = unite(a_in.alphabet(), b_in.alphabet());
    const auto a = determinize_tree(with_alphabet(a_in, u));
    const auto b = determinize_tree(with_alphabet(b_in, u));
    return shortest_accepted_tree(product_tree(a, b, [&](State p, State q) { return a.is_final(p) != b.is_final(q); }));
}

inline bool literally_equal(const BarNftaBottomUp& a, const BarNftaBottomUp& b) {
    return !shortest_in_symmetric_difference(a, b);
}

/// Reverses the rules; several (or no) final states are first merged into a
/// fresh state that copies every rule into a final state.
inline BarNftaTopDown topdown_of_bottomup(const BarNftaBottomUp& a) {
    const auto finals = a.finals();
    if (finals.size() == 1) {
        BarNftaTopDown out(a.alphabet(), a.signature(), a.num_states(), finals.front());
        for (const auto& r : a.rules())
            out.add_rule({r.target, r.letter, r.symbol, r.children});
        return out;
    }
    const auto root = static_cast<State>(a.num_states());
    BarNftaTopDown out(a.alphabet(), a.signature(), a.num_states() + 1, root);
    for (const auto& r : a.rules()) {
        out.add_rule({r.target, r.letter, r.symbol, r.children});
        if (a.is_final(r.target))
            out.add_rule({root, r.letter, r.symbol, r.children});
    }
    return out;
}

inline BarNftaBottomUp bottomup_of_topdown(const BarNftaTopDown& a) {
    BarNftaBottomUp out(a.alphabet(), a.signature(), a.num_states());
    out.set_final(a.initial());
    for (const auto& r : a.rules())
        out.add_rule(TreeRule{r.symbol, r.letter, r.children, r.state});
    return out;
}

/// One state per node; the root's state is final.
inline BarNftaBottomUp singleton_automaton(const BarTree& t, const BarAlphabet& alphabet, const Signature& sig) {
    detail::check_signature(t, sig);
    if (!is_over(t, alphabet))
        throw std::invalid_argument("singleton_automaton: tree uses letters outside the alphabet");
    BarNftaBottomUp out(alphabet, sig);
    std::function<State(const BarTree&)> build = [&](const BarTree& n) {
        std::vector<State> kids;
        for (const auto& c : n.children)
            kids.push_back(build(c));
        State q = out.add_state();
        out.add_rule(n.symbol, n.letter, kids, q);
        return q;
    };
    out.set_final(build(t));
    return out;
}

} // namespace barlearn
