#pragma once

// Word and Büchi automata over finite bar alphabets, read literally:
// membership, trimming, determinization, complement, products, minimal
// witnesses and lasso search.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "alphabet.hpp"
#include "syntax.hpp"

namespace barlearn {

using State = std::uint32_t;

struct FiniteAcceptance {};
struct BuchiAcceptance {};

/// Nondeterministic automaton with a single initial state. States are dense
/// integers; transitions are stored per (state, letter index), sorted.
template <class Acceptance>
class WordAutomaton {
public:
    using acceptance = Acceptance;

    WordAutomaton() : WordAutomaton(BarAlphabet{}) {}
    explicit WordAutomaton(BarAlphabet alphabet, std::size_t states = 1, State initial = 0)
        : alphabet_(std::move(alphabet)) {
        if (states == 0)
            states = 1;
        for (std::size_t i = 0; i < states; ++i)
            add_state();
        set_initial(initial);
    }

    State add_state() {
        final_.push_back(false);
        delta_.emplace_back(alphabet_.size());
        return static_cast<State>(final_.size() - 1);
    }

    void set_initial(State q) {
        check_state(q);
        initial_ = q;
    }

    void set_final(State q, bool f = true) {
        check_state(q);
        final_[q] = f;
    }

    void add_transition(State from, std::uint32_t letter, State to) {
        check_state(from);
        check_state(to);
        if (letter >= alphabet_.size())
            throw std::out_of_range("letter index outside alphabet");
        auto& succ = delta_[from][letter];
        auto it = std::lower_bound(succ.begin(), succ.end(), to);
        if (it == succ.end() || *it != to)
            succ.insert(it, to);
    }

    void add_transition(State from, const Letter& l, State to) {
        auto idx = alphabet_.index_of(l);
        if (!idx)
            throw std::invalid_argument("letter not in alphabet");
        add_transition(from, *idx, to);
    }

    const BarAlphabet& alphabet() const noexcept { return alphabet_; }
    std::size_t num_states() const noexcept { return final_.size(); }
    State initial() const noexcept { return initial_; }
    bool is_final(State q) const { return final_.at(q); }

    std::vector<State> finals() const {
        std::vector<State> out;
        for (State q = 0; q < num_states(); ++q)
            if (final_[q])
                out.push_back(q);
        return out;
    }

    const std::vector<State>& successors(State q, std::uint32_t letter) const { return delta_.at(q).at(letter); }

    std::size_t num_transitions() const {
        std::size_t n = 0;
        for (const auto& row : delta_)
            for (const auto& s : row)
                n += s.size();
        return n;
    }

    bool is_deterministic() const {
        for (const auto& row : delta_)
            for (const auto& s : row)
                if (s.size() > 1)
                    return false;
        return true;
    }

    bool is_complete() const {
        for (const auto& row : delta_)
            for (const auto& s : row)
                if (s.empty())
                    return false;
        return true;
    }

    friend bool operator==(const WordAutomaton&, const WordAutomaton&) = default;

private:
    void check_state(State q) const {
        if (q >= final_.size())
            throw std::out_of_range("state out of range");
    }

    BarAlphabet alphabet_;
    State initial_ = 0;
    std::vector<bool> final_;
    std::vector<std::vector<std::vector<State>>> delta_;
};

using BarNfa = WordAutomaton<FiniteAcceptance>;
using BarBuchi = WordAutomaton<BuchiAcceptance>;

/// Accepting lasso of a Büchi automaton: a stem run into a cycle through a
/// final state. stem_states has |stem|+1 entries; loop_states has |loop|+1
/// entries and starts and ends at the last stem state.
struct Lasso {
    std::vector<State> stem_states;
    BarString stem;
    std::vector<State> loop_states;
    BarString loop;

    UltPeriodicWord word() const { return {stem, loop}; }
};

/// Same states and transitions read with the other acceptance condition.
template <class To, class From>
WordAutomaton<To> reinterpret(const WordAutomaton<From>& a) {
    WordAutomaton<To> out(a.alphabet(), a.num_states(), a.initial());
    for (State q = 0; q < a.num_states(); ++q) {
        out.set_final(q, a.is_final(q));
        for (std::uint32_t l = 0; l < a.alphabet().size(); ++l)
            for (State p : a.successors(q, l))
                out.add_transition(q, l, p);
    }
    return out;
}

/// Re-indexes the automaton over a superset alphabet; new letters have no
/// transitions.
template <class Acc>
WordAutomaton<Acc> with_alphabet(const WordAutomaton<Acc>& a, const BarAlphabet& target) {
    if (!target.includes(a.alphabet()))
        throw std::invalid_argument("with_alphabet: target must include the automaton alphabet");
    WordAutomaton<Acc> out(target, a.num_states(), a.initial());
    for (State q = 0; q < a.num_states(); ++q) {
        out.set_final(q, a.is_final(q));
        for (std::uint32_t l = 0; l < a.alphabet().size(); ++l)
            for (State p : a.successors(q, l))
                out.add_transition(q, *target.index_of(a.alphabet()[l]), p);
    }
    return out;
}

/// Literal membership by state-set propagation. Letters outside the
/// alphabet reject.
inline bool literal_member_word(const BarNfa& a, const BarString& w) {
    std::vector<char> cur(a.num_states(), 0), next(a.num_states(), 0);
    cur[a.initial()] = 1;
    for (const auto& l : w) {
        auto idx = a.alphabet().index_of(l);
        if (!idx)
            return false;
        std::fill(next.begin(), next.end(), 0);
        bool any = false;
        for (State q = 0; q < a.num_states(); ++q)
            if (cur[q])
                for (State p : a.successors(q, *idx))
                    next[p] = 1, any = true;
        if (!any)
            return false;
        cur.swap(next);
    }
    for (State q = 0; q < a.num_states(); ++q)
        if (cur[q] && a.is_final(q))
            return true;
    return false;
}

namespace detail {

template <class Acc>
std::vector<char> forward_reachable(const WordAutomaton<Acc>& a) {
    std::vector<char> seen(a.num_states(), 0);
    std::vector<State> stack{a.initial()};
    seen[a.initial()] = 1;
    while (!stack.empty()) {
        State q = stack.back();
        stack.pop_back();
        for (std::uint32_t l = 0; l < a.alphabet().size(); ++l)
            for (State p : a.successors(q, l))
                if (!seen[p])
                    seen[p] = 1, stack.push_back(p);
    }
    return seen;
}

template <class Acc>
std::vector<char> backward_reachable_from_finals(const WordAutomaton<Acc>& a) {
    std::vector<std::vector<State>> pred(a.num_states());
    for (State q = 0; q < a.num_states(); ++q)
        for (std::uint32_t l = 0; l < a.alphabet().size(); ++l)
            for (State p : a.successors(q, l))
                pred[p].push_back(q);
    std::vector<char> seen(a.num_states(), 0);
    std::vector<State> stack;
    for (State q : a.finals())
        seen[q] = 1, stack.push_back(q);
    while (!stack.empty()) {
        State q = stack.back();
        stack.pop_back();
        for (State p : pred[q])
            if (!seen[p])
                seen[p] = 1, stack.push_back(p);
    }
    return seen;
}

} // namespace detail

/// Keeps the states on some initial-to-final path, renumbered in BFS order
/// from the initial state. An empty language yields a single non-final state.
template <class Acc>
WordAutomaton<Acc> trim(const WordAutomaton<Acc>& a) {
    const auto fwd = detail::forward_reachable(a);
    const auto bwd = detail::backward_reachable_from_finals(a);
    if (!bwd[a.initial()])
        return WordAutomaton<Acc>(a.alphabet());
    std::vector<State> renum(a.num_states(), static_cast<State>(-1));
    std::deque<State> queue{a.initial()};
    WordAutomaton<Acc> out(a.alphabet());
    renum[a.initial()] = 0;
    out.set_final(0, a.is_final(a.initial()));
    while (!queue.empty()) {
        State q = queue.front();
        queue.pop_front();
        for (std::uint32_t l = 0; l < a.alphabet().size(); ++l) {
            for (State p : a.successors(q, l)) {
                if (!fwd[p] || !bwd[p])
                    continue;
                if (renum[p] == static_cast<State>(-1)) {
                    renum[p] = out.add_state();
                    out.set_final(renum[p], a.is_final(p));
                    queue.push_back(p);
                }
                out.add_transition(renum[q], l, renum[p]);
            }
        }
    }
    return out;
}

namespace detail {

template <class Acc>
std::vector<State> step(const WordAutomaton<Acc>& a, const std::vector<State>& set, std::uint32_t letter) {
    std::vector<State> out;
    for (State q : set) {
        const auto& s = a.successors(q, letter);
        out.insert(out.end(), s.begin(), s.end());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

template <class Acc>
bool any_final(const WordAutomaton<Acc>& a, const std::vector<State>& set) {
    return std::any_of(set.begin(), set.end(), [&](State q) { return a.is_final(q); });
}

} // namespace detail

/// Subset construction over the trimmed automaton; only reachable subsets
/// are built and the result is complete (the empty subset is the sink).
inline BarNfa determinize_word(const BarNfa& input) {
    const BarNfa a = trim(input);
    if (a.finals().empty()) {
        BarNfa sink(a.alphabet());
        for (std::uint32_t l = 0; l < a.alphabet().size(); ++l)
            sink.add_transition(0, l, 0);
        return sink;
    }
    std::map<std::vector<State>, State> ids;
    std::vector<std::vector<State>> subsets{{a.initial()}};
    ids.emplace(subsets.front(), 0);
    BarNfa out(a.alphabet());
    out.set_final(0, detail::any_final(a, subsets.front()));
    for (std::size_t i = 0; i < subsets.size(); ++i) {
        for (std::uint32_t l = 0; l < a.alphabet().size(); ++l) {
            auto next = detail::step(a, subsets[i], l);
            auto [it, inserted] = ids.try_emplace(next, static_cast<State>(subsets.size()));
            if (inserted) {
                subsets.push_back(next);
                State s = out.add_state();
                out.set_final(s, detail::any_final(a, next));
            }
            out.add_transition(static_cast<State>(i), l, it->second);
        }
    }
    return out;
}

/// Swaps final and non-final states of a deterministic complete automaton.
inline BarNfa complement_word(const BarNfa& a) {
    if (!a.is_deterministic() || !a.is_complete())
        throw std::invalid_argument("complement_word: automaton must be deterministic and complete");
    BarNfa out = a;
    for (State q = 0; q < a.num_states(); ++q)
        out.set_final(q, !a.is_final(q));
    return out;
}

/// Reachable part of the synchronous product of two finite-word automata.
inline BarNfa product_intersection(const BarNfa& a, const BarNfa& b) {
    if (a.alphabet() != b.alphabet())
        throw std::invalid_argument("product_intersection: alphabets differ");
    std::map<std::pair<State, State>, State> ids;
    std::vector<std::pair<State, State>> pairs{{a.initial(), b.initial()}};
    ids.emplace(pairs.front(), 0);
    BarNfa out(a.alphabet());
    out.set_final(0, a.is_final(a.initial()) && b.is_final(b.initial()));
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        auto [p, q] = pairs[i];
        for (std::uint32_t l = 0; l < a.alphabet().size(); ++l)
            for (State p2 : a.successors(p, l))
                for (State q2 : b.successors(q, l)) {
                    auto [it, inserted] = ids.try_emplace({p2, q2}, static_cast<State>(pairs.size()));
                    if (inserted) {
                        pairs.emplace_back(p2, q2);
                        out.set_final(out.add_state(), a.is_final(p2) && b.is_final(q2));
                    }
                    out.add_transition(static_cast<State>(i), l, it->second);
                }
    }
    return out;
}

/// Büchi intersection with the two-phase flag: phase 0 waits for a final
/// state of the left factor, phase 1 for one of the right factor. Accepting
/// states are the left-final states in phase 0.
inline BarBuchi product_intersection(const BarBuchi& a, const BarBuchi& b) {
    if (a.alphabet() != b.alphabet())
        throw std::invalid_argument("product_intersection: alphabets differ");
    using Key = std::tuple<State, State, int>;
    std::map<Key, State> ids;
    std::vector<Key> keys{{a.initial(), b.initial(), 0}};
    ids.emplace(keys.front(), 0);
    BarBuchi out(a.alphabet());
    auto accepting = [&](const Key& k) { return std::get<2>(k) == 0 && a.is_final(std::get<0>(k)); };
    out.set_final(0, accepting(keys.front()));
    for (std::size_t i = 0; i < keys.size(); ++i) {
        auto [p, q, flag] = keys[i];
        int next_flag = flag;
        if (flag == 0 && a.is_final(p))
            next_flag = 1;
        else if (flag == 1 && b.is_final(q))
            next_flag = 0;
        for (std::uint32_t l = 0; l < a.alphabet().size(); ++l)
            for (State p2 : a.successors(p, l))
                for (State q2 : b.successors(q, l)) {
                    Key k{p2, q2, next_flag};
                    auto [it, inserted] = ids.try_emplace(k, static_cast<State>(keys.size()));
                    if (inserted) {
                        keys.push_back(k);
                        out.set_final(out.add_state(), accepting(k));
                    }
                    out.add_transition(static_cast<State>(i), l, it->second);
                }
    }
    return out;
}

/// Shortest accepted word, lexicographically least among the shortest.
inline std::optional<BarString> shortest_accepted(const BarNfa& a) {
    std::vector<std::pair<State, std::uint32_t>> parent(a.num_states(), {0, 0});
    std::vector<char> seen(a.num_states(), 0);
    std::deque<State> queue{a.initial()};
    seen[a.initial()] = 1;
    while (!queue.empty()) {
        State q = queue.front();
        queue.pop_front();
        if (a.is_final(q)) {
            BarString w;
            for (State s = q; s != a.initial(); s = parent[s].first)
                w.push_back(a.alphabet()[parent[s].second]);
            std::reverse(w.begin(), w.end());
            return w;
        }
        for (std::uint32_t l = 0; l < a.alphabet().size(); ++l)
            for (State p : a.successors(q, l))
                if (!seen[p]) {
                    seen[p] = 1;
                    parent[p] = {q, l};
                    queue.push_back(p);
                }
    }
    return std::nullopt;
}

/// A size-minimal word (lexicographically least among minimal) in the
/// symmetric difference of the literal languages, or nothing if they are
/// equal. Both automata are trimmed and determinized on the fly over the
/// union of their alphabets.
inline std::optional<BarString> shortest_in_symmetric_difference(const BarNfa& a_in, const BarNfa& b_in) {
    const BarAlphabet u = unite(a_in.alphabet(), b_in.alphabet());
    const BarNfa a = with_alphabet(trim(a_in), u);
    const BarNfa b = with_alphabet(trim(b_in), u);
    using Key = std::pair<std::vector<State>, std::vector<State>>;
    std::map<Key, std::size_t> ids;
    std::vector<Key> nodes;
    std::vector<std::pair<std::size_t, std::uint32_t>> parent;
    nodes.push_back({{a.initial()}, {b.initial()}});
    parent.emplace_back(0, 0);
    ids.emplace(nodes.front(), 0);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (detail::any_final(a, nodes[i].first) != detail::any_final(b, nodes[i].second)) {
            BarString w;
            for (std::size_t n = i; n != 0; n = parent[n].first)
                w.push_back(u[parent[n].second]);
            std::reverse(w.begin(), w.end());
            return w;
        }
        for (std::uint32_t l = 0; l < u.size(); ++l) {
            Key next{detail::step(a, nodes[i].first, l), detail::step(b, nodes[i].second, l)};
            if (next.first.empty() && next.second.empty())
                continue;
            if (ids.try_emplace(next, nodes.size()).second) {
                nodes.push_back(std::move(next));
                parent.emplace_back(i, l);
            }
        }
    }
    return std::nullopt;
}

inline bool literally_equal(const BarNfa& a, const BarNfa& b) { return !shortest_in_symmetric_difference(a, b); }

/// Searches for a reachable cycle through a final state. Final states are
/// tried in BFS order; stem and loop are shortest and lexicographically
/// least for the chosen final state.
inline std::optional<Lasso> buchi_lasso_search(const BarBuchi& a) {
    auto bfs = [&](State source, bool start_with_successors, std::optional<State> target,
                   std::vector<std::pair<State, std::uint32_t>>& parent, std::vector<State>& order) {
        std::vector<char> seen(a.num_states(), 0);
        std::deque<State> queue;
        parent.assign(a.num_states(), {static_cast<State>(-1), 0});
        auto visit = [&](State from, std::uint32_t l, State p) {
            if (seen[p])
                return false;
            seen[p] = 1;
            parent[p] = {from, l};
            queue.push_back(p);
            order.push_back(p);
            return target && p == *target;
        };
        if (start_with_successors) {
            for (std::uint32_t l = 0; l < a.alphabet().size(); ++l)
                for (State p : a.successors(source, l))
                    if (visit(source, l, p))
                        return true;
        } else {
            seen[source] = 1;
            queue.push_back(source);
            order.push_back(source);
        }
        while (!queue.empty()) {
            State q = queue.front();
            queue.pop_front();
            for (std::uint32_t l = 0; l < a.alphabet().size(); ++l)
                for (State p : a.successors(q, l))
                    if (visit(q, l, p))
                        return true;
        }
        return false;
    };

    std::vector<std::pair<State, std::uint32_t>> stem_parent;
    std::vector<State> order;
    bfs(a.initial(), false, std::nullopt, stem_parent, order);
    for (State f : order) {
        if (!a.is_final(f))
            continue;
        std::vector<std::pair<State, std::uint32_t>> loop_parent;
        std::vector<State> loop_order;
        if (!bfs(f, true, f, loop_parent, loop_order))
            continue;
        Lasso lasso;
        // loop: walk parents back from f until we leave f's first step
        std::vector<std::pair<State, std::uint32_t>> loop_rev;
        State s = f;
        do {
            auto [from, l] = loop_parent[s];
            loop_rev.emplace_back(s, l);
            s = from;
        } while (s != f);
        lasso.loop_states.push_back(f);
        for (auto it = loop_rev.rbegin(); it != loop_rev.rend(); ++it) {
            lasso.loop.push_back(a.alphabet()[it->second]);
            lasso.loop_states.push_back(it->first);
        }
        std::vector<std::pair<State, std::uint32_t>> stem_rev;
        for (State t = f; t != a.initial(); t = stem_parent[t].first)
            stem_rev.emplace_back(t, stem_parent[t].second);
        lasso.stem_states.push_back(a.initial());
        for (auto it = stem_rev.rbegin(); it != stem_rev.rend(); ++it) {
            lasso.stem.push_back(a.alphabet()[it->second]);
            lasso.stem_states.push_back(it->first);
        }
        return lasso;
    }
    return std::nullopt;
}

/// Replays a lasso on the automaton: every step must be a transition, the
/// loop must close and pass through a final state.
inline bool verify_lasso(const BarBuchi& a, const Lasso& l) {
    if (l.loop.empty() || l.stem_states.size() != l.stem.size() + 1 || l.loop_states.size() != l.loop.size() + 1)
        return false;
    if (l.stem_states.front() != a.initial() || l.loop_states.front() != l.stem_states.back() ||
        l.loop_states.back() != l.loop_states.front())
        return false;
    auto valid = [&](const std::vector<State>& states, const BarString& w) {
        for (std::size_t i = 0; i < w.size(); ++i) {
            auto idx = a.alphabet().index_of(w[i]);
            if (!idx)
                return false;
            const auto& succ = a.successors(states[i], *idx);
            if (!std::binary_search(succ.begin(), succ.end(), states[i + 1]))
                return false;
        }
        return true;
    };
    if (!valid(l.stem_states, l.stem) || !valid(l.loop_states, l.loop))
        return false;
    return std::any_of(l.loop_states.begin(), l.loop_states.end(), [&](State q) { return a.is_final(q); });
}

/// Chain automaton accepting exactly w.
inline BarNfa singleton_automaton(const BarString& w, const BarAlphabet& alphabet) {
    if (!is_over(w, alphabet))
        throw std::invalid_argument("singleton_automaton: word uses letters outside the alphabet");
    BarNfa out(alphabet, w.size() + 1, 0);
    for (std::size_t i = 0; i < w.size(); ++i)
        out.add_transition(static_cast<State>(i), w[i], static_cast<State>(i + 1));
    out.set_final(static_cast<State>(w.size()));
    return out;
}

/// Stem path into a cycle; the cycle entry is the only final state.
inline BarBuchi singleton_automaton(const UltPeriodicWord& x, const BarAlphabet& alphabet) {
    if (!is_over(x, alphabet))
        throw std::invalid_argument("singleton_automaton: word uses letters outside the alphabet");
    const std::size_t u = x.stem.size(), v = x.loop.size();
    BarBuchi out(alphabet, u + v, 0);
    for (std::size_t i = 0; i < u; ++i)
        out.add_transition(static_cast<State>(i), x.stem[i], static_cast<State>(i + 1));
    for (std::size_t i = 0; i < v; ++i)
        out.add_transition(static_cast<State>(u + i), x.loop[i], static_cast<State>(i + 1 == v ? u : u + i + 1));
    out.set_final(static_cast<State>(u));
    return out;
}

} // namespace barlearn
