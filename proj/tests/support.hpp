#pragma once

// Exhaustive enumeration and brute-force oracles shared by the test suites.
// Nothing here uses normal forms or the closure construction.

#include <climits>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <vector>

#include "barlearn/alphabet.hpp"
#include "barlearn/normal_form.hpp"
#include "barlearn/syntax.hpp"
#include "barlearn/tree_automata.hpp"
#include "barlearn/word_automata.hpp"

namespace testing_support {

using namespace barlearn;

inline Letter P(const char* n) { return Letter::plain(std::string(n)); }
inline Letter B(const char* n) { return Letter::bar(std::string(n)); }

/// Words of length exactly n, in lexicographic order.
inline std::vector<BarString> words_of_length(const BarAlphabet& a, std::size_t n) {
    std::vector<BarString> out{{}};
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<BarString> next;
        for (const auto& w : out)
            for (const auto& l : a) {
                next.push_back(w);
                next.back().push_back(l);
            }
        out.swap(next);
    }
    return out;
}

/// Words of length <= n in shortlex order.
inline std::vector<BarString> words_up_to(const BarAlphabet& a, std::size_t n) {
    std::vector<BarString> out;
    for (std::size_t k = 0; k <= n; ++k) {
        auto w = words_of_length(a, k);
        out.insert(out.end(), w.begin(), w.end());
    }
    return out;
}

/// Trees of depth <= d (a leaf has depth 1).
inline std::vector<BarTree> trees_up_to(const BarAlphabet& a, const Signature& sig, std::size_t d) {
    if (d == 0)
        return {};
    const auto smaller = trees_up_to(a, sig, d - 1);
    std::vector<BarTree> out;
    for (const auto& [sym, arity] : sig.symbols()) {
        std::vector<std::vector<BarTree>> kids{{}};
        for (unsigned i = 0; i < arity; ++i) {
            std::vector<std::vector<BarTree>> next;
            for (const auto& k : kids)
                for (const auto& t : smaller) {
                    next.push_back(k);
                    next.back().push_back(t);
                }
            kids.swap(next);
        }
        for (const auto& l : a)
            for (const auto& k : kids)
                out.emplace_back(l, sym, k);
    }
    return out;
}

/// Generative α-equivalence for trees: plain nodes must agree and children
/// be pairwise equivalent; bar nodes |a, |b rename a resp. b to a common
/// fresh name in every child.
inline bool brute_alpha_eq_tree(const BarTree& s, const BarTree& t) {
    if (s.symbol != t.symbol || s.children.size() != t.children.size() || s.letter.kind != t.letter.kind)
        return false;
    if (s.letter.is_plain()) {
        if (s.letter.name != t.letter.name)
            return false;
        for (std::size_t i = 0; i < s.children.size(); ++i)
            if (!brute_alpha_eq_tree(s.children[i], t.children[i]))
                return false;
        return true;
    }
    auto used = names_of(s);
    for (const auto& n : names_of(t))
        used.insert(n);
    const Name c = FreshNames(used).next();
    const auto ps = Permutation::transposition(s.letter.name, c);
    const auto pt = Permutation::transposition(t.letter.name, c);
    for (std::size_t i = 0; i < s.children.size(); ++i)
        if (!brute_alpha_eq_tree(apply_perm(ps, s.children[i]), apply_perm(pt, t.children[i])))
            return false;
    return true;
}

/// w is α-equivalent to some literally accepted word over the automaton's
/// own alphabet.
inline bool brute_alpha_member(const BarNfa& a, const BarString& w) {
    for (const auto& v : words_of_length(a.alphabet(), w.size()))
        if (literal_member_word(a, v) && brute_alpha_eq(v, w))
            return true;
    return false;
}

inline bool brute_alpha_member(const BarNftaBottomUp& a, const std::vector<BarTree>& source_trees, const BarTree& t) {
    for (const auto& s : source_trees)
        if (s.size() == t.size() && literal_member_tree(a, s) && brute_alpha_eq_tree(s, t))
            return true;
    return false;
}

/// Literal languages restricted to words of length <= n.
inline std::set<BarString> language_up_to(const BarNfa& a, std::size_t n) {
    std::set<BarString> out;
    for (const auto& w : words_up_to(a.alphabet(), n))
        if (literal_member_word(a, w))
            out.insert(w);
    return out;
}

/// Literally accepted words of length exactly n, by walking the transitions.
inline std::set<BarString> accepted_of_length(const BarNfa& a, std::size_t n) {
    std::set<BarString> out;
    BarString w;
    std::function<void(State)> walk = [&](State q) {
        if (w.size() == n) {
            if (a.is_final(q))
                out.insert(w);
            return;
        }
        for (std::uint32_t l = 0; l < a.alphabet().size(); ++l)
            for (State p : a.successors(q, l)) {
                w.push_back(a.alphabet()[l]);
                walk(p);
                w.pop_back();
            }
    };
    walk(a.initial());
    return out;
}

/// Büchi acceptance of stem·loop^ω by searching the graph of (state, loop
/// position) pairs for a reachable cycle through a final state.
inline bool buchi_accepts(const BarBuchi& a, const UltPeriodicWord& x) {
    std::set<State> cur{a.initial()};
    for (const auto& l : x.stem) {
        std::set<State> next;
        auto idx = a.alphabet().index_of(l);
        if (!idx)
            return false;
        for (State q : cur)
            for (State p : a.successors(q, *idx))
                next.insert(p);
        cur.swap(next);
    }
    const std::size_t m = x.loop.size();
    using Node = std::pair<State, std::size_t>;
    auto succ = [&](const Node& n) {
        std::vector<Node> out;
        auto idx = a.alphabet().index_of(x.loop[n.second]);
        if (idx)
            for (State p : a.successors(n.first, *idx))
                out.emplace_back(p, (n.second + 1) % m);
        return out;
    };
    auto reach = [&](std::vector<Node> start) {
        std::set<Node> seen(start.begin(), start.end());
        while (!start.empty()) {
            Node n = start.back();
            start.pop_back();
            for (const auto& s : succ(n))
                if (seen.insert(s).second)
                    start.push_back(s);
        }
        return seen;
    };
    std::vector<Node> init;
    for (State q : cur)
        init.emplace_back(q, 0);
    for (const auto& n : reach(init)) {
        if (!a.is_final(n.first))
            continue;
        auto back = reach(succ(n));
        if (back.count(n))
            return true;
    }
    return false;
}

/// Number of states of the minimal complete DFA, by naive Moore refinement.
inline std::size_t minimal_dfa_size(const BarNfa& a) {
    const BarNfa d = determinize_word(a);
    std::vector<std::size_t> cls(d.num_states());
    for (State q = 0; q < d.num_states(); ++q)
        cls[q] = d.is_final(q) ? 1 : 0;
    for (;;) {
        std::map<std::vector<std::size_t>, std::size_t> ids;
        std::vector<std::size_t> next(d.num_states());
        for (State q = 0; q < d.num_states(); ++q) {
            std::vector<std::size_t> sig{cls[q]};
            for (std::uint32_t l = 0; l < d.alphabet().size(); ++l)
                sig.push_back(cls[d.successors(q, l).front()]);
            next[q] = ids.try_emplace(sig, ids.size()).first->second;
        }
        const std::size_t before = std::set<std::size_t>(cls.begin(), cls.end()).size();
        cls.swap(next);
        if (ids.size() == before)
            return ids.size();
    }
}

/// Same for complete deterministic bottom-up tree automata: two states are
/// merged when they agree on finality and, in every rule with one of them
/// at some position, lead to equivalent targets.
inline std::size_t minimal_dfta_size(const BarNftaBottomUp& a) {
    const BarNftaBottomUp d = determinize_tree(a);
    const std::size_t n = d.num_states();
    std::vector<std::size_t> cls(n);
    for (State q = 0; q < n; ++q)
        cls[q] = d.is_final(q) ? 1 : 0;
    for (;;) {
        std::vector<std::set<std::vector<std::size_t>>> sig(n);
        for (const auto& r : d.rules())
            for (std::size_t i = 0; i < r.children.size(); ++i) {
                std::vector<std::size_t> ctx{r.symbol, r.letter, i};
                for (std::size_t j = 0; j < r.children.size(); ++j)
                    ctx.push_back(j == i ? SIZE_MAX : cls[r.children[j]]);
                ctx.push_back(cls[r.target]);
                sig[r.children[i]].insert(ctx);
            }
        std::map<std::pair<std::size_t, std::set<std::vector<std::size_t>>>, std::size_t> ids;
        std::vector<std::size_t> next(n);
        for (State q = 0; q < n; ++q)
            next[q] = ids.try_emplace({cls[q], sig[q]}, ids.size()).first->second;
        const std::size_t before = std::set<std::size_t>(cls.begin(), cls.end()).size();
        cls.swap(next);
        if (ids.size() == before)
            return ids.size();
    }
}

} // namespace testing_support
