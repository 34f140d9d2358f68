#pragma once

// Seeded generators for bar strings, trees and automata. Output depends only
// on the seed and the size parameters.

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "alphabet.hpp"
#include "tree_automata.hpp"
#include "word_automata.hpp"

namespace barlearn {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Independent child stream seeded from this one.
    Rng split() { return Rng(engine_()); }

    std::size_t below(std::size_t n) {
        if (n == 0)
            throw std::invalid_argument("Rng::below(0)");
        return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
    }

    bool chance(double p) { return std::bernoulli_distribution(p)(engine_); }

private:
    std::mt19937_64 engine_;
};

inline BarString random_bar_string(Rng& rng, const BarAlphabet& alphabet, std::size_t length) {
    if (alphabet.empty() && length > 0)
        throw std::invalid_argument("random_bar_string: empty alphabet");
    BarString w;
    for (std::size_t i = 0; i < length; ++i)
        w.push_back(alphabet[rng.below(alphabet.size())]);
    return w;
}

inline UltPeriodicWord random_up_word(Rng& rng, const BarAlphabet& alphabet, std::size_t stem, std::size_t loop) {
    if (loop == 0)
        throw std::invalid_argument("random_up_word: loop length must be positive");
    return {random_bar_string(rng, alphabet, stem), random_bar_string(rng, alphabet, loop)};
}

/// Random tree of depth at most max_depth; leaves are forced at the depth
/// limit, so the signature needs a constant.
inline BarTree random_tree(Rng& rng, const BarAlphabet& alphabet, const Signature& sig, std::size_t max_depth) {
    if (!sig.has_constant() || alphabet.empty() || max_depth == 0)
        throw std::invalid_argument("random_tree: need a constant, a nonempty alphabet and depth >= 1");
    std::vector<std::string> constants, all;
    for (const auto& [s, a] : sig.symbols()) {
        all.push_back(s);
        if (a == 0)
            constants.push_back(s);
    }
    const auto& pool = max_depth == 1 ? constants : all;
    BarTree t(alphabet[rng.below(alphabet.size())], pool[rng.below(pool.size())]);
    for (unsigned i = 0; i < sig.arity(t.symbol); ++i)
        t.children.push_back(random_tree(rng, alphabet, sig, max_depth - 1));
    return t;
}

/// Each (state, letter, state) transition is present with probability
/// `density`; each state is final with probability 1/2.
template <class Acc = FiniteAcceptance>
WordAutomaton<Acc> random_word_automaton(Rng& rng, const BarAlphabet& alphabet, std::size_t states, double density) {
    WordAutomaton<Acc> a(alphabet, states, 0);
    for (State q = 0; q < a.num_states(); ++q) {
        a.set_final(q, rng.chance(0.5));
        for (std::uint32_t l = 0; l < alphabet.size(); ++l)
            for (State p = 0; p < a.num_states(); ++p)
                if (rng.chance(density))
                    a.add_transition(q, l, p);
    }
    return a;
}

inline BarNfa random_nfa(Rng& rng, const BarAlphabet& alphabet, std::size_t states, double density = 0.3) {
    return random_word_automaton<FiniteAcceptance>(rng, alphabet, states, density);
}

inline BarBuchi random_buchi(Rng& rng, const BarAlphabet& alphabet, std::size_t states, double density = 0.3) {
    return random_word_automaton<BuchiAcceptance>(rng, alphabet, states, density);
}

/// Every rule over (symbol, letter, child states, target) is present with
/// probability `density`.
inline BarNftaBottomUp random_nfta(Rng& rng, const BarAlphabet& alphabet, const Signature& sig, std::size_t states,
                                   double density = 0.2) {
    BarNftaBottomUp a(alphabet, sig, states);
    if (states == 0)
        return a;
    for (State q = 0; q < states; ++q)
        a.set_final(q, rng.chance(0.5));
    for (std::uint32_t s = 0; s < a.symbols().size(); ++s) {
        const unsigned n = a.arity(s);
        std::vector<State> kids(n, 0);
        for (;;) {
            for (std::uint32_t l = 0; l < alphabet.size(); ++l)
                for (State q = 0; q < states; ++q)
                    if (rng.chance(density))
                        a.add_rule(TreeRule{s, l, kids, q});
            std::size_t i = 0;
            while (i < n && ++kids[i] == states)
                kids[i++] = 0;
            if (i == n)
                break;
        }
    }
    return a;
}

} // namespace barlearn
