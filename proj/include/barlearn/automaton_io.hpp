#pragma once

// Line-oriented automaton files:
//
//   alphabet: a b |a |b
//   states: q0 q1 q2
//   initial: q0
//   final: q2
//   trans: q0 |a q1
//
// Tree automata add `signature: f/2 c/0` and bottom-up rules
// `trans: f a q1 q2 -> q3`; they have no initial state. Blank lines and
// lines starting with '#' are ignored.

#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "alphabet.hpp"
#include "errors.hpp"
#include "text.hpp"
#include "tree_automata.hpp"
#include "word_automata.hpp"

namespace barlearn {

inline BarAlphabet parse_alphabet(std::string_view s) { return BarAlphabet(detail::parse_letters(s, 0)); }

inline std::string to_string(const BarAlphabet& a) {
    return to_string(BarString(a.letters().begin(), a.letters().end()));
}

namespace detail {

struct RawAutomaton {
    std::vector<std::pair<std::size_t, std::string>> alphabet, signature, states, initial, final_states;
    std::vector<std::pair<std::size_t, std::vector<std::string>>> trans;
};

inline std::vector<std::string> tokens(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    for (std::string t; in >> t;)
        out.push_back(t);
    return out;
}

[[noreturn]] inline void fail_line(std::size_t line, const std::string& what) {
    throw ParseError("line " + std::to_string(line) + ": " + what, line);
}

inline RawAutomaton read_raw(std::string_view text) {
    RawAutomaton raw;
    std::istringstream in{std::string(text)};
    std::size_t lineno = 0;
    for (std::string line; std::getline(in, line);) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#')
            continue;
        const auto colon = line.find(':');
        if (colon == std::string::npos)
            fail_line(lineno, "expected 'key: values'");
        auto key = tokens(line.substr(0, colon));
        if (key.size() != 1)
            fail_line(lineno, "malformed key");
        const auto values = tokens(line.substr(colon + 1));
        auto push_all = [&](auto& dst) {
            for (const auto& v : values)
                dst.emplace_back(lineno, v);
        };
        if (key[0] == "alphabet")
            push_all(raw.alphabet);
        else if (key[0] == "signature")
            push_all(raw.signature);
        else if (key[0] == "states")
            push_all(raw.states);
        else if (key[0] == "initial")
            push_all(raw.initial);
        else if (key[0] == "final")
            push_all(raw.final_states);
        else if (key[0] == "trans")
            raw.trans.emplace_back(lineno, values);
        else
            fail_line(lineno, "unknown key '" + key[0] + "'");
    }
    return raw;
}

inline BarAlphabet raw_alphabet(const RawAutomaton& raw) {
    std::vector<Letter> letters;
    for (const auto& [line, tok] : raw.alphabet) {
        try {
            letters.push_back(parse_letter(tok));
        } catch (const ParseError& e) {
            fail_line(line, "bad letter '" + tok + "'");
        }
    }
    return BarAlphabet(std::move(letters));
}

class StateTable {
public:
    explicit StateTable(const RawAutomaton& raw) {
        for (const auto& [line, name] : raw.states)
            ids_.try_emplace(name, static_cast<State>(ids_.size()));
    }

    State at(std::size_t line, const std::string& name) const {
        auto it = ids_.find(name);
        if (it == ids_.end())
            fail_line(line, "undeclared state '" + name + "'");
        return it->second;
    }

    std::size_t size() const { return ids_.size(); }

private:
    std::map<std::string, State> ids_;
};

inline Letter letter_in(std::size_t line, const std::string& tok, const BarAlphabet& a) {
    Letter l;
    try {
        l = parse_letter(tok);
    } catch (const ParseError&) {
        fail_line(line, "bad letter '" + tok + "'");
    }
    if (!a.contains(l))
        fail_line(line, "letter '" + tok + "' not in alphabet");
    return l;
}

template <class Acc>
WordAutomaton<Acc> build_word_automaton(const RawAutomaton& raw) {
    if (!raw.signature.empty())
        fail_line(raw.signature.front().first, "signature given for a word automaton");
    const BarAlphabet alphabet = raw_alphabet(raw);
    const StateTable st(raw);
    if (st.size() == 0)
        throw ParseError("no states declared", 0);
    if (raw.initial.empty())
        throw ParseError("no initial state", 0);
    std::vector<State> initials;
    for (const auto& [line, name] : raw.initial)
        initials.push_back(st.at(line, name));
    std::sort(initials.begin(), initials.end());
    initials.erase(std::unique(initials.begin(), initials.end()), initials.end());

    // several initial states: a fresh initial copies their outgoing
    // transitions and finality
    const bool fresh = initials.size() > 1;
    WordAutomaton<Acc> a(alphabet, st.size() + (fresh ? 1 : 0), fresh ? static_cast<State>(st.size()) : initials[0]);
    for (const auto& [line, name] : raw.final_states)
        a.set_final(st.at(line, name));
    for (const auto& [line, t] : raw.trans) {
        if (t.size() != 3)
            fail_line(line, "word transition needs 'from letter to'");
        const State from = st.at(line, t[0]), to = st.at(line, t[2]);
        const Letter l = letter_in(line, t[1], alphabet);
        a.add_transition(from, l, to);
        if (fresh && std::binary_search(initials.begin(), initials.end(), from))
            a.add_transition(a.initial(), l, to);
    }
    if (fresh)
        for (State q : initials)
            if (a.is_final(q))
                a.set_final(a.initial());
    return a;
}

} // namespace detail

inline BarNfa parse_nfa(std::string_view text) {
    return detail::build_word_automaton<FiniteAcceptance>(detail::read_raw(text));
}

inline BarBuchi parse_buchi(std::string_view text) {
    return detail::build_word_automaton<BuchiAcceptance>(detail::read_raw(text));
}

namespace detail {

inline bool add_signature_entry(Signature& sig, const std::string& tok) {
    const auto slash = tok.find('/');
    if (slash == std::string::npos || slash == 0 || slash + 1 == tok.size())
        return false;
    unsigned arity = 0;
    for (char c : tok.substr(slash + 1)) {
        if (c < '0' || c > '9' || arity > 1000)
            return false;
        arity = arity * 10 + static_cast<unsigned>(c - '0');
    }
    try {
        sig.add(tok.substr(0, slash), arity);
    } catch (const std::exception&) {
        return false;
    }
    return true;
}

} // namespace detail

/// `f/2 c/0`
inline Signature parse_signature(std::string_view s) {
    Signature sig;
    std::size_t pos = 0;
    const std::string text(s);
    while (pos < text.size()) {
        const auto b = text.find_first_not_of(" \t\r\n", pos);
        if (b == std::string::npos)
            break;
        const auto e = std::min(text.find_first_of(" \t\r\n", b), text.size());
        if (!detail::add_signature_entry(sig, text.substr(b, e - b)))
            throw ParseError("bad signature entry '" + text.substr(b, e - b) + "'", b);
        pos = e;
    }
    return sig;
}

inline BarNftaBottomUp parse_nfta(std::string_view text) {
    const auto raw = detail::read_raw(text);
    if (raw.signature.empty())
        throw ParseError("tree automaton needs a signature", 0);
    if (!raw.initial.empty())
        detail::fail_line(raw.initial.front().first, "bottom-up tree automata have no initial state");
    Signature sig;
    for (const auto& [line, tok] : raw.signature)
        if (!detail::add_signature_entry(sig, tok))
            detail::fail_line(line, "bad signature entry '" + tok + "' (expected e.g. 'f/2')");
    const BarAlphabet alphabet = detail::raw_alphabet(raw);
    const detail::StateTable st(raw);
    BarNftaBottomUp a(alphabet, sig, st.size());
    for (const auto& [line, name] : raw.final_states)
        a.set_final(st.at(line, name));
    for (const auto& [line, t] : raw.trans) {
        // f letter q1 .. qn -> q
        if (t.size() < 4 || t[t.size() - 2] != "->")
            detail::fail_line(line, "tree transition needs 'symbol letter children... -> state'");
        if (!sig.contains(t[0]))
            detail::fail_line(line, "unknown symbol '" + t[0] + "'");
        const Letter l = detail::letter_in(line, t[1], alphabet);
        std::vector<State> kids;
        for (std::size_t i = 2; i + 2 < t.size(); ++i)
            kids.push_back(st.at(line, t[i]));
        if (kids.size() != sig.arity(t[0]))
            detail::fail_line(line, "arity mismatch for '" + t[0] + "'");
        a.add_rule(t[0], l, kids, st.at(line, t.back()));
    }
    return a;
}

/// True if the text declares a signature, i.e. describes a tree automaton.
inline bool is_tree_automaton_text(std::string_view text) {
    return !detail::read_raw(text).signature.empty();
}

namespace detail {

inline std::string state_list(std::size_t n) {
    std::string out;
    for (std::size_t q = 0; q < n; ++q)
        out += (q ? " q" : "q") + std::to_string(q);
    return out;
}

inline std::string finals_line(const std::vector<State>& finals) {
    std::string out = "final:";
    for (State q : finals)
        out += " q" + std::to_string(q);
    return out + "\n";
}

} // namespace detail

/// Canonical text: states are q0, q1, ... by id, transitions sorted.
template <class Acc>
std::string to_text(const WordAutomaton<Acc>& a) {
    std::string out = "alphabet: " + to_string(a.alphabet()) + "\n";
    out += "states: " + detail::state_list(a.num_states()) + "\n";
    out += "initial: q" + std::to_string(a.initial()) + "\n";
    out += detail::finals_line(a.finals());
    for (State q = 0; q < a.num_states(); ++q)
        for (std::uint32_t l = 0; l < a.alphabet().size(); ++l)
            for (State p : a.successors(q, l))
                out += "trans: q" + std::to_string(q) + " " + to_string(a.alphabet()[l]) + " q" + std::to_string(p) + "\n";
    return out;
}

inline std::string to_text(const BarNftaBottomUp& a) {
    std::string out = "alphabet: " + to_string(a.alphabet()) + "\n";
    out += "signature:";
    for (const auto& [s, n] : a.signature().symbols())
        out += " " + s + "/" + std::to_string(n);
    out += "\nstates: " + detail::state_list(a.num_states()) + "\n";
    out += detail::finals_line(a.finals());
    for (const auto& r : a.rules()) {
        out += "trans: " + a.symbols()[r.symbol] + " " + to_string(a.alphabet()[r.letter]);
        for (State c : r.children)
            out += " q" + std::to_string(c);
        out += " -> q" + std::to_string(r.target) + "\n";
    }
    return out;
}

} // namespace barlearn
