#pragma once

// Text syntax for bar strings (`b a |b a b`), ultimately periodic words
// (`u ; v`), bar trees (`|a.f(a.c, b.c)`) and normal forms (`1 c 2 2`).

#include <cctype>
#include <sstream>
#include <string>
#include <string_view>

#include "errors.hpp"
#include "normal_form.hpp"
#include "syntax.hpp"

namespace barlearn {

namespace detail {

inline bool is_name_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
inline bool is_name_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_'; }

class Cursor {
public:
    explicit Cursor(std::string_view s, std::size_t offset = 0) : s_(s), offset_(offset) {}

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
    }
    bool done() {
        skip_ws();
        return pos_ >= s_.size();
    }
    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }
    std::size_t pos() const { return offset_ + pos_; }
    void advance(std::size_t n) { pos_ += n; }

    void expect(char c) {
        if (peek() != c)
            fail(std::string("expected '") + c + "'");
        ++pos_;
    }
    bool accept(char c) {
        if (peek() != c)
            return false;
        ++pos_;
        return true;
    }

    std::string name() {
        skip_ws();
        if (pos_ >= s_.size() || !is_name_start(s_[pos_]))
            fail("expected a name");
        const std::size_t b = pos_;
        while (pos_ < s_.size() && is_name_char(s_[pos_]))
            ++pos_;
        return std::string(s_.substr(b, pos_ - b));
    }

    Letter letter() {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == '|') {
            ++pos_;
            if (pos_ >= s_.size() || !is_name_start(s_[pos_]))
                fail("bar must be followed immediately by a name");
            return Letter::bar(name());
        }
        return Letter::plain(name());
    }

    [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos()); }

private:
    std::string_view s_;
    std::size_t offset_;
    std::size_t pos_ = 0;
};

inline BarString parse_letters(std::string_view s, std::size_t offset) {
    Cursor c(s, offset);
    BarString out;
    while (!c.done())
        out.push_back(c.letter());
    return out;
}

inline BarTree parse_tree_node(Cursor& c) {
    Letter l = c.letter();
    c.expect('.');
    BarTree t(std::move(l), c.name());
    if (c.accept('(')) {
        if (!c.accept(')')) {
            do {
                t.children.push_back(parse_tree_node(c));
            } while (c.accept(','));
            c.expect(')');
        }
    }
    return t;
}

} // namespace detail

inline Letter parse_letter(std::string_view s) {
    auto w = detail::parse_letters(s, 0);
    if (w.size() != 1)
        throw ParseError("expected exactly one letter", 0);
    return w.front();
}

inline BarString parse_bar_string(std::string_view s) {
    if (auto p = s.find(';'); p != std::string_view::npos)
        throw ParseError("';' is only allowed in ultimately periodic words", p);
    return detail::parse_letters(s, 0);
}

inline UltPeriodicWord parse_up_word(std::string_view s) {
    const auto p = s.find(';');
    if (p == std::string_view::npos)
        throw ParseError("ultimately periodic word needs 'stem ; loop'", s.size());
    if (s.find(';', p + 1) != std::string_view::npos)
        throw ParseError("more than one ';'", s.find(';', p + 1));
    auto stem = detail::parse_letters(s.substr(0, p), 0);
    auto loop = detail::parse_letters(s.substr(p + 1), p + 1);
    if (loop.empty())
        throw ParseError("loop must be nonempty", s.size());
    return {std::move(stem), std::move(loop)};
}

inline BarTree parse_tree(std::string_view s) {
    detail::Cursor c(s);
    BarTree t = detail::parse_tree_node(c);
    if (!c.done())
        c.fail("trailing input after tree");
    return t;
}

inline std::string to_string(const Letter& l) { return (l.is_bar() ? "|" : "") + l.name.str(); }

inline std::string to_string(const BarString& w) {
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i)
            out += ' ';
        out += to_string(w[i]);
    }
    return out;
}

inline std::string to_string(const UltPeriodicWord& x) {
    std::string stem = to_string(x.stem);
    return (stem.empty() ? "" : stem + " ") + "; " + to_string(x.loop);
}

inline std::string to_string(const BarTree& t) {
    std::string out = to_string(t.letter) + "." + t.symbol;
    if (!t.children.empty()) {
        out += '(';
        for (std::size_t i = 0; i < t.children.size(); ++i) {
            if (i)
                out += ", ";
            out += to_string(t.children[i]);
        }
        out += ')';
    }
    return out;
}

inline std::string to_string(const NfSymbol& s) { return s.is_free() ? s.name.str() : std::to_string(s.level); }

inline std::string to_string(const NfString& nf) {
    std::string out;
    for (std::size_t i = 0; i < nf.size(); ++i) {
        if (i)
            out += ' ';
        out += to_string(nf[i]);
    }
    return out;
}

inline std::string to_string(const NfTree& t) {
    std::string out = to_string(t.symbol) + "." + t.fsym;
    if (!t.children.empty()) {
        out += '(';
        for (std::size_t i = 0; i < t.children.size(); ++i) {
            if (i)
                out += ", ";
            out += to_string(t.children[i]);
        }
        out += ')';
    }
    return out;
}

namespace detail {

inline NfSymbol parse_nf_symbol(Cursor& c, std::string_view s) {
    c.skip_ws();
    const std::size_t b = c.pos();
    if (b < s.size() && std::isdigit(static_cast<unsigned char>(s[b]))) {
        std::size_t e = b;
        while (e < s.size() && std::isdigit(static_cast<unsigned char>(s[e])))
            ++e;
        const auto level = std::stoul(std::string(s.substr(b, e - b)));
        if (level == 0)
            c.fail("binding levels start at 1");
        c.advance(e - b);
        return NfSymbol::bound(static_cast<std::uint32_t>(level));
    }
    return NfSymbol::free(Name(c.name()));
}

inline NfTree parse_nf_tree_node(Cursor& c, std::string_view s) {
    NfTree t{parse_nf_symbol(c, s), {}, {}};
    c.expect('.');
    t.fsym = c.name();
    if (c.accept('(') && !c.accept(')')) {
        do {
            t.children.push_back(parse_nf_tree_node(c, s));
        } while (c.accept(','));
        c.expect(')');
    }
    return t;
}

} // namespace detail

/// Inverse of to_string(NfString). Does not check that levels are in range.
inline NfString parse_nf_string(std::string_view s) {
    detail::Cursor c(s);
    NfString out;
    while (!c.done())
        out.push_back(detail::parse_nf_symbol(c, s));
    return out;
}

inline NfTree parse_nf_tree(std::string_view s) {
    detail::Cursor c(s);
    NfTree t = detail::parse_nf_tree_node(c, s);
    if (!c.done())
        c.fail("trailing input after tree");
    return t;
}

/// Classifies input text: tree if it contains '.', ultimately periodic if it
/// contains ';', plain bar string otherwise.
enum class TextKind { String, UltPeriodic, Tree };

inline TextKind classify_text(std::string_view s) {
    if (s.find('.') != std::string_view::npos)
        return TextKind::Tree;
    if (s.find(';') != std::string_view::npos)
        return TextKind::UltPeriodic;
    return TextKind::String;
}

} // namespace barlearn
