#pragma once

// Minimally adequate teacher interface and two table-based learners over a
// fixed finite alphabet: L* for deterministic word automata and a
// bottom-up observation-table learner for deterministic tree automata.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "alphabet.hpp"
#include "errors.hpp"
#include "syntax.hpp"
#include "tree_automata.hpp"
#include "word_automata.hpp"

namespace barlearn {

template <class Item, class Hypothesis>
class Teacher {
public:
    using item_type = Item;
    using hypothesis_type = Hypothesis;

    virtual ~Teacher() = default;
    virtual bool membership(const Item& x) = 0;
    /// Nothing if the hypothesis is correct, otherwise a counterexample.
    virtual std::optional<Item> equivalence(const Hypothesis& h) = 0;
};

using WordTeacher = Teacher<BarString, BarNfa>;
using TreeTeacher = Teacher<BarTree, BarNftaBottomUp>;

struct QueryStats {
    std::size_t membership_queries = 0;
    std::size_t equivalence_queries = 0;
    std::size_t restarts = 0;

    QueryStats& operator+=(const QueryStats& o) {
        membership_queries += o.membership_queries;
        equivalence_queries += o.equivalence_queries;
        restarts += o.restarts;
        return *this;
    }
};

template <class Hypothesis>
struct LearnResult {
    Hypothesis automaton;
    QueryStats stats;
};

/// Raised when teacher answers contradict each other.
class InconsistentTeacher : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

template <class Item, class Hypothesis>
class Learner {
public:
    virtual ~Learner() = default;
    /// Runs a fresh session against the teacher over the given alphabet.
    virtual LearnResult<Hypothesis> learn(Teacher<Item, Hypothesis>& teacher, const BarAlphabet& alphabet) = 0;
};

using WordLearner = Learner<BarString, BarNfa>;
using TreeLearner = Learner<BarTree, BarNftaBottomUp>;

/// Teaches the literal language of a fixed automaton; counterexamples are
/// least witnesses of the symmetric difference.
template <class Item, class Hypothesis>
class LiteralTeacher : public Teacher<Item, Hypothesis> {
public:
    explicit LiteralTeacher(Hypothesis target) : target_(std::move(target)) {}

    bool membership(const Item& x) override { return member(x); }
    std::optional<Item> equivalence(const Hypothesis& h) override { return shortest_in_symmetric_difference(h, target_); }

    const Hypothesis& target() const { return target_; }

private:
    bool member(const BarString& w) const { return literal_member_word(target_, w); }
    bool member(const BarTree& t) const { return literal_member_tree(target_, t); }

    Hypothesis target_;
};

using LiteralWordTeacher = LiteralTeacher<BarString, BarNfa>;
using LiteralTreeTeacher = LiteralTeacher<BarTree, BarNftaBottomUp>;

// ---------------------------------------------------------------------------
// Words

/// Rows are a prefix-closed set of words (kept in shortlex order), columns a
/// suffix-closed list of words in insertion order.
class ObservationTable {
public:
    ObservationTable(WordTeacher& teacher, BarAlphabet alphabet, QueryStats& stats)
        : teacher_(teacher), alphabet_(std::move(alphabet)), stats_(stats) {
        rows_.insert(BarString{});
        columns_.push_back(BarString{});
    }

    const BarAlphabet& alphabet() const { return alphabet_; }
    const std::set<BarString, ShortlexLess>& rows() const { return rows_; }
    const std::vector<BarString>& columns() const { return columns_; }

    bool query(const BarString& w) {
        auto it = cache_.find(w);
        if (it != cache_.end())
            return it->second;
        ++stats_.membership_queries;
        const bool r = teacher_.membership(w);
        cache_.emplace(w, r);
        return r;
    }

    std::vector<bool> row(const BarString& s) {
        std::vector<bool> out;
        out.reserve(columns_.size());
        for (const auto& e : columns_)
            out.push_back(query(concat(s, e)));
        return out;
    }

    /// Least one-letter extension whose row matches no row of S.
    std::optional<BarString> closedness_defect() {
        std::set<std::vector<bool>> known;
        for (const auto& s : rows_)
            known.insert(row(s));
        for (const auto& s : rows_)
            for (const auto& l : alphabet_) {
                BarString t = s;
                t.push_back(l);
                if (!rows_.count(t) && !known.count(row(t)))
                    return t;
            }
        return std::nullopt;
    }

    /// Column a·e separating two equal rows after reading a.
    std::optional<BarString> consistency_defect() {
        std::vector<BarString> s(rows_.begin(), rows_.end());
        for (std::size_t i = 0; i < s.size(); ++i)
            for (std::size_t j = i + 1; j < s.size(); ++j) {
                if (row(s[i]) != row(s[j]))
                    continue;
                for (const auto& l : alphabet_)
                    for (const auto& e : columns_) {
                        BarString le{l};
                        le.insert(le.end(), e.begin(), e.end());
                        if (query(concat(s[i], le)) != query(concat(s[j], le)))
                            return le;
                    }
            }
        return std::nullopt;
    }

    bool closed() { return !closedness_defect(); }
    bool consistent() { return !consistency_defect(); }

    void add_row_with_prefixes(const BarString& w) {
        for (std::size_t n = 0; n <= w.size(); ++n)
            rows_.insert(BarString(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(n)));
    }

    void add_column(const BarString& e) {
        if (std::find(columns_.begin(), columns_.end(), e) == columns_.end())
            columns_.push_back(e);
    }

    /// Closes and makes consistent, then reads off the hypothesis DFA. States
    /// are numbered by the shortlex-least row representative.
    BarNfa hypothesis() {
        for (;;) {
            if (auto t = closedness_defect()) {
                rows_.insert(*t);
                continue;
            }
            if (auto e = consistency_defect()) {
                add_column(*e);
                continue;
            }
            break;
        }
        std::map<std::vector<bool>, State> ids;
        std::vector<BarString> reps;
        for (const auto& s : rows_)
            if (ids.try_emplace(row(s), static_cast<State>(reps.size())).second)
                reps.push_back(s);
        BarNfa h(alphabet_, reps.size(), ids.at(row(BarString{})));
        for (State q = 0; q < reps.size(); ++q) {
            h.set_final(q, query(reps[q]));
            for (std::uint32_t l = 0; l < alphabet_.size(); ++l) {
                BarString t = reps[q];
                t.push_back(alphabet_[l]);
                h.add_transition(q, l, ids.at(row(t)));
            }
        }
        return h;
    }

private:
    WordTeacher& teacher_;
    BarAlphabet alphabet_;
    QueryStats& stats_;
    std::set<BarString, ShortlexLess> rows_;
    std::vector<BarString> columns_;
    std::map<BarString, bool> cache_;
};

struct LStarOptions {
    /// Called with the closed and consistent table right before each
    /// equivalence query.
    std::function<void(ObservationTable&)> on_equivalence;
    /// 0 means unlimited.
    std::size_t max_equivalence_queries = 0;
};

class LStar : public WordLearner {
public:
    explicit LStar(LStarOptions options = {}) : options_(std::move(options)) {}

    LearnResult<BarNfa> learn(WordTeacher& teacher, const BarAlphabet& alphabet) override {
        LearnResult<BarNfa> res;
        ObservationTable table(teacher, alphabet, res.stats);
        for (;;) {
            BarNfa h = table.hypothesis();
            if (options_.on_equivalence)
                options_.on_equivalence(table);
            if (options_.max_equivalence_queries && res.stats.equivalence_queries >= options_.max_equivalence_queries)
                throw LimitExceeded("L*: equivalence query limit reached");
            ++res.stats.equivalence_queries;
            auto cex = teacher.equivalence(h);
            if (!cex) {
                res.automaton = std::move(h);
                return res;
            }
            if (!is_over(*cex, alphabet))
                throw InconsistentTeacher("counterexample uses letters outside the learning alphabet");
            if (table.query(*cex) == literal_member_word(h, *cex))
                throw InconsistentTeacher("counterexample is classified correctly by the hypothesis");
            table.add_row_with_prefixes(*cex);
        }
    }

private:
    LStarOptions options_;
};

// ---------------------------------------------------------------------------
// Trees

/// One step of a context from the hole outwards: letter.symbol(siblings)
/// with the hole at `position`.
struct ContextFrame {
    Letter letter;
    std::string symbol;
    std::size_t position = 0;
    std::vector<BarTree> siblings; // arity - 1 trees, in order, hole removed

    friend bool operator==(const ContextFrame&, const ContextFrame&) = default;
};

/// One-hole context, innermost frame first; empty = the trivial hole.
using TreeContext = std::vector<ContextFrame>;

inline BarTree plug(const TreeContext& c, BarTree t) {
    for (const auto& f : c) {
        BarTree n(f.letter, f.symbol);
        n.children = f.siblings;
        n.children.insert(n.children.begin() + static_cast<std::ptrdiff_t>(f.position), std::move(t));
        t = std::move(n);
    }
    return t;
}

inline void subtrees(const BarTree& t, std::vector<BarTree>& out) {
    for (const auto& c : t.children)
        subtrees(c, out);
    out.push_back(t);
}

/// Rows S are a subtree-closed set of trees in tree order; extensions are the
/// trees letter.f(s1..sn) with all si in S that are not themselves in S.
class TreeObservationTable {
public:
    TreeObservationTable(TreeTeacher& teacher, BarAlphabet alphabet, Signature sig, QueryStats& stats)
        : teacher_(teacher), alphabet_(std::move(alphabet)), sig_(std::move(sig)), stats_(stats) {
        contexts_.push_back({});
    }

    const std::set<BarTree, TreeLess>& rows() const { return rows_; }
    const std::vector<TreeContext>& contexts() const { return contexts_; }

    bool query(const BarTree& t) {
        auto it = cache_.find(t);
        if (it != cache_.end())
            return it->second;
        ++stats_.membership_queries;
        const bool r = teacher_.membership(t);
        cache_.emplace(t, r);
        return r;
    }

    std::vector<bool> row(const BarTree& t) {
        std::vector<bool> out;
        out.reserve(contexts_.size());
        for (const auto& c : contexts_)
            out.push_back(query(plug(c, t)));
        return out;
    }

    /// All letter.f(s1..sn) with si in S, in tree order.
    std::vector<BarTree> candidates() const {
        std::vector<BarTree> out;
        const std::vector<BarTree> s(rows_.begin(), rows_.end());
        for (const auto& [sym, arity] : sig_.symbols()) {
            std::vector<std::size_t> pick(arity, 0);
            if (arity > 0 && s.empty())
                continue;
            for (;;) {
                for (const auto& l : alphabet_) {
                    BarTree t(l, sym);
                    for (auto i : pick)
                        t.children.push_back(s[i]);
                    out.push_back(std::move(t));
                }
                std::size_t i = 0;
                while (i < pick.size() && ++pick[i] == s.size())
                    pick[i++] = 0;
                if (i == pick.size())
                    break;
            }
        }
        std::sort(out.begin(), out.end(), tree_less);
        return out;
    }

    std::optional<BarTree> closedness_defect() {
        std::set<std::vector<bool>> known;
        for (const auto& s : rows_)
            known.insert(row(s));
        for (const auto& t : candidates())
            if (!rows_.count(t) && !known.count(row(t)))
                return t;
        return std::nullopt;
    }

    /// New context letter.f(.., [], ..)[c] separating two equal rows.
    std::optional<TreeContext> consistency_defect() {
        const std::vector<BarTree> s(rows_.begin(), rows_.end());
        for (std::size_t i = 0; i < s.size(); ++i)
            for (std::size_t j = i + 1; j < s.size(); ++j) {
                if (row(s[i]) != row(s[j]))
                    continue;
                if (auto c = separating_context(s, s[i], s[j]))
                    return c;
            }
        return std::nullopt;
    }

    void add_row_with_subtrees(const BarTree& t) {
        std::vector<BarTree> subs;
        subtrees(t, subs);
        for (auto& x : subs)
            rows_.insert(std::move(x));
    }

    void add_context(TreeContext c) {
        if (std::find(contexts_.begin(), contexts_.end(), c) == contexts_.end())
            contexts_.push_back(std::move(c));
    }

    /// Closes and makes consistent, then reads off a complete DFTA whose
    /// states are the distinct rows of S.
    BarNftaBottomUp hypothesis() {
        for (;;) {
            if (auto t = closedness_defect()) {
                add_row_with_subtrees(*t);
                continue;
            }
            if (auto c = consistency_defect()) {
                add_context(std::move(*c));
                continue;
            }
            break;
        }
        std::map<std::vector<bool>, State> ids;
        std::vector<BarTree> reps;
        for (const auto& s : rows_)
            if (ids.try_emplace(row(s), static_cast<State>(reps.size())).second)
                reps.push_back(s);
        BarNftaBottomUp h(alphabet_, sig_, reps.size());
        for (State q = 0; q < reps.size(); ++q)
            h.set_final(q, query(reps[q]));
        for (std::uint32_t sym = 0; sym < h.symbols().size(); ++sym) {
            const unsigned arity = h.arity(sym);
            if (arity > 0 && reps.empty())
                continue;
            std::vector<State> pick(arity, 0);
            for (;;) {
                for (std::uint32_t l = 0; l < alphabet_.size(); ++l) {
                    BarTree t(alphabet_[l], h.symbols()[sym]);
                    for (State q : pick)
                        t.children.push_back(reps[q]);
                    h.add_rule(TreeRule{sym, l, pick, ids.at(row(t))});
                }
                std::size_t i = 0;
                while (i < pick.size() && ++pick[i] == reps.size())
                    pick[i++] = 0;
                if (i == pick.size())
                    break;
            }
        }
        return h;
    }

private:
    std::optional<TreeContext> separating_context(const std::vector<BarTree>& s, const BarTree& x, const BarTree& y) {
        for (const auto& [sym, arity] : sig_.symbols()) {
            for (std::size_t pos = 0; pos < arity; ++pos) {
                std::vector<std::size_t> pick(arity - 1, 0);
                for (;;) {
                    std::vector<BarTree> sib;
                    for (auto k : pick)
                        sib.push_back(s[k]);
                    for (const auto& l : alphabet_) {
                        const ContextFrame frame{l, sym, pos, sib};
                        for (const auto& c : contexts_) {
                            TreeContext ext{frame};
                            ext.insert(ext.end(), c.begin(), c.end());
                            if (query(plug(ext, x)) != query(plug(ext, y)))
                                return ext;
                        }
                    }
                    std::size_t i = 0;
                    while (i < pick.size() && ++pick[i] == s.size())
                        pick[i++] = 0;
                    if (i == pick.size())
                        break;
                }
            }
        }
        return std::nullopt;
    }

    TreeTeacher& teacher_;
    BarAlphabet alphabet_;
    Signature sig_;
    QueryStats& stats_;
    std::set<BarTree, TreeLess> rows_;
    std::vector<TreeContext> contexts_;
    std::map<BarTree, bool, TreeLess> cache_;
};

struct TreeLStarOptions {
    std::function<void(TreeObservationTable&)> on_equivalence;
    std::size_t max_equivalence_queries = 0;
};

class TreeLStar : public TreeLearner {
public:
    explicit TreeLStar(Signature sig, TreeLStarOptions options = {})
        : sig_(std::move(sig)), options_(std::move(options)) {}

    const Signature& signature() const { return sig_; }

    LearnResult<BarNftaBottomUp> learn(TreeTeacher& teacher, const BarAlphabet& alphabet) override {
        LearnResult<BarNftaBottomUp> res;
        TreeObservationTable table(teacher, alphabet, sig_, res.stats);
        for (;;) {
            BarNftaBottomUp h = table.hypothesis();
            if (options_.on_equivalence)
                options_.on_equivalence(table);
            if (options_.max_equivalence_queries && res.stats.equivalence_queries >= options_.max_equivalence_queries)
                throw LimitExceeded("tree learner: equivalence query limit reached");
            ++res.stats.equivalence_queries;
            auto cex = teacher.equivalence(h);
            if (!cex) {
                res.automaton = std::move(h);
                return res;
            }
            if (!conforms(*cex, sig_) || !is_over(*cex, alphabet))
                throw InconsistentTeacher("counterexample outside the learning alphabet or signature");
            if (table.query(*cex) == literal_member_tree(h, *cex))
                throw InconsistentTeacher("counterexample is classified correctly by the hypothesis");
            table.add_row_with_subtrees(*cex);
        }
    }

private:
    Signature sig_;
    TreeLStarOptions options_;
};

} // namespace barlearn
