// barlearn: command-line front end.
//
// Exit codes: 0 success / equivalent / accepted, 1 negative verdict,
// 2 usage, parse or other error, 3 limit exceeded.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "barlearn/barlearn.hpp"

using namespace barlearn;

namespace {

enum Exit { Ok = 0, Negative = 1, Error = 2, Limit = 3 };

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw UsageError("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out)
        throw UsageError("cannot write '" + path + "'");
    out << text;
}

int verdict(bool yes, const char* pos, const char* neg) {
    std::cout << (yes ? pos : neg) << "\n";
    return yes ? Ok : Negative;
}

// --kind for automaton files; "auto" picks tree when a signature is declared.
std::string automaton_kind(const std::string& kind, const std::string& text) {
    if (kind != "auto")
        return kind;
    return is_tree_automaton_text(text) ? "tree" : "word";
}

template <class A>
void print_closure_summary(const A& source, const ClosureResult<A>& r) {
    std::cerr << "source states: " << source.num_states() << "\n"
              << "closure states: " << r.states.size() << "\n"
              << "state bound: " << r.state_bound << "\n"
              << "bound check: " << (r.states.size() <= r.state_bound ? "ok" : "VIOLATED") << "\n";
}

struct Options {
    std::string input, input2, file, alphabet, target, kind = "auto", output, stats, policy = "all", adversary = "off",
                                                                      signature = "f/2 c/0";
    bool alpha = false, global = false, discover = false;
    std::uint64_t seed = 0;
    std::size_t length = 6, stem = 2, loop = 3, depth = 3, states = 3, max_restarts = 32, max_cex = 0;
    double density = 0.3;
};

int cmd_nf(const Options& o) {
    switch (classify_text(o.input)) {
    case TextKind::UltPeriodic:
        throw UsageError("ultimately periodic words have no canonical normal form (normalization does not preserve "
                         "ultimate periodicity); use alpha-eq instead");
    case TextKind::Tree:
        std::cout << to_string(nf_tree(parse_tree(o.input))) << "\n";
        return Ok;
    case TextKind::String:
        std::cout << to_string(nf_string(parse_bar_string(o.input))) << "\n";
        return Ok;
    }
    return Error;
}

int cmd_alpha_eq(const Options& o) {
    const auto k = classify_text(o.input);
    if (classify_text(o.input2) != k)
        throw UsageError("inputs are of different kinds");
    bool eq = false;
    if (k == TextKind::String)
        eq = alpha_eq_string(parse_bar_string(o.input), parse_bar_string(o.input2));
    else if (k == TextKind::UltPeriodic)
        eq = alpha_eq_up(parse_up_word(o.input), parse_up_word(o.input2));
    else
        eq = alpha_eq_tree(parse_tree(o.input), parse_tree(o.input2));
    return verdict(eq, "equivalent", "not equivalent");
}

RestrictionPolicy policy_of(const std::string& p) {
    return p == "maximal" ? RestrictionPolicy::Maximal : RestrictionPolicy::All;
}

int cmd_closure(const Options& o) {
    const std::string text = read_file(o.file);
    const std::string kind = automaton_kind(o.kind, text);
    const auto policy = policy_of(o.policy);
    if (kind == "tree") {
        const auto a = parse_nfta(text);
        const auto r = close_tree_detailed(a, o.target.empty() ? a.alphabet() : parse_alphabet(o.target), policy);
        print_closure_summary(a, r);
        write_output(o.output, to_text(r.automaton));
    } else if (kind == "buchi") {
        const auto a = parse_buchi(text);
        const auto r = close_buchi_detailed(a, o.target.empty() ? a.alphabet() : parse_alphabet(o.target), policy);
        print_closure_summary(a, r);
        write_output(o.output, to_text(r.automaton));
    } else {
        const auto a = parse_nfa(text);
        const auto r = close_word_detailed(a, o.target.empty() ? a.alphabet() : parse_alphabet(o.target), policy);
        print_closure_summary(a, r);
        write_output(o.output, to_text(r.automaton));
    }
    return Ok;
}

bool buchi_literal_member(const BarBuchi& a, const UltPeriodicWord& x) {
    if (!is_over(x, a.alphabet()))
        return false;
    return buchi_lasso_search(product_intersection(a, singleton_automaton(x, a.alphabet()))).has_value();
}

int cmd_member(const Options& o) {
    const std::string text = read_file(o.file);
    std::string kind = automaton_kind(o.kind, text);
    if (kind == "word" && o.kind == "auto" && classify_text(o.input) == TextKind::UltPeriodic)
        kind = "buchi";
    bool in = false;
    if (kind == "tree") {
        const auto a = parse_nfta(text);
        const auto t = parse_tree(o.input);
        in = o.alpha ? sim_mq(HiddenTarget<BarNftaBottomUp>{a}, t) : literal_member_tree(a, t);
    } else if (kind == "buchi") {
        const auto a = parse_buchi(text);
        const auto x = parse_up_word(o.input);
        in = o.alpha ? sim_mq_up(HiddenTarget<BarBuchi>{a}, x) : buchi_literal_member(a, x);
    } else {
        const auto a = parse_nfa(text);
        const auto w = parse_bar_string(o.input);
        in = o.alpha ? sim_mq(HiddenTarget<BarNfa>{a}, w) : literal_member_word(a, w);
    }
    return verdict(in, "accept", "reject");
}

int cmd_data_member(const Options& o) {
    const std::string text = read_file(o.file);
    bool in = false;
    if (automaton_kind(o.kind, text) == "tree") {
        const auto a = parse_nfta(text);
        const auto t = parse_tree(o.input);
        in = o.global ? data_member_global(a, t) : data_member_local(a, t);
    } else {
        const auto a = parse_nfa(text);
        std::vector<Name> u;
        for (const auto& l : parse_bar_string(o.input)) {
            if (l.is_bar())
                throw UsageError("data words consist of plain names only");
            u.push_back(l.name);
        }
        in = o.global ? data_member_global(a, u) : data_member_local(a, u);
    }
    return verdict(in, "accept", "reject");
}

template <class Hyp>
nlohmann::ordered_json session_report(const SessionResult<Hyp>& r, const std::string& output) {
    nlohmann::ordered_json j;
    j["membership_queries"] = r.stats.membership_queries;
    j["equivalence_queries"] = r.stats.equivalence_queries;
    j["restarts"] = r.stats.restarts;
    std::vector<std::string> letters;
    for (const auto& l : r.alphabet)
        letters.push_back(to_string(l));
    j["final_alphabet"] = letters;
    j["learned_automaton"] = output.empty() ? "-" : output;
    j["wall_time_ms"] = static_cast<std::uint64_t>(r.wall_time_ms + 0.5);
    return j;
}

template <class Automaton, class LearnerT>
int run_learn(const Options& o, Automaton hidden, LearnerT& learner) {
    AdversaryConfig adv;
    adv.seed = o.seed;
    if (o.adversary == "rename")
        adv.mode = AdversaryMode::RenameOutsideAlphabet;
    SimulatedTeacher<Automaton> teacher(hidden, adv);
    TaConfig cfg;
    cfg.max_restarts = o.max_restarts;
    cfg.max_counterexample_size = o.max_cex;
    cfg.seed = o.seed;
    SessionResult<Automaton> r;
    if (o.discover) {
        if (!o.alphabet.empty())
            cfg.initial_alphabet = parse_alphabet(o.alphabet);
        r = learn_unknown_alphabet(teacher, learner, cfg);
    } else {
        const BarAlphabet a0 = o.alphabet.empty() ? hidden.alphabet() : parse_alphabet(o.alphabet);
        try {
            r = learn_bar_language(teacher, a0, learner, cfg);
        } catch (const AlphabetTooSmall& e) {
            std::cerr << "error: " << e.what() << " (try --discover-alphabet)\n";
            return Negative;
        }
    }
    if (sim_eq(HiddenTarget<Automaton>{hidden}, r.automaton))
        throw std::logic_error("learned automaton differs from the hidden bar language");
    write_output(o.output, to_text(r.automaton));
    const auto report = session_report(r, o.output);
    if (!o.stats.empty()) {
        std::ofstream out(o.stats);
        if (!out)
            throw UsageError("cannot write '" + o.stats + "'");
        out << report.dump(2) << "\n";
    }
    std::cerr << report.dump() << "\n";
    return Ok;
}

int cmd_learn(const Options& o) {
    const std::string text = read_file(o.file);
    const std::string kind = automaton_kind(o.kind, text);
    if (kind == "buchi")
        throw UsageError("learning is supported for word and tree automata only");
    if (o.adversary != "off" && o.adversary != "rename")
        throw UsageError("--adversary must be 'off' or 'rename'");
    if (kind == "tree") {
        const auto hidden = parse_nfta(text);
        TreeLStar learner(hidden.signature());
        return run_learn(o, hidden, learner);
    }
    LStar learner;
    return run_learn(o, parse_nfa(text), learner);
}

int cmd_represent(const Options& o) {
    const BarAlphabet a0 = parse_alphabet(o.alphabet);
    switch (classify_text(o.input)) {
    case TextKind::String:
        if (auto r = representative_word(parse_bar_string(o.input), a0)) {
            std::cout << to_string(*r) << "\n";
            return Ok;
        }
        break;
    case TextKind::UltPeriodic:
        if (auto r = representative_up(parse_up_word(o.input), a0)) {
            std::cout << to_string(*r) << "\n";
            return Ok;
        }
        break;
    case TextKind::Tree:
        if (auto r = representative_tree(parse_tree(o.input), a0)) {
            std::cout << to_string(*r) << "\n";
            return Ok;
        }
        break;
    }
    std::cout << "none\n";
    return Negative;
}

int cmd_extend(const Options& o) {
    const BarAlphabet a0 = parse_alphabet(o.alphabet);
    BarAlphabet r;
    switch (classify_text(o.input)) {
    case TextKind::String:
        r = minimal_extension(parse_bar_string(o.input), a0);
        break;
    case TextKind::UltPeriodic:
        r = minimal_extension_up(parse_up_word(o.input), a0);
        break;
    case TextKind::Tree:
        r = minimal_extension(parse_tree(o.input), a0);
        break;
    }
    std::cout << to_string(r) << "\n";
    return Ok;
}

int cmd_random(const Options& o) {
    Rng rng(o.seed);
    const BarAlphabet a = parse_alphabet(o.alphabet.empty() ? "a |a b |b" : o.alphabet);
    if (a.empty())
        throw UsageError("empty alphabet");
    if (o.density < 0 || o.density > 1)
        throw UsageError("--density must lie in [0, 1]");
    const std::string& k = o.kind;
    if (k == "string")
        write_output(o.output, to_string(random_bar_string(rng, a, o.length)) + "\n");
    else if (k == "up") {
        if (o.loop == 0)
            throw UsageError("--loop must be positive");
        write_output(o.output, to_string(random_up_word(rng, a, o.stem, o.loop)) + "\n");
    } else if (k == "tree") {
        const Signature sig = parse_signature(o.signature);
        if (!sig.has_constant() || o.depth == 0)
            throw UsageError("trees need a constant in the signature and --depth >= 1");
        write_output(o.output, to_string(random_tree(rng, a, sig, o.depth)) + "\n");
    } else if (k == "nfa")
        write_output(o.output, to_text(random_nfa(rng, a, o.states, o.density)));
    else if (k == "buchi")
        write_output(o.output, to_text(random_buchi(rng, a, o.states, o.density)));
    else if (k == "nfta")
        write_output(o.output, to_text(random_nfta(rng, a, parse_signature(o.signature), o.states, o.density)));
    else
        throw UsageError("unknown --kind '" + k + "'");
    return Ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bar strings, bar automata and learning of bar languages"};
    app.require_subcommand(1);
    Options o;

    auto* nf = app.add_subcommand("nf", "De Bruijn normal form of a bar string or tree");
    nf->add_option("input", o.input)->required();

    auto* eq = app.add_subcommand("alpha-eq", "alpha-equivalence of two strings, trees or 'u ; v' words");
    eq->add_option("left", o.input)->required();
    eq->add_option("right", o.input2)->required();

    auto* cl = app.add_subcommand("closure", "closed automaton for a target alphabet");
    cl->add_option("automaton", o.file)->required()->check(CLI::ExistingFile);
    cl->add_option("--target", o.target, "target alphabet (default: the automaton's own)");
    cl->add_option("--kind", o.kind)->check(CLI::IsMember({"auto", "word", "tree", "buchi"}));
    cl->add_option("--policy", o.policy, "register restrictions")->check(CLI::IsMember({"all", "maximal"}));
    cl->add_option("-o,--output", o.output);

    auto* mem = app.add_subcommand("member", "literal or (with --alpha) bar-language membership");
    mem->add_option("automaton", o.file)->required()->check(CLI::ExistingFile);
    mem->add_option("input", o.input)->required();
    mem->add_flag("--alpha", o.alpha);
    mem->add_option("--kind", o.kind)->check(CLI::IsMember({"auto", "word", "tree", "buchi"}));

    auto* dm = app.add_subcommand("data-member", "membership of a data word under local or global freshness");
    dm->add_option("automaton", o.file)->required()->check(CLI::ExistingFile);
    dm->add_option("input", o.input, "names, e.g. 'a b a c'")->required();
    dm->add_flag("--global", o.global, "global freshness (default: local)");
    dm->add_option("--kind", o.kind)->check(CLI::IsMember({"auto", "word", "tree"}));

    auto* le = app.add_subcommand("learn", "learn the bar language of a hidden automaton");
    le->add_option("automaton", o.file)->required()->check(CLI::ExistingFile);
    le->add_option("--kind", o.kind)->check(CLI::IsMember({"auto", "word", "tree"}));
    le->add_option("--alphabet", o.alphabet, "learning alphabet (default: the hidden one)");
    le->add_flag("--discover-alphabet", o.discover, "grow the alphabet from counterexamples, starting from --alphabet");
    le->add_option("--adversary", o.adversary)->check(CLI::IsMember({"off", "rename"}));
    le->add_option("--seed", o.seed);
    le->add_option("--max-restarts", o.max_restarts);
    le->add_option("--max-counterexample-size", o.max_cex, "0 = unlimited");
    le->add_option("-o,--output", o.output, "learned automaton (default: stdout)");
    le->add_option("--stats", o.stats, "session report as JSON");

    auto* rep = app.add_subcommand("represent", "alpha-equivalent input over a given alphabet");
    rep->add_option("input", o.input)->required();
    rep->add_option("--alphabet", o.alphabet)->required();

    auto* ext = app.add_subcommand("extend", "smallest alphabet extension that represents the input");
    ext->add_option("input", o.input)->required();
    ext->add_option("--alphabet", o.alphabet, "starting alphabet (default: empty)");

    auto* rnd = app.add_subcommand("random", "seeded random strings, words, trees and automata");
    rnd->add_option("--kind", o.kind)->required()->check(
        CLI::IsMember({"string", "up", "tree", "nfa", "buchi", "nfta"}));
    rnd->add_option("--seed", o.seed);
    rnd->add_option("--alphabet", o.alphabet, "default 'a |a b |b'");
    rnd->add_option("--signature", o.signature, "default 'f/2 c/0'");
    rnd->add_option("--length", o.length);
    rnd->add_option("--stem", o.stem);
    rnd->add_option("--loop", o.loop);
    rnd->add_option("--depth", o.depth);
    rnd->add_option("--states", o.states);
    rnd->add_option("--density", o.density);
    rnd->add_option("-o,--output", o.output);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return Error;
    }

    try {
        if (*nf)
            return cmd_nf(o);
        if (*eq)
            return cmd_alpha_eq(o);
        if (*cl)
            return cmd_closure(o);
        if (*mem)
            return cmd_member(o);
        if (*dm)
            return cmd_data_member(o);
        if (*le)
            return cmd_learn(o);
        if (*rep)
            return cmd_represent(o);
        if (*ext)
            return cmd_extend(o);
        if (*rnd)
            return cmd_random(o);
    } catch (const LimitExceeded& e) {
        std::cerr << "limit exceeded: " << e.what() << "\n";
        return Limit;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return Error;
    }
    return Error;
}
