#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "ordalg/equivalence.hpp"
#include "ordalg/io.hpp"
#include "ordalg/pi/parser.hpp"
#include "ordalg/pi/translate.hpp"
#include "ordalg/selftest.hpp"

namespace {

using namespace ordalg;

enum class Exit { ok = 0, inequivalent = 1, usage = 2, unsupported = 3 };
enum class Format { text, dot, jsonl };

struct Options {
    std::string semiring = "nat";
    std::string route = "basis";
    std::size_t max_support = 4;
    std::vector<std::string> alphabet;
    std::string format = "text";
    std::vector<std::string> inputs;
};

/// A path that exists is read; anything else is taken as inline text.
std::string load(const std::string& input) {
    std::error_code ec;
    if (!std::filesystem::is_regular_file(input, ec)) return input;
    std::ifstream in(input);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

Format parse_format(const std::string& f) {
    if (f == "text") return Format::text;
    if (f == "dot") return Format::dot;
    if (f == "jsonl") return Format::jsonl;
    throw UsageError("unknown format '" + f + "'");
}

Route parse_route(const std::string& r) {
    if (r == "basis") return Route::basis;
    if (r == "oracle") return Route::oracle;
    throw UsageError("unknown route '" + r + "'");
}

template <Semiring S>
std::vector<std::string> alphabet_for(const Options& o, const std::vector<pi::Term<S>>& terms) {
    if (!o.alphabet.empty()) return o.alphabet;
    std::set<std::string> names;
    for (const auto& t : terms) names.merge(pi::free_names(t));
    return {names.begin(), names.end()};
}

template <Semiring S>
void print_vector(const Vector<S>& u, Format format) {
    switch (format) {
        case Format::text: std::cout << io::format_vector(u); break;
        case Format::jsonl: std::cout << io::format_vector_jsonl(u); break;
        case Format::dot: {
            std::size_t i = 0;
            for (const auto& [r, c] : u.terms()) {
                std::cout << "// coefficient " << S::format(c) << "\n";
                std::cout << io::play_dot(u.arena(), r, "play" + std::to_string(i++));
            }
            break;
        }
    }
}

void print_play(const Arena& arena, const Play& r, Format format) {
    switch (format) {
        case Format::text: std::cout << io::format_play(arena, r) << "\n"; break;
        case Format::jsonl: std::cout << io::play_json(arena, r).dump() << "\n"; break;
        case Format::dot:
            if (is_consistent(r))
                std::cout << io::play_dot(arena, r, "probe");
            else  // a cyclic probe has no Hasse diagram
                std::cout << "// " << io::format_play(arena, r) << "\n";
            break;
    }
}

template <Semiring S>
Exit eval(const Options& o) {
    const auto p = pi::parse_term<S>(load(o.inputs.at(0)));
    std::cout << S::format(pi::outcome_term(p)) << "\n";
    return Exit::ok;
}

template <Semiring S>
Exit translate(const Options& o) {
    const auto p = pi::parse_term<S>(load(o.inputs.at(0)));
    print_vector(pi::translate(p, alphabet_for<S>(o, {p})), parse_format(o.format));
    return Exit::ok;
}

template <Semiring S>
Exit equiv(const Options& o) {
    const auto p = pi::parse_term<S>(load(o.inputs.at(0)));
    const auto q = pi::parse_term<S>(load(o.inputs.at(1)));
    const auto alphabet = alphabet_for<S>(o, {p, q});
    const auto u = pi::translate(p, alphabet);
    const auto v = pi::translate(q, alphabet);
    const auto report = decide_equivalence(u, v, parse_route(o.route), o.max_support, true);
    if (report.equivalent) {
        std::cout << "equivalent\n";
        return Exit::ok;
    }
    std::cout << "not equivalent\n";
    if (report.separating_probe) {
        const Vector<S> t(u.arena(), *report.separating_probe);
        std::cout << "separating probe (outcomes " << S::format(pairing(u, t)) << " vs " << S::format(pairing(v, t))
                  << "):\n";
        print_play(u.arena(), *report.separating_probe, parse_format(o.format));
    }
    return Exit::inequivalent;
}

template <Semiring S>
Exit probe(const Options& o) {
    auto p = pi::parse_term<S>(load(o.inputs.at(0)));
    auto q = pi::parse_term<S>(load(o.inputs.at(1)));
    std::tie(p, q) = pi::par_apart(p, q);
    const auto alphabet = alphabet_for<S>(o, {p, q});
    const auto operational = pi::outcome_term(pi::Term<S>::par(p, q));
    const auto denotational = pairing(pi::translate(p, alphabet), pi::bar(pi::translate(q, alphabet)));
    std::cout << "operational  " << S::format(operational) << "\n";
    std::cout << "denotational " << S::format(denotational) << "\n";
    return Exit::ok;
}

template <Semiring S>
void print_decomposition(const Decomposition<S>& d, const Arena& arena) {
    std::cout << "base " << to_string(d.base) << "\n";
    if (d.coords.empty()) std::cout << "0\n";
    for (const auto& [p, c] : d.coords) std::cout << S::format(c) << " " << io::format_play(arena, p) << "\n";
}

/// Vector files are written in total orders (idempotent semirings) or weak total orders. Term
/// denotations have wide plays, so they are written in block products of those orders.
template <Semiring S>
Exit basis(const Options& o) {
    const std::string text = load(o.inputs.at(0));
    const bool vector_file = io::detail::trim(text).starts_with("arena");
    if (vector_file) {
        const Vector<S> u = io::parse_vector_file<S>(text);
        if constexpr (S::properties.idempotent)
            print_decomposition(decompose_totals(psplit(u)), u.arena());
        else if constexpr (std::same_as<S, Rational>)
            print_decomposition(decompose_weak(psplit(u)), u.arena());
        else if constexpr (embeds_in_rationals<S>)
            print_decomposition(decompose_weak(psplit(embed_to_rat(u))), u.arena());
        else
            throw UnsupportedError("no basis: the semiring is neither idempotent nor embeddable in the rationals");
        return Exit::ok;
    }
    const auto p = pi::parse_term<S>(text);
    const Vector<S> u = pi::translate(p, alphabet_for<S>(o, {p}));
    const Vector<S> none(u.arena());
    if constexpr (S::properties.idempotent) {
        print_decomposition(joint_block_decomposition(psplit(u), psplit(none), false).first, u.arena());
    } else if constexpr (std::same_as<S, Rational>) {
        print_decomposition(joint_block_decomposition(psplit(u), psplit(none), true).first, u.arena());
    } else if constexpr (embeds_in_rationals<S>) {
        print_decomposition(joint_block_decomposition(psplit(embed_to_rat(u)), psplit(embed_to_rat(none)), true).first,
                            u.arena());
    } else {
        throw UnsupportedError("no basis: the semiring is neither idempotent nor embeddable in the rationals");
    }
    return Exit::ok;
}

Exit selftest() {
    bool all = true;
    selftest::run_all(selftest::seed(), [&](const selftest::Result& r) {
        std::cout << selftest::format(r) << std::endl;
        all = all && r.passed;
    });
    return all ? Exit::ok : Exit::inequivalent;
}

template <Semiring S>
Exit dispatch(const std::string& command, const Options& o) {
    if (command == "eval") return eval<S>(o);
    if (command == "translate") return translate<S>(o);
    if (command == "equiv") return equiv<S>(o);
    if (command == "probe") return probe<S>(o);
    if (command == "basis") return basis<S>(o);
    throw UsageError("unknown command " + command);
}

Exit run(const std::string& command, const Options& o) {
    if (command == "selftest") return selftest();
    const auto& s = o.semiring;
    if (s == "nat") return dispatch<Natural>(command, o);
    if (s == "int") return dispatch<Integer>(command, o);
    if (s == "rat") return dispatch<Rational>(command, o);
    if (s == "bool") return dispatch<Boolean>(command, o);
    if (s == "maymust-may") return dispatch<MayTesting>(command, o);
    if (s == "maymust-must") return dispatch<MustTesting>(command, o);
    throw UsageError("unknown semiring '" + s + "'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ordalg: order-algebra semantics for finite processes"};
    app.require_subcommand(1);
    Options o;
    const std::vector<std::string> semirings{"nat", "int", "rat", "bool", "maymust-may", "maymust-must"};

    auto common = [&](CLI::App* sub, std::size_t inputs, const std::string& what) {
        sub->add_option("--semiring", o.semiring, "coefficient semiring")
            ->check(CLI::IsMember(semirings))
            ->capture_default_str();
        sub->add_option("--alphabet", o.alphabet, "free names of the channel arena (comma separated)")->delimiter(',');
        sub->add_option("--format", o.format, "output format")
            ->check(CLI::IsMember({"text", "dot", "jsonl"}))
            ->capture_default_str();
        sub->add_option("inputs", o.inputs, what)->required()->expected(static_cast<int>(inputs));
    };
    auto* eval = app.add_subcommand("eval", "print the outcome of a term");
    common(eval, 1, "term or file");
    auto* translate = app.add_subcommand("translate", "print the denotation of a term, one trace per line");
    common(translate, 1, "term or file");
    auto* equiv = app.add_subcommand("equiv", "decide observational equivalence of two terms");
    common(equiv, 2, "two terms or files");
    equiv->add_option("--route", o.route, "decision route")->check(CLI::IsMember({"basis", "oracle"}))->capture_default_str();
    equiv->add_option("--max-support", o.max_support, "largest probe support for the oracle route")->capture_default_str();
    auto* probe = app.add_subcommand("probe", "print the outcome of P | Q next to the pairing of the denotations");
    common(probe, 2, "two terms or files");
    auto* basis = app.add_subcommand("basis", "decompose a vector file or a term's denotation");
    common(basis, 1, "vector file, term or file");
    app.add_subcommand("selftest", "run the acceptance checks (ORDALG_SEED fixes the random corpora)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : static_cast<int>(Exit::usage);
    }
    try {
        return static_cast<int>(run(app.get_subcommands().front()->get_name(), o));
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return static_cast<int>(Exit::usage);
    } catch (const UnsupportedError& e) {
        std::cerr << "unsupported: " << e.what() << "\n";
        return static_cast<int>(Exit::unsupported);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(Exit::usage);
    }
}
