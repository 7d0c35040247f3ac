#include <catch_amalgamated.hpp>

#include <random>

#include "ordalg/pi/corpus.hpp"
#include "ordalg/pi/lts.hpp"
#include "ordalg/pi/parser.hpp"

using namespace ordalg;
using namespace ordalg::pi;

namespace {

using LabelKey = std::pair<Location, Location>;
using Summary = std::map<std::vector<LabelKey>, std::pair<std::string, std::set<std::pair<LabelKey, LabelKey>>>>;

LabelKey key_of(const Label& l) { return {l.first, l.internal ? l.second : -1}; }

template <Semiring S>
void record(Summary& out, const Interaction<S>& rho) {
    std::vector<LabelKey> key;
    for (const auto& l : rho.labels) key.push_back(key_of(l));
    std::set<std::pair<LabelKey, LabelKey>> order;
    for (std::size_t i = 0; i < rho.labels.size(); ++i)
        for (std::size_t j = 0; j < rho.labels.size(); ++j)
            if (rho.precedes(i, j)) order.emplace(key[i], key[j]);
    std::sort(key.begin(), key.end());
    CHECK(out.emplace(key, std::make_pair(canonical_text(rho.result), order)).second);
}

// Sleep-set exploration against the reference enumeration of all paths.
template <Semiring S>
void compare_with_reference(const Term<S>& p, const ExploreOptions& options) {
    Summary explored;
    const Dependence dep(p);
    explore<S>(p, options, [&](const std::vector<Label>& path, const Term<S>& q, bool) {
        record(explored, Interaction<S>{path, causal_order(dep, path), q});
    });
    Summary reference;
    for (const auto& rho : quotient_paths(p, options, false)) record(reference, rho);
    CHECK(explored == reference);
}

std::vector<std::string> labels_of(const Term<Natural>& p) {
    std::vector<std::string> out;
    for (const auto& t : transitions(p)) out.push_back(t.label.text());
    return out;
}

}  // namespace

TEST_CASE("transitions of small terms", "[pi][lts]") {
    CHECK(labels_of(parse_term<Natural>("a?(x).{1}")) == std::vector<std::string>{"a?@1"});
    CHECK(labels_of(parse_term<Natural>("a?(x).{1} | a!(y).{1}")) == std::vector<std::string>{"a?@1", "a!@2", "{1,2}"});
    CHECK(labels_of(parse_term<Natural>("new a in (a?(x).{1} | a!(y).{1})")) == std::vector<std::string>{"{1,2}"});
    CHECK(labels_of(parse_term<Natural>("new a in a?(x).{1}")).empty());
    CHECK(labels_of(parse_term<Natural>("a?(x).{1} + b!(y).{1}")) == std::vector<std::string>{"a?@1", "b!@2"});
    CHECK(labels_of(parse_term<Natural>("{3}")).empty());
}

TEST_CASE("objects follow the abstract channel discipline", "[pi][lts]") {
    const auto p = parse_term<Natural>("a?(x).x!(y).{1} | a!(z).z?(w).{1}");
    const auto step = transitions(p);
    const auto comm = std::find_if(step.begin(), step.end(), [](const auto& t) { return t.label.internal; });
    REQUIRE(comm != step.end());
    const auto next = transitions(comm->target);
    CHECK(std::count_if(next.begin(), next.end(), [](const auto& t) { return t.label.internal; }) == 1);
}

TEST_CASE("runs and outcomes", "[pi][lts]") {
    const auto race = parse_term<Natural>("(a?(x).{1} | a!(y).{1}) | a?(z).{1}");
    CHECK(runs(race).size() == 2);
    CHECK(outcome_term(race) == 2);
    const auto independent = parse_term<Natural>("(a?(x).{1} | a!(y).{1}) | (b?(z).{1} | b!(w).{1})");
    const auto r = runs(independent);
    REQUIRE(r.size() == 1);
    REQUIRE(r[0].labels.size() == 2);
    CHECK_FALSE(r[0].precedes(0, 1));
    const auto chain = runs(parse_term<Natural>("new a in (a?(req).req!(ans).{1} | a!(r).r?(s).{2})"));
    REQUIRE(chain.size() == 1);
    REQUIRE(chain[0].labels.size() == 2);
    CHECK(chain[0].precedes(0, 1));
    CHECK(outcome_term(parse_term<Natural>("{2} | {3}")) == 6);
    CHECK(outcome_term(parse_term<Natural>("a?(x).{0}")) == 1);
    CHECK(outcome_term(parse_term<Natural>("new a in (a?(x).{0} | a!(y).{5})")) == 0);
    CHECK(outcome_term(parse_term<Natural>("new a in (a?(x).{2} | a!(y).{5}) | {3}")) == 30);
}

TEST_CASE("outcomes in the testing semirings", "[pi][lts]") {
    const std::string p = "new a in ((a?(x).{1} | a?(y).{w}) | a!(z).{1})";
    CHECK(outcome_term(parse_term<MayTesting>(p)) == Observation::omega);
    CHECK(outcome_term(parse_term<MustTesting>(p)) == Observation::one);
}

TEST_CASE("sleep sets visit each homotopy class once", "[pi][lts][oracle]") {
    for (const auto* text : {"(a?(x).{1} | a!(y).{1}) | a?(z).{1}", "(a?(x).{1} | a!(y).{1}) | (b?(z).{1} | b!(w).{1})",
                             "new a in (a?(req).req!(ans).{1} | a!(r).r?(s).{2})",
                             "a?(x).{1} + b?(y).{2} | a!(z).{1} + b!(w).{1}", "a?(x).(b!(y).{1} | c!(z).{1})"}) {
        const auto p = parse_term<Natural>(text);
        compare_with_reference(p, {});
        compare_with_reference(p, {.visible = false});
    }
    std::mt19937_64 rng(61);
    SimpleTermGenerator<Natural> generate(rng, RandomTermOptions{.max_actions = 4});
    for (int i = 0; i < 60; ++i) {
        const auto p = generate();
        compare_with_reference(p, {.visible = false});
        compare_with_reference(p, {.skip_inaction = true});
    }
}
