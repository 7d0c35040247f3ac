#include <catch_amalgamated.hpp>

#include "ordalg/pi/corpus.hpp"
#include "ordalg/pi/parser.hpp"
#include "ordalg/pi/translate.hpp"

using namespace ordalg;
using namespace ordalg::pi;

TEMPLATE_TEST_CASE("law instances are equivalences", "[pi][laws]", Natural, Rational, Boolean, MustTesting,
                   MayTesting) {
    const auto corpus = law_corpus<TestType>(3);
    CHECK(corpus.size() == 90);
    for (const auto& law : corpus) {
        INFO(law.law << ": " << to_text(law.lhs) << "  vs  " << to_text(law.rhs));
        CHECK(term_equiv(law.lhs, law.rhs));
    }
}

TEST_CASE("sequential orders are told apart with a counting semiring", "[pi][laws]") {
    const std::string ab = "a?(x).b?(y).{1}";
    const std::string ba = "b?(y).a?(x).{1}";
    CHECK_FALSE(term_equiv(parse_term<Natural>(ab), parse_term<Natural>(ba)));
    CHECK_FALSE(term_equiv(parse_term<Boolean>(ab), parse_term<Boolean>(ba)));
    const std::string par = "a?(x).{1} | b?(y).{1}";
    const std::string sum = ab + " + " + ba;
    CHECK(term_equiv(parse_term<Boolean>(par), parse_term<Boolean>(sum)));
    CHECK_FALSE(term_equiv(parse_term<Natural>(par), parse_term<Natural>(sum)));
}

TEMPLATE_TEST_CASE("a linear sum doubles a term exactly when 1 + 1 differs from 1", "[pi][laws]", Natural, Boolean,
                   MustTesting) {
    using T = Term<TestType>;
    const T p = parse_term<TestType>("a?(x).x!(y).{1}");
    const T copy = par_apart(p, p).second;
    FreshSupply fresh(T::par(p, copy));
    const bool idempotent = TestType::properties.idempotent;
    CHECK(term_equiv(oplus(fresh, p, copy), p) == idempotent);
}
