#include <catch_amalgamated.hpp>

#include <random>
#include <vector>

#include "ordalg/semiring.hpp"

using namespace ordalg;

namespace {

template <Semiring S>
std::vector<typename S::value_type> samples();

template <>
std::vector<mpz_class> samples<Natural>() {
    return {0, 1, 2, 3, 7, 100};
}
template <>
std::vector<mpz_class> samples<Integer>() {
    return {-5, -1, 0, 1, 2, 9};
}
template <>
std::vector<mpq_class> samples<Rational>() {
    return {mpq_class(0), mpq_class(1), mpq_class(-2, 3), mpq_class(3, 4), mpq_class(7, 2)};
}
template <>
std::vector<bool> samples<Boolean>() {
    return {false, true};
}
template <>
std::vector<Observation> samples<MayTesting>() {
    return {Observation::zero, Observation::one, Observation::omega};
}
template <>
std::vector<Observation> samples<MustTesting>() {
    return {Observation::zero, Observation::one, Observation::omega};
}

template <Semiring S>
void check_laws() {
    const auto xs = samples<S>();
    const auto eq = [](const auto& a, const auto& b) { return S::equal(a, b); };
    for (const auto& a : xs) {
        CHECK(eq(S::add(a, S::zero()), a));
        CHECK(eq(S::mul(a, S::one()), a));
        CHECK(eq(S::mul(a, S::zero()), S::zero()));
        for (const auto& b : xs) {
            CHECK(eq(S::add(a, b), S::add(b, a)));
            CHECK(eq(S::mul(a, b), S::mul(b, a)));
            for (const auto& c : xs) {
                CHECK(eq(S::add(S::add(a, b), c), S::add(a, S::add(b, c))));
                CHECK(eq(S::mul(S::mul(a, b), c), S::mul(a, S::mul(b, c))));
                CHECK(eq(S::mul(a, S::add(b, c)), S::add(S::mul(a, b), S::mul(a, c))));
            }
        }
    }
}

}  // namespace

TEMPLATE_TEST_CASE("semiring laws hold on samples", "[semiring]", Natural, Integer, Rational, Boolean, MayTesting,
                   MustTesting) {
    check_laws<TestType>();
}

TEMPLATE_TEST_CASE("idempotent semirings satisfy x + x = x", "[semiring]", Boolean, MayTesting, MustTesting) {
    for (const auto& x : samples<TestType>()) CHECK(TestType::equal(TestType::add(x, x), x));
}

TEST_CASE("may and must differ only in addition", "[semiring]") {
    using O = Observation;
    CHECK(MayTesting::add(O::omega, O::one) == O::omega);
    CHECK(MustTesting::add(O::omega, O::one) == O::one);
    CHECK(MayTesting::mul(O::omega, O::one) == O::omega);
    CHECK(MustTesting::mul(O::omega, O::one) == O::omega);
    CHECK(MayTesting::mul(O::omega, O::zero) == O::zero);
    CHECK(describe<MayTesting>().mode == TestingMode::may);
    CHECK(describe<MustTesting>().mode == TestingMode::must);
}

TEST_CASE("rational arithmetic is exact", "[semiring]") {
    CHECK(Rational::mul(mpq_class(2, 3), mpq_class(3, 4)) == mpq_class(1, 2));
    CHECK(Rational::format(Rational::parse("6/4")) == "3/2");
    CHECK(Rational::parse("-2") == mpq_class(-2));
}

TEST_CASE("embedding into the rationals is a semiring morphism", "[semiring]") {
    CHECK(embed_to_rat<Natural>(3) == mpq_class(3));
    CHECK(embed_to_rat<Integer>(-2) == mpq_class(-2));
    CHECK(embed_to_rat<Natural>(0) == mpq_class(0));
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<long> d(-50, 50);
    for (int i = 0; i < 200; ++i) {
        const mpz_class a = d(rng), b = d(rng);
        CHECK(embed_to_rat<Integer>(Integer::add(a, b)) == embed_to_rat<Integer>(a) + embed_to_rat<Integer>(b));
        CHECK(embed_to_rat<Integer>(Integer::mul(a, b)) == embed_to_rat<Integer>(a) * embed_to_rat<Integer>(b));
    }
}

TEST_CASE("literals are validated", "[semiring]") {
    CHECK_THROWS_AS(Natural::parse("-1"), ParseError);
    CHECK_THROWS_AS(Natural::parse("1.5"), ParseError);
    CHECK_THROWS_AS(Rational::parse("1/0"), ParseError);
    CHECK_THROWS_AS(Boolean::parse("2"), ParseError);
    CHECK_THROWS_AS(MustTesting::parse("x"), ParseError);
    CHECK(MayTesting::parse("w") == Observation::omega);
}

TEST_CASE("descriptors report the decision routes", "[semiring]") {
    CHECK(describe<Boolean>().properties.idempotent);
    CHECK(describe<Rational>().properties.rational);
    CHECK_FALSE(describe<Natural>().properties.ring);
    CHECK(describe<Integer>().properties.ring);
    CHECK(to_string(describe<Integer>().name) == "int");
}

namespace {
struct Degenerate {
    using value_type = int;
    static constexpr SemiringName name = SemiringName::nat;
    static constexpr SemiringProperties properties{};
    static int zero() { return 0; }
    static int one() { return 0; }
    static int add(int, int) { return 0; }
    static int mul(int, int) { return 0; }
    static bool equal(int, int) { return true; }
    static int from_count(std::uint64_t) { return 0; }
    static std::string format(int) { return "0"; }
    static int parse(std::string_view) { return 0; }
};
}  // namespace

TEST_CASE("the degenerate semiring is rejected", "[semiring]") {
    CHECK_THROWS_AS(describe<Degenerate>(), UsageError);
}
