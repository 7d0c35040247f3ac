#include <catch_amalgamated.hpp>

#include "ordalg/pi/parser.hpp"

using namespace ordalg;
using namespace ordalg::pi;

namespace {

std::string located(std::string_view text) { return to_text(parse_term<Natural>(text)); }

}  // namespace

TEST_CASE("terms print fully located", "[pi][syntax]") {
    CHECK(located("{1}") == "{1}");
    CHECK(located("a?(x).{1}") == "a?@1(a.+1).{1}");
    CHECK(located("a?(x).x!(y).{2} | b!(z).{1}") == "(a?@1(a.+1).a.+1!@2(a.+1.-2).{2} | b!@3(b.-3).{1})");
    CHECK(located("a?(x).{1} + b?(y).{0}") == "a?@1(a.+1).{1} + b?@2(b.+2).{0}");
    CHECK(located("a?@5(x).{1} | a!(y).{1}") == "(a?@5(a.+5).{1} | a!@1(a.-1).{1})");
    CHECK(located("# comment\n  a!(y).{1}  # trailing") == "a!@1(a.-1).{1}");
}

TEST_CASE("explicit locations reproduce the automatic numbering", "[pi][syntax]") {
    CHECK(located("a?@1(x).x!@2(y).{2} | b!@3(z).{1}") == located("a?(x).x!(y).{2} | b!(z).{1}"));
    CHECK(located("a?(x).{1} | a!@1(y).{1}") == "(a?@2(a.+2).{1} | a!@1(a.-1).{1})");
}

TEST_CASE("consecutive binders commute in canonical text", "[pi][syntax]") {
    const auto hk = parse_term<Natural>("new h, k in h!(x).k?(y).{1}");
    const auto kh = parse_term<Natural>("new k in new h in h!(x).k?(y).{1}");
    CHECK(to_text(hk) != to_text(kh));
    CHECK(canonical_text(hk) == canonical_text(kh));
    CHECK(canonical_text(hk) == "(new h,k in h!@1(h.-1).k?@2(k.+2).{1})");
}

TEST_CASE("hidden names are renamed away from free ones", "[pi][syntax]") {
    const auto t = parse_term<Natural>("(new a in a?(x).{2}) | a!(y).{3}");
    CHECK(to_text(t) == "((new a_1 in a_1?@1(a_1.+1).{2}) | a!@2(a.-2).{3})");
    CHECK(free_names(t) == std::set<std::string>{"a"});
    CHECK(hidden_names(t) == std::set<std::string>{"a_1"});
}

TEST_CASE("names, locations and states", "[pi][syntax]") {
    const auto t = parse_term<Natural>("a?(x).x!(y).{2} | new h in h!(z).b?(w).{1}");
    CHECK(free_names(t) == std::set<std::string>{"a", "b"});
    CHECK(max_location(t) == 4);
    CHECK(locations(t) == std::vector<Location>{1, 2, 3, 4});
    CHECK(state(parse_term<Natural>("{2} | {3}")) == 6);
    CHECK(state(parse_term<Natural>("{2} | a?(x).{3}")) == 2);
    CHECK(state(parse_term<Natural>("new h in {5}")) == 5);
}

TEST_CASE("terms built directly match parsed ones", "[pi][syntax]") {
    using T = Term<Natural>;
    const Name a = free_name("a");
    const auto built = T::par(T::action(1, a, Polarity::positive, T::one()), T::scalar(4));
    CHECK(to_text(built) == located("a?@1(x).{1} | {4}"));
}

TEST_CASE("syntax errors carry positions", "[pi][syntax]") {
    auto error_at = [](std::string_view text) -> std::pair<std::size_t, std::size_t> {
        try {
            parse_term<Natural>(text);
        } catch (const ParseError& e) {
            return {e.line(), e.column()};
        }
        return {0, 0};
    };
    CHECK(error_at("a?(x).") == std::pair<std::size_t, std::size_t>{1, 7});
    CHECK(error_at("a?(x) {1}") == std::pair<std::size_t, std::size_t>{1, 7});
    CHECK(error_at("\n  a?(x).{1} | %b?(y).{1}") == std::pair<std::size_t, std::size_t>{2, 15});
    CHECK(error_at("a?(x).{q}") == std::pair<std::size_t, std::size_t>{1, 7});
    CHECK(error_at("x?(y).y?(y).{1}") == std::pair<std::size_t, std::size_t>{1, 10});
    CHECK(error_at("a?@1(x).{1} | a?@1(y).{1}") == std::pair<std::size_t, std::size_t>{1, 15});
    CHECK(error_at("a?(x).{1} ^") == std::pair<std::size_t, std::size_t>{1, 11});
    CHECK_THROWS_AS(parse_term<Boolean>("{2}"), ParseError);
    CHECK_NOTHROW(parse_term<MayTesting>("{w}"));
}
