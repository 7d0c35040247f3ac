#include <catch_amalgamated.hpp>

#include <json.hpp>

#include "ordalg/io.hpp"

using namespace ordalg;

TEST_CASE("plays parse from chains", "[io]") {
    const Arena web = Arena::static_web({"a", "b", "c", "d"});
    const Play r = io::parse_play(web, "{a<b<c, d}");
    CHECK(r.size() == 4);
    CHECK(r.leq(0, 2));
    CHECK_FALSE(r.comparable(0, 3));
    CHECK(io::parse_play(web, "{ a <= b , b <= a }") == io::parse_play(web, "{a<b, b<a}"));
    CHECK(io::parse_play(web, "{}").empty());
    CHECK(io::format_play(web, r) == "{a<b, b<c, d}");
    CHECK(io::parse_play(web, io::format_play(web, r)) == r);
    CHECK_THROWS_AS(io::parse_play(web, "a<b"), UsageError);
    CHECK_THROWS_AS(io::parse_play(web, "{a<e}"), UsageError);
}

TEST_CASE("vectors parse with optional coefficients and comments", "[io]") {
    const Arena web = Arena::static_web({"x", "y"});
    const auto u = io::parse_vector<Integer>(web, "2 {x<y}  # two\n-1 {y<x}; {x, y}\n");
    CHECK(u.size() == 3);
    CHECK(u.coefficient(io::parse_play(web, "{x<y}")) == 2);
    CHECK(u.coefficient(io::parse_play(web, "{y<x}")) == -1);
    CHECK(u.coefficient(io::parse_play(web, "{x, y}")) == 1);
    CHECK(io::format_vector(u) == "1 {x, y}\n-1 {y<x}\n2 {x<y}\n");
    CHECK(io::format_vector(Vector<Integer>(web)) == "0\n");
    CHECK_THROWS_AS(io::parse_vector<Natural>(web, "-1 {x}"), ParseError);
    CHECK_THROWS_AS(io::parse_vector<Natural>(web, "3"), UsageError);
}

TEST_CASE("vector files name their arena", "[io]") {
    const auto u = io::parse_vector_file<Rational>("# header\narena labeled(a,b)\n1/2 {a0<b3}\n{b1}\n");
    CHECK(u.arena().describe() == "labeled(a,b)");
    CHECK(u.size() == 2);
    CHECK_THROWS_AS(io::parse_vector_file<Rational>("{a0}"), UsageError);
    CHECK_THROWS_AS(io::parse_vector_file<Rational>("\n# nothing\n"), UsageError);
}

TEST_CASE("json lines mirror the text format", "[io]") {
    const Arena web = Arena::static_web({"x", "y"});
    Vector<Natural> u(web, io::parse_play(web, "{x<y}"), 3);
    const auto line = io::format_vector_jsonl(u);
    const auto j = nlohmann::json::parse(line);
    CHECK(j["coefficient"] == "3");
    CHECK(j["arena"] == "static(x,y)");
    CHECK(j["play"] == "{x<y}");
    CHECK(j["events"] == nlohmann::json::array({"x", "y"}));
    CHECK(j["order"] == nlohmann::json::array({nlohmann::json::array({0, 1})}));
}

TEST_CASE("dot output draws covers only", "[io]") {
    const Arena web = Arena::static_web({"x", "y", "z"});
    const std::string dot = io::play_dot(web, io::parse_play(web, "{x<y<z}"), "g");
    CHECK(dot.starts_with("digraph \"g\""));
    CHECK(dot.find("n0 -> n1") != std::string::npos);
    CHECK(dot.find("n1 -> n2") != std::string::npos);
    CHECK(dot.find("n0 -> n2") == std::string::npos);
}
