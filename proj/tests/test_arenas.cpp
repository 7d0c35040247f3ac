#include <catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "ordalg/io.hpp"
#include "ordalg/orbit.hpp"

using namespace ordalg;

namespace {

std::size_t common_prefix(const Event& a, const Event& b) {
    std::size_t k = 0;
    while (k < a.length() && k < b.length() && a[k] == b[k]) ++k;
    return k;
}

// Oracle: a bijection between finite event sets extends to a group element exactly when
// it preserves skeletons and the depth at which any two events part ways.
std::set<std::vector<std::size_t>> brute_force_bijections(std::span<const Event> from, std::span<const Event> to) {
    std::set<std::vector<std::size_t>> out;
    if (from.size() != to.size()) return out;
    std::vector<std::size_t> perm(from.size());
    std::iota(perm.begin(), perm.end(), 0);
    do {
        bool ok = true;
        for (std::size_t i = 0; i < from.size() && ok; ++i) {
            ok = from[i].skeleton() == to[perm[i]].skeleton();
            for (std::size_t j = 0; j < from.size() && ok; ++j)
                ok = common_prefix(from[i], from[j]) == common_prefix(to[perm[i]], to[perm[j]]);
        }
        if (ok) out.insert(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

std::set<std::vector<std::size_t>> enumerated(const Arena& arena, std::span<const Event> from,
                                              std::span<const Event> to) {
    std::set<std::vector<std::size_t>> out;
    for (const auto& b : induced_bijections(arena, from, to)) CHECK(out.insert(b.image).second);
    return out;
}

std::vector<Event> events(const Arena& arena, std::initializer_list<std::string_view> names) {
    std::vector<Event> out;
    for (auto n : names) out.push_back(arena.parse_event(n));
    std::sort(out.begin(), out.end());
    return out;
}

template <class Rng>
std::vector<Event> random_subset(const std::vector<Event>& pool, std::size_t n, Rng& rng) {
    std::vector<Event> out = pool;
    std::shuffle(out.begin(), out.end(), rng);
    out.resize(n);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST_CASE("labeled bijections preserve labels", "[arenas]") {
    const Arena lab = Arena::labeled({"a", "b"});
    const auto ab = events(lab, {"a1", "b1"});
    CHECK(induced_bijections(lab, ab, ab).size() == 1);
    const auto bb = events(lab, {"b1", "b2"});
    CHECK(induced_bijections(lab, bb, bb).size() == 2);
    const Arena web = Arena::static_web({"x", "y"});
    const auto xy = events(web, {"x", "y"});
    REQUIRE(induced_bijections(web, xy, xy).size() == 1);
    CHECK(induced_bijections(web, xy, xy).front().image == std::vector<std::size_t>{0, 1});
}

TEST_CASE("labeled bijections match brute force", "[arenas][oracle]") {
    const Arena lab = Arena::labeled({"a", "b", "c"});
    std::vector<Event> pool;
    for (const auto* l : {"a", "b", "c"})
        for (std::int64_t i = 0; i < 3; ++i) pool.push_back(lab.occurrence(l, i));
    std::mt19937_64 rng(3);
    for (int round = 0; round < 300; ++round) {
        const std::size_t n = 1 + round % 5;
        const auto a = random_subset(pool, n, rng);
        const auto b = random_subset(pool, n, rng);
        CHECK(enumerated(lab, a, b) == brute_force_bijections(a, b));
    }
}

TEST_CASE("channel bijections are hereditary and match brute force", "[arenas][oracle]") {
    const Arena pi = Arena::pi({"u", "v"});
    const std::vector<Event> pool = events(
        pi, {"u.+1", "u.+2", "u.-3", "u.+1.-4", "u.+1.-5", "u.+2.-6", "u.+2.-6.+7", "u.+1.+bot", "u.+2.+bot",
             "u.+bot", "u.-top", "v.+1", "v.-2", "v.-2.+3", "u.-3.-bot"});
    std::mt19937_64 rng(5);
    for (int round = 0; round < 300; ++round) {
        const std::size_t n = 1 + round % 6;
        const auto a = random_subset(pool, n, rng);
        const auto b = round % 2 ? a : random_subset(pool, n, rng);
        const auto found = enumerated(pi, a, b);
        CHECK(found == brute_force_bijections(a, b));
        for (const auto& image : found)
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    if (common_prefix(a[i], a[j]) == a[i].length())  // a[i] is a prefix of a[j]
                        CHECK(common_prefix(b[image[i]], b[image[j]]) == b[image[i]].length());
    }
}

TEST_CASE("sharp and indexing bijections match brute force", "[arenas][oracle]") {
    const Arena body = Arena::labeled({"p", "q"});
    for (const Arena& arena : {Arena::sharp(body), Arena::indexing(Arena::labeled({"i"}), body),
                               Arena::fin_index(2, Arena::sharp(body))}) {
        std::vector<Event> pool;
        for (std::int64_t c = 0; c < 2; ++c)
            for (const auto* l : {"p", "q"})
                for (std::int64_t k = 0; k < 2; ++k) {
                    const Event inner = body.occurrence(l, k);
                    switch (arena.kind()) {
                        case Arena::Kind::sharp: pool.push_back(arena.in_copy(c, inner)); break;
                        case Arena::Kind::indexing:
                            pool.push_back(arena.pair(arena.index().occurrence("i", c), inner));
                            break;
                        default:
                            pool.push_back(arena.in_class(static_cast<std::size_t>(c), arena.body().in_copy(k, inner)));
                    }
                }
        std::sort(pool.begin(), pool.end());
        pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
        std::mt19937_64 rng(9);
        for (int round = 0; round < 100; ++round) {
            const std::size_t n = 1 + round % 5;
            const auto a = random_subset(pool, n, rng);
            const auto b = random_subset(pool, n, rng);
            CHECK(enumerated(arena, a, b) == brute_force_bijections(a, b));
        }
    }
}

TEST_CASE("multiplicities of the worked example", "[arenas]") {
    const Arena lab = Arena::labeled({"a", "b", "c"});
    CHECK(multiplicity(lab, io::parse_play(lab, "{a0<b1<c1, a0<b2<c2}")) == 2);
    CHECK(multiplicity(lab, io::parse_play(lab, "{a0<b1<c1<c2, a0<b2<c2}")) == 1);
    const Arena web = Arena::static_web({"x", "y"});
    CHECK(multiplicity(web, io::parse_play(web, "{x, y}")) == 1);
}

TEST_CASE("multiplicity is invariant along the group", "[arenas][property]") {
    const Arena lab = Arena::labeled({"a", "b"});
    const auto support = Play::make_support(events(lab, {"a1", "a2", "b1", "b2"}));
    const auto target = events(lab, {"a5", "a7", "b0", "b3"});
    const auto shared_target = Play::make_support(target);
    for (const auto& r : all_preorders(support))
        for (const auto& b : induced_bijections(lab, r.support(), target))
            CHECK(multiplicity(lab, transport(r, shared_target, b.image)) == multiplicity(lab, r));
}

TEST_CASE("saturation weights sum to the number of self-bijections", "[arenas][property]") {
    const Arena lab = Arena::labeled({"a", "b", "c"});
    const auto fan = io::parse_play(lab, "{a0<b0<c1, a0<c2, a0<c3}");
    const auto sat = saturate(lab, fan);
    CHECK(sat.size() == 3);
    for (const auto& [p, k] : sat) CHECK(k == 2);
    const auto support = Play::make_support(events(lab, {"a1", "a2", "b1"}));
    const auto self = induced_bijections(lab, *support, *support).size();
    for (const auto& r : all_preorders(support)) {
        std::uint64_t total = 0;
        for (const auto& [p, k] : saturate(lab, r)) total += k;
        CHECK(total == self);
    }
    const Play e = neutral_play(*support);
    const auto sat_e = saturate(lab, e);
    REQUIRE(sat_e.size() == 1);
    CHECK(sat_e.begin()->second == multiplicity(lab, e));
    const Arena web = Arena::static_web({"x"});
    const auto sx = saturate(web, io::parse_play(web, "{x}"));
    CHECK(sx.size() == 1);
    CHECK(sx.begin()->second == 1);
}

TEST_CASE("orbits onto a target support", "[arenas]") {
    const Arena lab = Arena::labeled({"a", "b"});
    const Play s = io::parse_play(lab, "{a2<b0}");
    CHECK(orbit_with_support(lab, s, events(lab, {"a1", "b0"})).size() == 1);
    CHECK(orbit_with_support(lab, s, events(lab, {"a1", "a3"})).empty());
    const Play two = io::parse_play(lab, "{a1<b0, a2}");
    CHECK(orbit_with_support(lab, two, two.support()).size() == 2);
}

TEST_CASE("representants are canonical", "[arenas][property]") {
    const Arena lab = Arena::labeled({"a", "b"});
    const Play lone = io::parse_play(lab, "{b2}");
    CHECK(io::format_play(lab, representant(lab, lone)) == "{b0}");
    const auto support = Play::make_support(events(lab, {"a1", "a4", "b2"}));
    const auto target = Play::make_support(events(lab, {"a0", "a9", "b5"}));
    for (const auto& r : all_preorders(support)) {
        const Play rep = representant(lab, r);
        CHECK(representant(lab, rep) == rep);
        for (const auto& b : induced_bijections(lab, r.support(), *target))
            CHECK(representant(lab, transport(r, target, b.image)) == rep);
    }
    const Arena web = Arena::static_web({"x", "y"});
    const Play r = io::parse_play(web, "{x<y}");
    CHECK(representant(web, r) == r);
}

TEST_CASE("descriptors and event text round-trip", "[arenas][io]") {
    for (const auto* d : {"static(a,b)", "labeled(a,b)", "pi(u,v)", "sum(X=static(a),Y=labeled(b))",
                          "indexing(labeled(i),static(a))", "sharp(static(a,b))", "fin(2,sharp(labeled(a)))",
                          "view(labeled(a))"}) {
        const Arena arena = io::parse_arena(d);
        CHECK(arena.describe() == d);
    }
    const Arena nested = io::parse_arena("sum(X=fin(2,sharp(labeled(a))),Y=pi(u))");
    for (const auto* e : {"X:1@3@a2", "Y:u.+4.-2.+bot", "Y:u.-top"}) CHECK(nested.format(nested.parse_event(e)) == e);
    CHECK_THROWS_AS(nested.parse_event("X:2@0@a0"), UsageError);
    CHECK_THROWS_AS(nested.parse_event("Y:u.+bot.+1"), UsageError);
    CHECK_THROWS_AS(io::parse_arena("static(a"), UsageError);
    CHECK_THROWS_AS(Arena::labeled({"a1"}), UsageError);
}

TEST_CASE("indexing distributes over sums", "[arenas][property]") {
    const Arena x = Arena::labeled({"a"});
    const Arena y = Arena::static_web({"b"});
    const Arena z = Arena::labeled({"c"});
    const Arena left = Arena::indexing(Arena::sum({{0, "X", x}, {1, "Y", y}}), z);
    const Arena right = Arena::sum({{0, "X", Arena::indexing(x, z)}, {1, "Y", Arena::indexing(y, z)}});
    std::vector<Event> sample;
    for (std::int64_t i = 0; i < 2; ++i)
        for (std::int64_t k = 0; k < 2; ++k) {
            sample.push_back(left.pair(left.index().inject(0, x.occurrence("a", i)), z.occurrence("c", k)));
            sample.push_back(left.pair(left.index().inject(1, y.atom("b")), z.occurrence("c", k)));
        }
    std::sort(sample.begin(), sample.end());
    sample.erase(std::unique(sample.begin(), sample.end()), sample.end());
    for (const auto& e : sample) {
        CHECK(right.contains(e));
        CHECK(left.contains(e));
    }
    std::mt19937_64 rng(1);
    for (int round = 0; round < 50; ++round) {
        const auto a = random_subset(sample, 1 + round % 4, rng);
        const auto b = random_subset(sample, 1 + round % 4, rng);
        CHECK(enumerated(left, a, b) == enumerated(right, a, b));
    }
}
