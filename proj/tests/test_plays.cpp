#include <catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "ordalg/arena.hpp"
#include "ordalg/io.hpp"
#include "ordalg/play.hpp"

using namespace ordalg;

namespace {

const Arena web = Arena::static_web({"a", "b", "c", "d"});

Play play(std::string_view text) { return io::parse_play(web, text); }

std::shared_ptr<const Play::Support> first_atoms(std::size_t n) {
    std::vector<Event> events;
    for (std::size_t i = 0; i < n; ++i) events.push_back(web.atom(i));
    return Play::make_support(std::move(events));
}

// Oracle: closes every relation on n points and keeps the distinct results.
std::set<Play::Rows> brute_force_preorders(std::size_t n) {
    std::set<Play::Rows> out;
    const std::size_t cells = n * n;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << cells); ++mask) {
        Play::Rows rows(n, 0);
        for (std::size_t c = 0; c < cells; ++c)
            if (mask >> c & 1U) rows[c / n] |= Play::bit(c % n);
        for (std::size_t i = 0; i < n; ++i) rows[i] |= Play::bit(i);
        Play::close(rows);
        out.insert(rows);
    }
    return out;
}

// Oracle: permutations of the support compatible with the order.
std::size_t brute_force_extensions(const Play& r) {
    std::vector<std::size_t> perm(r.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::size_t count = 0;
    do {
        bool ok = true;
        for (std::size_t a = 0; a < perm.size() && ok; ++a)
            for (std::size_t b = a + 1; b < perm.size() && ok; ++b)
                if (r.leq(perm[b], perm[a])) ok = false;
        count += ok;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return count;
}

}  // namespace

TEST_CASE("make_play closes the generating pairs", "[plays]") {
    const Play r = play("{a<b<c}");
    CHECK(r.leq(0, 2));
    CHECK(is_consistent(r));
    const Play single = play("{a}");
    CHECK(single.size() == 1);
    CHECK(single.leq(0, 0));
    CHECK_FALSE(is_consistent(play("{a<b, b<a}")));
    CHECK(is_consistent(Play()));
    CHECK_THROWS_AS(make_play({web.atom("a")}, std::vector<EventPair>{{web.atom("a"), web.atom("b")}}), UsageError);
}

TEST_CASE("neutral plays are antichains", "[plays]") {
    CHECK(neutral_play({}).empty());
    const Play e = neutral_play({web.atom("a"), web.atom("b")});
    CHECK_FALSE(e.comparable(0, 1));
    const Play r = play("{a<b, c}");
    CHECK(*sync(r, neutral_play(r.support())) == r);
}

TEST_CASE("synchronisation merges preorders on equal supports", "[plays]") {
    CHECK(*sync(play("{a<b, c}"), play("{b<c, a}")) == play("{a<b<c}"));
    CHECK_FALSE(sync(play("{a<b}"), play("{a<c}")).has_value());
    CHECK_FALSE(is_consistent(*sync(play("{a<b}"), play("{b<a}"))));
}

TEST_CASE("synchronisation is associative and commutative", "[plays][property]") {
    const auto orders = all_preorders(first_atoms(4));
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::size_t> pick(0, orders.size() - 1);
    for (int i = 0; i < 2000; ++i) {
        const Play& r = orders[pick(rng)];
        const Play& s = orders[pick(rng)];
        const Play& t = orders[pick(rng)];
        CHECK(*sync(r, s) == *sync(s, r));
        CHECK(*sync(*sync(r, s), t) == *sync(r, *sync(s, t)));
        if (is_consistent(*sync(r, s))) {
            CHECK(is_consistent(r));
            CHECK(is_consistent(s));
        }
        CHECK(sync_is_consistent(r, s) == is_consistent(*sync(r, s)));
    }
}

TEST_CASE("preorder enumeration matches brute force", "[plays][oracle]") {
    for (std::size_t n = 0; n <= 4; ++n) {
        const auto enumerated = all_preorders(first_atoms(n));
        std::set<Play::Rows> rows;
        for (const auto& p : enumerated) rows.insert(p.rows());
        CHECK(rows.size() == enumerated.size());
        CHECK(rows == brute_force_preorders(n));
    }
    CHECK(all_preorders(first_atoms(3)).size() == 29);
    CHECK(all_preorders(first_atoms(4)).size() == 355);
    CHECK(all_partial_orders(first_atoms(3)).size() == 19);
    CHECK(all_partial_orders(first_atoms(4)).size() == 219);
}

TEST_CASE("linear extensions match brute force", "[plays][oracle]") {
    CHECK(linear_extensions(play("{a<b, c}")).size() == 3);
    CHECK(linear_extensions(play("{a<b<c}")).size() == 1);
    CHECK(linear_extensions(play("{a, b}")).size() == 2);
    CHECK(linear_extensions(play("{a<b, b<a}")).empty());
    for (const auto& r : all_partial_orders(first_atoms(4))) {
        const auto ext = linear_extensions(r);
        CHECK(ext.size() == brute_force_extensions(r));
        for (const auto& t : ext) {
            CHECK(is_total(t));
            CHECK(*sync(t, r) == t);
        }
    }
}

TEST_CASE("restriction induces the order and kills inconsistent plays", "[plays]") {
    const Play chain = play("{a<b<c}");
    const std::vector<Event> ac{web.atom("a"), web.atom("c")};
    CHECK(*restrict_play(chain, ac) == play("{a<c}"));
    CHECK(*restrict_play(chain, chain.support()) == chain);
    const std::vector<Event> a{web.atom("a")};
    CHECK_FALSE(restrict_play(play("{a<b, b<a}"), a).has_value());
}

TEST_CASE("restriction composes", "[plays][property]") {
    const auto posets = all_partial_orders(first_atoms(4));
    const auto& support = posets.front().support();
    for (const auto& r : posets)
        for (std::uint32_t y = 0; y < 16; ++y)
            for (std::uint32_t z = 0; z < 16; ++z) {
                std::vector<Event> ys, zs, both;
                for (std::size_t i = 0; i < 4; ++i) {
                    if (y >> i & 1U) ys.push_back(support[i]);
                    if (z >> i & 1U) zs.push_back(support[i]);
                    if ((y & z) >> i & 1U) both.push_back(support[i]);
                }
                CHECK(*restrict_play(*restrict_play(r, ys), zs) == *restrict_play(r, both));
            }
}

TEST_CASE("text and dot renderings", "[plays]") {
    const auto name = [](const Event& e) { return web.format(e); };
    CHECK(to_text(play("{a<b<c, d}"), name) == "{a<b, b<c, d}");
    CHECK(to_text(play("{a<b, b<a}"), name) == "{a<=b, b<=a}");
    const std::string dot = to_dot(play("{a<b}"), name);
    CHECK(dot.find("n0 -> n1") != std::string::npos);
    CHECK_THROWS_AS(to_dot(play("{a<b, b<a}"), name), UsageError);
}
