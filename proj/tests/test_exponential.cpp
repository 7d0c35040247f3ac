#include <catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>
#include <random>

#include "ordalg/equivalence.hpp"
#include "ordalg/exponential.hpp"
#include "ordalg/io.hpp"

using namespace ordalg;

namespace {

const Arena body = Arena::static_web({"p", "q"});
const Arena bang = Arena::sharp(body);
const Arena two = Arena::fin_index(2, bang);

Play on_bang(std::string_view text) { return io::parse_play(bang, text); }

std::size_t common_prefix(const Event& a, const Event& b) {
    std::size_t k = 0;
    while (k < a.length() && k < b.length() && a[k] == b[k]) ++k;
    return k;
}

// Oracle pairing: bijections preserving skeletons and parting depths stand in for the group.
mpz_class brute_force_pairing(const Vector<Natural>& u, const Vector<Natural>& v) {
    mpz_class total = 0;
    for (const auto& [r, c] : u.terms())
        for (const auto& [s, d] : v.terms()) {
            if (r.size() != s.size()) continue;
            std::vector<std::size_t> perm(s.size());
            std::iota(perm.begin(), perm.end(), 0);
            do {
                bool ok = true;
                for (std::size_t i = 0; i < s.size() && ok; ++i) {
                    ok = s.support()[i].skeleton() == r.support()[perm[i]].skeleton();
                    for (std::size_t j = 0; j < s.size() && ok; ++j)
                        ok = common_prefix(s.support()[i], s.support()[j]) ==
                             common_prefix(r.support()[perm[i]], r.support()[perm[j]]);
                }
                if (ok && is_consistent(*sync(r, transport(s, r.shared_support(), perm)))) total += c * d;
            } while (std::next_permutation(perm.begin(), perm.end()));
        }
    return total;
}

Play random_play(std::mt19937_64& rng, const Arena& arena) {
    std::set<Event> events;
    const std::size_t size = 1 + rng() % 3;
    while (events.size() < size) {
        const Event inner = bang.in_copy(static_cast<std::int64_t>(rng() % 3), body.atom(rng() % 2));
        events.insert(arena.kind() == Arena::Kind::fin_index ? arena.in_class(rng() % 2, inner) : inner);
    }
    const auto orders = all_preorders(Play::make_support({events.begin(), events.end()}));
    return orders[rng() % orders.size()];
}

Vector<Natural> swap_classes(const Vector<Natural>& u) {
    Vector<Natural> out(u.arena());
    for (const auto& [r, c] : u.terms()) {
        std::vector<Event> images;
        for (Event e : r.support()) {
            e.mutable_segment(0).value = 1 - e[0].value;
            images.push_back(e);
        }
        out.add_unchecked(relabel(r, images), c);
    }
    return out;
}

}  // namespace

TEST_CASE("delta sums over class assignments of occupied copies", "[exponential]") {
    CHECK(delta(2, Vector<Natural>(bang, Play())).size() == 1);
    CHECK(delta(2, Vector<Natural>(bang, on_bang("{0@p<0@q}"))).size() == 2);
    CHECK(delta(2, Vector<Natural>(bang, on_bang("{0@p<1@q}"))).size() == 4);
    CHECK(delta(3, Vector<Natural>(bang, on_bang("{0@p, 1@q, 4@p}"))).size() == 27);
    CHECK(delta(0, Vector<Natural>(bang, on_bang("{0@p}"))).is_zero());
    CHECK_THROWS_AS(delta(2, Vector<Natural>(body, io::parse_play(body, "{p}"))), UsageError);
}

TEST_CASE("gamma relabels copies through the bijection", "[exponential]") {
    const Vector<Natural> u(two, io::parse_play(two, "{0@0@p<1@0@q}"));
    const auto merged = gamma(2, CopyBijection::interleaved(2, 4), u);
    CHECK(merged == Vector<Natural>(bang, on_bang("{0@p<1@q}")));
    CHECK(gamma(2, CopyBijection::interleaved(2, 1), Vector<Natural>(two, Play())) == Vector<Natural>(bang, Play()));
    CHECK_THROWS_AS(gamma(3, CopyBijection::interleaved(3, 1), u), UsageError);
    CHECK_THROWS_AS(gamma(2, CopyBijection::interleaved(2, 1), Vector<Natural>(two, io::parse_play(two, "{0@5@p}"))),
                    UsageError);
    CHECK_THROWS_AS(CopyBijection({{{0, 0}, 1}, {{1, 0}, 1}}), UsageError);
}

TEST_CASE("gamma and delta are adjoint for the pairing", "[exponential][oracle]") {
    std::mt19937_64 rng(53);
    const auto phi = CopyBijection::interleaved(2, 8);
    for (int i = 0; i < 120; ++i) {
        Vector<Natural> u(two, random_play(rng, two));
        u.add(random_play(rng, two), 1 + rng() % 2);
        Vector<Natural> v(bang, random_play(rng, bang));
        v.add(random_play(rng, bang), 1);
        const auto merged = gamma(2, phi, u);
        const auto split = delta(2, v);
        CHECK(pairing(merged, v) == brute_force_pairing(merged, v));
        CHECK(pairing(u, split) == brute_force_pairing(u, split));
        CHECK(pairing(merged, v) == pairing(u, split));
    }
}

TEST_CASE("delta is cocommutative and gamma undoes a single class", "[exponential][property]") {
    std::mt19937_64 rng(59);
    const Arena one = Arena::fin_index(1, bang);
    for (int i = 0; i < 100; ++i) {
        const Vector<Natural> v(bang, random_play(rng, bang));
        CHECK(swap_classes(delta(2, v)) == delta(2, v));
        CHECK(gamma(1, CopyBijection::interleaved(1, 8), delta(1, v)) == v);
        const std::size_t copies = [&] {
            std::set<std::int64_t> seen;
            for (const auto& e : v.terms().begin()->first.support()) seen.insert(e[0].value);
            return seen.size();
        }();
        CHECK(obs_equiv(gamma(2, CopyBijection::interleaved(2, 8), delta(2, v)), v.scaled(mpz_class(1) << copies)));
        CHECK(delta(1, v).arena() == one);
    }
}

TEST_CASE("copies of one vector are interchangeable", "[exponential]") {
    const Vector<Natural> u(body, io::parse_play(body, "{p<q}"), 3);
    const Vector<Natural> v(body, io::parse_play(body, "{p, q}"), 2);
    CHECK(obs_equiv(embed_copy(0, u), embed_copy(5, u)));
    CHECK(outcome(embed_copy(4, u)) == outcome(u));
    CHECK(pairing(embed_copy(0, u), embed_copy(7, v)) == pairing(u, v));
    CHECK_FALSE(obs_equiv(embed_copy(0, u), embed_copy(0, v)));
}

TEST_CASE("graded generators of the exponential", "[exponential]") {
    const TypeSpace single{body, {io::parse_play(body, "{p<q}")}};
    const auto gens = bang_generators(single, 2);
    REQUIRE(gens.size() == 3);
    CHECK(gens[0].play.empty());
    CHECK(gens[1].degree == 1);
    CHECK(gens[2].play.size() == 4);
    for (std::size_t d = 1; d <= 3; ++d) {
        std::vector<Play> plays;
        for (std::size_t k = 0; k < d; ++k) plays.push_back(io::parse_play(body, k % 2 ? "{p}" : "{q<p}"));
        if (d == 3) plays[2] = io::parse_play(body, "{p, q}");
        CHECK(bang_generators(TypeSpace{body, plays}, 1).size() == d + 1);
    }
    CHECK(bang_generators(TypeSpace{body, {}}, 3).size() == 1);
}
