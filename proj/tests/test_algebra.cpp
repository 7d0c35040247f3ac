#include <catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>
#include <random>

#include "ordalg/algebra.hpp"
#include "ordalg/equivalence.hpp"
#include "ordalg/io.hpp"

using namespace ordalg;

namespace {

const Arena lab = Arena::labeled({"a", "b"});

Play play(std::string_view text) { return io::parse_play(lab, text); }

std::size_t common_prefix(const Event& a, const Event& b) {
    std::size_t k = 0;
    while (k < a.length() && k < b.length() && a[k] == b[k]) ++k;
    return k;
}

// Oracle: sums c_r d_s over every label-respecting bijection of supports whose synchronisation is consistent.
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

Vector<Natural> random_vector(std::mt19937_64& rng) {
    static const std::vector<Event> pool{lab.occurrence("a", 0), lab.occurrence("a", 1), lab.occurrence("a", 2),
                                         lab.occurrence("b", 0), lab.occurrence("b", 1)};
    Vector<Natural> u(lab);
    const int terms = 1 + static_cast<int>(rng() % 3);
    for (int t = 0; t < terms; ++t) {
        std::vector<Event> events = pool;
        std::shuffle(events.begin(), events.end(), rng);
        events.resize(1 + rng() % 3);
        const auto orders = all_preorders(Play::make_support(events));
        u.add(orders[rng() % orders.size()], 1 + rng() % 3);
    }
    return u;
}

}  // namespace

TEST_CASE("permuted synchronisation of the worked example", "[algebra]") {
    const Play r = play("{a1<b1, a1<a2}");
    const Play s = play("{b1<a1, a2}");
    const auto ps = psync(Vector<Natural>(lab, r), Vector<Natural>(lab, s));
    Vector<Natural> expected(lab, play("{a1<b1<a2}"));
    expected.add(*sync(r, s), 1);
    CHECK(ps == expected);
    CHECK(outcome(ps) == 1);
}

TEST_CASE("outcome counts consistent plays linearly", "[algebra]") {
    Vector<Natural> u(lab, play("{a0<b0}"), 3);
    u.add(play("{a0<b0, b0<a0}"), 5);
    CHECK(outcome(u) == 3);
    const Vector<Natural> v(lab, play("{a1}"), 2);
    CHECK(outcome(u + v) == outcome(u) + outcome(v));
    CHECK(outcome(u.scaled(4)) == 12);
    CHECK(outcome(Vector<Natural>(lab)) == 0);
}

TEST_CASE("pairing matches the brute-force oracle", "[algebra][oracle]") {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 300; ++i) {
        const auto u = random_vector(rng);
        const auto v = random_vector(rng);
        CHECK(pairing(u, v) == brute_force_pairing(u, v));
        CHECK(pairing(u, v) == outcome(psync(u, v)));
    }
}

TEST_CASE("permuted synchronisation is commutative and associative", "[algebra][property]") {
    std::mt19937_64 rng(23);
    for (int i = 0; i < 150; ++i) {
        const auto u = random_vector(rng);
        const auto v = random_vector(rng);
        const auto w = random_vector(rng);
        CHECK(obs_equiv(psync(u, v), psync(v, u)));
        CHECK(pairing(psync(u, v), w) == pairing(u, psync(v, w)));
    }
}

TEST_CASE("split representation commutes with synchronisation", "[algebra][property]") {
    std::mt19937_64 rng(29);
    for (int i = 0; i < 150; ++i) {
        const auto u = random_vector(rng);
        const auto v = random_vector(rng);
        CHECK(psplit(psync(u, v)) == psync(psplit(u), psplit(v)));
        CHECK(obs_equiv(u, v) == obs_equiv(psplit(u), psplit(v)));
    }
}

TEST_CASE("observational equivalence basics", "[algebra]") {
    const Vector<Natural> zero(lab);
    CHECK(obs_equiv(Vector<Natural>(lab, play("{a0<b0, b0<a0}")), zero));
    CHECK(obs_equiv(Vector<Natural>(lab, play("{a0<b0}")), Vector<Natural>(lab, play("{a3<b7}"))));
    CHECK_FALSE(obs_equiv(Vector<Natural>(lab, play("{a0<b0}")), Vector<Natural>(lab, play("{b0<a0}"))));
    std::mt19937_64 rng(31);
    for (int i = 0; i < 100; ++i) {
        const auto u = random_vector(rng);
        const auto v = random_vector(rng);
        if (obs_equiv(u, v)) CHECK(outcome(u) == outcome(v));
        CHECK(obs_equiv(u, orbit_normal_form(u)));
    }
}

TEST_CASE("partial neutral elements act as units up to a scalar", "[algebra]") {
    const auto [none, one] = partial_neutral<Natural>(lab, {});
    CHECK(none.is_zero());
    CHECK(one == 1);
    std::vector<Vector<Natural>> family;
    for (const auto* text : {"{a0}", "{a0<a1}", "{a0, b0}", "{b1<a0}", "{a0<b0<a2}"}) family.emplace_back(lab, play(text));
    const auto [e, n] = partial_neutral(lab, family);
    CHECK(n > 0);
    for (const auto& w : family) CHECK(psync(w, e) == w.scaled(n));
    const Play far = unit_counterexample(e);
    CHECK(pairing(Vector<Natural>(lab, far), e) == 0);
}

TEST_CASE("operations on sum arenas", "[algebra]") {
    const Arena x = Arena::static_web({"p"});
    const Arena y = Arena::static_web({"q"});
    const Arena z = Arena::static_web({"r"});
    const Arena xy = Arena::sum({{0, "X", x}, {1, "Y", y}});
    const Arena yz = Arena::sum({{1, "Y", y}, {2, "Z", z}});
    const Arena xz = Arena::sum({{0, "X", x}, {2, "Z", z}});
    const Vector<Natural> u(xy, io::parse_play(xy, "{X:p<Y:q}"));
    const Vector<Natural> v(yz, io::parse_play(yz, "{Y:q<Z:r}"), 2);
    const auto composed = compose_through(u, v);
    CHECK(composed == Vector<Natural>(xz, io::parse_play(xz, "{X:p<Z:r}"), 2));

    const auto kept = restrict(u, OrbitClosedSet::components(xy, {0}));
    CHECK(kept == Vector<Natural>(xy, io::parse_play(xy, "{X:p}")));

    const Arena only_x = Arena::sum({{0, "X", x}});
    const Arena only_z = Arena::sum({{2, "Z", z}});
    const auto t = tensor(Vector<Natural>(only_x, io::parse_play(only_x, "{X:p}"), 3),
                          Vector<Natural>(only_z, io::parse_play(only_z, "{Z:r}"), 5));
    CHECK(t == Vector<Natural>(xz, io::parse_play(xz, "{X:p, Z:r}"), 15));
    CHECK_THROWS_AS(tensor(u, u), UsageError);
}

TEST_CASE("vectors reject foreign events and arenas", "[algebra]") {
    const Arena web = Arena::static_web({"a"});
    CHECK_THROWS_AS(Vector<Natural>(lab, io::parse_play(web, "{a}")), UsageError);
    CHECK_THROWS_AS(Vector<Natural>(lab) + Vector<Natural>(web), UsageError);
}
