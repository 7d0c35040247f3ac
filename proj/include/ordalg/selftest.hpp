#pragma once

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ordalg/algebra.hpp"
#include "ordalg/basis.hpp"
#include "ordalg/equivalence.hpp"
#include "ordalg/exponential.hpp"
#include "ordalg/pi/corpus.hpp"
#include "ordalg/pi/parser.hpp"
#include "ordalg/pi/translate.hpp"

// Acceptance checks shared by the acceptance test binary and `ordalg selftest`.
namespace ordalg::selftest {

struct Result {
    int id;
    std::string name;
    bool passed;
    std::string detail;
    double seconds;
    double budget;
};

/// Seed for the randomized corpora: ORDALG_SEED when set, a fixed default otherwise.
inline std::uint64_t seed() {
    if (const char* s = std::getenv("ORDALG_SEED")) {
        try {
            return std::stoull(s);
        } catch (const std::exception&) {
            throw UsageError(std::string("ORDALG_SEED must be a number, got '") + s + "'");
        }
    }
    return 20240611;
}

namespace detail {

/// Collects failures; a check passes when nothing was recorded.
class Checker {
public:
    void expect(bool ok, const std::string& what) {
        ++checks_;
        if (!ok && failures_.size() < 5) failures_.push_back(what);
        if (!ok) ++failed_;
    }
    bool ok() const { return failed_ == 0; }
    std::string summary() const {
        std::ostringstream out;
        out << checks_ - failed_ << "/" << checks_ << " checks";
        for (const auto& f : failures_) out << "; " << f;
        return out.str();
    }
    std::size_t checks() const { return checks_; }

private:
    std::size_t checks_ = 0;
    std::size_t failed_ = 0;
    std::vector<std::string> failures_;
};

inline Play play_of(const Arena& arena, std::vector<std::string> events,
                    std::vector<std::pair<std::string, std::string>> covers) {
    std::vector<Event> support;
    for (const auto& e : events) support.push_back(arena.parse_event(e));
    std::vector<EventPair> pairs;
    for (const auto& [a, b] : covers) pairs.emplace_back(arena.parse_event(a), arena.parse_event(b));
    return make_play(std::move(support), pairs);
}

inline std::vector<std::shared_ptr<const Play::Support>> nonempty_subsets(const Arena& arena) {
    std::vector<std::shared_ptr<const Play::Support>> out;
    const std::size_t n = arena.symbols().size();
    for (std::uint32_t mask = 1; mask < (1U << n); ++mask) {
        std::vector<Event> events;
        for (std::size_t i = 0; i < n; ++i)
            if (mask >> i & 1U) events.push_back(arena.atom(i));
        out.push_back(Play::make_support(std::move(events)));
    }
    return out;
}

template <class Rng>
std::size_t pick(Rng& rng, std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

template <Semiring S>
std::string show(const typename S::value_type& v) {
    return S::format(v);
}

// --- criterion bodies -----------------------------------------------------------------

inline std::string worked_examples(Checker& c) {
    const Arena lab = Arena::labeled({"a", "b", "c"});
    const Play r = play_of(lab, {"a1", "a2", "b1"}, {{"a1", "b1"}, {"a1", "a2"}});
    const Play chain = play_of(lab, {"a1", "a2", "b1"}, {{"a1", "b1"}, {"b1", "a2"}});
    const Play s1 = play_of(lab, {"a1", "a2", "b1"}, {{"b1", "a2"}});
    const Play s2 = play_of(lab, {"a1", "a2", "b1"}, {{"b1", "a1"}});

    const auto sync1 = sync(r, s1);
    c.expect(sync1 && *sync1 == chain && is_consistent(*sync1), "sync with b<a2 is the chain a1<b<a2");
    const auto sync2 = sync(r, s2);
    c.expect(sync2 && !is_consistent(*sync2), "sync with b<a1 is cyclic");

    const auto ps = psync(Vector<Natural>(lab, r), Vector<Natural>(lab, s2));
    Vector<Natural> expected(lab, chain);
    expected.add(*sync2, 1);
    c.expect(ps == expected, "permuted synchronisation is chain + cyclic play");

    const Play two = play_of(lab, {"a0", "b1", "b2", "c1", "c2"},
                             {{"a0", "b1"}, {"b1", "c1"}, {"a0", "b2"}, {"b2", "c2"}});
    const Play one = play_of(lab, {"a0", "b1", "b2", "c1", "c2"},
                             {{"a0", "b1"}, {"b1", "c1"}, {"c1", "c2"}, {"a0", "b2"}, {"b2", "c2"}});
    c.expect(multiplicity(lab, two) == 2, "multiplicity of the symmetric play is 2");
    c.expect(multiplicity(lab, one) == 1, "multiplicity of the asymmetric play is 1");

    const Play fan = play_of(lab, {"a0", "b0", "c1", "c2", "c3"},
                             {{"a0", "b0"}, {"b0", "c1"}, {"a0", "c2"}, {"a0", "c3"}});
    const auto sat = saturate(lab, fan);
    bool factor_two = sat.size() == 3;
    for (const auto& [p, k] : sat) factor_two = factor_two && k == 2;
    c.expect(factor_two, "saturation is twice the sum of three plays");

    const Arena web = Arena::static_web({"a", "b"});
    const std::vector<Play> base{play_of(web, {"a", "b"}, {}), play_of(web, {"a", "b"}, {{"a", "b"}}),
                                 play_of(web, {"a", "b"}, {{"b", "a"}})};
    const auto gram = gram_matrix<Natural>(base);
    const std::vector<std::vector<mpz_class>> want{{1, 1, 1}, {1, 1, 0}, {1, 0, 1}};
    c.expect(gram == want, "Gram matrix on {a,b}");
    return c.summary();
}

inline std::string split_identity(Checker& c) {
    auto run = [&](const std::vector<std::string>& atoms) {
        const Arena web = Arena::static_web(atoms);
        auto p = [&](std::vector<std::pair<std::string, std::string>> covers) { return play_of(web, atoms, covers); };
        Vector<Natural> lhs(web, p({{"x", "y"}}));
        lhs.add(p({{"x", "z"}, {"z", "y"}}), 1);
        Vector<Natural> rhs(web, p({{"x", "y"}, {"x", "z"}}));
        rhs.add(p({{"x", "y"}, {"z", "y"}}), 1);
        std::size_t count = 0;
        std::vector<Event> events;
        for (const auto& a : atoms) events.push_back(web.atom(a));
        for (const auto& s : all_preorders(Play::make_support(events))) {
            const Vector<Natural> t(web, s);
            c.expect(pairing(lhs, t) == pairing(rhs, t), "split identity fails on a probe");
            ++count;
        }
        return count;
    };
    const auto three = run({"x", "y", "z"});
    const auto four = run({"x", "y", "z", "w"});
    c.expect(three == 29 && four == 355, "preorder counts 29 and 355");
    return std::to_string(three) + " preorders on {x,y,z}, " + std::to_string(four) +
           " with an isolated fourth point; " + c.summary();
}

template <Semiring S, class Rewrite, class Coefficient>
void compare_routes(Checker& c, const Arena& web, std::mt19937_64& rng, std::size_t pairs, Rewrite rewrite,
                    Coefficient coefficient, const char* label) {
    std::vector<Event> all;
    for (std::size_t i = 0; i < web.symbols().size(); ++i) all.push_back(web.atom(i));
    const auto posets = all_partial_orders(Play::make_support(all));
    auto random_vector = [&] {
        Vector<S> u(web);
        const std::size_t k = 1 + pick(rng, 3);
        for (std::size_t i = 0; i < k; ++i) u.add(posets[pick(rng, posets.size())], coefficient());
        return u;
    };
    std::size_t equivalent = 0;
    for (std::size_t i = 0; i < pairs; ++i) {
        const Vector<S> u = random_vector();
        Vector<S> v = i % 3 == 0 ? random_vector() : rewrite(u);
        if (i % 3 == 2) v.add(posets[pick(rng, posets.size())], coefficient());
        const bool basis = obs_equiv(u, v, Route::basis);
        const bool oracle = probe_oracle_equiv(u, v, 4);
        equivalent += oracle;
        c.expect(basis == oracle, std::string(label) + " route disagrees with the probe oracle");
    }
    c.expect(equivalent > 0 && equivalent < pairs, std::string(label) + " corpus mixes verdicts");
}

inline std::string basis_soundness(Checker& c, std::uint64_t s) {
    const Arena three = Arena::static_web({"x", "y", "z"});
    std::vector<Play> posets;
    for (const auto& support : nonempty_subsets(three))
        for (auto& p : all_partial_orders(support)) posets.push_back(std::move(p));
    std::size_t exhaustive = 0;
    for (const auto& p : posets)
        for (const auto& q : posets) {
            const bool oracle_rat = probe_oracle_equiv(Vector<Rational>(three, p), Vector<Rational>(three, q), 4);
            const bool oracle_bool = probe_oracle_equiv(Vector<Boolean>(three, p), Vector<Boolean>(three, q), 4);
            c.expect(obs_equiv(Vector<Rational>(three, p), Vector<Rational>(three, q)) == oracle_rat,
                     "weak route on single posets");
            c.expect(obs_equiv(Vector<Boolean>(three, p), Vector<Boolean>(three, q)) == oracle_bool,
                     "totals route on single posets");
            ++exhaustive;
        }

    std::mt19937_64 rng(s);
    const Arena four = Arena::static_web({"p", "q", "r", "s"});
    compare_routes<Rational>(
        c, four, rng, 250,
        [&](const Vector<Rational>& u) { return recompose(four, decompose_weak(u)); },
        [&] {
            static constexpr long values[] = {-2, -1, 1, 2, 3};
            return mpq_class(values[pick(rng, 5)]);
        },
        "rat");
    compare_routes<Boolean>(
        c, four, rng, 250,
        [&](const Vector<Boolean>& u) {
            Vector<Boolean> v(four);
            for (const auto& [r, k] : u.terms())
                for (const auto& t : linear_extensions(r)) v.add(t, true);
            return v;
        },
        [] { return true; }, "bool");
    return std::to_string(exhaustive) + " single-poset pairs and 500 random 4-point pairs; " + c.summary();
}

inline std::string idempotent_collapse(Checker& c) {
    const Arena four = Arena::static_web({"p", "q", "r", "s"});
    std::size_t plays = 0;
    for (const auto& support : nonempty_subsets(four))
        for (const auto& r : all_partial_orders(support)) {
            Vector<Boolean> extensions(four);
            for (const auto& t : linear_extensions(r)) extensions.add(t, true);
            const Vector<Boolean> u(four, r);
            c.expect(obs_equiv(u, extensions), "basis route: play vs its linear extensions");
            c.expect(probe_oracle_equiv(u, extensions, 4), "oracle: play vs its linear extensions");
            ++plays;
        }
    return std::to_string(plays) + " posets; " + c.summary();
}

inline std::string counting(Checker& c) {
    const Arena three = Arena::static_web({"x", "y", "z"});
    const auto full = nonempty_subsets(three).back();
    c.expect(total_orders(full).size() == 6, "6 total orders on 3 points");
    c.expect(weak_total_orders(full).size() == 13, "13 weak total orders on 3 points");
    std::size_t slices = 0;
    for (const auto& support : nonempty_subsets(three))
        for (const bool weak : {false, true}) {
            const auto base = weak ? weak_total_orders(support) : total_orders(support);
            const auto duals = dual_family(three, base);
            for (std::size_t i = 0; i < base.size(); ++i)
                for (std::size_t j = 0; j < base.size(); ++j)
                    c.expect(pairing(Vector<Rational>(three, base[i]), duals[j]) == mpq_class(i == j ? 1 : 0),
                             "dual family is biorthogonal");
            ++slices;
        }
    return std::to_string(slices) + " slices; " + c.summary();
}

template <Semiring S>
void laws_over(Checker& c, const char* label) {
    for (const auto& law : pi::law_corpus<S>(3)) {
        bool ok = false;
        std::string error;
        try {
            ok = pi::term_equiv(law.lhs, law.rhs);
        } catch (const std::exception& e) {
            error = std::string(": ") + e.what();
        }
        c.expect(ok, std::string(label) + " " + law.law + error);
    }
}

inline std::string law_suites(Checker& c) {
    laws_over<Natural>(c, "nat");
    laws_over<MustTesting>(c, "must");
    return std::to_string(pi::law_corpus<Natural>(3).size()) + " instances per semiring; " + c.summary();
}

// Rewrites a simple term into an equivalent one by a basic or linear law.
template <Semiring S>
pi::Term<S> equivalent_rewrite(const pi::Term<S>& p, std::size_t k) {
    using T = pi::Term<S>;
    switch (k % 4) {
        case 0:
            return T::par(T::one(), p);
        case 1:
            return T::hide(pi::free_name("fresh"), p);
        case 2: {
            if (const auto* par = p.template as<pi::ParNode<S>>()) return T::par(par->right, par->left);
            return T::par(p, T::one());
        }
        default: {
            // an inaction on a private channel vanishes
            const pi::Name h = pi::free_name("spare");
            return T::par(p, T::hide(h, T::action(pi::max_location(p) + 1, h, pi::Polarity::positive, T::zero())));
        }
    }
}

template <Semiring S>
typename S::value_type composed_outcome(const pi::Term<S>& p, const pi::Term<S>& q) {
    const auto [p2, q2] = pi::par_apart(p, q);
    return pi::outcome_term(pi::Term<S>::par(p2, q2));
}

inline std::string full_abstraction(Checker& c, std::uint64_t s) {
    std::mt19937_64 rng(s);
    using T = pi::Term<Natural>;
    pi::SimpleTermGenerator<Natural> mixed(rng, {.max_actions = 6});
    pi::SimpleTermGenerator<Natural> pure(rng, {.max_actions = 6, .inactions = false});
    std::vector<T> sample;
    std::size_t nonzero = 0;
    for (std::size_t i = 0; i < 200; ++i) {
        const T p = i % 2 ? pure() : mixed();
        const T q = i % 2 ? pi::mirror(i % 4 == 1 ? p : pure()) : mixed();
        c.expect(pi::source_actions(p) <= 6 && pi::source_actions(q) <= 6, "corpus term exceeds 6 actions");
        const auto check = pi::cross_check(p, q);
        c.expect(check.agree(), "operational " + check.operational.get_str() + " vs denotational " +
                                    check.denotational.get_str() + " on " + pi::to_text(p) + " || " + pi::to_text(q));
        nonzero += check.operational != 0;
        if (sample.size() < 20) sample.push_back(p);
    }
    std::size_t testers = 0;
    for (std::size_t k = 0; k < sample.size(); ++k) {
        const T& p = sample[k];
        const T q = equivalent_rewrite(p, k);
        c.expect(pi::term_equiv(p, q), "rewrite not recognised as equivalent: " + pi::to_text(p));
        for (std::size_t j = 0; j < 50; ++j) {
            const T r = j % 2 ? pi::mirror(pure()) : mixed();
            c.expect(composed_outcome(p, r) == composed_outcome(q, r),
                     "tester separates " + pi::to_text(p) + " from its rewrite");
            ++testers;
        }
    }
    return "200 pairs (" + std::to_string(nonzero) + " with nonzero outcome), " + std::to_string(testers) +
           " tester runs; " + c.summary();
}

// Moves classes of a vector over fin(n, #X) to the classes given by `target`, merging
// classes that land together through the bijection (old class, copy) -> copy.
inline Vector<Natural> regroup(const Vector<Natural>& u, std::size_t classes, const std::vector<std::size_t>& target,
                               const CopyBijection& phi) {
    const Arena out_arena = Arena::fin_index(classes, u.arena().body());
    Vector<Natural> out(out_arena);
    for (const auto& [r, k] : u.terms()) {
        std::vector<Event> images;
        for (const auto& e : r.support()) {
            const auto cls = static_cast<std::size_t>(e[0].value);
            Event moved = e;
            moved.mutable_segment(0).value = static_cast<std::int64_t>(target[cls]);
            moved.mutable_segment(2).value = phi(cls, e[2].value);
            images.push_back(moved);
        }
        out.add_unchecked(relabel(r, images), k);
    }
    return out;
}

inline std::string gamma_delta(Checker& c, std::uint64_t s) {
    std::mt19937_64 rng(s);
    const Arena body = Arena::static_web({"p", "q"});
    const Arena bang = Arena::sharp(body);
    auto random_play = [&](const Arena& arena, bool classes, std::size_t n) {
        const std::size_t size = 1 + pick(rng, 3);
        std::set<Event> events;
        while (events.size() < size) {
            const Event inner = bang.in_copy(static_cast<std::int64_t>(pick(rng, 2)), body.atom(pick(rng, 2)));
            events.insert(classes ? arena.in_class(pick(rng, n), inner) : inner);
        }
        const auto support = Play::make_support({events.begin(), events.end()});
        const auto orders = all_preorders(support);
        return orders[pick(rng, orders.size())];
    };
    const Arena two = Arena::fin_index(2, bang);
    const Arena three = Arena::fin_index(3, bang);
    const auto phi = CopyBijection::interleaved(2, 64);
    const auto phi3 = CopyBijection::interleaved(3, 4);
    std::size_t instances = 0;
    std::size_t nonzero = 0;
    for (std::size_t i = 0; i < 100; ++i) {
        Vector<Natural> u(two, random_play(two, true, 2));
        u.add(random_play(two, true, 2), 1 + pick(rng, 2));
        Vector<Natural> v(bang, random_play(bang, false, 0));
        v.add(random_play(bang, false, 0), 1);
        const auto merged = pairing(gamma(2, phi, u), v);
        c.expect(merged == pairing(u, delta(2, v)), "pairing is not adjoint");
        nonzero += merged != 0;
        c.expect(obs_equiv(gamma(2, phi, u), gamma(2, CopyBijection::blocked(2, 64), u)),
                 "gamma depends on the merging bijection");
        // commutativity: swapping the two classes
        const Vector<Natural> swapped = regroup(u, 2, {1, 0}, CopyBijection::blocked(2, 4));
        c.expect(obs_equiv(gamma(2, phi, u), gamma(2, phi, swapped)), "gamma is not commutative");
        // associativity: (0 1) 2 against 0 (1 2)
        Vector<Natural> w(three, random_play(three, true, 3));
        w.add(random_play(three, true, 3), 1);
        const auto left = gamma(2, phi, regroup(w, 2, {0, 0, 1}, CopyBijection::interleaved(3, 4)));
        const auto right = gamma(2, phi, regroup(w, 2, {0, 1, 1}, CopyBijection::interleaved(3, 4)));
        c.expect(obs_equiv(left, right), "gamma is not associative");
        c.expect(obs_equiv(left, gamma(3, phi3, w)), "binary merges disagree with the ternary one");
        ++instances;
    }
    return std::to_string(instances) + " instances (" + std::to_string(nonzero) + " nonzero pairings); " + c.summary();
}

inline std::string interleaving(Checker& c) {
    const std::string par = "a?(x).{1} | b?(y).{1}";
    const std::string sum = "a?(x).b?(y).{1} + b?(y).a?(x).{1}";
    c.expect(pi::term_equiv(pi::parse_term<Boolean>(par), pi::parse_term<Boolean>(sum)),
             "bool: parallel and interleaved sum should be equivalent");
    c.expect(!pi::term_equiv(pi::parse_term<Natural>(par), pi::parse_term<Natural>(sum)),
             "nat: parallel and interleaved sum should differ");
    c.expect(!pi::term_equiv(pi::parse_term<Natural>("a?(x).b?(y).{1}"), pi::parse_term<Natural>("b?(y).a?(x).{1}")),
             "nat: the two sequentialisations should differ");
    return c.summary();
}

inline std::string unit_boundary(Checker& c) {
    const Arena web = Arena::static_web({"p", "q"});
    std::vector<Vector<Rational>> family;
    for (const auto& support : nonempty_subsets(web))
        for (const auto& r : all_preorders(support)) family.emplace_back(web, r);
    family.emplace_back(web, Play());
    const auto [e, n] = partial_neutral(web, family);
    const Vector<Rational> unit = e.scaled(mpq_class(1, static_cast<long>(n)));
    for (const auto& w : family) c.expect(psync(w, unit) == w, "e/n is not neutral on a play");

    const Arena lab = Arena::labeled({"a"});
    std::vector<Vector<Rational>> finite;
    finite.emplace_back(lab, play_of(lab, {"a0"}, {}));
    finite.emplace_back(lab, play_of(lab, {"a0", "a1"}, {{"a0", "a1"}}));
    const auto [candidate, m] = partial_neutral(lab, finite);
    const Vector<Rational> probe(lab, unit_counterexample(candidate));
    c.expect(!(psync(probe, candidate.scaled(mpq_class(1, static_cast<long>(m)))) == probe),
             "the labeled counterexample is absorbed");
    return std::to_string(family.size()) + " plays on the 2-event arena; " + c.summary();
}

}  // namespace detail

/// Runs every acceptance criterion and reports one result per criterion.
inline std::vector<Result> run_all(std::uint64_t s = seed(), const std::function<void(const Result&)>& on_result = {}) {
    using Body = std::function<std::string(detail::Checker&)>;
    struct Entry {
        int id;
        const char* name;
        double budget;
        Body body;
    };
    const std::vector<Entry> entries{
        {1, "worked examples", 1.0, [](auto& c) { return detail::worked_examples(c); }},
        {2, "split identity", 5.0, [](auto& c) { return detail::split_identity(c); }},
        {3, "basis soundness", 60.0, [s](auto& c) { return detail::basis_soundness(c, s); }},
        {4, "idempotent collapse", 30.0, [](auto& c) { return detail::idempotent_collapse(c); }},
        {5, "base counts and dual families", 5.0, [](auto& c) { return detail::counting(c); }},
        {6, "law suites", 120.0, [](auto& c) { return detail::law_suites(c); }},
        {7, "full abstraction cross-check", 300.0, [s](auto& c) { return detail::full_abstraction(c, s); }},
        {8, "gamma/delta adjunction", 60.0, [s](auto& c) { return detail::gamma_delta(c, s); }},
        {9, "interleaving degeneracy", 10.0, [](auto& c) { return detail::interleaving(c); }},
        {10, "unit existence boundary", 5.0, [](auto& c) { return detail::unit_boundary(c); }},
    };
    std::vector<Result> out;
    for (const auto& entry : entries) {
        detail::Checker checker;
        const auto start = std::chrono::steady_clock::now();
        std::string detail;
        try {
            detail = entry.body(checker);
        } catch (const std::exception& e) {
            checker.expect(false, std::string("exception: ") + e.what());
            detail = checker.summary();
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = seconds < entry.budget;
        if (!in_time) detail += "; over the time budget";
        out.push_back({entry.id, entry.name, checker.ok() && in_time, detail, seconds, entry.budget});
        if (on_result) on_result(out.back());
    }
    return out;
}

inline std::string format(const Result& r) {
    std::ostringstream out;
    out.setf(std::ios::fixed);
    out.precision(3);
    out << (r.passed ? "PASS" : "FAIL") << " [" << r.id << "] " << r.name << " (" << r.seconds << "s / " << r.budget
        << "s) " << r.detail;
    return out.str();
}

}  // namespace ordalg::selftest
