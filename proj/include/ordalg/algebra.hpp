#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "ordalg/arena.hpp"
#include "ordalg/errors.hpp"
#include "ordalg/orbit.hpp"
#include "ordalg/play.hpp"
#include "ordalg/semiring.hpp"

namespace ordalg {

/// Finite formal linear combination of plays over one arena, coefficients in S.
/// Zero coefficients are never stored.
template <Semiring S>
class Vector {
public:
    using Scalar = typename S::value_type;
    using Terms = std::map<Play, Scalar>;

    explicit Vector(Arena arena) : arena_(std::move(arena)) {}

    Vector(Arena arena, const Play& r, const Scalar& coefficient = S::one()) : arena_(std::move(arena)) {
        add(r, coefficient);
    }

    const Arena& arena() const { return arena_; }
    const Terms& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }

    Scalar coefficient(const Play& r) const {
        auto it = terms_.find(r);
        return it == terms_.end() ? S::zero() : it->second;
    }

    /// Adds c·r after checking that every event of r belongs to the arena.
    void add(const Play& r, const Scalar& c) {
        for (const auto& e : r.support()) arena_.require(e);
        add_unchecked(r, c);
    }

    /// Same as add, for plays already known to live in the arena.
    void add_unchecked(const Play& r, const Scalar& c) {
        if (ordalg::is_zero<S>(c)) return;
        auto [it, inserted] = terms_.try_emplace(r, c);
        if (!inserted) {
            it->second = S::add(it->second, c);
            if (ordalg::is_zero<S>(it->second)) terms_.erase(it);
        }
    }

    Vector& operator+=(const Vector& other) {
        require_same_arena(other);
        for (const auto& [r, c] : other.terms_) add_unchecked(r, c);
        return *this;
    }

    friend Vector operator+(Vector a, const Vector& b) { return a += b; }

    Vector scaled(const Scalar& c) const {
        Vector out(arena_);
        for (const auto& [r, x] : terms_) out.add_unchecked(r, S::mul(c, x));
        return out;
    }

    Vector operator-() const
        requires Ring<S>
    {
        return scaled(S::negate(S::one()));
    }

    friend Vector operator-(const Vector& a, const Vector& b)
        requires Ring<S>
    {
        return a + (-b);
    }

    /// Same plays with coefficients equal in S (not observational equivalence).
    bool operator==(const Vector& other) const {
        if (!(arena_ == other.arena_) || terms_.size() != other.terms_.size()) return false;
        auto it = other.terms_.begin();
        for (const auto& [r, c] : terms_) {
            if (!(r == it->first) || !S::equal(c, it->second)) return false;
            ++it;
        }
        return true;
    }

    void require_same_arena(const Vector& other) const {
        if (!(arena_ == other.arena_))
            throw UsageError("arena mismatch: " + arena_.describe() + " vs " + other.arena_.describe());
    }

private:
    Arena arena_;
    Terms terms_;
};

/// Coefficient change along a map of semirings.
template <Semiring T, Semiring S, class F>
Vector<T> map_coefficients(const Vector<S>& u, F&& f) {
    Vector<T> out(u.arena());
    for (const auto& [r, c] : u.terms()) out.add_unchecked(r, f(c));
    return out;
}

template <Semiring S>
    requires embeds_in_rationals<S>
Vector<Rational> embed_to_rat(const Vector<S>& u) {
    return map_coefficients<Rational>(u, [](const auto& c) { return ordalg::embed_to_rat<S>(c); });
}

/// Sum of the coefficients of the consistent plays.
template <Semiring S>
typename S::value_type outcome(const Vector<S>& u) {
    auto total = S::zero();
    for (const auto& [r, c] : u.terms())
        if (is_consistent(r)) total = S::add(total, c);
    return total;
}

/// Union of the supports of r and s with the closure of both relations.
inline Play merge_plays(const Play& r, const Play& s) {
    std::vector<Event> events(r.support().begin(), r.support().end());
    events.insert(events.end(), s.support().begin(), s.support().end());
    auto support = Play::make_support(std::move(events));
    Play::Rows rows(support->size(), 0);
    auto copy = [&](const Play& p) {
        std::vector<std::size_t> where(p.size());
        for (std::size_t i = 0; i < p.size(); ++i)
            where[i] = static_cast<std::size_t>(
                std::lower_bound(support->begin(), support->end(), p.support()[i]) - support->begin());
        for (std::size_t i = 0; i < p.size(); ++i)
            for (std::size_t j = 0; j < p.size(); ++j)
                if (p.leq(i, j)) rows[where[i]] |= Play::bit(where[j]);
    };
    copy(r);
    copy(s);
    return Play(std::move(support), std::move(rows));
}

/// Permuted synchronisation. Each pair (r, s) contributes r ⋎ βs for every induced bijection
/// β from supp(s) onto supp(r); the bijections fixing s account for its multiplicity.
template <Semiring S>
Vector<S> psync(const Vector<S>& u, const Vector<S>& v) {
    u.require_same_arena(v);
    Vector<S> out(u.arena());
    for (const auto& [r, a] : u.terms())
        for (const auto& [s, b] : v.terms()) {
            if (r.size() != s.size()) continue;
            const auto c = S::mul(a, b);
            for_each_induced_bijection(u.arena(), s.support(), r.support(),
                                       [&](std::span<const std::size_t> image) {
                                           out.add_unchecked(*sync(r, transport(s, r.shared_support(), image)), c);
                                           return true;
                                       });
        }
    return out;
}

/// ⟨u ⋈ v⟩ without materialising the synchronised vector.
template <Semiring S>
typename S::value_type pairing(const Vector<S>& u, const Vector<S>& v) {
    u.require_same_arena(v);
    auto total = S::zero();
    for (const auto& [r, a] : u.terms())
        for (const auto& [s, b] : v.terms()) {
            if (r.size() != s.size()) continue;
            std::uint64_t hits = 0;
            for_each_induced_bijection(u.arena(), s.support(), r.support(),
                                       [&](std::span<const std::size_t> image) {
                                           if (sync_is_consistent(r, transport(s, r.shared_support(), image)))
                                               ++hits;
                                           return true;
                                       });
            if (hits) total = S::add(total, S::mul(S::mul(a, b), S::from_count(hits)));
        }
    return total;
}

// --- sums of arenas -------------------------------------------------------------------

/// Sum arena holding the components of both operands; components with the same id must agree.
inline Arena join_sums(const Arena& x, const Arena& y) {
    if (x.kind() != Arena::Kind::sum || y.kind() != Arena::Kind::sum)
        throw UsageError("expected sum arenas, got " + x.describe() + " and " + y.describe());
    std::vector<Arena::Component> parts = x.components();
    for (const auto& c : y.components()) {
        if (x.has_component(c.id)) {
            const auto& mine = x.component(c.id);
            if (mine.name != c.name || !(mine.arena() == c.arena()))
                throw UsageError("component " + std::to_string(c.id) + " differs between the operands");
            continue;
        }
        parts.push_back(c);
    }
    return Arena::sum(std::move(parts));
}

inline std::vector<ComponentId> shared_components(const Arena& x, const Arena& y) {
    std::vector<ComponentId> out;
    for (const auto& c : x.components())
        if (y.has_component(c.id)) out.push_back(c.id);
    return out;
}

/// Sum arena made of the listed components of `arena`.
inline Arena sub_sum(const Arena& arena, const std::vector<ComponentId>& keep) {
    std::vector<Arena::Component> parts;
    for (const auto& c : arena.components())
        if (std::find(keep.begin(), keep.end(), c.id) != keep.end()) parts.push_back(c);
    return Arena::sum(std::move(parts));
}

/// u seen as a vector over the one-component sum arena {id: u.arena()}.
template <Semiring S>
Vector<S> lift(const Vector<S>& u, ComponentId id, const std::string& name) {
    const Arena target = Arena::sum({Arena::Component(id, name, u.arena())});
    const Segment tag{SegmentKind::component, static_cast<std::int64_t>(id), false};
    Vector<S> out(target);
    for (const auto& [r, c] : u.terms()) {
        std::vector<Event> images;
        images.reserve(r.size());
        for (const auto& e : r.support()) images.push_back(e.under(tag));
        out.add_unchecked(relabel(r, images), c);
    }
    return out;
}

/// Partial permuted synchronisation of u over X+Y and v over X+Z, where X is the set of
/// components both sum arenas share. For each pair (r, s) and each induced bijection β from
/// the X-part of s onto the X-part of r, the result gains r merged with s moved by β.
template <Semiring S>
Vector<S> partial_psync(const Vector<S>& u, const Vector<S>& v) {
    const Arena joined = join_sums(u.arena(), v.arena());
    const auto shared = shared_components(u.arena(), v.arena());
    auto in_shared = [&](const Event& e) {
        return std::find(shared.begin(), shared.end(), component_of(e)) != shared.end();
    };
    Vector<S> out(joined);
    for (const auto& [r, a] : u.terms()) {
        std::vector<Event> r_shared;
        for (const auto& e : r.support())
            if (in_shared(e)) r_shared.push_back(e);
        for (const auto& [s, b] : v.terms()) {
            std::vector<Event> s_shared;
            std::vector<std::size_t> s_positions;
            for (std::size_t i = 0; i < s.size(); ++i)
                if (in_shared(s.support()[i])) {
                    s_shared.push_back(s.support()[i]);
                    s_positions.push_back(i);
                }
            if (s_shared.size() != r_shared.size()) continue;
            const auto c = S::mul(a, b);
            for_each_induced_bijection(joined, s_shared, r_shared, [&](std::span<const std::size_t> image) {
                std::vector<Event> moved(s.support().begin(), s.support().end());
                for (std::size_t k = 0; k < s_positions.size(); ++k) moved[s_positions[k]] = r_shared[image[k]];
                out.add_unchecked(merge_plays(r, relabel(s, moved)), c);
                return true;
            });
        }
    }
    return out;
}

/// Tensor product of vectors over sum arenas with disjoint components.
template <Semiring S>
Vector<S> tensor(const Vector<S>& u, const Vector<S>& v) {
    if (u.arena().kind() != Arena::Kind::sum || v.arena().kind() != Arena::Kind::sum)
        throw UsageError("tensor expects vectors over sum arenas");
    if (!shared_components(u.arena(), v.arena()).empty())
        throw UsageError("tensor operands must live on disjoint components");
    return partial_psync(u, v);
}

/// Restriction to an orbit-closed set of events; inconsistent plays vanish.
template <Semiring S>
Vector<S> restrict(const Vector<S>& u, const OrbitClosedSet& keep) {
    Vector<S> out(u.arena());
    for (const auto& [r, c] : u.terms())
        if (auto p = restrict_play(r, [&](const Event& e) { return keep.contains(e); })) out.add_unchecked(*p, c);
    return out;
}

/// Composition through the shared components: partial synchronisation, then hiding them.
/// The result lives on the sum of the remaining components.
template <Semiring S>
Vector<S> compose_through(const Vector<S>& u, const Vector<S>& v) {
    const auto shared = shared_components(u.arena(), v.arena());
    const Vector<S> synced = partial_psync(u, v);
    std::vector<ComponentId> rest;
    for (const auto& c : synced.arena().components())
        if (std::find(shared.begin(), shared.end(), c.id) == shared.end()) rest.push_back(c.id);
    const Arena target = sub_sum(synced.arena(), rest);
    const auto keep = OrbitClosedSet::components(synced.arena(), rest);
    Vector<S> out(target);
    for (const auto& [r, c] : synced.terms())
        if (auto p = restrict_play(r, [&](const Event& e) { return keep.contains(e); })) out.add_unchecked(*p, c);
    return out;
}

/// Injective representation into the static algebra over the same web: each play is replaced
/// by the saturation of its representant.
template <Semiring S>
Vector<S> psplit(const Vector<S>& u) {
    Vector<S> out(Arena::static_view(u.arena()));
    if (u.arena().kind() == Arena::Kind::static_view) {
        for (const auto& [r, c] : u.terms()) out.add_unchecked(r, c);
        return out;
    }
    for (const auto& [r, c] : u.terms())
        for (const auto& [image, count] : saturate(u.arena(), representant(u.arena(), r)))
            out.add_unchecked(image, S::mul(c, S::from_count(count)));
    return out;
}

/// Vector e and integer n with w ⋈ e = n·w for every w in the family: one neutral play per
/// representant support occurring in the family, weighted by n / μ.
template <Semiring S>
std::pair<Vector<S>, std::uint64_t> partial_neutral(const Arena& arena, const std::vector<Vector<S>>& family) {
    std::set<std::vector<Event>> supports;
    for (const auto& w : family) {
        w.require_same_arena(Vector<S>(arena));
        for (const auto& [r, c] : w.terms()) supports.insert(repr_support(arena, r.support()));
    }
    std::vector<std::pair<Play, std::uint64_t>> neutrals;
    std::uint64_t n = 1;
    for (const auto& a : supports) {
        Play e = neutral_play(a);
        const auto mu = multiplicity(arena, e);
        n = std::lcm(n, mu);
        neutrals.emplace_back(std::move(e), mu);
    }
    Vector<S> out(arena);
    for (const auto& [e, mu] : neutrals) out.add_unchecked(e, S::from_count(n / mu));
    return {std::move(out), n};
}

/// A play on which no finite candidate neutral element can act as a unit: its support is
/// strictly larger than every support occurring in the candidate, so the pairing vanishes.
/// Requires an arena with infinitely many events in some orbit.
template <Semiring S>
Play unit_counterexample(const Vector<S>& candidate) {
    const Arena& arena = candidate.arena();
    std::size_t widest = 0;
    for (const auto& [r, c] : candidate.terms()) widest = std::max(widest, r.size());
    if (arena.kind() != Arena::Kind::labeled || arena.symbols().empty())
        throw UsageError("unit counterexamples are built on labeled arenas");
    std::vector<Event> events;
    for (std::size_t i = 0; i <= widest; ++i)
        events.push_back(arena.occurrence(arena.symbols().front(), static_cast<std::int64_t>(i)));
    return neutral_play(std::move(events));
}

/// Each play replaced by the representant of its orbit. Plays in one orbit are
/// observationally equal, so the result is equivalent to u and collects their coefficients.
template <Semiring S>
Vector<S> orbit_normal_form(const Vector<S>& u) {
    Vector<S> out(u.arena());
    for (const auto& [r, c] : u.terms()) out.add_unchecked(representant(u.arena(), r), c);
    return out;
}

}  // namespace ordalg
