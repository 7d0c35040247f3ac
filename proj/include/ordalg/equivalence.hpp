#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "ordalg/algebra.hpp"
#include "ordalg/basis.hpp"
#include "ordalg/orbit.hpp"

namespace ordalg {

enum class Route { basis, oracle };

template <Semiring S>
struct EquivalenceReport {
    bool equivalent = true;
    std::optional<Play> separating_probe;  // set when a separating play was found
};

/// Distinct representant supports of the plays of u and v, as shared supports.
template <Semiring S>
std::vector<std::shared_ptr<const Play::Support>> probe_supports(const Vector<S>& u, const Vector<S>& v,
                                                                 std::size_t max_support) {
    std::set<std::vector<Event>> seen;
    for (const auto* w : {&u, &v})
        for (const auto& [r, c] : w->terms())
            if (r.size() <= max_support) seen.insert(repr_support(w->arena(), r.support()));
    std::vector<std::shared_ptr<const Play::Support>> out;
    for (const auto& s : seen) out.push_back(std::make_shared<const Play::Support>(s));
    return out;
}

template <Semiring S>
bool separates(const Vector<S>& u, const Vector<S>& v, const Play& probe) {
    const Vector<S> t(u.arena(), probe);
    return !S::equal(pairing(u, t), pairing(v, t));
}

/// First probe play t (in enumeration order) with ⟨u⋈t⟩ ≠ ⟨v⋈t⟩. Probes range over every
/// preorder on every representant support of size at most max_support occurring in u or v.
template <Semiring S>
std::optional<Play> find_separating_probe(const Vector<S>& u, const Vector<S>& v, std::size_t max_support) {
    u.require_same_arena(v);
    for (const auto& support : probe_supports(u, v, max_support))
        for (const auto& t : all_preorders(support))
            if (separates(u, v, t)) return t;
    return std::nullopt;
}

template <Semiring S>
bool probe_oracle_equiv(const Vector<S>& u, const Vector<S>& v, std::size_t max_support) {
    return !find_separating_probe(u, v, max_support).has_value();
}

/// Largest support size occurring in u or v; the oracle is complete once max_support reaches it.
template <Semiring S>
std::size_t widest_support(const Vector<S>& u, const Vector<S>& v) {
    std::size_t widest = 0;
    for (const auto* w : {&u, &v})
        for (const auto& [r, c] : w->terms()) widest = std::max(widest, r.size());
    return widest;
}

namespace detail {

// Looks for a separating play among the block-product base plays of the slice on which the
// two decompositions first differ. A differing coordinate is always witnessed by such a play:
// on the totals route by the coordinate's own key, on the weak route because the dual family
// of the slice is spanned by its base plays.
template <Semiring S, Semiring T>
std::optional<Play> probe_from_decompositions(const Vector<S>& u, const Vector<S>& v, const Decomposition<T>& du,
                                              const Decomposition<T>& dv, std::size_t budget) {
    std::set<Play> candidates;
    for (const auto* d : {&du, &dv})
        for (const auto& [p, c] : d->coords) {
            const auto* other = d == &du ? &dv : &du;
            auto it = other->coords.find(p);
            if (it == other->coords.end() || !T::equal(it->second, c)) candidates.insert(p);
        }
    for (const auto& p : candidates)
        if (separates(u, v, p)) return p;
    if (candidates.empty()) return std::nullopt;
    // every play of the first differing slice, blocks taken from that key
    const Play& key = *candidates.begin();
    std::vector<std::vector<std::size_t>> blocks;
    {
        std::vector<bool> done(key.size(), false);
        for (std::size_t i = 0; i < key.size(); ++i) {
            if (done[i]) continue;
            std::vector<std::size_t> block;
            std::vector<std::size_t> stack{i};
            done[i] = true;
            while (!stack.empty()) {
                auto a = stack.back();
                stack.pop_back();
                block.push_back(a);
                for (std::size_t b = 0; b < key.size(); ++b)
                    if (!done[b] && key.comparable(a, b)) {
                        done[b] = true;
                        stack.push_back(b);
                    }
            }
            blocks.push_back(std::move(block));
        }
    }
    const bool weak = du.base == BaseKind::block_weak_totals || du.base == BaseKind::weak_totals;
    std::vector<Play> partial{Play()};
    for (const auto& block : blocks) {
        std::vector<Event> events;
        for (auto i : block) events.push_back(key.support()[i]);
        const auto support = Play::make_support(std::move(events));
        const auto base = weak ? weak_total_orders(support) : total_orders(support);
        std::vector<Play> next;
        for (const auto& p : partial)
            for (const auto& b : base) {
                next.push_back(merge_plays(p, b));
                if (next.size() > budget) return std::nullopt;
            }
        partial = std::move(next);
    }
    for (const auto& p : partial)
        if (separates(u, v, p)) return p;
    return std::nullopt;
}

}  // namespace detail

/// Decides observational equivalence. The basis route maps both vectors into the static
/// algebra with psplit and compares block decompositions: on total orders for idempotent
/// semirings, on weak total orders for the rationals, and for naturals and integers after
/// embedding them in the rationals. The oracle route compares outcomes against all probes
/// of size at most max_support, and refuses vectors with wider plays.
template <Semiring S>
EquivalenceReport<S> decide_equivalence(const Vector<S>& u, const Vector<S>& v, Route route = Route::basis,
                                        std::size_t max_support = 4, bool want_probe = false) {
    u.require_same_arena(v);
    EquivalenceReport<S> report;
    if (route == Route::oracle) {
        if (const auto widest = widest_support(u, v); widest > max_support)
            throw UnsupportedError("the probe oracle is incomplete here: plays have up to " + std::to_string(widest) +
                                   " events but probes stop at " + std::to_string(max_support));
        report.separating_probe = find_separating_probe(u, v, max_support);
        report.equivalent = !report.separating_probe;
        return report;
    }
    auto finish = [&](const auto& du, const auto& dv) {
        report.equivalent = du == dv;
        if (!report.equivalent && want_probe) {
            report.separating_probe = detail::probe_from_decompositions(u, v, du, dv, 200000);
            if (!report.separating_probe)
                report.separating_probe = find_separating_probe(u, v, max_support);
        }
    };
    if constexpr (S::properties.idempotent) {
        auto [du, dv] = joint_block_decomposition(psplit(u), psplit(v), false);
        finish(du, dv);
    } else if constexpr (std::same_as<S, Rational>) {
        auto [du, dv] = joint_block_decomposition(psplit(u), psplit(v), true);
        finish(du, dv);
    } else if constexpr (embeds_in_rationals<S>) {
        auto [du, dv] = joint_block_decomposition(psplit(embed_to_rat(u)), psplit(embed_to_rat(v)), true);
        finish(du, dv);
    } else {
        throw UnsupportedError("no decision route: the semiring is neither idempotent nor embeddable in the rationals");
    }
    return report;
}

template <Semiring S>
bool obs_equiv(const Vector<S>& u, const Vector<S>& v, Route route = Route::basis, std::size_t max_support = 4) {
    return decide_equivalence(u, v, route, max_support).equivalent;
}

}  // namespace ordalg
