#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "ordalg/algebra.hpp"
#include "ordalg/basis.hpp"
#include "ordalg/orbit.hpp"

namespace ordalg {

/// Finite part of a bijection from n × ℕ to ℕ: (copy class, copy) ↦ merged copy.
class CopyBijection {
public:
    using Key = std::pair<std::size_t, std::int64_t>;

    explicit CopyBijection(std::map<Key, std::int64_t> table) : table_(std::move(table)) {
        std::set<std::int64_t> images;
        for (const auto& [key, image] : table_)
            if (image < 0 || !images.insert(image).second)
                throw UsageError("copy bijection must be injective onto natural numbers");
    }

    /// (i, k) ↦ k·n + i, tabulated for copies below `copies`.
    static CopyBijection interleaved(std::size_t n, std::int64_t copies) {
        std::map<Key, std::int64_t> t;
        for (std::size_t i = 0; i < n; ++i)
            for (std::int64_t k = 0; k < copies; ++k)
                t[{i, k}] = k * static_cast<std::int64_t>(n) + static_cast<std::int64_t>(i);
        return CopyBijection(std::move(t));
    }

    /// (i, k) ↦ i·copies + k.
    static CopyBijection blocked(std::size_t n, std::int64_t copies) {
        std::map<Key, std::int64_t> t;
        for (std::size_t i = 0; i < n; ++i)
            for (std::int64_t k = 0; k < copies; ++k) t[{i, k}] = static_cast<std::int64_t>(i) * copies + k;
        return CopyBijection(std::move(t));
    }

    std::int64_t operator()(std::size_t cls, std::int64_t copy) const {
        auto it = table_.find({cls, copy});
        if (it == table_.end())
            throw UsageError("copy bijection undefined on (" + std::to_string(cls) + ", " + std::to_string(copy) + ")");
        return it->second;
    }

private:
    std::map<Key, std::int64_t> table_;
};

namespace detail {

inline const Segment separator_step{SegmentKind::separator, 0, false};

inline void expect_sharp(const Arena& a) {
    if (a.kind() != Arena::Kind::sharp) throw UsageError("expected a sharp arena, got " + a.describe());
}

}  // namespace detail

/// Merges n copy classes of #X into #X by relabelling copies through φ.
template <Semiring S>
Vector<S> gamma(std::size_t n, const CopyBijection& phi, const Vector<S>& u) {
    const Arena& source = u.arena();
    if (source.kind() != Arena::Kind::fin_index || source.copies() != n)
        throw UsageError("gamma expects a vector over " + std::to_string(n) + " copy classes");
    const Arena target = source.body();
    detail::expect_sharp(target);
    Vector<S> out(target);
    for (const auto& [r, c] : u.terms()) {
        std::vector<Event> images;
        for (const auto& e : r.support()) {
            // class(i) sep copy(k) sep x  ↦  copy(φ(i,k)) sep x
            const auto cls = static_cast<std::size_t>(e[0].value);
            const auto copy = e[2].value;
            images.push_back(Event{{SegmentKind::copy, phi(cls, copy), true}}.then(e.drop_front(3)));
        }
        out.add_unchecked(relabel(r, images), c);
    }
    return out;
}

/// Splits #X into n copy classes: the sum over every assignment of occupied copies to classes.
template <Semiring S>
Vector<S> delta(std::size_t n, const Vector<S>& u) {
    detail::expect_sharp(u.arena());
    const Arena target = Arena::fin_index(n, u.arena());
    Vector<S> out(target);
    for (const auto& [r, c] : u.terms()) {
        std::vector<std::int64_t> copies;
        for (const auto& e : r.support()) copies.push_back(e[0].value);
        std::sort(copies.begin(), copies.end());
        copies.erase(std::unique(copies.begin(), copies.end()), copies.end());
        if (n == 0) {
            if (copies.empty()) out.add_unchecked(r, c);
            continue;
        }
        std::vector<std::size_t> assignment(copies.size(), 0);
        while (true) {
            std::vector<Event> images;
            for (const auto& e : r.support()) {
                const auto slot = std::lower_bound(copies.begin(), copies.end(), e[0].value) - copies.begin();
                images.push_back(
                    Event{{SegmentKind::copy_class, static_cast<std::int64_t>(assignment[static_cast<std::size_t>(slot)]), false},
                          detail::separator_step}
                        .then(e));
            }
            out.add_unchecked(relabel(r, images), c);
            std::size_t k = 0;
            while (k < assignment.size() && ++assignment[k] == n) assignment[k++] = 0;
            if (k == assignment.size()) break;
        }
    }
    return out;
}

/// Every event of u placed in copy k of #X.
template <Semiring S>
Vector<S> embed_copy(std::int64_t k, const Vector<S>& u) {
    const Arena target = Arena::sharp(u.arena());
    Vector<S> out(target);
    for (const auto& [r, c] : u.terms()) {
        std::vector<Event> images;
        for (const auto& e : r.support()) images.push_back(target.in_copy(k, e));
        out.add_unchecked(relabel(r, images), c);
    }
    return out;
}

struct GradedGenerator {
    Play play;
    std::size_t degree;
};

/// Generators of the degree-≤max_degree part of !A: for each multiset of n generators of A,
/// the play placing them in copies 0..n-1 of #X. Plays equal up to the group are kept once,
/// with the smallest degree at which they appear.
inline std::vector<GradedGenerator> bang_generators(const TypeSpace& type, std::size_t max_degree) {
    const Arena target = Arena::sharp(type.arena);
    std::vector<GradedGenerator> out;
    std::set<Play> seen;
    const std::size_t g = type.generators.size();
    for (std::size_t n = 0; n <= max_degree; ++n) {
        if (n > 0 && g == 0) break;
        std::vector<std::size_t> pick(n, 0);  // non-decreasing generator indices
        while (true) {
            Play merged;
            for (std::size_t k = 0; k < n; ++k) {
                const Play& p = type.generators[pick[k]];
                std::vector<Event> images;
                for (const auto& e : p.support()) images.push_back(target.in_copy(static_cast<std::int64_t>(k), e));
                merged = merge_plays(merged, relabel(p, images));
            }
            if (seen.insert(representant(target, merged)).second) out.push_back({merged, n});
            // next non-decreasing sequence
            std::size_t k = n;
            while (k > 0 && pick[k - 1] + 1 == g) --k;
            if (k == 0) break;
            ++pick[k - 1];
            for (std::size_t j = k; j < n; ++j) pick[j] = pick[k - 1];
        }
    }
    return out;
}

}  // namespace ordalg
