#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "ordalg/algebra.hpp"
#include "ordalg/linalg.hpp"
#include "ordalg/play.hpp"
#include "ordalg/semiring.hpp"

namespace ordalg {

/// Which family of plays a decomposition is written in. The block variants index coordinates
/// by disjoint unions of per-block base plays (see joint_block_decomposition).
enum class BaseKind { totals, weak_totals, block_totals, block_weak_totals };

inline std::string to_string(BaseKind b) {
    switch (b) {
        case BaseKind::totals: return "totals";
        case BaseKind::weak_totals: return "weak_totals";
        case BaseKind::block_totals: return "block_totals";
        case BaseKind::block_weak_totals: return "block_weak_totals";
    }
    return "?";
}

template <Semiring S>
struct Decomposition {
    using Scalar = typename S::value_type;

    BaseKind base;
    std::map<Play, Scalar> coords;

    void add(const Play& p, const Scalar& c) {
        if (is_zero<S>(c)) return;
        auto [it, inserted] = coords.try_emplace(p, c);
        if (!inserted) {
            it->second = S::add(it->second, c);
            if (is_zero<S>(it->second)) coords.erase(it);
        }
    }

    bool operator==(const Decomposition& other) const {
        if (base != other.base || coords.size() != other.coords.size()) return false;
        auto it = other.coords.begin();
        for (const auto& [p, c] : coords) {
            if (!(p == it->first) || !S::equal(c, it->second)) return false;
            ++it;
        }
        return true;
    }
};

/// x < y implies x < z or z < y, for every z.
inline bool is_weak_total(const Play& r) {
    if (!is_consistent(r)) return false;
    const std::size_t n = r.size();
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y) {
            if (!r.less(x, y)) continue;
            for (std::size_t z = 0; z < n; ++z)
                if (!r.less(x, z) && !r.less(z, y)) return false;
        }
    return true;
}

/// Equivalent formulation: being incomparable or equal is an equivalence relation.
inline bool has_transitive_incomparability(const Play& r) {
    if (!is_consistent(r)) return false;
    const std::size_t n = r.size();
    auto loose = [&](std::size_t a, std::size_t b) { return a == b || !r.comparable(a, b); };
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t c = 0; c < n; ++c)
                if (loose(a, b) && loose(b, c) && !loose(a, c)) return false;
    return true;
}

inline std::vector<Play> total_orders(const std::shared_ptr<const Play::Support>& support) {
    return linear_extensions(Play(support, Play::Rows(support->size(), 0)));
}

inline std::vector<Play> weak_total_orders(const std::shared_ptr<const Play::Support>& support) {
    auto all = all_partial_orders(support);
    std::erase_if(all, [](const Play& r) { return !is_weak_total(r); });
    return all;
}

/// Rewrites consistent plays into integer combinations of weak total orders. Each step picks
/// the least triple (a, b, c) with a < b and c incomparable to both, and uses
///   r = r⋎[a<c] + r⋎[c<b] − r⋎[a<c<b]
/// modulo observational equivalence. Results are memoised per play.
class WeakSplitter {
public:
    using Combination = std::map<Play, mpz_class>;

    const Combination& split(const Play& r) {
        if (auto it = memo_.find(r); it != memo_.end()) return it->second;
        Combination out;
        if (is_consistent(r)) {
            if (auto triple = least_violation(r)) {
                const auto [a, b, c] = *triple;
                const std::pair<std::size_t, std::size_t> ac{a, c};
                const std::pair<std::size_t, std::size_t> cb{c, b};
                const std::pair<std::size_t, std::size_t> both[] = {ac, cb};
                accumulate(out, split(with_constraints(r, std::span(&ac, 1))), 1);
                accumulate(out, split(with_constraints(r, std::span(&cb, 1))), 1);
                accumulate(out, split(with_constraints(r, both)), -1);
            } else {
                out.emplace(r, 1);
            }
        }
        return memo_.emplace(r, std::move(out)).first->second;
    }

    static std::optional<std::tuple<std::size_t, std::size_t, std::size_t>> least_violation(const Play& r) {
        const std::size_t n = r.size();
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) {
                if (!r.less(a, b)) continue;
                for (std::size_t c = 0; c < n; ++c)
                    if (!r.comparable(a, c) && !r.comparable(b, c)) return std::tuple{a, b, c};
            }
        return std::nullopt;
    }

private:
    static void accumulate(Combination& into, const Combination& part, int sign) {
        for (const auto& [p, k] : part) {
            auto& slot = into[p];
            slot += sign * k;
            if (slot == 0) into.erase(p);
        }
    }

    std::map<Play, Combination> memo_;
};

namespace detail {

template <Semiring S>
void require_static(const Vector<S>& u) {
    if (!u.arena().has_trivial_group())
        throw UsageError("decompositions expect a static arena; apply psplit first");
}

template <Semiring S>
typename S::value_type from_integer(const mpz_class& z) {
    if constexpr (std::same_as<S, Integer>) {
        return z;
    } else {
        return mpq_class(z);
    }
}

}  // namespace detail

/// Coordinates on total orders: each play contributes its coefficient to every linear
/// extension. Meaningful when addition is idempotent.
template <Semiring S>
Decomposition<S> decompose_totals(const Vector<S>& u) {
    if constexpr (!S::properties.idempotent) {
        throw UnsupportedError("the total-order basis requires an idempotent semiring");
    } else {
        detail::require_static(u);
        Decomposition<S> d{BaseKind::totals, {}};
        for (const auto& [r, c] : u.terms())
            for (const auto& t : linear_extensions(r)) d.add(t, c);
        return d;
    }
}

/// Coordinates on weak total orders; requires a ring.
template <Semiring S>
Decomposition<S> decompose_weak(const Vector<S>& u, WeakSplitter& splitter) {
    if constexpr (!Ring<S>) {
        throw UnsupportedError("the weak-total basis requires a ring of coefficients");
    } else {
        detail::require_static(u);
        Decomposition<S> d{BaseKind::weak_totals, {}};
        for (const auto& [r, c] : u.terms())
            for (const auto& [w, k] : splitter.split(r)) d.add(w, S::mul(c, detail::from_integer<S>(k)));
        return d;
    }
}

template <Semiring S>
Decomposition<S> decompose_weak(const Vector<S>& u) {
    WeakSplitter splitter;
    return decompose_weak(u, splitter);
}

/// Sum of the base plays with their coordinates.
template <Semiring S>
Vector<S> recompose(const Arena& arena, const Decomposition<S>& d) {
    Vector<S> out(arena);
    for (const auto& [p, c] : d.coords) out.add(p, c);
    return out;
}

/// Joint decomposition of two static vectors that factors each support slice into blocks:
/// events never related in any play of either vector (with that support) fall into different
/// blocks, every play is the disjoint union of its block restrictions, and coordinates are
/// products of per-block coordinates. Two vectors are equivalent exactly when these agree.
template <Semiring S>
std::pair<Decomposition<S>, Decomposition<S>> joint_block_decomposition(const Vector<S>& u, const Vector<S>& v,
                                                                        bool weak) {
    detail::require_static(u);
    detail::require_static(v);
    const BaseKind kind = weak ? BaseKind::block_weak_totals : BaseKind::block_totals;
    std::pair<Decomposition<S>, Decomposition<S>> out{{kind, {}}, {kind, {}}};

    // group plays by support
    std::map<std::vector<Event>, std::vector<std::pair<int, const typename Vector<S>::Terms::value_type*>>> slices;
    for (const auto& term : u.terms()) slices[term.first.support()].emplace_back(0, &term);
    for (const auto& term : v.terms()) slices[term.first.support()].emplace_back(1, &term);

    WeakSplitter splitter;
    for (const auto& [support, members] : slices) {
        const std::size_t n = support.size();
        std::vector<std::size_t> parent(n);
        for (std::size_t i = 0; i < n; ++i) parent[i] = i;
        auto find = [&](std::size_t i) {
            while (parent[i] != i) i = parent[i] = parent[parent[i]];
            return i;
        };
        for (const auto& [side, term] : members) {
            const Play& r = term->first;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i + 1; j < n; ++j)
                    if (r.comparable(i, j)) parent[find(i)] = find(j);
        }
        std::map<std::size_t, std::vector<Event>> blocks;
        for (std::size_t i = 0; i < n; ++i) blocks[find(i)].push_back(support[i]);

        for (const auto& [side, term] : members) {
            const auto& [r, c] = *term;
            if (!is_consistent(r)) continue;
            // per-block expansions, then their product
            std::vector<Play> partial{Play()};
            std::vector<mpz_class> weights{1};
            for (const auto& [root, events] : blocks) {
                const Play piece = *restrict_play(r, events);
                std::vector<std::pair<Play, mpz_class>> expansion;
                if (weak) {
                    for (const auto& [w, k] : splitter.split(piece)) expansion.emplace_back(w, k);
                } else {
                    for (auto& t : linear_extensions(piece)) expansion.emplace_back(std::move(t), 1);
                }
                std::vector<Play> next;
                std::vector<mpz_class> next_weights;
                for (std::size_t a = 0; a < partial.size(); ++a)
                    for (const auto& [p, k] : expansion) {
                        next.push_back(merge_plays(partial[a], p));
                        next_weights.push_back(weights[a] * k);
                    }
                partial = std::move(next);
                weights = std::move(next_weights);
            }
            auto& target = side == 0 ? out.first : out.second;
            for (std::size_t a = 0; a < partial.size(); ++a) {
                if constexpr (Ring<S>) {
                    target.add(partial[a], S::mul(c, detail::from_integer<S>(weights[a])));
                } else {
                    // totals expansions have unit weights
                    target.add(partial[a], c);
                }
            }
        }
    }
    return out;
}

/// M[i][j] = ⟨p_i ⋎ p_j⟩.
template <Semiring S>
std::vector<std::vector<typename S::value_type>> gram_matrix(const std::vector<Play>& plays) {
    std::vector<std::vector<typename S::value_type>> m(plays.size());
    for (std::size_t i = 0; i < plays.size(); ++i)
        for (const auto& q : plays) m[i].push_back(S::from_count(sync_is_consistent(plays[i], q) ? 1 : 0));
    return m;
}

/// Biorthogonal family: b*_j = Σ_k (M⁻¹)_{jk} b_k, with M the Gram matrix of the base plays.
inline std::vector<Vector<Rational>> dual_family(const Arena& arena, const std::vector<Play>& base) {
    if (!arena.has_trivial_group()) throw UsageError("dual families are computed over static arenas");
    const auto inv = linalg::inverse(gram_matrix<Rational>(base));
    if (!inv) throw UsageError("singular Gram matrix: the plays do not form a basis");
    std::vector<Vector<Rational>> out;
    for (std::size_t j = 0; j < base.size(); ++j) {
        Vector<Rational> dual(arena);
        for (std::size_t k = 0; k < base.size(); ++k) dual.add((base[k]), (*inv)[j][k]);
        out.push_back(std::move(dual));
    }
    return out;
}

/// Submodule generated by a finite family of plays.
struct TypeSpace {
    Arena arena;
    std::vector<Play> generators;

    /// Strict types do not contain the empty play.
    bool is_strict() const {
        return std::none_of(generators.begin(), generators.end(), [](const Play& g) { return g.empty(); });
    }
};

namespace detail {

// Natural order of an idempotent semiring: x ≤ y iff x + y = y. On the shipped idempotent
// instances it is a chain, so the meet is the smaller element.
template <Semiring S>
typename S::value_type chain_meet(const typename S::value_type& a, const typename S::value_type& b) {
    return S::equal(S::add(a, b), b) ? a : b;
}

}  // namespace detail

/// Whether u is equivalent to a linear combination of the generators.
template <Semiring S>
bool type_membership(const TypeSpace& type, const Vector<S>& u) {
    u.require_same_arena(Vector<S>(type.arena));
    if constexpr (S::properties.idempotent) {
        // largest coefficient per generator, then check that the combination reaches u
        const auto target = decompose_totals(psplit(u));
        Decomposition<S> reached{BaseKind::totals, {}};
        for (const auto& g : type.generators) {
            const auto dg = decompose_totals(psplit(Vector<S>(type.arena, g)));
            if (dg.coords.empty()) continue;
            std::optional<typename S::value_type> lambda;
            for (const auto& [t, c] : dg.coords) {
                auto it = target.coords.find(t);
                const auto have = it == target.coords.end() ? S::zero() : it->second;
                lambda = lambda ? detail::chain_meet<S>(*lambda, have) : have;
            }
            for (const auto& [t, c] : dg.coords) reached.add(t, S::mul(*lambda, c));
        }
        return reached == target;
    } else if constexpr (std::same_as<S, Rational>) {
        WeakSplitter splitter;
        std::vector<Decomposition<S>> rows;
        for (const auto& g : type.generators) rows.push_back(decompose_weak(psplit(Vector<S>(type.arena, g)), splitter));
        const auto target = decompose_weak(psplit(u), splitter);
        std::map<Play, std::size_t> column;
        auto index = [&](const Decomposition<S>& d) {
            for (const auto& [p, c] : d.coords) column.try_emplace(p, column.size());
        };
        for (const auto& d : rows) index(d);
        index(target);
        auto to_row = [&](const Decomposition<S>& d) {
            std::vector<mpq_class> row(column.size(), 0);
            for (const auto& [p, c] : d.coords) row[column.at(p)] = c;
            return row;
        };
        linalg::Matrix m;
        for (const auto& d : rows) m.push_back(to_row(d));
        const auto base_rank = linalg::rank(m);
        m.push_back(to_row(target));
        return linalg::rank(m) == base_rank;
    } else {
        throw UnsupportedError("type membership needs rational coefficients or an idempotent semiring");
    }
}

/// r generates a map from A to B when composing it with every generator of A lands in B.
/// r lives on the sum of A's components and B's components.
template <Semiring S>
bool lolli_generator_check(const Arena& arena, const Play& r, const TypeSpace& from, const TypeSpace& to) {
    const Vector<S> map(arena, r);
    for (const auto& g : from.generators) {
        const auto image = compose_through(Vector<S>(from.arena, g), map);
        if (!(image.arena() == to.arena))
            throw UsageError("composition lands on " + image.arena().describe() + ", expected " +
                             to.arena.describe());
        if (!type_membership(to, image)) return false;
    }
    return true;
}

}  // namespace ordalg
