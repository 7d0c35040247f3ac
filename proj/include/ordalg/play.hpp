#pragma once

#include <algorithm>
#include <bit>
#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ordalg/errors.hpp"
#include "ordalg/event.hpp"

namespace ordalg {

/// A finite set of events with a preorder, stored reflexively and transitively closed.
/// Row i of the matrix has bit j set when event i is below or equal to event j.
class Play {
public:
    using Support = std::vector<Event>;
    using Rows = std::vector<std::uint64_t>;
    static constexpr std::size_t max_events = 64;

    Play() : support_(empty_support()) {}

    /// Wraps an already sorted support and a relation; the relation is closed here.
    Play(std::shared_ptr<const Support> support, Rows rows)
        : support_(std::move(support)), rows_(std::move(rows)) {
        if (support_->size() > max_events)
            throw UsageError("plays are limited to " + std::to_string(max_events) + " events");
        for (std::size_t i = 0; i < rows_.size(); ++i) rows_[i] |= bit(i);
        close(rows_);
    }

    const Support& support() const { return *support_; }
    const std::shared_ptr<const Support>& shared_support() const { return support_; }
    std::size_t size() const { return rows_.size(); }
    bool empty() const { return rows_.empty(); }
    const Rows& rows() const { return rows_; }
    std::uint64_t row(std::size_t i) const { return rows_[i]; }

    bool leq(std::size_t i, std::size_t j) const { return (rows_[i] >> j) & 1U; }
    bool less(std::size_t i, std::size_t j) const { return leq(i, j) && !leq(j, i); }
    bool comparable(std::size_t i, std::size_t j) const { return leq(i, j) || leq(j, i); }

    std::optional<std::size_t> find(const Event& e) const {
        auto it = std::lower_bound(support_->begin(), support_->end(), e);
        if (it == support_->end() || *it != e) return std::nullopt;
        return static_cast<std::size_t>(it - support_->begin());
    }

    bool same_support(const Play& other) const {
        return support_ == other.support_ || *support_ == *other.support_;
    }

    bool operator==(const Play& other) const {
        return rows_ == other.rows_ && same_support(other);
    }

    std::strong_ordering operator<=>(const Play& other) const {
        if (support_ != other.support_) {
            if (auto c = std::lexicographical_compare_three_way(
                    support_->begin(), support_->end(), other.support_->begin(),
                    other.support_->end());
                c != 0)
                return c;
        }
        return std::lexicographical_compare_three_way(rows_.begin(), rows_.end(),
                                                      other.rows_.begin(), other.rows_.end());
    }

    static constexpr std::uint64_t bit(std::size_t i) { return std::uint64_t{1} << i; }

    /// Warshall closure on bit rows.
    static void close(Rows& rows) {
        const std::size_t n = rows.size();
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t i = 0; i < n; ++i)
                if ((rows[i] >> k) & 1U) rows[i] |= rows[k];
    }

    static std::shared_ptr<const Support> make_support(Support events) {
        std::sort(events.begin(), events.end());
        events.erase(std::unique(events.begin(), events.end()), events.end());
        return std::make_shared<const Support>(std::move(events));
    }

private:
    static const std::shared_ptr<const Support>& empty_support() {
        static const auto empty = std::make_shared<const Support>();
        return empty;
    }

    std::shared_ptr<const Support> support_;
    Rows rows_;
};

using EventPair = std::pair<Event, Event>;

/// Play on `support` whose preorder is generated by `covers`.
inline Play make_play(std::vector<Event> support, std::span<const EventPair> covers = {}) {
    auto shared = Play::make_support(std::move(support));
    Play::Rows rows(shared->size(), 0);
    auto index_of = [&](const Event& e) {
        auto it = std::lower_bound(shared->begin(), shared->end(), e);
        if (it == shared->end() || *it != e)
            throw UsageError("pair endpoint " + raw_text(e) + " is outside the support");
        return static_cast<std::size_t>(it - shared->begin());
    };
    for (const auto& [a, b] : covers) rows[index_of(a)] |= Play::bit(index_of(b));
    return Play(std::move(shared), std::move(rows));
}

inline Play neutral_play(std::vector<Event> support) { return make_play(std::move(support)); }

/// A preorder is consistent when it is antisymmetric.
inline bool is_consistent(const Play& r) {
    for (std::size_t i = 0; i < r.size(); ++i) {
        std::uint64_t above = r.row(i) & ~Play::bit(i);
        while (above) {
            const auto j = static_cast<std::size_t>(std::countr_zero(above));
            above &= above - 1;
            if (r.leq(j, i)) return false;
        }
    }
    return true;
}

/// Static synchronisation: defined only on equal supports, merges the two preorders.
inline std::optional<Play> sync(const Play& r, const Play& s) {
    if (r.size() != s.size() || !r.same_support(s)) return std::nullopt;
    Play::Rows rows(r.size());
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = r.row(i) | s.row(i);
    return Play(r.shared_support(), std::move(rows));
}

/// Consistency of r ⋎ s without building the merged play.
inline bool sync_is_consistent(const Play& r, const Play& s) {
    if (r.size() != s.size() || !r.same_support(s)) return false;
    Play::Rows rows(r.size());
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = r.row(i) | s.row(i);
    Play::close(rows);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = i + 1; j < rows.size(); ++j)
            if (((rows[i] >> j) & 1U) && ((rows[j] >> i) & 1U)) return false;
    return true;
}

/// r with the extra constraints i ≤ j for each given index pair.
inline Play with_constraints(const Play& r, std::span<const std::pair<std::size_t, std::size_t>> pairs) {
    Play::Rows rows = r.rows();
    for (auto [i, j] : pairs) rows[i] |= Play::bit(j);
    return Play(r.shared_support(), std::move(rows));
}

/// Induced preorder on the kept events; nullopt stands for the zero vector (inconsistent input).
inline std::optional<Play> restrict_play(const Play& r, const std::function<bool(const Event&)>& keep) {
    if (!is_consistent(r)) return std::nullopt;
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < r.size(); ++i)
        if (keep(r.support()[i])) kept.push_back(i);
    if (kept.size() == r.size()) return r;
    Play::Support events;
    events.reserve(kept.size());
    for (auto i : kept) events.push_back(r.support()[i]);
    Play::Rows rows(kept.size(), 0);
    for (std::size_t a = 0; a < kept.size(); ++a)
        for (std::size_t b = 0; b < kept.size(); ++b)
            if (r.leq(kept[a], kept[b])) rows[a] |= Play::bit(b);
    Play result(std::make_shared<const Play::Support>(std::move(events)), rows);
    // an induced preorder is already closed
    if (result.rows() != rows) throw std::logic_error("restriction produced an unclosed relation");
    return result;
}

inline std::optional<Play> restrict_play(const Play& r, std::span<const Event> keep) {
    std::vector<Event> sorted(keep.begin(), keep.end());
    std::sort(sorted.begin(), sorted.end());
    return restrict_play(r, [&](const Event& e) {
        return std::binary_search(sorted.begin(), sorted.end(), e);
    });
}

/// Image of r along an injective relabelling of its events; the new support is re-sorted.
inline Play relabel(const Play& r, std::span<const Event> images) {
    const std::size_t n = r.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return images[a] < images[b]; });
    std::vector<std::size_t> position(n);
    Play::Support events;
    events.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        position[order[k]] = k;
        events.push_back(images[order[k]]);
    }
    Play::Rows rows(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (r.leq(i, j)) rows[position[i]] |= Play::bit(position[j]);
    return Play(std::make_shared<const Play::Support>(std::move(events)), std::move(rows));
}

/// Image of r along a bijection onto a given sorted support (image[i] indexes `target`).
inline Play transport(const Play& r, const std::shared_ptr<const Play::Support>& target,
                      std::span<const std::size_t> image) {
    const std::size_t n = r.size();
    Play::Rows rows(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t row = r.row(i);
        while (row) {
            const auto j = static_cast<std::size_t>(std::countr_zero(row));
            row &= row - 1;
            rows[image[i]] |= Play::bit(image[j]);
        }
    }
    return Play(target, std::move(rows));
}

/// All total orders containing r, in lexicographic order of their event sequences.
inline std::vector<Play> linear_extensions(const Play& r) {
    std::vector<Play> out;
    if (!is_consistent(r)) return out;
    const std::size_t n = r.size();
    std::vector<std::size_t> sequence;
    std::uint64_t placed = 0;
    std::function<void()> extend = [&] {
        if (sequence.size() == n) {
            Play::Rows rows(n, 0);
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = a; b < n; ++b) rows[sequence[a]] |= Play::bit(sequence[b]);
            out.emplace_back(r.shared_support(), std::move(rows));
            return;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if ((placed >> i) & 1U) continue;
            // i is minimal among the remaining events
            std::uint64_t below = 0;
            for (std::size_t j = 0; j < n; ++j)
                if (j != i && r.leq(j, i)) below |= Play::bit(j);
            if ((below & ~placed) != 0) continue;
            placed |= Play::bit(i);
            sequence.push_back(i);
            extend();
            sequence.pop_back();
            placed &= ~Play::bit(i);
        }
    };
    extend();
    return out;
}

inline bool is_total(const Play& r) {
    if (!is_consistent(r)) return false;
    for (std::size_t i = 0; i < r.size(); ++i)
        for (std::size_t j = i + 1; j < r.size(); ++j)
            if (!r.comparable(i, j)) return false;
    return true;
}

/// Strict covering pairs of a consistent play (its Hasse diagram).
inline std::vector<std::pair<std::size_t, std::size_t>> covering_pairs(const Play& r) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    const std::size_t n = r.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (!r.less(i, j)) continue;
            bool covered = true;
            for (std::size_t k = 0; k < n && covered; ++k)
                if (r.less(i, k) && r.less(k, j)) covered = false;
            if (covered) out.emplace_back(i, j);
        }
    return out;
}

/// Every preorder on the given support, each exactly once. Pairs are decided in a fixed
/// order; excluding a pair that a later closure would force prunes the branch.
inline std::vector<Play> all_preorders(const std::shared_ptr<const Play::Support>& support) {
    const std::size_t n = support->size();
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) pairs.emplace_back(i, j);
    std::vector<Play> out;
    Play::Rows start(n, 0);
    for (std::size_t i = 0; i < n; ++i) start[i] = Play::bit(i);
    Play::Rows excluded(n, 0);
    std::function<void(std::size_t, const Play::Rows&)> step = [&](std::size_t k, const Play::Rows& rows) {
        if (k == pairs.size()) {
            out.emplace_back(support, rows);
            return;
        }
        const auto [i, j] = pairs[k];
        if ((rows[i] >> j) & 1U) {
            step(k + 1, rows);
            return;
        }
        excluded[i] |= Play::bit(j);
        step(k + 1, rows);
        excluded[i] &= ~Play::bit(j);
        Play::Rows grown = rows;
        grown[i] |= Play::bit(j);
        Play::close(grown);
        for (std::size_t a = 0; a < n; ++a)
            if (grown[a] & excluded[a]) return;
        step(k + 1, grown);
    };
    step(0, start);
    return out;
}

inline std::vector<Play> all_partial_orders(const std::shared_ptr<const Play::Support>& support) {
    auto all = all_preorders(support);
    std::erase_if(all, [](const Play& r) { return !is_consistent(r); });
    return all;
}

using EventFormatter = std::function<std::string(const Event&)>;

/// Text form such as `{a<b, c}`: covering pairs, then isolated events. Inconsistent
/// plays list every non-trivial constraint with `<=`.
inline std::string to_text(const Play& r, const EventFormatter& name = raw_text) {
    std::vector<std::string> items;
    const std::size_t n = r.size();
    std::vector<bool> mentioned(n, false);
    if (is_consistent(r)) {
        for (auto [i, j] : covering_pairs(r)) {
            items.push_back(name(r.support()[i]) + "<" + name(r.support()[j]));
            mentioned[i] = mentioned[j] = true;
        }
    } else {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j && r.leq(i, j)) {
                    items.push_back(name(r.support()[i]) + "<=" + name(r.support()[j]));
                    mentioned[i] = mentioned[j] = true;
                }
    }
    for (std::size_t i = 0; i < n; ++i)
        if (!mentioned[i]) items.push_back(name(r.support()[i]));
    std::string out = "{";
    for (std::size_t k = 0; k < items.size(); ++k) {
        if (k) out += ", ";
        out += items[k];
    }
    return out + "}";
}

/// Graphviz rendering of the Hasse diagram of a consistent play.
inline std::string to_dot(const Play& r, const EventFormatter& name = raw_text,
                          const std::string& graph_name = "play") {
    if (!is_consistent(r)) throw UsageError("only consistent plays have a Hasse diagram");
    auto quote = [](const std::string& s) {
        std::string q = "\"";
        for (char c : s) {
            if (c == '"' || c == '\\') q += '\\';
            q += c;
        }
        return q + "\"";
    };
    std::string out = "digraph " + quote(graph_name) + " {\n  rankdir=BT;\n";
    for (std::size_t i = 0; i < r.size(); ++i)
        out += "  n" + std::to_string(i) + " [label=" + quote(name(r.support()[i])) + "];\n";
    for (auto [i, j] : covering_pairs(r))
        out += "  n" + std::to_string(i) + " -> n" + std::to_string(j) + ";\n";
    return out + "}\n";
}

}  // namespace ordalg
