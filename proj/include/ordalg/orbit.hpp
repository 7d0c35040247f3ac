#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <vector>

#include "ordalg/arena.hpp"
#include "ordalg/errors.hpp"
#include "ordalg/event.hpp"
#include "ordalg/play.hpp"

namespace ordalg {

/// Restriction of a group element to a finite set: image[i] is the index in the target
/// set of the image of the i-th source event (both sets sorted).
struct InducedBijection {
    std::vector<std::size_t> image;

    bool operator==(const InducedBijection&) const = default;
};

namespace detail {

// Prefix tree of a finite event set, annotated with canonical subtree shapes so that
// two subtrees are related by the group exactly when their shapes agree.
class EventTrie {
public:
    struct Child;
    struct Node {
        std::int64_t event = -1;  // index in the source set when the path is itself an event
        std::vector<Child> children;
        const std::vector<std::int64_t>* shape = nullptr;
        std::size_t shape_id = 0;
    };
    struct Child {
        Segment segment;
        std::unique_ptr<Node> node;
    };
    using ShapeTable = std::map<std::vector<std::int64_t>, std::size_t>;

    EventTrie(std::span<const Event> events, ShapeTable& shapes) : root_(std::make_unique<Node>()) {
        for (std::size_t i = 0; i < events.size(); ++i) insert(events[i], static_cast<std::int64_t>(i));
        annotate(*root_, shapes);
    }

    const Node& root() const { return *root_; }

    // Children sharing a group key may be exchanged; fixed children each form their own group.
    static std::tuple<SegmentKind, bool, std::int64_t> group_key(const Segment& s) {
        return {s.kind, s.permutable, s.permutable ? 0 : s.value};
    }

private:
    void insert(const Event& e, std::int64_t index) {
        Node* node = root_.get();
        for (const auto& seg : e.segments()) {
            auto it = std::lower_bound(node->children.begin(), node->children.end(), seg,
                                       [](const Child& c, const Segment& s) { return c.segment < s; });
            if (it == node->children.end() || it->segment != seg)
                it = node->children.insert(it, Child{seg, std::make_unique<Node>()});
            node = it->node.get();
        }
        node->event = index;
    }

    static void annotate(Node& node, ShapeTable& shapes) {
        std::vector<std::vector<std::int64_t>> parts;
        for (auto& c : node.children) {
            annotate(*c.node, shapes);
            auto [kind, perm, value] = group_key(c.segment);
            std::vector<std::int64_t> part{static_cast<std::int64_t>(kind), perm, value};
            part.insert(part.end(), c.node->shape->begin(), c.node->shape->end());
            parts.push_back(std::move(part));
        }
        std::sort(parts.begin(), parts.end());
        std::vector<std::int64_t> key{node.event >= 0 ? 1 : 0, static_cast<std::int64_t>(parts.size())};
        for (const auto& p : parts) {
            key.push_back(static_cast<std::int64_t>(p.size()));
            key.insert(key.end(), p.begin(), p.end());
        }
        auto [it, inserted] = shapes.try_emplace(std::move(key), shapes.size());
        node.shape = &it->first;
        node.shape_id = it->second;
    }

    std::unique_ptr<Node> root_;
};

// Backtracking enumeration of the shape-preserving matchings between two tries.
class BijectionSearch {
public:
    using Node = EventTrie::Node;
    using Visitor = std::function<bool(std::span<const std::size_t>)>;

    BijectionSearch(std::size_t size, const Visitor& visit) : image_(size), visit_(visit) {}

    bool run(const Node& a, const Node& b) {
        if (a.shape_id != b.shape_id) return true;
        std::vector<Group> work;
        work.push_back(Group{{&a}, {&b}});
        return solve(work);
    }

private:
    struct Group {
        std::vector<const Node*> left;
        std::vector<const Node*> right;
    };

    static void expand(const Node& a, const Node& b, std::vector<Group>& work) {
        // children are sorted by segment, so each group key occupies a contiguous run
        std::size_t i = 0;
        std::size_t j = 0;
        while (i < a.children.size()) {
            const auto key = EventTrie::group_key(a.children[i].segment);
            Group g;
            while (i < a.children.size() && EventTrie::group_key(a.children[i].segment) == key)
                g.left.push_back(a.children[i++].node.get());
            while (j < b.children.size() && EventTrie::group_key(b.children[j].segment) == key)
                g.right.push_back(b.children[j++].node.get());
            work.push_back(std::move(g));
        }
    }

    bool solve(std::vector<Group>& work) {
        while (!work.empty() && work.back().left.empty()) work.pop_back();
        if (work.empty()) return visit_(image_);
        Group g = std::move(work.back());
        work.pop_back();
        const Node* a = g.left.back();
        g.left.pop_back();
        for (std::size_t k = 0; k < g.right.size(); ++k) {
            const Node* b = g.right[k];
            if (b->shape_id != a->shape_id) continue;
            std::vector<Group> next = work;
            Group rest{g.left, g.right};
            rest.right.erase(rest.right.begin() + static_cast<std::ptrdiff_t>(k));
            next.push_back(std::move(rest));
            expand(*a, *b, next);
            if (a->event >= 0) image_[static_cast<std::size_t>(a->event)] = static_cast<std::size_t>(b->event);
            if (!solve(next)) return false;
        }
        return true;
    }

    std::vector<std::size_t> image_;
    const Visitor& visit_;
};

inline void require_all(const Arena& arena, std::span<const Event> events) {
    for (const auto& e : events) arena.require(e);
}

}  // namespace detail

/// Calls `visit` with every induced bijection from A onto B (both sorted and duplicate-free);
/// enumeration stops early when `visit` returns false.
inline void for_each_induced_bijection(
    const Arena& arena, std::span<const Event> from, std::span<const Event> to,
    const std::function<bool(std::span<const std::size_t>)>& visit) {
    detail::require_all(arena, from);
    detail::require_all(arena, to);
    if (from.size() != to.size()) return;
    if (arena.has_trivial_group()) {
        if (std::equal(from.begin(), from.end(), to.begin(), to.end())) {
            std::vector<std::size_t> id(from.size());
            for (std::size_t i = 0; i < id.size(); ++i) id[i] = i;
            visit(id);
        }
        return;
    }
    detail::EventTrie::ShapeTable shapes;
    detail::EventTrie left(from, shapes);
    detail::EventTrie right(to, shapes);
    detail::BijectionSearch search(from.size(), visit);
    search.run(left.root(), right.root());
}

inline std::vector<InducedBijection> induced_bijections(const Arena& arena, std::span<const Event> from,
                                                        std::span<const Event> to) {
    std::vector<InducedBijection> out;
    for_each_induced_bijection(arena, from, to, [&](std::span<const std::size_t> image) {
        out.push_back({{image.begin(), image.end()}});
        return true;
    });
    return out;
}

inline bool maps_to_itself(const Play& r, std::span<const std::size_t> image) {
    for (std::size_t i = 0; i < r.size(); ++i)
        for (std::size_t j = 0; j < r.size(); ++j)
            if (r.leq(i, j) != r.leq(image[i], image[j])) return false;
    return true;
}

/// Number of ways the group permutes r onto itself.
inline std::uint64_t multiplicity(const Arena& arena, const Play& r) {
    std::uint64_t count = 0;
    for_each_induced_bijection(arena, r.support(), r.support(), [&](std::span<const std::size_t> image) {
        if (maps_to_itself(r, image)) ++count;
        return true;
    });
    return count;
}

/// Distinct images of s whose support is exactly `target`.
inline std::vector<Play> orbit_with_support(const Arena& arena, const Play& s, std::vector<Event> target) {
    auto shared = Play::make_support(std::move(target));
    std::set<Play> images;
    for_each_induced_bijection(arena, s.support(), *shared, [&](std::span<const std::size_t> image) {
        images.insert(transport(s, shared, image));
        return true;
    });
    return {images.begin(), images.end()};
}

/// Formal sum of all images of r under the bijections of its support onto itself.
inline std::map<Play, std::uint64_t> saturate(const Arena& arena, const Play& r) {
    std::map<Play, std::uint64_t> out;
    for_each_induced_bijection(arena, r.support(), r.support(), [&](std::span<const std::size_t> image) {
        ++out[transport(r, r.shared_support(), image)];
        return true;
    });
    return out;
}

/// Canonical element of the orbit of a finite event set: permutable steps are renumbered
/// 0, 1, ... among siblings, ordered by subtree shape.
inline std::vector<Event> repr_support(const Arena& arena, std::span<const Event> events) {
    detail::require_all(arena, events);
    if (arena.has_trivial_group()) {
        std::vector<Event> out(events.begin(), events.end());
        std::sort(out.begin(), out.end());
        return out;
    }
    std::vector<Event> sorted(events.begin(), events.end());
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    detail::EventTrie::ShapeTable shapes;
    detail::EventTrie trie(sorted, shapes);

    std::vector<Event> out;
    std::function<void(const detail::EventTrie::Node&, const Event&)> walk =
        [&](const detail::EventTrie::Node& node, const Event& path) {
            if (node.event >= 0) out.push_back(path);
            std::size_t i = 0;
            while (i < node.children.size()) {
                const auto key = detail::EventTrie::group_key(node.children[i].segment);
                std::vector<const detail::EventTrie::Child*> group;
                while (i < node.children.size() &&
                       detail::EventTrie::group_key(node.children[i].segment) == key)
                    group.push_back(&node.children[i++]);
                if (!group.front()->segment.permutable) {
                    walk(*group.front()->node, path.then(group.front()->segment));
                    continue;
                }
                std::stable_sort(group.begin(), group.end(), [](const auto* x, const auto* y) {
                    return *x->node->shape < *y->node->shape;
                });
                for (std::size_t k = 0; k < group.size(); ++k) {
                    Segment seg = group[k]->segment;
                    seg.value = static_cast<std::int64_t>(k);
                    walk(*group[k]->node, path.then(seg));
                }
            }
        };
    walk(trie.root(), Event{});
    std::sort(out.begin(), out.end());
    return out;
}

/// Canonical element of the orbit of r: its support is repr_support of r's support and
/// its relation is the least among the images carried onto that support.
inline Play representant(const Arena& arena, const Play& r) {
    if (arena.has_trivial_group()) {
        detail::require_all(arena, r.support());
        return r;
    }
    auto target = Play::make_support(repr_support(arena, r.support()));
    std::optional<Play> best;
    for_each_induced_bijection(arena, r.support(), *target, [&](std::span<const std::size_t> image) {
        Play candidate = transport(r, target, image);
        if (!best || candidate < *best) best = std::move(candidate);
        return true;
    });
    if (!best) throw std::logic_error("no bijection onto the canonical support");
    return *best;
}

/// A set of events closed under the arena group, given intensionally.
class OrbitClosedSet {
public:
    /// Every event of the listed sum components.
    static OrbitClosedSet components(const Arena& arena, std::vector<ComponentId> ids) {
        for (auto id : ids) arena.component(id);
        std::sort(ids.begin(), ids.end());
        return OrbitClosedSet([ids = std::move(ids)](const Event& e) {
            return e.length() > 0 && e[0].kind == SegmentKind::component &&
                   std::binary_search(ids.begin(), ids.end(), static_cast<ComponentId>(e[0].value));
        });
    }

    static OrbitClosedSet whole() {
        return OrbitClosedSet([](const Event&) { return true; });
    }

    /// A finite set; rejected when some event has an infinite orbit.
    static OrbitClosedSet of_events(const Arena& arena, std::vector<Event> events) {
        const bool trivial = arena.has_trivial_group();
        for (const auto& e : events) {
            arena.require(e);
            if (!trivial && e.has_permutable_step())
                throw UsageError("event set is not closed under the arena group");
        }
        std::sort(events.begin(), events.end());
        return OrbitClosedSet([events = std::move(events)](const Event& e) {
            return std::binary_search(events.begin(), events.end(), e);
        });
    }

    bool contains(const Event& e) const { return member_(e); }

private:
    explicit OrbitClosedSet(std::function<bool(const Event&)> member) : member_(std::move(member)) {}

    std::function<bool(const Event&)> member_;
};

}  // namespace ordalg
