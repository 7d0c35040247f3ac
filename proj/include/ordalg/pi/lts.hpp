#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <vector>

#include "ordalg/pi/term.hpp"

namespace ordalg::pi {

/// A visible label carries one location; an internal one the two that synchronised.
struct Label {
    bool internal = false;
    Location first = 0;   // visible location, or input side of a communication
    Location second = 0;  // output side of a communication
    Name subject;
    Polarity polarity = Polarity::positive;
    Name object;
    bool fires_inaction = false;  // an action with continuation 0 took part

    std::vector<Location> locations() const {
        if (internal) return {first, second};
        return {first};
    }

    bool same_event(const Label& o) const {
        return internal == o.internal && first == o.first && (!internal || second == o.second);
    }

    std::string text() const {
        if (internal) return "{" + std::to_string(first) + "," + std::to_string(second) + "}";
        return subject.text() + (polarity == Polarity::positive ? "?" : "!") + "@" + std::to_string(first);
    }
};

template <Semiring S>
struct Transition {
    Label label;
    Term<S> target;
};

namespace detail {

template <Semiring S>
bool is_inaction(const ActionNode<S>& a) {
    const auto* s = a.continuation.template as<ScalarNode<S>>();
    return s && S::equal(s->value, S::zero());
}

template <Semiring S>
void collect_transitions(const Term<S>& p, std::vector<Transition<S>>& out) {
    std::visit(
        [&](const auto& n) {
            using N = std::decay_t<decltype(n)>;
            if constexpr (std::same_as<N, ActionNode<S>>) {
                Label l;
                l.first = n.location;
                l.subject = n.subject;
                l.polarity = n.polarity;
                l.object = n.object;
                l.fires_inaction = is_inaction(n);
                out.push_back({std::move(l), n.continuation});
            } else if constexpr (std::same_as<N, ChoiceNode<S>>) {
                for (const auto& b : n.branches) collect_transitions(b, out);
            } else if constexpr (std::same_as<N, ParNode<S>>) {
                std::vector<Transition<S>> left, right;
                collect_transitions(n.left, left);
                collect_transitions(n.right, right);
                for (const auto& t : left) out.push_back({t.label, Term<S>::par(t.target, n.right)});
                for (const auto& t : right) out.push_back({t.label, Term<S>::par(n.left, t.target)});
                for (const auto& a : left) {
                    if (a.label.internal) continue;
                    for (const auto& b : right) {
                        if (b.label.internal || a.label.subject != b.label.subject || a.label.polarity == b.label.polarity)
                            continue;
                        const bool left_inputs = a.label.polarity == Polarity::positive;
                        const Label& in = left_inputs ? a.label : b.label;
                        const Label& outp = left_inputs ? b.label : a.label;
                        Term<S> l = left_inputs ? a.target : substitute_subject(a.target, outp.object, in.object);
                        Term<S> r = left_inputs ? substitute_subject(b.target, outp.object, in.object) : b.target;
                        Label sync;
                        sync.internal = true;
                        sync.first = in.first;
                        sync.second = outp.first;
                        sync.subject = in.subject;
                        sync.fires_inaction = a.label.fires_inaction || b.label.fires_inaction;
                        out.push_back({std::move(sync), Term<S>::hide(in.object, Term<S>::par(l, r))});
                    }
                }
            } else if constexpr (std::same_as<N, NewNode<S>>) {
                std::vector<Transition<S>> inner;
                collect_transitions(n.body, inner);
                for (auto& t : inner) {
                    if (!t.label.internal && t.label.subject.has_prefix(n.name)) continue;
                    out.push_back({std::move(t.label), Term<S>::hide(n.name, t.target)});
                }
            }
        },
        p.node());
}

}  // namespace detail

/// Every transition of p: prefix firing, choice, parallel interleaving and communication,
/// with visible labels on restricted channels removed.
template <Semiring S>
std::vector<Transition<S>> transitions(const Term<S>& p) {
    std::vector<Transition<S>> out;
    detail::collect_transitions(p, out);
    return out;
}

/// Static dependence between the locations of an initial term: shared location, prefix
/// ancestry, or branches of the same sum.
class Dependence {
public:
    template <Semiring S>
    explicit Dependence(const Term<S>& initial) {
        std::vector<Location> ancestors;
        std::vector<std::pair<std::size_t, std::size_t>> choices;
        std::size_t next_choice = 0;
        std::function<void(const Term<S>&)> walk = [&](const Term<S>& t) {
            std::visit(
                [&](const auto& n) {
                    using N = std::decay_t<decltype(n)>;
                    if constexpr (std::same_as<N, ActionNode<S>>) {
                        auto& info = info_[n.location];
                        info.ancestors.insert(ancestors.begin(), ancestors.end());
                        info.choices = choices;
                        ancestors.push_back(n.location);
                        walk(n.continuation);
                        ancestors.pop_back();
                    } else if constexpr (std::same_as<N, ChoiceNode<S>>) {
                        const std::size_t id = next_choice++;
                        for (std::size_t i = 0; i < n.branches.size(); ++i) {
                            choices.emplace_back(id, i);
                            walk(n.branches[i]);
                            choices.pop_back();
                        }
                    } else if constexpr (std::same_as<N, ParNode<S>>) {
                        walk(n.left);
                        walk(n.right);
                    } else if constexpr (std::same_as<N, NewNode<S>>) {
                        walk(n.body);
                    }
                },
                t.node());
        };
        walk(initial);
    }

    bool dependent(Location a, Location b) const {
        if (a == b) return true;
        const auto& ia = at(a);
        const auto& ib = at(b);
        if (ia.ancestors.contains(b) || ib.ancestors.contains(a)) return true;
        for (const auto& [ca, ba] : ia.choices)
            for (const auto& [cb, bb] : ib.choices)
                if (ca == cb && ba != bb) return true;
        return false;
    }

    bool dependent(const Label& a, const Label& b) const {
        for (auto x : a.locations())
            for (auto y : b.locations())
                if (dependent(x, y)) return true;
        return false;
    }

private:
    struct Info {
        std::set<Location> ancestors;
        std::vector<std::pair<std::size_t, std::size_t>> choices;
    };

    const Info& at(Location l) const {
        auto it = info_.find(l);
        if (it == info_.end()) throw UsageError("location " + std::to_string(l) + " is not in the initial term");
        return it->second;
    }

    std::map<Location, Info> info_;
};

/// A path of transitions from the initial term with its causal order (strict, transitive;
/// row i holds the labels after label i).
template <Semiring S>
struct Interaction {
    std::vector<Label> labels;
    std::vector<std::uint64_t> after;
    Term<S> result;

    bool precedes(std::size_t i, std::size_t j) const { return (after[i] >> j) & 1U; }
};

inline std::vector<std::uint64_t> causal_order(const Dependence& dep, const std::vector<Label>& labels) {
    const std::size_t k = labels.size();
    if (k > 64) throw UnsupportedError("interactions longer than 64 transitions are not supported");
    std::vector<std::uint64_t> after(k, 0);
    for (std::size_t i = k; i-- > 0;)
        for (std::size_t j = i + 1; j < k; ++j)
            if (dep.dependent(labels[i], labels[j])) after[i] |= (std::uint64_t{1} << j) | after[j];
    return after;
}

struct ExploreOptions {
    bool visible = true;         // allow visible transitions
    bool skip_inaction = false;  // never fire an action with continuation 0
    bool prune_zero = false;     // stop below states whose scalar part is 0
};

/// Sleep-set depth-first exploration. Every homotopy class of paths (every prefix, not only
/// maximal ones) is reported exactly once. `visit` receives the path, the current term and
/// whether it has no allowed transition.
template <Semiring S>
void explore(const Term<S>& initial, const ExploreOptions& options,
             const std::function<void(const std::vector<Label>&, const Term<S>&, bool)>& visit) {
    const Dependence dep(initial);
    std::vector<Label> path;
    std::function<void(const Term<S>&, const std::vector<Label>&)> dfs = [&](const Term<S>& p,
                                                                             const std::vector<Label>& sleep) {
        if (options.prune_zero && S::equal(state(p), S::zero())) return;
        std::vector<Transition<S>> enabled;
        for (auto& t : transitions(p)) {
            if (!options.visible && !t.label.internal) continue;
            if (options.skip_inaction && t.label.fires_inaction) continue;
            enabled.push_back(std::move(t));
        }
        visit(path, p, enabled.empty());
        std::vector<Label> done;
        for (const auto& t : enabled) {
            auto asleep = [&](const Label& l) { return l.same_event(t.label); };
            if (std::any_of(sleep.begin(), sleep.end(), asleep)) continue;
            std::vector<Label> next;
            for (const auto& l : sleep)
                if (!dep.dependent(l, t.label)) next.push_back(l);
            for (const auto& l : done)
                if (!dep.dependent(l, t.label)) next.push_back(l);
            path.push_back(t.label);
            dfs(t.target, next);
            path.pop_back();
            done.push_back(t.label);
        }
    };
    dfs(initial, {});
}

/// Maximal internal interactions, one per homotopy class.
template <Semiring S>
std::vector<Interaction<S>> runs(const Term<S>& p) {
    const Dependence dep(p);
    std::vector<Interaction<S>> out;
    explore<S>(p, {.visible = false}, [&](const std::vector<Label>& path, const Term<S>& q, bool maximal) {
        if (maximal) out.push_back({path, causal_order(dep, path), q});
    });
    return out;
}

/// Sum of the states reached by the maximal runs of p.
template <Semiring S>
typename S::value_type outcome_term(const Term<S>& p) {
    auto total = S::zero();
    explore<S>(p, {.visible = false, .prune_zero = true}, [&](const std::vector<Label>&, const Term<S>& q, bool maximal) {
        if (maximal) total = S::add(total, state(q));
    });
    return total;
}

}  // namespace ordalg::pi

namespace ordalg::pi {

/// Reference enumeration: every path (all prefixes, or only maximal ones), grouped by label set.
/// Asserts determinacy at every step and that paths with equal label sets reach the same term;
/// the causal order of a class is the intersection of the orders of its member paths.
template <Semiring S>
std::vector<Interaction<S>> quotient_paths(const Term<S>& initial, const ExploreOptions& options, bool maximal_only) {
    struct Class {
        std::vector<Label> labels;                       // first member, in path order
        std::vector<std::vector<bool>> before;           // before[i][j]: i precedes j in every member
        std::string result_text;
        Term<S> result;
    };
    std::map<std::vector<std::pair<Location, Location>>, Class> classes;
    std::vector<Label> path;
    auto key_of = [](const std::vector<Label>& labels) {
        std::vector<std::pair<Location, Location>> key;
        for (const auto& l : labels) key.emplace_back(l.first, l.internal ? l.second : -1);
        std::sort(key.begin(), key.end());
        return key;
    };
    std::function<void(const Term<S>&)> dfs = [&](const Term<S>& p) {
        if (options.prune_zero && S::equal(state(p), S::zero())) return;
        std::vector<Transition<S>> enabled;
        for (auto& t : transitions(p)) {
            if (!options.visible && !t.label.internal) continue;
            if (options.skip_inaction && t.label.fires_inaction) continue;
            for (const auto& e : enabled)
                if (e.label.same_event(t.label)) throw std::logic_error("two transitions share the label " + t.label.text());
            enabled.push_back(std::move(t));
        }
        if (!maximal_only || enabled.empty()) {
            auto key = key_of(path);
            const std::string text = canonical_text(p);
            auto it = classes.find(key);
            if (it == classes.end()) {
                Class c{path, {}, text, p};
                c.before.assign(path.size(), std::vector<bool>(path.size(), false));
                for (std::size_t i = 0; i < path.size(); ++i)
                    for (std::size_t j = i + 1; j < path.size(); ++j) c.before[i][j] = true;
                classes.emplace(std::move(key), std::move(c));
            } else {
                Class& c = it->second;
                if (c.result_text != text)
                    throw std::logic_error("paths with equal labels reach different terms: " + c.result_text + " vs " + text);
                std::vector<std::size_t> position(path.size());
                for (std::size_t i = 0; i < c.labels.size(); ++i)
                    for (std::size_t k = 0; k < path.size(); ++k)
                        if (path[k].same_event(c.labels[i])) position[i] = k;
                for (std::size_t i = 0; i < c.labels.size(); ++i)
                    for (std::size_t j = 0; j < c.labels.size(); ++j)
                        if (position[i] >= position[j]) c.before[i][j] = false;
            }
        }
        for (const auto& t : enabled) {
            path.push_back(t.label);
            dfs(t.target);
            path.pop_back();
        }
    };
    dfs(initial);
    std::vector<Interaction<S>> out;
    for (auto& [key, c] : classes) {
        const std::size_t k = c.labels.size();
        if (k > 64) throw UnsupportedError("interactions longer than 64 transitions are not supported");
        std::vector<std::uint64_t> after(k, 0);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j)
                if (c.before[i][j]) after[i] |= std::uint64_t{1} << j;
        out.push_back({std::move(c.labels), std::move(after), c.result});
    }
    return out;
}

}  // namespace ordalg::pi
