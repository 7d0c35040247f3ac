#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ordalg/errors.hpp"
#include "ordalg/semiring.hpp"

namespace ordalg::pi {

using Location = std::int64_t;

/// Input actions are positive, outputs negative.
enum class Polarity : std::uint8_t { positive, negative };

inline Polarity dual(Polarity p) { return p == Polarity::positive ? Polarity::negative : Polarity::positive; }
inline char sign(Polarity p) { return p == Polarity::positive ? '+' : '-'; }

/// Abstract channel: a base name followed by the (polarity, location) steps of the binders
/// that revealed it. The object of an action at location n on channel x is x·(ε, n).
struct Name {
    std::string base;
    std::vector<std::pair<Polarity, Location>> path;

    Name child(Polarity p, Location n) const {
        Name out = *this;
        out.path.emplace_back(p, n);
        return out;
    }

    bool has_prefix(const Name& prefix) const {
        return base == prefix.base && path.size() >= prefix.path.size() &&
               std::equal(prefix.path.begin(), prefix.path.end(), path.begin());
    }

    std::string text() const {
        std::string out = base;
        for (const auto& [p, n] : path) out += std::string(".") + sign(p) + std::to_string(n);
        return out;
    }

    auto operator<=>(const Name&) const = default;
};

inline Name free_name(std::string base) { return Name{std::move(base), {}}; }

/// Names starting with this character are reserved for encodings.
inline constexpr char reserved_prefix = '%';

inline bool is_reserved(const Name& n) { return !n.base.empty() && n.base.front() == reserved_prefix; }

template <Semiring S>
class Term;

template <Semiring S>
struct ScalarNode {
    typename S::value_type value;
};

template <Semiring S>
struct ActionNode {
    Location location;
    Name subject;
    Polarity polarity;
    Name object;
    Term<S> continuation;
};

/// Sum of at least two actions.
template <Semiring S>
struct ChoiceNode {
    std::vector<Term<S>> branches;
};

template <Semiring S>
struct ParNode {
    Term<S> left;
    Term<S> right;
};

template <Semiring S>
struct NewNode {
    Name name;
    Term<S> body;
};

/// Immutable located πI term with outcomes in S. Nodes are shared between terms.
template <Semiring S>
class Term {
public:
    using Scalar = typename S::value_type;
    using Node = std::variant<ScalarNode<S>, ActionNode<S>, ChoiceNode<S>, ParNode<S>, NewNode<S>>;

    static Term scalar(Scalar value) { return Term(ScalarNode<S>{std::move(value)}); }
    static Term one() { return scalar(S::one()); }
    static Term zero() { return scalar(S::zero()); }

    /// Action whose object follows the abstract-channel discipline.
    static Term action(Location location, Name subject, Polarity polarity, Term continuation) {
        Name object = subject.child(polarity, location);
        return action(location, std::move(subject), polarity, std::move(object), std::move(continuation));
    }

    static Term action(Location location, Name subject, Polarity polarity, Name object, Term continuation) {
        return Term(ActionNode<S>{location, std::move(subject), polarity, std::move(object), std::move(continuation)});
    }

    /// Sum of branchings; nested sums are flattened and a single branch stays an action.
    static Term choice(const std::vector<Term>& branchings) {
        std::vector<Term> flat;
        for (const auto& b : branchings) {
            if (const auto* c = b.template as<ChoiceNode<S>>()) {
                flat.insert(flat.end(), c->branches.begin(), c->branches.end());
            } else if (b.template as<ActionNode<S>>()) {
                flat.push_back(b);
            } else {
                throw UsageError("only action prefixes can be summed");
            }
        }
        if (flat.empty()) throw UsageError("empty sum");
        if (flat.size() == 1) return flat.front();
        return Term(ChoiceNode<S>{std::move(flat)});
    }

    static Term par(Term left, Term right) { return Term(ParNode<S>{std::move(left), std::move(right)}); }
    static Term hide(Name name, Term body) { return Term(NewNode<S>{std::move(name), std::move(body)}); }

    const Node& node() const { return *node_; }

    template <class T>
    const T* as() const {
        return std::get_if<T>(node_.get());
    }

    bool is_branching() const { return as<ActionNode<S>>() || as<ChoiceNode<S>>(); }

    /// The actions of a branching, in order.
    std::vector<const ActionNode<S>*> branches() const {
        std::vector<const ActionNode<S>*> out;
        if (const auto* a = as<ActionNode<S>>()) {
            out.push_back(a);
        } else if (const auto* c = as<ChoiceNode<S>>()) {
            for (const auto& b : c->branches) out.push_back(b.template as<ActionNode<S>>());
        }
        return out;
    }

    bool same_node(const Term& other) const { return node_ == other.node_; }

private:
    explicit Term(Node node) : node_(std::make_shared<const Node>(std::move(node))) {}

    std::shared_ptr<const Node> node_;
};

// --- structural queries ---------------------------------------------------------------

template <Semiring S>
void for_each_action(const Term<S>& p, const std::function<void(const ActionNode<S>&)>& f) {
    std::visit(
        [&](const auto& n) {
            using N = std::decay_t<decltype(n)>;
            if constexpr (std::same_as<N, ActionNode<S>>) {
                f(n);
                for_each_action(n.continuation, f);
            } else if constexpr (std::same_as<N, ChoiceNode<S>>) {
                for (const auto& b : n.branches) for_each_action(b, f);
            } else if constexpr (std::same_as<N, ParNode<S>>) {
                for_each_action(n.left, f);
                for_each_action(n.right, f);
            } else if constexpr (std::same_as<N, NewNode<S>>) {
                for_each_action(n.body, f);
            }
        },
        p.node());
}

template <Semiring S>
Location max_location(const Term<S>& p) {
    Location m = 0;
    for_each_action<S>(p, [&](const ActionNode<S>& a) { m = std::max(m, a.location); });
    return m;
}

template <Semiring S>
std::vector<Location> locations(const Term<S>& p) {
    std::vector<Location> out;
    for_each_action<S>(p, [&](const ActionNode<S>& a) { out.push_back(a.location); });
    return out;
}

/// Base names occurring free (not under a ν binding them, and not revealed objects).
template <Semiring S>
std::set<std::string> free_names(const Term<S>& p) {
    std::set<std::string> out;
    std::function<void(const Term<S>&, std::set<std::string>&)> walk = [&](const Term<S>& t,
                                                                            std::set<std::string>& bound) {
        std::visit(
            [&](const auto& n) {
                using N = std::decay_t<decltype(n)>;
                if constexpr (std::same_as<N, ActionNode<S>>) {
                    if (n.subject.path.empty() && !bound.contains(n.subject.base)) out.insert(n.subject.base);
                    walk(n.continuation, bound);
                } else if constexpr (std::same_as<N, ChoiceNode<S>>) {
                    for (const auto& b : n.branches) walk(b, bound);
                } else if constexpr (std::same_as<N, ParNode<S>>) {
                    walk(n.left, bound);
                    walk(n.right, bound);
                } else if constexpr (std::same_as<N, NewNode<S>>) {
                    const bool added = n.name.path.empty() && bound.insert(n.name.base).second;
                    walk(n.body, bound);
                    if (added) bound.erase(n.name.base);
                }
            },
            t.node());
    };
    std::set<std::string> bound;
    walk(p, bound);
    return out;
}

/// Base names bound by ν anywhere in the term.
template <Semiring S>
std::set<std::string> hidden_names(const Term<S>& p) {
    std::set<std::string> out;
    std::function<void(const Term<S>&)> walk = [&](const Term<S>& t) {
        std::visit(
            [&](const auto& n) {
                using N = std::decay_t<decltype(n)>;
                if constexpr (std::same_as<N, ActionNode<S>>) {
                    walk(n.continuation);
                } else if constexpr (std::same_as<N, ChoiceNode<S>>) {
                    for (const auto& b : n.branches) walk(b);
                } else if constexpr (std::same_as<N, ParNode<S>>) {
                    walk(n.left);
                    walk(n.right);
                } else if constexpr (std::same_as<N, NewNode<S>>) {
                    out.insert(n.name.base);
                    walk(n.body);
                }
            },
            t.node());
    };
    walk(p);
    return out;
}

/// Product of the scalars in active position; branchings count as 1.
template <Semiring S>
typename S::value_type state(const Term<S>& p) {
    return std::visit(
        [](const auto& n) -> typename S::value_type {
            using N = std::decay_t<decltype(n)>;
            if constexpr (std::same_as<N, ScalarNode<S>>) {
                return n.value;
            } else if constexpr (std::same_as<N, ParNode<S>>) {
                return S::mul(state(n.left), state(n.right));
            } else if constexpr (std::same_as<N, NewNode<S>>) {
                return state(n.body);
            } else {
                return S::one();
            }
        },
        p.node());
}

// --- rewriting --------------------------------------------------------------------------

/// Replaces every name that has `from` as a prefix by the same name re-rooted at `to`.
inline Name reroot(const Name& n, const Name& from, const Name& to) {
    if (!n.has_prefix(from)) return n;
    Name out = to;
    out.path.insert(out.path.end(), n.path.begin() + static_cast<std::ptrdiff_t>(from.path.size()), n.path.end());
    return out;
}

/// Generic bottom-up map over names and locations.
template <Semiring S>
Term<S> map_term(const Term<S>& p, const std::function<Name(const Name&)>& rename,
                 const std::function<Location(Location)>& relocate) {
    return std::visit(
        [&](const auto& n) -> Term<S> {
            using N = std::decay_t<decltype(n)>;
            if constexpr (std::same_as<N, ScalarNode<S>>) {
                return p;
            } else if constexpr (std::same_as<N, ActionNode<S>>) {
                return Term<S>::action(relocate(n.location), rename(n.subject), n.polarity, rename(n.object),
                                       map_term(n.continuation, rename, relocate));
            } else if constexpr (std::same_as<N, ChoiceNode<S>>) {
                std::vector<Term<S>> bs;
                for (const auto& b : n.branches) bs.push_back(map_term(b, rename, relocate));
                return Term<S>::choice(bs);
            } else if constexpr (std::same_as<N, ParNode<S>>) {
                return Term<S>::par(map_term(n.left, rename, relocate), map_term(n.right, rename, relocate));
            } else {
                return Term<S>::hide(rename(n.name), map_term(n.body, rename, relocate));
            }
        },
        p.node());
}

/// Replaces the subject `from` by `to` in every action (objects are binders and stay put).
template <Semiring S>
Term<S> substitute_subject(const Term<S>& p, const Name& from, const Name& to) {
    return std::visit(
        [&](const auto& n) -> Term<S> {
            using N = std::decay_t<decltype(n)>;
            if constexpr (std::same_as<N, ScalarNode<S>>) {
                return p;
            } else if constexpr (std::same_as<N, ActionNode<S>>) {
                return Term<S>::action(n.location, n.subject == from ? to : n.subject, n.polarity, n.object,
                                       substitute_subject(n.continuation, from, to));
            } else if constexpr (std::same_as<N, ChoiceNode<S>>) {
                std::vector<Term<S>> bs;
                for (const auto& b : n.branches) bs.push_back(substitute_subject(b, from, to));
                return Term<S>::choice(bs);
            } else if constexpr (std::same_as<N, ParNode<S>>) {
                return Term<S>::par(substitute_subject(n.left, from, to), substitute_subject(n.right, from, to));
            } else {
                return Term<S>::hide(n.name, substitute_subject(n.body, from, to));
            }
        },
        p.node());
}

/// Shifts every location by `offset`, renaming revealed objects so they keep following
/// the abstract-channel discipline.
template <Semiring S>
Term<S> shift_locations(const Term<S>& p, Location offset) {
    auto rename = [offset](const Name& n) {
        Name out{n.base, {}};
        for (const auto& [pol, loc] : n.path) out.path.emplace_back(pol, loc + offset);
        return out;
    };
    return map_term<S>(p, rename, [offset](Location l) { return l + offset; });
}

/// Renames ν-bound and reserved base names through `table`.
template <Semiring S>
Term<S> rename_bases(const Term<S>& p, const std::map<std::string, std::string>& table) {
    auto rename = [&](const Name& n) {
        auto it = table.find(n.base);
        if (it == table.end()) return n;
        return Name{it->second, n.path};
    };
    return map_term<S>(p, rename, [](Location l) { return l; });
}

// --- printing ---------------------------------------------------------------------------

namespace detail {

template <Semiring S>
std::string print(const Term<S>& p, bool sort_binders, int context) {
    // context: 0 top/par operand, 1 sum operand or prefix continuation
    return std::visit(
        [&](const auto& n) -> std::string {
            using N = std::decay_t<decltype(n)>;
            if constexpr (std::same_as<N, ScalarNode<S>>) {
                return "{" + S::format(n.value) + "}";
            } else if constexpr (std::same_as<N, ActionNode<S>>) {
                return n.subject.text() + (n.polarity == Polarity::positive ? "?" : "!") + "@" +
                       std::to_string(n.location) + "(" + n.object.text() + ")." + print(n.continuation, sort_binders, 1);
            } else if constexpr (std::same_as<N, ChoiceNode<S>>) {
                std::string out;
                for (std::size_t i = 0; i < n.branches.size(); ++i)
                    out += (i ? " + " : "") + print(n.branches[i], sort_binders, 1);
                return context == 0 ? out : "(" + out + ")";
            } else if constexpr (std::same_as<N, ParNode<S>>) {
                return "(" + print(n.left, sort_binders, 0) + " | " + print(n.right, sort_binders, 0) + ")";
            } else {
                // consecutive binders commute; the canonical form lists them sorted
                std::vector<std::string> names{n.name.text()};
                const Term<S>* body = &n.body;
                if (sort_binders) {
                    while (const auto* inner = body->template as<NewNode<S>>()) {
                        names.push_back(inner->name.text());
                        body = &inner->body;
                    }
                    std::sort(names.begin(), names.end());
                }
                std::string out = "new ";
                for (std::size_t i = 0; i < names.size(); ++i) out += (i ? "," : "") + names[i];
                return "(" + out + " in " + print(*body, sort_binders, 1) + ")";
            }
        },
        p.node());
}

}  // namespace detail

/// Fully located rendering; objects are shown by their abstract-channel names.
template <Semiring S>
std::string to_text(const Term<S>& p) {
    return detail::print(p, false, 0);
}

/// Rendering that identifies terms differing only in the order of consecutive ν binders.
template <Semiring S>
std::string canonical_text(const Term<S>& p) {
    return detail::print(p, true, 0);
}

}  // namespace ordalg::pi
