#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ordalg/algebra.hpp"
#include "ordalg/equivalence.hpp"
#include "ordalg/pi/lts.hpp"
#include "ordalg/pi/simple.hpp"

namespace ordalg::pi {

namespace detail {

template <Semiring S>
void collect_witnesses(const Term<S>& t, std::set<Location>& out) {
    if (auto l = match_linear(t)) {
        out.insert(l->witness_location);
        collect_witnesses(l->body, out);
        return;
    }
    std::visit(
        [&](const auto& n) {
            using N = std::decay_t<decltype(n)>;
            if constexpr (std::same_as<N, ActionNode<S>>) {
                collect_witnesses(n.continuation, out);
            } else if constexpr (std::same_as<N, ChoiceNode<S>>) {
                for (const auto& b : n.branches) collect_witnesses(b, out);
            } else if constexpr (std::same_as<N, ParNode<S>>) {
                collect_witnesses(n.left, out);
                collect_witnesses(n.right, out);
            } else if constexpr (std::same_as<N, NewNode<S>>) {
                collect_witnesses(n.body, out);
            }
        },
        t.node());
}

// A channel together with the ν binder it lives under (0 when free), so that hidden names
// shadowing a free one stay apart.
struct Channel {
    std::size_t scope;
    Name name;
    Polarity polarity;
    auto operator<=>(const Channel&) const = default;
};

using Binders = std::vector<std::pair<Name, std::size_t>>;

inline std::size_t scope_of(const Binders& binders, const Name& n) {
    for (auto it = binders.rbegin(); it != binders.rend(); ++it)
        if (n.has_prefix(it->first)) return it->second;
    return 0;
}

// Inactions anywhere in t; sets `facing` when some parallel composition has dual inactions
// on one channel on its two sides.
template <Semiring S>
std::set<Channel> inactions(const Term<S>& t, bool& facing, Binders& binders, std::size_t& scopes) {
    return std::visit(
        [&](const auto& n) -> std::set<Channel> {
            using N = std::decay_t<decltype(n)>;
            std::set<Channel> out;
            if constexpr (std::same_as<N, ActionNode<S>>) {
                if (is_inaction(n)) out.insert({scope_of(binders, n.subject), n.subject, n.polarity});
                out.merge(inactions(n.continuation, facing, binders, scopes));
            } else if constexpr (std::same_as<N, ChoiceNode<S>>) {
                for (const auto& b : n.branches) out.merge(inactions(b, facing, binders, scopes));
            } else if constexpr (std::same_as<N, ParNode<S>>) {
                auto left = inactions(n.left, facing, binders, scopes);
                auto right = inactions(n.right, facing, binders, scopes);
                for (const auto& c : left)
                    if (right.contains({c.scope, c.name, dual(c.polarity)})) facing = true;
                out = std::move(left);
                out.merge(right);
            } else if constexpr (std::same_as<N, NewNode<S>>) {
                binders.emplace_back(n.name, ++scopes);
                out = inactions(n.body, facing, binders, scopes);
                binders.pop_back();
            }
            return out;
        },
        t.node());
}

template <Semiring S>
std::set<Channel> inactions(const Term<S>& t, bool& facing) {
    Binders binders;
    std::size_t scopes = 0;
    return inactions(t, facing, binders, scopes);
}

inline Event channel_event(const Arena& arena, const Name& n) {
    Event e{arena.channel_root(n.base)};
    for (const auto& [p, loc] : n.path)
        e = e.then({p == Polarity::positive ? SegmentKind::positive : SegmentKind::negative, loc, true});
    return e;
}

inline Event inaction_point(const Arena& arena, const Name& n, Polarity p, bool top) {
    return channel_event(arena, n).then({p == Polarity::positive ? SegmentKind::positive : SegmentKind::negative,
                                         top ? inaction_top : inaction_bottom, false});
}

inline std::string unused(const std::string& stem, const std::set<std::string>& taken) {
    for (std::size_t k = 1;; ++k) {
        std::string candidate = stem + "_" + std::to_string(k);
        if (!taken.contains(candidate)) return candidate;
    }
}

}  // namespace detail

/// Whether an interaction of a simple term fires every linear action, fires no inaction, and
/// leaves no dual inactions facing each other across a parallel composition.
template <Semiring S>
bool is_exhaustive(const Term<S>& simple, const Interaction<S>& rho) {
    std::set<Location> witnesses;
    detail::collect_witnesses(simple, witnesses);
    for (const auto& l : rho.labels) {
        if (l.fires_inaction) return false;
        for (auto loc : l.locations()) witnesses.erase(loc);
    }
    if (!witnesses.empty()) return false;
    bool facing = false;
    detail::inactions(rho.result, facing);
    return !facing;
}

/// Exhaustive pre-traces of a simple term, one per homotopy class.
template <Semiring S>
std::vector<Interaction<S>> exhaustive_pretraces(const Term<S>& simple) {
    if (!is_simple(simple)) throw UsageError("exhaustive pre-traces are defined on simple terms");
    const Dependence dep(simple);
    std::vector<Interaction<S>> out;
    explore<S>(simple, {.skip_inaction = true}, [&](const std::vector<Label>& path, const Term<S>& q, bool) {
        Interaction<S> rho{path, causal_order(dep, path), q};
        if (is_exhaustive(simple, rho)) out.push_back(std::move(rho));
    });
    return out;
}

/// The play read off an exhaustive pre-trace: its visible actions, ordered causally, plus the
/// inaction points of every known channel, with bottom below top where an inaction remains.
template <Semiring S>
Play induced_trace(const Term<S>& simple, const Interaction<S>& rho, const Arena& arena) {
    if (arena.kind() != Arena::Kind::pi) throw UsageError("induced traces live on a channel arena");
    if (!is_exhaustive(simple, rho)) throw UsageError("the interaction is not an exhaustive pre-trace");
    std::vector<Event> events;
    std::vector<Name> known;
    for (const auto& sym : arena.symbols()) known.push_back(free_name(sym));
    std::vector<std::pair<std::size_t, Event>> visible;
    for (std::size_t i = 0; i < rho.labels.size(); ++i) {
        const Label& l = rho.labels[i];
        if (l.internal) continue;
        visible.emplace_back(i, detail::channel_event(arena, l.object));
        known.push_back(l.object);
    }
    for (const auto& [i, e] : visible) events.push_back(e);
    for (const auto& n : known)
        for (auto p : {Polarity::positive, Polarity::negative})
            for (bool top : {false, true}) events.push_back(detail::inaction_point(arena, n, p, top));
    std::vector<EventPair> pairs;
    for (const auto& [i, ei] : visible)
        for (const auto& [j, ej] : visible)
            if (rho.precedes(i, j)) pairs.emplace_back(ei, ej);
    const std::set<Name> known_set(known.begin(), known.end());
    bool facing = false;
    for (const auto& c : detail::inactions(rho.result, facing))
        if (c.scope == 0 && known_set.contains(c.name))
            pairs.emplace_back(detail::inaction_point(arena, c.name, c.polarity, false),
                               detail::inaction_point(arena, c.name, c.polarity, true));
    return make_play(std::move(events), pairs);
}

/// Denotation of a term over the channel arena of `alphabet`, which must cover its free names.
template <Semiring S>
Vector<S> translate(const Term<S>& p, const std::vector<std::string>& alphabet) {
    const Arena arena = Arena::pi(alphabet);
    for (const auto& n : free_names(p))
        if (std::find(arena.symbols().begin(), arena.symbols().end(), n) == arena.symbols().end())
            throw UsageError("free name " + n + " is missing from the alphabet");
    Vector<S> out(arena);
    for (const auto& [lambda, simple] : to_simple(p))
        for (const auto& rho : exhaustive_pretraces(simple)) out.add_unchecked(induced_trace(simple, rho, arena), lambda);
    return out;
}

template <Semiring S>
Vector<S> translate(const Term<S>& p) {
    const auto names = free_names(p);
    return translate(p, std::vector<std::string>(names.begin(), names.end()));
}

/// Swaps the polarity of every step and exchanges bottom and top.
template <Semiring S>
Vector<S> bar(const Vector<S>& u) {
    if (u.arena().kind() != Arena::Kind::pi) throw UsageError("duality is defined on channel arenas");
    auto flip = [](Event e) {
        for (std::size_t i = 0; i < e.length(); ++i) {
            Segment& s = e.mutable_segment(i);
            if (s.kind == SegmentKind::positive)
                s.kind = SegmentKind::negative;
            else if (s.kind == SegmentKind::negative)
                s.kind = SegmentKind::positive;
            else
                continue;
            if (s.value == inaction_bottom)
                s.value = inaction_top;
            else if (s.value == inaction_top)
                s.value = inaction_bottom;
        }
        return e;
    };
    Vector<S> out(u.arena());
    for (const auto& [r, c] : u.terms()) {
        std::vector<Event> images;
        for (const auto& e : r.support()) images.push_back(flip(e));
        out.add_unchecked(relabel(r, images), c);
    }
    return out;
}

/// Makes p and q composable: q's locations move past p's, and hidden names on either side
/// are renamed away from every name of the other.
template <Semiring S>
std::pair<Term<S>, Term<S>> par_apart(const Term<S>& p, const Term<S>& q) {
    Term<S> q2 = shift_locations(q, max_location(p));
    std::set<std::string> taken = free_names(p);
    for (const auto& n : hidden_names(p)) taken.insert(n);
    for (const auto& n : free_names(q2)) taken.insert(n);
    std::map<std::string, std::string> table;
    for (const auto& n : hidden_names(q2)) {
        std::set<std::string> all = taken;
        for (const auto& [from, to] : table) all.insert(to);
        if (taken.contains(n) || n.starts_with(reserved_prefix)) table[n] = detail::unused(n, all);
        taken.insert(table.contains(n) ? table[n] : n);
    }
    q2 = rename_bases(q2, table);
    const auto q_free = free_names(q2);
    std::map<std::string, std::string> p_table;
    std::set<std::string> all = taken;
    for (const auto& n : hidden_names(p))
        if (q_free.contains(n)) {
            p_table[n] = detail::unused(n, all);
            all.insert(p_table[n]);
        }
    return {rename_bases(p, p_table), q2};
}

template <Semiring S>
struct CrossCheck {
    typename S::value_type operational;  // outcome of P | Q
    typename S::value_type denotational; // pairing of ⟦P⟧ with the dual of ⟦Q⟧
    bool agree() const { return S::equal(operational, denotational); }
};

/// Compares the outcome of P | Q with the pairing of their denotations.
template <Semiring S>
CrossCheck<S> cross_check(const Term<S>& p, const Term<S>& q) {
    const auto [p2, q2] = par_apart(p, q);
    std::set<std::string> names = free_names(p2);
    names.merge(free_names(q2));
    const std::vector<std::string> alphabet(names.begin(), names.end());
    return {outcome_term(Term<S>::par(p2, q2)), pairing(translate(p2, alphabet), bar(translate(q2, alphabet)))};
}

/// Observational equivalence of two terms through their denotations over their joint free names.
template <Semiring S>
bool term_equiv(const Term<S>& p, const Term<S>& q, Route route = Route::basis, std::size_t max_support = 4) {
    std::set<std::string> names = free_names(p);
    names.merge(free_names(q));
    const std::vector<std::string> alphabet(names.begin(), names.end());
    return obs_equiv(translate(p, alphabet), translate(q, alphabet), route, max_support);
}

}  // namespace ordalg::pi
