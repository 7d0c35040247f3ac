#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ordalg/pi/term.hpp"

namespace ordalg::pi {

/// Supplies locations and reserved names not occurring in a given term.
class FreshSupply {
public:
    template <Semiring S>
    explicit FreshSupply(const Term<S>& p) : next_location_(max_location(p) + 1) {
        taken_ = hidden_names(p);
        for (const auto& n : free_names(p)) taken_.insert(n);
    }

    FreshSupply(Location first_free, std::set<std::string> taken)
        : next_location_(first_free), taken_(std::move(taken)) {}

    Location location() { return next_location_++; }
    Location peek_location() const { return next_location_; }
    void skip(Location n) { next_location_ += n; }

    Name name(const std::string& stem) {
        while (true) {
            std::string candidate = std::string(1, reserved_prefix) + stem + std::to_string(counter_++);
            if (taken_.insert(candidate).second) return free_name(candidate);
        }
    }

private:
    Location next_location_;
    std::size_t counter_ = 0;
    std::set<std::string> taken_;
};

/// The head of an action prefix, without its continuation.
struct Prefix {
    Location location;
    Name subject;
    Polarity polarity;
    Name object;
};

template <Semiring S>
Prefix prefix_of(const ActionNode<S>& a) {
    return {a.location, a.subject, a.polarity, a.object};
}

/// Pieces of an affine action encoding:  ν w (α.(P | w.1) | w.0 | w̄.1).
template <Semiring S>
struct LinearAction {
    Prefix head;
    Term<S> body;
    Name witness;
    Location witness_location;  // the w.1 under α
    Location guard_location;    // w.0
    Location trigger_location;  // w̄.1

    Term<S> build() const { return rebuild(body); }

    Term<S> rebuild(const Term<S>& new_body) const {
        using T = Term<S>;
        const T fired = T::action(head.location, head.subject, head.polarity, head.object,
                                  T::par(new_body, T::action(witness_location, witness, Polarity::positive, T::one())));
        const T guard = T::action(guard_location, witness, Polarity::positive, T::zero());
        const T trigger = T::action(trigger_location, witness, Polarity::negative, T::one());
        return T::hide(witness, T::par(T::par(fired, guard), trigger));
    }
};

/// The affine (linear) version of α.P: it must fire α to reach P, and a run that never
/// fires it ends with outcome 0.
template <Semiring S>
Term<S> linear_action(FreshSupply& fresh, const Prefix& head, const Term<S>& body) {
    LinearAction<S> l{head, body, fresh.name("w"), fresh.location(), fresh.location(), fresh.location()};
    return l.build();
}

/// ν u ((u.P | u.Q) | ū.1): exactly one side is enabled in each run.
template <Semiring S>
Term<S> oplus(FreshSupply& fresh, const Term<S>& p, const Term<S>& q) {
    using T = Term<S>;
    const Name u = fresh.name("u");
    const T left = T::action(fresh.location(), u, Polarity::positive, p);
    const T right = T::action(fresh.location(), u, Polarity::positive, q);
    const T trigger = T::action(fresh.location(), u, Polarity::negative, T::one());
    return T::hide(u, T::par(T::par(left, right), trigger));
}

/// λ · P, as a scalar in parallel.
template <Semiring S>
Term<S> scale(typename S::value_type lambda, const Term<S>& p) {
    return Term<S>::par(Term<S>::scalar(std::move(lambda)), p);
}

namespace detail {

template <Semiring S>
bool is_scalar(const Term<S>& t, const typename S::value_type& v) {
    const auto* s = t.template as<ScalarNode<S>>();
    return s && S::equal(s->value, v);
}

template <Semiring S>
const ActionNode<S>* action_on(const Term<S>& t, const Name& subject, Polarity p, const typename S::value_type& cont) {
    const auto* a = t.template as<ActionNode<S>>();
    if (!a || a->subject != subject || a->polarity != p || !is_scalar(a->continuation, cont)) return nullptr;
    return a;
}

inline bool reserved_stem(const Name& n, char stem) {
    return n.path.empty() && n.base.size() > 1 && n.base[0] == reserved_prefix && n.base[1] == stem;
}

}  // namespace detail

template <Semiring S>
std::optional<LinearAction<S>> match_linear(const Term<S>& t) {
    const auto* nu = t.template as<NewNode<S>>();
    if (!nu || !detail::reserved_stem(nu->name, 'w')) return std::nullopt;
    const Name& w = nu->name;
    const auto* outer = nu->body.template as<ParNode<S>>();
    if (!outer) return std::nullopt;
    const auto* trigger = detail::action_on(outer->right, w, Polarity::negative, S::one());
    const auto* inner = outer->left.template as<ParNode<S>>();
    if (!trigger || !inner) return std::nullopt;
    const auto* guard = detail::action_on(inner->right, w, Polarity::positive, S::zero());
    const auto* fired = inner->left.template as<ActionNode<S>>();
    if (!guard || !fired) return std::nullopt;
    const auto* cont = fired->continuation.template as<ParNode<S>>();
    if (!cont) return std::nullopt;
    const auto* witness = detail::action_on(cont->right, w, Polarity::positive, S::one());
    if (!witness) return std::nullopt;
    return LinearAction<S>{prefix_of(*fired), cont->left, w, witness->location, guard->location, trigger->location};
}

template <Semiring S>
std::optional<std::pair<Term<S>, Term<S>>> match_oplus(const Term<S>& t) {
    const auto* nu = t.template as<NewNode<S>>();
    if (!nu || !detail::reserved_stem(nu->name, 'u')) return std::nullopt;
    const Name& u = nu->name;
    const auto* outer = nu->body.template as<ParNode<S>>();
    if (!outer || !detail::action_on(outer->right, u, Polarity::negative, S::one())) return std::nullopt;
    const auto* inner = outer->left.template as<ParNode<S>>();
    if (!inner) return std::nullopt;
    const auto* l = inner->left.template as<ActionNode<S>>();
    const auto* r = inner->right.template as<ActionNode<S>>();
    if (!l || !r || l->subject != u || r->subject != u || l->polarity != Polarity::positive ||
        r->polarity != Polarity::positive)
        return std::nullopt;
    return std::pair{l->continuation, r->continuation};
}

/// A branching whose every continuation is 0.
template <Semiring S>
bool is_inaction_set(const Term<S>& t) {
    if (!t.is_branching()) return false;
    for (const auto* a : t.branches())
        if (!detail::is_scalar(a->continuation, S::zero())) return false;
    return true;
}

/// Simple terms: 1, inaction sets, linear actions on simple bodies, parallel compositions
/// and restrictions of simple terms.
template <Semiring S>
bool is_simple(const Term<S>& t) {
    if (detail::is_scalar(t, S::one()) || is_inaction_set(t)) return true;
    if (auto l = match_linear(t)) return is_simple(l->body);
    if (const auto* p = t.template as<ParNode<S>>()) return is_simple(p->left) && is_simple(p->right);
    if (const auto* n = t.template as<NewNode<S>>()) return is_simple(n->body);
    return false;
}

template <Semiring S>
using SimpleCombination = std::vector<std::pair<typename S::value_type, Term<S>>>;

namespace detail {

template <Semiring S>
SimpleCombination<S> decompose(const Term<S>& t, FreshSupply& fresh) {
    using T = Term<S>;
    SimpleCombination<S> out;
    if (const auto* s = t.template as<ScalarNode<S>>()) {
        if (!S::equal(s->value, S::zero())) out.emplace_back(s->value, T::one());
        return out;
    }
    if (is_inaction_set(t)) {
        out.emplace_back(S::one(), t);
        return out;
    }
    if (auto l = match_linear(t)) {
        for (auto& [c, body] : decompose(l->body, fresh)) out.emplace_back(c, l->rebuild(body));
        return out;
    }
    if (auto o = match_oplus(t)) {
        out = decompose(o->first, fresh);
        for (auto& term : decompose(o->second, fresh)) out.push_back(std::move(term));
        return out;
    }
    if (const auto* p = t.template as<ParNode<S>>()) {
        const auto left = decompose(p->left, fresh);
        const auto right = decompose(p->right, fresh);
        for (const auto& [a, l] : left)
            for (const auto& [b, r] : right) {
                const auto c = S::mul(a, b);
                if (S::equal(c, S::zero())) continue;
                if (is_scalar(l, S::one()))
                    out.emplace_back(c, r);
                else if (is_scalar(r, S::one()))
                    out.emplace_back(c, l);
                else
                    out.emplace_back(c, T::par(l, r));
            }
        return out;
    }
    if (const auto* n = t.template as<NewNode<S>>()) {
        for (auto& [c, body] : decompose(n->body, fresh)) out.emplace_back(c, T::hide(n->name, body));
        return out;
    }
    // a branching with some non-zero continuation: Σ αᵢ.Pᵢ ≃ ⊕ α̂ᵢ.Pᵢ ⊕ Σ αᵢ.0
    std::vector<T> inactions;
    for (const auto* a : t.branches()) {
        const Prefix head = prefix_of(*a);
        for (auto& [c, body] : decompose(a->continuation, fresh))
            out.emplace_back(c, linear_action(fresh, head, body));
        inactions.push_back(T::action(head.location, head.subject, head.polarity, head.object, T::zero()));
    }
    out.emplace_back(S::one(), T::choice(inactions));
    return out;
}

}  // namespace detail

/// Rewrites p as a combination Σ λⱼ·Sⱼ of simple terms with the same observable behaviour.
/// Scalars are pulled out and zero summands dropped.
template <Semiring S>
SimpleCombination<S> to_simple(const Term<S>& p) {
    FreshSupply fresh(p);
    return detail::decompose(p, fresh);
}

}  // namespace ordalg::pi
