#pragma once

#include <functional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "ordalg/pi/parser.hpp"
#include "ordalg/pi/simple.hpp"
#include "ordalg/pi/translate.hpp"

namespace ordalg::pi {

/// Builds larger terms out of parsed pieces, keeping locations and hidden names distinct
/// across pieces and copies.
template <Semiring S>
class Assembler {
public:
    Assembler() : fresh_(1, {}) {}

    /// Parses `src` and moves it past every location handed out so far.
    Term<S> piece(std::string_view src) { return copy(parse_term<S>(src)); }

    /// A copy of t with fresh locations and fresh hidden names.
    Term<S> copy(const Term<S>& t) {
        const Location offset = fresh_.peek_location() - 1;
        Term<S> moved = shift_locations(t, offset);
        fresh_.skip(max_location(t));
        std::map<std::string, std::string> table;
        for (const auto& n : hidden_names(moved)) {
            if (n.starts_with(reserved_prefix))
                table[n] = fresh_.name(n.substr(1, 1)).base;
            else
                table[n] = n + "_" + std::to_string(++renamed_);
        }
        return rename_bases(moved, table);
    }

    Term<S> oplus(const Term<S>& p, const Term<S>& q) { return pi::oplus(fresh_, p, q); }

    /// α̂.body where α acts on `subject` and `body` refers to the bound object as the free name x.
    Term<S> linear(const Name& subject, Polarity pol, const Term<S>& body) {
        const Location loc = fresh_.location();
        const Name object = subject.child(pol, loc);
        const Name x = free_name("x");
        Term<S> bound = map_term<S>(body, [&](const Name& n) { return reroot(n, x, object); },
                                    [](Location l) { return l; });
        return linear_action(fresh_, Prefix{loc, subject, pol, object}, bound);
    }

    /// α.body, with the same convention for x.
    Term<S> prefix(const Name& subject, Polarity pol, const Term<S>& body) {
        const Location loc = fresh_.location();
        const Name object = subject.child(pol, loc);
        Term<S> bound = map_term<S>(body, [&](const Name& n) { return reroot(n, free_name("x"), object); },
                                    [](Location l) { return l; });
        return Term<S>::action(loc, subject, pol, object, bound);
    }

    FreshSupply& fresh() { return fresh_; }

private:
    FreshSupply fresh_;
    std::size_t renamed_ = 0;
};

/// Two outcome values other than 0 and 1 where the semiring has them.
template <Semiring S>
std::pair<typename S::value_type, typename S::value_type> sample_scalars() {
    if constexpr (requires { S::mode; })
        return {S::parse("w"), S::parse("1")};
    else if constexpr (std::same_as<S, Boolean>)
        return {S::one(), S::one()};
    else
        return {S::parse("2"), S::parse("3")};
}

template <Semiring S>
struct LawInstance {
    std::string law;
    Term<S> lhs;
    Term<S> rhs;
};

/// Instantiations of the basic, module and linear-action laws, `per_law` of each (at most 3).
template <Semiring S>
std::vector<LawInstance<S>> law_corpus(std::size_t per_law = 3) {
    using T = Term<S>;
    const auto [l1, l2] = sample_scalars<S>();
    const std::string lam = "{" + S::format(l1) + "}";
    const std::vector<std::string> ps{"a?(x).{1}", "a!(x).x?(y).{1} + b?(z).{1}",
                                      "new c in (c?(x).a!(y).{1} | c!(z).{1}) | b!(w).{0}"};
    const std::vector<std::string> qs{"a!(y).{1}", "b!(x).(x!(y).{1} | a?(z).{1})", lam + " | a?(x).{1}"};
    const std::vector<std::string> rs{"b?(z).{1}", "a?(x).{0} + b!(y).{1}", "new d in d!(x).{1}"};
    const std::vector<std::string> branchings{"a?(x).{1}", "b!(y).a?(z).{1}", "a?(w).{0}", "b?(v).{1}"};
    // bodies for prefixes, mentioning the bound object as x
    const std::vector<std::string> bodies{"x!(y).{1}", "b?(y).{1}", "x?(y).{1} | a!(z).{1}"};
    const std::vector<std::string> other_bodies{"{1}", "x!(y).{0}", "b!(y).{1}"};
    const std::vector<std::pair<std::string, Polarity>> heads{
        {"a", Polarity::positive}, {"b", Polarity::negative}, {"a", Polarity::negative}};

    std::vector<LawInstance<S>> out;
    auto add = [&](const std::string& law, const std::function<std::pair<T, T>(Assembler<S>&, std::size_t)>& make) {
        for (std::size_t k = 0; k < per_law && k < 3; ++k) {
            Assembler<S> as;
            auto [lhs, rhs] = make(as, k);
            out.push_back({law + "#" + std::to_string(k), lhs, rhs});
        }
    };
    auto src = [](const std::vector<std::string>& pool, std::size_t k) { return pool[k % pool.size()]; };

    // basic equivalences
    add("par-commutativity", [&](Assembler<S>& as, std::size_t k) {
        T p = as.piece(src(ps, k)), q = as.piece(src(qs, k));
        return std::pair{T::par(p, q), T::par(q, p)};
    });
    add("sum-commutativity", [&](Assembler<S>& as, std::size_t k) {
        T s = as.piece(src(branchings, k)), t = as.piece(src(branchings, k + 1));
        return std::pair{T::choice({s, t}), T::choice({t, s})};
    });
    add("par-associativity", [&](Assembler<S>& as, std::size_t k) {
        T p = as.piece(src(ps, k)), q = as.piece(src(qs, k)), r = as.piece(src(rs, k));
        return std::pair{T::par(T::par(p, q), r), T::par(p, T::par(q, r))};
    });
    add("sum-associativity", [&](Assembler<S>& as, std::size_t k) {
        T s = as.piece(src(branchings, k)), t = as.piece(src(branchings, k + 1)), u = as.piece(src(branchings, k + 2));
        return std::pair{T::choice({T::choice({s, t}), u}), T::choice({s, T::choice({t, u})})};
    });
    add("par-neutrality", [&](Assembler<S>& as, std::size_t k) {
        T p = as.piece(src(ps, k));
        return std::pair{T::par(p, T::one()), p};
    });
    add("scope-commutation", [&](Assembler<S>& as, std::size_t k) {
        const std::vector<std::string> bodies2{"new x in new y in (x?(u).y!(v).{1} | x!(w).y?(z).{1})",
                                               "new x in new y in (x?(u).{1} | y!(v).a?(w).{1})",
                                               "new x in new y in (a?(u).x!(v).{1} | y?(w).{1} | x?(z).{1})"};
        T t = as.piece(src(bodies2, k));
        const auto* outer = t.template as<NewNode<S>>();
        const auto* inner = outer->body.template as<NewNode<S>>();
        return std::pair{t, T::hide(inner->name, T::hide(outer->name, inner->body))};
    });
    add("scope-extrusion", [&](Assembler<S>& as, std::size_t k) {
        T p = as.piece(src(ps, k));
        const std::vector<std::string> hidden{"new h in (h?(x).a!(y).{1} | h!(z).{1})",
                                              "new h in (h!(x).{1} | b?(y).{1})", "new h in h?(x).{1}"};
        T nq = as.piece(src(hidden, k));
        const auto* n = nq.template as<NewNode<S>>();
        return std::pair{T::hide(n->name, T::par(p, n->body)), T::par(p, nq)};
    });
    add("scope-neutrality", [&](Assembler<S>& as, std::size_t k) {
        const std::vector<std::string> scalars{lam, "{1}", "{0}"};
        T s = as.piece(src(scalars, k));
        return std::pair{T::hide(free_name("h"), s), s};
    });
    add("inaction", [&](Assembler<S>& as, std::size_t k) {
        const std::vector<std::string> hidden{"new u in u?(x).a!(y).{1}", "new u in u!(x).{0}",
                                              "new u in u?(x).(x!(y).{1} | b?(z).{1})"};
        return std::pair{as.piece(src(hidden, k)), T::one()};
    });
    add("non-interference", [&](Assembler<S>& as, std::size_t k) {
        const std::vector<std::pair<std::string, std::string>> pairs{
            {"new u in (u?(x).x!(z).{1} | u!(y).(y?(w).{1} | a!(v).{1}))",
             "new u, x in (x!(z).{1} | (x?(w).{1} | a!(v).{1}))"},
            {"new u in (u!(x).a?(z).{1} | u?(y).b!(w).{1})", "new u, x in (a?(z).{1} | b!(w).{1})"},
            {"new u in (u?(x).{" + S::format(l1) + "} | u!(y).y?(z).{1})", "new u, x in ({" + S::format(l1) + "} | x?(z).{1})"}};
        const auto& [l, r] = pairs[k % pairs.size()];
        return std::pair{as.piece(l), as.piece(r)};
    });

    // module laws
    add("oplus-commutativity", [&](Assembler<S>& as, std::size_t k) {
        T p = as.piece(src(ps, k)), q = as.piece(src(qs, k));
        T p2 = as.copy(p), q2 = as.copy(q);
        return std::pair{as.oplus(p, q), as.oplus(q2, p2)};
    });
    add("oplus-associativity", [&](Assembler<S>& as, std::size_t k) {
        T p = as.piece(src(ps, k)), q = as.piece(src(qs, k)), r = as.piece(src(rs, k));
        T lhs = as.oplus(as.oplus(p, q), r);
        T rhs = as.oplus(as.copy(p), as.oplus(as.copy(q), as.copy(r)));
        return std::pair{lhs, rhs};
    });
    add("oplus-zero", [&](Assembler<S>& as, std::size_t k) {
        T p = as.piece(src(ps, k));
        return std::pair{as.oplus(p, T::zero()), as.copy(p)};
    });
    add("scale-zero", [&](Assembler<S>& as, std::size_t k) {
        return std::pair{scale<S>(S::zero(), as.piece(src(ps, k))), T::zero()};
    });
    add("scale-one", [&](Assembler<S>& as, std::size_t k) {
        T p = as.piece(src(ps, k));
        return std::pair{scale<S>(S::one(), p), p};
    });
    add("scale-associativity", [&](Assembler<S>& as, std::size_t k) {
        T p = as.piece(src(qs, k));
        return std::pair{scale<S>(S::mul(l1, l2), p), scale<S>(l1, scale<S>(l2, p))};
    });
    add("scale-distributivity", [&](Assembler<S>& as, std::size_t k) {
        T p = as.piece(src(ps, k));
        return std::pair{scale<S>(S::add(l1, l2), p), as.oplus(scale<S>(l1, as.copy(p)), scale<S>(l2, as.copy(p)))};
    });
    add("scale-oplus", [&](Assembler<S>& as, std::size_t k) {
        T p = as.piece(src(ps, k)), q = as.piece(src(rs, k));
        return std::pair{scale<S>(l1, as.oplus(p, q)), as.oplus(scale<S>(l1, as.copy(p)), scale<S>(l1, as.copy(q)))};
    });
    add("par-oplus", [&](Assembler<S>& as, std::size_t k) {
        T p = as.piece(src(qs, k)), q = as.piece(src(ps, k)), r = as.piece(src(rs, k));
        T lhs = T::par(p, as.oplus(q, r));
        T rhs = as.oplus(T::par(as.copy(p), as.copy(q)), T::par(as.copy(p), as.copy(r)));
        return std::pair{lhs, rhs};
    });
    add("par-scale", [&](Assembler<S>& as, std::size_t k) {
        T p = as.piece(src(ps, k)), q = as.piece(src(qs, k));
        return std::pair{T::par(p, scale<S>(l1, q)), scale<S>(l1, T::par(p, q))};
    });
    add("hide-oplus", [&](Assembler<S>& as, std::size_t k) {
        const std::vector<std::pair<std::string, std::string>> pieces{
            {"h?(x).{1} | a!(y).{1}", "h!(x).{1}"}, {"h?(x).x!(y).{1}", "h!(z).z?(w).{1} | b?(v).{1}"},
            {"h!(x).{1} + a?(y).{1}", "h?(x).{1}"}};
        const auto& [ps1, ps2] = pieces[k % pieces.size()];
        const std::string q2 = "(" + ps2 + ") | h!(t).{0}";
        const Name h = free_name("h");
        T p = as.piece(ps1), q = as.piece(q2);
        T lhs = T::hide(h, as.oplus(p, q));
        T rhs = as.oplus(T::hide(h, as.copy(p)), T::hide(free_name("h2"), rename_bases(as.copy(q), {{"h", "h2"}})));
        return std::pair{lhs, rhs};
    });
    add("hide-scale", [&](Assembler<S>& as, std::size_t k) {
        const std::vector<std::string> pieces{"h?(x).{1} | h!(y).a?(z).{1}", "h!(x).{1} | b?(y).{1}", "h?(x).x!(y).{1}"};
        T p = as.piece(src(pieces, k));
        const Name h = free_name("h");
        return std::pair{T::hide(h, scale<S>(l1, p)), scale<S>(l1, T::hide(h, p))};
    });

    // linear actions and inactions
    add("linear-oplus", [&](Assembler<S>& as, std::size_t k) {
        const auto& [subj, pol] = heads[k % heads.size()];
        T p = as.piece(src(bodies, k)), q = as.piece(src(other_bodies, k));
        T lhs = as.linear(free_name(subj), pol, as.oplus(p, q));
        T rhs = as.oplus(as.linear(free_name(subj), pol, as.copy(p)), as.linear(free_name(subj), pol, as.copy(q)));
        return std::pair{lhs, rhs};
    });
    add("linear-scale", [&](Assembler<S>& as, std::size_t k) {
        const auto& [subj, pol] = heads[k % heads.size()];
        T p = as.piece(src(bodies, k));
        T lhs = as.linear(free_name(subj), pol, scale<S>(l1, p));
        T rhs = scale<S>(l1, as.linear(free_name(subj), pol, as.copy(p)));
        return std::pair{lhs, rhs};
    });
    add("linear-hidden", [&](Assembler<S>& as, std::size_t k) {
        const auto pol = k % 2 == 0 ? Polarity::positive : Polarity::negative;
        T p = as.piece(src(bodies, k));
        return std::pair{T::hide(free_name("u"), as.linear(free_name("u"), pol, p)), T::zero()};
    });
    add("inaction-asynchrony", [&](Assembler<S>& as, std::size_t k) {
        const auto& [subj, pol] = heads[k % heads.size()];
        const std::vector<std::string> inactions{"b!(y).{0}", "a?(y).{0}", "c?(y).{0} + b!(z).{0}"};
        T beta = as.piece(src(inactions, k)), p = as.piece(src(bodies, k));
        T lhs = as.linear(free_name(subj), pol, T::par(beta, p));
        T rhs = T::par(as.copy(beta), as.linear(free_name(subj), pol, as.copy(p)));
        return std::pair{lhs, rhs};
    });
    add("inaction-facing", [&](Assembler<S>& as, std::size_t k) {
        const std::vector<std::string> pairs{"a?(x).{0} | a!(y).{0}", "(a?(x).{0} + b!(y).{0}) | b?(z).{0}",
                                             "b!(x).{0} | (a?(y).{0} + b?(z).{0})"};
        return std::pair{as.piece(src(pairs, k)), T::zero()};
    });
    add("inaction-merge", [&](Assembler<S>& as, std::size_t k) {
        const std::vector<std::pair<std::string, std::string>> pairs{
            {"a?(x).{0} | b!(y).{0}", "a?(x).{0} + b!(y).{0}"},
            {"(a?(x).{0} + b?(y).{0}) | a?(z).{0}", "a?(x).{0} + b?(y).{0} + a?(z).{0}"},
            {"a!(x).{0} | b!(y).{0}", "b!(y).{0} + a!(x).{0}"}};
        const auto& [l, r] = pairs[k % pairs.size()];
        return std::pair{as.piece(l), as.piece(r)};
    });
    add("inaction-idempotence", [&](Assembler<S>& as, std::size_t k) {
        const std::vector<std::pair<std::string, std::string>> pairs{
            {"a?(x).{0} + a?(y).{0}", "a?(x).{0}"}, {"b!(x).{0} + b!(y).{0}", "b!(x).{0}"},
            {"a!(x).{0} + a!(y).{0} | b?(z).{1}", "a!(x).{0} | b?(z).{1}"}};
        const auto& [l, r] = pairs[k % pairs.size()];
        return std::pair{as.piece(l), as.piece(r)};
    });
    add("affine-decomposition", [&](Assembler<S>& as, std::size_t k) {
        const auto& [s1, p1] = heads[k % heads.size()];
        const auto& [s2, p2] = heads[(k + 1) % heads.size()];
        T b1 = as.piece(src(bodies, k)), b2 = as.piece(src(other_bodies, k + 1));
        T lhs = T::choice({as.prefix(free_name(s1), p1, b1), as.prefix(free_name(s2), p2, b2)});
        T lin = as.oplus(as.linear(free_name(s1), p1, as.copy(b1)), as.linear(free_name(s2), p2, as.copy(b2)));
        std::vector<T> zeros;
        for (const auto* a : lhs.branches())
            zeros.push_back(T::action(as.fresh().location(), a->subject, a->polarity, T::zero()));
        return std::pair{lhs, as.oplus(lin, T::choice(zeros))};
    });
    return out;
}

struct RandomTermOptions {
    std::size_t max_actions = 4;
    std::vector<std::string> names{"a", "b"};
    bool inactions = true;
};

/// Random simple terms over a fixed alphabet: 1, inaction sets, linear actions (whose
/// objects become usable channels), parallel compositions and hidings.
template <Semiring S>
class SimpleTermGenerator {
public:
    SimpleTermGenerator(std::mt19937_64& rng, RandomTermOptions options) : rng_(rng), options_(std::move(options)) {}

    Term<S> operator()() {
        FreshSupply fresh(1, {});
        const std::size_t half = options_.max_actions / 2;
        std::size_t budget = std::max<std::size_t>(1, half + pick(options_.max_actions - half + 1));
        std::vector<Name> scope;
        for (const auto& n : options_.names) scope.push_back(free_name(n));
        hidden_ = 0;
        return gen(fresh, budget, scope, 0);
    }

private:
    std::size_t pick(std::size_t n) { return n == 0 ? 0 : std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
    Polarity polarity() { return pick(2) ? Polarity::negative : Polarity::positive; }

    Term<S> gen(FreshSupply& fresh, std::size_t& budget, std::vector<Name>& scope, int depth) {
        using T = Term<S>;
        if (budget == 0) return T::one();
        const std::size_t roll = pick(depth > 3 ? 4 : 10);
        if (roll == 0) return T::one();
        if (roll < 3 && options_.inactions) {  // inaction set
            const std::size_t k = std::min<std::size_t>(budget, 1 + pick(2));
            budget -= k;
            std::vector<T> actions;
            for (std::size_t i = 0; i < k; ++i)
                actions.push_back(T::action(fresh.location(), scope[pick(scope.size())], polarity(), T::zero()));
            return T::choice(actions);
        }
        if (roll < 6) {  // linear action
            --budget;
            const Location loc = fresh.location();
            const Name subject = scope[pick(scope.size())];
            const Polarity pol = polarity();
            const Name object = subject.child(pol, loc);
            scope.push_back(object);
            T body = gen(fresh, budget, scope, depth + 1);
            scope.pop_back();
            return linear_action(fresh, Prefix{loc, subject, pol, object}, body);
        }
        if (roll < 9) {  // parallel
            std::size_t left_budget = pick(budget + 1);
            std::size_t right_budget = budget - left_budget;
            T l = gen(fresh, left_budget, scope, depth + 1);
            T r = gen(fresh, right_budget, scope, depth + 1);
            budget = left_budget + right_budget;
            return T::par(l, r);
        }
        const Name h = free_name("h" + std::to_string(++hidden_));
        scope.push_back(h);
        T body = gen(fresh, budget, scope, depth + 1);
        scope.pop_back();
        return T::hide(h, body);
    }

    std::mt19937_64& rng_;
    RandomTermOptions options_;
    std::size_t hidden_ = 0;
};

/// Flips the polarity of every action on a non-reserved channel, renaming objects to match.
template <Semiring S>
Term<S> mirror(const Term<S>& t) {
    auto flip_name = [](const Name& n) {
        if (is_reserved(n)) return n;
        Name out{n.base, {}};
        for (const auto& [p, loc] : n.path) out.path.emplace_back(dual(p), loc);
        return out;
    };
    return std::visit(
        [&](const auto& n) -> Term<S> {
            using N = std::decay_t<decltype(n)>;
            if constexpr (std::same_as<N, ScalarNode<S>>) {
                return t;
            } else if constexpr (std::same_as<N, ActionNode<S>>) {
                const Polarity p = is_reserved(n.subject) ? n.polarity : dual(n.polarity);
                return Term<S>::action(n.location, flip_name(n.subject), p, flip_name(n.object), mirror(n.continuation));
            } else if constexpr (std::same_as<N, ChoiceNode<S>>) {
                std::vector<Term<S>> bs;
                for (const auto& b : n.branches) bs.push_back(mirror(b));
                return Term<S>::choice(bs);
            } else if constexpr (std::same_as<N, ParNode<S>>) {
                return Term<S>::par(mirror(n.left), mirror(n.right));
            } else {
                return Term<S>::hide(n.name, mirror(n.body));
            }
        },
        t.node());
}

/// Number of actions in source terms, counting each linear action once.
template <Semiring S>
std::size_t source_actions(const Term<S>& t) {
    if (auto l = match_linear(t)) return 1 + source_actions(l->body);
    return std::visit(
        [&](const auto& n) -> std::size_t {
            using N = std::decay_t<decltype(n)>;
            if constexpr (std::same_as<N, ActionNode<S>>) {
                return 1 + source_actions(n.continuation);
            } else if constexpr (std::same_as<N, ChoiceNode<S>>) {
                std::size_t k = 0;
                for (const auto& b : n.branches) k += source_actions(b);
                return k;
            } else if constexpr (std::same_as<N, ParNode<S>>) {
                return source_actions(n.left) + source_actions(n.right);
            } else if constexpr (std::same_as<N, NewNode<S>>) {
                return source_actions(n.body);
            } else {
                return 0;
            }
        },
        t.node());
}

}  // namespace ordalg::pi
