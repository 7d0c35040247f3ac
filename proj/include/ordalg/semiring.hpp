#pragma once

#include <gmpxx.h>

#include <concepts>
#include <cstdint>
#include <string>
#include <string_view>

#include "ordalg/errors.hpp"

namespace ordalg {

enum class SemiringName { nat, integer, rational, boolean, maymust };
enum class TestingMode { may, must };

struct SemiringProperties {
    bool idempotent = false;
    bool ring = false;
    bool regular = false;
    bool rational = false;
};

/// Runtime summary of a semiring: which instance it is and which decision routes it admits.
struct SemiringDescriptor {
    SemiringName name;
    TestingMode mode = TestingMode::may;
    SemiringProperties properties;

    bool operator==(const SemiringDescriptor&) const = default;
};

template <class S>
concept Semiring = requires(const typename S::value_type& a, const typename S::value_type& b,
                            std::string_view text, std::uint64_t n) {
    typename S::value_type;
    { S::name } -> std::convertible_to<SemiringName>;
    { S::properties } -> std::convertible_to<SemiringProperties>;
    { S::zero() } -> std::same_as<typename S::value_type>;
    { S::one() } -> std::same_as<typename S::value_type>;
    { S::add(a, b) } -> std::same_as<typename S::value_type>;
    { S::mul(a, b) } -> std::same_as<typename S::value_type>;
    { S::equal(a, b) } -> std::same_as<bool>;
    { S::from_count(n) } -> std::same_as<typename S::value_type>;
    { S::format(a) } -> std::same_as<std::string>;
    { S::parse(text) } -> std::same_as<typename S::value_type>;
};

template <class S>
concept Ring = Semiring<S> && requires(const typename S::value_type& a) {
    { S::negate(a) } -> std::same_as<typename S::value_type>;
};

namespace detail {

inline bool is_decimal(std::string_view text, bool allow_sign) {
    if (allow_sign && !text.empty() && text.front() == '-') text.remove_prefix(1);
    if (text.empty()) return false;
    for (char c : text)
        if (c < '0' || c > '9') return false;
    return true;
}

[[noreturn]] inline void bad_literal(std::string_view text, std::string_view semiring) {
    throw ParseError("invalid " + std::string(semiring) + " literal '" + std::string(text) + "'", 1,
                     1);
}

}  // namespace detail

/// Non-negative integers.
struct Natural {
    using value_type = mpz_class;
    static constexpr SemiringName name = SemiringName::nat;
    static constexpr SemiringProperties properties{.regular = true};

    static value_type zero() { return 0; }
    static value_type one() { return 1; }
    static value_type add(const value_type& a, const value_type& b) { return a + b; }
    static value_type mul(const value_type& a, const value_type& b) { return a * b; }
    static bool equal(const value_type& a, const value_type& b) { return a == b; }
    static value_type from_count(std::uint64_t n) { return mpz_class(static_cast<unsigned long>(n)); }
    static std::string format(const value_type& a) { return a.get_str(); }
    static value_type parse(std::string_view text) {
        if (!detail::is_decimal(text, true)) detail::bad_literal(text, "nat");
        value_type v{std::string(text)};
        if (v < 0) detail::bad_literal(text, "nat");
        return v;
    }
};

/// Integers.
struct Integer {
    using value_type = mpz_class;
    static constexpr SemiringName name = SemiringName::integer;
    static constexpr SemiringProperties properties{.ring = true, .regular = true};

    static value_type zero() { return 0; }
    static value_type one() { return 1; }
    static value_type add(const value_type& a, const value_type& b) { return a + b; }
    static value_type mul(const value_type& a, const value_type& b) { return a * b; }
    static value_type negate(const value_type& a) { return -a; }
    static bool equal(const value_type& a, const value_type& b) { return a == b; }
    static value_type from_count(std::uint64_t n) { return mpz_class(static_cast<unsigned long>(n)); }
    static std::string format(const value_type& a) { return a.get_str(); }
    static value_type parse(std::string_view text) {
        if (!detail::is_decimal(text, true)) detail::bad_literal(text, "int");
        return value_type(std::string(text));
    }
};

/// Exact fractions, always kept in lowest terms with a positive denominator.
struct Rational {
    using value_type = mpq_class;
    static constexpr SemiringName name = SemiringName::rational;
    static constexpr SemiringProperties properties{.ring = true, .regular = true, .rational = true};

    static value_type zero() { return 0; }
    static value_type one() { return 1; }
    static value_type add(const value_type& a, const value_type& b) { return a + b; }
    static value_type mul(const value_type& a, const value_type& b) { return a * b; }
    static value_type negate(const value_type& a) { return -a; }
    static bool equal(const value_type& a, const value_type& b) { return a == b; }
    static value_type from_count(std::uint64_t n) { return mpq_class(static_cast<unsigned long>(n)); }
    static std::string format(const value_type& a) { return a.get_str(); }
    static value_type parse(std::string_view text) {
        const auto slash = text.find('/');
        const auto num = text.substr(0, slash);
        if (!detail::is_decimal(num, true)) detail::bad_literal(text, "rat");
        if (slash == std::string_view::npos) return value_type(mpz_class(std::string(num)));
        const auto den = text.substr(slash + 1);
        if (!detail::is_decimal(den, false)) detail::bad_literal(text, "rat");
        mpz_class d{std::string(den)};
        if (d == 0) detail::bad_literal(text, "rat");
        value_type v(mpz_class(std::string(num)), d);
        v.canonicalize();
        return v;
    }
};

/// Booleans with disjunction as addition.
struct Boolean {
    using value_type = bool;
    static constexpr SemiringName name = SemiringName::boolean;
    static constexpr SemiringProperties properties{.idempotent = true, .regular = true,
                                                   .rational = true};

    static value_type zero() { return false; }
    static value_type one() { return true; }
    static value_type add(value_type a, value_type b) { return a || b; }
    static value_type mul(value_type a, value_type b) { return a && b; }
    static bool equal(value_type a, value_type b) { return a == b; }
    static value_type from_count(std::uint64_t n) { return n > 0; }
    static std::string format(value_type a) { return a ? "1" : "0"; }
    static value_type parse(std::string_view text) {
        if (text == "0") return false;
        if (text == "1") return true;
        detail::bad_literal(text, "bool");
    }
};

/// Three observations: 0 (failure), 1 (success) and w (divergence).
enum class Observation : std::uint8_t { zero, one, omega };

/// May/must testing outcomes; the two modes share multiplication and differ in addition.
template <TestingMode Mode>
struct MayMust {
    using value_type = Observation;
    static constexpr SemiringName name = SemiringName::maymust;
    static constexpr TestingMode mode = Mode;
    static constexpr SemiringProperties properties{.idempotent = true, .regular = true,
                                                   .rational = true};

    static value_type zero() { return Observation::zero; }
    static value_type one() { return Observation::one; }

    static value_type add(value_type a, value_type b) {
        if (a == Observation::zero) return b;
        if (b == Observation::zero) return a;
        if (a == b) return a;
        // one of them is 1 and the other is w
        return Mode == TestingMode::may ? Observation::omega : Observation::one;
    }

    static value_type mul(value_type a, value_type b) {
        if (a == Observation::zero || b == Observation::zero) return Observation::zero;
        if (a == Observation::omega || b == Observation::omega) return Observation::omega;
        return Observation::one;
    }

    static bool equal(value_type a, value_type b) { return a == b; }
    static value_type from_count(std::uint64_t n) {
        return n > 0 ? Observation::one : Observation::zero;
    }
    static std::string format(value_type a) {
        switch (a) {
            case Observation::zero: return "0";
            case Observation::one: return "1";
            case Observation::omega: return "w";
        }
        return "?";
    }
    static value_type parse(std::string_view text) {
        if (text == "0") return Observation::zero;
        if (text == "1") return Observation::one;
        if (text == "w") return Observation::omega;
        detail::bad_literal(text, "maymust");
    }
};

using MayTesting = MayMust<TestingMode::may>;
using MustTesting = MayMust<TestingMode::must>;

inline std::string to_string(SemiringName name) {
    switch (name) {
        case SemiringName::nat: return "nat";
        case SemiringName::integer: return "int";
        case SemiringName::rational: return "rat";
        case SemiringName::boolean: return "bool";
        case SemiringName::maymust: return "maymust";
    }
    return "?";
}

/// Builds the descriptor of S, rejecting the degenerate semiring where 0 = 1
/// and flag combinations that cannot occur.
template <Semiring S>
SemiringDescriptor describe() {
    if (S::equal(S::zero(), S::one()))
        throw UsageError("degenerate semiring: zero equals one");
    constexpr SemiringProperties p = S::properties;
    if (p.rational && !p.regular) throw UsageError("a rational semiring must be regular");
    if (p.idempotent && p.ring) throw UsageError("an idempotent ring is degenerate");
    SemiringDescriptor d{S::name, TestingMode::may, p};
    if constexpr (requires { S::mode; }) d.mode = S::mode;
    return d;
}

template <Semiring S>
inline constexpr bool embeds_in_rationals =
    std::same_as<S, Natural> || std::same_as<S, Integer> || std::same_as<S, Rational>;

/// Ring embedding of naturals and integers (and rationals, trivially) into the rationals.
template <Semiring S>
    requires embeds_in_rationals<S>
mpq_class embed_to_rat(const typename S::value_type& a) {
    return mpq_class(a);
}

template <Semiring S>
bool is_zero(const typename S::value_type& a) {
    return S::equal(a, S::zero());
}

}  // namespace ordalg
