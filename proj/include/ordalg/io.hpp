#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ordalg/algebra.hpp"
#include "ordalg/arena.hpp"
#include "ordalg/errors.hpp"
#include "ordalg/play.hpp"

namespace ordalg::io {

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

/// Splits on `sep` at parenthesis depth zero.
inline std::vector<std::string_view> split_top(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    int depth = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '(') ++depth;
        if (s[i] == ')') --depth;
        if (depth < 0) throw UsageError("unbalanced parentheses in '" + std::string(s) + "'");
        if (s[i] == sep && depth == 0) {
            out.push_back(trim(s.substr(start, i - start)));
            start = i + 1;
        }
    }
    if (depth != 0) throw UsageError("unbalanced parentheses in '" + std::string(s) + "'");
    out.push_back(trim(s.substr(start)));
    return out;
}

inline std::string strip_comment(std::string_view line) {
    const auto hash = line.find('#');
    return std::string(trim(hash == std::string_view::npos ? line : line.substr(0, hash)));
}

}  // namespace detail

/// Reads the descriptor format written by Arena::describe, for example
/// `sum(X=static(a,b),Y=labeled(c))` or `fin(2,sharp(static(a)))`. Sum components get
/// ids 0, 1, ... in order.
inline Arena parse_arena(std::string_view text) {
    text = detail::trim(text);
    const auto open = text.find('(');
    if (open == std::string_view::npos || text.back() != ')')
        throw UsageError("expected an arena descriptor like static(a,b), got '" + std::string(text) + "'");
    const std::string head(detail::trim(text.substr(0, open)));
    const auto args = detail::split_top(text.substr(open + 1, text.size() - open - 2), ',');
    auto symbols = [&] {
        std::vector<std::string> out;
        for (auto a : args)
            if (!a.empty()) out.emplace_back(a);
        return out;
    };
    auto arity = [&](std::size_t n) {
        if (args.size() != n) throw UsageError(head + " takes " + std::to_string(n) + " argument(s)");
    };
    if (head == "static") return Arena::static_web(symbols());
    if (head == "labeled") return Arena::labeled(symbols());
    if (head == "pi") return Arena::pi(symbols());
    if (head == "sharp") {
        arity(1);
        return Arena::sharp(parse_arena(args[0]));
    }
    if (head == "view") {
        arity(1);
        return Arena::static_view(parse_arena(args[0]));
    }
    if (head == "indexing") {
        arity(2);
        return Arena::indexing(parse_arena(args[0]), parse_arena(args[1]));
    }
    if (head == "fin") {
        arity(2);
        return Arena::fin_index(std::stoull(std::string(args[0])), parse_arena(args[1]));
    }
    if (head == "sum") {
        std::vector<Arena::Component> parts;
        ComponentId id = 0;
        for (auto a : args) {
            const auto eq = a.find('=');
            if (eq == std::string_view::npos) throw UsageError("sum components are written NAME=ARENA");
            parts.emplace_back(id++, std::string(detail::trim(a.substr(0, eq))), parse_arena(a.substr(eq + 1)));
        }
        return Arena::sum(std::move(parts));
    }
    throw UsageError("unknown arena kind '" + head + "'");
}

/// Reads `{a<b<c, d, e<=f}`: comma-separated chains whose links generate the preorder.
inline Play parse_play(const Arena& arena, std::string_view text) {
    text = detail::trim(text);
    if (text.size() < 2 || text.front() != '{' || text.back() != '}')
        throw UsageError("a play is written in braces, like {a<b, c}");
    const auto body = detail::trim(text.substr(1, text.size() - 2));
    std::vector<Event> events;
    std::vector<EventPair> pairs;
    if (body.empty()) return Play();
    for (auto chain : detail::split_top(body, ',')) {
        std::vector<Event> links;
        std::size_t start = 0;
        for (std::size_t i = 0; i <= chain.size(); ++i) {
            if (i < chain.size() && chain[i] != '<') continue;
            links.push_back(arena.parse_event(detail::trim(chain.substr(start, i - start))));
            if (i + 1 < chain.size() && chain[i + 1] == '=') ++i;
            start = i + 1;
        }
        for (std::size_t k = 0; k < links.size(); ++k) {
            events.push_back(links[k]);
            if (k) pairs.emplace_back(links[k - 1], links[k]);
        }
    }
    return make_play(std::move(events), pairs);
}

inline std::string format_play(const Arena& arena, const Play& r) {
    return to_text(r, [&](const Event& e) { return arena.format(e); });
}

inline std::string play_dot(const Arena& arena, const Play& r, const std::string& name = "play") {
    return to_dot(r, [&](const Event& e) { return arena.format(e); }, name);
}

/// Terms `COEF {play}` or `{play}` (coefficient 1), one per line or separated by ';'.
template <Semiring S>
Vector<S> parse_vector(const Arena& arena, std::string_view text) {
    Vector<S> out(arena);
    std::string cleaned;
    for (std::size_t start = 0; start <= text.size();) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        cleaned += detail::strip_comment(text.substr(start, end - start)) + ";";
        start = end + 1;
    }
    std::size_t start = 0;
    for (std::size_t i = 0; i < cleaned.size(); ++i) {
        if (cleaned[i] != ';') continue;
        const auto item = detail::trim(std::string_view(cleaned).substr(start, i - start));
        start = i + 1;
        if (item.empty()) continue;
        const auto brace = item.find('{');
        if (brace == std::string_view::npos) throw UsageError("missing play in '" + std::string(item) + "'");
        const auto coef = detail::trim(item.substr(0, brace));
        out.add(parse_play(arena, item.substr(brace)), coef.empty() ? S::one() : S::parse(coef));
    }
    return out;
}

/// A vector file: a line `arena DESCRIPTOR` followed by vector terms.
template <Semiring S>
Vector<S> parse_vector_file(std::string_view text) {
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        const std::string line = detail::strip_comment(text.substr(start, end - start));
        start = end + 1;
        if (line.empty()) continue;
        if (!line.starts_with("arena")) throw UsageError("a vector file starts with 'arena DESCRIPTOR'");
        const Arena arena = parse_arena(std::string_view(line).substr(5));
        return parse_vector<S>(arena, start <= text.size() ? text.substr(start) : std::string_view{});
    }
    throw UsageError("empty vector file");
}

template <Semiring S>
std::string format_vector(const Vector<S>& u) {
    if (u.is_zero()) return "0\n";
    std::string out;
    for (const auto& [r, c] : u.terms()) out += S::format(c) + " " + format_play(u.arena(), r) + "\n";
    return out;
}

inline nlohmann::json play_json(const Arena& arena, const Play& r) {
    nlohmann::json events = nlohmann::json::array();
    for (const auto& e : r.support()) events.push_back(arena.format(e));
    nlohmann::json order = nlohmann::json::array();
    for (std::size_t i = 0; i < r.size(); ++i)
        for (std::size_t j = 0; j < r.size(); ++j)
            if (i != j && r.leq(i, j)) order.push_back({i, j});
    return {{"play", format_play(arena, r)}, {"events", events}, {"order", order}};
}

/// One JSON object per term, mirroring the text format.
template <Semiring S>
std::string format_vector_jsonl(const Vector<S>& u) {
    std::string out;
    for (const auto& [r, c] : u.terms()) {
        auto j = play_json(u.arena(), r);
        j["coefficient"] = S::format(c);
        j["arena"] = u.arena().describe();
        out += j.dump() + "\n";
    }
    return out;
}

}  // namespace ordalg::io
