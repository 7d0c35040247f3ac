#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ordalg/errors.hpp"
#include "ordalg/event.hpp"

namespace ordalg {

using ComponentId = std::uint32_t;

/// Intensional description of a web of events together with its permutation group.
///
/// Every event is a path of segments (see event.hpp). The group of each arena kind acts
/// hereditarily on these paths: at any node of the prefix tree, children reached through
/// permutable steps of one kind may be renamed among themselves, and the renaming carries
/// their whole subtree along. Fixed steps are never moved. This single scheme covers all
/// kinds below, so group computations never need to know which kind they run on.
///
/// Encodings:
///   static      atom(i)
///   labeled     label(l) index(n)*
///   pi          name(u) pol(n1)* ... pol(nk)*     (a final bottom/top step is fixed)
///   sum         component(c) <component event>
///   indexing    <index event> separator <body event>
///   sharp       copy(k)* separator <body event>
///   fin_index   copy_class(i) separator <body event>
/// where * marks permutable steps. A static view keeps the web of its base but has the
/// trivial group.
class Arena {
public:
    enum class Kind { static_web, labeled, pi, sum, indexing, sharp, fin_index, static_view };

private:
    struct Node;
    using NodePtr = std::shared_ptr<const Node>;

public:
    struct Component {
        ComponentId id;
        std::string name;
        NodePtr node;

        Component(ComponentId id_, std::string name_, const Arena& arena_)
            : id(id_), name(std::move(name_)), node(arena_.node_) {}
        Arena arena() const { return Arena(node); }
    };

private:
    struct Node {
        Kind kind;
        std::vector<std::string> symbols{};
        std::vector<Component> components{};
        NodePtr index{};
        NodePtr body{};
        std::size_t count = 0;
    };

public:

    static Arena static_web(std::vector<std::string> atoms) {
        check_symbols(atoms, "atom");
        return Arena(Node{.kind = Kind::static_web, .symbols = std::move(atoms)});
    }

    /// Labels must not end with a digit, since event text appends the occurrence index.
    static Arena labeled(std::vector<std::string> labels) {
        check_symbols(labels, "label");
        for (const auto& l : labels)
            if (std::isdigit(static_cast<unsigned char>(l.back())))
                throw UsageError("label '" + l + "' must not end with a digit");
        return Arena(Node{.kind = Kind::labeled, .symbols = std::move(labels)});
    }

    /// The arena of abstract channels over a finite set of free names (kept sorted).
    static Arena pi(std::vector<std::string> names) {
        std::sort(names.begin(), names.end());
        names.erase(std::unique(names.begin(), names.end()), names.end());
        for (const auto& n : names)
            if (n.empty() || n.find_first_of(".:@") != std::string::npos)
                throw UsageError("invalid channel name '" + n + "'");
        return Arena(Node{.kind = Kind::pi, .symbols = std::move(names)});
    }

    static Arena sum(std::vector<Component> components);

    static Arena indexing(Arena index, Arena body) {
        return Arena(Node{.kind = Kind::indexing, .index = index.node_, .body = body.node_});
    }

    /// Countably many interchangeable copies of the body.
    static Arena sharp(Arena body) {
        return Arena(Node{.kind = Kind::sharp, .body = body.node_});
    }

    /// n distinguished copies of the body.
    static Arena fin_index(std::size_t n, Arena body) {
        return Arena(Node{.kind = Kind::fin_index, .body = body.node_, .count = n});
    }

    static Arena static_view(const Arena& base) {
        if (base.kind() == Kind::static_view) return base;
        return Arena(Node{.kind = Kind::static_view, .body = base.node_});
    }

    Kind kind() const { return node_->kind; }

    /// True when no event can ever be moved by the group.
    bool has_trivial_group() const {
        switch (kind()) {
            case Kind::static_web:
            case Kind::static_view: return true;
            case Kind::fin_index: return body().has_trivial_group();
            case Kind::indexing: return index().has_trivial_group() && body().has_trivial_group();
            case Kind::sum:
                return std::all_of(node_->components.begin(), node_->components.end(),
                                   [](const Component& c) { return c.arena().has_trivial_group(); });
            default: return false;
        }
    }

    const std::vector<std::string>& symbols() const { return node_->symbols; }
    const std::vector<Component>& components() const { return node_->components; }
    Arena body() const { return Arena(node_->body); }
    Arena index() const { return Arena(node_->index); }
    std::size_t copies() const { return node_->count; }

    const Component& component(ComponentId id) const;
    bool has_component(ComponentId id) const;

    // --- event builders -------------------------------------------------------------

    Event atom(std::string_view name) const {
        expect(Kind::static_web);
        return Event{{SegmentKind::atom, symbol_index(name), false}};
    }

    Event atom(std::size_t i) const {
        expect(Kind::static_web);
        if (i >= symbols().size()) throw UsageError("atom index out of range");
        return Event{{SegmentKind::atom, static_cast<std::int64_t>(i), false}};
    }

    Event occurrence(std::string_view label, std::int64_t index) const {
        expect(Kind::labeled);
        if (index < 0) throw UsageError("occurrence indices are natural numbers");
        return Event{{SegmentKind::label, symbol_index(label), false},
                     {SegmentKind::index, index, true}};
    }

    /// Root segment of the abstract channel of a free name.
    Segment channel_root(std::string_view name) const {
        expect(Kind::pi);
        return {SegmentKind::name, symbol_index(name), false};
    }

    Event inject(ComponentId id, const Event& inner) const {
        expect(Kind::sum);
        component(id);
        return inner.under({SegmentKind::component, static_cast<std::int64_t>(id), false});
    }

    Event pair(const Event& index_event, const Event& body_event) const {
        expect(Kind::indexing);
        return index_event.then({SegmentKind::separator, 0, false}).then(body_event);
    }

    Event in_copy(std::int64_t copy, const Event& body_event) const {
        expect(Kind::sharp);
        if (copy < 0) throw UsageError("copy indices are natural numbers");
        return Event{{SegmentKind::copy, copy, true}, {SegmentKind::separator, 0, false}}.then(
            body_event);
    }

    Event in_class(std::size_t cls, const Event& body_event) const {
        expect(Kind::fin_index);
        if (cls >= copies()) throw UsageError("copy class out of range");
        return Event{{SegmentKind::copy_class, static_cast<std::int64_t>(cls), false},
                     {SegmentKind::separator, 0, false}}
            .then(body_event);
    }

    // --- membership and text ----------------------------------------------------------

    bool contains(const Event& e) const {
        auto end = parse_at(*node_, e.segments(), 0);
        return end && *end == e.length();
    }

    void require(const Event& e) const {
        if (!contains(e)) throw UsageError("event " + raw_text(e) + " is not in the arena " + describe());
    }

    std::string format(const Event& e) const {
        std::size_t pos = 0;
        std::string out = format_at(*node_, e.segments(), pos);
        if (pos != e.length()) throw UsageError("event " + raw_text(e) + " is not in the arena");
        return out;
    }

    Event parse_event(std::string_view text) const {
        Event e = parse_text(*node_, text);
        require(e);
        return e;
    }

    std::string describe() const;

    bool operator==(const Arena& other) const {
        return node_ == other.node_ || equal_nodes(*node_, *other.node_);
    }

private:
    explicit Arena(NodePtr node) : node_(std::move(node)) {}
    explicit Arena(Node node);

    static void check_symbols(const std::vector<std::string>& symbols, const char* what) {
        for (const auto& s : symbols)
            if (s.empty() || s.find_first_of(".:@,<{} ;") != std::string::npos)
                throw UsageError(std::string("invalid ") + what + " '" + s + "'");
        auto sorted = symbols;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw UsageError(std::string("duplicate ") + what);
    }

    void expect(Kind k) const {
        if (kind() != k) throw UsageError("operation not available on arena " + describe());
    }

    std::int64_t symbol_index(std::string_view name) const {
        const auto& s = symbols();
        auto it = std::find(s.begin(), s.end(), name);
        if (it == s.end()) throw UsageError("unknown symbol '" + std::string(name) + "' in " + describe());
        return it - s.begin();
    }

    static std::optional<std::size_t> parse_at(const Node& node, std::span<const Segment> s,
                                               std::size_t pos);
    static std::string format_at(const Node& node, std::span<const Segment> s, std::size_t& pos);
    static Event parse_text(const Node& node, std::string_view text);
    static bool equal_nodes(const Node& a, const Node& b);
    static std::string describe_node(const Node& node);

    NodePtr node_;
};

inline Arena::Arena(Node node) : node_(std::make_shared<const Node>(std::move(node))) {}

inline Arena Arena::sum(std::vector<Component> components) {
    std::sort(components.begin(), components.end(),
              [](const Component& a, const Component& b) { return a.id < b.id; });
    for (std::size_t i = 0; i < components.size(); ++i) {
        if (i > 0 && components[i].id == components[i - 1].id)
            throw UsageError("sum components must have distinct ids");
        const auto& n = components[i].name;
        if (n.empty() || n.find_first_of(".:@,<{} ;") != std::string::npos)
            throw UsageError("invalid component name '" + n + "'");
        if (components[i].arena().kind() == Kind::static_view)
            throw UsageError("static views cannot be sum components");
        for (std::size_t j = 0; j < i; ++j)
            if (components[j].name == n) throw UsageError("duplicate component name '" + n + "'");
    }
    return Arena(Node{.kind = Kind::sum, .components = std::move(components)});
}

inline const Arena::Component& Arena::component(ComponentId id) const {
    expect(Kind::sum);
    for (const auto& c : components())
        if (c.id == id) return c;
    throw UsageError("no component " + std::to_string(id) + " in " + describe());
}

inline bool Arena::has_component(ComponentId id) const {
    if (kind() != Kind::sum) return false;
    return std::any_of(components().begin(), components().end(),
                       [id](const Component& c) { return c.id == id; });
}

inline std::optional<std::size_t> Arena::parse_at(const Node& node, std::span<const Segment> s,
                                                  std::size_t pos) {
    auto at = [&](std::size_t p, SegmentKind k, bool permutable) -> const Segment* {
        if (p >= s.size() || s[p].kind != k || s[p].permutable != permutable) return nullptr;
        return &s[p];
    };
    switch (node.kind) {
        case Kind::static_web: {
            auto seg = at(pos, SegmentKind::atom, false);
            if (!seg || seg->value < 0 || seg->value >= std::ssize(node.symbols)) return std::nullopt;
            return pos + 1;
        }
        case Kind::labeled: {
            auto l = at(pos, SegmentKind::label, false);
            auto i = at(pos + 1, SegmentKind::index, true);
            if (!l || !i || l->value < 0 || l->value >= std::ssize(node.symbols) || i->value < 0)
                return std::nullopt;
            return pos + 2;
        }
        case Kind::pi: {
            auto root = at(pos, SegmentKind::name, false);
            if (!root || root->value < 0 || root->value >= std::ssize(node.symbols)) return std::nullopt;
            std::size_t p = pos + 1;
            std::size_t steps = 0;
            bool closed = false;
            while (p < s.size() &&
                   (s[p].kind == SegmentKind::positive || s[p].kind == SegmentKind::negative)) {
                if (closed) return std::nullopt;
                const auto v = s[p].value;
                if (v == inaction_bottom || v == inaction_top) {
                    if (s[p].permutable) return std::nullopt;
                    closed = true;
                } else if (v < 0 || !s[p].permutable) {
                    return std::nullopt;
                }
                ++p;
                ++steps;
            }
            if (steps == 0) return std::nullopt;
            return p;
        }
        case Kind::sum: {
            auto c = at(pos, SegmentKind::component, false);
            if (!c) return std::nullopt;
            for (const auto& comp : node.components)
                if (static_cast<std::int64_t>(comp.id) == c->value)
                    return parse_at(*comp.node, s, pos + 1);
            return std::nullopt;
        }
        case Kind::indexing: {
            auto p = parse_at(*node.index, s, pos);
            if (!p || !at(*p, SegmentKind::separator, false)) return std::nullopt;
            return parse_at(*node.body, s, *p + 1);
        }
        case Kind::sharp: {
            auto c = at(pos, SegmentKind::copy, true);
            if (!c || c->value < 0 || !at(pos + 1, SegmentKind::separator, false)) return std::nullopt;
            return parse_at(*node.body, s, pos + 2);
        }
        case Kind::fin_index: {
            auto c = at(pos, SegmentKind::copy_class, false);
            if (!c || c->value < 0 || c->value >= static_cast<std::int64_t>(node.count) ||
                !at(pos + 1, SegmentKind::separator, false))
                return std::nullopt;
            return parse_at(*node.body, s, pos + 2);
        }
        case Kind::static_view: return parse_at(*node.body, s, pos);
    }
    return std::nullopt;
}

inline std::string Arena::format_at(const Node& node, std::span<const Segment> s, std::size_t& pos) {
    auto fail = [] [[noreturn]] () -> std::string { throw UsageError("malformed event"); };
    auto step = [&]() -> const Segment& {
        if (pos >= s.size()) fail();
        return s[pos++];
    };
    switch (node.kind) {
        case Kind::static_web: return node.symbols.at(static_cast<std::size_t>(step().value));
        case Kind::labeled: {
            std::string out = node.symbols.at(static_cast<std::size_t>(step().value));
            return out + std::to_string(step().value);
        }
        case Kind::pi: {
            std::string out = node.symbols.at(static_cast<std::size_t>(step().value));
            while (pos < s.size() &&
                   (s[pos].kind == SegmentKind::positive || s[pos].kind == SegmentKind::negative)) {
                const auto& seg = s[pos++];
                out += seg.kind == SegmentKind::positive ? ".+" : ".-";
                if (seg.value == inaction_bottom)
                    out += "bot";
                else if (seg.value == inaction_top)
                    out += "top";
                else
                    out += std::to_string(seg.value);
            }
            return out;
        }
        case Kind::sum: {
            const auto id = step().value;
            for (const auto& comp : node.components)
                if (static_cast<std::int64_t>(comp.id) == id)
                    return comp.name + ":" + format_at(*comp.node, s, pos);
            return fail();
        }
        case Kind::indexing: {
            std::string head = format_at(*node.index, s, pos);
            step();
            return head + "@" + format_at(*node.body, s, pos);
        }
        case Kind::sharp:
        case Kind::fin_index: {
            std::string head = std::to_string(step().value);
            step();
            return head + "@" + format_at(*node.body, s, pos);
        }
        case Kind::static_view: return format_at(*node.body, s, pos);
    }
    return fail();
}

inline Event Arena::parse_text(const Node& node, std::string_view text) {
    auto bad = [&] [[noreturn]] () -> Event {
        throw UsageError("cannot read event '" + std::string(text) + "'");
    };
    auto find_symbol = [&](std::string_view name) -> std::int64_t {
        auto it = std::find(node.symbols.begin(), node.symbols.end(), name);
        if (it == node.symbols.end()) bad();
        return it - node.symbols.begin();
    };
    auto number = [&](std::string_view digits) -> std::int64_t {
        if (digits.empty() || digits.size() > 18) bad();
        std::int64_t v = 0;
        for (char c : digits) {
            if (c < '0' || c > '9') bad();
            v = v * 10 + (c - '0');
        }
        return v;
    };
    switch (node.kind) {
        case Kind::static_web: return Event{{SegmentKind::atom, find_symbol(text), false}};
        case Kind::labeled: {
            std::size_t cut = text.size();
            while (cut > 0 && std::isdigit(static_cast<unsigned char>(text[cut - 1]))) --cut;
            if (cut == text.size()) bad();
            return Event{{SegmentKind::label, find_symbol(text.substr(0, cut)), false},
                         {SegmentKind::index, number(text.substr(cut)), true}};
        }
        case Kind::pi: {
            auto dot = text.find('.');
            Event e{{SegmentKind::name, find_symbol(text.substr(0, dot)), false}};
            while (dot != std::string_view::npos) {
                text.remove_prefix(dot + 1);
                dot = text.find('.');
                auto part = text.substr(0, dot);
                if (part.size() < 2 || (part[0] != '+' && part[0] != '-')) bad();
                const auto kind = part[0] == '+' ? SegmentKind::positive : SegmentKind::negative;
                part.remove_prefix(1);
                if (part == "bot")
                    e = e.then({kind, inaction_bottom, false});
                else if (part == "top")
                    e = e.then({kind, inaction_top, false});
                else
                    e = e.then({kind, number(part), true});
            }
            return e;
        }
        case Kind::sum: {
            const auto colon = text.find(':');
            if (colon == std::string_view::npos) bad();
            for (const auto& comp : node.components)
                if (comp.name == text.substr(0, colon))
                    return parse_text(*comp.node, text.substr(colon + 1))
                        .under({SegmentKind::component, static_cast<std::int64_t>(comp.id), false});
            return bad();
        }
        case Kind::indexing:
        case Kind::sharp:
        case Kind::fin_index: {
            const auto at = text.find('@');
            if (at == std::string_view::npos) bad();
            const Event body = parse_text(*node.body, text.substr(at + 1));
            Event head;
            if (node.kind == Kind::indexing)
                head = parse_text(*node.index, text.substr(0, at));
            else if (node.kind == Kind::sharp)
                head = Event{{SegmentKind::copy, number(text.substr(0, at)), true}};
            else
                head = Event{{SegmentKind::copy_class, number(text.substr(0, at)), false}};
            return head.then({SegmentKind::separator, 0, false}).then(body);
        }
        case Kind::static_view: return parse_text(*node.body, text);
    }
    return bad();
}

inline bool Arena::equal_nodes(const Node& a, const Node& b) {
    if (a.kind != b.kind || a.symbols != b.symbols || a.count != b.count ||
        a.components.size() != b.components.size())
        return false;
    for (std::size_t i = 0; i < a.components.size(); ++i) {
        const auto& ca = a.components[i];
        const auto& cb = b.components[i];
        if (ca.id != cb.id || ca.name != cb.name || !(ca.arena() == cb.arena())) return false;
    }
    auto same = [](const NodePtr& x, const NodePtr& y) {
        if (!x || !y) return x == y;
        return x == y || equal_nodes(*x, *y);
    };
    return same(a.index, b.index) && same(a.body, b.body);
}

inline std::string Arena::describe_node(const Node& node) {
    auto list = [](const std::vector<std::string>& xs) {
        std::string out;
        for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + xs[i];
        return out;
    };
    switch (node.kind) {
        case Kind::static_web: return "static(" + list(node.symbols) + ")";
        case Kind::labeled: return "labeled(" + list(node.symbols) + ")";
        case Kind::pi: return "pi(" + list(node.symbols) + ")";
        case Kind::sum: {
            std::string out = "sum(";
            for (std::size_t i = 0; i < node.components.size(); ++i)
                out += (i ? "," : "") + node.components[i].name + "=" +
                       describe_node(*node.components[i].node);
            return out + ")";
        }
        case Kind::indexing:
            return "indexing(" + describe_node(*node.index) + "," + describe_node(*node.body) + ")";
        case Kind::sharp: return "sharp(" + describe_node(*node.body) + ")";
        case Kind::fin_index:
            return "fin(" + std::to_string(node.count) + "," + describe_node(*node.body) + ")";
        case Kind::static_view: return "view(" + describe_node(*node.body) + ")";
    }
    return "?";
}

inline std::string Arena::describe() const { return describe_node(*node_); }

/// Component of a sum arena that an event lives in.
inline ComponentId component_of(const Event& e) {
    if (e.length() == 0 || e[0].kind != SegmentKind::component)
        throw UsageError("event is not tagged with a sum component");
    return static_cast<ComponentId>(e[0].value);
}

}  // namespace ordalg
