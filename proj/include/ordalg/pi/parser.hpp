#pragma once

#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ordalg/errors.hpp"
#include "ordalg/pi/term.hpp"

namespace ordalg::pi {

namespace detail {

struct Position {
    int line = 1;
    int column = 1;
};

struct Token {
    enum class Kind { ident, number, scalar, symbol, end };
    Kind kind;
    std::string text;
    Position at;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (true) {
            skip_blank();
            const Position at = pos_;
            if (i_ >= src_.size()) {
                out.push_back({Token::Kind::end, "", at});
                return out;
            }
            const char c = src_[i_];
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                std::string id;
                while (i_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[i_])) || src_[i_] == '_' ||
                                            src_[i_] == '\''))
                    id += advance();
                out.push_back({Token::Kind::ident, id, at});
            } else if (std::isdigit(static_cast<unsigned char>(c))) {
                std::string n;
                while (i_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_]))) n += advance();
                out.push_back({Token::Kind::number, n, at});
            } else if (c == '{') {
                advance();
                std::string body;
                while (i_ < src_.size() && src_[i_] != '}') body += advance();
                if (i_ >= src_.size()) throw ParseError("unterminated scalar", at.line, at.column);
                advance();
                out.push_back({Token::Kind::scalar, body, at});
            } else if (c == reserved_prefix) {
                throw ParseError("names starting with '%' are reserved", at.line, at.column);
            } else if (std::string_view("?!@().+|,").find(c) != std::string_view::npos) {
                out.push_back({Token::Kind::symbol, std::string(1, advance()), at});
            } else {
                throw ParseError(std::string("unexpected character '") + c + "'", at.line, at.column);
            }
        }
    }

private:
    char advance() {
        const char c = src_[i_++];
        if (c == '\n') {
            ++pos_.line;
            pos_.column = 1;
        } else {
            ++pos_.column;
        }
        return c;
    }

    void skip_blank() {
        while (i_ < src_.size()) {
            if (src_[i_] == '#') {
                while (i_ < src_.size() && src_[i_] != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(src_[i_]))) {
                advance();
            } else {
                return;
            }
        }
    }

    std::string_view src_;
    std::size_t i_ = 0;
    Position pos_;
};

struct RawTerm {
    enum class Kind { scalar, action, choice, par, hide };
    Kind kind;
    Position at;
    std::string text{};  // scalar literal, or action subject
    Polarity polarity = Polarity::positive;
    std::optional<Location> location{};
    std::string object{};
    Position object_at{};
    std::vector<std::pair<std::string, Position>> binders{};  // hide
    std::vector<RawTerm> children{};

    bool is_branching() const { return kind == Kind::action || kind == Kind::choice; }
};

class RawParser {
public:
    explicit RawParser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

    RawTerm parse() {
        if (peek().kind == Token::Kind::end) fail(peek(), "expected a term");
        RawTerm t = par();
        if (peek().kind != Token::Kind::end) fail(peek(), "unexpected '" + peek().text + "'");
        return t;
    }

private:
    const Token& peek() const { return toks_[k_]; }
    Token take() { return toks_[k_++]; }
    bool is_symbol(const char* s) const { return peek().kind == Token::Kind::symbol && peek().text == s; }
    bool is_keyword(const char* s) const { return peek().kind == Token::Kind::ident && peek().text == s; }

    [[noreturn]] static void fail(const Token& t, const std::string& msg) {
        throw ParseError(msg, t.at.line, t.at.column);
    }

    void expect(const char* s) {
        if (!is_symbol(s)) fail(peek(), std::string("expected '") + s + "'");
        take();
    }

    std::pair<std::string, Position> identifier() {
        const Token& t = peek();
        if (t.kind != Token::Kind::ident || t.text == "new" || t.text == "in") fail(t, "expected a name");
        take();
        return {t.text, t.at};
    }

    RawTerm par() {
        RawTerm t = sum();
        while (is_symbol("|")) {
            const Position at = take().at;
            RawTerm right = sum();
            RawTerm node{RawTerm::Kind::par, at};
            node.children.push_back(std::move(t));
            node.children.push_back(std::move(right));
            t = std::move(node);
        }
        return t;
    }

    RawTerm sum() {
        const Position at = peek().at;
        std::vector<RawTerm> operands;
        std::vector<Position> where;
        where.push_back(peek().at);
        operands.push_back(unary());
        while (is_symbol("+")) {
            take();
            where.push_back(peek().at);
            operands.push_back(unary());
        }
        if (operands.size() == 1) return std::move(operands.front());
        RawTerm node{RawTerm::Kind::choice, at};
        for (std::size_t i = 0; i < operands.size(); ++i) {
            if (!operands[i].is_branching())
                throw ParseError("only action prefixes can be summed", where[i].line, where[i].column);
            if (operands[i].kind == RawTerm::Kind::choice)
                for (auto& c : operands[i].children) node.children.push_back(std::move(c));
            else
                node.children.push_back(std::move(operands[i]));
        }
        return node;
    }

    RawTerm unary() {
        const Token& t = peek();
        if (t.kind == Token::Kind::scalar) {
            take();
            RawTerm node{RawTerm::Kind::scalar, t.at};
            node.text = t.text;
            return node;
        }
        if (is_symbol("(")) {
            take();
            RawTerm inner = par();
            expect(")");
            return inner;
        }
        if (is_keyword("new")) {
            RawTerm node{RawTerm::Kind::hide, take().at};
            node.binders.push_back(identifier());
            while (!is_keyword("in")) {
                if (is_symbol(",")) take();
                node.binders.push_back(identifier());
            }
            take();
            node.children.push_back(unary());
            return node;
        }
        if (t.kind == Token::Kind::ident) return action();
        fail(t, t.kind == Token::Kind::end ? "unexpected end of input" : "unexpected '" + t.text + "'");
    }

    RawTerm action() {
        auto [subject, at] = identifier();
        RawTerm node{RawTerm::Kind::action, at};
        node.text = subject;
        if (is_symbol("?")) {
            node.polarity = Polarity::positive;
        } else if (is_symbol("!")) {
            node.polarity = Polarity::negative;
        } else {
            fail(peek(), "expected '?' or '!' after a channel name");
        }
        take();
        if (is_symbol("@")) {
            take();
            if (peek().kind != Token::Kind::number) fail(peek(), "expected a location number");
            node.location = std::stoll(take().text);
        }
        expect("(");
        std::tie(node.object, node.object_at) = identifier();
        expect(")");
        expect(".");
        node.children.push_back(unary());
        return node;
    }

    std::vector<Token> toks_;
    std::size_t k_ = 0;
};

template <Semiring S>
class Resolver {
public:
    Term<S> run(const RawTerm& root) {
        assign_locations(root);
        std::map<std::string, Name> env;
        collect_free(root, env);
        taken_ = free_;
        return build(root, env);
    }

private:
    void assign_locations(const RawTerm& root) {
        std::vector<const RawTerm*> actions;
        collect_actions(root, actions);
        std::set<Location> used;
        for (const auto* a : actions)
            if (a->location && !used.insert(*a->location).second)
                throw ParseError("duplicate location " + std::to_string(*a->location), a->at.line, a->at.column);
        Location next = 1;
        for (const auto* a : actions) {
            if (a->location) {
                locations_[a] = *a->location;
                continue;
            }
            while (used.contains(next)) ++next;
            used.insert(next);
            locations_[a] = next;
        }
    }

    static void collect_actions(const RawTerm& t, std::vector<const RawTerm*>& out) {
        if (t.kind == RawTerm::Kind::action) out.push_back(&t);
        for (const auto& c : t.children) collect_actions(c, out);
    }

    static void bind(std::map<std::string, Name>& env, const std::string& id, const Position& at, Name n) {
        if (env.contains(id)) throw ParseError("'" + id + "' shadows an enclosing binder", at.line, at.column);
        env.emplace(id, std::move(n));
    }

    void collect_free(const RawTerm& t, std::map<std::string, Name>& env) {
        switch (t.kind) {
            case RawTerm::Kind::action: {
                if (!env.contains(t.text)) free_.insert(t.text);
                if (t.object == t.text)
                    throw ParseError("'" + t.object + "' cannot bind its own channel", t.object_at.line,
                                     t.object_at.column);
                auto inner = env;
                bind(inner, t.object, t.object_at, Name{});
                collect_free(t.children.front(), inner);
                return;
            }
            case RawTerm::Kind::hide: {
                auto inner = env;
                for (const auto& [id, at] : t.binders) bind(inner, id, at, Name{});
                collect_free(t.children.front(), inner);
                return;
            }
            default:
                for (const auto& c : t.children) collect_free(c, env);
        }
    }

    std::string fresh_base(const std::string& id) {
        std::string candidate = id;
        for (std::size_t k = 1; taken_.contains(candidate); ++k) candidate = id + "_" + std::to_string(k);
        taken_.insert(candidate);
        return candidate;
    }

    Term<S> build(const RawTerm& t, const std::map<std::string, Name>& env) {
        switch (t.kind) {
            case RawTerm::Kind::scalar:
                try {
                    return Term<S>::scalar(S::parse(t.text));
                } catch (const std::exception& e) {
                    throw ParseError(std::string("bad scalar: ") + e.what(), t.at.line, t.at.column);
                }
            case RawTerm::Kind::action: {
                auto it = env.find(t.text);
                const Name subject = it != env.end() ? it->second : free_name(t.text);
                const Location loc = locations_.at(&t);
                auto inner = env;
                inner.insert_or_assign(t.object, subject.child(t.polarity, loc));
                return Term<S>::action(loc, subject, t.polarity, build(t.children.front(), inner));
            }
            case RawTerm::Kind::choice: {
                std::vector<Term<S>> branches;
                for (const auto& c : t.children) branches.push_back(build(c, env));
                return Term<S>::choice(branches);
            }
            case RawTerm::Kind::par:
                return Term<S>::par(build(t.children[0], env), build(t.children[1], env));
            case RawTerm::Kind::hide: {
                auto inner = env;
                std::vector<Name> names;
                for (const auto& [id, at] : t.binders) {
                    names.push_back(free_name(fresh_base(id)));
                    inner.insert_or_assign(id, names.back());
                }
                Term<S> body = build(t.children.front(), inner);
                for (auto n = names.rbegin(); n != names.rend(); ++n) body = Term<S>::hide(*n, body);
                return body;
            }
        }
        throw std::logic_error("unreachable");
    }

    std::set<std::string> free_;
    std::set<std::string> taken_;
    std::map<const RawTerm*, Location> locations_;
};

}  // namespace detail

/// Parses the concrete syntax:
///   par    := sum ('|' sum)*
///   sum    := unary ('+' unary)*
///   unary  := '{' scalar '}' | action | 'new' names 'in' unary | '(' par ')'
///   action := name ('?' | '!') ('@' location)? '(' name ')' '.' unary
/// Omitted locations are numbered left to right, avoiding the explicit ones.
template <Semiring S>
Term<S> parse_term(std::string_view text) {
    auto raw = detail::RawParser(detail::Lexer(text).run()).parse();
    return detail::Resolver<S>().run(raw);
}

}  // namespace ordalg::pi
