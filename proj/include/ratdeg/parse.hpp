// Expression and map-file parsing. Grammar: identifiers [A-Za-z][A-Za-z0-9_]*,
// integer literals, + - * ^ and parentheses; ^ binds tighter than *, which
// binds tighter than + and -; unary minus allowed; juxtaposition is not
// multiplication. Every malformed input becomes a ParseError with line/column.
#pragma once

#include <cctype>
#include <string>
#include <vector>

#include "ratdeg/error.hpp"
#include "ratdeg/poly.hpp"
#include "ratdeg/ratmap.hpp"

namespace ratdeg {

namespace parsedetail {

struct Token {
    enum class Kind { ident, integer, plus, minus, star, caret, lparen, rparen, end };
    Kind kind;
    std::string text;
    int line, col;
};

inline std::vector<Token> tokenize(const std::string& src, int line_offset) {
    std::vector<Token> out;
    int line = line_offset, col = 1;
    std::size_t i = 0;
    while (i < src.size()) {
        char c = src[i];
        if (c == '\n') { ++line; col = 1; ++i; continue; }
        if (std::isspace(static_cast<unsigned char>(c))) { ++col; ++i; continue; }
        Token t{Token::Kind::end, "", line, col};
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
            t.kind = Token::Kind::ident;
            t.text = src.substr(i, j - i);
            col += static_cast<int>(j - i);
            i = j;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            t.kind = Token::Kind::integer;
            t.text = src.substr(i, j - i);
            col += static_cast<int>(j - i);
            i = j;
        } else {
            switch (c) {
                case '+': t.kind = Token::Kind::plus; break;
                case '-': t.kind = Token::Kind::minus; break;
                case '*': t.kind = Token::Kind::star; break;
                case '^': t.kind = Token::Kind::caret; break;
                case '(': t.kind = Token::Kind::lparen; break;
                case ')': t.kind = Token::Kind::rparen; break;
                default:
                    throw Error(Errc::parse_error, std::string("unexpected character '") + c + "'", line, col);
            }
            t.text = std::string(1, c);
            ++col;
            ++i;
        }
        out.push_back(std::move(t));
    }
    out.push_back({Token::Kind::end, "", line, col});
    return out;
}

class ExprParser {
public:
    ExprParser(const RingPtr& ring, std::vector<Token> tokens)
        : ring_(ring), toks_(std::move(tokens)) {}

    Poly parse() {
        Poly p = expr();
        const Token& t = peek();
        if (t.kind != Token::Kind::end)
            throw Error(Errc::parse_error, "expected an operator before '" + t.text + "'", t.line, t.col);
        return p;
    }

private:
    const Token& peek() const { return toks_[pos_]; }
    const Token& advance() { return toks_[pos_++]; }

    Poly expr() {
        Poly acc = term();
        for (;;) {
            const Token& t = peek();
            if (t.kind == Token::Kind::plus) { advance(); acc = acc + term(); }
            else if (t.kind == Token::Kind::minus) { advance(); acc = acc - term(); }
            else break;
        }
        return acc;
    }

    Poly term() {
        Poly acc = unary();
        while (peek().kind == Token::Kind::star) {
            advance();
            acc = acc * unary();
        }
        return acc;
    }

    Poly unary() {
        if (peek().kind == Token::Kind::minus) {
            advance();
            return -unary();
        }
        return power();
    }

    Poly power() {
        Poly base = atom();
        if (peek().kind == Token::Kind::caret) {
            const Token& caret = advance();
            const Token& e = peek();
            if (e.kind != Token::Kind::integer)
                throw Error(Errc::parse_error, "exponent must be an integer literal", caret.line, caret.col);
            advance();
            unsigned long long v = parse_uint(e);
            if (v > 100000)
                throw Error(Errc::parse_error, "exponent too large", e.line, e.col);
            return base.pow(static_cast<unsigned>(v));
        }
        return base;
    }

    Poly atom() {
        const Token& t = peek();
        switch (t.kind) {
            case Token::Kind::ident: {
                advance();
                for (std::size_t i = 0; i < ring_->nvars(); ++i)
                    if (ring_->vars[i] == t.text) return Poly::variable(ring_, i);
                throw Error(Errc::parse_error, "unknown variable '" + t.text + "'", t.line, t.col);
            }
            case Token::Kind::integer: {
                advance();
                unsigned long long v = parse_uint(t);
                return Poly::constant(ring_, ring_->field.from_int(
                    static_cast<long long>(v % ring_->field.characteristic())));
            }
            case Token::Kind::lparen: {
                advance();
                Poly p = expr();
                const Token& close = peek();
                if (close.kind != Token::Kind::rparen)
                    throw Error(Errc::parse_error, "expected ')'", close.line, close.col);
                advance();
                return p;
            }
            default:
                throw Error(Errc::parse_error, "expected a variable, number, or '('", t.line, t.col);
        }
    }

    static unsigned long long parse_uint(const Token& t) {
        unsigned long long v = 0;
        for (char c : t.text) {
            if (v > (~0ULL - 9) / 10)
                throw Error(Errc::parse_error, "integer literal too large", t.line, t.col);
            v = v * 10 + static_cast<unsigned long long>(c - '0');
        }
        return v;
    }

    RingPtr ring_;
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

}  // namespace parsedetail

inline Poly parse_poly(const RingPtr& ring, const std::string& text, int line = 1) {
    parsedetail::ExprParser p(ring, parsedetail::tokenize(text, line));
    return p.parse();
}

// Field spec "p" or "p^k".
inline Field parse_field_spec(const std::string& text, std::uint64_t seed, int line = 1, int col = 1) {
    std::size_t caret = text.find('^');
    auto parse_num = [&](const std::string& s) -> std::uint64_t {
        if (s.empty()) throw Error(Errc::parse_error, "empty number in field spec", line, col);
        std::uint64_t v = 0;
        for (char c : s) {
            if (!std::isdigit(static_cast<unsigned char>(c)))
                throw Error(Errc::parse_error, "field spec must be p or p^k", line, col);
            if (v > (~std::uint64_t{0} - 9) / 10)
                throw Error(Errc::parse_error, "field spec number too large", line, col);
            v = v * 10 + static_cast<std::uint64_t>(c - '0');
        }
        return v;
    };
    if (caret == std::string::npos) return Field::prime(parse_num(text));
    std::uint64_t p = parse_num(text.substr(0, caret));
    std::uint64_t k = parse_num(text.substr(caret + 1));
    if (k == 0 || k > 12) throw Error(Errc::degree_too_large, "extension degree must be in [1, 12]");
    if (k == 1) return Field::prime(p);
    return Field::extension(p, static_cast<unsigned>(k), seed);
}

// Map file: `field:` line, `vars:` line, then one component per non-empty line.
inline RationalMap parse_map_file(const std::string& text, std::uint64_t field_seed = 0) {
    struct Line {
        std::string body;
        int number;
    };
    std::vector<Line> lines;
    {
        std::string cur;
        int number = 1;
        for (char c : text) {
            if (c == '\n') {
                lines.push_back({cur, number});
                cur.clear();
                ++number;
            } else {
                cur += c;
            }
        }
        lines.push_back({cur, number});
    }
    auto trim = [](const std::string& s) {
        std::size_t b = s.find_first_not_of(" \t\r");
        if (b == std::string::npos) return std::string();
        std::size_t e = s.find_last_not_of(" \t\r");
        return s.substr(b, e - b + 1);
    };

    std::size_t idx = 0;
    auto next_nonempty = [&]() -> const Line* {
        while (idx < lines.size()) {
            if (!trim(lines[idx].body).empty()) return &lines[idx];
            ++idx;
        }
        return nullptr;
    };

    const Line* fline = next_nonempty();
    if (!fline) throw Error(Errc::parse_error, "empty map file: expected 'field:' line", 1, 1);
    {
        std::string body = trim(fline->body);
        if (body.rfind("field:", 0) != 0)
            throw Error(Errc::parse_error, "expected 'field: <p>' or 'field: <p>^<k>'", fline->number, 1);
        ++idx;
    }
    Field field = parse_field_spec(trim(trim(fline->body).substr(6)), field_seed, fline->number, 7);

    const Line* vline = next_nonempty();
    if (!vline || trim(vline->body).rfind("vars:", 0) != 0)
        throw Error(Errc::parse_error, "expected 'vars: <name> <name> ...'",
                    vline ? vline->number : fline->number + 1, 1);
    ++idx;
    std::vector<std::string> vars;
    {
        std::string rest = trim(trim(vline->body).substr(5));
        std::string cur;
        for (char c : rest + " ") {
            if (std::isspace(static_cast<unsigned char>(c))) {
                if (!cur.empty()) {
                    if (!std::isalpha(static_cast<unsigned char>(cur[0])))
                        throw Error(Errc::parse_error, "variable names must start with a letter",
                                    vline->number, 1);
                    for (char vc : cur)
                        if (!std::isalnum(static_cast<unsigned char>(vc)) && vc != '_')
                            throw Error(Errc::parse_error, "invalid character in variable name",
                                        vline->number, 1);
                    vars.push_back(cur);
                    cur.clear();
                }
            } else {
                cur += c;
            }
        }
        if (vars.empty())
            throw Error(Errc::parse_error, "vars line lists no variables", vline->number, 1);
        for (std::size_t i = 0; i < vars.size(); ++i)
            for (std::size_t j = i + 1; j < vars.size(); ++j)
                if (vars[i] == vars[j])
                    throw Error(Errc::parse_error, "duplicate variable name '" + vars[i] + "'",
                                vline->number, 1);
    }
    RingPtr ring = make_ring(field, vars);

    std::vector<Poly> components;
    while (const Line* cline = next_nonempty()) {
        components.push_back(parse_poly(ring, cline->body, cline->number));
        ++idx;
    }
    if (components.empty())
        throw Error(Errc::parse_error, "map file lists no components", vline->number + 1, 1);
    return make_rational_map(std::move(components));
}

}  // namespace ratdeg
