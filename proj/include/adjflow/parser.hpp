#pragma once

// Pratt parser for the expression DSL.
//
//   identifiers  [A-Za-z][A-Za-z0-9_]*
//   numbers      integers, decimals; fractions p/q arrive as division
//   operators    + - * / ^ with ^ > unary- > * / > + -, ^ right-associative
//   calls        exp(e) ln(e) sin(e) cos(e) sqrt(e)
//   comments     # to end of line; whitespace insignificant

#include <cctype>
#include <map>
#include <string>
#include <vector>

#include "adjflow/expr.hpp"

namespace adjflow {

struct ParseError : Error {
    std::size_t position;
    ParseError(const std::string& msg, std::size_t pos)
        : Error(msg + " (at offset " + std::to_string(pos) + ")"), position(pos) {}
};

namespace detail {

enum class TokKind { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End };

struct Token {
    TokKind kind;
    std::size_t pos;
    Rat number;
    std::string text;
};

inline std::vector<Token> tokenize(const std::string& src) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < src.size()) {
        char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (c == '#') {
            while (i < src.size() && src[i] != '\n') ++i;
            continue;
        }
        std::size_t start = i;
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string num;
            bool seen_dot = false;
            while (i < src.size() &&
                   (std::isdigit(static_cast<unsigned char>(src[i])) ||
                    (src[i] == '.' && !seen_dot && i + 1 < src.size() &&
                     std::isdigit(static_cast<unsigned char>(src[i + 1]))))) {
                if (src[i] == '.') seen_dot = true;
                num.push_back(src[i]);
                ++i;
            }
            auto r = rat_from_decimal(num);
            if (!r) throw ParseError("malformed number '" + num + "'", start);
            out.push_back({TokKind::Number, start, *r, num});
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::string id;
            while (i < src.size() && (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_')) {
                id.push_back(src[i]);
                ++i;
            }
            out.push_back({TokKind::Ident, start, Rat(0), id});
            continue;
        }
        TokKind k;
        switch (c) {
            case '+': k = TokKind::Plus; break;
            case '-': k = TokKind::Minus; break;
            case '*': k = TokKind::Star; break;
            case '/': k = TokKind::Slash; break;
            case '^': k = TokKind::Caret; break;
            case '(': k = TokKind::LParen; break;
            case ')': k = TokKind::RParen; break;
            case ',': k = TokKind::Comma; break;
            default: throw ParseError(std::string("unexpected character '") + c + "'", start);
        }
        out.push_back({k, start, Rat(0), std::string(1, c)});
        ++i;
    }
    out.push_back({TokKind::End, src.size(), Rat(0), ""});
    return out;
}

class Parser {
public:
    Parser(const std::string& text, const std::vector<std::string>& vars,
           const std::map<std::string, double>& consts, const std::map<std::string, std::string>& aliases)
        : tokens_(tokenize(text)), vars_(vars), consts_(consts), aliases_(aliases) {}

    Expr parse() {
        Expr e = parse_expr(0);
        expect(TokKind::End, "unexpected trailing input");
        return e;
    }

private:
    const Token& peek() const { return tokens_[pos_]; }
    Token advance() { return tokens_[pos_++]; }
    void expect(TokKind k, const char* msg) {
        if (peek().kind != k) throw ParseError(msg, peek().pos);
        ++pos_;
    }

    Expr parse_expr(int min_bp) {
        Expr lhs = parse_prefix();
        for (;;) {
            int lbp, rbp;
            switch (peek().kind) {
                case TokKind::Plus:
                case TokKind::Minus: lbp = 10, rbp = 11; break;
                case TokKind::Star:
                case TokKind::Slash: lbp = 20, rbp = 21; break;
                case TokKind::Caret: lbp = 30, rbp = 30; break;  // right-assoc
                default: return lhs;
            }
            if (lbp < min_bp) return lhs;
            Token op = advance();
            Expr rhs = parse_expr(rbp);
            switch (op.kind) {
                case TokKind::Plus: lhs = add(lhs, rhs); break;
                case TokKind::Minus: lhs = sub(lhs, rhs); break;
                case TokKind::Star: lhs = mul(lhs, rhs); break;
                case TokKind::Slash:
                    if (rhs->kind == ExprKind::Constant && rhs->value == 0)
                        throw ParseError("division by zero constant", op.pos);
                    lhs = divide(lhs, rhs);
                    break;
                case TokKind::Caret: lhs = power(lhs, rhs); break;
                default: break;
            }
        }
    }

    Expr parse_prefix() {
        const Token& t = peek();
        switch (t.kind) {
            case TokKind::Minus:
                advance();
                return neg(parse_expr(26));
            case TokKind::Plus:
                advance();
                return parse_expr(26);
            case TokKind::Number: return constant(advance().number);
            case TokKind::LParen: {
                advance();
                Expr e = parse_expr(0);
                expect(TokKind::RParen, "expected ')'");
                return e;
            }
            case TokKind::Ident: {
                Token id = advance();
                if (peek().kind == TokKind::LParen) {
                    if (!builtin_functions().count(id.text))
                        throw ParseError("unknown function '" + id.text + "'", id.pos);
                    advance();
                    Expr arg = parse_expr(0);
                    if (peek().kind == TokKind::Comma)
                        throw ParseError("function '" + id.text + "' takes one argument", peek().pos);
                    expect(TokKind::RParen, "expected ')'");
                    return call(id.text, arg);
                }
                std::string name = id.text;
                auto alias = aliases_.find(name);
                if (alias != aliases_.end()) name = alias->second;
                if (var_index(vars_, name) >= 0) return variable(name);
                auto cs = consts_.find(name);
                if (cs != consts_.end()) return const_symbol(name, cs->second);
                throw ParseError("undeclared identifier '" + id.text + "'", id.pos);
            }
            default: throw ParseError("expected expression", t.pos);
        }
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    const std::vector<std::string>& vars_;
    const std::map<std::string, double>& consts_;
    const std::map<std::string, std::string>& aliases_;
};

}  // namespace detail

inline Expr parse_expression(const std::string& text, const std::vector<std::string>& vars,
                             const std::map<std::string, double>& consts = {},
                             const std::map<std::string, std::string>& aliases = {}) {
    detail::Parser p(text, vars, consts, aliases);
    return p.parse();
}

}  // namespace adjflow
