#pragma once

#include <cctype>
#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "vrigid/errors.hpp"

namespace vrigid {

/// Expressions over x, y, numeric literals, + - * / ^, exp, log, sin, cos.
class Expression {
public:
    static Expression parse(const std::string& text) {
        Parser p(text);
        Expression e;
        e.source_ = text;
        e.root_ = p.parseExpr();
        p.expectEnd();
        return e;
    }

    double eval(double x, double y) const {
        if (!root_) throw EvalError("empty expression");
        return root_->eval(x, y);
    }

    const std::string& source() const { return source_; }
    bool empty() const { return root_ == nullptr; }

private:
    struct Node {
        virtual ~Node() = default;
        virtual double eval(double x, double y) const = 0;
    };
    using NodePtr = std::shared_ptr<const Node>;

    struct Const : Node {
        double v;
        explicit Const(double v) : v(v) {}
        double eval(double, double) const override { return v; }
    };
    struct Var : Node {
        bool isX;
        explicit Var(bool isX) : isX(isX) {}
        double eval(double x, double y) const override { return isX ? x : y; }
    };
    struct Binary : Node {
        char op;
        NodePtr a, b;
        Binary(char op, NodePtr a, NodePtr b) : op(op), a(std::move(a)), b(std::move(b)) {}
        double eval(double x, double y) const override {
            double u = a->eval(x, y), v = b->eval(x, y);
            switch (op) {
                case '+': return u + v;
                case '-': return u - v;
                case '*': return u * v;
                case '/':
                    if (v == 0.0) throw EvalError("division by zero");
                    return u / v;
                default: {
                    double r = std::pow(u, v);
                    if (!std::isfinite(r)) throw EvalError("non-finite power");
                    return r;
                }
            }
        }
    };
    struct Neg : Node {
        NodePtr a;
        explicit Neg(NodePtr a) : a(std::move(a)) {}
        double eval(double x, double y) const override { return -a->eval(x, y); }
    };
    struct Call : Node {
        int fn;  // 0 exp, 1 log, 2 sin, 3 cos
        NodePtr a;
        Call(int fn, NodePtr a) : fn(fn), a(std::move(a)) {}
        double eval(double x, double y) const override {
            double u = a->eval(x, y);
            switch (fn) {
                case 0: return std::exp(u);
                case 1:
                    if (u <= 0.0) throw EvalError("log of non-positive value");
                    return std::log(u);
                case 2: return std::sin(u);
                default: return std::cos(u);
            }
        }
    };

    class Parser {
    public:
        explicit Parser(const std::string& s) : s_(s) {}

        NodePtr parseExpr() {  // + -
            NodePtr lhs = parseTerm();
            for (;;) {
                skipWs();
                if (peek() == '+' || peek() == '-') {
                    char op = get();
                    lhs = std::make_shared<Binary>(op, lhs, parseTerm());
                } else {
                    return lhs;
                }
            }
        }

        void expectEnd() {
            skipWs();
            if (pos_ < s_.size()) fail("unexpected trailing input");
        }

    private:
        NodePtr parseTerm() {  // * /
            NodePtr lhs = parseUnary();
            for (;;) {
                skipWs();
                if (peek() == '*' || peek() == '/') {
                    char op = get();
                    lhs = std::make_shared<Binary>(op, lhs, parseUnary());
                } else {
                    return lhs;
                }
            }
        }

        NodePtr parseUnary() {
            skipWs();
            if (peek() == '-') {
                get();
                return std::make_shared<Neg>(parseUnary());
            }
            if (peek() == '+') {
                get();
                return parseUnary();
            }
            return parsePower();
        }

        NodePtr parsePower() {  // right associative
            NodePtr base = parseAtom();
            skipWs();
            if (peek() == '^') {
                get();
                return std::make_shared<Binary>('^', base, parseUnary());
            }
            return base;
        }

        NodePtr parseAtom() {
            skipWs();
            char c = peek();
            if (c == '(') {
                get();
                NodePtr e = parseExpr();
                skipWs();
                if (peek() != ')') fail("expected ')'");
                get();
                return e;
            }
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parseNumber();
            if (std::isalpha(static_cast<unsigned char>(c))) return parseIdent();
            fail("expected number, variable, function or '('");
            return nullptr;
        }

        NodePtr parseNumber() {
            std::size_t start = pos_;
            while (pos_ < s_.size() &&
                   (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.'))
                ++pos_;
            // scientific suffix
            if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
                std::size_t save = pos_;
                ++pos_;
                if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
                if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
                        ++pos_;
                } else {
                    pos_ = save;
                }
            }
            try {
                return std::make_shared<Const>(std::stod(s_.substr(start, pos_ - start)));
            } catch (const std::exception&) {
                pos_ = start;
                fail("malformed number");
                return nullptr;
            }
        }

        NodePtr parseIdent() {
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            std::string id = s_.substr(start, pos_ - start);
            if (id == "x") return std::make_shared<Var>(true);
            if (id == "y") return std::make_shared<Var>(false);
            if (id == "pi") return std::make_shared<Const>(M_PI);
            int fn = -1;
            if (id == "exp") fn = 0;
            else if (id == "log") fn = 1;
            else if (id == "sin") fn = 2;
            else if (id == "cos") fn = 3;
            if (fn < 0) {
                pos_ = start;
                fail("unknown identifier '" + id + "'");
            }
            skipWs();
            if (peek() != '(') fail("expected '(' after function name");
            get();
            NodePtr arg = parseExpr();
            skipWs();
            if (peek() != ')') fail("expected ')'");
            get();
            return std::make_shared<Call>(fn, arg);
        }

        void skipWs() {
            while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        }
        char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
        char get() { return s_[pos_++]; }
        [[noreturn]] void fail(const std::string& msg) const {
            throw ParseError(msg, 1, pos_ + 1);
        }

        const std::string& s_;
        std::size_t pos_ = 0;
    };

    NodePtr root_;
    std::string source_;
};

}  // namespace vrigid
