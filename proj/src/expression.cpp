#include "finsler/expression.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <vector>

namespace finsler {

struct Expression::Node {
    enum class Kind { number, variable, negate, add, subtract, multiply, divide, power, call };
    enum class Call { sqrt, exp, log, sin, cos, tan };

    Kind kind = Kind::number;
    Call call = Call::sqrt;
    double value = 0.0;
    int variable = 0;
    std::unique_ptr<Node> lhs;
    std::unique_ptr<Node> rhs;
};

namespace {

using Node = Expression::Node;

class Parser {
public:
    Parser(std::string_view text, int nx, int ny) : text_(text), nx_(nx), ny_(ny) {}

    std::unique_ptr<Node> parse() {
        auto node = expr();
        skip_space();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return node;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    static std::unique_ptr<Node> binary(Node::Kind kind, std::unique_ptr<Node> a,
                                        std::unique_ptr<Node> b) {
        auto n = std::make_unique<Node>();
        n->kind = kind;
        n->lhs = std::move(a);
        n->rhs = std::move(b);
        return n;
    }

    std::unique_ptr<Node> expr() {
        auto node = term();
        while (true) {
            if (accept('+')) node = binary(Node::Kind::add, std::move(node), term());
            else if (accept('-')) node = binary(Node::Kind::subtract, std::move(node), term());
            else return node;
        }
    }

    std::unique_ptr<Node> term() {
        auto node = unary();
        while (true) {
            if (accept('*')) node = binary(Node::Kind::multiply, std::move(node), unary());
            else if (accept('/')) node = binary(Node::Kind::divide, std::move(node), unary());
            else return node;
        }
    }

    std::unique_ptr<Node> unary() {
        if (accept('-')) {
            auto n = std::make_unique<Node>();
            n->kind = Node::Kind::negate;
            n->lhs = unary();
            return n;
        }
        if (accept('+')) return unary();
        return power();
    }

    std::unique_ptr<Node> power() {
        auto base = primary();
        if (accept('^')) return binary(Node::Kind::power, std::move(base), unary());
        return base;
    }

    std::unique_ptr<Node> primary() {
        skip_space();
        if (pos_ >= text_.size()) fail("unexpected end of expression");
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            auto node = expr();
            expect(')');
            return node;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
        fail(std::string("unexpected character '") + c + "'");
    }

    std::unique_ptr<Node> number() {
        const char* begin = text_.data() + pos_;
        const char* end = text_.data() + text_.size();
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(begin, end, v);
        if (ec != std::errc()) fail("malformed number");
        pos_ += static_cast<std::size_t>(ptr - begin);
        auto n = std::make_unique<Node>();
        n->kind = Node::Kind::number;
        n->value = v;
        return n;
    }

    std::unique_ptr<Node> identifier() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        const std::string_view name = text_.substr(start, pos_ - start);

        if (name == "pi") {
            auto n = std::make_unique<Node>();
            n->value = std::numbers::pi;
            return n;
        }
        if ((name[0] == 'x' || name[0] == 'y') && name.size() > 1 &&
            std::all_of(name.begin() + 1, name.end(),
                        [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); })) {
            int index = 0;
            std::from_chars(name.data() + 1, name.data() + name.size(), index);
            const int limit = name[0] == 'x' ? nx_ : ny_;
            if (index < 1 || index > limit) {
                pos_ = start;
                fail("variable '" + std::string(name) + "' out of range");
            }
            auto n = std::make_unique<Node>();
            n->kind = Node::Kind::variable;
            n->variable = (name[0] == 'x' ? 0 : nx_) + index - 1;
            return n;
        }
        if (name == "pow") {
            expect('(');
            auto a = expr();
            expect(',');
            auto b = expr();
            expect(')');
            return binary(Node::Kind::power, std::move(a), std::move(b));
        }
        Node::Call call;
        if (name == "sqrt") call = Node::Call::sqrt;
        else if (name == "exp") call = Node::Call::exp;
        else if (name == "log") call = Node::Call::log;
        else if (name == "sin") call = Node::Call::sin;
        else if (name == "cos") call = Node::Call::cos;
        else if (name == "tan") call = Node::Call::tan;
        else {
            pos_ = start;
            fail("unknown identifier '" + std::string(name) + "'");
        }
        expect('(');
        auto n = std::make_unique<Node>();
        n->kind = Node::Kind::call;
        n->call = call;
        n->lhs = expr();
        expect(')');
        return n;
    }

    std::string_view text_;
    int nx_;
    int ny_;
    std::size_t pos_ = 0;
};

double checked(double v, const char* what) {
    if (!std::isfinite(v)) throw DomainError(std::string(what) + " undefined at evaluation point");
    return v;
}

template <class T>
T eval(const Node& n, std::span<const T> vars) {
    using std::cos;
    using std::exp;
    using std::log;
    using std::pow;
    using std::sin;
    using std::tan;
    using std::sqrt;
    switch (n.kind) {
        case Node::Kind::number: return T(n.value);
        case Node::Kind::variable: return vars[static_cast<std::size_t>(n.variable)];
        case Node::Kind::negate: return -eval(*n.lhs, vars);
        case Node::Kind::add: return eval(*n.lhs, vars) + eval(*n.rhs, vars);
        case Node::Kind::subtract: return eval(*n.lhs, vars) - eval(*n.rhs, vars);
        case Node::Kind::multiply: return eval(*n.lhs, vars) * eval(*n.rhs, vars);
        case Node::Kind::divide: {
            const T den = eval(*n.rhs, vars);
            if constexpr (std::is_same_v<T, double>) {
                if (den == 0.0) throw DomainError("division by zero");
            }
            return eval(*n.lhs, vars) / den;
        }
        case Node::Kind::power: {
            const T base = eval(*n.lhs, vars);
            if (n.rhs->kind == Node::Kind::number) {
                if constexpr (std::is_same_v<T, double>) {
                    return checked(pow(base, n.rhs->value), "pow");
                } else {
                    return pow(base, n.rhs->value);
                }
            }
            const T e = eval(*n.rhs, vars);
            if constexpr (std::is_same_v<T, double>) {
                return checked(pow(base, e), "pow");
            } else {
                return pow(base, e);
            }
        }
        case Node::Kind::call: {
            const T a = eval(*n.lhs, vars);
            switch (n.call) {
                case Node::Call::sqrt:
                    if constexpr (std::is_same_v<T, double>) {
                        if (a < 0.0) throw DomainError("sqrt of negative value");
                    }
                    return sqrt(a);
                case Node::Call::exp: return exp(a);
                case Node::Call::log:
                    if constexpr (std::is_same_v<T, double>) {
                        if (a <= 0.0) throw DomainError("log of non-positive value");
                    }
                    return log(a);
                case Node::Call::sin: return sin(a);
                case Node::Call::cos: return cos(a);
                case Node::Call::tan: return tan(a);
            }
        }
    }
    throw std::logic_error("corrupt expression tree");
}

}  // namespace

Expression Expression::parse(std::string_view text, int nx, int ny) {
    Expression e;
    e.text_ = std::string(text);
    e.nx_ = nx;
    e.ny_ = ny;
    e.root_ = Parser(e.text_, nx, ny).parse();
    return e;
}

double Expression::evaluate(std::span<const double> vars) const {
    if (static_cast<int>(vars.size()) != arity()) {
        throw InvalidParameter("expression expects " + std::to_string(arity()) + " arguments");
    }
    return eval<double>(*root_, vars);
}

Jet Expression::evaluate(std::span<const Jet> vars) const {
    if (static_cast<int>(vars.size()) != arity()) {
        throw InvalidParameter("expression expects " + std::to_string(arity()) + " arguments");
    }
    return eval<Jet>(*root_, vars);
}

Function Expression::function() const {
    auto self = std::make_shared<Expression>(*this);
    return Function(
        arity(), [self](std::span<const double> z) { return self->evaluate(z); },
        [self](std::span<const Jet> z) { return self->evaluate(z); });
}

}  // namespace finsler
