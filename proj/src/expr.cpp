#include "tsost/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <system_error>

namespace tsost {

namespace {

ExprPtr make_const(double v) {
    return std::make_shared<const ExprNode>(ExprNode{ExprOp::Const, v, 0, ExprFn::Sin, {}, {}});
}

ExprPtr make_var() {
    return std::make_shared<const ExprNode>(ExprNode{ExprOp::Var, 0.0, 0, ExprFn::Sin, {}, {}});
}

ExprPtr make_node(ExprOp op, ExprPtr lhs, ExprPtr rhs = {}) {
    return std::make_shared<const ExprNode>(
        ExprNode{op, 0.0, 0, ExprFn::Sin, std::move(lhs), std::move(rhs)});
}

ExprPtr make_pow_raw(ExprPtr base, int n) {
    return std::make_shared<const ExprNode>(
        ExprNode{ExprOp::Pow, 0.0, n, ExprFn::Sin, std::move(base), {}});
}

ExprPtr make_call(ExprFn fn, ExprPtr arg) {
    return std::make_shared<const ExprNode>(
        ExprNode{ExprOp::Call, 0.0, 0, fn, std::move(arg), {}});
}

bool is_const(const ExprPtr& e, double v) { return e->op == ExprOp::Const && e->value == v; }
bool is_const(const ExprPtr& e) { return e->op == ExprOp::Const; }

// Folding constructors used by the differentiator.

ExprPtr s_neg(const ExprPtr& a) {
    if (is_const(a)) {
        return make_const(-a->value);
    }
    if (a->op == ExprOp::Neg) {
        return a->lhs;
    }
    return make_node(ExprOp::Neg, a);
}

ExprPtr s_add(const ExprPtr& a, const ExprPtr& b) {
    if (is_const(a, 0.0)) {
        return b;
    }
    if (is_const(b, 0.0)) {
        return a;
    }
    if (is_const(a) && is_const(b)) {
        return make_const(a->value + b->value);
    }
    return make_node(ExprOp::Add, a, b);
}

ExprPtr s_sub(const ExprPtr& a, const ExprPtr& b) {
    if (is_const(b, 0.0)) {
        return a;
    }
    if (is_const(a, 0.0)) {
        return s_neg(b);
    }
    if (is_const(a) && is_const(b)) {
        return make_const(a->value - b->value);
    }
    return make_node(ExprOp::Sub, a, b);
}

ExprPtr s_mul(const ExprPtr& a, const ExprPtr& b) {
    if (is_const(a, 0.0) || is_const(b, 0.0)) {
        return make_const(0.0);
    }
    if (is_const(a, 1.0)) {
        return b;
    }
    if (is_const(b, 1.0)) {
        return a;
    }
    if (is_const(a) && is_const(b)) {
        return make_const(a->value * b->value);
    }
    if (is_const(b)) {
        return s_mul(b, a);
    }
    if (is_const(a) && b->op == ExprOp::Mul && is_const(b->lhs)) {
        return s_mul(make_const(a->value * b->lhs->value), b->rhs);
    }
    return make_node(ExprOp::Mul, a, b);
}

ExprPtr s_div(const ExprPtr& a, const ExprPtr& b) {
    if (is_const(a, 0.0)) {
        return make_const(0.0);
    }
    if (is_const(b, 1.0)) {
        return a;
    }
    return make_node(ExprOp::Div, a, b);
}

ExprPtr s_pow(const ExprPtr& base, int n) {
    if (n == 0) {
        return make_const(1.0);
    }
    if (n == 1) {
        return base;
    }
    return make_pow_raw(base, n);
}

ExprPtr differentiate(const ExprPtr& e) {
    switch (e->op) {
    case ExprOp::Const:
        return make_const(0.0);
    case ExprOp::Var:
        return make_const(1.0);
    case ExprOp::Add:
        return s_add(differentiate(e->lhs), differentiate(e->rhs));
    case ExprOp::Sub:
        return s_sub(differentiate(e->lhs), differentiate(e->rhs));
    case ExprOp::Mul:
        return s_add(s_mul(differentiate(e->lhs), e->rhs), s_mul(e->lhs, differentiate(e->rhs)));
    case ExprOp::Div: {
        auto num = s_sub(s_mul(differentiate(e->lhs), e->rhs), s_mul(e->lhs, differentiate(e->rhs)));
        return s_div(num, s_pow(e->rhs, 2));
    }
    case ExprOp::Neg:
        return s_neg(differentiate(e->lhs));
    case ExprOp::Pow: {
        const int n = e->exponent;
        if (n == 0) {
            return make_const(0.0);
        }
        auto outer = s_mul(make_const(static_cast<double>(n)), s_pow(e->lhs, n - 1));
        return s_mul(outer, differentiate(e->lhs));
    }
    case ExprOp::Call: {
        const auto& u = e->lhs;
        auto du = differentiate(u);
        switch (e->fn) {
        case ExprFn::Sin: return s_mul(make_call(ExprFn::Cos, u), du);
        case ExprFn::Cos: return s_neg(s_mul(make_call(ExprFn::Sin, u), du));
        case ExprFn::Exp: return s_mul(e, du);
        case ExprFn::Log: return s_div(du, u);
        case ExprFn::Sqrt: return s_div(du, s_mul(make_const(2.0), e));
        }
    }
    }
    throw Error(ErrorKind::NotDifferentiable, "unsupported expression node");
}

double evaluate(const ExprNode& e, double t) {
    switch (e.op) {
    case ExprOp::Const: return e.value;
    case ExprOp::Var: return t;
    case ExprOp::Add: return evaluate(*e.lhs, t) + evaluate(*e.rhs, t);
    case ExprOp::Sub: return evaluate(*e.lhs, t) - evaluate(*e.rhs, t);
    case ExprOp::Mul: return evaluate(*e.lhs, t) * evaluate(*e.rhs, t);
    case ExprOp::Div: {
        const double d = evaluate(*e.rhs, t);
        if (d == 0.0) {
            throw Error(ErrorKind::DomainError, "division by zero");
        }
        return evaluate(*e.lhs, t) / d;
    }
    case ExprOp::Neg: return -evaluate(*e.lhs, t);
    case ExprOp::Pow: {
        const double b = evaluate(*e.lhs, t);
        if (e.exponent < 0 && b == 0.0) {
            throw Error(ErrorKind::DomainError, "negative power of zero");
        }
        // Repeated squaring keeps integer powers exact where doubles allow.
        double result = 1.0;
        double base = e.exponent < 0 ? 1.0 / b : b;
        unsigned n = static_cast<unsigned>(e.exponent < 0 ? -e.exponent : e.exponent);
        while (n) {
            if (n & 1U) {
                result *= base;
            }
            base *= base;
            n >>= 1U;
        }
        return result;
    }
    case ExprOp::Call: {
        const double u = evaluate(*e.lhs, t);
        switch (e.fn) {
        case ExprFn::Sin: return std::sin(u);
        case ExprFn::Cos: return std::cos(u);
        case ExprFn::Exp: return std::exp(u);
        case ExprFn::Log:
            if (!(u > 0.0)) {
                throw Error(ErrorKind::DomainError, "log of non-positive value");
            }
            return std::log(u);
        case ExprFn::Sqrt:
            if (u < 0.0) {
                throw Error(ErrorKind::DomainError, "sqrt of negative value");
            }
            return std::sqrt(u);
        }
    }
    }
    return 0.0;
}

bool smooth_tree(const ExprPtr& e) {
    switch (e->op) {
    case ExprOp::Const:
    case ExprOp::Var:
        return true;
    case ExprOp::Div:
        return false;
    case ExprOp::Pow:
        return e->exponent >= 0 && smooth_tree(e->lhs);
    case ExprOp::Call:
        return e->fn != ExprFn::Log && e->fn != ExprFn::Sqrt && smooth_tree(e->lhs);
    case ExprOp::Neg:
        return smooth_tree(e->lhs);
    default:
        return smooth_tree(e->lhs) && smooth_tree(e->rhs);
    }
}

bool equal_tree(const ExprPtr& a, const ExprPtr& b) {
    if (a == b) {
        return true;
    }
    if (!a || !b || a->op != b->op) {
        return false;
    }
    switch (a->op) {
    case ExprOp::Const: return a->value == b->value;
    case ExprOp::Var: return true;
    case ExprOp::Pow: return a->exponent == b->exponent && equal_tree(a->lhs, b->lhs);
    case ExprOp::Call: return a->fn == b->fn && equal_tree(a->lhs, b->lhs);
    case ExprOp::Neg: return equal_tree(a->lhs, b->lhs);
    default: return equal_tree(a->lhs, b->lhs) && equal_tree(a->rhs, b->rhs);
    }
}

// ---- printing ----

int precedence(const ExprNode& e) {
    switch (e.op) {
    case ExprOp::Add:
    case ExprOp::Sub: return 1;
    case ExprOp::Mul:
    case ExprOp::Div: return 2;
    case ExprOp::Neg: return 3;
    case ExprOp::Pow: return 4;
    case ExprOp::Const: return e.value < 0.0 || std::signbit(e.value) ? 3 : 5;
    default: return 5;
    }
}

std::string number_text(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string_view fn_name(ExprFn fn) {
    switch (fn) {
    case ExprFn::Sin: return "sin";
    case ExprFn::Cos: return "cos";
    case ExprFn::Exp: return "exp";
    case ExprFn::Log: return "log";
    case ExprFn::Sqrt: return "sqrt";
    }
    return "?";
}

void print(const ExprNode& e, std::string& out);

void print_wrapped(const ExprNode& e, bool wrap, std::string& out) {
    if (wrap) {
        out += '(';
    }
    print(e, out);
    if (wrap) {
        out += ')';
    }
}

void print(const ExprNode& e, std::string& out) {
    const int p = precedence(e);
    switch (e.op) {
    case ExprOp::Const:
        out += number_text(e.value);
        return;
    case ExprOp::Var:
        out += 't';
        return;
    case ExprOp::Add:
    case ExprOp::Sub:
    case ExprOp::Mul:
    case ExprOp::Div: {
        print_wrapped(*e.lhs, precedence(*e.lhs) < p, out);
        switch (e.op) {
        case ExprOp::Add: out += " + "; break;
        case ExprOp::Sub: out += " - "; break;
        case ExprOp::Mul: out += '*'; break;
        default: out += '/'; break;
        }
        print_wrapped(*e.rhs, precedence(*e.rhs) <= p, out);
        return;
    }
    case ExprOp::Neg:
        out += '-';
        print_wrapped(*e.lhs, precedence(*e.lhs) < p, out);
        return;
    case ExprOp::Pow:
        print_wrapped(*e.lhs, precedence(*e.lhs) <= p, out);
        out += '^';
        if (e.exponent < 0) {
            out += "(" + std::to_string(e.exponent) + ")";
        } else {
            out += std::to_string(e.exponent);
        }
        return;
    case ExprOp::Call:
        out += fn_name(e.fn);
        out += '(';
        print(*e.lhs, out);
        out += ')';
        return;
    }
}

// ---- parsing ----

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    ExprPtr parse() {
        auto e = expression();
        skip_ws();
        if (pos_ != text_.size()) {
            fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        }
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw Error(ErrorKind::SyntaxError,
                    "at position " + std::to_string(pos_) + ": " + what);
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) {
            fail(std::string("expected '") + c + "'");
        }
    }

    ExprPtr expression() {
        auto lhs = term();
        for (;;) {
            if (accept('+')) {
                lhs = make_node(ExprOp::Add, lhs, term());
            } else if (accept('-')) {
                lhs = make_node(ExprOp::Sub, lhs, term());
            } else {
                return lhs;
            }
        }
    }

    ExprPtr term() {
        auto lhs = unary();
        for (;;) {
            if (accept('*')) {
                lhs = make_node(ExprOp::Mul, lhs, unary());
            } else if (accept('/')) {
                lhs = make_node(ExprOp::Div, lhs, unary());
            } else {
                return lhs;
            }
        }
    }

    ExprPtr unary() {
        if (accept('-')) {
            return make_node(ExprOp::Neg, unary());
        }
        return power();
    }

    ExprPtr power() {
        auto base = primary();
        while (accept('^')) {
            base = make_pow_raw(base, integer_exponent());
        }
        return base;
    }

    int integer_exponent() {
        const bool paren = accept('(');
        const bool negative = accept('-');
        skip_ws();
        const auto start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
        if (start == pos_) {
            fail("expected integer exponent");
        }
        int value = 0;
        auto res = std::from_chars(text_.data() + start, text_.data() + pos_, value);
        if (res.ec != std::errc{}) {
            fail("exponent out of range");
        }
        if (pos_ < text_.size() && (text_[pos_] == '.' || text_[pos_] == 'e' || text_[pos_] == 'E')) {
            fail("exponent must be an integer");
        }
        if (paren) {
            expect(')');
        }
        return negative ? -value : value;
    }

    ExprPtr primary() {
        skip_ws();
        if (pos_ >= text_.size()) {
            fail("unexpected end of input");
        }
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            auto e = expression();
            expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            return number();
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const auto start = pos_;
            while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) {
                ++pos_;
            }
            const auto name = text_.substr(start, pos_ - start);
            if (name == "t") {
                return make_var();
            }
            ExprFn fn{};
            if (name == "sin") {
                fn = ExprFn::Sin;
            } else if (name == "cos") {
                fn = ExprFn::Cos;
            } else if (name == "exp") {
                fn = ExprFn::Exp;
            } else if (name == "log") {
                fn = ExprFn::Log;
            } else if (name == "sqrt") {
                fn = ExprFn::Sqrt;
            } else {
                pos_ = start;
                throw Error(ErrorKind::UnknownFunction,
                            "at position " + std::to_string(start) + ": unknown name '" +
                                std::string(name) + "'");
            }
            expect('(');
            auto arg = expression();
            expect(')');
            return make_call(fn, arg);
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    ExprPtr number() {
        const auto start = pos_;
        auto digits = [&] {
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                ++pos_;
            }
        };
        digits();
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            digits();
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            auto save = pos_;
            ++pos_;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) {
                ++pos_;
            }
            const auto exp_start = pos_;
            digits();
            if (exp_start == pos_) {
                pos_ = save;
            }
        }
        double v = 0.0;
        auto res = std::from_chars(text_.data() + start, text_.data() + pos_, v);
        if (res.ec != std::errc{} || res.ptr != text_.data() + pos_) {
            pos_ = start;
            fail("malformed number");
        }
        return make_const(v);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

} // namespace

ExprFunc::ExprFunc() : ExprFunc(make_const(0.0)) {}

ExprFunc::ExprFunc(ExprPtr root) : root_(std::move(root)), smooth_(smooth_tree(root_)) {}

ExprFunc ExprFunc::constant(double c) {
    return c < 0.0 ? ExprFunc(make_node(ExprOp::Neg, make_const(-c))) : ExprFunc(make_const(c));
}

ExprFunc ExprFunc::variable() { return ExprFunc(make_var()); }

ExprFunc ExprFunc::polynomial(std::span<const double> coeffs) {
    ExprPtr acc;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        const double c = coeffs[i];
        if (c == 0.0) {
            continue;
        }
        ExprPtr mono = i == 0 ? make_const(std::abs(c))
                              : (i == 1 ? make_var() : make_pow_raw(make_var(), static_cast<int>(i)));
        if (i > 0 && std::abs(c) != 1.0) {
            mono = make_node(ExprOp::Mul, make_const(std::abs(c)), mono);
        }
        if (!acc) {
            acc = c < 0.0 ? make_node(ExprOp::Neg, mono) : mono;
        } else {
            acc = make_node(c < 0.0 ? ExprOp::Sub : ExprOp::Add, acc, mono);
        }
    }
    return acc ? ExprFunc(acc) : ExprFunc();
}

double ExprFunc::operator()(double t) const {
    const double v = evaluate(*root_, t);
    if (!std::isfinite(v)) {
        throw Error(ErrorKind::DomainError, "non-finite value at t = " + number_text(t));
    }
    return v;
}

ExprFunc ExprFunc::derivative() const { return ExprFunc(differentiate(root_)); }

std::string ExprFunc::to_string() const {
    std::string out;
    print(*root_, out);
    return out;
}

bool operator==(const ExprFunc& a, const ExprFunc& b) { return equal_tree(a.root_, b.root_); }

ExprFunc parse_expr(std::string_view text) { return ExprFunc(Parser(text).parse()); }

double eval_expr(const ExprFunc& f, double t) { return f(t); }

ExprFunc diff_expr(const ExprFunc& f) { return f.derivative(); }

} // namespace tsost
