#ifndef TSOST_EXPR_HPP
#define TSOST_EXPR_HPP

#include <memory>
#include <span>
#include <string>
#include <string_view>

#include "tsost/error.hpp"

namespace tsost {

enum class ExprOp { Const, Var, Add, Sub, Mul, Div, Neg, Pow, Call };
enum class ExprFn { Sin, Cos, Exp, Log, Sqrt };

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
    ExprOp op;
    double value = 0.0;  // Const
    int exponent = 0;    // Pow
    ExprFn fn = ExprFn::Sin;  // Call
    ExprPtr lhs;         // operand of Neg/Pow/Call, left of binary ops
    ExprPtr rhs;
};

/// A function of the single variable t, held as an immutable expression tree.
class ExprFunc {
public:
    ExprFunc();  // the constant 0
    explicit ExprFunc(ExprPtr root);

    static ExprFunc constant(double c);
    static ExprFunc variable();
    /// sum_i coeffs[i] * t^i
    static ExprFunc polynomial(std::span<const double> coeffs);

    const ExprPtr& root() const noexcept { return root_; }

    double operator()(double t) const;
    ExprFunc derivative() const;
    std::string to_string() const;

    /// True when the tree only uses +, -, *, non-negative integer powers and
    /// sin/cos/exp, i.e. it is smooth on the whole real line.
    bool smooth() const noexcept { return smooth_; }

    friend bool operator==(const ExprFunc& a, const ExprFunc& b);

private:
    ExprPtr root_;
    bool smooth_;
};

/// Grammar (loosest to tightest): + - ; * / ; unary - ; ^ (integer exponent);
/// primary := number | t | fn(expr) | (expr).
ExprFunc parse_expr(std::string_view text);
double eval_expr(const ExprFunc& f, double t);
ExprFunc diff_expr(const ExprFunc& f);

} // namespace tsost

#endif // TSOST_EXPR_HPP
