#ifndef TSOST_ERROR_HPP
#define TSOST_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace tsost {

enum class ErrorKind {
    EmptyScale,
    MalformedSpec,
    NotInScale,
    NotInKappa,
    SyntaxError,
    UnknownFunction,
    DomainError,
    NotDifferentiable,
    QuadratureFailure,
    DepthExceeded,
    OutOfRange,
    MembershipViolation,
    OrderViolation,
    WrongScaleKind,
    Degenerate,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries one of the kinds above so the
/// CLI can map it onto a structured error object.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& detail)
        : std::runtime_error(detail), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace tsost

#endif // TSOST_ERROR_HPP
