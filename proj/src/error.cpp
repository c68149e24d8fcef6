#include "tsost/error.hpp"

namespace tsost {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::EmptyScale: return "EmptyScale";
    case ErrorKind::MalformedSpec: return "MalformedSpec";
    case ErrorKind::NotInScale: return "NotInScale";
    case ErrorKind::NotInKappa: return "NotInKappa";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UnknownFunction: return "UnknownFunction";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::NotDifferentiable: return "NotDifferentiable";
    case ErrorKind::QuadratureFailure: return "QuadratureFailure";
    case ErrorKind::DepthExceeded: return "DepthExceeded";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::MembershipViolation: return "MembershipViolation";
    case ErrorKind::OrderViolation: return "OrderViolation";
    case ErrorKind::WrongScaleKind: return "WrongScaleKind";
    case ErrorKind::Degenerate: return "Degenerate";
    }
    return "Unknown";
}

} // namespace tsost
