#pragma once

#include <stdexcept>
#include <string>

namespace netecon {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid input: bad parameter values, malformed files, out-of-domain
/// arguments. Maps to CLI exit code 2.
struct DomainError : Error {
    using Error::Error;
};

/// Price outside the admissible [0, p_max] interval.
struct PriceOutOfRange : DomainError {
    using DomainError::DomainError;
};

/// Offered load at or above the service capacity B.
struct CapacityExceeded : DomainError {
    using DomainError::DomainError;
};

/// Root bracket endpoints do not straddle a sign change.
struct NoSignChange : Error {
    using Error::Error;
};

/// An iterative solver ran out of iterations before converging.
struct MaxIterExceeded : Error {
    using Error::Error;
};

/// The (scaled) side payment violates the interior-equilibrium bound.
/// Boundary equilibria are out of scope, so this is an error rather than
/// a clamped result. Maps to CLI exit code 3.
struct SidePaymentTooLarge : Error {
    SidePaymentTooLarge(double side_payment_, double bound_, const std::string& what_)
        : Error(what_), side_payment(side_payment_), bound(bound_) {}
    double side_payment;
    double bound;
};

}  // namespace netecon
