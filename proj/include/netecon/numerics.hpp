#pragma once

#include <functional>

#include "netecon/errors.hpp"

namespace netecon::numerics {

/// Convergence control shared by the scalar solvers.
struct Tolerance {
    double abs_tol = 1e-10;
    double rel_tol = 1e-12;
    int max_iter = 200;

    void validate() const;
};

/// Closed interval [lo, hi] with lo < hi.
struct Bracket {
    double lo = 0.0;
    double hi = 1.0;

    void validate() const;
    double width() const { return hi - lo; }
    double midpoint() const { return 0.5 * (lo + hi); }
    bool contains(double x) const { return lo <= x && x <= hi; }
};

using ScalarFn = std::function<double(double)>;

/// Find a root of f inside the bracket. Bisection with secant acceleration;
/// the secant step is taken only when it lands strictly inside the current
/// bracket, so convergence is guaranteed for any continuous f with
/// f(lo)*f(hi) <= 0.
///
/// Stops when |f(x)| <= abs_tol or the bracket width shrinks below
/// abs_tol + rel_tol*|x|. Throws NoSignChange if the endpoints have the
/// same strict sign, MaxIterExceeded past tol.max_iter.
double find_root(const ScalarFn& f, Bracket bracket, Tolerance tol = {});

/// Result of a 1-D maximization. `degenerate` is set when the function was
/// flat over every probe point (constant up to roundoff), in which case
/// `argmax` is just a point of the bracket.
struct MaxResult {
    double argmax = 0.0;
    double value = 0.0;
    bool degenerate = false;
};

/// Golden-section search for the maximizer of a unimodal f on the bracket.
MaxResult maximize_1d(const ScalarFn& f, Bracket bracket, Tolerance tol = {});

/// Solve x = h(x) by damped iteration x <- (1-omega)*x + omega*h(x),
/// clamping iterates to the bracket. Falls back to bisection on
/// x - h(x) when the damped iteration stalls or oscillates (h with slope
/// steeper than the damping can absorb). Returns x with |x - h(x)| <= abs_tol.
double fixed_point(const ScalarFn& h, double init, Bracket bracket,
                   Tolerance tol = {}, double damping = 0.5);

/// Default central-difference step at x: max(1e-5, 1e-5*|x|).
double default_fd_step(double x);

/// Central finite difference: order 1 gives (f(x+h)-f(x-h))/(2h),
/// order 2 gives (f(x+h)-2f(x)+f(x-h))/h^2. Throws DomainError when a
/// stencil evaluation is not finite.
double fd_derivative(const ScalarFn& f, double x, int order, double step);

}  // namespace netecon::numerics
