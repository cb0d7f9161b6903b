#include "netecon/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace netecon::numerics {

void Tolerance::validate() const {
    if (!(abs_tol > 0.0)) throw DomainError("Tolerance: abs_tol must be > 0");
    if (!(rel_tol >= 0.0)) throw DomainError("Tolerance: rel_tol must be >= 0");
    if (max_iter < 1) throw DomainError("Tolerance: max_iter must be >= 1");
}

void Bracket::validate() const {
    if (!(lo < hi)) throw DomainError("Bracket: requires lo < hi");
    if (!std::isfinite(lo) || !std::isfinite(hi))
        throw DomainError("Bracket: endpoints must be finite");
}

double find_root(const ScalarFn& f, Bracket bracket, Tolerance tol) {
    bracket.validate();
    tol.validate();

    double a = bracket.lo;
    double b = bracket.hi;
    double fa = f(a);
    double fb = f(b);

    if (std::abs(fa) <= tol.abs_tol) return a;
    if (std::abs(fb) <= tol.abs_tol) return b;
    if (fa * fb > 0.0)
        throw NoSignChange("find_root: f has the same sign at both bracket endpoints");

    for (int iter = 0; iter < tol.max_iter; ++iter) {
        // Secant candidate on alternating iterations, accepted only when it
        // falls strictly inside; the interleaved bisection steps prevent the
        // one-sided stagnation of pure false position on curved functions.
        double x = 0.5 * (a + b);
        if (iter % 2 == 0 && fb != fa) {
            double s = b - fb * (b - a) / (fb - fa);
            if (s > a && s < b) x = s;
        }

        double fx = f(x);
        if (std::abs(fx) <= tol.abs_tol) return x;

        if (fa * fx <= 0.0) {
            b = x;
            fb = fx;
        } else {
            a = x;
            fa = fx;
        }

        if (b - a <= tol.abs_tol + tol.rel_tol * std::abs(x)) return 0.5 * (a + b);
    }
    throw MaxIterExceeded("find_root: no convergence within max_iter");
}

MaxResult maximize_1d(const ScalarFn& f, Bracket bracket, Tolerance tol) {
    bracket.validate();
    tol.validate();

    // inverse golden ratio
    static const double kInvPhi = (std::sqrt(5.0) - 1.0) / 2.0;

    double a = bracket.lo;
    double b = bracket.hi;
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double fc = f(c);
    double fd = f(d);

    double f_min = std::min(fc, fd);
    double f_max = std::max(fc, fd);

    bool converged = false;
    for (int iter = 0; iter < tol.max_iter; ++iter) {
        if (b - a <= tol.abs_tol + tol.rel_tol * (std::abs(a) + std::abs(b))) {
            converged = true;
            break;
        }
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kInvPhi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kInvPhi * (b - a);
            fd = f(d);
        }
        f_min = std::min(f_min, std::min(fc, fd));
        f_max = std::max(f_max, std::max(fc, fd));
    }
    if (!converged) throw MaxIterExceeded("maximize_1d: no convergence within max_iter");

    MaxResult result;
    result.argmax = 0.5 * (a + b);
    result.value = f(result.argmax);
    f_max = std::max(f_max, result.value);
    result.degenerate = (f_max - f_min) <= 1e-13 * std::max(1.0, std::abs(f_max));
    return result;
}

double fixed_point(const ScalarFn& h, double init, Bracket bracket,
                   Tolerance tol, double damping) {
    bracket.validate();
    tol.validate();
    if (!(damping > 0.0 && damping <= 1.0))
        throw DomainError("fixed_point: damping must lie in (0, 1]");

    auto clamp = [&](double x) { return std::clamp(x, bracket.lo, bracket.hi); };

    double x = clamp(init);
    double best_residual = std::numeric_limits<double>::infinity();
    int stalled = 0;

    for (int iter = 0; iter < tol.max_iter; ++iter) {
        double hx = h(x);
        double residual = std::abs(x - hx);
        if (residual <= tol.abs_tol) return x;

        if (residual < 0.5 * best_residual) {
            best_residual = residual;
            stalled = 0;
        } else if (++stalled >= 6) {
            break;  // oscillating or stalled; switch to bisection
        }
        x = clamp((1.0 - damping) * x + damping * hx);
    }

    // Bisection on the residual g(x) = x - h(x); g is increasing whenever h
    // is a decreasing map, so the bracket endpoints straddle the solution.
    return find_root([&](double y) { return y - h(y); }, bracket, tol);
}

double default_fd_step(double x) { return std::max(1e-5, 1e-5 * std::abs(x)); }

double fd_derivative(const ScalarFn& f, double x, int order, double step) {
    if (!(step > 0.0)) throw DomainError("fd_derivative: step must be > 0");
    if (order != 1 && order != 2)
        throw DomainError("fd_derivative: order must be 1 or 2");

    double f_plus = f(x + step);
    double f_minus = f(x - step);
    if (!std::isfinite(f_plus) || !std::isfinite(f_minus))
        throw DomainError("fd_derivative: function not finite at stencil points");

    if (order == 1) return (f_plus - f_minus) / (2.0 * step);

    double f0 = f(x);
    if (!std::isfinite(f0))
        throw DomainError("fd_derivative: function not finite at stencil points");
    return (f_plus - 2.0 * f0 + f_minus) / (step * step);
}

}  // namespace netecon::numerics
