#pragma once

#include <utility>
#include <vector>

#include "netecon/demand.hpp"
#include "netecon/numerics.hpp"

namespace netecon::equilibrium {

/// The two-player pricing game. Player 1 (the ISP) charges p1 and receives
/// the side payment; player 2 (the CP) charges p2 and pays it. The side
/// payment enters scaled by side_payment_scale (1 on the plain Internet,
/// 1-kappa under ISP caching), and fixed_cost_isp is subtracted from the
/// ISP utility only.
struct GameSpec {
    demand::DemandParams demand;
    double side_payment = 0.0;
    double side_payment_scale = 1.0;
    double fixed_cost_isp = 0.0;

    void validate() const;
    double effective_side_payment() const { return side_payment_scale * side_payment; }
};

enum class Method {
    ClosedFormLinear,
    ClosedFormConcave,
    NumericFoc,
    BestResponseIteration,
};

const char* method_name(Method m);

/// An interior Nash equilibrium of the pricing game. p_total is always the
/// floating-point sum p1 + p2. foc_residual is |D(p) + D'(p) p/2| at the
/// reported total price; valid_interior requires the scaled side payment
/// to stay strictly below p_total/2.
struct Equilibrium {
    double p1 = 0.0;
    double p2 = 0.0;
    double p_total = 0.0;
    double demand_at_eq = 0.0;
    double u1 = 0.0;
    double u2 = 0.0;
    Method method = Method::NumericFoc;
    double foc_residual = 0.0;
    bool valid_interior = false;
};

/// (p1 + s*p_s) * D(p1+p2) - fixed_cost_isp
double utility_isp(double p1, double p2, const GameSpec& spec);

/// (p2 - s*p_s) * D(p1+p2)
double utility_cp(double p1, double p2, const GameSpec& spec);

/// Closed-form equilibrium for linear demand (CongestionKind::None or
/// kappa = 1): p1 = D_max/(3d) - s, p2 = D_max/(3d) + s, gross utilities
/// D_max^2/(9d) each. Throws SidePaymentTooLarge when |s| >= D_max/(3d).
Equilibrium nash_linear(const GameSpec& spec);

/// Closed-form equilibrium total price for the concave demand with
/// curvature a > 0:
///
///   p* = (4 a D_max + 3 - sqrt(8 a D_max + 9)) / (4 a d)
///
/// split as p1 = p*/2 - s, p2 = p*/2 + s. The expression cancels
/// catastrophically as a -> 0, so for a*D_max below 1e-7 the total price is
/// taken from the numeric first-order-condition root instead (whose limit
/// is the linear value (2/3) D_max/d).
Equilibrium nash_concave_closed(const GameSpec& spec);

/// Equilibrium via root finding on the first-order condition
/// F(p) = D(p) + D'(p) p/2 over the given bracket. Works for every
/// congestion kind, including MM1 where no closed form exists.
Equilibrium nash_numeric_foc(const GameSpec& spec, numerics::Bracket bracket);

/// As above on the default bracket [1e-6, 1 - 1e-6] * p_max, which straddles
/// the FOC sign change for any decreasing concave demand.
Equilibrium nash_numeric_foc(const GameSpec& spec);

struct BestResponse {
    double price = 0.0;
    bool degenerate = false;  ///< feasible interval empty or utility flat
};

/// Utility-maximizing own price for `player` (1 = ISP, 2 = CP) against a
/// fixed opponent price, searched over the feasible interval
/// [max(0, -own transfer), p_max - p_other].
BestResponse best_response(int player, double p_other, const GameSpec& spec);

struct Trajectory {
    struct Point {
        double p1;
        double p2;
    };
    std::vector<Point> points;  ///< points[0] is the initial condition
    bool converged = false;
};

/// Iterated myopic best responses. Simultaneous (Jacobi) updates by
/// default, matching play at the same time-scale; sequential updates
/// (player 1 first) when simultaneous = false. Stops early once both
/// coordinates move less than tol. Non-convergence is reported, not thrown.
Trajectory best_response_dynamics(const GameSpec& spec,
                                  std::pair<double, double> init, int rounds,
                                  bool simultaneous = true, double tol = 1e-7);

struct DeviationReport {
    bool passed = false;
    double max_gain_isp = 0.0;    ///< best utility improvement found, player 1
    double max_gain_cp = 0.0;     ///< best utility improvement found, player 2
    double best_price_isp = 0.0;  ///< deviation achieving max_gain_isp
    double best_price_cp = 0.0;
    bool boundary_proximity = false;  ///< side payment within 1e-6 of p*/2
    int n_deviations = 0;
};

/// Definitional Nash check: scan n_deviations uniform own-price deviations
/// per player and pass iff no deviation improves utility by more than 1e-9.
/// The scan is OpenMP-parallel; results are identical to the serial twin.
DeviationReport verify_nash(const Equilibrium& eq, const GameSpec& spec,
                            int n_deviations);

/// Serial reference for verify_nash.
DeviationReport verify_nash_serial(const Equilibrium& eq, const GameSpec& spec,
                                   int n_deviations);

}  // namespace netecon::equilibrium
