#include "netecon/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace netecon::equilibrium {

using demand::CongestionKind;
using demand::DemandParams;

void GameSpec::validate() const {
    demand.validate();
    if (!std::isfinite(side_payment))
        throw DomainError("GameSpec: side_payment must be finite");
    if (!(side_payment_scale >= 0.0 && side_payment_scale <= 1.0))
        throw DomainError("GameSpec: side_payment_scale must lie in [0, 1]");
    if (!(fixed_cost_isp >= 0.0))
        throw DomainError("GameSpec: fixed_cost_isp must be >= 0");
}

const char* method_name(Method m) {
    switch (m) {
        case Method::ClosedFormLinear: return "closed_form_linear";
        case Method::ClosedFormConcave: return "closed_form_concave";
        case Method::NumericFoc: return "numeric_foc";
        case Method::BestResponseIteration: return "best_response_iteration";
    }
    return "unknown";
}

namespace {

double demand_at_total(double p1, double p2, const GameSpec& spec) {
    double total = p1 + p2;
    if (total < 0.0 || total > spec.demand.p_max())
        throw PriceOutOfRange("utility: total price outside [0, p_max]");
    return demand::eval_demand(total, spec.demand);
}

// First-order condition for the total price: D(p) + D'(p) p/2 = 0.
double foc_value(double p, const DemandParams& params) {
    return demand::eval_demand(p, params) +
           demand::demand_derivative(p, params) * p / 2.0;
}

numerics::Bracket default_foc_bracket(const DemandParams& params) {
    double pmax = params.p_max();
    return {1e-6 * pmax, (1.0 - 1e-6) * pmax};
}

// Split a solved total price into player prices, check the interior
// validity bound and evaluate utilities.
Equilibrium finish_equilibrium(const GameSpec& spec, double p_star, Method method) {
    double s = spec.effective_side_payment();
    double half = p_star / 2.0;
    if (std::abs(s) >= half)
        throw SidePaymentTooLarge(
            s, half,
            "interior equilibrium requires |scaled side payment| < p*/2 = " +
                std::to_string(half));

    Equilibrium eq;
    eq.method = method;
    eq.p1 = half - s;
    eq.p2 = half + s;
    eq.p_total = eq.p1 + eq.p2;
    eq.demand_at_eq = demand::eval_demand(eq.p_total, spec.demand);
    eq.u1 = utility_isp(eq.p1, eq.p2, spec);
    eq.u2 = utility_cp(eq.p1, eq.p2, spec);
    eq.foc_residual = std::abs(foc_value(eq.p_total, spec.demand));
    eq.valid_interior = true;
    return eq;
}

}  // namespace

double utility_isp(double p1, double p2, const GameSpec& spec) {
    spec.validate();
    return (p1 + spec.effective_side_payment()) * demand_at_total(p1, p2, spec) -
           spec.fixed_cost_isp;
}

double utility_cp(double p1, double p2, const GameSpec& spec) {
    spec.validate();
    return (p2 - spec.effective_side_payment()) * demand_at_total(p1, p2, spec);
}

Equilibrium nash_linear(const GameSpec& spec) {
    spec.validate();
    if (spec.demand.curvature() != 0.0)
        throw DomainError("nash_linear: demand is not linear (needs g_kind None or kappa = 1)");

    const double dm = spec.demand.d_max;
    const double d = spec.demand.d_sens;
    const double base = dm / (3.0 * d);
    const double s = spec.effective_side_payment();
    if (std::abs(s) >= base)
        throw SidePaymentTooLarge(
            s, base, "|scaled side payment| must stay below D_max/(3d) = " +
                         std::to_string(base));

    Equilibrium eq;
    eq.method = Method::ClosedFormLinear;
    eq.p1 = base - s;
    eq.p2 = base + s;
    eq.p_total = eq.p1 + eq.p2;
    eq.demand_at_eq = dm / 3.0;
    double gross = dm * dm / (9.0 * d);
    eq.u1 = gross - spec.fixed_cost_isp;
    eq.u2 = gross;
    eq.foc_residual = 0.0;
    eq.valid_interior = true;
    return eq;
}

Equilibrium nash_concave_closed(const GameSpec& spec) {
    spec.validate();
    if (spec.demand.g_kind == CongestionKind::MM1)
        throw DomainError("nash_concave_closed: no closed form for the MM1 congestion factor");

    const double a = spec.demand.curvature();
    const double dm = spec.demand.d_max;
    const double d = spec.demand.d_sens;

    double p_star;
    if (a * dm < 1e-7) {
        // The closed form is a 0/0 cancellation as a -> 0; the FOC root is
        // stable there and tends to the linear value (2/3) D_max/d.
        p_star = numerics::find_root(
            [&](double p) { return foc_value(p, spec.demand); },
            default_foc_bracket(spec.demand));
    } else {
        p_star = (4.0 * a * dm + 3.0 - std::sqrt(8.0 * a * dm + 9.0)) / (4.0 * a * d);
    }
    return finish_equilibrium(spec, p_star, Method::ClosedFormConcave);
}

Equilibrium nash_numeric_foc(const GameSpec& spec, numerics::Bracket bracket) {
    spec.validate();
    double p_star = numerics::find_root(
        [&](double p) { return foc_value(p, spec.demand); }, bracket);
    return finish_equilibrium(spec, p_star, Method::NumericFoc);
}

Equilibrium nash_numeric_foc(const GameSpec& spec) {
    return nash_numeric_foc(spec, default_foc_bracket(spec.demand));
}

BestResponse best_response(int player, double p_other, const GameSpec& spec) {
    spec.validate();
    if (player != 1 && player != 2)
        throw DomainError("best_response: player must be 1 or 2");
    double pmax = spec.demand.p_max();
    if (p_other < 0.0 || p_other > pmax)
        throw PriceOutOfRange("best_response: opponent price outside [0, p_max]");

    double s = spec.effective_side_payment();
    double transfer = (player == 1) ? s : -s;
    double lo = std::max(0.0, -transfer);
    double hi = pmax - p_other;
    if (hi <= lo) return {lo, true};

    auto utility = [&](double own) {
        return player == 1 ? utility_isp(own, p_other, spec)
                           : utility_cp(p_other, own, spec);
    };
    auto result = numerics::maximize_1d(utility, {lo, hi});
    return {result.argmax, result.degenerate};
}

Trajectory best_response_dynamics(const GameSpec& spec,
                                  std::pair<double, double> init, int rounds,
                                  bool simultaneous, double tol) {
    spec.validate();
    if (rounds < 1) throw DomainError("best_response_dynamics: rounds must be >= 1");
    double pmax = spec.demand.p_max();
    if (init.first < 0.0 || init.first > pmax || init.second < 0.0 ||
        init.second > pmax)
        throw PriceOutOfRange("best_response_dynamics: initial prices outside [0, p_max]");

    Trajectory traj;
    double p1 = init.first;
    double p2 = init.second;
    traj.points.push_back({p1, p2});

    for (int round = 0; round < rounds; ++round) {
        double next_p1 = best_response(1, p2, spec).price;
        double next_p2 = best_response(2, simultaneous ? p1 : next_p1, spec).price;
        traj.points.push_back({next_p1, next_p2});
        bool settled = std::abs(next_p1 - p1) < tol && std::abs(next_p2 - p2) < tol;
        p1 = next_p1;
        p2 = next_p2;
        if (settled) {
            traj.converged = true;
            break;
        }
    }
    return traj;
}

namespace {

DeviationReport verify_nash_impl(const Equilibrium& eq, const GameSpec& spec,
                                 int n_deviations, bool parallel) {
    spec.validate();
    if (!eq.valid_interior)
        throw DomainError("verify_nash: equilibrium must be interior-valid");
    if (n_deviations < 1)
        throw DomainError("verify_nash: n_deviations must be >= 1");

    const double pmax = spec.demand.p_max();
    const double s = spec.effective_side_payment();
    const double u1_eq = utility_isp(eq.p1, eq.p2, spec);
    const double u2_eq = utility_cp(eq.p1, eq.p2, spec);

    DeviationReport report;
    report.n_deviations = n_deviations;

    // Gains are written by grid index, so the argmax below is identical no
    // matter how the loop iterations are scheduled.
    std::vector<double> gains(static_cast<std::size_t>(n_deviations));
    auto scan = [&](int player, double lo, double hi, double u_eq,
                    double& max_gain, double& best_price) {
        if (hi <= lo) hi = lo;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (parallel)
#endif
        for (int j = 0; j < n_deviations; ++j) {
            double own = n_deviations == 1
                             ? lo
                             : lo + (hi - lo) * static_cast<double>(j) /
                                        static_cast<double>(n_deviations - 1);
            double u = player == 1 ? utility_isp(own, eq.p2, spec)
                                   : utility_cp(eq.p1, own, spec);
            gains[static_cast<std::size_t>(j)] = u - u_eq;
        }
        int best = 0;
        for (int j = 1; j < n_deviations; ++j)
            if (gains[static_cast<std::size_t>(j)] > gains[static_cast<std::size_t>(best)])
                best = j;
        max_gain = gains[static_cast<std::size_t>(best)];
        best_price = n_deviations == 1
                         ? lo
                         : lo + (hi - lo) * static_cast<double>(best) /
                                    static_cast<double>(n_deviations - 1);
    };

    scan(1, std::max(0.0, -s), pmax - eq.p2, u1_eq, report.max_gain_isp,
         report.best_price_isp);
    scan(2, std::max(0.0, s), pmax - eq.p1, u2_eq, report.max_gain_cp,
         report.best_price_cp);

    report.passed = report.max_gain_isp <= 1e-9 && report.max_gain_cp <= 1e-9;
    double half = eq.p_total / 2.0;
    report.boundary_proximity = (half - std::abs(s)) <= 1e-6 * std::max(1.0, half);
    return report;
}

}  // namespace

DeviationReport verify_nash(const Equilibrium& eq, const GameSpec& spec,
                            int n_deviations) {
    return verify_nash_impl(eq, spec, n_deviations, true);
}

DeviationReport verify_nash_serial(const Equilibrium& eq, const GameSpec& spec,
                                   int n_deviations) {
    return verify_nash_impl(eq, spec, n_deviations, false);
}

}  // namespace netecon::equilibrium
