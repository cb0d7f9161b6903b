#include "netecon/demand.hpp"

#include <algorithm>
#include <cmath>

#include "netecon/numerics.hpp"

namespace netecon::demand {

void DemandParams::validate() const {
    if (!(d_max > 0.0)) throw DomainError("DemandParams: d_max must be > 0");
    if (!(d_sens > 0.0)) throw DomainError("DemandParams: d_sens must be > 0");
    if (!(lambda >= 0.0)) throw DomainError("DemandParams: lambda must be >= 0");
    if (!(bandwidth > lambda))
        throw DomainError("DemandParams: bandwidth must exceed lambda");
    if (!(kappa >= 0.0 && kappa <= 1.0))
        throw DomainError("DemandParams: kappa must lie in [0, 1]");
}

double DemandParams::curvature() const {
    if (g_kind == CongestionKind::None) return 0.0;
    return (1.0 - kappa) / (bandwidth - lambda);
}

double tilde_demand(double p, const DemandParams& params) {
    params.validate();
    if (p < 0.0 || p > params.p_max())
        throw PriceOutOfRange("tilde_demand: price outside [0, p_max]");
    return std::max(0.0, params.d_max - p * params.d_sens);
}

namespace {

// g_kappa without preconditions: clamped to [0, 1], zero at and beyond the
// effective capacity so it never divides by a nonpositive headroom.
double safe_congestion_factor(double dval, const DemandParams& params) {
    if (params.g_kind == CongestionKind::None) return 1.0;
    double carried = (1.0 - params.kappa) * dval;
    double headroom = params.bandwidth - params.lambda;
    if (carried >= headroom) return 0.0;
    double g;
    if (params.g_kind == CongestionKind::Linear) {
        g = (headroom - carried) / headroom;
    } else {
        g = (1.0 - params.lambda / (params.bandwidth - carried)) /
            (1.0 - params.lambda / params.bandwidth);
    }
    return std::clamp(g, 0.0, 1.0);
}

}  // namespace

double congestion_factor(double dval, const DemandParams& params) {
    params.validate();
    if (dval < 0.0) throw DomainError("congestion_factor: demand must be >= 0");
    if ((1.0 - params.kappa) * dval >= params.bandwidth)
        throw CapacityExceeded("congestion_factor: carried demand at or above bandwidth");
    return safe_congestion_factor(dval, params);
}

DemandValue demand_fixed_point(double p, const DemandParams& params) {
    params.validate();
    double tilde = tilde_demand(p, params);
    if (tilde == 0.0) return {0.0, false};
    if (params.g_kind == CongestionKind::None || params.kappa == 1.0)
        return {tilde, false};

    double cap = (params.bandwidth - params.lambda) / (1.0 - params.kappa);
    double hi = std::min(tilde, cap);
    auto h = [&](double dval) { return safe_congestion_factor(dval, params) * tilde; };
    double value = numerics::fixed_point(h, 0.5 * hi, {0.0, hi});
    bool clamped = value < 1e-12 && tilde > 0.0;
    return {value, clamped};
}

DemandValue demand_closed_form(double p, const DemandParams& params) {
    params.validate();
    if (params.g_kind == CongestionKind::MM1)
        throw DomainError("demand_closed_form: no closed form for the MM1 congestion factor");
    if (p < 0.0 || p > params.p_max())
        throw PriceOutOfRange("demand_closed_form: price outside [0, p_max]");
    if (p == params.p_max()) return {0.0, false};

    double tilde = params.d_max - p * params.d_sens;
    double a = params.curvature();
    if (a == 0.0) return {tilde, false};
    return {1.0 / (1.0 / tilde + a), false};
}

double demand_derivative(double p, const DemandParams& params) {
    params.validate();
    if (p < 0.0 || p >= params.p_max())
        throw PriceOutOfRange("demand_derivative: price outside [0, p_max)");

    if (params.g_kind != CongestionKind::MM1) {
        // Derivative of (1/tilde + a)^-1; algebraically -d_sens*D^2/tilde^2,
        // written in the form that stays finite as tilde -> 0.
        double tilde = params.d_max - p * params.d_sens;
        double scale = 1.0 + params.curvature() * tilde;
        return -params.d_sens / (scale * scale);
    }

    auto f = [&](double q) { return demand_fixed_point(q, params).value; };
    double pmax = params.p_max();
    if (p == 0.0) {
        // second-order one-sided stencil at the left edge
        double h = std::min(numerics::default_fd_step(0.0), 0.25 * pmax);
        return (-3.0 * f(0.0) + 4.0 * f(h) - f(2.0 * h)) / (2.0 * h);
    }
    double step = std::min({numerics::default_fd_step(p), 0.49 * (pmax - p), 0.49 * p});
    return numerics::fd_derivative(f, p, 1, step);
}

double eval_demand(double p, const DemandParams& params) {
    if (params.g_kind == CongestionKind::MM1) return demand_fixed_point(p, params).value;
    return demand_closed_form(p, params).value;
}

}  // namespace netecon::demand
