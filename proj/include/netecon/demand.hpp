#pragma once

#include "netecon/errors.hpp"

namespace netecon::demand {

/// Congestion-factor family applied on top of the linear price response.
enum class CongestionKind {
    None,    ///< no congestion loss; demand is linear in price
    Linear,  ///< g(D) = (B - lambda - D)/(B - lambda)
    MM1,     ///< g(D) = (1 - lambda/(B - D))/(1 - lambda/B)
};

/// Parameters of the demand-response family.
///
/// d_max is the demand at zero price, d_sens the linear sensitivity to
/// price, bandwidth/lambda the capacity and offset of the congestion
/// factor, and kappa the caching factor: a cached fraction kappa means
/// only (1-kappa) of the demand crosses the congested link.
struct DemandParams {
    double d_max = 1.0;
    double d_sens = 1.0;
    double bandwidth = 2.0;
    double lambda = 0.0;
    double kappa = 0.0;
    CongestionKind g_kind = CongestionKind::Linear;

    void validate() const;

    /// Price at which the zero-congestion demand reaches zero: d_max/d_sens.
    double p_max() const { return d_max / d_sens; }

    /// Curvature parameter of the closed-form demand, (1-kappa)/(B-lambda).
    /// Zero for CongestionKind::None and for kappa = 1, both of which make
    /// the demand exactly linear in price.
    double curvature() const;
};

/// Realized demand. `clamped` records whether the nonnegativity clamp (or
/// the capacity clamp on the congestion factor) was active; interior
/// equilibrium theory assumes it is not.
struct DemandValue {
    double value = 0.0;
    bool clamped = false;
};

/// Linear price response d_max - p*d_sens, valid on [0, p_max].
double tilde_demand(double p, const DemandParams& params);

/// Congestion factor at carried demand dval, caching applied:
/// g_kappa(D) = g((1-kappa)*D), clamped to [0, 1]. Throws CapacityExceeded
/// when (1-kappa)*dval >= bandwidth.
double congestion_factor(double dval, const DemandParams& params);

/// Demand as the fixed point of D = [g_kappa(D) * tilde_demand(p)]+,
/// solved numerically. Works for every CongestionKind.
DemandValue demand_fixed_point(double p, const DemandParams& params);

/// Closed-form demand (1/(d_max - p*d_sens) + a)^-1 with a = curvature().
/// Only defined for the Linear and None congestion kinds; p = p_max returns
/// zero demand without touching the reciprocal.
DemandValue demand_closed_form(double p, const DemandParams& params);

/// dD/dp. Analytic (-d_sens/(1 + a*tilde)^2) for Linear/None kinds; a
/// finite difference of the fixed-point demand for MM1. Strictly negative.
double demand_derivative(double p, const DemandParams& params);

/// Demand via the cheapest exact route: closed form when one exists,
/// fixed point otherwise.
double eval_demand(double p, const DemandParams& params);

}  // namespace netecon::demand
