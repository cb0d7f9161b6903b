#pragma once

#include <optional>
#include <vector>

#include "netecon/caching.hpp"
#include "netecon/demand.hpp"
#include "netecon/equilibrium.hpp"

namespace netecon::market {

/// Internet: side payment flows CP -> ISP (p_s >= 0), no caching.
/// ICN: side payment flows ISP -> CP (p_s <= 0), the ISP caches a fraction
/// kappa of content, which scales the side payment by (1-kappa), relaxes
/// the congested link and costs c(kappa).
enum class Regime { Internet, ICN };

struct ScenarioConfig {
    Regime regime = Regime::ICN;
    demand::DemandParams demand;
    double p_s = 0.0;
    /// Caching cost model (ICN). Absent means free caching (cost 0).
    std::optional<caching::CachingCostModel> cost_model;
    /// kappa values for kappa_sweep, sorted, within [0, 1].
    std::vector<double> kappa_grid = default_grid();

    void validate() const;
    static std::vector<double> default_grid();  ///< 101 uniform points on [0,1]
};

/// One solved point of a kappa sweep. u1 is net of cache_cost; records with
/// valid_interior = false mark kappa values where the scaled side payment
/// violates the interior bound |s| < p_total/2 (the totals are still the
/// equilibrium ones, only the split is out of range).
struct SweepRecord {
    double kappa = 0.0;
    double a = 0.0;  ///< demand curvature (1-kappa)/(B-lambda) at this point
    double p1 = 0.0;
    double p2 = 0.0;
    double p_total = 0.0;
    double demand = 0.0;
    double u1 = 0.0;
    double u2 = 0.0;
    double cache_cost = 0.0;
    bool valid_interior = false;
};

/// Solve the scenario at one caching factor (forced to 0 for Internet).
/// Throws SidePaymentTooLarge when the interior bound fails at this kappa.
SweepRecord solve_scenario(const ScenarioConfig& config, double kappa);

/// Solve every kappa on the grid, in grid order. Validity failures are
/// flagged in the records rather than thrown. Grid points are independent,
/// so this kernel runs the solves OpenMP-parallel; output is identical to
/// kappa_sweep_serial regardless of thread count or schedule.
std::vector<SweepRecord> kappa_sweep(const ScenarioConfig& config);

/// Serial reference for kappa_sweep.
std::vector<SweepRecord> kappa_sweep_serial(const ScenarioConfig& config);

struct OptimalKappa {
    double kappa_star = 0.0;
    SweepRecord record;
    /// The coarse grid scan of U1(kappa) showed more than one local
    /// maximum; every bracket was refined and the best is returned.
    bool multiple_maxima = false;
};

/// Maximize the ISP utility over kappa (ICN only): coarse scan on the
/// config grid, then golden-section refinement of each bracketing interval
/// to within refine_tol. No unimodality of U1(kappa) is assumed.
OptimalKappa optimal_kappa(const ScenarioConfig& config, double refine_tol);

}  // namespace netecon::market
