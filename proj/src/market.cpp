#include "netecon/market.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <string>

namespace netecon::market {

using demand::CongestionKind;
using equilibrium::Equilibrium;
using equilibrium::GameSpec;

std::vector<double> ScenarioConfig::default_grid() {
    std::vector<double> grid(101);
    for (int i = 0; i <= 100; ++i) grid[i] = static_cast<double>(i) / 100.0;
    return grid;
}

void ScenarioConfig::validate() const {
    demand.validate();
    if (!std::isfinite(p_s)) throw DomainError("ScenarioConfig: p_s must be finite");
    if (regime == Regime::Internet && p_s < 0.0)
        throw DomainError("ScenarioConfig: the Internet regime requires p_s >= 0");
    if (regime == Regime::ICN && p_s > 0.0)
        throw DomainError("ScenarioConfig: the ICN regime requires p_s <= 0");
    for (std::size_t i = 0; i < kappa_grid.size(); ++i) {
        double k = kappa_grid[i];
        if (!(k >= 0.0 && k <= 1.0))
            throw DomainError("ScenarioConfig: kappa_grid values must lie in [0, 1]");
        if (i > 0 && k < kappa_grid[i - 1])
            throw DomainError("ScenarioConfig: kappa_grid must be sorted ascending");
    }
}

namespace {

double cache_cost_at(const ScenarioConfig& config, double kappa) {
    if (config.regime == Regime::Internet || !config.cost_model) return 0.0;
    return caching::cost_of_kappa(kappa, *config.cost_model);
}

// Solve one kappa point without throwing on the validity bound: the total
// price and demand never depend on the side payment, so the equilibrium is
// solved at p_s = 0 (always interior) and the actual side payment only
// moves the split, which may then land outside the interior range.
SweepRecord solve_point(const ScenarioConfig& config, double kappa) {
    if (config.regime == Regime::Internet) kappa = 0.0;
    if (!(kappa >= 0.0 && kappa <= 1.0))
        throw DomainError("solve_scenario: kappa outside [0, 1]");

    demand::DemandParams params = config.demand;
    params.kappa = kappa;
    const double scale = config.regime == Regime::ICN ? 1.0 - kappa : 1.0;
    const double cost = cache_cost_at(config, kappa);

    GameSpec base{params, 0.0, scale, cost};
    Equilibrium eq = params.g_kind == CongestionKind::MM1
                         ? equilibrium::nash_numeric_foc(base)
                         : equilibrium::nash_concave_closed(base);

    const double s = scale * config.p_s;
    const double half = eq.p_total / 2.0;

    SweepRecord rec;
    rec.kappa = kappa;
    rec.a = params.curvature();
    rec.p1 = half - s;
    rec.p2 = half + s;
    rec.p_total = rec.p1 + rec.p2;
    rec.demand = eq.demand_at_eq;
    rec.u1 = half * rec.demand - cost;
    rec.u2 = half * rec.demand;
    rec.cache_cost = cost;
    rec.valid_interior = std::abs(s) < half;
    return rec;
}

std::vector<SweepRecord> sweep_impl(const ScenarioConfig& config, bool parallel) {
    config.validate();
    if (config.kappa_grid.empty())
        throw DomainError("kappa_sweep: kappa_grid must be nonempty");

    const int n = static_cast<int>(config.kappa_grid.size());
    std::vector<SweepRecord> records(static_cast<std::size_t>(n));
    std::vector<std::exception_ptr> failures(static_cast<std::size_t>(n));

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel)
#endif
    for (int i = 0; i < n; ++i) {
        try {
            records[i] = solve_point(config, config.kappa_grid[i]);
        } catch (...) {
            failures[i] = std::current_exception();
        }
    }
    for (int i = 0; i < n; ++i)
        if (failures[i]) std::rethrow_exception(failures[i]);
    return records;
}

}  // namespace

SweepRecord solve_scenario(const ScenarioConfig& config, double kappa) {
    config.validate();
    SweepRecord rec = solve_point(config, kappa);
    if (!rec.valid_interior) {
        double s = (config.regime == Regime::ICN ? 1.0 - rec.kappa : 1.0) * config.p_s;
        throw SidePaymentTooLarge(
            s, rec.p_total / 2.0,
            "solve_scenario: interior validity fails at kappa = " +
                std::to_string(rec.kappa));
    }
    return rec;
}

std::vector<SweepRecord> kappa_sweep(const ScenarioConfig& config) {
    return sweep_impl(config, true);
}

std::vector<SweepRecord> kappa_sweep_serial(const ScenarioConfig& config) {
    return sweep_impl(config, false);
}

OptimalKappa optimal_kappa(const ScenarioConfig& config, double refine_tol) {
    config.validate();
    if (config.regime != Regime::ICN)
        throw DomainError("optimal_kappa: only defined for the ICN regime");
    if (!(refine_tol > 0.0))
        throw DomainError("optimal_kappa: refine_tol must be > 0");

    const auto records = kappa_sweep(config);
    const auto& grid = config.kappa_grid;
    const int n = static_cast<int>(records.size());

    constexpr double kInvalid = -std::numeric_limits<double>::infinity();
    auto grid_value = [&](int i) {
        return records[i].valid_interior ? records[i].u1 : kInvalid;
    };
    auto live_value = [&](double kappa) {
        SweepRecord rec = solve_point(config, kappa);
        return rec.valid_interior ? rec.u1 : -1e300;
    };

    // Local maxima of the coarse scan; each gets its own refinement bracket.
    std::vector<int> maxima;
    for (int i = 0; i < n; ++i) {
        double v = grid_value(i);
        if (v == kInvalid) continue;
        bool left_ok = i == 0 || grid_value(i - 1) <= v;
        bool right_ok = i == n - 1 || grid_value(i + 1) <= v;
        if (left_ok && right_ok) maxima.push_back(i);
    }
    if (maxima.empty())
        throw Error("optimal_kappa: no interior-valid kappa on the grid");

    // Plateaus of equal value count as a single maximum.
    int distinct = 1;
    for (std::size_t m = 1; m < maxima.size(); ++m)
        if (maxima[m] != maxima[m - 1] + 1 ||
            grid_value(maxima[m]) != grid_value(maxima[m - 1]))
            ++distinct;

    double best_kappa = grid[maxima.front()];
    double best_value = grid_value(maxima.front());
    for (int i : maxima) {
        if (grid_value(i) > best_value) {
            best_value = grid_value(i);
            best_kappa = grid[i];
        }
        double lo = grid[std::max(0, i - 1)];
        double hi = grid[std::min(n - 1, i + 1)];
        if (!(lo < hi)) continue;
        numerics::Tolerance tol;
        tol.abs_tol = refine_tol;
        auto refined = numerics::maximize_1d(live_value, {lo, hi}, tol);
        if (refined.value > best_value ||
            (refined.value == best_value && refined.argmax < best_kappa)) {
            best_value = refined.value;
            best_kappa = refined.argmax;
        }
    }

    OptimalKappa result;
    result.kappa_star = std::clamp(best_kappa, 0.0, 1.0);
    result.record = solve_point(config, result.kappa_star);
    result.multiple_maxima = distinct > 1;
    return result;
}

}  // namespace netecon::market
