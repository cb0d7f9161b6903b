#pragma once

#include <iosfwd>
#include <vector>

#include "netecon/errors.hpp"

namespace netecon::caching {

/// Popularity of content across a population of N end-users: pi(j) is the
/// fraction of items of interest to exactly j users, nonincreasing in j
/// (most content is minimally popular). Either a tabulated mass over
/// j = 0..N or the continuous uniform density on [0, N].
///
/// Caching proceeds from the most popular class downward. For a caching
/// depth f in [0, N], coverage_weight(f) is the user-interest-weighted
/// fraction covered (the caching factor kappa) and coverage_mass(f) the
/// fraction of items cached (the cost before scaling). Both are normalized
/// to hit 0 at f = 0 and 1 at f = N.
///
/// Tabulated distributions count depth in whole popularity classes with
/// linear interpolation in between; the class j = 0 (items no user wants)
/// carries no interest weight and is excluded from the coverage
/// normalization, which keeps the kappa-f relation strictly increasing.
class PopularityDistribution {
public:
    static PopularityDistribution uniform_continuous(int n_users);
    static PopularityDistribution truncated_zipf(double exponent, int n_users);
    static PopularityDistribution custom(std::vector<double> mass);

    /// Load a tabulated distribution from CSV with header `j,pi` and rows
    /// j = 0..N in ascending order. Mass is renormalized to sum to 1;
    /// non-monotone input is rejected with the offending row number.
    static PopularityDistribution from_csv(std::istream& in);

    int n_users() const { return n_users_; }
    bool is_continuous() const { return continuous_; }

    double coverage_weight(double f) const;
    double coverage_mass(double f) const;

private:
    PopularityDistribution() = default;

    bool continuous_ = false;
    int n_users_ = 0;
    std::vector<double> mass_;      // pi(0..N), tabulated case only
    std::vector<double> top_weight_;  // cumulative j*pi(j), top k classes
    std::vector<double> top_mass_;    // cumulative pi(j), top k classes

    void build_prefix_sums();
};

/// Caching cost model: a popularity distribution plus the scale gamma that
/// converts the normalized cached-item fraction into utility units.
struct CachingCostModel {
    PopularityDistribution distribution;
    double cost_scale = 1.0;
};

/// Caching factor reached at caching depth f in [0, N].
double kappa_of_f(double f, const PopularityDistribution& dist);

/// Inverse of kappa_of_f, by bracketed root finding.
double f_of_kappa(double kappa, const PopularityDistribution& dist);

/// Cost of reaching caching factor kappa: gamma * item fraction at
/// f_of_kappa(kappa). Zero at kappa = 0, gamma at kappa = 1.
double cost_of_kappa(double kappa, const CachingCostModel& model);

struct ConvexityReport {
    bool passed = false;
    double min_first_diff = 0.0;
    double min_second_diff = 0.0;
    int n_grid = 0;
};

/// Probe cost_of_kappa on a uniform grid and report the smallest first and
/// second differences. Passes when first differences stay above -1e-10 and
/// second differences above -1e-8 (increasing and convex up to roundoff).
ConvexityReport check_convexity(const CachingCostModel& model, int n_grid);

}  // namespace netecon::caching
