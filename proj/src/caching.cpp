#include "netecon/caching.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <string>

#include "netecon/numerics.hpp"

namespace netecon::caching {

namespace {

void validate_mass(const std::vector<double>& mass) {
    if (mass.size() < 2)
        throw DomainError("PopularityDistribution: need at least 2 popularity classes");
    for (std::size_t j = 0; j < mass.size(); ++j) {
        if (!(mass[j] >= 0.0) || !std::isfinite(mass[j]))
            throw DomainError("PopularityDistribution: mass must be finite and >= 0 (class " +
                              std::to_string(j) + ")");
        if (j > 0 && mass[j] > mass[j - 1] * (1.0 + 1e-12) + 1e-300)
            throw DomainError("PopularityDistribution: mass must be nonincreasing in j (class " +
                              std::to_string(j) + ")");
    }
}

}  // namespace

void PopularityDistribution::build_prefix_sums() {
    const int n = n_users_;
    double total = 0.0;
    for (double m : mass_) total += m;
    if (!(total > 0.0))
        throw DomainError("PopularityDistribution: total mass must be positive");
    for (double& m : mass_) m /= total;

    // Cumulative sums over the top k popularity classes j = N, N-1, ..., N-k+1.
    top_weight_.assign(static_cast<std::size_t>(n) + 1, 0.0);
    top_mass_.assign(static_cast<std::size_t>(n) + 1, 0.0);
    for (int k = 1; k <= n; ++k) {
        int j = n - k + 1;
        top_weight_[k] = top_weight_[k - 1] + static_cast<double>(j) * mass_[j];
        top_mass_[k] = top_mass_[k - 1] + mass_[j];
    }
    if (!(top_weight_[n] > 0.0))
        throw DomainError("PopularityDistribution: no popularity mass on classes j >= 1");
}

PopularityDistribution PopularityDistribution::uniform_continuous(int n_users) {
    if (n_users < 1) throw DomainError("PopularityDistribution: n_users must be >= 1");
    PopularityDistribution d;
    d.continuous_ = true;
    d.n_users_ = n_users;
    return d;
}

PopularityDistribution PopularityDistribution::truncated_zipf(double exponent, int n_users) {
    if (!(exponent > 0.0))
        throw DomainError("PopularityDistribution: zipf exponent must be > 0");
    if (n_users < 1) throw DomainError("PopularityDistribution: n_users must be >= 1");
    std::vector<double> mass(static_cast<std::size_t>(n_users) + 1);
    for (int j = 0; j <= n_users; ++j)
        mass[j] = std::pow(static_cast<double>(j) + 1.0, -exponent);
    return custom(std::move(mass));
}

PopularityDistribution PopularityDistribution::custom(std::vector<double> mass) {
    validate_mass(mass);
    PopularityDistribution d;
    d.continuous_ = false;
    d.n_users_ = static_cast<int>(mass.size()) - 1;
    d.mass_ = std::move(mass);
    d.build_prefix_sums();
    return d;
}

PopularityDistribution PopularityDistribution::from_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line))
        throw DomainError("popularity CSV: empty input");

    auto trim = [](std::string s) {
        auto issp = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
        while (!s.empty() && issp(s.front())) s.erase(s.begin());
        while (!s.empty() && issp(s.back())) s.pop_back();
        return s;
    };
    if (trim(line) != "j,pi")
        throw DomainError("popularity CSV: expected header 'j,pi'");

    std::vector<double> mass;
    int row = 1;
    while (std::getline(in, line)) {
        ++row;
        line = trim(line);
        if (line.empty()) continue;
        auto comma = line.find(',');
        if (comma == std::string::npos)
            throw DomainError("popularity CSV: row " + std::to_string(row) +
                              " is not 'j,pi'");
        std::size_t pos = 0;
        long j = -1;
        double pi = 0.0;
        try {
            j = std::stol(line.substr(0, comma), &pos);
            pi = std::stod(line.substr(comma + 1));
        } catch (const std::exception&) {
            throw DomainError("popularity CSV: row " + std::to_string(row) +
                              " has a malformed number");
        }
        if (j != static_cast<long>(mass.size()))
            throw DomainError("popularity CSV: row " + std::to_string(row) +
                              " expected j=" + std::to_string(mass.size()));
        if (!(pi >= 0.0) || !std::isfinite(pi))
            throw DomainError("popularity CSV: row " + std::to_string(row) +
                              " has pi < 0 or non-finite");
        if (!mass.empty() && pi > mass.back() * (1.0 + 1e-12) + 1e-300)
            throw DomainError("popularity CSV: pi must be nonincreasing in j, violated at row " +
                              std::to_string(row));
        mass.push_back(pi);
    }
    return custom(std::move(mass));
}

double PopularityDistribution::coverage_weight(double f) const {
    const double n = static_cast<double>(n_users_);
    if (continuous_) {
        double r = 1.0 - f / n;
        return 1.0 - r * r;
    }
    int k = static_cast<int>(std::floor(f));
    if (k >= n_users_) return 1.0;
    double frac = f - static_cast<double>(k);
    int next = n_users_ - k;  // class cached after the first k, always >= 1
    return (top_weight_[k] + frac * static_cast<double>(next) * mass_[next]) /
           top_weight_[n_users_];
}

double PopularityDistribution::coverage_mass(double f) const {
    const double n = static_cast<double>(n_users_);
    if (continuous_) return f / n;
    int k = static_cast<int>(std::floor(f));
    if (k >= n_users_) return 1.0;
    double frac = f - static_cast<double>(k);
    int next = n_users_ - k;
    return (top_mass_[k] + frac * mass_[next]) / top_mass_[n_users_];
}

double kappa_of_f(double f, const PopularityDistribution& dist) {
    if (f < 0.0 || f > static_cast<double>(dist.n_users()))
        throw DomainError("kappa_of_f: f outside [0, N]");
    return dist.coverage_weight(f);
}

double f_of_kappa(double kappa, const PopularityDistribution& dist) {
    if (kappa < 0.0 || kappa > 1.0)
        throw DomainError("f_of_kappa: kappa outside [0, 1]");
    const double n = static_cast<double>(dist.n_users());
    if (kappa == 0.0) return 0.0;
    if (kappa == 1.0) return n;
    numerics::Tolerance tol;
    tol.abs_tol = 1e-13;
    tol.rel_tol = 0.0;
    return numerics::find_root(
        [&](double f) { return dist.coverage_weight(f) - kappa; }, {0.0, n}, tol);
}

double cost_of_kappa(double kappa, const CachingCostModel& model) {
    if (!(model.cost_scale >= 0.0))
        throw DomainError("cost_of_kappa: cost_scale must be >= 0");
    double f = f_of_kappa(kappa, model.distribution);
    return model.cost_scale * model.distribution.coverage_mass(f);
}

ConvexityReport check_convexity(const CachingCostModel& model, int n_grid) {
    if (n_grid < 5) throw DomainError("check_convexity: n_grid must be >= 5");

    std::vector<double> cost(static_cast<std::size_t>(n_grid));
    for (int i = 0; i < n_grid; ++i) {
        double kappa = static_cast<double>(i) / static_cast<double>(n_grid - 1);
        cost[i] = cost_of_kappa(kappa, model);
    }

    ConvexityReport report;
    report.n_grid = n_grid;
    report.min_first_diff = std::numeric_limits<double>::infinity();
    report.min_second_diff = std::numeric_limits<double>::infinity();
    for (int i = 0; i + 1 < n_grid; ++i)
        report.min_first_diff = std::min(report.min_first_diff, cost[i + 1] - cost[i]);
    for (int i = 1; i + 1 < n_grid; ++i)
        report.min_second_diff =
            std::min(report.min_second_diff, cost[i + 1] - 2.0 * cost[i] + cost[i - 1]);
    report.passed = report.min_first_diff > -1e-10 && report.min_second_diff > -1e-8;
    return report;
}

}  // namespace netecon::caching
