#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "netecon/equilibrium.hpp"
#include "netecon/market.hpp"

namespace netecon::io {

/// Fixed-precision numeric formatting used for all emitted tables:
/// 13 significant digits, enough for a parse-back error below 1e-12
/// relative while staying readable.
std::string format_number(double v);

/// "true" / "false".
std::string format_bool(bool b);

inline constexpr const char* kSweepCsvHeader =
    "kappa,a,p1,p2,p_total,demand,u1,u2,cache_cost,valid_interior";

inline constexpr const char* kEquilibriumCsvHeader =
    "p1,p2,p_total,demand,u1,u2,method,foc_residual,valid_interior";

std::string sweep_csv(const std::vector<market::SweepRecord>& records);
std::string sweep_json(const std::vector<market::SweepRecord>& records);

/// Parse a sweep CSV (as emitted by sweep_csv / the CLI). Lines starting
/// with '#' are ignored. Throws DomainError on a malformed header or row.
std::vector<market::SweepRecord> parse_sweep_csv(std::istream& in);

std::string equilibrium_csv(const equilibrium::Equilibrium& eq);
std::string equilibrium_json(const equilibrium::Equilibrium& eq);
equilibrium::Equilibrium parse_equilibrium_csv(std::istream& in);

equilibrium::Method method_from_name(const std::string& name);

}  // namespace netecon::io
