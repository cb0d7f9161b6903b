#include "netecon/io.hpp"

#include <cstdio>
#include <istream>
#include <sstream>

#include <json.hpp>

namespace netecon::io {

using equilibrium::Equilibrium;
using equilibrium::Method;
using market::SweepRecord;

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.13g", v);
    return buf;
}

std::string format_bool(bool b) { return b ? "true" : "false"; }

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

double parse_double(const std::string& s, int row) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\r')) ++pos;
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw DomainError("CSV row " + std::to_string(row) + ": bad number '" + s + "'");
    }
}

bool parse_bool(const std::string& s, int row) {
    std::string t = s;
    while (!t.empty() && (t.back() == '\r' || t.back() == ' ')) t.pop_back();
    if (t == "true") return true;
    if (t == "false") return false;
    throw DomainError("CSV row " + std::to_string(row) + ": bad bool '" + s + "'");
}

std::string strip_cr(std::string s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.pop_back();
    return s;
}

}  // namespace

std::string sweep_csv(const std::vector<SweepRecord>& records) {
    std::string out = kSweepCsvHeader;
    out += '\n';
    for (const auto& r : records) {
        out += format_number(r.kappa) + ',' + format_number(r.a) + ',' +
               format_number(r.p1) + ',' + format_number(r.p2) + ',' +
               format_number(r.p_total) + ',' + format_number(r.demand) + ',' +
               format_number(r.u1) + ',' + format_number(r.u2) + ',' +
               format_number(r.cache_cost) + ',' + format_bool(r.valid_interior) +
               '\n';
    }
    return out;
}

std::string sweep_json(const std::vector<SweepRecord>& records) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : records) {
        nlohmann::ordered_json obj;
        obj["kappa"] = r.kappa;
        obj["a"] = r.a;
        obj["p1"] = r.p1;
        obj["p2"] = r.p2;
        obj["p_total"] = r.p_total;
        obj["demand"] = r.demand;
        obj["u1"] = r.u1;
        obj["u2"] = r.u2;
        obj["cache_cost"] = r.cache_cost;
        obj["valid_interior"] = r.valid_interior;
        arr.push_back(std::move(obj));
    }
    return arr.dump(2) + "\n";
}

std::vector<SweepRecord> parse_sweep_csv(std::istream& in) {
    std::string line;
    int row = 0;
    bool saw_header = false;
    std::vector<SweepRecord> records;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line[0] == '#') continue;
        if (!saw_header) {
            if (strip_cr(line) != kSweepCsvHeader)
                throw DomainError("sweep CSV: unexpected header at row " +
                                  std::to_string(row));
            saw_header = true;
            continue;
        }
        auto fields = split_csv_line(line);
        if (fields.size() != 10)
            throw DomainError("sweep CSV row " + std::to_string(row) +
                              ": expected 10 fields");
        SweepRecord r;
        r.kappa = parse_double(fields[0], row);
        r.a = parse_double(fields[1], row);
        r.p1 = parse_double(fields[2], row);
        r.p2 = parse_double(fields[3], row);
        r.p_total = parse_double(fields[4], row);
        r.demand = parse_double(fields[5], row);
        r.u1 = parse_double(fields[6], row);
        r.u2 = parse_double(fields[7], row);
        r.cache_cost = parse_double(fields[8], row);
        r.valid_interior = parse_bool(fields[9], row);
        records.push_back(r);
    }
    if (!saw_header) throw DomainError("sweep CSV: missing header");
    return records;
}

std::string equilibrium_csv(const Equilibrium& eq) {
    std::string out = kEquilibriumCsvHeader;
    out += '\n';
    out += format_number(eq.p1) + ',' + format_number(eq.p2) + ',' +
           format_number(eq.p_total) + ',' + format_number(eq.demand_at_eq) + ',' +
           format_number(eq.u1) + ',' + format_number(eq.u2) + ',' +
           equilibrium::method_name(eq.method) + ',' +
           format_number(eq.foc_residual) + ',' + format_bool(eq.valid_interior) +
           '\n';
    return out;
}

std::string equilibrium_json(const Equilibrium& eq) {
    nlohmann::ordered_json obj;
    obj["p1"] = eq.p1;
    obj["p2"] = eq.p2;
    obj["p_total"] = eq.p_total;
    obj["demand"] = eq.demand_at_eq;
    obj["u1"] = eq.u1;
    obj["u2"] = eq.u2;
    obj["method"] = equilibrium::method_name(eq.method);
    obj["foc_residual"] = eq.foc_residual;
    obj["valid_interior"] = eq.valid_interior;
    return obj.dump(2) + "\n";
}

Equilibrium parse_equilibrium_csv(std::istream& in) {
    std::string line;
    int row = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line[0] == '#') continue;
        if (!saw_header) {
            if (strip_cr(line) != kEquilibriumCsvHeader)
                throw DomainError("equilibrium CSV: unexpected header");
            saw_header = true;
            continue;
        }
        auto fields = split_csv_line(line);
        if (fields.size() != 9)
            throw DomainError("equilibrium CSV row " + std::to_string(row) +
                              ": expected 9 fields");
        Equilibrium eq;
        eq.p1 = parse_double(fields[0], row);
        eq.p2 = parse_double(fields[1], row);
        eq.p_total = parse_double(fields[2], row);
        eq.demand_at_eq = parse_double(fields[3], row);
        eq.u1 = parse_double(fields[4], row);
        eq.u2 = parse_double(fields[5], row);
        eq.method = method_from_name(strip_cr(fields[6]));
        eq.foc_residual = parse_double(fields[7], row);
        eq.valid_interior = parse_bool(fields[8], row);
        return eq;
    }
    throw DomainError("equilibrium CSV: no record found");
}

Method method_from_name(const std::string& name) {
    if (name == "closed_form_linear") return Method::ClosedFormLinear;
    if (name == "closed_form_concave") return Method::ClosedFormConcave;
    if (name == "numeric_foc") return Method::NumericFoc;
    if (name == "best_response_iteration") return Method::BestResponseIteration;
    throw DomainError("unknown solver method '" + name + "'");
}

}  // namespace netecon::io
