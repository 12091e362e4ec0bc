#include "nrmlab/instance.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "nrmlab/lp.hpp"

namespace nrmlab {

namespace {

using nlohmann::json;

[[noreturn]] void parse_fail(const std::string& what) {
    throw Error(Errc::ParseError, what);
}

double require_positive_number(const json& j, const char* key) {
    if (!j.contains(key)) parse_fail(std::string("missing key '") + key + "'");
    const json& v = j.at(key);
    if (!v.is_number()) parse_fail(std::string("key '") + key + "' must be a number");
    return v.get<double>();
}

std::vector<double> require_number_array(const json& j, const char* key) {
    if (!j.contains(key)) parse_fail(std::string("missing key '") + key + "'");
    const json& v = j.at(key);
    if (!v.is_array() || v.empty())
        parse_fail(std::string("key '") + key + "' must be a nonempty array of numbers");
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& e : v) {
        if (!e.is_number())
            parse_fail(std::string("key '") + key + "' must contain only numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

}  // namespace

const Instance& validate_instance(const Instance& inst) {
    const std::size_t n = inst.num_classes();
    const std::size_t m = inst.num_resources();
    if (n == 0)
        throw Error(Errc::DimensionMismatch, "instance has no demand classes");
    if (m == 0)
        throw Error(Errc::DimensionMismatch, "instance has no resources");
    if (!(inst.horizon > 0.0) || !std::isfinite(inst.horizon))
        throw Error(Errc::NonpositiveRate, "horizon must be a positive finite number");
    if (inst.revenue.size() != n)
        throw Error(Errc::DimensionMismatch,
                    "revenue has " + std::to_string(inst.revenue.size()) +
                        " entries, expected " + std::to_string(n));
    if (inst.bom.rows != m || inst.bom.cols != n)
        throw Error(Errc::DimensionMismatch,
                    "bom is " + std::to_string(inst.bom.rows) + "x" +
                        std::to_string(inst.bom.cols) + ", expected " + std::to_string(m) +
                        "x" + std::to_string(n));
    for (std::size_t j = 0; j < n; ++j) {
        if (!(inst.arrival_rate[j] > 0.0) || !std::isfinite(inst.arrival_rate[j]))
            throw Error(Errc::NonpositiveRate,
                        "lambda[" + std::to_string(j) + "] must be positive");
        if (!(inst.revenue[j] > 0.0) || !std::isfinite(inst.revenue[j]))
            throw Error(Errc::NonpositiveRate,
                        "revenue[" + std::to_string(j) + "] must be positive");
    }
    for (std::size_t l = 0; l < m; ++l) {
        if (!(inst.capacity[l] >= 0.0) || !std::isfinite(inst.capacity[l]))
            throw Error(Errc::NegativeCapacity,
                        "capacity[" + std::to_string(l) + "] must be nonnegative");
        for (std::size_t j = 0; j < n; ++j) {
            const double a = inst.bom(l, j);
            if (!(a >= 0.0) || !std::isfinite(a))
                throw Error(Errc::NegativeCapacity,
                            "bom[" + std::to_string(l) + "][" + std::to_string(j) +
                                "] must be nonnegative");
        }
    }
    for (std::size_t j = 0; j < n; ++j) {
        bool consumes = false;
        for (std::size_t l = 0; l < m; ++l)
            if (inst.bom(l, j) > 0.0) { consumes = true; break; }
        if (!consumes)
            throw Error(Errc::ZeroColumn,
                        "class " + std::to_string(j) + " consumes no resource");
    }
    return inst;
}

CapacityRate capacity_rate(const Instance& inst) {
    CapacityRate rate;
    rate.b.resize(inst.num_resources());
    for (std::size_t l = 0; l < inst.num_resources(); ++l)
        rate.b[l] = inst.capacity[l] / inst.horizon;
    return rate;
}

DegeneracyReport classify_degeneracy(const Instance& inst, const LpSolution& sol,
                                     double tol) {
    const std::size_t n = inst.num_classes();
    const std::size_t m = inst.num_resources();
    if (sol.x.size() != n)
        throw Error(Errc::SolutionInstanceMismatch,
                    "solution has " + std::to_string(sol.x.size()) +
                        " entries, instance has " + std::to_string(n) + " classes");
    DegeneracyReport report;
    for (std::size_t j = 0; j < n; ++j) {
        const double x = sol.x[j];
        if (x <= tol || x >= inst.arrival_rate[j] - tol) ++report.bound_count;
    }
    const CapacityRate rate = capacity_rate(inst);
    for (std::size_t l = 0; l < m; ++l) {
        double used = 0.0;
        for (std::size_t j = 0; j < n; ++j) used += inst.bom(l, j) * sol.x[j];
        if (std::fabs(used - rate.b[l]) <= tol) ++report.binding_count;
    }
    report.nondegenerate =
        (report.bound_count + report.binding_count == static_cast<int>(n));
    return report;
}

bool is_nondegenerate(const Instance& inst, const LpSolution& sol, double tol) {
    return classify_degeneracy(inst, sol, tol).nondegenerate;
}

Instance instance_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        parse_fail(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) parse_fail("instance must be a JSON object");

    Instance inst;
    inst.horizon = require_positive_number(j, "horizon");
    inst.arrival_rate = require_number_array(j, "lambda");
    inst.revenue = require_number_array(j, "revenue");
    inst.capacity = require_number_array(j, "capacity");

    if (!j.contains("bom")) parse_fail("missing key 'bom'");
    const json& bom = j.at("bom");
    if (!bom.is_array() || bom.empty())
        parse_fail("key 'bom' must be a nonempty array of rows");
    const std::size_t m = bom.size();
    std::size_t n = 0;
    for (std::size_t l = 0; l < m; ++l) {
        const json& row = bom.at(l);
        if (!row.is_array())
            parse_fail("key 'bom' row " + std::to_string(l) + " must be an array");
        if (l == 0) {
            n = row.size();
            if (n == 0) parse_fail("key 'bom' rows must be nonempty");
            inst.bom = DenseMatrix(m, n);
        } else if (row.size() != n) {
            parse_fail("key 'bom' row " + std::to_string(l) + " has " +
                       std::to_string(row.size()) + " entries, expected " +
                       std::to_string(n));
        }
        for (std::size_t c = 0; c < n; ++c) {
            if (!row.at(c).is_number())
                parse_fail("key 'bom' must contain only numbers");
            inst.bom(l, c) = row.at(c).get<double>();
        }
    }

    validate_instance(inst);
    return inst;
}

Instance instance_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::IoError, "cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return instance_from_json(buffer.str());
}

std::string instance_to_json(const Instance& inst) {
    json j;
    j["horizon"] = inst.horizon;
    j["lambda"] = inst.arrival_rate;
    j["revenue"] = inst.revenue;
    json rows = json::array();
    for (std::size_t l = 0; l < inst.bom.rows; ++l) {
        json row = json::array();
        for (std::size_t c = 0; c < inst.bom.cols; ++c) row.push_back(inst.bom(l, c));
        rows.push_back(std::move(row));
    }
    j["bom"] = std::move(rows);
    j["capacity"] = inst.capacity;
    return j.dump(2);
}

}  // namespace nrmlab
