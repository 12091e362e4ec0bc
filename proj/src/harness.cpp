#include "nrmlab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "nrmlab/arrivals.hpp"
#include "nrmlab/detail/format.hpp"
#include "nrmlab/lp.hpp"
#include "nrmlab/oracle.hpp"

namespace nrmlab {

namespace {

using nlohmann::json;
using detail::format_double;

[[noreturn]] void parse_fail(const std::string& what) {
    throw Error(Errc::ParseError, what);
}

void validate_spec(const ExperimentSpec& spec) {
    validate_instance(spec.base);
    if (spec.sweep.empty())
        throw Error(Errc::InvalidArgument, "sweep needs at least one value");
    for (double v : spec.sweep)
        if (!(v > 0.0) || !std::isfinite(v))
            throw Error(Errc::InvalidArgument, "sweep values must be positive");
    if (spec.policies.empty())
        throw Error(Errc::InvalidArgument, "at least one policy required");
    for (std::size_t a = 0; a < spec.policies.size(); ++a)
        for (std::size_t b = a + 1; b < spec.policies.size(); ++b)
            if (spec.policies[a].kind == spec.policies[b].kind)
                throw Error(Errc::InvalidArgument,
                            std::string("policy ") + policy_name(spec.policies[a].kind) +
                                " listed twice");
    if (spec.num_paths < 2)
        throw Error(Errc::InvalidArgument, "need at least two paths per sweep point");
}

/// Run fn(0..count-1) on `workers` threads.  Work items are independent;
/// results land in pre-sized slots, so scheduling cannot affect output.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn) {
    std::size_t w = workers > 0 ? static_cast<std::size_t>(workers)
                                : std::max(1u, std::thread::hardware_concurrency());
    w = std::min(w, count);
    if (w <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr first_error;
    auto body = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(w);
    for (std::size_t t = 0; t < w; ++t) pool.emplace_back(body);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace

ExperimentSpec experiment_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        parse_fail(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) parse_fail("experiment spec must be a JSON object");

    ExperimentSpec spec;
    if (!j.contains("instance")) parse_fail("missing key 'instance'");
    spec.base = instance_from_json(j.at("instance").dump());

    if (!j.contains("sweep") || !j.at("sweep").is_object())
        parse_fail("missing key 'sweep' (object with 'axis' and 'values')");
    const json& sweep = j.at("sweep");
    if (!sweep.contains("axis") || !sweep.at("axis").is_string())
        parse_fail("key 'sweep.axis' must be a string");
    const std::string axis = sweep.at("axis").get<std::string>();
    if (axis == "horizon")
        spec.axis = SweepAxis::Horizon;
    else if (axis == "capacity_rate")
        spec.axis = SweepAxis::CapacityRate;
    else
        parse_fail("key 'sweep.axis' must be 'horizon' or 'capacity_rate'");
    if (!sweep.contains("values") || !sweep.at("values").is_array() ||
        sweep.at("values").empty())
        parse_fail("key 'sweep.values' must be a nonempty array of numbers");
    for (const auto& v : sweep.at("values")) {
        if (!v.is_number()) parse_fail("key 'sweep.values' must contain only numbers");
        spec.sweep.push_back(v.get<double>());
    }

    if (!j.contains("policies") || !j.at("policies").is_array() || j.at("policies").empty())
        parse_fail("key 'policies' must be a nonempty array of policy names");
    for (const auto& p : j.at("policies")) {
        if (!p.is_string()) parse_fail("key 'policies' must contain only strings");
        const auto kind = policy_from_name(p.get<std::string>());
        if (!kind)
            parse_fail("key 'policies': unknown policy '" + p.get<std::string>() +
                       "' (valid: SPA, FR, IR, IRT, FRT)");
        spec.policies.push_back(make_policy(*kind));
    }
    // canonical policy order keeps thinning streams and row order stable
    std::sort(spec.policies.begin(), spec.policies.end(),
              [](const PolicySpec& a, const PolicySpec& b) { return a.kind < b.kind; });

    if (!j.contains("paths") || !j.at("paths").is_number_integer())
        parse_fail("key 'paths' must be an integer");
    spec.num_paths = j.at("paths").get<int>();

    if (!j.contains("seed") || !j.at("seed").is_number_unsigned())
        parse_fail("key 'seed' must be a nonnegative integer");
    spec.base_seed = j.at("seed").get<std::uint64_t>();

    validate_spec(spec);
    return spec;
}

ExperimentSpec experiment_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::IoError, "cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return experiment_from_json(buffer.str());
}

Instance instance_for_sweep(const ExperimentSpec& spec, double value) {
    Instance inst = spec.base;
    if (spec.axis == SweepAxis::Horizon) {
        inst.horizon = value;
        for (std::size_t l = 0; l < inst.capacity.size(); ++l)
            inst.capacity[l] = spec.base.capacity[l] / spec.base.horizon * value;
    } else {
        for (std::size_t l = 0; l < inst.capacity.size(); ++l)
            inst.capacity[l] = spec.base.capacity[l] * value;
    }
    validate_instance(inst);
    return inst;
}

RegretTable run_experiment(const ExperimentSpec& spec, int workers) {
    validate_spec(spec);
    const std::size_t S = spec.sweep.size();
    const std::size_t P = static_cast<std::size_t>(spec.num_paths);
    const std::size_t K = spec.policies.size();

    RegretTable table;
    table.policies.reserve(K);
    for (const PolicySpec& p : spec.policies) table.policies.push_back(p.kind);

    std::vector<Instance> instances;
    instances.reserve(S);
    table.detail.resize(S);
    for (std::size_t s = 0; s < S; ++s) {
        instances.push_back(instance_for_sweep(spec, spec.sweep[s]));
        table.detail[s].sweep = spec.sweep[s];
        table.detail[s].v_dlp = solve_dlp(instances[s]).value;
        table.detail[s].v_ho.assign(P, 0.0);
        table.detail[s].revenue.assign(K, std::vector<double>(P, 0.0));
    }

    parallel_for(S * P, workers, [&](std::size_t item) {
        const std::size_t s = item / P;
        const std::size_t i = item % P;
        const Instance& inst = instances[s];
        const std::uint64_t seed = mix_seed(spec.base_seed, s, i);
        try {
            const ArrivalPath path = sample_path(inst, seed);
            table.detail[s].v_ho[i] = hindsight_optimum(inst, path).value;
            for (std::size_t k = 0; k < K; ++k)
                table.detail[s].revenue[k][i] =
                    run_policy(inst, path, spec.policies[k]).revenue;
        } catch (const Error& e) {
            throw Error(e.code(), std::string(e.what()) + " (sweep=" +
                                      format_double(spec.sweep[s]) +
                                      ", path_seed=" + std::to_string(seed) + ")");
        }
    });

    table.rows.reserve(S * K);
    for (std::size_t s = 0; s < S; ++s) {
        const SweepDetail& d = table.detail[s];
        double ho_sum = 0.0;
        for (double v : d.v_ho) ho_sum += v;
        const double ho_mean = ho_sum / static_cast<double>(P);
        double ho_ss = 0.0;
        for (double v : d.v_ho) ho_ss += (v - ho_mean) * (v - ho_mean);
        const double ho_se =
            std::sqrt(ho_ss / static_cast<double>(P - 1) / static_cast<double>(P));

        for (std::size_t k = 0; k < K; ++k) {
            RegretRow row;
            row.sweep = spec.sweep[s];
            row.policy = spec.policies[k].kind;
            row.n_paths = spec.num_paths;
            row.v_dlp = d.v_dlp;
            row.v_ho_hat = ho_mean;
            row.v_ho_se = ho_se;
            double sum = 0.0;
            double min_regret = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < P; ++i) {
                const double regret = d.v_ho[i] - d.revenue[k][i];
                sum += regret;
                min_regret = std::min(min_regret, regret);
            }
            row.mean_regret = sum / static_cast<double>(P);
            double ss = 0.0;
            for (std::size_t i = 0; i < P; ++i) {
                const double regret = d.v_ho[i] - d.revenue[k][i];
                ss += (regret - row.mean_regret) * (regret - row.mean_regret);
            }
            row.se = std::sqrt(ss / static_cast<double>(P - 1) / static_cast<double>(P));
            row.min_paired_regret = min_regret;
            table.rows.push_back(row);
        }
    }
    return table;
}

SlopeFit fit_loglog_slope(const RegretTable& table, PolicyKind policy) {
    std::vector<const RegretRow*> rows;
    for (const RegretRow& r : table.rows)
        if (r.policy == policy) rows.push_back(&r);
    if (rows.size() < 4)
        throw Error(Errc::InvalidArgument,
                    std::string("need at least four sweep points for ") +
                        policy_name(policy) + ", have " + std::to_string(rows.size()));

    SlopeFit fit;
    std::vector<double> xs, ys;
    for (const RegretRow* r : rows) {
        if (r->mean_regret > 0.0) {
            xs.push_back(std::log(r->sweep));
            ys.push_back(std::log(r->mean_regret));
        } else {
            fit.excluded_sweeps.push_back(r->sweep);
        }
    }
    if (xs.size() < 2)
        throw Error(Errc::NonpositiveRegret,
                    std::string("fewer than two positive mean regrets for ") +
                        policy_name(policy));

    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) { mx += xs[i]; my += ys[i]; }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (sxx < 1e-30)
        throw Error(Errc::InvalidArgument, "sweep values are all identical");
    fit.slope = sxy / sxx;
    const double ss_res = syy - sxy * sxy / sxx;
    fit.r_squared = syy < 1e-30 ? 1.0 : 1.0 - ss_res / syy;
    fit.points_used = static_cast<int>(xs.size());
    return fit;
}

void export_csv(const RegretTable& table, std::ostream& out) {
    out << "sweep,policy,mean_regret,stderr,n_paths,v_dlp,v_ho_hat\n";
    for (const RegretRow& r : table.rows) {
        out << format_double(r.sweep) << ',' << policy_name(r.policy) << ','
            << format_double(r.mean_regret) << ',' << format_double(r.se) << ','
            << r.n_paths << ',' << format_double(r.v_dlp) << ','
            << format_double(r.v_ho_hat) << '\n';
    }
}

std::string export_csv(const RegretTable& table) {
    std::ostringstream out;
    export_csv(table, out);
    return out.str();
}

void export_csv_file(const RegretTable& table, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::IoError, "cannot write '" + path + "'");
    export_csv(table, out);
    if (!out.good()) throw Error(Errc::IoError, "failed writing '" + path + "'");
}

}  // namespace nrmlab
