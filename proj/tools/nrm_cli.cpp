// Command-line front end; all domain work goes through the C API in nrmlab.h.
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nrmlab.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBadInput = 2;
constexpr int kExitRuntime = 3;

std::string fmt(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

int exit_code_for(nrm_status status) {
    switch (status) {
        case NRM_OK:
            return kExitOk;
        case NRM_ERROR_PARSE:
        case NRM_ERROR_VALIDATION:
        case NRM_ERROR_INVALID_ARGUMENT:
            return kExitBadInput;
        default:
            return kExitRuntime;
    }
}

int report(nrm_status status) {
    if (status == NRM_OK) return kExitOk;
    std::fprintf(stderr, "error: %s\n", nrm_last_error());
    return exit_code_for(status);
}

/// Inputs that must already exist get a friendly exit-2 instead of a
/// runtime IO failure.
bool require_input(const std::string& path) {
    if (std::filesystem::exists(path)) return true;
    std::fprintf(stderr, "error: input file '%s' does not exist\n", path.c_str());
    return false;
}

struct InstanceHandle {
    nrm_instance* ptr = nullptr;
    ~InstanceHandle() { nrm_instance_free(ptr); }
};
struct PathHandle {
    nrm_path* ptr = nullptr;
    ~PathHandle() { nrm_path_free(ptr); }
};
struct TableHandle {
    nrm_table* ptr = nullptr;
    ~TableHandle() { nrm_table_free(ptr); }
};

int cmd_solve_dlp(const std::string& instance_file) {
    if (!require_input(instance_file)) return kExitBadInput;
    InstanceHandle inst;
    if (nrm_status s = nrm_instance_load_file(instance_file.c_str(), &inst.ptr); s != NRM_OK)
        return report(s);

    const size_t n = nrm_instance_num_classes(inst.ptr);
    std::vector<double> x(n, 0.0);
    double value = 0.0;
    int bound_count = 0, binding_count = 0, nondegenerate = 0;
    if (nrm_status s = nrm_solve_dlp(inst.ptr, &value, x.data(), &bound_count,
                                     &binding_count, &nondegenerate);
        s != NRM_OK)
        return report(s);

    std::string xs;
    for (size_t j = 0; j < n; ++j) {
        if (j) xs += ", ";
        xs += fmt(x[j]);
    }
    std::printf("v_dlp = %s\n", fmt(value).c_str());
    std::printf("x* = (%s)\n", xs.c_str());
    std::printf("verdict: %s (counts %d+%d=%d %s n=%zu)\n",
                nondegenerate ? "nondegenerate" : "degenerate", bound_count, binding_count,
                bound_count + binding_count,
                bound_count + binding_count == static_cast<int>(n) ? "=" : ">", n);
    return kExitOk;
}

int cmd_run(const std::string& spec_file, const std::string& out_csv, int workers,
            bool has_seed, std::uint64_t seed) {
    if (!require_input(spec_file)) return kExitBadInput;
    TableHandle table;
    if (nrm_status s = nrm_experiment_run_file(spec_file.c_str(), workers, has_seed ? 1 : 0,
                                               seed, &table.ptr);
        s != NRM_OK)
        return report(s);
    if (nrm_status s = nrm_table_export_csv(table.ptr, out_csv.c_str()); s != NRM_OK)
        return report(s);

    // summary: per policy, regret at the sweep extremes plus log-log slope
    const size_t rows = nrm_table_num_rows(table.ptr);
    double sweep_min = 0.0, sweep_max = 0.0;
    for (size_t i = 0; i < rows; ++i) {
        double sweep = 0.0;
        nrm_table_row(table.ptr, i, &sweep, nullptr, nullptr, nullptr, nullptr, nullptr,
                      nullptr);
        if (i == 0 || sweep < sweep_min) sweep_min = sweep;
        if (i == 0 || sweep > sweep_max) sweep_max = sweep;
    }
    struct Ends {
        double lo_regret = 0.0, lo_se = 0.0, hi_regret = 0.0, hi_se = 0.0;
    };
    std::vector<std::string> order;
    std::map<std::string, Ends> summary;
    for (size_t i = 0; i < rows; ++i) {
        double sweep = 0.0, regret = 0.0, se = 0.0;
        const char* policy = nullptr;
        nrm_table_row(table.ptr, i, &sweep, &policy, &regret, &se, nullptr, nullptr, nullptr);
        if (!summary.count(policy)) order.push_back(policy);
        Ends& e = summary[policy];
        if (sweep == sweep_min) { e.lo_regret = regret; e.lo_se = se; }
        if (sweep == sweep_max) { e.hi_regret = regret; e.hi_se = se; }
    }
    std::printf("wrote %s (%zu rows)\n", out_csv.c_str(), rows);
    for (const std::string& policy : order) {
        const Ends& e = summary[policy];
        std::printf("%-4s regret %s (se %s) @ sweep=%s ; regret %s (se %s) @ sweep=%s",
                    policy.c_str(), fmt(e.lo_regret).c_str(), fmt(e.lo_se).c_str(),
                    fmt(sweep_min).c_str(), fmt(e.hi_regret).c_str(), fmt(e.hi_se).c_str(),
                    fmt(sweep_max).c_str());
        double slope = 0.0, r2 = 0.0;
        if (nrm_table_slope(table.ptr, policy.c_str(), &slope, &r2) == NRM_OK)
            std::printf(" ; loglog slope %.3f (R^2 %.3f)\n", slope, r2);
        else
            std::printf(" ; loglog slope n/a (%s)\n", nrm_last_error());
    }
    return kExitOk;
}

int cmd_replay(const std::string& instance_file, const std::string& path_file,
               const std::string& policy, const std::string& trace_file) {
    if (!require_input(instance_file) || !require_input(path_file)) return kExitBadInput;
    InstanceHandle inst;
    if (nrm_status s = nrm_instance_load_file(instance_file.c_str(), &inst.ptr); s != NRM_OK)
        return report(s);
    PathHandle path;
    if (nrm_status s = nrm_path_load_file(inst.ptr, path_file.c_str(), &path.ptr);
        s != NRM_OK)
        return report(s);
    double revenue = 0.0;
    if (nrm_status s = nrm_policy_run(inst.ptr, path.ptr, policy.c_str(),
                                      trace_file.empty() ? nullptr : trace_file.c_str(),
                                      &revenue);
        s != NRM_OK)
        return report(s);
    std::printf("events = %zu\n", nrm_path_num_events(path.ptr));
    std::printf("revenue = %s\n", fmt(revenue).c_str());
    if (!trace_file.empty()) std::printf("trace written to %s\n", trace_file.c_str());
    return kExitOk;
}

int cmd_sample_path(const std::string& instance_file, std::uint64_t seed,
                    const std::string& out_file) {
    if (!require_input(instance_file)) return kExitBadInput;
    InstanceHandle inst;
    if (nrm_status s = nrm_instance_load_file(instance_file.c_str(), &inst.ptr); s != NRM_OK)
        return report(s);
    PathHandle path;
    if (nrm_status s = nrm_path_sample(inst.ptr, seed, &path.ptr); s != NRM_OK)
        return report(s);
    if (nrm_status s = nrm_path_dump_file(path.ptr, out_file.c_str()); s != NRM_OK)
        return report(s);
    std::printf("wrote %s (%zu events)\n", out_file.c_str(), nrm_path_num_events(path.ptr));
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantity-based network revenue management lab"};
    app.require_subcommand(1);

    std::string instance_file, spec_file, path_file, policy, out_file, trace_file;
    int workers = 0;
    std::uint64_t seed = 0;

    CLI::App* solve = app.add_subcommand(
        "solve-dlp", "solve the rate relaxation and classify its degeneracy");
    solve->add_option("instance", instance_file, "instance JSON file")->required();

    CLI::App* run = app.add_subcommand("run", "run an experiment sweep and export CSV");
    run->add_option("spec", spec_file, "experiment spec JSON file")->required();
    run->add_option("--out", out_file, "output CSV file")->required();
    run->add_option("--workers", workers, "worker threads (0 = hardware)")
        ->envname("NRM_LAB_WORKERS");
    CLI::Option* seed_opt =
        run->add_option("--seed", seed, "override the seed from the spec");

    CLI::App* replay =
        app.add_subcommand("replay", "replay one policy on a dumped arrival path");
    replay->add_option("instance", instance_file, "instance JSON file")->required();
    replay->add_option("path", path_file, "arrival path dump (JSON lines)")->required();
    replay->add_option("policy", policy, "policy name: SPA, FR, IR, IRT or FRT")->required();
    replay->add_option("--trace", trace_file, "write the per-event trace CSV here");

    CLI::App* sample =
        app.add_subcommand("sample-path", "sample an arrival path and dump it");
    sample->add_option("instance", instance_file, "instance JSON file")->required();
    sample->add_option("--seed", seed, "path seed")->required();
    sample->add_option("--out", out_file, "output JSON-lines file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitBadInput;
    }

    if (solve->parsed()) return cmd_solve_dlp(instance_file);
    if (run->parsed())
        return cmd_run(spec_file, out_file, workers, seed_opt->count() > 0, seed);
    if (replay->parsed()) return cmd_replay(instance_file, path_file, policy, trace_file);
    if (sample->parsed()) return cmd_sample_path(instance_file, seed, out_file);
    return kExitBadInput;
}
