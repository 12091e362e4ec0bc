#include "nrmlab.h"

#include <exception>
#include <fstream>
#include <string>

#include "nrmlab/arrivals.hpp"
#include "nrmlab/harness.hpp"
#include "nrmlab/instance.hpp"
#include "nrmlab/lp.hpp"
#include "nrmlab/oracle.hpp"
#include "nrmlab/policies.hpp"

struct nrm_instance {
    nrmlab::Instance v;
};
struct nrm_path {
    nrmlab::ArrivalPath v;
};
struct nrm_table {
    nrmlab::RegretTable v;
};

namespace {

thread_local std::string g_last_error = "no error";

nrm_status map_code(nrmlab::Errc code) {
    using nrmlab::Errc;
    switch (code) {
        case Errc::ParseError:
            return NRM_ERROR_PARSE;
        case Errc::DimensionMismatch:
        case Errc::NonpositiveRate:
        case Errc::NegativeCapacity:
        case Errc::ZeroColumn:
            return NRM_ERROR_VALIDATION;
        case Errc::NumericalFailure:
            return NRM_ERROR_NUMERICAL;
        case Errc::IoError:
            return NRM_ERROR_IO;
        case Errc::SolutionInstanceMismatch:
        case Errc::TooLarge:
        case Errc::WindowOutOfRange:
        case Errc::HorizonTooShort:
        case Errc::ParameterOutOfRange:
        case Errc::InvalidArgument:
            return NRM_ERROR_INVALID_ARGUMENT;
        case Errc::NonpositiveRegret:
            return NRM_ERROR_RUNTIME;
    }
    return NRM_ERROR_RUNTIME;
}

nrm_status fail(nrm_status status, const char* message) {
    g_last_error = message;
    return status;
}

/// Run `fn`, translating exceptions into status codes + last_error.
template <typename Fn>
nrm_status guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const nrmlab::Error& e) {
        g_last_error = e.what();
        return map_code(e.code());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return NRM_ERROR_RUNTIME;
    } catch (...) {
        g_last_error = "unknown error";
        return NRM_ERROR_RUNTIME;
    }
}

}  // namespace

extern "C" {

const char* nrm_version(void) { return "0.1.0"; }

const char* nrm_last_error(void) { return g_last_error.c_str(); }

nrm_status nrm_instance_parse_json(const char* json_text, nrm_instance** out) {
    if (!json_text || !out)
        return fail(NRM_ERROR_INVALID_ARGUMENT, "null argument to nrm_instance_parse_json");
    return guarded([&] {
        auto* handle = new nrm_instance{nrmlab::instance_from_json(json_text)};
        *out = handle;
        return NRM_OK;
    });
}

nrm_status nrm_instance_load_file(const char* path, nrm_instance** out) {
    if (!path || !out)
        return fail(NRM_ERROR_INVALID_ARGUMENT, "null argument to nrm_instance_load_file");
    return guarded([&] {
        auto* handle = new nrm_instance{nrmlab::instance_from_json_file(path)};
        *out = handle;
        return NRM_OK;
    });
}

void nrm_instance_free(nrm_instance* inst) { delete inst; }

size_t nrm_instance_num_classes(const nrm_instance* inst) {
    return inst ? inst->v.num_classes() : 0;
}

size_t nrm_instance_num_resources(const nrm_instance* inst) {
    return inst ? inst->v.num_resources() : 0;
}

double nrm_instance_horizon(const nrm_instance* inst) {
    return inst ? inst->v.horizon : 0.0;
}

nrm_status nrm_solve_dlp(const nrm_instance* inst, double* value_out, double* x_out,
                         int* bound_count_out, int* binding_count_out,
                         int* nondegenerate_out) {
    if (!inst) return fail(NRM_ERROR_INVALID_ARGUMENT, "null instance");
    return guarded([&] {
        const nrmlab::DlpSolution dlp = nrmlab::solve_dlp(inst->v);
        const nrmlab::DegeneracyReport report =
            nrmlab::classify_degeneracy(inst->v, dlp.lp);
        if (value_out) *value_out = dlp.value;
        if (x_out)
            for (std::size_t j = 0; j < dlp.lp.x.size(); ++j) x_out[j] = dlp.lp.x[j];
        if (bound_count_out) *bound_count_out = report.bound_count;
        if (binding_count_out) *binding_count_out = report.binding_count;
        if (nondegenerate_out) *nondegenerate_out = report.nondegenerate ? 1 : 0;
        return NRM_OK;
    });
}

nrm_status nrm_path_sample(const nrm_instance* inst, uint64_t seed, nrm_path** out) {
    if (!inst || !out) return fail(NRM_ERROR_INVALID_ARGUMENT, "null argument to nrm_path_sample");
    return guarded([&] {
        *out = new nrm_path{nrmlab::sample_path(inst->v, seed)};
        return NRM_OK;
    });
}

nrm_status nrm_path_load_file(const nrm_instance* inst, const char* file, nrm_path** out) {
    if (!inst || !file || !out)
        return fail(NRM_ERROR_INVALID_ARGUMENT, "null argument to nrm_path_load_file");
    return guarded([&] {
        *out = new nrm_path{nrmlab::load_path_jsonl_file(inst->v, file)};
        return NRM_OK;
    });
}

nrm_status nrm_path_dump_file(const nrm_path* path, const char* file) {
    if (!path || !file)
        return fail(NRM_ERROR_INVALID_ARGUMENT, "null argument to nrm_path_dump_file");
    return guarded([&] {
        nrmlab::dump_path_jsonl_file(path->v, file);
        return NRM_OK;
    });
}

void nrm_path_free(nrm_path* path) { delete path; }

size_t nrm_path_num_events(const nrm_path* path) {
    return path ? path->v.total_events() : 0;
}

nrm_status nrm_hindsight_value(const nrm_instance* inst, const nrm_path* path,
                               double* value_out) {
    if (!inst || !path || !value_out)
        return fail(NRM_ERROR_INVALID_ARGUMENT, "null argument to nrm_hindsight_value");
    return guarded([&] {
        *value_out = nrmlab::hindsight_optimum(inst->v, path->v).value;
        return NRM_OK;
    });
}

nrm_status nrm_policy_run(const nrm_instance* inst, const nrm_path* path,
                          const char* policy, const char* trace_csv, double* revenue_out) {
    if (!inst || !path || !policy)
        return fail(NRM_ERROR_INVALID_ARGUMENT, "null argument to nrm_policy_run");
    return guarded([&] {
        const auto kind = nrmlab::policy_from_name(policy);
        if (!kind)
            throw nrmlab::Error(nrmlab::Errc::InvalidArgument,
                                std::string("unknown policy '") + policy +
                                    "' (valid: SPA, FR, IR, IRT, FRT)");
        std::vector<nrmlab::TraceRow> trace;
        nrmlab::RunOptions opts;
        if (trace_csv) opts.trace = &trace;
        const nrmlab::RunResult result =
            nrmlab::run_policy(inst->v, path->v, nrmlab::make_policy(*kind), opts);
        if (trace_csv) {
            std::ofstream out(trace_csv, std::ios::binary);
            if (!out)
                throw nrmlab::Error(nrmlab::Errc::IoError,
                                    std::string("cannot write '") + trace_csv + "'");
            out << nrmlab::trace_to_csv(trace, inst->v.num_resources());
            if (!out.good())
                throw nrmlab::Error(nrmlab::Errc::IoError,
                                    std::string("failed writing '") + trace_csv + "'");
        }
        if (revenue_out) *revenue_out = result.revenue;
        return NRM_OK;
    });
}

nrm_status nrm_experiment_run_file(const char* spec_file, int workers,
                                   int use_seed_override, uint64_t seed_override,
                                   nrm_table** out) {
    if (!spec_file || !out)
        return fail(NRM_ERROR_INVALID_ARGUMENT, "null argument to nrm_experiment_run_file");
    return guarded([&] {
        nrmlab::ExperimentSpec spec = nrmlab::experiment_from_json_file(spec_file);
        if (use_seed_override) spec.base_seed = seed_override;
        *out = new nrm_table{nrmlab::run_experiment(spec, workers)};
        return NRM_OK;
    });
}

nrm_status nrm_table_export_csv(const nrm_table* table, const char* file) {
    if (!table || !file)
        return fail(NRM_ERROR_INVALID_ARGUMENT, "null argument to nrm_table_export_csv");
    return guarded([&] {
        nrmlab::export_csv_file(table->v, file);
        return NRM_OK;
    });
}

size_t nrm_table_num_rows(const nrm_table* table) {
    return table ? table->v.rows.size() : 0;
}

nrm_status nrm_table_row(const nrm_table* table, size_t index, double* sweep_out,
                         const char** policy_out, double* mean_regret_out,
                         double* stderr_out, int* n_paths_out, double* v_dlp_out,
                         double* v_ho_hat_out) {
    if (!table) return fail(NRM_ERROR_INVALID_ARGUMENT, "null table");
    if (index >= table->v.rows.size())
        return fail(NRM_ERROR_INVALID_ARGUMENT, "row index out of range");
    const nrmlab::RegretRow& row = table->v.rows[index];
    if (sweep_out) *sweep_out = row.sweep;
    if (policy_out) *policy_out = nrmlab::policy_name(row.policy);
    if (mean_regret_out) *mean_regret_out = row.mean_regret;
    if (stderr_out) *stderr_out = row.se;
    if (n_paths_out) *n_paths_out = row.n_paths;
    if (v_dlp_out) *v_dlp_out = row.v_dlp;
    if (v_ho_hat_out) *v_ho_hat_out = row.v_ho_hat;
    return NRM_OK;
}

nrm_status nrm_table_slope(const nrm_table* table, const char* policy, double* slope_out,
                           double* r_squared_out) {
    if (!table || !policy)
        return fail(NRM_ERROR_INVALID_ARGUMENT, "null argument to nrm_table_slope");
    return guarded([&] {
        const auto kind = nrmlab::policy_from_name(policy);
        if (!kind)
            throw nrmlab::Error(nrmlab::Errc::InvalidArgument,
                                std::string("unknown policy '") + policy + "'");
        const nrmlab::SlopeFit fit = nrmlab::fit_loglog_slope(table->v, *kind);
        if (slope_out) *slope_out = fit.slope;
        if (r_squared_out) *r_squared_out = fit.r_squared;
        return NRM_OK;
    });
}

void nrm_table_free(nrm_table* table) { delete table; }

}  // extern "C"
