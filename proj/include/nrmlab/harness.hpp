#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "nrmlab/errors.hpp"
#include "nrmlab/instance.hpp"
#include "nrmlab/policies.hpp"

namespace nrmlab {

/// What a sweep varies.  Horizon: T takes each sweep value and capacities
/// scale as C = base_rate * T (the template's capacity rate is preserved).
/// CapacityRate: T stays at the template's horizon and capacities scale as
/// C = value * base_capacity.
enum class SweepAxis { Horizon, CapacityRate };

struct ExperimentSpec {
    Instance base;  ///< template instance; its rates/capacities anchor the sweep
    SweepAxis axis = SweepAxis::Horizon;
    std::vector<double> sweep;        ///< nonempty, positive values
    std::vector<PolicySpec> policies; ///< nonempty, distinct kinds
    int num_paths = 1000;             ///< >= 2
    std::uint64_t base_seed = 0;
};

/// JSON schema: object with keys
///   instance  instance object (see instance_from_json)
///   sweep     {"axis": "horizon" | "capacity_rate", "values": [..]}
///   policies  array of names from {"SPA","FR","IR","IRT","FRT"}
///   paths     integer >= 2
///   seed      unsigned integer
ExperimentSpec experiment_from_json(const std::string& text);
ExperimentSpec experiment_from_json_file(const std::string& path);

/// Instance the sweep point `value` resolves to (see SweepAxis).
Instance instance_for_sweep(const ExperimentSpec& spec, double value);

/// One aggregated row: policy regret statistics at one sweep point.
/// Regret is paired per path: hindsight optimum minus policy revenue on the
/// same arrival path.
struct RegretRow {
    double sweep = 0.0;
    PolicyKind policy = PolicyKind::Spa;
    double mean_regret = 0.0;
    double se = 0.0;  ///< standard error of mean_regret
    int n_paths = 0;
    double v_dlp = 0.0;     ///< horizon-scaled rate-LP value at this point
    double v_ho_hat = 0.0;  ///< sample mean of the hindsight optimum
    // not exported to CSV:
    double v_ho_se = 0.0;
    double min_paired_regret = 0.0;
};

/// Per-path detail kept for paired policy comparisons.
struct SweepDetail {
    double sweep = 0.0;
    double v_dlp = 0.0;
    std::vector<double> v_ho;                   ///< [path]
    std::vector<std::vector<double>> revenue;   ///< [policy][path]
};

struct RegretTable {
    std::vector<PolicyKind> policies;  ///< canonical order (row-minor)
    std::vector<RegretRow> rows;       ///< sweep-major, policy-minor
    std::vector<SweepDetail> detail;   ///< one per sweep value
};

/// Run the full sweep.  Path i at sweep index s uses
/// seed = mix_seed(base_seed, s, i); every policy runs on that same path
/// (common random numbers).  Work is distributed over `workers` threads
/// (0 = hardware concurrency) but reduced in path order, so the table is
/// identical for every worker count.  Errors from the modules propagate
/// with sweep value and seed attached to the message.
RegretTable run_experiment(const ExperimentSpec& spec, int workers = 0);

/// Least-squares slope of log(mean regret) against log(sweep value).
/// Rows with nonpositive mean regret are excluded and reported; fewer than
/// two usable points throws Error(NonpositiveRegret).  Requires at least
/// four sweep points for the policy, else Error(InvalidArgument).
struct SlopeFit {
    double slope = 0.0;
    double r_squared = 0.0;
    int points_used = 0;
    std::vector<double> excluded_sweeps;
};
SlopeFit fit_loglog_slope(const RegretTable& table, PolicyKind policy);

/// CSV export, header exactly
///   sweep,policy,mean_regret,stderr,n_paths,v_dlp,v_ho_hat
/// one row per (sweep value, policy), shortest round-trip number formatting.
/// Re-exporting the same table is byte-identical.
void export_csv(const RegretTable& table, std::ostream& out);
std::string export_csv(const RegretTable& table);
void export_csv_file(const RegretTable& table, const std::string& path);

}  // namespace nrmlab
