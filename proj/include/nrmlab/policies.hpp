#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "nrmlab/arrivals.hpp"
#include "nrmlab/errors.hpp"
#include "nrmlab/instance.hpp"
#include "nrmlab/lp.hpp"
#include "nrmlab/rng.hpp"

namespace nrmlab {

/// The five admission-control policies.
///
///   Spa  solve the rate LP once, thin class j at x*_j / lambda_j forever
///   Fr   re-solve every unit period with rhs C(t) / (T - t), raw ratios
///   Ir   re-solve on the doubly geometric schedule, raw ratios
///   Irt  like Ir but with per-epoch probability thresholding
///   Frt  like Fr but with per-period thresholding theta(t) = (T-t)^(-1/4)
enum class PolicyKind : int { Spa = 0, Fr = 1, Ir = 2, Irt = 3, Frt = 4 };

inline constexpr PolicyKind all_policy_kinds[] = {
    PolicyKind::Spa, PolicyKind::Fr, PolicyKind::Ir, PolicyKind::Irt, PolicyKind::Frt};

const char* policy_name(PolicyKind kind) noexcept;
std::optional<PolicyKind> policy_from_name(std::string_view name) noexcept;

/// A policy to run plus the identifier that keys its thinning stream.
/// Policies on the same path share arrivals (common random numbers) but
/// draw acceptance coins from mix_seed(mix_seed(path.seed,
/// stream_tag::thinning), policy_id).
struct PolicySpec {
    PolicyKind kind = PolicyKind::Spa;
    std::uint64_t policy_id = 0;
};
inline PolicySpec make_policy(PolicyKind kind) {
    return PolicySpec{kind, static_cast<std::uint64_t>(kind)};
}

/// Doubly geometric re-solve schedule:
///   K       = ceil(log log T / log(6/5))
///   tau_u   = T^((5/6)^u)            epoch length, u = 0..K
///   start_u = T - tau_u              epoch start (start_0 = 0)
///   theta_u = tau_u^(-1/4)           rounding threshold, u = 0..K-1
/// Epochs are [start_u, start_{u+1}) with the final epoch closing at T.
struct ResolveSchedule {
    double horizon = 0.0;
    int K = 0;
    std::vector<double> tau;        ///< size K + 1
    std::vector<double> start;      ///< size K + 1
    std::vector<double> threshold;  ///< size K
};

/// Throws Error(HorizonTooShort) unless T > e (log log T must be positive).
ResolveSchedule compute_schedule(double horizon);

/// Thresholded acceptance probability used by Irt and Frt.  Comparisons are
/// strict and evaluated in this order:
///   x < lambda * theta        -> 0
///   x > lambda * (1 - theta)  -> 1
///   otherwise                 -> x / lambda clamped to [0, 1]
double threshold_probability(double x, double lambda, double theta) noexcept;

/// Plain acceptance ratio x / lambda clamped to [0, 1].
double ratio_probability(double x, double lambda) noexcept;

enum class Decision : char {
    Accept = 'A',
    RejectCoin = 'R',      ///< acceptance coin failed (includes thresholded-to-zero)
    RejectCapacity = 'C',  ///< some resource could not cover the class column
};

/// One row of the per-event debug trace.
struct TraceRow {
    double time = 0.0;
    std::uint32_t cls = 0;
    Decision decision = Decision::RejectCoin;
    double prob = 0.0;               ///< acceptance probability in force
    std::vector<double> remaining;   ///< capacities after the decision
};

struct RunOptions {
    std::vector<TraceRow>* trace = nullptr;  ///< per-event trace sink
    /// rhs handed to the LP at each re-solve, in re-solve order.  Setting
    /// this forces Fr/Frt to solve every period even when no event falls in
    /// it, so the recorded sequence covers t = 0 .. ceil(T)-1.
    std::vector<std::vector<double>>* resolve_rhs = nullptr;
};

/// Outcome of one policy run on one path.
struct RunResult {
    double revenue = 0.0;
    std::vector<std::int64_t> accepted;  ///< per class
    std::vector<double> remaining;       ///< per resource, >= 0
    std::int64_t resolves = 0;           ///< number of LP solves performed
};

/// The five policy runners.  All consume exactly one uniform from `thin`
/// per arriving customer (even when the decision is forced by capacity or
/// by a 0/1 probability), enforce the capacity check column <= remaining
/// exactly, and never mutate the instance or the path.
RunResult run_spa(const Instance& inst, const ArrivalPath& path, SplitMix64& thin,
                  const RunOptions& opts = {});
RunResult run_fr(const Instance& inst, const ArrivalPath& path, SplitMix64& thin,
                 const RunOptions& opts = {});
RunResult run_frt(const Instance& inst, const ArrivalPath& path, SplitMix64& thin,
                  const RunOptions& opts = {});
RunResult run_ir(const Instance& inst, const ArrivalPath& path, SplitMix64& thin,
                 const ResolveSchedule& schedule, const RunOptions& opts = {});
RunResult run_irt(const Instance& inst, const ArrivalPath& path, SplitMix64& thin,
                  const ResolveSchedule& schedule, const RunOptions& opts = {});

/// Dispatch on spec.kind with the thinning stream derived from
/// (path.seed, spec.policy_id); computes the resolve schedule when needed.
RunResult run_policy(const Instance& inst, const ArrivalPath& path, const PolicySpec& spec,
                     const RunOptions& opts = {});

const char* decision_name(Decision d) noexcept;

/// Event trace as CSV with header
///   time,class,decision,prob,cap_0,...,cap_{m-1}
/// where m = num_resources.  Deterministic byte-for-byte for equal traces.
std::string trace_to_csv(const std::vector<TraceRow>& trace, std::size_t num_resources);

}  // namespace nrmlab
