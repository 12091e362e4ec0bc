#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "nrmlab/dense.hpp"
#include "nrmlab/errors.hpp"

namespace nrmlab {

struct LpSolution;  // lp.hpp

/// One problem instance: n demand classes arriving as independent Poisson
/// processes over a finite horizon, consuming from m finite resource pools.
///
/// Instances are immutable once validated; helpers that need a scaled or
/// re-dimensioned variant construct a new value.
struct Instance {
    double horizon = 0.0;                ///< T > 0, real-valued
    std::vector<double> arrival_rate;    ///< lambda_j > 0, size n
    std::vector<double> revenue;         ///< r_j > 0, size n
    DenseMatrix bom;                     ///< a_lj >= 0, m x n, no zero column
    std::vector<double> capacity;        ///< C_l >= 0, size m

    std::size_t num_classes() const { return arrival_rate.size(); }
    std::size_t num_resources() const { return capacity.size(); }
};

/// Checks every structural invariant and returns the instance unchanged.
/// Throws Error with code DimensionMismatch, NonpositiveRate,
/// NegativeCapacity or ZeroColumn; messages name the offending entry.
const Instance& validate_instance(const Instance& inst);

/// Per-resource capacity rate b_l = C_l / T.
struct CapacityRate {
    std::vector<double> b;
};
CapacityRate capacity_rate(const Instance& inst);

/// Degeneracy classification of a fluid-relaxation optimum: counts solution
/// entries at a box bound (x_j <= tol or x_j >= lambda_j - tol) plus rows
/// binding at the capacity rate (|sum_j a_lj x_j - b_l| <= tol).  The
/// optimum is nondegenerate exactly when the two counts sum to n.
struct DegeneracyReport {
    bool nondegenerate = false;
    int bound_count = 0;    ///< classes with x_j at 0 or at lambda_j
    int binding_count = 0;  ///< resources binding at rate b_l
};

/// Classify `sol` (an optimum of the rate LP for `inst`).  Throws
/// SolutionInstanceMismatch if the vector length does not fit.  The default
/// tolerance is absolute; both counts are monotone in `tol`.
DegeneracyReport classify_degeneracy(const Instance& inst, const LpSolution& sol,
                                     double tol = 1e-7);
bool is_nondegenerate(const Instance& inst, const LpSolution& sol, double tol = 1e-7);

/// JSON (de)serialization.  Schema: object with keys
///   horizon   number > 0
///   lambda    array of n numbers
///   revenue   array of n numbers
///   bom       array of m rows, each an array of n numbers
///   capacity  array of m numbers
/// Parse failures throw Error(ParseError) naming the offending key; the
/// parsed instance is then validated (see validate_instance).
Instance instance_from_json(const std::string& text);
Instance instance_from_json_file(const std::string& path);
std::string instance_to_json(const Instance& inst);

}  // namespace nrmlab
