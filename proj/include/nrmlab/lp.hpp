#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "nrmlab/dense.hpp"
#include "nrmlab/errors.hpp"
#include "nrmlab/instance.hpp"

namespace nrmlab {

/// Box-constrained packing LP:
///
///     maximize    objective . x
///     subject to  rows x <= rhs,   0 <= x_j <= upper_j
///
/// rows is elementwise nonnegative and rhs nonnegative, so x = 0 is always
/// feasible and the LP is never infeasible or unbounded.  Values are plain
/// data; a problem is cheap to copy and safe to share read-only between
/// threads.
struct LpProblem {
    std::vector<double> objective;  ///< size n
    DenseMatrix rows;               ///< m x n, entries >= 0
    std::vector<double> rhs;        ///< size m, entries >= 0
    std::vector<double> upper;      ///< size n, entries >= 0
};

enum class LpStatus {
    Optimal,
    NumericalFailure,  ///< iteration safeguard tripped; see LpSolution::iterations
};

enum class BoundTag : unsigned char { Lower, Upper, Interior };

struct LpSolution {
    LpStatus status = LpStatus::NumericalFailure;
    std::vector<double> x;             ///< vertex solution, size n
    double objective_value = 0.0;      ///< objective . x
    std::vector<int> binding_rows;     ///< rows with slack <= classify tolerance
    std::vector<BoundTag> at_bound;    ///< per-variable bound classification
    int iterations = 0;
};

struct LpTolerances {
    double pivot = 1e-9;     ///< reduced-cost / pivot element threshold
    double classify = 1e-7;  ///< absolute binding / at-bound classification
};

/// Primal simplex for LpProblem, upper bounds handled implicitly (nonbasic
/// variables may sit at either box bound and can flip without a basis
/// change).  Pivoting is deterministic: Dantzig's rule with lowest-index
/// tie-breaking, switching to Bland's rule once an iteration budget is
/// spent so that cycling on degenerate vertices terminates.  The returned
/// point is always a vertex of the feasible box-polytope.
///
/// The solver owns reusable scratch buffers; one instance per thread, many
/// solves per instance.
class LpSolver {
  public:
    explicit LpSolver(LpTolerances tol = {}) : tol_(tol) {}

    /// Solve into `out`, reusing its buffers.  Returns the status (also
    /// stored in out.status); never throws on numerical failure.
    LpStatus solve(const LpProblem& problem, LpSolution& out);

    const LpTolerances& tolerances() const { return tol_; }

  private:
    int pick_entering(bool bland) const;

    LpTolerances tol_;
    std::size_t n_ = 0, m_ = 0, nv_ = 0;
    std::vector<double> tab_;    // m x (n + m) working tableau
    std::vector<double> basic_;  // current basic values
    std::vector<double> dj_;     // reduced costs
    std::vector<double> lower_, upper_, cost_;
    std::vector<int> basis_;
    std::vector<signed char> where_;  // -1 at lower, +1 at upper, 0 basic
};

/// One-shot convenience wrapper; throws Error(NumericalFailure) with the
/// iteration count if the safeguard trips.
LpSolution solve_bounded_lp(const LpProblem& problem, LpTolerances tol = {});

/// Rate relaxation of an instance: objective r, rows A, rhs b = C / T,
/// upper bounds lambda.
LpProblem rate_relaxation(const Instance& inst);

/// Solution of the rate relaxation plus its horizon-scaled value
/// (value = T * objective_value).
struct DlpSolution {
    LpSolution lp;
    double value = 0.0;
};
DlpSolution solve_dlp(const Instance& inst);

/// Brute-force reference optimum by enumeration of all candidate vertices
/// (every choice of n active constraints among rows and box bounds).
/// Guarded: throws Error(TooLarge) when n > 6 or m > 4.  Used as an
/// independent oracle in tests; deliberately naive.
struct VertexEnumeration {
    double value = 0.0;
    std::vector<double> x;
    std::size_t candidates_checked = 0;
};
VertexEnumeration enumerate_vertices_oracle(const LpProblem& problem);

/// Debug dumps for failure reports.
std::string lp_problem_to_json(const LpProblem& problem);
std::string lp_solution_to_json(const LpSolution& solution);

}  // namespace nrmlab
