#include "nrmlab/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <json.hpp>

namespace nrmlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_problem_shape(const LpProblem& p) {
    const std::size_t n = p.objective.size();
    const std::size_t m = p.rhs.size();
    if (n == 0 || m == 0)
        throw Error(Errc::InvalidArgument, "LP needs at least one variable and one row");
    if (p.rows.rows != m || p.rows.cols != n)
        throw Error(Errc::InvalidArgument,
                    "LP matrix is " + std::to_string(p.rows.rows) + "x" +
                        std::to_string(p.rows.cols) + ", expected " + std::to_string(m) +
                        "x" + std::to_string(n));
    if (p.upper.size() != n)
        throw Error(Errc::InvalidArgument, "LP upper-bound vector has wrong length");
}

double tie_tolerance(double t) { return 1e-10 * (1.0 + std::fabs(t)); }

}  // namespace

// --- brute-force reference ------------------------------------------------
//
// Enumerates every choice of n active constraints among the m rows and the
// 2n box bounds, solves the induced linear system, and keeps the best
// feasible point.  Exponential and proud of it; guarded to tiny sizes.

VertexEnumeration enumerate_vertices_oracle(const LpProblem& problem) {
    check_problem_shape(problem);
    const std::size_t n = problem.objective.size();
    const std::size_t m = problem.rhs.size();
    if (n > 6 || m > 4)
        throw Error(Errc::TooLarge, "vertex enumeration is limited to n <= 6, m <= 4");

    const std::size_t total = m + 2 * n;  // rows, then lower bounds, then upper bounds
    double scale = 1.0;
    for (double v : problem.rhs) scale = std::max(scale, std::fabs(v));
    for (double v : problem.upper) scale = std::max(scale, std::fabs(v));
    const double feas_tol = 1e-8 * scale;

    VertexEnumeration best;
    best.value = -kInf;

    std::vector<std::size_t> pick(n);
    for (std::size_t i = 0; i < n; ++i) pick[i] = i;

    std::vector<double> M(n * n), v(n), x(n);
    std::vector<std::size_t> perm(n);

    const auto fill_constraint = [&](std::size_t c, double* row, double& rhs) {
        std::fill(row, row + n, 0.0);
        if (c < m) {
            for (std::size_t j = 0; j < n; ++j) row[j] = problem.rows(c, j);
            rhs = problem.rhs[c];
        } else if (c < m + n) {
            row[c - m] = 1.0;
            rhs = 0.0;
        } else {
            row[c - m - n] = 1.0;
            rhs = problem.upper[c - m - n];
        }
    };

    while (true) {
        ++best.candidates_checked;
        for (std::size_t i = 0; i < n; ++i) fill_constraint(pick[i], &M[i * n], v[i]);

        // Gaussian elimination with partial pivoting.
        bool singular = false;
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        for (std::size_t col = 0; col < n && !singular; ++col) {
            std::size_t piv = col;
            double best_abs = std::fabs(M[perm[col] * n + col]);
            for (std::size_t r = col + 1; r < n; ++r) {
                const double a = std::fabs(M[perm[r] * n + col]);
                if (a > best_abs) { best_abs = a; piv = r; }
            }
            if (best_abs < 1e-10) { singular = true; break; }
            std::swap(perm[col], perm[piv]);
            const double* prow = &M[perm[col] * n];
            for (std::size_t r = col + 1; r < n; ++r) {
                double* row = &M[perm[r] * n];
                const double f = row[col] / prow[col];
                if (f == 0.0) continue;
                for (std::size_t k = col; k < n; ++k) row[k] -= f * prow[k];
                v[perm[r]] -= f * v[perm[col]];
            }
        }
        if (!singular) {
            for (std::size_t col = n; col-- > 0;) {
                double s = v[perm[col]];
                for (std::size_t k = col + 1; k < n; ++k) s -= M[perm[col] * n + k] * x[k];
                x[col] = s / M[perm[col] * n + col];
            }
            bool feasible = true;
            for (std::size_t j = 0; j < n && feasible; ++j)
                feasible = x[j] >= -feas_tol && x[j] <= problem.upper[j] + feas_tol;
            for (std::size_t l = 0; l < m && feasible; ++l) {
                double used = 0.0;
                for (std::size_t j = 0; j < n; ++j) used += problem.rows(l, j) * x[j];
                feasible = used <= problem.rhs[l] + feas_tol;
            }
            if (feasible) {
                double value = 0.0;
                for (std::size_t j = 0; j < n; ++j) value += problem.objective[j] * x[j];
                if (value > best.value + 1e-12) {
                    best.value = value;
                    best.x = x;
                }
            }
        }

        // next n-combination of {0..total-1} in lexicographic order
        std::size_t i = n;
        while (i-- > 0) {
            if (pick[i] + (n - i) < total) {
                ++pick[i];
                for (std::size_t k = i + 1; k < n; ++k) pick[k] = pick[k - 1] + 1;
                break;
            }
            if (i == 0) {
                if (best.x.empty())
                    throw Error(Errc::NumericalFailure,
                                "vertex enumeration found no feasible vertex");
                return best;
            }
        }
    }
}

// --- primal simplex with box bounds ----------------------------------------

int LpSolver::pick_entering(bool bland) const {
    int q = -1;
    double best_gain = tol_.pivot;
    for (std::size_t k = 0; k < nv_; ++k) {
        if (where_[k] == 0) continue;                  // basic
        if (upper_[k] - lower_[k] <= 0.0) continue;    // fixed variable
        const double gain = where_[k] < 0 ? dj_[k] : -dj_[k];
        if (gain <= tol_.pivot) continue;
        if (bland) return static_cast<int>(k);         // lowest eligible index
        if (gain > best_gain) {                        // strict: keeps lowest index on ties
            best_gain = gain;
            q = static_cast<int>(k);
        }
    }
    return q;
}

LpStatus LpSolver::solve(const LpProblem& problem, LpSolution& out) {
    check_problem_shape(problem);
    n_ = problem.objective.size();
    m_ = problem.rhs.size();
    nv_ = n_ + m_;

    tab_.assign(m_ * nv_, 0.0);
    basic_.resize(m_);
    dj_.assign(nv_, 0.0);
    lower_.assign(nv_, 0.0);
    upper_.resize(nv_);
    cost_.assign(nv_, 0.0);
    basis_.resize(m_);
    where_.assign(nv_, static_cast<signed char>(-1));

    for (std::size_t j = 0; j < n_; ++j) {
        upper_[j] = problem.upper[j];
        cost_[j] = problem.objective[j];
        dj_[j] = problem.objective[j];
    }
    for (std::size_t i = 0; i < m_; ++i) {
        double* row = &tab_[i * nv_];
        const double* arow = problem.rows.row(i);
        for (std::size_t j = 0; j < n_; ++j) row[j] = arow[j];
        row[n_ + i] = 1.0;
        upper_[n_ + i] = kInf;      // slack: [0, inf)
        where_[n_ + i] = 0;         // slack basis
        basis_[i] = static_cast<int>(n_ + i);
        basic_[i] = problem.rhs[i];
    }

    const int bland_after = 50 + 10 * static_cast<int>(nv_);
    const int max_iter = 100000 + 1000 * static_cast<int>(nv_);

    int iter = 0;
    for (;; ++iter) {
        if (iter > max_iter) {
            out.status = LpStatus::NumericalFailure;
            out.iterations = iter;
            return out.status;
        }
        const int q = pick_entering(iter >= bland_after);
        if (q < 0) break;  // optimal

        const double sigma = where_[q] < 0 ? 1.0 : -1.0;
        const double range = upper_[q] - lower_[q];

        // ratio test: how far can the entering variable move?
        double best_t = kInf;
        int leave_row = -1;
        bool leave_to_upper = false;
        for (std::size_t i = 0; i < m_; ++i) {
            const double dir = sigma * tab_[i * nv_ + q];
            double limit;
            bool to_upper;
            if (dir > tol_.pivot) {  // basic variable moves down to its lower bound
                limit = (basic_[i] - lower_[basis_[i]]) / dir;
                to_upper = false;
            } else if (dir < -tol_.pivot) {  // basic variable moves up to its upper bound
                if (upper_[basis_[i]] == kInf) continue;
                limit = (upper_[basis_[i]] - basic_[i]) / (-dir);
                to_upper = true;
            } else {
                continue;
            }
            if (limit < 0.0) limit = 0.0;  // roundoff guard on degenerate vertices
            if (leave_row < 0 || limit < best_t - tie_tolerance(best_t)) {
                best_t = limit;
                leave_row = static_cast<int>(i);
                leave_to_upper = to_upper;
            } else if (limit <= best_t + tie_tolerance(best_t) &&
                       basis_[i] < basis_[leave_row]) {
                // ties resolved toward the lowest basic variable index
                best_t = std::min(best_t, limit);
                leave_row = static_cast<int>(i);
                leave_to_upper = to_upper;
            }
        }

        if (std::isfinite(range) && range <= best_t) {
            // bound flip: the entering variable traverses its whole range
            // without driving any basic variable to a bound
            for (std::size_t i = 0; i < m_; ++i)
                basic_[i] -= sigma * range * tab_[i * nv_ + q];
            where_[q] = static_cast<signed char>(-where_[q]);
            continue;
        }
        if (leave_row < 0) {
            // unbounded ray; impossible for valid inputs (box + packing rows)
            out.status = LpStatus::NumericalFailure;
            out.iterations = iter;
            return out.status;
        }

        const double t = best_t;
        const double enter_value = (where_[q] < 0 ? lower_[q] : upper_[q]) + sigma * t;
        for (std::size_t i = 0; i < m_; ++i) {
            if (static_cast<int>(i) == leave_row) continue;
            basic_[i] -= sigma * t * tab_[i * nv_ + q];
        }
        const int leaving = basis_[leave_row];
        where_[leaving] = static_cast<signed char>(leave_to_upper ? 1 : -1);

        double* prow = &tab_[static_cast<std::size_t>(leave_row) * nv_];
        const double piv = prow[q];
        for (std::size_t k = 0; k < nv_; ++k) prow[k] /= piv;
        prow[q] = 1.0;
        for (std::size_t i = 0; i < m_; ++i) {
            if (static_cast<int>(i) == leave_row) continue;
            double* row = &tab_[i * nv_];
            const double f = row[q];
            if (f == 0.0) continue;
            for (std::size_t k = 0; k < nv_; ++k) row[k] -= f * prow[k];
            row[q] = 0.0;
        }
        const double fd = dj_[q];
        if (fd != 0.0) {
            for (std::size_t k = 0; k < nv_; ++k) dj_[k] -= fd * prow[k];
            dj_[q] = 0.0;
        }

        basis_[leave_row] = q;
        where_[q] = 0;
        basic_[leave_row] = enter_value;
    }

    // extract the vertex
    out.x.assign(n_, 0.0);
    for (std::size_t j = 0; j < n_; ++j)
        out.x[j] = where_[j] < 0 ? lower_[j] : (where_[j] > 0 ? upper_[j] : 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
        const int b = basis_[i];
        if (b < static_cast<int>(n_)) out.x[b] = basic_[i];
    }
    double value = 0.0;
    for (std::size_t j = 0; j < n_; ++j) value += problem.objective[j] * out.x[j];
    out.objective_value = value;

    out.binding_rows.clear();
    for (std::size_t l = 0; l < m_; ++l) {
        double used = 0.0;
        for (std::size_t j = 0; j < n_; ++j) used += problem.rows(l, j) * out.x[j];
        if (problem.rhs[l] - used <= tol_.classify)
            out.binding_rows.push_back(static_cast<int>(l));
    }
    out.at_bound.assign(n_, BoundTag::Interior);
    for (std::size_t j = 0; j < n_; ++j) {
        if (out.x[j] <= tol_.classify)
            out.at_bound[j] = BoundTag::Lower;
        else if (out.x[j] >= problem.upper[j] - tol_.classify)
            out.at_bound[j] = BoundTag::Upper;
    }
    out.iterations = iter;
    out.status = LpStatus::Optimal;
    return out.status;
}

LpSolution solve_bounded_lp(const LpProblem& problem, LpTolerances tol) {
    LpSolver solver(tol);
    LpSolution solution;
    if (solver.solve(problem, solution) != LpStatus::Optimal)
        throw Error(Errc::NumericalFailure,
                    "simplex safeguard tripped after " +
                        std::to_string(solution.iterations) + " iterations");
    return solution;
}

LpProblem rate_relaxation(const Instance& inst) {
    LpProblem p;
    p.objective = inst.revenue;
    p.rows = inst.bom;
    p.rhs = capacity_rate(inst).b;
    p.upper = inst.arrival_rate;
    return p;
}

DlpSolution solve_dlp(const Instance& inst) {
    validate_instance(inst);
    DlpSolution result;
    result.lp = solve_bounded_lp(rate_relaxation(inst));
    result.value = inst.horizon * result.lp.objective_value;
    return result;
}

// --- debug dumps ------------------------------------------------------------

std::string lp_problem_to_json(const LpProblem& problem) {
    nlohmann::json j;
    j["objective"] = problem.objective;
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t l = 0; l < problem.rows.rows; ++l) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t c = 0; c < problem.rows.cols; ++c) row.push_back(problem.rows(l, c));
        rows.push_back(std::move(row));
    }
    j["rows"] = std::move(rows);
    j["rhs"] = problem.rhs;
    j["upper"] = problem.upper;
    return j.dump();
}

std::string lp_solution_to_json(const LpSolution& solution) {
    nlohmann::json j;
    j["status"] = solution.status == LpStatus::Optimal ? "optimal" : "numerical_failure";
    j["x"] = solution.x;
    j["objective_value"] = solution.objective_value;
    j["binding_rows"] = solution.binding_rows;
    nlohmann::json tags = nlohmann::json::array();
    for (BoundTag t : solution.at_bound)
        tags.push_back(t == BoundTag::Lower ? "lower"
                                            : (t == BoundTag::Upper ? "upper" : "interior"));
    j["at_bound"] = std::move(tags);
    j["iterations"] = solution.iterations;
    return j.dump();
}

}  // namespace nrmlab
