#include <doctest.h>

#include <cmath>
#include <vector>

#include "nrmlab/instance.hpp"
#include "nrmlab/lp.hpp"
#include "nrmlab/rng.hpp"

using namespace nrmlab;

namespace {

LpProblem two_class_lp(double beta) {
    LpProblem p;
    p.objective = {2.0, 1.0};
    p.rows = DenseMatrix(1, 2);
    p.rows(0, 0) = p.rows(0, 1) = 1.0;
    p.rhs = {beta};
    p.upper = {1.0, 1.0};
    return p;
}

LpProblem five_class_lp() {
    LpProblem p;
    p.objective = {10.0, 3.0, 6.0, 1.0, 2.0};
    p.rows = DenseMatrix(4, 5);
    const double rows[4][5] = {{1, 0, 1, 0, 0}, {0, 1, 0, 1, 1}, {1, 1, 0, 0, 0},
                               {0, 0, 0, 0, 1}};
    for (std::size_t l = 0; l < 4; ++l)
        for (std::size_t j = 0; j < 5; ++j) p.rows(l, j) = rows[l][j];
    p.rhs.assign(4, 1.0);
    p.upper.assign(5, 1.0);
    return p;
}

/// Random packing LP with entries in {0,1,2}, no zero column.
LpProblem random_lp(SplitMix64& rng) {
    while (true) {
        const std::size_t n = 1 + rng.next() % 4;
        const std::size_t m = 1 + rng.next() % 3;
        LpProblem p;
        p.rows = DenseMatrix(m, n);
        bool ok = true;
        for (std::size_t j = 0; j < n; ++j) {
            double colsum = 0.0;
            for (std::size_t l = 0; l < m; ++l) {
                p.rows(l, j) = static_cast<double>(rng.next() % 3);
                colsum += p.rows(l, j);
            }
            if (colsum == 0.0) ok = false;
        }
        if (!ok) continue;
        for (std::size_t j = 0; j < n; ++j) {
            p.objective.push_back(0.1 + 4.9 * rng.uniform01());
            p.upper.push_back(0.1 + 1.9 * rng.uniform01());
        }
        for (std::size_t l = 0; l < m; ++l) p.rhs.push_back(0.2 + 1.8 * rng.uniform01());
        return p;
    }
}

void audit_feasibility(const LpProblem& p, const LpSolution& s) {
    const std::size_t n = p.objective.size();
    for (std::size_t j = 0; j < n; ++j) {
        CHECK(s.x[j] >= -1e-9);
        CHECK(s.x[j] <= p.upper[j] + 1e-9);
    }
    for (std::size_t l = 0; l < p.rhs.size(); ++l) {
        double used = 0.0;
        for (std::size_t j = 0; j < n; ++j) used += p.rows(l, j) * s.x[j];
        CHECK(used <= p.rhs[l] + 1e-7);
    }
    double value = 0.0;
    for (std::size_t j = 0; j < n; ++j) value += p.objective[j] * s.x[j];
    CHECK(std::fabs(value - s.objective_value) <= 1e-9 * (1.0 + std::fabs(value)));
}

}  // namespace

TEST_CASE("two-class packing LP has the known optimum") {
    const LpSolution s = solve_bounded_lp(two_class_lp(1.0));
    REQUIRE(s.status == LpStatus::Optimal);
    CHECK(s.x[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s.x[1] == doctest::Approx(0.0).scale(1).epsilon(1e-12));
    CHECK(s.objective_value == doctest::Approx(2.0).epsilon(1e-12));
    REQUIRE(s.binding_rows.size() == 1);
    CHECK(s.binding_rows[0] == 0);
    CHECK(s.at_bound[0] == BoundTag::Upper);
    CHECK(s.at_bound[1] == BoundTag::Lower);
}

TEST_CASE("five-class four-resource LP picks the two high-revenue columns") {
    const LpSolution s = solve_bounded_lp(five_class_lp());
    const std::vector<double> expect = {1.0, 0.0, 0.0, 0.0, 1.0};
    for (std::size_t j = 0; j < 5; ++j)
        CHECK(s.x[j] == doctest::Approx(expect[j]).scale(1).epsilon(1e-12));
    CHECK(s.objective_value == doctest::Approx(12.0).epsilon(1e-12));
    CHECK(s.binding_rows.size() == 4);

    const VertexEnumeration oracle = enumerate_vertices_oracle(five_class_lp());
    CHECK(oracle.value == doctest::Approx(12.0).epsilon(1e-12));
    CHECK(oracle.candidates_checked == 2002);  // C(4 + 2*5, 5)
}

TEST_CASE("zero capacity forces the zero solution") {
    const LpSolution s = solve_bounded_lp(two_class_lp(0.0));
    CHECK(s.x[0] == 0.0);
    CHECK(s.x[1] == 0.0);
    CHECK(s.objective_value == 0.0);
}

TEST_CASE("simplex agrees with vertex enumeration on random packing LPs") {
    SplitMix64 rng(0x5eedf00d);
    LpSolver solver;
    LpSolution s;
    for (int trial = 0; trial < 300; ++trial) {
        const LpProblem p = random_lp(rng);
        CAPTURE(trial);
        REQUIRE(solver.solve(p, s) == LpStatus::Optimal);
        const VertexEnumeration oracle = enumerate_vertices_oracle(p);
        CHECK(std::fabs(s.objective_value - oracle.value) <=
              1e-6 * (1.0 + std::fabs(oracle.value)));
        audit_feasibility(p, s);
    }
}

TEST_CASE("objective scaling rescales the value and keeps the vertex") {
    SplitMix64 rng(77);
    for (int trial = 0; trial < 20; ++trial) {
        LpProblem p = random_lp(rng);
        const LpSolution base = solve_bounded_lp(p);
        for (double& c : p.objective) c *= 3.5;
        const LpSolution scaled = solve_bounded_lp(p);
        CHECK(std::fabs(scaled.objective_value - 3.5 * base.objective_value) <=
              1e-9 * (1.0 + std::fabs(base.objective_value)));
        for (std::size_t j = 0; j < p.objective.size(); ++j)
            CHECK(scaled.x[j] == doctest::Approx(base.x[j]).epsilon(1e-9));
    }
}

TEST_CASE("geometry scaling rescales the vertex") {
    SplitMix64 rng(78);
    for (int trial = 0; trial < 20; ++trial) {
        LpProblem p = random_lp(rng);
        const LpSolution base = solve_bounded_lp(p);
        for (double& v : p.rhs) v *= 2.0;
        for (double& v : p.upper) v *= 2.0;
        const LpSolution scaled = solve_bounded_lp(p);
        CHECK(std::fabs(scaled.objective_value - 2.0 * base.objective_value) <=
              1e-9 * (1.0 + std::fabs(base.objective_value)));
    }
}

TEST_CASE("one solver instance can be reused across problem shapes") {
    LpSolver solver;
    LpSolution s;
    REQUIRE(solver.solve(five_class_lp(), s) == LpStatus::Optimal);
    CHECK(s.objective_value == doctest::Approx(12.0));
    REQUIRE(solver.solve(two_class_lp(1.0), s) == LpStatus::Optimal);
    CHECK(s.objective_value == doctest::Approx(2.0));
    REQUIRE(solver.solve(five_class_lp(), s) == LpStatus::Optimal);
    CHECK(s.objective_value == doctest::Approx(12.0));
}

TEST_CASE("rate relaxation wires instance fields into the LP") {
    Instance inst;
    inst.horizon = 500.0;
    inst.arrival_rate = {1.0, 2.0};
    inst.revenue = {3.0, 4.0};
    inst.bom = DenseMatrix(1, 2);
    inst.bom(0, 0) = 1.0;
    inst.bom(0, 1) = 2.0;
    inst.capacity = {600.0};
    const LpProblem p = rate_relaxation(inst);
    CHECK(p.objective == inst.revenue);
    CHECK(p.upper == inst.arrival_rate);
    CHECK(p.rhs[0] == doctest::Approx(1.2).epsilon(1e-14));
}

TEST_CASE("horizon-scaled rate LP values") {
    Instance inst;
    inst.horizon = 1000.0;
    inst.arrival_rate = {1.0, 1.0};
    inst.revenue = {2.0, 1.0};
    inst.bom = DenseMatrix(1, 2);
    inst.bom(0, 0) = inst.bom(0, 1) = 1.0;
    inst.capacity = {1000.0};
    CHECK(solve_dlp(inst).value == doctest::Approx(2000.0).epsilon(1e-12));

    inst.capacity = {0.0};
    CHECK(solve_dlp(inst).value == 0.0);
}

TEST_CASE("vertex enumeration refuses oversized problems") {
    LpProblem p;
    p.objective.assign(7, 1.0);
    p.rows = DenseMatrix(1, 7);
    for (std::size_t j = 0; j < 7; ++j) p.rows(0, j) = 1.0;
    p.rhs = {1.0};
    p.upper.assign(7, 1.0);
    try {
        enumerate_vertices_oracle(p);
        FAIL("expected TooLarge");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::TooLarge);
    }
}

TEST_CASE("malformed problems are rejected before solving") {
    LpProblem p = two_class_lp(1.0);
    p.upper.pop_back();
    CHECK_THROWS_AS(solve_bounded_lp(p), Error);

    LpProblem empty;
    CHECK_THROWS_AS(solve_bounded_lp(empty), Error);
}

TEST_CASE("degenerate vertices with many ties still terminate") {
    // every column identical: massive tie-breaking stress
    LpProblem p;
    p.objective.assign(4, 1.0);
    p.rows = DenseMatrix(3, 4);
    for (std::size_t l = 0; l < 3; ++l)
        for (std::size_t j = 0; j < 4; ++j) p.rows(l, j) = 1.0;
    p.rhs.assign(3, 2.0);
    p.upper.assign(4, 1.0);
    const LpSolution s = solve_bounded_lp(p);
    CHECK(s.objective_value == doctest::Approx(2.0).epsilon(1e-12));
    audit_feasibility(p, s);
}

TEST_CASE("LP debug dumps contain the key fields") {
    const LpProblem p = two_class_lp(1.0);
    const std::string pj = lp_problem_to_json(p);
    CHECK(pj.find("\"objective\"") != std::string::npos);
    const std::string sj = lp_solution_to_json(solve_bounded_lp(p));
    CHECK(sj.find("\"optimal\"") != std::string::npos);
    CHECK(sj.find("\"binding_rows\"") != std::string::npos);
}
