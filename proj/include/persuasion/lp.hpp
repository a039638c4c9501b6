#pragma once

#include <string>
#include <vector>

namespace persuasion {

/// maximize c.x  s.t.  A_eq x = b_eq,  A_ge x >= b_ge,  x >= 0.
struct LinearProgram {
    int num_vars = 0;
    std::vector<double> objective;
    std::vector<std::vector<double>> eq_rows;
    std::vector<double> eq_rhs;
    std::vector<std::vector<double>> ge_rows;
    std::vector<double> ge_rhs;

    void add_eq(std::vector<double> row, double rhs);
    void add_ge(std::vector<double> row, double rhs);
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpOutcome {
    LpStatus status = LpStatus::Infeasible;
    std::vector<double> x;   // only meaningful when Optimal
    double value = 0.0;      // objective at x
};

std::string to_string(LpStatus status);

/// Dense two-phase tableau simplex. Deterministic: fixed traversal order,
/// Dantzig pivoting with a switch to Bland's rule after a run of degenerate
/// pivots. Feasibility tolerance 1e-7, pivot tolerance 1e-10.
LpOutcome lp_solve(const LinearProgram& lp);

}  // namespace persuasion
