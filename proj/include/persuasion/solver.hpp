#pragma once

#include <vector>

#include "persuasion/oracle.hpp"
#include "persuasion/scheme.hpp"

namespace persuasion {

struct SolveDiagnostics {
    long cells_solved = 0;
    long infeasible_cells = 0;
    double wall_seconds = 0.0;
};

struct SolveResult {
    PromiseScheme scheme;
    std::vector<ValueTable> tables;  // [h-1] for h = 1..H+1; last is the boundary
    GridSpec grid;
    double epsilon = 0.0;
    double delta = 0.0;
    double sender_value = 0.0;  // sum_s beta(s) * M_1(s, 0)
    double scheme_value = 0.0;  // sum_s beta(s) * V^S_1(s, 0)
    SolveDiagnostics diagnostics;
};

/// Backward sweep h = H..1 over states and the full promise grid, filling the
/// tables through the approximate oracle called at iota - delta and
/// assembling the promise-form scheme. delta = epsilon / (2H).
SolveResult dp_solve(const PersuasionMdp& inst, double epsilon);

/// Diagnostics dump of the tables (per step: state, grid index, value).
std::string tables_to_text(const SolveResult& result);

}  // namespace persuasion
