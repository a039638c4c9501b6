#include "persuasion/solver.hpp"

#include <chrono>
#include <sstream>
#include <stdexcept>

namespace persuasion {

SolveResult dp_solve(const PersuasionMdp& inst, double epsilon) {
    if (epsilon <= 0.0) throw std::invalid_argument("dp_solve: epsilon must be positive");
    {
        const std::vector<std::string> violations = validate_instance(inst);
        if (!violations.empty())
            throw std::invalid_argument("dp_solve: invalid instance: " + violations.front());
    }
    const auto start = std::chrono::steady_clock::now();

    const int H = inst.horizon, S = inst.num_states;
    SolveResult result;
    result.epsilon = epsilon;
    result.grid = GridSpec::for_epsilon(H, epsilon);
    result.delta = result.grid.delta;

    const DeviationValues deviation = deviation_values(inst);

    result.tables.assign(H + 1, ValueTable::all_unrealizable(S, result.grid));
    ValueTable& boundary = result.tables[H];
    for (int s = 0; s < S; ++s) boundary.set(s, 0, 0.0);  // only the zero promise

    PromiseScheme& scheme = result.scheme;
    scheme.delta = result.delta;
    scheme.horizon = H;
    scheme.num_states = S;
    scheme.num_actions = inst.num_actions;
    scheme.num_observations = inst.num_observations;
    scheme.cells.assign(H, std::vector<std::vector<PromiseCell>>(S));

    for (int h = H; h >= 1; --h) {
        const ValueTable& next = result.tables[h];
        ValueTable& table = result.tables[h - 1];
        for (int s = 0; s < S; ++s) {
            for (int k = 0; k < result.grid.num_points; ++k) {
                const double relaxed_promise = result.grid.value(k) - result.delta;
                OracleResult cell =
                    approximate_oracle(h, s, relaxed_promise, next, inst, deviation);
                ++result.diagnostics.cells_solved;
                if (!cell.feasible) {
                    ++result.diagnostics.infeasible_cells;
                    continue;
                }
                table.set(s, k, cell.value);
                PromiseCell stored;
                stored.promise = k;
                stored.recommend = std::move(cell.kappa);
                stored.next_promise = std::move(cell.promise);
                scheme.cells[h - 1][s].push_back(std::move(stored));  // k ascending
            }
        }
    }

    result.sender_value = 0.0;
    for (int s = 0; s < S; ++s) {
        if (!result.tables[0].realizable(s, 0))
            throw std::logic_error("dp_solve: zero promise unrealizable at the root");
        result.sender_value += inst.beta(s) * result.tables[0].value(s, 0);
    }

    const SchemeValues vals = scheme_values(inst, scheme);
    result.scheme_value = 0.0;
    for (int s = 0; s < S; ++s) {
        const int pos = scheme.cell_position(1, s, 0);
        result.scheme_value += inst.beta(s) * vals.sender[0][s][pos];
    }

    result.diagnostics.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

std::string tables_to_text(const SolveResult& result) {
    std::ostringstream os;
    os << "{\n \"delta\": " << result.delta << ",\n \"tables\": [\n";
    for (std::size_t h = 0; h < result.tables.size(); ++h) {
        const ValueTable& table = result.tables[h];
        os << "  {\"h\": " << (h + 1) << ", \"entries\": [";
        bool first = true;
        for (int s = 0; s < table.num_states; ++s)
            for (int k = 0; k < table.num_points; ++k)
                if (table.realizable(s, k)) {
                    if (!first) os << ", ";
                    first = false;
                    os << "[" << s << ", " << k << ", " << table.value(s, k) << "]";
                }
        os << "]}" << (h + 1 < result.tables.size() ? "," : "") << "\n";
    }
    os << " ]\n}\n";
    return os.str();
}

}  // namespace persuasion
