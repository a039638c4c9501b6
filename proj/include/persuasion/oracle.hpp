#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "persuasion/grid.hpp"
#include "persuasion/lp.hpp"
#include "persuasion/mdp.hpp"

namespace persuasion {

/// DP table M : S x grid -> value-or-unrealizable. Unrealizable entries are a
/// tagged state, never a sentinel float.
struct ValueTable {
    double delta = 0.0;
    int num_states = 0;
    int num_points = 0;
    std::vector<double> values;          // S x num_points, valid where realizable
    std::vector<unsigned char> mask;     // S x num_points

    static ValueTable all_unrealizable(int num_states, const GridSpec& grid);

    GridSpec grid() const { return GridSpec{delta, num_points}; }

    std::size_t index(int s, int k) const {
        return static_cast<std::size_t>(s) * num_points + k;
    }
    bool realizable(int s, int k) const { return mask[index(s, k)] != 0; }
    double value(int s, int k) const { return values[index(s, k)]; }
    std::optional<double> at(int s, int k) const {
        if (!realizable(s, k)) return std::nullopt;
        return values[index(s, k)];
    }
    void set(int s, int k, double v) {
        values[index(s, k)] = v;
        mask[index(s, k)] = 1;
    }
    std::vector<int> realizable_set(int s) const;
};

/// The oracle LP together with its variable index map. Variables are
/// xi[a][theta] followed by z[a][s'][k'] blocks with k' running over the
/// realizable set of s' only.
struct OracleLp {
    LinearProgram lp;
    int num_actions = 0;
    int num_observations = 0;
    int num_states = 0;
    std::vector<std::vector<int>> realizable;  // [s'] -> realizable grid indices
    int z_offset = 0;                          // first z variable

    int xi_index(int a, int theta) const { return a * num_observations + theta; }
    /// First variable of the z block for (a, s'); the block has
    /// realizable[s'].size() entries in realizable-set order.
    int z_block(int a, int s2) const;
    int total_vars() const { return lp.num_vars; }
};

/// Builds LP for the grid-relaxed cell problem at (h, s) with honesty
/// right-hand side promise_value (any real; the sweep calls it at iota-delta,
/// which may be negative). Objective: expected sender reward plus table
/// continuations; constraints: honesty, obedience for all ordered action
/// pairs, per-(a,s') marginal consistency, per-theta simplex rows.
OracleLp build_oracle_lp(int h, int s, double promise_value, const ValueTable& next,
                         const PersuasionMdp& inst, const DeviationValues& deviation);

/// Randomized-promise solution (kappa, q~) recovered from an LP point.
struct RelaxedSolution {
    std::vector<double> kappa;  // [theta][a], theta-major rows
    /// promise_dist[a * S + s'] -> (grid index, probability) pairs; rows with
    /// negligible reach marginal fall back to a point mass on promise 0.
    std::vector<std::vector<std::pair<int, double>>> promise_dist;

    double kappa_at(int theta, int a, int num_actions) const {
        return kappa[static_cast<std::size_t>(theta) * num_actions + a];
    }
};

RelaxedSolution lp_solution_to_relaxed(const OracleLp& built, const std::vector<double>& x,
                                       int h, int s, const PersuasionMdp& inst);

/// Grid-floor of the mean promise per (a, s'), computed in index units.
std::vector<int> derandomize(const RelaxedSolution& relaxed, const ValueTable& next,
                             double delta);

struct OracleResult {
    bool feasible = false;
    double value = 0.0;          // v, table entry when feasible
    double omega = 0.0;          // LP optimum of the relaxed problem
    std::vector<double> kappa;   // [theta][a]
    std::vector<int> promise;    // q: [a][s'], grid indices
    RelaxedSolution relaxed;     // retained for testing

    double kappa_at(int theta, int a, int num_actions) const {
        return kappa[static_cast<std::size_t>(theta) * num_actions + a];
    }
    int promise_at(int a, int s2, int num_states) const {
        return promise[static_cast<std::size_t>(a) * num_states + s2];
    }
};

/// Per-cell approximate oracle: solve the relaxed LP, map back to
/// (kappa, q~), set v to the relaxed objective, derandomize to a deterministic
/// promise function (with an obedience-repair pass, see implementation notes).
/// Infeasible cells return Unrealizable with uniform kappa and q == 0.
/// Throws std::logic_error if the LP is unbounded.
OracleResult approximate_oracle(int h, int s, double promise_value, const ValueTable& next,
                                const PersuasionMdp& inst, const DeviationValues& deviation);

/// Deterministic objective F(kappa, q) with table continuations. Returns
/// nullopt (unrealizable) iff some (a, s') with reach probability > 1e-12 maps
/// to an unrealizable promise; exactly-zero-probability cells are ignored.
std::optional<double> oracle_objective(int h, int s, const std::vector<double>& kappa,
                                       const std::vector<int>& promise,
                                       const ValueTable& next, const PersuasionMdp& inst);

/// Relaxed objective F~(kappa, q~).
double relaxed_objective(int h, int s, const RelaxedSolution& relaxed,
                         const ValueTable& next, const PersuasionMdp& inst);

/// Honesty/obedience slack of a deterministic (kappa, q) pair: the honesty
/// left-hand side minus nothing (caller compares against its threshold) and
/// the most violated obedience row. Used by tests and the repair pass.
double honesty_lhs(int h, int s, const std::vector<double>& kappa,
                   const std::vector<int>& promise, double delta,
                   const PersuasionMdp& inst);
double obedience_lhs(int h, int s, int a, const std::vector<double>& kappa,
                     const std::vector<int>& promise, double delta,
                     const PersuasionMdp& inst);
double obedience_rhs(int h, int s, int a, int alt, const std::vector<double>& kappa,
                     const PersuasionMdp& inst, const DeviationValues& deviation);

}  // namespace persuasion
