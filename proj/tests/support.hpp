#pragma once

#include <optional>
#include <vector>

#include "persuasion/instances.hpp"
#include "persuasion/mdp.hpp"
#include "persuasion/oracle.hpp"
#include "persuasion/scheme.hpp"

namespace persuasion::testing {

/// Independent LP check: enumerate every basic solution (column subsets of
/// size m), solve the square system by Gaussian elimination, keep feasible
/// ones, return the best objective. For n <= 6 only.
std::optional<double> best_basic_feasible_value(const LinearProgram& lp);

/// Brute-force cell optimum: enumerate every deterministic promise
/// function over the realizable sets (structurally unreachable (a, s') pairs
/// pinned to 0) and solve the recommendation-only LP for each. Returns
/// nullopt when no candidate is feasible (the unrealizable case).
std::optional<double> brute_force_cell_optimum(int h, int s, double promise_value,
                                               const ValueTable& next,
                                               const PersuasionMdp& inst,
                                               const DeviationValues& deviation,
                                               long max_candidates = 2000);

/// One-shot persuasion optimum for H = 1 instances: per start state, maximize
/// expected sender reward over recommendation schemes subject to obedience
/// rows, then aggregate with beta.
double one_shot_persuasion_value(const PersuasionMdp& inst);

/// Brute-force receiver optimum: the best deterministic Markov receiver
/// policy against the prior, by full enumeration. Independent check for the
/// deviation-value recursion on tiny instances.
double brute_force_receiver_optimum(const PersuasionMdp& inst, int start_state);

/// Lift a Markovian scheme to promise form: at every (h, s) the promise set
/// holds 0 and the scheme's own receiver continuation (ceil'ed to the grid);
/// both cells recommend the Markov row and promise the continuation forward.
/// Requires the continuations to sit on the given grid step.
PromiseScheme lift_markov_scheme(const PersuasionMdp& inst, const MarkovScheme& scheme,
                                 double delta);

/// K4 helpers shared by tests and the acceptance suite.
Graph k4();
std::vector<int> minimum_vertex_cover(const Graph& g);

/// Restriction of an instance to its first step (H = 1).
PersuasionMdp truncate_to_one_step(const PersuasionMdp& inst);

/// A defect scheme for a given instance: promise sets {0} everywhere, all
/// recommendations on `action`, promises 0. Recommending a dominated action
/// this way violates local persuasiveness wherever a better deviation exists.
PromiseScheme constant_action_scheme(const PersuasionMdp& inst, int action, double delta);

}  // namespace persuasion::testing
