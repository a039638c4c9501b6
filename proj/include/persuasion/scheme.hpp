#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "persuasion/grid.hpp"
#include "persuasion/mdp.hpp"

namespace persuasion {

/// One promise cell (h, s, k): the action-recommendation rows per observation
/// and the next-step promise per (recommended action, next state). Promises
/// are stored as grid indices throughout; value = index * delta.
struct PromiseCell {
    int promise = 0;                // grid index k
    std::vector<double> recommend;  // [theta][a], theta-major
    std::vector<int> next_promise;  // [a][s'], a-major, grid indices

    double rec(int theta, int a, int num_actions) const {
        return recommend[static_cast<std::size_t>(theta) * num_actions + a];
    }
    int next(int a, int s2, int num_states) const {
        return next_promise[static_cast<std::size_t>(a) * num_states + s2];
    }
};

/// Promise-form signaling scheme {(I_h, phi_h, g_h)}. cells[h-1][s] holds the
/// promise set I_h(s) in ascending promise order; the step-(H+1) set is {0}
/// structurally and is not stored.
struct PromiseScheme {
    double delta = 0.0;
    int horizon = 0;
    int num_states = 0;
    int num_actions = 0;
    int num_observations = 0;
    std::vector<std::vector<std::vector<PromiseCell>>> cells;  // [h-1][s]

    GridSpec grid() const { return GridSpec::for_horizon(horizon, delta); }

    /// Position of promise index k within cells[h-1][s], or -1 if absent.
    int cell_position(int h, int s, int k) const;
    const PromiseCell* find_cell(int h, int s, int k) const;
    bool in_promise_set(int h, int s, int k) const {
        return h == horizon + 1 ? k == 0 : cell_position(h, s, k) >= 0;
    }

    /// Structural checks: dimensions, 0 in I_1(s), rows summing to one,
    /// promise-function closure, promise values within [0, H].
    std::vector<std::string> validate(const PersuasionMdp& inst) const;
};

/// Folds the promise functions along a history: iota <- 0, then
/// iota <- g[h'](s_h', a_h', iota, s_h'+1) for h' = 1..h-1. Throws
/// std::runtime_error naming the step if an intermediate promise leaves the
/// promise sets (closure violation).
int history_to_promise(const PromiseScheme& scheme, const History& tau);

/// The recommendation row phi[h](. | s_h, iota_tau, theta) the induced
/// history-dependent scheme uses at tau.
std::vector<double> induced_recommendation(const PromiseScheme& scheme,
                                           const History& tau, int theta);

/// Joint value tables of the recursions over (h, s, k in I_h(s)), aligned with
/// scheme.cells positions.
struct SchemeValues {
    std::vector<std::vector<std::vector<std::vector<double>>>> receiver_action;  // [h-1][s][pos][a]
    std::vector<std::vector<std::vector<double>>> receiver;                      // [h-1][s][pos]
    std::vector<std::vector<std::vector<double>>> sender;                        // [h-1][s][pos]
};

SchemeValues scheme_values(const PersuasionMdp& inst, const PromiseScheme& scheme);

/// Per-history value tables computed by enumerating every structurally valid
/// history (desk-scale tool, guarded).
struct HistoryValues {
    struct Entry {
        History tau;
        int promise = 0;              // decoded grid index
        double sender = 0.0;          // V^S(tau)
        std::vector<double> receiver_action;  // V^R(a, tau)
        double receiver = 0.0;        // V^R(tau)
        double reach_probability = 0.0;
    };
    std::vector<std::vector<Entry>> per_step;  // [h-1]
};

constexpr std::size_t kDefaultHistoryGuard = 1'000'000;

/// Total number of histories Sum_h |S|^h |A|^(h-1); used for the size guard.
std::size_t history_count(const PersuasionMdp& inst);

HistoryValues evaluate_by_history_enumeration(
    const PersuasionMdp& inst, const PromiseScheme& scheme,
    std::size_t max_histories = kDefaultHistoryGuard);

enum class ViolationKind { Honesty, LocalPersuasiveness, Definition1 };

struct Violation {
    ViolationKind kind = ViolationKind::Honesty;
    int step = 0;          // 1-based h
    int state = -1;
    int promise = -1;      // grid index, -1 when not applicable
    int action = -1;       // recommended action a
    int alt_action = -1;   // deviation a'
    History history;       // Definition1 only
    double left = 0.0;
    double right = 0.0;
    double slack = 0.0;    // right - left, positive when violated
    bool reachable = true; // Definition1: positive probability under the scheme
    std::string describe() const;
};

struct ViolationReport {
    std::vector<Violation> violations;
    bool empty() const { return violations.empty(); }
    std::size_t size() const { return violations.size(); }
};

/// Honesty test: for every cell, the receiver one-step expectation with
/// promise values as continuations must reach promise - eta (tolerance 1e-9).
ViolationReport check_honesty(const PersuasionMdp& inst, const PromiseScheme& scheme,
                              double eta);

/// Local persuasiveness test: for every cell and action pair (a, a'),
/// obeying with promised continuations beats deviating to a' followed by the
/// deviation values (tolerance 1e-9).
ViolationReport check_local_persuasiveness(const PersuasionMdp& inst,
                                           const PromiseScheme& scheme,
                                           const DeviationValues& deviation);

/// Exhaustive persuasiveness check over all histories and action pairs with
/// slack epsilon + 1e-9. Desk-scale tool, guarded like the enumeration.
ViolationReport verify_persuasive_exhaustive(
    const PersuasionMdp& inst, const PromiseScheme& scheme, double epsilon,
    std::size_t max_histories = kDefaultHistoryGuard);

/// Scheme file I/O; see README for the schema. read_scheme throws on
/// malformed documents and structural-invariant violations that do not need
/// an instance (row sums, closure, 0 in I_1).
PromiseScheme read_scheme(const std::string& path);
void write_scheme(const PromiseScheme& scheme, const std::string& path);

std::string scheme_to_text(const PromiseScheme& scheme);
PromiseScheme scheme_from_text(const std::string& text);

}  // namespace persuasion
