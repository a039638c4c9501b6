#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "persuasion/mdp.hpp"
#include "persuasion/scheme.hpp"

namespace persuasion {

/// Simple undirected graph loaded from edge-list text ("u v" per line,
/// 0-based, '#' comments). No self-loops, duplicate edges or isolated
/// vertices.
struct Graph {
    int num_vertices = 0;
    std::vector<std::pair<int, int>> edges;  // each pair ordered (low, high)
};

std::vector<std::string> validate_graph(const Graph& g);
Graph read_graph(const std::string& path);
Graph graph_from_text(const std::string& text);
Graph complete_graph(int n);

/// Non-stationary Markovian scheme: recommendation rows per (step, state,
/// observation).
struct MarkovScheme {
    int horizon = 0;
    int num_states = 0;
    int num_actions = 0;
    int num_observations = 0;
    std::vector<double> recommend;  // [h][s][theta][a]

    std::size_t index(int h, int s, int theta, int a) const {
        return (((static_cast<std::size_t>(h) * num_states + s) * num_observations) +
                theta) *
                   num_actions +
               a;
    }
    double rec(int h, int s, int theta, int a) const {
        return recommend[index(h, s, theta, a)];
    }
    static MarkovScheme uniform(int horizon, int num_states, int num_actions,
                                int num_observations);
};

MarkovScheme read_markov_scheme(const std::string& path);
void write_markov_scheme(const MarkovScheme& scheme, const std::string& path);
std::string markov_scheme_to_text(const MarkovScheme& scheme);
MarkovScheme markov_scheme_from_text(const std::string& text);

/// Vertex-cover reduction instance: states {s0..s3} + one per edge + one per
/// vertex, H = 3, time-homogeneous tables, global action set of size 3 padded
/// with the state's last real action, global observation set of size 2.
PersuasionMdp vc_instance(const Graph& g);

/// State-index helpers for the reduction layout.
struct VcLayout {
    int s0 = 0, s1 = 1, s2 = 2, s3 = 3;
    int edge_base = 4;
    int vertex_base = 0;  // = 4 + |E|
    int num_states = 0;
    int edge_state(int e) const { return edge_base + e; }
    int vertex_state(int v) const { return vertex_base + v; }
};
VcLayout vc_layout(const Graph& g);

/// Deterministic completeness scheme for a vertex cover: reveal at covered
/// vertices, pool on the hedge action elsewhere, steer each edge state toward
/// its lowest-index covering endpoint. Throws if the cover misses an edge.
MarkovScheme vc_completeness_scheme(const Graph& g, const std::vector<int>& cover);

struct MarkovEvaluation {
    double sender_value = 0.0;
    std::vector<double> receiver_value;  // H x S, joint V^R_h(s)
    ViolationReport report;

    double receiver_at(int h, int s, int num_states) const {
        return receiver_value[static_cast<std::size_t>(h - 1) * num_states + s];
    }
};

/// Backward induction of the sender/receiver values under a Markovian scheme
/// plus the per-(h, s, a, a') persuasiveness check at slack epsilon.
MarkovEvaluation evaluate_markov_scheme(const PersuasionMdp& inst,
                                        const MarkovScheme& scheme, double epsilon);

/// Seeded random instance: uniform rewards, flat-simplex transition/prior
/// rows. Deterministic in the seed.
PersuasionMdp random_instance(std::uint64_t seed, int num_states, int num_actions,
                              int num_observations, int horizon);

/// The shipped separation fixture: a 4-state, H = 2 instance whose optimal
/// history-dependent value exceeds the persuasive-Markov optimum by a wide
/// margin (also available as fixtures/separation.json).
PersuasionMdp separation_instance();

struct SeparationResult {
    double dp_value = 0.0;
    double markov_value = 0.0;
    double gap = 0.0;
    double slack_bound = 0.0;  // the epsilon handed to dp_solve
    long candidates = 0;       // Markov grid schemes enumerated
};

/// Brute-forces the persuasive-Markov optimum on a probability grid (keeping
/// only schemes with an empty violation report at epsilon = 0) and compares
/// it against dp_solve's value. Guarded by the candidate budget.
SeparationResult separation_check(const PersuasionMdp& inst, double markov_grid_step,
                                  double epsilon_fine,
                                  long max_candidates = 10'000'000);

}  // namespace persuasion
