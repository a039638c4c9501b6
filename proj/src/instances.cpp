#include "persuasion/instances.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "persuasion/rng.hpp"
#include "persuasion/solver.hpp"

namespace persuasion {

namespace {
constexpr double kCheckTol = 1e-9;
}

// ---------------------------------------------------------------------------
// Graphs
// ---------------------------------------------------------------------------

std::vector<std::string> validate_graph(const Graph& g) {
    std::vector<std::string> out;
    if (g.num_vertices <= 0) out.push_back("graph has no vertices");
    std::set<std::pair<int, int>> seen;
    std::vector<char> touched(std::max(g.num_vertices, 0), 0);
    for (const auto& [u, v] : g.edges) {
        if (u == v) out.push_back("self-loop at vertex " + std::to_string(u));
        if (u < 0 || v < 0 || u >= g.num_vertices || v >= g.num_vertices) {
            out.push_back("edge endpoint out of range: (" + std::to_string(u) + ", " +
                          std::to_string(v) + ")");
            continue;
        }
        const auto key = std::minmax(u, v);
        if (!seen.insert(key).second)
            out.push_back("duplicate edge (" + std::to_string(key.first) + ", " +
                          std::to_string(key.second) + ")");
        touched[u] = touched[v] = 1;
    }
    for (int v = 0; v < g.num_vertices; ++v)
        if (!touched[v]) out.push_back("isolated vertex " + std::to_string(v));
    return out;
}

Graph graph_from_text(const std::string& text) {
    Graph g;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    int max_vertex = -1;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ls(line);
        int u, v;
        if (!(ls >> u)) continue;  // blank or comment-only line
        if (!(ls >> v))
            throw std::runtime_error("graph file: line " + std::to_string(line_no) +
                                     ": expected two vertex indices");
        g.edges.push_back(std::minmax(u, v));
        max_vertex = std::max({max_vertex, u, v});
    }
    g.num_vertices = max_vertex + 1;
    const std::vector<std::string> violations = validate_graph(g);
    if (!violations.empty())
        throw std::runtime_error("graph file: " + violations.front());
    return g;
}

Graph read_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open graph file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return graph_from_text(buf.str());
}

Graph complete_graph(int n) {
    Graph g;
    g.num_vertices = n;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) g.edges.push_back({u, v});
    return g;
}

// ---------------------------------------------------------------------------
// Vertex-cover reduction
// ---------------------------------------------------------------------------

VcLayout vc_layout(const Graph& g) {
    VcLayout layout;
    layout.vertex_base = 4 + static_cast<int>(g.edges.size());
    layout.num_states = layout.vertex_base + g.num_vertices;
    return layout;
}

PersuasionMdp vc_instance(const Graph& g) {
    const std::vector<std::string> violations = validate_graph(g);
    if (!violations.empty())
        throw std::invalid_argument("vc_instance: " + violations.front());

    const VcLayout layout = vc_layout(g);
    const int S = layout.num_states, A = 3, T = 2, H = 3;
    const int E = static_cast<int>(g.edges.size()), V = g.num_vertices;
    PersuasionMdp inst = PersuasionMdp::zeros(S, A, T, H);

    inst.labels.states = {"s0", "s1", "s2", "s3"};
    for (const auto& [u, v] : g.edges)
        inst.labels.states.push_back("e" + std::to_string(u) + "_" + std::to_string(v));
    for (int v = 0; v < V; ++v) inst.labels.states.push_back("v" + std::to_string(v));
    inst.labels.actions = {"a0", "a1", "a2"};
    inst.labels.observations = {"th0", "th1"};

    inst.initial[layout.s0] = 0.5;
    inst.initial[layout.s1] = 0.5;

    // One time-homogeneous step, copied across h below. real_actions[s] gives
    // the number of genuine actions; higher indices duplicate the last one.
    struct Row {
        double sender = 0.0, receiver = 0.0;
        std::vector<std::pair<int, double>> next;  // sparse transition
    };
    std::vector<std::vector<Row>> rows(S);           // [s][real action]
    std::vector<double> split(S, 1.0);               // prior mass on theta 0
    std::vector<std::vector<Row>> theta1_rows(S);    // vertex states only

    // s0: keep gives receiver 1 and leads to the sink; explore pays the
    // sender and scatters uniformly over the edge states.
    rows[layout.s0].push_back({0.0, 1.0, {{layout.s3, 1.0}}});
    {
        Row explore{1.0, 0.0, {}};
        for (int e = 0; e < E; ++e) explore.next.push_back({layout.edge_state(e), 1.0 / E});
        rows[layout.s0].push_back(std::move(explore));
    }
    rows[layout.s1].push_back({0.0, 0.0, {{layout.s2, 1.0}}});
    {
        Row scatter{0.0, 0.0, {}};
        for (int v = 0; v < V; ++v) scatter.next.push_back({layout.vertex_state(v), 1.0 / V});
        rows[layout.s2].push_back(std::move(scatter));
    }
    rows[layout.s3].push_back({0.0, 0.0, {{layout.s3, 1.0}}});
    for (int e = 0; e < E; ++e) {
        const auto& [u, v] = g.edges[e];
        rows[layout.edge_state(e)].push_back({0.0, 0.0, {{layout.vertex_state(u), 1.0}}});
        rows[layout.edge_state(e)].push_back({0.0, 0.0, {{layout.vertex_state(v), 1.0}}});
    }
    for (int v = 0; v < V; ++v) {
        const int sv = layout.vertex_state(v);
        split[sv] = 0.5;
        // theta 0 slice: match pays 1 on a0, hedge pays 1/2 on a2.
        rows[sv].push_back({0.0, 1.0, {{layout.s3, 1.0}}});
        rows[sv].push_back({0.0, 0.0, {{layout.s3, 1.0}}});
        rows[sv].push_back({0.5, 0.5, {{layout.s3, 1.0}}});
        // theta 1 slice: the match moves to a1.
        theta1_rows[sv].push_back({0.0, 0.0, {{layout.s3, 1.0}}});
        theta1_rows[sv].push_back({0.0, 1.0, {{layout.s3, 1.0}}});
        theta1_rows[sv].push_back({0.5, 0.5, {{layout.s3, 1.0}}});
    }

    for (int h = 0; h < H; ++h) {
        for (int s = 0; s < S; ++s) {
            inst.prior[inst.prior_index(h, s, 0)] = split[s];
            inst.prior[inst.prior_index(h, s, 1)] = 1.0 - split[s];
            const int real = static_cast<int>(rows[s].size());
            for (int a = 0; a < A; ++a) {
                const int src = std::min(a, real - 1);  // pad with the last real action
                for (int t = 0; t < T; ++t) {
                    const Row& row = (t == 1 && !theta1_rows[s].empty())
                                         ? theta1_rows[s][src]
                                         : rows[s][src];
                    inst.sender_reward[inst.reward_index(h, s, a, t)] = row.sender;
                    inst.receiver_reward[inst.reward_index(h, s, a, t)] = row.receiver;
                    for (const auto& [s2, p] : row.next)
                        inst.transition[inst.transition_index(h, s, a, t, s2)] = p;
                }
            }
        }
    }
    return inst;
}

MarkovScheme MarkovScheme::uniform(int horizon, int num_states, int num_actions,
                                   int num_observations) {
    MarkovScheme m;
    m.horizon = horizon;
    m.num_states = num_states;
    m.num_actions = num_actions;
    m.num_observations = num_observations;
    m.recommend.assign(static_cast<std::size_t>(horizon) * num_states * num_observations *
                           num_actions,
                       1.0 / num_actions);
    return m;
}

MarkovScheme vc_completeness_scheme(const Graph& g, const std::vector<int>& cover) {
    const std::vector<std::string> violations = validate_graph(g);
    if (!violations.empty())
        throw std::invalid_argument("vc_completeness_scheme: " + violations.front());
    std::vector<char> in_cover(g.num_vertices, 0);
    for (int v : cover) {
        if (v < 0 || v >= g.num_vertices)
            throw std::invalid_argument("vc_completeness_scheme: cover vertex out of range");
        in_cover[v] = 1;
    }
    for (const auto& [u, v] : g.edges)
        if (!in_cover[u] && !in_cover[v])
            throw std::invalid_argument("vc_completeness_scheme: edge (" + std::to_string(u) +
                                        ", " + std::to_string(v) + ") is not covered");

    const VcLayout layout = vc_layout(g);
    MarkovScheme scheme;
    scheme.horizon = 3;
    scheme.num_states = layout.num_states;
    scheme.num_actions = 3;
    scheme.num_observations = 2;
    scheme.recommend.assign(static_cast<std::size_t>(scheme.horizon) * scheme.num_states *
                                scheme.num_observations * scheme.num_actions,
                            0.0);

    auto set_action = [&](int s, int theta, int a) {
        for (int h = 0; h < scheme.horizon; ++h)
            scheme.recommend[scheme.index(h, s, theta, a)] = 1.0;
    };
    auto set_both = [&](int s, int a) {
        set_action(s, 0, a);
        set_action(s, 1, a);
    };

    set_both(layout.s0, 1);  // explore toward the edge states
    set_both(layout.s1, 0);
    set_both(layout.s2, 0);
    set_both(layout.s3, 0);
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        const auto& [u, v] = g.edges[e];
        // steer to the lowest-index covering endpoint
        if (in_cover[u])
            set_both(layout.edge_state(static_cast<int>(e)), 0);
        else
            set_both(layout.edge_state(static_cast<int>(e)), 1);
    }
    for (int v = 0; v < g.num_vertices; ++v) {
        const int sv = layout.vertex_state(v);
        if (in_cover[v]) {  // reveal: match the recommendation to the observation
            set_action(sv, 0, 0);
            set_action(sv, 1, 1);
        } else {
            set_both(sv, 2);  // hedge
        }
    }
    return scheme;
}

MarkovEvaluation evaluate_markov_scheme(const PersuasionMdp& inst,
                                        const MarkovScheme& scheme, double epsilon) {
    if (scheme.horizon != inst.horizon || scheme.num_states != inst.num_states ||
        scheme.num_actions != inst.num_actions ||
        scheme.num_observations != inst.num_observations)
        throw std::invalid_argument("evaluate_markov_scheme: dimension mismatch");

    const int H = inst.horizon, S = inst.num_states, A = inst.num_actions,
              T = inst.num_observations;
    const DeviationValues deviation = deviation_values(inst);

    // Persuasiveness rows are only checked at (h, s) pairs some structurally
    // possible path can visit; no history ends elsewhere.
    std::vector<std::vector<char>> reachable(H, std::vector<char>(S, 0));
    for (int s = 0; s < S; ++s) reachable[0][s] = inst.beta(s) > 0.0 ? 1 : 0;
    for (int h = 1; h < H; ++h)
        for (int s = 0; s < S; ++s) {
            if (!reachable[h - 1][s]) continue;
            for (int a = 0; a < A; ++a)
                for (int t = 0; t < T; ++t) {
                    if (inst.mu(h - 1, s, t) == 0.0) continue;
                    for (int s2 = 0; s2 < S; ++s2)
                        if (inst.p(h - 1, s, a, t, s2) > 0.0) reachable[h][s2] = 1;
                }
        }

    MarkovEvaluation eval;
    eval.receiver_value.assign(static_cast<std::size_t>(H) * S, 0.0);
    std::vector<double> sender_next(S, 0.0), receiver_next(S, 0.0);
    std::vector<double> sender_cur(S, 0.0), receiver_cur(S, 0.0);

    for (int h = H; h >= 1; --h) {
        for (int s = 0; s < S; ++s) {
            double sender_total = 0.0, receiver_total = 0.0;
            for (int a = 0; a < A; ++a) {
                double va = 0.0;
                for (int t = 0; t < T; ++t) {
                    const double w = inst.mu(h - 1, s, t) * scheme.rec(h - 1, s, t, a);
                    if (w == 0.0) continue;
                    double rec_cont = 0.0, send_cont = 0.0;
                    for (int s2 = 0; s2 < S; ++s2) {
                        const double p = inst.p(h - 1, s, a, t, s2);
                        if (p == 0.0) continue;
                        rec_cont += p * receiver_next[s2];
                        send_cont += p * sender_next[s2];
                    }
                    va += w * (inst.receiver_r(h - 1, s, a, t) + rec_cont);
                    sender_total += w * (inst.sender_r(h - 1, s, a, t) + send_cont);
                }
                receiver_total += va;
                // persuasiveness rows for the recommended action a
                for (int alt = 0; reachable[h - 1][s] && alt < A; ++alt) {
                    double rhs = 0.0;
                    for (int t = 0; t < T; ++t) {
                        const double w = inst.mu(h - 1, s, t) * scheme.rec(h - 1, s, t, a);
                        if (w == 0.0) continue;
                        double dev = inst.receiver_r(h - 1, s, alt, t);
                        for (int s2 = 0; s2 < S; ++s2)
                            dev += inst.p(h - 1, s, alt, t, s2) * deviation.at(h + 1, s2);
                        rhs += w * dev;
                    }
                    if (va < rhs - epsilon - kCheckTol) {
                        Violation viol;
                        viol.kind = ViolationKind::Definition1;
                        viol.step = h;
                        viol.state = s;
                        viol.action = a;
                        viol.alt_action = alt;
                        viol.left = va;
                        viol.right = rhs - epsilon;
                        viol.slack = rhs - epsilon - va;
                        eval.report.violations.push_back(std::move(viol));
                    }
                }
            }
            sender_cur[s] = sender_total;
            receiver_cur[s] = receiver_total;
            eval.receiver_value[static_cast<std::size_t>(h - 1) * S + s] = receiver_total;
        }
        sender_next = sender_cur;
        receiver_next = receiver_cur;
    }

    eval.sender_value = 0.0;
    for (int s = 0; s < S; ++s) eval.sender_value += inst.beta(s) * sender_cur[s];
    return eval;
}

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

namespace {

void fill_simplex_row(SeededRng& rng, double* row, int n) {
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        row[i] = -std::log(1.0 - rng.uniform());
        sum += row[i];
    }
    if (sum <= 0.0) {
        for (int i = 0; i < n; ++i) row[i] = 1.0 / n;
        return;
    }
    for (int i = 0; i < n; ++i) row[i] /= sum;
}

}  // namespace

PersuasionMdp random_instance(std::uint64_t seed, int num_states, int num_actions,
                              int num_observations, int horizon) {
    if (num_states < 1 || num_actions < 1 || num_observations < 1 || horizon < 1)
        throw std::invalid_argument("random_instance: dimensions must be positive");
    PersuasionMdp inst =
        PersuasionMdp::zeros(num_states, num_actions, num_observations, horizon);
    SeededRng rng(splitmix64(seed));

    for (double& r : inst.sender_reward) r = rng.uniform();
    for (double& r : inst.receiver_reward) r = rng.uniform();
    for (int h = 0; h < horizon; ++h)
        for (int s = 0; s < num_states; ++s)
            for (int a = 0; a < num_actions; ++a)
                for (int t = 0; t < num_observations; ++t)
                    fill_simplex_row(
                        rng, &inst.transition[inst.transition_index(h, s, a, t, 0)],
                        num_states);
    for (int h = 0; h < horizon; ++h)
        for (int s = 0; s < num_states; ++s)
            fill_simplex_row(rng, &inst.prior[inst.prior_index(h, s, 0)],
                             num_observations);
    fill_simplex_row(rng, inst.initial.data(), num_states);
    return inst;
}

PersuasionMdp separation_instance() {
    // Two start states feed one signal state; the hard start has a rich
    // outside option, so the sender owes it a more revealing continuation
    // than the easy start. Markov schemes must share one continuation row.
    const int sE = 0, sH = 1, sB = 2, sK = 3;
    PersuasionMdp inst = PersuasionMdp::zeros(4, 2, 2, 2);
    inst.labels.states = {"easy", "hard", "signal", "sink"};
    inst.labels.actions = {"go", "out"};
    inst.labels.observations = {"th0", "th1"};
    inst.initial = {0.5, 0.5, 0.0, 0.0};

    auto point_prior = [&](int h, int s, double on_zero) {
        inst.prior[inst.prior_index(h, s, 0)] = on_zero;
        inst.prior[inst.prior_index(h, s, 1)] = 1.0 - on_zero;
    };
    auto go_to = [&](int h, int s, int a, int dest) {
        for (int t = 0; t < 2; ++t)
            inst.transition[inst.transition_index(h, s, a, t, dest)] = 1.0;
    };

    for (int h = 0; h < 2; ++h) {
        point_prior(h, sE, 1.0);
        point_prior(h, sH, 1.0);
        point_prior(h, sB, 0.5);
        point_prior(h, sK, 1.0);
        for (int a = 0; a < 2; ++a) {
            go_to(h, sK, a, sK);
            go_to(h, sB, a, sK);
        }
    }
    // step 1: action 0 enters the signal state, action 1 takes the outside option
    go_to(0, sE, 0, sB);
    go_to(0, sE, 1, sK);
    go_to(0, sH, 0, sB);
    go_to(0, sH, 1, sK);
    for (int t = 0; t < 2; ++t) {
        inst.receiver_reward[inst.reward_index(0, sE, 1, t)] = 0.2;
        inst.receiver_reward[inst.reward_index(0, sH, 1, t)] = 0.72;
    }
    // step 2: at unreachable states both actions stay identical
    go_to(1, sE, 0, sK);
    go_to(1, sE, 1, sK);
    go_to(1, sH, 0, sK);
    go_to(1, sH, 1, sK);
    // step 2 at the signal state: matching the observation pays the receiver,
    // action 0 pays the sender
    inst.receiver_reward[inst.reward_index(1, sB, 0, 0)] = 0.8;
    inst.receiver_reward[inst.reward_index(1, sB, 1, 1)] = 0.8;
    for (int t = 0; t < 2; ++t) inst.sender_reward[inst.reward_index(1, sB, 0, t)] = 1.0;
    return inst;
}

// ---------------------------------------------------------------------------
// Separation check
// ---------------------------------------------------------------------------

namespace detail {

/// Recommendation rows that can influence the value or the persuasiveness
/// report: the state must be forward-reachable at that step, the observation
/// must have positive prior, and at least two actions must differ somewhere
/// in rewards or transitions. All other rows stay uniform.
struct FreeRow {
    int h = 0;  // 1-based
    int s = 0;
    int theta = 0;
};

std::vector<FreeRow> free_rows(const PersuasionMdp& inst) {
    const int H = inst.horizon, S = inst.num_states, A = inst.num_actions,
              T = inst.num_observations;
    std::vector<std::vector<char>> reachable(H, std::vector<char>(S, 0));
    for (int s = 0; s < S; ++s) reachable[0][s] = inst.beta(s) > 0.0 ? 1 : 0;
    for (int h = 1; h < H; ++h)
        for (int s = 0; s < S; ++s) {
            if (!reachable[h - 1][s]) continue;
            for (int a = 0; a < A; ++a)
                for (int t = 0; t < T; ++t) {
                    if (inst.mu(h - 1, s, t) == 0.0) continue;
                    for (int s2 = 0; s2 < S; ++s2)
                        if (inst.p(h - 1, s, a, t, s2) > 0.0) reachable[h][s2] = 1;
                }
        }

    auto actions_distinct = [&](int h0, int s) {
        for (int a = 1; a < A; ++a)
            for (int t = 0; t < T; ++t) {
                if (inst.mu(h0, s, t) == 0.0) continue;
                if (inst.sender_r(h0, s, a, t) != inst.sender_r(h0, s, 0, t)) return true;
                if (inst.receiver_r(h0, s, a, t) != inst.receiver_r(h0, s, 0, t))
                    return true;
                for (int s2 = 0; s2 < S; ++s2)
                    if (inst.p(h0, s, a, t, s2) != inst.p(h0, s, 0, t, s2)) return true;
            }
        return false;
    };

    std::vector<FreeRow> rows;
    for (int h = 1; h <= H; ++h)
        for (int s = 0; s < S; ++s) {
            if (!reachable[h - 1][s]) continue;
            if (!actions_distinct(h - 1, s)) continue;
            for (int t = 0; t < T; ++t)
                if (inst.mu(h - 1, s, t) > 0.0) rows.push_back({h, s, t});
        }
    return rows;
}

std::vector<std::vector<double>> grid_distributions(int num_actions, double step) {
    const int ticks = static_cast<int>(std::round(1.0 / step));
    if (ticks < 1 || std::abs(ticks * step - 1.0) > 1e-9)
        throw std::invalid_argument("markov grid step must divide 1");
    std::vector<std::vector<double>> out;
    std::vector<int> counts(num_actions, 0);
    // compositions of `ticks` into num_actions parts
    struct Rec {
        int num_actions;
        std::vector<int>& counts;
        std::vector<std::vector<double>>& out;
        double step;
        void go(int a, int left) {
            if (a == num_actions - 1) {
                counts[a] = left;
                std::vector<double> row(num_actions);
                for (int i = 0; i < num_actions; ++i) row[i] = counts[i] * step;
                out.push_back(std::move(row));
                return;
            }
            for (int c = 0; c <= left; ++c) {
                counts[a] = c;
                go(a + 1, left - c);
            }
        }
    } rec{num_actions, counts, out, step};
    rec.go(0, ticks);
    return out;
}

}  // namespace detail

SeparationResult separation_check(const PersuasionMdp& inst, double markov_grid_step,
                                  double epsilon_fine, long max_candidates) {
    const std::vector<detail::FreeRow> rows = detail::free_rows(inst);
    const std::vector<std::vector<double>> options =
        detail::grid_distributions(inst.num_actions, markov_grid_step);

    double total = 1.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        total *= static_cast<double>(options.size());
        if (total > static_cast<double>(max_candidates))
            throw std::runtime_error(
                "separation_check refused: grid enumeration would exceed " +
                std::to_string(max_candidates) + " candidates");
    }

    MarkovScheme scheme = MarkovScheme::uniform(inst.horizon, inst.num_states,
                                                inst.num_actions, inst.num_observations);

    SeparationResult result;
    result.slack_bound = epsilon_fine;
    double best = -1.0;
    std::vector<std::size_t> odometer(rows.size(), 0);
    long candidates = 0;
    bool done = rows.empty();
    while (true) {
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const detail::FreeRow& r = rows[i];
            const std::vector<double>& opt = options[odometer[i]];
            for (int a = 0; a < inst.num_actions; ++a)
                scheme.recommend[scheme.index(r.h - 1, r.s, r.theta, a)] = opt[a];
        }
        ++candidates;
        const MarkovEvaluation eval = evaluate_markov_scheme(inst, scheme, 0.0);
        if (eval.report.empty() && eval.sender_value > best) best = eval.sender_value;

        if (done) break;
        std::size_t pos = 0;
        while (pos < rows.size()) {
            if (++odometer[pos] < options.size()) break;
            odometer[pos] = 0;
            ++pos;
        }
        if (pos == rows.size()) break;
    }
    result.candidates = candidates;
    result.markov_value = best;

    const SolveResult solved = dp_solve(inst, epsilon_fine);
    result.dp_value = solved.sender_value;
    result.gap = result.dp_value - result.markov_value;
    return result;
}

// ---------------------------------------------------------------------------
// Markov scheme file I/O
// ---------------------------------------------------------------------------

namespace {
using nlohmann::json;
}

std::string markov_scheme_to_text(const MarkovScheme& scheme) {
    json doc;
    doc["horizon"] = scheme.horizon;
    doc["num_states"] = scheme.num_states;
    doc["num_actions"] = scheme.num_actions;
    doc["num_observations"] = scheme.num_observations;
    json rec = json::array();
    for (int h = 0; h < scheme.horizon; ++h) {
        json by_state = json::array();
        for (int s = 0; s < scheme.num_states; ++s) {
            json by_theta = json::array();
            for (int t = 0; t < scheme.num_observations; ++t) {
                json actions = json::array();
                for (int a = 0; a < scheme.num_actions; ++a)
                    actions.push_back(scheme.rec(h, s, t, a));
                by_theta.push_back(actions);
            }
            by_state.push_back(by_theta);
        }
        rec.push_back(by_state);
    }
    doc["recommend"] = rec;
    return doc.dump(1) + "\n";
}

MarkovScheme markov_scheme_from_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(std::string("markov scheme file: ") + e.what());
    }
    MarkovScheme scheme;
    for (const char* field : {"horizon", "num_states", "num_actions", "num_observations",
                              "recommend"})
        if (!doc.contains(field))
            throw std::runtime_error(std::string("markov scheme file: missing field \"") +
                                     field + "\"");
    scheme.horizon = doc["horizon"].get<int>();
    scheme.num_states = doc["num_states"].get<int>();
    scheme.num_actions = doc["num_actions"].get<int>();
    scheme.num_observations = doc["num_observations"].get<int>();
    const json& rec = doc["recommend"];
    scheme.recommend.assign(static_cast<std::size_t>(scheme.horizon) * scheme.num_states *
                                scheme.num_observations * scheme.num_actions,
                            0.0);
    if (static_cast<int>(rec.size()) != scheme.horizon)
        throw std::runtime_error("markov scheme file: recommend shape");
    for (int h = 0; h < scheme.horizon; ++h) {
        if (static_cast<int>(rec[h].size()) != scheme.num_states)
            throw std::runtime_error("markov scheme file: recommend shape");
        for (int s = 0; s < scheme.num_states; ++s) {
            if (static_cast<int>(rec[h][s].size()) != scheme.num_observations)
                throw std::runtime_error("markov scheme file: recommend shape");
            for (int t = 0; t < scheme.num_observations; ++t) {
                if (static_cast<int>(rec[h][s][t].size()) != scheme.num_actions)
                    throw std::runtime_error("markov scheme file: recommend shape");
                double sum = 0.0;
                for (int a = 0; a < scheme.num_actions; ++a) {
                    const double v = rec[h][s][t][a].get<double>();
                    scheme.recommend[scheme.index(h, s, t, a)] = v;
                    sum += v;
                }
                if (std::abs(sum - 1.0) > kCheckTol)
                    throw std::runtime_error(
                        "markov scheme file: recommendation row does not sum to one");
            }
        }
    }
    return scheme;
}

MarkovScheme read_markov_scheme(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open markov scheme file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return markov_scheme_from_text(buf.str());
}

void write_markov_scheme(const MarkovScheme& scheme, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write markov scheme file: " + path);
    out << markov_scheme_to_text(scheme);
}

}  // namespace persuasion
