#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "persuasion/grid.hpp"
#include "persuasion/lp.hpp"

namespace persuasion::testing {

namespace {

/// Solve square A x = b by Gaussian elimination with partial pivoting.
std::optional<std::vector<double>> solve_square(std::vector<std::vector<double>> a,
                                                std::vector<double> b) {
    const int n = static_cast<int>(b.size());
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        if (std::abs(a[pivot][col]) < 1e-11) return std::nullopt;  // singular basis
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = a[r][col] / a[col][col];
            if (f == 0.0) continue;
            for (int c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
    return x;
}

}  // namespace

std::optional<double> best_basic_feasible_value(const LinearProgram& lp) {
    // Standard form with surplus variables on the >= rows.
    const int n_ge = static_cast<int>(lp.ge_rows.size());
    const int m = static_cast<int>(lp.eq_rows.size()) + n_ge;
    const int n = lp.num_vars + n_ge;
    std::vector<std::vector<double>> rows(m, std::vector<double>(n, 0.0));
    std::vector<double> rhs(m, 0.0);
    std::vector<double> cost(n, 0.0);
    for (int j = 0; j < lp.num_vars; ++j) cost[j] = lp.objective[j];
    int r = 0;
    for (std::size_t i = 0; i < lp.eq_rows.size(); ++i, ++r) {
        for (int j = 0; j < lp.num_vars; ++j) rows[r][j] = lp.eq_rows[i][j];
        rhs[r] = lp.eq_rhs[i];
    }
    for (int i = 0; i < n_ge; ++i, ++r) {
        for (int j = 0; j < lp.num_vars; ++j) rows[r][j] = lp.ge_rows[i][j];
        rows[r][lp.num_vars + i] = -1.0;
        rhs[r] = lp.ge_rhs[i];
    }

    std::optional<double> best;
    std::vector<int> pick(m, 0);
    // enumerate all m-subsets of columns
    for (int i = 0; i < m; ++i) pick[i] = i;
    if (m > n) return std::nullopt;
    while (true) {
        std::vector<std::vector<double>> basis(m, std::vector<double>(m));
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) basis[i][j] = rows[i][pick[j]];
        if (auto x_basis = solve_square(basis, rhs)) {
            bool feasible = true;
            for (double v : *x_basis)
                if (v < -1e-8) feasible = false;
            if (feasible) {
                double value = 0.0;
                for (int j = 0; j < m; ++j) value += cost[pick[j]] * (*x_basis)[j];
                if (!best || value > *best) best = value;
            }
        }
        // next combination
        int i = m - 1;
        while (i >= 0 && pick[i] == n - m + i) --i;
        if (i < 0) break;
        ++pick[i];
        for (int j = i + 1; j < m; ++j) pick[j] = pick[j - 1] + 1;
    }
    return best;
}

namespace {

/// Recommendation-only LP for a fixed deterministic promise function.
std::optional<double> kappa_lp_value(int h, int s, double promise_value,
                                     const std::vector<int>& q, const ValueTable& next,
                                     const PersuasionMdp& inst,
                                     const DeviationValues& deviation) {
    const int A = inst.num_actions, T = inst.num_observations, S = inst.num_states;
    const int h0 = h - 1;
    const double delta = next.delta;
    LinearProgram lp;
    lp.num_vars = A * T;
    lp.objective.assign(lp.num_vars, 0.0);
    auto xi = [&](int a, int t) { return a * T + t; };

    for (int a = 0; a < A; ++a)
        for (int t = 0; t < T; ++t) {
            double cont = 0.0;
            for (int s2 = 0; s2 < S; ++s2)
                cont += inst.p(h0, s, a, t, s2) *
                        next.value(s2, q[static_cast<std::size_t>(a) * S + s2]);
            lp.objective[xi(a, t)] = inst.mu(h0, s, t) * (inst.sender_r(h0, s, a, t) + cont);
        }

    {
        std::vector<double> row(lp.num_vars, 0.0);
        for (int a = 0; a < A; ++a)
            for (int t = 0; t < T; ++t) {
                double cont = 0.0;
                for (int s2 = 0; s2 < S; ++s2)
                    cont += inst.p(h0, s, a, t, s2) *
                            (q[static_cast<std::size_t>(a) * S + s2] * delta);
                row[xi(a, t)] = inst.mu(h0, s, t) * (inst.receiver_r(h0, s, a, t) + cont);
            }
        lp.add_ge(std::move(row), promise_value);
    }
    for (int a = 0; a < A; ++a)
        for (int alt = 0; alt < A; ++alt) {
            std::vector<double> row(lp.num_vars, 0.0);
            for (int t = 0; t < T; ++t) {
                double cont = 0.0;
                for (int s2 = 0; s2 < S; ++s2)
                    cont += inst.p(h0, s, a, t, s2) *
                            (q[static_cast<std::size_t>(a) * S + s2] * delta);
                double dev = inst.receiver_r(h0, s, alt, t);
                for (int s2 = 0; s2 < S; ++s2)
                    dev += inst.p(h0, s, alt, t, s2) * deviation.at(h + 1, s2);
                row[xi(a, t)] = inst.mu(h0, s, t) *
                                (inst.receiver_r(h0, s, a, t) + cont - dev);
            }
            lp.add_ge(std::move(row), 0.0);
        }
    for (int t = 0; t < T; ++t) {
        std::vector<double> row(lp.num_vars, 0.0);
        for (int a = 0; a < A; ++a) row[xi(a, t)] = 1.0;
        lp.add_eq(std::move(row), 1.0);
    }

    const LpOutcome out = lp_solve(lp);
    if (out.status != LpStatus::Optimal) return std::nullopt;
    return out.value;
}

}  // namespace

std::optional<double> brute_force_cell_optimum(int h, int s, double promise_value,
                                               const ValueTable& next,
                                               const PersuasionMdp& inst,
                                               const DeviationValues& deviation,
                                               long max_candidates) {
    const int A = inst.num_actions, S = inst.num_states, T = inst.num_observations;
    const int h0 = h - 1;

    // slots: (a, s') pairs that are structurally reachable; others stay at 0
    struct Slot {
        int a, s2;
        std::vector<int> options;
    };
    std::vector<Slot> slots;
    long combos = 1;
    for (int a = 0; a < A; ++a)
        for (int s2 = 0; s2 < S; ++s2) {
            bool reachable = false;
            for (int t = 0; t < T; ++t)
                if (inst.mu(h0, s, t) > 0.0 && inst.p(h0, s, a, t, s2) > 0.0)
                    reachable = true;
            if (!reachable) continue;
            Slot slot{a, s2, next.realizable_set(s2)};
            if (slot.options.empty()) return std::nullopt;  // nothing deliverable
            combos *= static_cast<long>(slot.options.size());
            if (combos > max_candidates)
                throw std::runtime_error("brute_force_cell_optimum: candidate budget exceeded");
            slots.push_back(std::move(slot));
        }

    std::optional<double> best;
    std::vector<std::size_t> odometer(slots.size(), 0);
    std::vector<int> q(static_cast<std::size_t>(A) * S, 0);
    while (true) {
        for (std::size_t i = 0; i < slots.size(); ++i)
            q[static_cast<std::size_t>(slots[i].a) * S + slots[i].s2] =
                slots[i].options[odometer[i]];
        if (auto value = kappa_lp_value(h, s, promise_value, q, next, inst, deviation))
            if (!best || *value > *best) best = *value;
        std::size_t pos = 0;
        while (pos < slots.size()) {
            if (++odometer[pos] < slots[pos].options.size()) break;
            odometer[pos] = 0;
            ++pos;
        }
        if (pos == slots.size() || slots.empty()) break;
    }
    return best;
}

double one_shot_persuasion_value(const PersuasionMdp& inst) {
    if (inst.horizon != 1)
        throw std::invalid_argument("one_shot_persuasion_value: horizon must be 1");
    const int A = inst.num_actions, T = inst.num_observations;
    double total = 0.0;
    for (int s = 0; s < inst.num_states; ++s) {
        if (inst.beta(s) == 0.0) continue;
        LinearProgram lp;
        lp.num_vars = A * T;
        lp.objective.assign(lp.num_vars, 0.0);
        auto xi = [&](int a, int t) { return a * T + t; };
        for (int a = 0; a < A; ++a)
            for (int t = 0; t < T; ++t)
                lp.objective[xi(a, t)] = inst.mu(0, s, t) * inst.sender_r(0, s, a, t);
        for (int a = 0; a < A; ++a)
            for (int alt = 0; alt < A; ++alt) {
                std::vector<double> row(lp.num_vars, 0.0);
                for (int t = 0; t < T; ++t)
                    row[xi(a, t)] = inst.mu(0, s, t) * (inst.receiver_r(0, s, a, t) -
                                                        inst.receiver_r(0, s, alt, t));
                lp.add_ge(std::move(row), 0.0);
            }
        for (int t = 0; t < T; ++t) {
            std::vector<double> row(lp.num_vars, 0.0);
            for (int a = 0; a < A; ++a) row[xi(a, t)] = 1.0;
            lp.add_eq(std::move(row), 1.0);
        }
        const LpOutcome out = lp_solve(lp);
        if (out.status != LpStatus::Optimal)
            throw std::runtime_error("one_shot_persuasion_value: lp not optimal");
        total += inst.beta(s) * out.value;
    }
    return total;
}

double brute_force_receiver_optimum(const PersuasionMdp& inst, int start_state) {
    const int H = inst.horizon, S = inst.num_states, A = inst.num_actions,
              T = inst.num_observations;
    const long policies = static_cast<long>(std::pow(A, H * S));
    if (policies > 200000)
        throw std::runtime_error("brute_force_receiver_optimum: too many policies");

    double best = 0.0;
    std::vector<int> choice(static_cast<std::size_t>(H) * S, 0);
    for (long code = 0; code < policies; ++code) {
        long rest = code;
        for (auto& c : choice) {
            c = static_cast<int>(rest % A);
            rest /= A;
        }
        // value of this deterministic Markov policy against the prior
        std::vector<double> next(S, 0.0), cur(S, 0.0);
        for (int h = H; h >= 1; --h) {
            for (int s = 0; s < S; ++s) {
                const int a = choice[static_cast<std::size_t>(h - 1) * S + s];
                double v = 0.0;
                for (int t = 0; t < T; ++t) {
                    const double m = inst.mu(h - 1, s, t);
                    if (m == 0.0) continue;
                    double cont = 0.0;
                    for (int s2 = 0; s2 < S; ++s2)
                        cont += inst.p(h - 1, s, a, t, s2) * next[s2];
                    v += m * (inst.receiver_r(h - 1, s, a, t) + cont);
                }
                cur[s] = v;
            }
            next = cur;
        }
        best = std::max(best, cur[start_state]);
    }
    return best;
}

PromiseScheme lift_markov_scheme(const PersuasionMdp& inst, const MarkovScheme& markov,
                                 double delta) {
    const int H = inst.horizon, S = inst.num_states, A = inst.num_actions,
              T = inst.num_observations;
    const GridSpec grid = GridSpec::for_horizon(H, delta);

    // receiver continuation values under the Markov scheme
    std::vector<std::vector<double>> value(H + 1, std::vector<double>(S, 0.0));
    for (int h = H; h >= 1; --h)
        for (int s = 0; s < S; ++s) {
            double v = 0.0;
            for (int a = 0; a < A; ++a)
                for (int t = 0; t < T; ++t) {
                    const double w = inst.mu(h - 1, s, t) * markov.rec(h - 1, s, t, a);
                    if (w == 0.0) continue;
                    double cont = 0.0;
                    for (int s2 = 0; s2 < S; ++s2)
                        cont += inst.p(h - 1, s, a, t, s2) * value[h][s2];
                    v += w * (inst.receiver_r(h - 1, s, a, t) + cont);
                }
            value[h - 1][s] = v;
        }

    std::vector<std::vector<int>> promise_index(H + 1, std::vector<int>(S, 0));
    for (int h = 1; h <= H; ++h)
        for (int s = 0; s < S; ++s) {
            const int k = ceil_to_grid(value[h - 1][s], grid);
            if (std::abs(grid.value(k) - value[h - 1][s]) > 1e-9)
                throw std::invalid_argument(
                    "lift_markov_scheme: continuation value off the grid");
            promise_index[h - 1][s] = k;
        }

    PromiseScheme scheme;
    scheme.delta = delta;
    scheme.horizon = H;
    scheme.num_states = S;
    scheme.num_actions = A;
    scheme.num_observations = T;
    scheme.cells.assign(H, std::vector<std::vector<PromiseCell>>(S));
    for (int h = 1; h <= H; ++h)
        for (int s = 0; s < S; ++s) {
            PromiseCell cell;
            cell.recommend.resize(static_cast<std::size_t>(T) * A);
            for (int t = 0; t < T; ++t)
                for (int a = 0; a < A; ++a)
                    cell.recommend[static_cast<std::size_t>(t) * A + a] =
                        markov.rec(h - 1, s, t, a);
            cell.next_promise.assign(static_cast<std::size_t>(A) * S, 0);
            if (h < H)
                for (int a = 0; a < A; ++a)
                    for (int s2 = 0; s2 < S; ++s2)
                        cell.next_promise[static_cast<std::size_t>(a) * S + s2] =
                            promise_index[h][s2];
            auto& row = scheme.cells[h - 1][s];
            cell.promise = 0;
            row.push_back(cell);
            if (promise_index[h - 1][s] != 0) {
                cell.promise = promise_index[h - 1][s];
                row.push_back(cell);
            }
        }
    return scheme;
}

Graph k4() { return complete_graph(4); }

std::vector<int> minimum_vertex_cover(const Graph& g) {
    const int n = g.num_vertices;
    std::vector<int> best;
    for (int mask = 0; mask < (1 << n); ++mask) {
        bool covers = true;
        for (const auto& [u, v] : g.edges)
            if (!((mask >> u) & 1) && !((mask >> v) & 1)) {
                covers = false;
                break;
            }
        if (!covers) continue;
        std::vector<int> cover;
        for (int v = 0; v < n; ++v)
            if ((mask >> v) & 1) cover.push_back(v);
        if (best.empty() || cover.size() < best.size()) best = cover;
    }
    return best;
}

PersuasionMdp truncate_to_one_step(const PersuasionMdp& inst) {
    PersuasionMdp out = PersuasionMdp::zeros(inst.num_states, inst.num_actions,
                                             inst.num_observations, 1);
    out.labels = inst.labels;
    out.initial = inst.initial;
    for (int s = 0; s < inst.num_states; ++s) {
        for (int t = 0; t < inst.num_observations; ++t)
            out.prior[out.prior_index(0, s, t)] = inst.mu(0, s, t);
        for (int a = 0; a < inst.num_actions; ++a)
            for (int t = 0; t < inst.num_observations; ++t) {
                out.sender_reward[out.reward_index(0, s, a, t)] = inst.sender_r(0, s, a, t);
                out.receiver_reward[out.reward_index(0, s, a, t)] =
                    inst.receiver_r(0, s, a, t);
                for (int s2 = 0; s2 < inst.num_states; ++s2)
                    out.transition[out.transition_index(0, s, a, t, s2)] =
                        inst.p(0, s, a, t, s2);
            }
    }
    return out;
}

PromiseScheme constant_action_scheme(const PersuasionMdp& inst, int action, double delta) {
    PromiseScheme scheme;
    scheme.delta = delta;
    scheme.horizon = inst.horizon;
    scheme.num_states = inst.num_states;
    scheme.num_actions = inst.num_actions;
    scheme.num_observations = inst.num_observations;
    scheme.cells.assign(inst.horizon, std::vector<std::vector<PromiseCell>>(inst.num_states));
    for (int h = 1; h <= inst.horizon; ++h)
        for (int s = 0; s < inst.num_states; ++s) {
            PromiseCell cell;
            cell.promise = 0;
            cell.recommend.assign(
                static_cast<std::size_t>(inst.num_observations) * inst.num_actions, 0.0);
            for (int t = 0; t < inst.num_observations; ++t)
                cell.recommend[static_cast<std::size_t>(t) * inst.num_actions + action] = 1.0;
            cell.next_promise.assign(
                static_cast<std::size_t>(inst.num_actions) * inst.num_states, 0);
            scheme.cells[h - 1][s].push_back(std::move(cell));
        }
    return scheme;
}

}  // namespace persuasion::testing
