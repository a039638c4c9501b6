#include "persuasion/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace persuasion {

namespace {
constexpr double kReachTol = 1e-12;   // marginal threshold for the q~ fallback
constexpr double kRepairTol = 1e-11;  // obedience deficit worth repairing
}  // namespace

ValueTable ValueTable::all_unrealizable(int num_states, const GridSpec& grid) {
    ValueTable t;
    t.delta = grid.delta;
    t.num_states = num_states;
    t.num_points = grid.num_points;
    t.values.assign(static_cast<std::size_t>(num_states) * grid.num_points, 0.0);
    t.mask.assign(t.values.size(), 0);
    return t;
}

std::vector<int> ValueTable::realizable_set(int s) const {
    std::vector<int> out;
    for (int k = 0; k < num_points; ++k)
        if (realizable(s, k)) out.push_back(k);
    return out;
}

int OracleLp::z_block(int a, int s2) const {
    int offset = z_offset;
    for (int aa = 0; aa < num_actions; ++aa) {
        for (int ss = 0; ss < num_states; ++ss) {
            if (aa == a && ss == s2) return offset;
            offset += static_cast<int>(realizable[ss].size());
        }
    }
    throw std::out_of_range("oracle lp: z block index");
}

OracleLp build_oracle_lp(int h, int s, double promise_value, const ValueTable& next,
                         const PersuasionMdp& inst, const DeviationValues& deviation) {
    const int A = inst.num_actions, T = inst.num_observations, S = inst.num_states;
    const int h0 = h - 1;
    const double delta = next.delta;

    OracleLp built;
    built.num_actions = A;
    built.num_observations = T;
    built.num_states = S;
    built.realizable.resize(S);
    for (int s2 = 0; s2 < S; ++s2) built.realizable[s2] = next.realizable_set(s2);

    built.z_offset = A * T;
    int num_z = 0;
    for (int s2 = 0; s2 < S; ++s2) num_z += static_cast<int>(built.realizable[s2].size());
    num_z *= A;

    LinearProgram& lp = built.lp;
    lp.num_vars = A * T + num_z;
    lp.objective.assign(lp.num_vars, 0.0);

    for (int a = 0; a < A; ++a)
        for (int t = 0; t < T; ++t)
            lp.objective[built.xi_index(a, t)] = inst.mu(h0, s, t) * inst.sender_r(h0, s, a, t);
    {
        int zi = built.z_offset;
        for (int a = 0; a < A; ++a)
            for (int s2 = 0; s2 < S; ++s2)
                for (int k : built.realizable[s2]) lp.objective[zi++] = next.value(s2, k);
    }

    // Honesty row: expected receiver reward plus promised continuations.
    {
        std::vector<double> row(lp.num_vars, 0.0);
        for (int a = 0; a < A; ++a)
            for (int t = 0; t < T; ++t)
                row[built.xi_index(a, t)] = inst.mu(h0, s, t) * inst.receiver_r(h0, s, a, t);
        int zi = built.z_offset;
        for (int a = 0; a < A; ++a)
            for (int s2 = 0; s2 < S; ++s2)
                for (int k : built.realizable[s2]) row[zi++] = k * delta;
        lp.add_ge(std::move(row), promise_value);
    }

    // Obedience rows for every ordered action pair (a, a').
    for (int a = 0; a < A; ++a) {
        for (int alt = 0; alt < A; ++alt) {
            std::vector<double> row(lp.num_vars, 0.0);
            for (int t = 0; t < T; ++t) {
                double dev_term = inst.receiver_r(h0, s, alt, t);
                for (int s2 = 0; s2 < S; ++s2)
                    dev_term += inst.p(h0, s, alt, t, s2) * deviation.at(h + 1, s2);
                row[built.xi_index(a, t)] =
                    inst.mu(h0, s, t) * (inst.receiver_r(h0, s, a, t) - dev_term);
            }
            int zi = built.z_block(a, 0);
            for (int s2 = 0; s2 < S; ++s2)
                for (int k : built.realizable[s2]) row[zi++] = k * delta;
            lp.add_ge(std::move(row), 0.0);
        }
    }

    // Marginal consistency: z mass per (a, s') equals the reach probability.
    for (int a = 0; a < A; ++a) {
        for (int s2 = 0; s2 < S; ++s2) {
            std::vector<double> row(lp.num_vars, 0.0);
            int zi = built.z_block(a, s2);
            for (std::size_t i = 0; i < built.realizable[s2].size(); ++i) row[zi + i] = 1.0;
            for (int t = 0; t < T; ++t)
                row[built.xi_index(a, t)] = -inst.mu(h0, s, t) * inst.p(h0, s, a, t, s2);
            lp.add_eq(std::move(row), 0.0);
        }
    }

    // Per-observation simplex rows.
    for (int t = 0; t < T; ++t) {
        std::vector<double> row(lp.num_vars, 0.0);
        for (int a = 0; a < A; ++a) row[built.xi_index(a, t)] = 1.0;
        lp.add_eq(std::move(row), 1.0);
    }

    return built;
}

RelaxedSolution lp_solution_to_relaxed(const OracleLp& built, const std::vector<double>& x,
                                       int h, int s, const PersuasionMdp& inst) {
    const int A = built.num_actions, T = built.num_observations, S = built.num_states;
    const int h0 = h - 1;

    RelaxedSolution rel;
    rel.kappa.assign(static_cast<std::size_t>(T) * A, 0.0);
    for (int t = 0; t < T; ++t)
        for (int a = 0; a < A; ++a)
            rel.kappa[static_cast<std::size_t>(t) * A + a] =
                std::max(0.0, x[built.xi_index(a, t)]);

    rel.promise_dist.assign(static_cast<std::size_t>(A) * S, {});
    for (int a = 0; a < A; ++a) {
        for (int s2 = 0; s2 < S; ++s2) {
            double marginal = 0.0;
            for (int t = 0; t < T; ++t)
                marginal += inst.mu(h0, s, t) * x[built.xi_index(a, t)] *
                            inst.p(h0, s, a, t, s2);
            auto& dist = rel.promise_dist[static_cast<std::size_t>(a) * S + s2];
            if (marginal <= kReachTol) {
                dist.push_back({0, 1.0});  // point mass on promise 0
                continue;
            }
            const int zi = built.z_block(a, s2);
            double total = 0.0;
            for (std::size_t i = 0; i < built.realizable[s2].size(); ++i) {
                const double w = std::max(0.0, x[zi + static_cast<int>(i)]);
                if (w > 1e-14 * std::max(1.0, marginal)) {
                    dist.push_back({built.realizable[s2][i], w});
                    total += w;
                }
            }
            if (dist.empty() || total <= 0.0) {
                dist.assign(1, {0, 1.0});
                continue;
            }
            for (auto& [k, w] : dist) w /= total;
        }
    }
    return rel;
}

std::vector<int> derandomize(const RelaxedSolution& relaxed, const ValueTable& next,
                             double delta) {
    const GridSpec grid{delta, next.num_points};
    std::vector<int> q(relaxed.promise_dist.size(), 0);
    for (std::size_t i = 0; i < relaxed.promise_dist.size(); ++i) {
        double mean_index = 0.0;
        for (const auto& [k, w] : relaxed.promise_dist[i]) mean_index += k * w;
        // Integer index arithmetic: snap to an exact multiple before flooring.
        const double r = std::round(mean_index);
        int k = (std::abs(mean_index - r) <= 1e-12) ? static_cast<int>(r)
                                                    : static_cast<int>(std::floor(mean_index));
        if (k < 0) k = 0;
        if (k > grid.num_points - 1) k = grid.num_points - 1;
        q[i] = k;
    }
    return q;
}

double honesty_lhs(int h, int s, const std::vector<double>& kappa,
                   const std::vector<int>& promise, double delta,
                   const PersuasionMdp& inst) {
    const int A = inst.num_actions, T = inst.num_observations, S = inst.num_states;
    const int h0 = h - 1;
    double lhs = 0.0;
    for (int a = 0; a < A; ++a)
        for (int t = 0; t < T; ++t) {
            const double w = inst.mu(h0, s, t) * kappa[static_cast<std::size_t>(t) * A + a];
            if (w == 0.0) continue;
            double cont = 0.0;
            for (int s2 = 0; s2 < S; ++s2)
                cont += inst.p(h0, s, a, t, s2) *
                        (promise[static_cast<std::size_t>(a) * S + s2] * delta);
            lhs += w * (inst.receiver_r(h0, s, a, t) + cont);
        }
    return lhs;
}

double obedience_lhs(int h, int s, int a, const std::vector<double>& kappa,
                     const std::vector<int>& promise, double delta,
                     const PersuasionMdp& inst) {
    const int A = inst.num_actions, T = inst.num_observations, S = inst.num_states;
    const int h0 = h - 1;
    double lhs = 0.0;
    for (int t = 0; t < T; ++t) {
        const double w = inst.mu(h0, s, t) * kappa[static_cast<std::size_t>(t) * A + a];
        if (w == 0.0) continue;
        double cont = 0.0;
        for (int s2 = 0; s2 < S; ++s2)
            cont += inst.p(h0, s, a, t, s2) *
                    (promise[static_cast<std::size_t>(a) * S + s2] * delta);
        lhs += w * (inst.receiver_r(h0, s, a, t) + cont);
    }
    return lhs;
}

double obedience_rhs(int h, int s, int a, int alt, const std::vector<double>& kappa,
                     const PersuasionMdp& inst, const DeviationValues& deviation) {
    const int A = inst.num_actions, T = inst.num_observations, S = inst.num_states;
    const int h0 = h - 1;
    double rhs = 0.0;
    for (int t = 0; t < T; ++t) {
        const double w = inst.mu(h0, s, t) * kappa[static_cast<std::size_t>(t) * A + a];
        if (w == 0.0) continue;
        double dev = inst.receiver_r(h0, s, alt, t);
        for (int s2 = 0; s2 < S; ++s2)
            dev += inst.p(h0, s, alt, t, s2) * deviation.at(h + 1, s2);
        rhs += w * dev;
    }
    return rhs;
}

std::optional<double> oracle_objective(int h, int s, const std::vector<double>& kappa,
                                       const std::vector<int>& promise,
                                       const ValueTable& next, const PersuasionMdp& inst) {
    const int A = inst.num_actions, T = inst.num_observations, S = inst.num_states;
    const int h0 = h - 1;
    double total = 0.0;
    for (int a = 0; a < A; ++a) {
        for (int t = 0; t < T; ++t) {
            const double w = inst.mu(h0, s, t) * kappa[static_cast<std::size_t>(t) * A + a];
            if (w == 0.0) continue;
            total += w * inst.sender_r(h0, s, a, t);
            for (int s2 = 0; s2 < S; ++s2) {
                const double reach = w * inst.p(h0, s, a, t, s2);
                if (reach <= kReachTol) continue;
                const int k = promise[static_cast<std::size_t>(a) * S + s2];
                if (!next.realizable(s2, k)) return std::nullopt;
                total += reach * next.value(s2, k);
            }
        }
    }
    return total;
}

double relaxed_objective(int h, int s, const RelaxedSolution& relaxed,
                         const ValueTable& next, const PersuasionMdp& inst) {
    const int A = inst.num_actions, T = inst.num_observations, S = inst.num_states;
    const int h0 = h - 1;
    double total = 0.0;
    for (int a = 0; a < A; ++a) {
        for (int t = 0; t < T; ++t) {
            const double w =
                inst.mu(h0, s, t) * relaxed.kappa[static_cast<std::size_t>(t) * A + a];
            if (w == 0.0) continue;
            total += w * inst.sender_r(h0, s, a, t);
            for (int s2 = 0; s2 < S; ++s2) {
                const double reach = w * inst.p(h0, s, a, t, s2);
                if (reach == 0.0) continue;
                double expect = 0.0;
                for (const auto& [k, weight] :
                     relaxed.promise_dist[static_cast<std::size_t>(a) * S + s2])
                    expect += weight * next.value(s2, k);
                total += reach * expect;
            }
        }
    }
    return total;
}

namespace {

/// Flooring the mean promises can erode the obedience rows by up to delta
/// times the recommendation mass; the relaxed solution only guarantees them
/// at the un-floored means. Raise individual promises back toward their
/// ceilings, cheapest table-value loss first, while the slack accumulated by
/// flooring (F(floor) - v) still pays for it, so v <= F(kappa, q) survives.
void repair_obedience(int h, int s, const RelaxedSolution& relaxed,
                      const ValueTable& next, const PersuasionMdp& inst,
                      const DeviationValues& deviation, double v,
                      std::vector<int>& q) {
    const int A = inst.num_actions, S = inst.num_states, T = inst.num_observations;
    const int h0 = h - 1;
    const double delta = next.delta;

    const std::optional<double> floor_value = oracle_objective(h, s, relaxed.kappa, q, next, inst);
    if (!floor_value) return;
    double budget = *floor_value - v;
    if (budget < 0.0) budget = 0.0;

    // Reach marginal per (a, s') under kappa.
    std::vector<double> marginal(static_cast<std::size_t>(A) * S, 0.0);
    for (int a = 0; a < A; ++a)
        for (int s2 = 0; s2 < S; ++s2) {
            double m = 0.0;
            for (int t = 0; t < T; ++t)
                m += inst.mu(h0, s, t) * relaxed.kappa[static_cast<std::size_t>(t) * A + a] *
                     inst.p(h0, s, a, t, s2);
            marginal[static_cast<std::size_t>(a) * S + s2] = m;
        }

    struct Candidate {
        double loss;  // table-value cost of raising the promise one grid step
        double gain;  // obedience left-hand-side gain
        int s2;
    };

    for (int a = 0; a < A; ++a) {
        double deficit = 0.0;
        const double lhs = obedience_lhs(h, s, a, relaxed.kappa, q, delta, inst);
        for (int alt = 0; alt < A; ++alt)
            deficit = std::max(deficit,
                               obedience_rhs(h, s, a, alt, relaxed.kappa, inst, deviation) - lhs);
        if (deficit <= kRepairTol) continue;

        std::vector<Candidate> candidates;
        for (int s2 = 0; s2 < S; ++s2) {
            const double m = marginal[static_cast<std::size_t>(a) * S + s2];
            if (m <= kReachTol) continue;
            const int k = q[static_cast<std::size_t>(a) * S + s2];
            if (k + 1 >= next.num_points || !next.realizable(s2, k + 1)) continue;
            // Only raise toward the un-floored mean's ceiling.
            double mean_index = 0.0;
            for (const auto& [kk, w] :
                 relaxed.promise_dist[static_cast<std::size_t>(a) * S + s2])
                mean_index += kk * w;
            if (k + 1 > std::ceil(mean_index - 1e-12)) continue;
            candidates.push_back(
                {m * (next.value(s2, k) - next.value(s2, k + 1)), m * delta, s2});
        }
        std::sort(candidates.begin(), candidates.end(), [](const Candidate& x, const Candidate& y) {
            if (x.loss != y.loss) return x.loss < y.loss;
            return x.s2 < y.s2;
        });

        for (const Candidate& c : candidates) {
            if (deficit <= kRepairTol) break;
            if (c.loss > budget + 1e-12) continue;
            q[static_cast<std::size_t>(a) * S + c.s2] += 1;
            budget -= c.loss;
            deficit -= c.gain;
        }
    }
}

}  // namespace

OracleResult approximate_oracle(int h, int s, double promise_value, const ValueTable& next,
                                const PersuasionMdp& inst, const DeviationValues& deviation) {
    const int A = inst.num_actions, T = inst.num_observations, S = inst.num_states;

    OracleLp built = build_oracle_lp(h, s, promise_value, next, inst, deviation);
    const LpOutcome outcome = lp_solve(built.lp);

    OracleResult result;
    if (outcome.status == LpStatus::Unbounded)
        throw std::logic_error("approximate_oracle: oracle LP is unbounded");
    if (outcome.status == LpStatus::Infeasible) {
        result.feasible = false;
        result.kappa.assign(static_cast<std::size_t>(T) * A, 1.0 / A);
        result.promise.assign(static_cast<std::size_t>(A) * S, 0);
        result.relaxed.kappa = result.kappa;
        result.relaxed.promise_dist.assign(static_cast<std::size_t>(A) * S, {{0, 1.0}});
        return result;
    }

    result.feasible = true;
    result.omega = outcome.value;
    result.relaxed = lp_solution_to_relaxed(built, outcome.x, h, s, inst);
    result.kappa = result.relaxed.kappa;
    result.value = relaxed_objective(h, s, result.relaxed, next, inst);
    result.promise = derandomize(result.relaxed, next, next.delta);
    repair_obedience(h, s, result.relaxed, next, inst, deviation, result.value,
                     result.promise);
    return result;
}

}  // namespace persuasion
