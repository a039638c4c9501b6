#include "persuasion/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace persuasion {

namespace {
constexpr double kCheckTol = 1e-9;
}

int PromiseScheme::cell_position(int h, int s, int k) const {
    const auto& row = cells[h - 1][s];
    auto it = std::lower_bound(row.begin(), row.end(), k,
                               [](const PromiseCell& c, int key) { return c.promise < key; });
    if (it == row.end() || it->promise != k) return -1;
    return static_cast<int>(it - row.begin());
}

const PromiseCell* PromiseScheme::find_cell(int h, int s, int k) const {
    const int pos = cell_position(h, s, k);
    return pos < 0 ? nullptr : &cells[h - 1][s][pos];
}

std::vector<std::string> PromiseScheme::validate(const PersuasionMdp& inst) const {
    std::vector<std::string> out;
    if (horizon != inst.horizon || num_states != inst.num_states ||
        num_actions != inst.num_actions || num_observations != inst.num_observations) {
        out.push_back("scheme dimensions do not match the instance");
        return out;
    }
    if (delta <= 0.0) out.push_back("delta must be positive");
    if (static_cast<int>(cells.size()) != horizon) {
        out.push_back("cells must have one entry per step");
        return out;
    }
    const GridSpec g = grid();
    for (int h = 1; h <= horizon; ++h) {
        if (static_cast<int>(cells[h - 1].size()) != num_states) {
            out.push_back("step " + std::to_string(h) + " must have one cell list per state");
            return out;
        }
        for (int s = 0; s < num_states; ++s) {
            const auto& row = cells[h - 1][s];
            for (std::size_t i = 0; i < row.size(); ++i) {
                const PromiseCell& cell = row[i];
                if (i > 0 && row[i - 1].promise >= cell.promise)
                    out.push_back("promise set not strictly ascending at (h=" +
                                  std::to_string(h) + ", s=" + std::to_string(s) + ")");
                if (cell.promise < 0 || cell.promise >= g.num_points)
                    out.push_back("promise outside [0, H] at (h=" + std::to_string(h) +
                                  ", s=" + std::to_string(s) + ")");
                if (static_cast<int>(cell.recommend.size()) != num_observations * num_actions ||
                    static_cast<int>(cell.next_promise.size()) != num_actions * num_states) {
                    out.push_back("cell table sizes mismatch at (h=" + std::to_string(h) +
                                  ", s=" + std::to_string(s) + ")");
                    continue;
                }
                for (int t = 0; t < num_observations; ++t) {
                    double sum = 0.0;
                    for (int a = 0; a < num_actions; ++a) {
                        const double v = cell.rec(t, a, num_actions);
                        if (v < -kCheckTol) out.push_back("negative recommendation probability");
                        sum += v;
                    }
                    if (std::abs(sum - 1.0) > kCheckTol)
                        out.push_back("recommendation row does not sum to one at (h=" +
                                      std::to_string(h) + ", s=" + std::to_string(s) +
                                      ", k=" + std::to_string(cell.promise) +
                                      ", theta=" + std::to_string(t) + ")");
                }
                for (int a = 0; a < num_actions; ++a)
                    for (int s2 = 0; s2 < num_states; ++s2) {
                        const int k2 = cell.next(a, s2, num_states);
                        if (!in_promise_set(h + 1, s2, k2))
                            out.push_back(
                                "promise function leaves the promise sets: (h=" +
                                std::to_string(h) + ", s=" + std::to_string(s) + ", a=" +
                                std::to_string(a) + ", k=" + std::to_string(cell.promise) +
                                ", s'=" + std::to_string(s2) + ") -> " + std::to_string(k2));
                    }
            }
        }
    }
    for (int s = 0; s < num_states; ++s)
        if (cell_position(1, s, 0) < 0)
            out.push_back("promise 0 missing from I_1(s=" + std::to_string(s) + ")");
    return out;
}

int history_to_promise(const PromiseScheme& scheme, const History& tau) {
    if (tau.states.empty() || tau.states.size() != tau.actions.size() + 1 ||
        tau.step() > scheme.horizon)
        throw std::invalid_argument("history_to_promise: malformed history");
    for (int s : tau.states)
        if (s < 0 || s >= scheme.num_states)
            throw std::invalid_argument("history_to_promise: state index out of range");
    for (int a : tau.actions)
        if (a < 0 || a >= scheme.num_actions)
            throw std::invalid_argument("history_to_promise: action index out of range");
    int k = 0;
    for (int i = 0; i + 1 < tau.step(); ++i) {
        const int h = i + 1;
        const PromiseCell* cell = scheme.find_cell(h, tau.states[i], k);
        if (cell == nullptr)
            throw std::runtime_error(
                "history_to_promise: promise " + std::to_string(k) +
                " not in the promise set at step " + std::to_string(h) + ", state " +
                std::to_string(tau.states[i]));
        k = cell->next(tau.actions[i], tau.states[i + 1], scheme.num_states);
    }
    return k;
}

std::vector<double> induced_recommendation(const PromiseScheme& scheme, const History& tau,
                                           int theta) {
    const int k = history_to_promise(scheme, tau);
    const int h = tau.step();
    const PromiseCell* cell = scheme.find_cell(h, tau.current_state(), k);
    if (cell == nullptr)
        throw std::runtime_error(
            "induced_recommendation: decoded promise " + std::to_string(k) +
            " not in the promise set at step " + std::to_string(h) + ", state " +
            std::to_string(tau.current_state()));
    std::vector<double> row(scheme.num_actions);
    for (int a = 0; a < scheme.num_actions; ++a)
        row[a] = cell->rec(theta, a, scheme.num_actions);
    return row;
}

SchemeValues scheme_values(const PersuasionMdp& inst, const PromiseScheme& scheme) {
    const int H = scheme.horizon, S = scheme.num_states, A = scheme.num_actions,
              T = scheme.num_observations;
    SchemeValues vals;
    vals.receiver_action.resize(H);
    vals.receiver.resize(H);
    vals.sender.resize(H);

    for (int h = H; h >= 1; --h) {
        vals.receiver_action[h - 1].resize(S);
        vals.receiver[h - 1].resize(S);
        vals.sender[h - 1].resize(S);
        for (int s = 0; s < S; ++s) {
            const auto& row = scheme.cells[h - 1][s];
            vals.receiver_action[h - 1][s].assign(row.size(), std::vector<double>(A, 0.0));
            vals.receiver[h - 1][s].assign(row.size(), 0.0);
            vals.sender[h - 1][s].assign(row.size(), 0.0);
            for (std::size_t pos = 0; pos < row.size(); ++pos) {
                const PromiseCell& cell = row[pos];
                double sender_total = 0.0, receiver_total = 0.0;
                for (int a = 0; a < A; ++a) {
                    double va = 0.0;
                    for (int t = 0; t < T; ++t) {
                        const double w = inst.mu(h - 1, s, t) * cell.rec(t, a, A);
                        if (w == 0.0) continue;
                        double rec_cont = 0.0, send_cont = 0.0;
                        for (int s2 = 0; s2 < S; ++s2) {
                            const double p = inst.p(h - 1, s, a, t, s2);
                            if (p == 0.0) continue;
                            const int k2 = cell.next(a, s2, S);
                            if (h < H) {
                                const int pos2 = scheme.cell_position(h + 1, s2, k2);
                                if (pos2 < 0)
                                    throw std::runtime_error(
                                        "scheme_values: promise closure violated at step " +
                                        std::to_string(h));
                                rec_cont += p * vals.receiver[h][s2][pos2];
                                send_cont += p * vals.sender[h][s2][pos2];
                            }
                            // at h == H the continuation promise set is {0} with value 0
                        }
                        va += w * (inst.receiver_r(h - 1, s, a, t) + rec_cont);
                        sender_total += w * (inst.sender_r(h - 1, s, a, t) + send_cont);
                    }
                    vals.receiver_action[h - 1][s][pos][a] = va;
                    receiver_total += va;
                }
                vals.receiver[h - 1][s][pos] = receiver_total;
                vals.sender[h - 1][s][pos] = sender_total;
            }
        }
    }
    return vals;
}

std::size_t history_count(const PersuasionMdp& inst) {
    std::size_t total = 0, layer = 0;
    for (int h = 1; h <= inst.horizon; ++h) {
        layer = (h == 1) ? static_cast<std::size_t>(inst.num_states)
                         : layer * inst.num_actions * inst.num_states;
        total += layer;
        if (total > 100'000'000) return total;  // avoid overflow on absurd inputs
    }
    return total;
}

namespace {

struct HistoryWalker {
    const PersuasionMdp& inst;
    const PromiseScheme& scheme;
    HistoryValues& out;

    struct NodeValues {
        double sender = 0.0;
        double receiver = 0.0;
    };

    NodeValues visit(History& tau, int promise, double reach) {
        const int h = tau.step();
        const int s = tau.current_state();
        const int A = inst.num_actions, T = inst.num_observations, S = inst.num_states;
        const PromiseCell* cell = scheme.find_cell(h, s, promise);
        if (cell == nullptr)
            throw std::runtime_error("history enumeration: promise " + std::to_string(promise) +
                                     " missing at step " + std::to_string(h) + ", state " +
                                     std::to_string(s));

        HistoryValues::Entry entry;
        entry.promise = promise;
        entry.reach_probability = reach;
        entry.receiver_action.assign(A, 0.0);

        // Children values first (post-order), one recursive call per (a, s').
        std::vector<NodeValues> child(static_cast<std::size_t>(A) * S);
        if (h < inst.horizon) {
            for (int a = 0; a < A; ++a) {
                for (int s2 = 0; s2 < S; ++s2) {
                    double step_prob = 0.0;
                    for (int t = 0; t < T; ++t)
                        step_prob += inst.mu(h - 1, s, t) * cell->rec(t, a, A) *
                                     inst.p(h - 1, s, a, t, s2);
                    tau.extend(a, s2);
                    child[static_cast<std::size_t>(a) * S + s2] =
                        visit(tau, cell->next(a, s2, S), reach * step_prob);
                    tau.actions.pop_back();
                    tau.states.pop_back();
                }
            }
        }

        double sender_total = 0.0, receiver_total = 0.0;
        for (int a = 0; a < A; ++a) {
            double va = 0.0;
            for (int t = 0; t < T; ++t) {
                const double w = inst.mu(h - 1, s, t) * cell->rec(t, a, A);
                if (w == 0.0) continue;
                double rec_cont = 0.0, send_cont = 0.0;
                if (h < inst.horizon)
                    for (int s2 = 0; s2 < S; ++s2) {
                        const double p = inst.p(h - 1, s, a, t, s2);
                        if (p == 0.0) continue;
                        const NodeValues& cv = child[static_cast<std::size_t>(a) * S + s2];
                        rec_cont += p * cv.receiver;
                        send_cont += p * cv.sender;
                    }
                va += w * (inst.receiver_r(h - 1, s, a, t) + rec_cont);
                sender_total += w * (inst.sender_r(h - 1, s, a, t) + send_cont);
            }
            entry.receiver_action[a] = va;
            receiver_total += va;
        }
        entry.sender = sender_total;
        entry.receiver = receiver_total;
        entry.tau = tau;
        out.per_step[h - 1].push_back(std::move(entry));
        return {sender_total, receiver_total};
    }
};

}  // namespace

HistoryValues evaluate_by_history_enumeration(const PersuasionMdp& inst,
                                              const PromiseScheme& scheme,
                                              std::size_t max_histories) {
    const std::size_t count = history_count(inst);
    if (count > max_histories)
        throw std::runtime_error("history enumeration refused: " + std::to_string(count) +
                                 " histories exceed the guard of " +
                                 std::to_string(max_histories));
    HistoryValues out;
    out.per_step.resize(inst.horizon);
    HistoryWalker walker{inst, scheme, out};
    for (int s = 0; s < inst.num_states; ++s) {
        History tau(s);
        walker.visit(tau, 0, inst.beta(s));
    }
    return out;
}

std::string Violation::describe() const {
    std::ostringstream os;
    switch (kind) {
        case ViolationKind::Honesty: os << "honesty"; break;
        case ViolationKind::LocalPersuasiveness: os << "local_persuasiveness"; break;
        case ViolationKind::Definition1: os << "definition1"; break;
    }
    os << " at h=" << step;
    if (!history.states.empty())
        os << " tau=" << history.to_string();
    else
        os << " s=" << state;
    if (promise >= 0) os << " k=" << promise;
    if (action >= 0) os << " a=" << action;
    if (alt_action >= 0) os << " a'=" << alt_action;
    os << ": " << left << " < " << right << " (slack " << slack << ")";
    if (!reachable) os << " [unreachable]";
    return os.str();
}

ViolationReport check_honesty(const PersuasionMdp& inst, const PromiseScheme& scheme,
                              double eta) {
    ViolationReport report;
    const int H = scheme.horizon, S = scheme.num_states, A = scheme.num_actions,
              T = scheme.num_observations;
    for (int h = 1; h <= H; ++h) {
        for (int s = 0; s < S; ++s) {
            for (const PromiseCell& cell : scheme.cells[h - 1][s]) {
                double lhs = 0.0;
                for (int a = 0; a < A; ++a)
                    for (int t = 0; t < T; ++t) {
                        const double w = inst.mu(h - 1, s, t) * cell.rec(t, a, A);
                        if (w == 0.0) continue;
                        double cont = 0.0;
                        for (int s2 = 0; s2 < S; ++s2)
                            cont += inst.p(h - 1, s, a, t, s2) *
                                    (cell.next(a, s2, S) * scheme.delta);
                        lhs += w * (inst.receiver_r(h - 1, s, a, t) + cont);
                    }
                const double rhs = cell.promise * scheme.delta - eta;
                if (lhs < rhs - kCheckTol) {
                    Violation v;
                    v.kind = ViolationKind::Honesty;
                    v.step = h;
                    v.state = s;
                    v.promise = cell.promise;
                    v.left = lhs;
                    v.right = rhs;
                    v.slack = rhs - lhs;
                    report.violations.push_back(std::move(v));
                }
            }
        }
    }
    return report;
}

ViolationReport check_local_persuasiveness(const PersuasionMdp& inst,
                                           const PromiseScheme& scheme,
                                           const DeviationValues& deviation) {
    ViolationReport report;
    const int H = scheme.horizon, S = scheme.num_states, A = scheme.num_actions,
              T = scheme.num_observations;
    for (int h = 1; h <= H; ++h) {
        for (int s = 0; s < S; ++s) {
            for (const PromiseCell& cell : scheme.cells[h - 1][s]) {
                for (int a = 0; a < A; ++a) {
                    double lhs = 0.0;
                    for (int t = 0; t < T; ++t) {
                        const double w = inst.mu(h - 1, s, t) * cell.rec(t, a, A);
                        if (w == 0.0) continue;
                        double cont = 0.0;
                        for (int s2 = 0; s2 < S; ++s2)
                            cont += inst.p(h - 1, s, a, t, s2) *
                                    (cell.next(a, s2, S) * scheme.delta);
                        lhs += w * (inst.receiver_r(h - 1, s, a, t) + cont);
                    }
                    for (int alt = 0; alt < A; ++alt) {
                        double rhs = 0.0;
                        for (int t = 0; t < T; ++t) {
                            const double w = inst.mu(h - 1, s, t) * cell.rec(t, a, A);
                            if (w == 0.0) continue;
                            double dev = inst.receiver_r(h - 1, s, alt, t);
                            for (int s2 = 0; s2 < S; ++s2)
                                dev += inst.p(h - 1, s, alt, t, s2) * deviation.at(h + 1, s2);
                            rhs += w * dev;
                        }
                        if (lhs < rhs - kCheckTol) {
                            Violation v;
                            v.kind = ViolationKind::LocalPersuasiveness;
                            v.step = h;
                            v.state = s;
                            v.promise = cell.promise;
                            v.action = a;
                            v.alt_action = alt;
                            v.left = lhs;
                            v.right = rhs;
                            v.slack = rhs - lhs;
                            report.violations.push_back(std::move(v));
                        }
                    }
                }
            }
        }
    }
    return report;
}

ViolationReport verify_persuasive_exhaustive(const PersuasionMdp& inst,
                                             const PromiseScheme& scheme, double epsilon,
                                             std::size_t max_histories) {
    ViolationReport report;
    const HistoryValues values = evaluate_by_history_enumeration(inst, scheme, max_histories);
    const DeviationValues deviation = deviation_values(inst);
    const int A = inst.num_actions, T = inst.num_observations, S = inst.num_states;

    for (int h = 1; h <= inst.horizon; ++h) {
        for (const HistoryValues::Entry& entry : values.per_step[h - 1]) {
            const int s = entry.tau.current_state();
            const PromiseCell* cell = scheme.find_cell(h, s, entry.promise);
            for (int a = 0; a < A; ++a) {
                for (int alt = 0; alt < A; ++alt) {
                    double rhs = 0.0;
                    for (int t = 0; t < T; ++t) {
                        const double w = inst.mu(h - 1, s, t) * cell->rec(t, a, A);
                        if (w == 0.0) continue;
                        double dev = inst.receiver_r(h - 1, s, alt, t);
                        for (int s2 = 0; s2 < S; ++s2)
                            dev += inst.p(h - 1, s, alt, t, s2) * deviation.at(h + 1, s2);
                        rhs += w * dev;
                    }
                    const double lhs = entry.receiver_action[a];
                    if (lhs < rhs - epsilon - kCheckTol) {
                        Violation v;
                        v.kind = ViolationKind::Definition1;
                        v.step = h;
                        v.state = s;
                        v.promise = entry.promise;
                        v.action = a;
                        v.alt_action = alt;
                        v.history = entry.tau;
                        v.left = lhs;
                        v.right = rhs - epsilon;
                        v.slack = rhs - epsilon - lhs;
                        v.reachable = entry.reach_probability > 0.0;
                        report.violations.push_back(std::move(v));
                    }
                }
            }
        }
    }
    return report;
}

// ---------------------------------------------------------------------------
// Scheme file I/O
// ---------------------------------------------------------------------------

namespace {

using nlohmann::json;

json scheme_field(const json& doc, const std::string& name) {
    if (!doc.contains(name))
        throw std::runtime_error("scheme file: missing required field \"" + name + "\"");
    return doc.at(name);
}

}  // namespace

std::string scheme_to_text(const PromiseScheme& scheme) {
    json doc;
    doc["delta"] = scheme.delta;
    doc["horizon"] = scheme.horizon;
    doc["num_states"] = scheme.num_states;
    doc["num_actions"] = scheme.num_actions;
    doc["num_observations"] = scheme.num_observations;

    json promise_sets = json::array(), recommend = json::array(), next_promise = json::array();
    for (int h = 1; h <= scheme.horizon; ++h) {
        json ps_h = json::array(), rec_h = json::array(), np_h = json::array();
        for (int s = 0; s < scheme.num_states; ++s) {
            const auto& row = scheme.cells[h - 1][s];
            json ps = json::array(), rec = json::array();
            for (const PromiseCell& cell : row) {
                ps.push_back(cell.promise);
                json by_theta = json::array();
                for (int t = 0; t < scheme.num_observations; ++t) {
                    json actions = json::array();
                    for (int a = 0; a < scheme.num_actions; ++a)
                        actions.push_back(cell.rec(t, a, scheme.num_actions));
                    by_theta.push_back(actions);
                }
                rec.push_back(by_theta);
            }
            // next_promise is a-major: [a][k-position][s']
            json np = json::array();
            for (int a = 0; a < scheme.num_actions; ++a) {
                json by_cell = json::array();
                for (const PromiseCell& cell : row) {
                    json succ = json::array();
                    for (int s2 = 0; s2 < scheme.num_states; ++s2)
                        succ.push_back(cell.next(a, s2, scheme.num_states));
                    by_cell.push_back(succ);
                }
                np.push_back(by_cell);
            }
            ps_h.push_back(ps);
            rec_h.push_back(rec);
            np_h.push_back(np);
        }
        promise_sets.push_back(ps_h);
        recommend.push_back(rec_h);
        next_promise.push_back(np_h);
    }
    doc["promise_sets"] = promise_sets;
    doc["recommend"] = recommend;
    doc["next_promise"] = next_promise;
    return doc.dump(1) + "\n";
}

PromiseScheme scheme_from_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(std::string("scheme file: ") + e.what());
    }

    PromiseScheme scheme;
    scheme.delta = scheme_field(doc, "delta").get<double>();
    scheme.horizon = scheme_field(doc, "horizon").get<int>();
    scheme.num_states = scheme_field(doc, "num_states").get<int>();
    scheme.num_actions = scheme_field(doc, "num_actions").get<int>();
    scheme.num_observations = scheme_field(doc, "num_observations").get<int>();
    if (scheme.delta <= 0.0 || scheme.horizon < 1 || scheme.num_states < 1 ||
        scheme.num_actions < 1 || scheme.num_observations < 1)
        throw std::runtime_error("scheme file: invalid dimensions");

    const json promise_sets = scheme_field(doc, "promise_sets");
    const json recommend = scheme_field(doc, "recommend");
    const json next_promise = scheme_field(doc, "next_promise");
    if (static_cast<int>(promise_sets.size()) != scheme.horizon ||
        static_cast<int>(recommend.size()) != scheme.horizon ||
        static_cast<int>(next_promise.size()) != scheme.horizon)
        throw std::runtime_error("scheme file: per-step arrays must have horizon entries");

    scheme.cells.resize(scheme.horizon);
    for (int h = 1; h <= scheme.horizon; ++h) {
        const json& ps_h = promise_sets[h - 1];
        const json& rec_h = recommend[h - 1];
        const json& np_h = next_promise[h - 1];
        if (static_cast<int>(ps_h.size()) != scheme.num_states ||
            static_cast<int>(rec_h.size()) != scheme.num_states ||
            static_cast<int>(np_h.size()) != scheme.num_states)
            throw std::runtime_error("scheme file: step " + std::to_string(h) +
                                     " arrays must have one entry per state");
        scheme.cells[h - 1].resize(scheme.num_states);
        for (int s = 0; s < scheme.num_states; ++s) {
            const json& ps = ps_h[s];
            const json& rec = rec_h[s];
            const json& np = np_h[s];
            const std::size_t ncells = ps.size();
            if (rec.size() != ncells)
                throw std::runtime_error("scheme file: recommend rows must align with "
                                         "promise_sets at step " +
                                         std::to_string(h));
            if (static_cast<int>(np.size()) != scheme.num_actions)
                throw std::runtime_error("scheme file: next_promise must be action-major");
            auto& row = scheme.cells[h - 1][s];
            row.resize(ncells);
            for (std::size_t i = 0; i < ncells; ++i) {
                PromiseCell& cell = row[i];
                cell.promise = ps[i].get<int>();
                cell.recommend.assign(
                    static_cast<std::size_t>(scheme.num_observations) * scheme.num_actions,
                    0.0);
                cell.next_promise.assign(
                    static_cast<std::size_t>(scheme.num_actions) * scheme.num_states, 0);
                const json& by_theta = rec[i];
                if (static_cast<int>(by_theta.size()) != scheme.num_observations)
                    throw std::runtime_error("scheme file: recommendation row shape");
                for (int t = 0; t < scheme.num_observations; ++t) {
                    const json& actions = by_theta[t];
                    if (static_cast<int>(actions.size()) != scheme.num_actions)
                        throw std::runtime_error("scheme file: recommendation row shape");
                    for (int a = 0; a < scheme.num_actions; ++a)
                        cell.recommend[static_cast<std::size_t>(t) * scheme.num_actions + a] =
                            actions[a].get<double>();
                }
                for (int a = 0; a < scheme.num_actions; ++a) {
                    const json& by_cell = np[a];
                    if (by_cell.size() != ncells)
                        throw std::runtime_error("scheme file: next_promise row shape");
                    const json& succ = by_cell[i];
                    if (static_cast<int>(succ.size()) != scheme.num_states)
                        throw std::runtime_error("scheme file: next_promise row shape");
                    for (int s2 = 0; s2 < scheme.num_states; ++s2)
                        cell.next_promise[static_cast<std::size_t>(a) * scheme.num_states +
                                          s2] = succ[s2].get<int>();
                }
            }
        }
    }

    // Structural checks that need no instance: ascending sets, closure, root zero.
    const GridSpec g = scheme.grid();
    for (int h = 1; h <= scheme.horizon; ++h)
        for (int s = 0; s < scheme.num_states; ++s) {
            const auto& row = scheme.cells[h - 1][s];
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (i > 0 && row[i - 1].promise >= row[i].promise)
                    throw std::runtime_error("scheme file: promise set not ascending");
                if (row[i].promise < 0 || row[i].promise >= g.num_points)
                    throw std::runtime_error("scheme file: promise outside the grid");
                for (int a = 0; a < scheme.num_actions; ++a)
                    for (int s2 = 0; s2 < scheme.num_states; ++s2)
                        if (!scheme.in_promise_set(h + 1, s2, row[i].next(a, s2, scheme.num_states)))
                            throw std::runtime_error(
                                "scheme file: promise function leaves the promise sets at "
                                "step " +
                                std::to_string(h));
            }
        }
    for (int s = 0; s < scheme.num_states; ++s)
        if (scheme.cell_position(1, s, 0) < 0)
            throw std::runtime_error("scheme file: promise 0 missing from I_1(s=" +
                                     std::to_string(s) + ")");
    return scheme;
}

PromiseScheme read_scheme(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open scheme file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return scheme_from_text(buf.str());
}

void write_scheme(const PromiseScheme& scheme, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write scheme file: " + path);
    out << scheme_to_text(scheme);
}

}  // namespace persuasion
