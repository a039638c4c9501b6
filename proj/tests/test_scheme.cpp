#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>

#include "persuasion/instances.hpp"
#include "persuasion/scheme.hpp"
#include "persuasion/solver.hpp"
#include "support.hpp"

using namespace persuasion;

namespace {

/// Single-cell scheme skeleton: promise sets {0} everywhere, uniform rows,
/// promises 0. A convenient base the tests then edit.
PromiseScheme skeleton(const PersuasionMdp& inst, double delta) {
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
                static_cast<std::size_t>(inst.num_observations) * inst.num_actions,
                1.0 / inst.num_actions);
            cell.next_promise.assign(
                static_cast<std::size_t>(inst.num_actions) * inst.num_states, 0);
            scheme.cells[h - 1][s].push_back(std::move(cell));
        }
    return scheme;
}

PersuasionMdp single_path_instance(int horizon) {
    PersuasionMdp inst = PersuasionMdp::zeros(1, 1, 1, horizon);
    for (int h = 0; h < horizon; ++h) {
        inst.prior[inst.prior_index(h, 0, 0)] = 1.0;
        inst.transition[inst.transition_index(h, 0, 0, 0, 0)] = 1.0;
        inst.sender_reward[inst.reward_index(h, 0, 0, 0)] = 1.0;
        inst.receiver_reward[inst.reward_index(h, 0, 0, 0)] = 1.0;
    }
    inst.initial[0] = 1.0;
    return inst;
}

}  // namespace

TEST_CASE("history_to_promise: base case and zero promise functions") {
    const PersuasionMdp inst = random_instance(3, 3, 2, 2, 3);
    const PromiseScheme scheme = skeleton(inst, 0.5);
    CHECK(history_to_promise(scheme, History(1)) == 0);

    History tau(0);
    tau.extend(1, 2);
    tau.extend(0, 1);
    CHECK(history_to_promise(scheme, tau) == 0);
}

TEST_CASE("history_to_promise: single fold lands on the promised index") {
    const PersuasionMdp inst = random_instance(4, 2, 2, 2, 2);
    PromiseScheme scheme = skeleton(inst, 0.5);
    // promise value 0.5 = index 1 for all follow-ups of (s=0, a=0)
    PromiseCell extra = scheme.cells[1][1].front();
    extra.promise = 1;
    scheme.cells[1][1].push_back(extra);
    scheme.cells[0][0].front().next_promise[0 * inst.num_states + 1] = 1;
    REQUIRE(scheme.validate(inst).empty());

    History tau(0);
    tau.extend(0, 1);
    CHECK(history_to_promise(scheme, tau) == 1);

    History other(0);
    other.extend(1, 1);
    CHECK(history_to_promise(scheme, other) == 0);
}

TEST_CASE("history_to_promise: out-of-set promise names the step") {
    const PersuasionMdp inst = random_instance(5, 2, 2, 2, 2);
    PromiseScheme scheme = skeleton(inst, 0.5);
    scheme.cells[0][0].front().promise = 1;  // I_1(0) = {1}: the start 0 is missing
    History tau(0);
    tau.extend(0, 1);
    CHECK_THROWS_WITH_AS(history_to_promise(scheme, tau), doctest::Contains("step 1"),
                         std::runtime_error);
}

TEST_CASE("induced_recommendation: uniform and deterministic schemes") {
    const PersuasionMdp inst = random_instance(6, 2, 3, 2, 2);
    const PromiseScheme uniform = skeleton(inst, 0.5);
    History tau(1);
    tau.extend(2, 0);
    for (int theta = 0; theta < 2; ++theta) {
        const std::vector<double> row = induced_recommendation(uniform, tau, theta);
        for (double p : row) CHECK(p == doctest::Approx(1.0 / 3).epsilon(1e-12));
    }

    PromiseScheme fixed = uniform;
    for (auto& per_state : fixed.cells)
        for (auto& cells : per_state)
            for (PromiseCell& cell : cells) {
                std::fill(cell.recommend.begin(), cell.recommend.end(), 0.0);
                for (int t = 0; t < 2; ++t) cell.recommend[t * 3 + 1] = 1.0;
            }
    const std::vector<double> row = induced_recommendation(fixed, tau, 0);
    CHECK(row[1] == 1.0);
    CHECK(row[0] == 0.0);
}

TEST_CASE("induced_recommendation: decode-then-index on solver output") {
    const PersuasionMdp inst = random_instance(7, 2, 2, 2, 3);
    const SolveResult solved = dp_solve(inst, 1.2);
    History tau(0);
    tau.extend(1, 1);
    tau.extend(0, 1);
    const int k = history_to_promise(solved.scheme, tau);
    const PromiseCell* cell = solved.scheme.find_cell(3, 1, k);
    REQUIRE(cell != nullptr);
    for (int theta = 0; theta < 2; ++theta) {
        const std::vector<double> row = induced_recommendation(solved.scheme, tau, theta);
        for (int a = 0; a < 2; ++a) CHECK(row[a] == cell->rec(theta, a, 2));
    }
}

TEST_CASE("scheme_values: aggregate matches the solver's reported value") {
    const PersuasionMdp inst = random_instance(17, 3, 2, 2, 2);
    const SolveResult solved = dp_solve(inst, 0.8);
    const SchemeValues vals = scheme_values(inst, solved.scheme);
    double aggregate = 0.0;
    for (int s = 0; s < inst.num_states; ++s) {
        const int pos = solved.scheme.cell_position(1, s, 0);
        aggregate += inst.beta(s) * vals.sender[0][s][pos];
    }
    CHECK(aggregate == doctest::Approx(solved.scheme_value).epsilon(1e-12));
}

TEST_CASE("scheme_values: zero rewards and telescoping single path") {
    PersuasionMdp zero = random_instance(8, 2, 2, 2, 2);
    std::fill(zero.sender_reward.begin(), zero.sender_reward.end(), 0.0);
    std::fill(zero.receiver_reward.begin(), zero.receiver_reward.end(), 0.0);
    const PromiseScheme scheme = skeleton(zero, 0.5);
    const SchemeValues vals = scheme_values(zero, scheme);
    for (int h = 1; h <= 2; ++h)
        for (int s = 0; s < 2; ++s) {
            CHECK(vals.sender[h - 1][s][0] == 0.0);
            CHECK(vals.receiver[h - 1][s][0] == 0.0);
        }

    const int H = 4;
    const PersuasionMdp path = single_path_instance(H);
    const SchemeValues path_vals = scheme_values(path, skeleton(path, 1.0));
    for (int h = 1; h <= H; ++h) {
        CHECK(path_vals.sender[h - 1][0][0] == doctest::Approx(H - h + 1).epsilon(1e-12));
        CHECK(path_vals.receiver[h - 1][0][0] == doctest::Approx(H - h + 1).epsilon(1e-12));
    }
}

TEST_CASE("history enumeration: H = 1 coincides with the recursion exactly") {
    const PersuasionMdp inst = random_instance(9, 3, 2, 2, 1);
    const PromiseScheme scheme = skeleton(inst, 0.5);
    const SchemeValues vals = scheme_values(inst, scheme);
    const HistoryValues hist = evaluate_by_history_enumeration(inst, scheme);
    REQUIRE(hist.per_step.size() == 1);
    REQUIRE(hist.per_step[0].size() == 3);
    for (const auto& entry : hist.per_step[0]) {
        const int s = entry.tau.current_state();
        CHECK(entry.sender == vals.sender[0][s][0]);
        CHECK(entry.receiver == vals.receiver[0][s][0]);
    }
}

TEST_CASE("history enumeration: zero rewards give zero tables") {
    PersuasionMdp zero = random_instance(10, 2, 2, 2, 3);
    std::fill(zero.sender_reward.begin(), zero.sender_reward.end(), 0.0);
    std::fill(zero.receiver_reward.begin(), zero.receiver_reward.end(), 0.0);
    const HistoryValues hist = evaluate_by_history_enumeration(zero, skeleton(zero, 0.5));
    for (const auto& step : hist.per_step)
        for (const auto& entry : step) {
            CHECK(entry.sender == 0.0);
            CHECK(entry.receiver == 0.0);
        }
}

TEST_CASE("history enumeration: size guard refuses oversized inputs") {
    const PersuasionMdp inst = random_instance(11, 3, 2, 2, 3);
    CHECK_THROWS_WITH_AS(evaluate_by_history_enumeration(inst, skeleton(inst, 0.5), 10),
                         doctest::Contains("guard"), std::runtime_error);
}

TEST_CASE("value equivalence: per-history values equal the promise recursion on solver output") {
    for (std::uint64_t seed : {21u, 22u, 23u}) {
        const PersuasionMdp inst = random_instance(seed, 2, 2, 2, 3);
        const SolveResult solved = dp_solve(inst, 1.2);
        const SchemeValues vals = scheme_values(inst, solved.scheme);
        const HistoryValues hist = evaluate_by_history_enumeration(inst, solved.scheme);
        for (int h = 1; h <= inst.horizon; ++h)
            for (const auto& entry : hist.per_step[h - 1]) {
                const int s = entry.tau.current_state();
                const int pos = solved.scheme.cell_position(h, s, entry.promise);
                REQUIRE(pos >= 0);
                CHECK(std::abs(entry.sender - vals.sender[h - 1][s][pos]) <= 1e-9);
                CHECK(std::abs(entry.receiver - vals.receiver[h - 1][s][pos]) <= 1e-9);
                for (int a = 0; a < inst.num_actions; ++a)
                    CHECK(std::abs(entry.receiver_action[a] -
                                   vals.receiver_action[h - 1][s][pos][a]) <= 1e-9);
            }
    }
}

TEST_CASE("check_honesty: zero promises always pass, inflated promises fail") {
    PersuasionMdp zero = random_instance(12, 2, 2, 2, 2);
    std::fill(zero.receiver_reward.begin(), zero.receiver_reward.end(), 0.0);
    const PromiseScheme honest = skeleton(zero, 0.5);
    CHECK(check_honesty(zero, honest, 0.0).empty());

    // promise H with zero rewards and zero continuations: dishonest for eta < H
    PromiseScheme inflated = honest;
    const GridSpec grid = inflated.grid();
    for (int s = 0; s < 2; ++s) {
        PromiseCell cell = inflated.cells[0][s].front();
        cell.promise = grid.num_points - 1;
        inflated.cells[0][s].push_back(cell);
    }
    REQUIRE(inflated.validate(zero).empty());
    const ViolationReport report = check_honesty(zero, inflated, 1.0);
    CHECK(report.size() == 2);
    for (const Violation& v : report.violations) {
        CHECK(v.kind == ViolationKind::Honesty);
        CHECK(v.left == 0.0);
        CHECK(v.slack == doctest::Approx(2.0 - 1.0));
    }
    CHECK(check_honesty(zero, inflated, 2.0).empty());
}

TEST_CASE("check_local_persuasiveness: single action is vacuous, dominated action flags") {
    // With one action every pair has a = a'. At H = 1 the comparison is an
    // identity for any scheme; at H > 1 it still constrains the promises, so
    // use the solver output there.
    const PersuasionMdp single_one = random_instance(13, 3, 1, 2, 1);
    CHECK(check_local_persuasiveness(single_one, skeleton(single_one, 0.5),
                                     deviation_values(single_one))
              .empty());
    const PersuasionMdp single = random_instance(13, 3, 1, 2, 2);
    const SolveResult single_solved = dp_solve(single, 0.8);
    CHECK(check_local_persuasiveness(single, single_solved.scheme,
                                     deviation_values(single))
              .empty());

    // action 1 strictly dominates action 0 for the receiver
    PersuasionMdp dominated = random_instance(14, 2, 2, 2, 2);
    for (int h = 0; h < 2; ++h)
        for (int s = 0; s < 2; ++s)
            for (int t = 0; t < 2; ++t) {
                dominated.receiver_reward[dominated.reward_index(h, s, 0, t)] = 0.0;
                dominated.receiver_reward[dominated.reward_index(h, s, 1, t)] = 1.0;
            }
    const PromiseScheme defect = testing::constant_action_scheme(dominated, 0, 0.5);
    const ViolationReport report =
        check_local_persuasiveness(dominated, defect, deviation_values(dominated));
    CHECK(!report.empty());
    bool found = false;
    for (const Violation& v : report.violations)
        if (v.action == 0 && v.alt_action == 1) found = true;
    CHECK(found);
}

TEST_CASE("verify_persuasive_exhaustive: defect scheme fails, one-shot lift passes") {
    PersuasionMdp dominated = random_instance(15, 2, 2, 2, 2);
    for (int h = 0; h < 2; ++h)
        for (int s = 0; s < 2; ++s)
            for (int t = 0; t < 2; ++t) {
                dominated.receiver_reward[dominated.reward_index(h, s, 0, t)] = 0.0;
                dominated.receiver_reward[dominated.reward_index(h, s, 1, t)] = 1.0;
            }
    const PromiseScheme defect = testing::constant_action_scheme(dominated, 0, 0.5);
    const ViolationReport bad = verify_persuasive_exhaustive(dominated, defect, 0.0);
    REQUIRE(!bad.empty());
    bool saw_reachable = false, saw_unreachable = false;
    for (const Violation& v : bad.violations) {
        CHECK(v.slack > 0.0);
        // histories through the never-recommended action have zero probability
        (v.reachable ? saw_reachable : saw_unreachable) = true;
    }
    CHECK(saw_reachable);
    CHECK(saw_unreachable);

    // H = 1: a persuasive one-shot solution lifted to a trivial scheme
    const PersuasionMdp one = random_instance(16, 3, 2, 2, 1);
    const SolveResult solved = dp_solve(one, 0.5);
    CHECK(verify_persuasive_exhaustive(one, solved.scheme, 1e-9).empty());
}

TEST_CASE("promise keeping: honesty at eta bounds the receiver value tables") {
    for (std::uint64_t seed : {31u, 32u}) {
        const PersuasionMdp inst = random_instance(seed, 2, 2, 2, 3);
        const SolveResult solved = dp_solve(inst, 1.2);
        const double eta = 2.0 * solved.delta;
        REQUIRE(check_honesty(inst, solved.scheme, eta).empty());
        const SchemeValues vals = scheme_values(inst, solved.scheme);
        for (int h = 1; h <= inst.horizon; ++h)
            for (int s = 0; s < inst.num_states; ++s) {
                const auto& cells = solved.scheme.cells[h - 1][s];
                for (std::size_t pos = 0; pos < cells.size(); ++pos) {
                    const double promised = cells[pos].promise * solved.delta;
                    const double bound = promised - eta * (inst.horizon - h + 1) - 1e-9;
                    CHECK(vals.receiver[h - 1][s][pos] >= bound);
                }
            }
    }
}

TEST_CASE("local to global: honesty plus local checks imply exhaustive persuasiveness") {
    for (std::uint64_t seed : {41u, 42u}) {
        const PersuasionMdp inst = random_instance(seed, 2, 2, 2, 2);
        const SolveResult solved = dp_solve(inst, 0.8);
        const double eta = 2.0 * solved.delta;
        const bool honest = check_honesty(inst, solved.scheme, eta).empty();
        const bool local =
            check_local_persuasiveness(inst, solved.scheme, deviation_values(inst)).empty();
        REQUIRE(honest);
        if (local) {
            CHECK(verify_persuasive_exhaustive(inst, solved.scheme, eta * inst.horizon)
                      .empty());
        }
    }
}

TEST_CASE("promise closure: decoding reachable histories stays inside the sets") {
    const PersuasionMdp inst = random_instance(51, 2, 2, 2, 3);
    const SolveResult solved = dp_solve(inst, 1.2);
    const HistoryValues hist = evaluate_by_history_enumeration(inst, solved.scheme);
    for (int h = 1; h <= inst.horizon; ++h)
        for (const auto& entry : hist.per_step[h - 1])
            CHECK(solved.scheme.in_promise_set(h, entry.tau.current_state(), entry.promise));
}

TEST_CASE("scheme io: solver output round-trips exactly") {
    const PersuasionMdp inst = random_instance(61, 2, 2, 2, 2);
    const SolveResult solved = dp_solve(inst, 0.8);
    const std::string path =
        (std::filesystem::temp_directory_path() / "persuasion_scheme_roundtrip.json").string();
    write_scheme(solved.scheme, path);
    const PromiseScheme back = read_scheme(path);
    CHECK(back.delta == solved.scheme.delta);
    REQUIRE(back.cells.size() == solved.scheme.cells.size());
    for (int h = 1; h <= inst.horizon; ++h)
        for (int s = 0; s < inst.num_states; ++s) {
            const auto& a = solved.scheme.cells[h - 1][s];
            const auto& b = back.cells[h - 1][s];
            REQUIRE(a.size() == b.size());
            for (std::size_t i = 0; i < a.size(); ++i) {
                CHECK(a[i].promise == b[i].promise);
                CHECK(a[i].recommend == b[i].recommend);
                CHECK(a[i].next_promise == b[i].next_promise);
            }
        }
    std::remove(path.c_str());
}

TEST_CASE("scheme io: malformed documents are rejected") {
    CHECK_THROWS_WITH_AS(scheme_from_text("{\"delta\": 0.5}"), doctest::Contains("missing"),
                         std::runtime_error);
    // closure violation: promise function points at an absent promise
    const PersuasionMdp inst = random_instance(62, 2, 2, 2, 2);
    PromiseScheme broken = skeleton(inst, 0.5);
    broken.cells[0][0].front().next_promise[0] = 3;
    CHECK_THROWS_WITH_AS(scheme_from_text(scheme_to_text(broken)),
                         doctest::Contains("leaves the promise sets"), std::runtime_error);
}
