#include "persuasion/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "persuasion/instances.hpp"
#include "persuasion/mdp.hpp"
#include "persuasion/scheme.hpp"
#include "persuasion/simulate.hpp"
#include "persuasion/solver.hpp"

namespace persuasion {

namespace {

using nlohmann::json;

json violations_json(const ViolationReport& report) {
    json arr = json::array();
    for (const Violation& v : report.violations) arr.push_back(v.describe());
    return arr;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << text;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stoi(item));
    }
    return out;
}

int run(const std::vector<std::string>& args) {
    CLI::App app{"Bayesian persuasion in finite-horizon MDPs with a farsighted receiver"};
    app.require_subcommand(1);

    // gen-random
    auto* gen_random = app.add_subcommand("gen-random", "generate a seeded random instance");
    std::uint64_t seed = 0;
    int gr_states = 2, gr_actions = 2, gr_observations = 2, gr_horizon = 2;
    std::string out_path;
    gen_random->add_option("--seed", seed, "rng seed")->required();
    gen_random->add_option("--states", gr_states, "number of states");
    gen_random->add_option("--actions", gr_actions, "number of actions");
    gen_random->add_option("--observations", gr_observations, "number of observations");
    gen_random->add_option("--horizon", gr_horizon, "time horizon");
    gen_random->add_option("-o,--output", out_path, "instance file to write")->required();

    // gen-vc
    auto* gen_vc = app.add_subcommand("gen-vc", "build the vertex-cover reduction instance");
    std::string graph_path, cover_text, cover_out;
    gen_vc->add_option("graph", graph_path, "edge-list graph file")->required();
    gen_vc->add_option("-o,--output", out_path, "instance file to write")->required();
    gen_vc->add_option("--cover", cover_text,
                       "comma-separated vertex cover; also emits its deterministic scheme");
    gen_vc->add_option("--cover-out", cover_out,
                       "markov scheme file to write when --cover is given");

    // deviation
    auto* deviation_cmd = app.add_subcommand("deviation", "print the deviation value table");
    std::string inst_path;
    deviation_cmd->add_option("-i,--instance", inst_path, "instance file")->required();

    // solve
    auto* solve_cmd = app.add_subcommand("solve", "compute an optimal eps-persuasive scheme");
    double epsilon = 0.5;
    std::string tables_path;
    solve_cmd->add_option("-i,--instance", inst_path, "instance file")->required();
    solve_cmd->add_option("--epsilon", epsilon, "persuasiveness relaxation")->required();
    solve_cmd->add_option("-o,--output", out_path, "scheme file to write");
    solve_cmd->add_option("--tables", tables_path, "value tables dump to write");

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "exhaustive persuasiveness check");
    std::string scheme_path;
    verify_cmd->add_option("-i,--instance", inst_path, "instance file")->required();
    verify_cmd->add_option("-s,--scheme", scheme_path, "scheme file")->required();
    verify_cmd->add_option("--epsilon", epsilon, "persuasiveness slack")->required();

    // eval-markov
    auto* eval_cmd = app.add_subcommand("eval-markov", "evaluate a Markovian scheme");
    eval_cmd->add_option("-i,--instance", inst_path, "instance file")->required();
    eval_cmd->add_option("-s,--scheme", scheme_path, "markov scheme file")->required();
    eval_cmd->add_option("--epsilon", epsilon, "persuasiveness slack");

    // simulate
    auto* sim_cmd = app.add_subcommand("simulate", "roll out the interaction loop");
    long episodes = 1000;
    std::uint64_t sim_seed = 1;
    std::string deviate_at;
    sim_cmd->add_option("-i,--instance", inst_path, "instance file")->required();
    sim_cmd->add_option("-s,--scheme", scheme_path, "scheme file")->required();
    sim_cmd->add_option("--episodes", episodes, "number of episodes");
    sim_cmd->add_option("--seed", sim_seed, "rng seed");
    sim_cmd->add_option("--deviate-at", deviate_at,
                        "h,a: play action a at step h, then the deviation-greedy action");
    sim_cmd->add_option("-o,--output", out_path, "full report file (with seed trace)");

    // separation
    auto* sep_cmd = app.add_subcommand("separation",
                                       "compare the solver against the Markov brute force");
    double markov_grid = 0.05;
    sep_cmd->add_option("-i,--instance", inst_path, "instance file")->required();
    sep_cmd->add_option("--markov-grid", markov_grid, "recommendation probability grid");
    sep_cmd->add_option("--epsilon", epsilon, "dp_solve relaxation")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(std::move(reversed));
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {  // --help
            std::cout << app.help() << std::flush;
            return 0;
        }
        std::cerr << e.what() << "\n";
        return 2;
    }

    if (gen_random->parsed()) {
        const PersuasionMdp inst =
            random_instance(seed, gr_states, gr_actions, gr_observations, gr_horizon);
        write_instance(inst, out_path);
        json doc;
        doc["written"] = out_path;
        doc["states"] = gr_states;
        doc["horizon"] = gr_horizon;
        std::cout << doc.dump(1) << "\n";
        return 0;
    }

    if (gen_vc->parsed()) {
        const Graph g = read_graph(graph_path);
        const PersuasionMdp inst = vc_instance(g);
        write_instance(inst, out_path);
        json doc;
        doc["written"] = out_path;
        doc["num_states"] = inst.num_states;
        doc["edges"] = g.edges.size();
        doc["vertices"] = g.num_vertices;
        if (!cover_text.empty()) {
            if (cover_out.empty())
                throw std::runtime_error("gen-vc: --cover requires --cover-out");
            const MarkovScheme scheme = vc_completeness_scheme(g, parse_int_list(cover_text));
            write_markov_scheme(scheme, cover_out);
            doc["cover_scheme"] = cover_out;
        }
        std::cout << doc.dump(1) << "\n";
        return 0;
    }

    if (deviation_cmd->parsed()) {
        const PersuasionMdp inst = read_instance(inst_path);
        const DeviationValues dev = deviation_values(inst);
        json values = json::array(), actions = json::array();
        for (int h = 1; h <= inst.horizon + 1; ++h) {
            json row = json::array();
            for (int s = 0; s < inst.num_states; ++s) row.push_back(dev.at(h, s));
            values.push_back(row);
        }
        for (int h = 1; h <= inst.horizon; ++h) {
            json row = json::array();
            for (int s = 0; s < inst.num_states; ++s) row.push_back(dev.action(h, s));
            actions.push_back(row);
        }
        json doc;
        doc["deviation_values"] = values;
        doc["best_action"] = actions;
        std::cout << doc.dump(1) << "\n";
        return 0;
    }

    if (solve_cmd->parsed()) {
        const PersuasionMdp inst = read_instance(inst_path);
        const SolveResult result = dp_solve(inst, epsilon);
        if (!out_path.empty()) write_scheme(result.scheme, out_path);
        if (!tables_path.empty()) write_text(tables_path, tables_to_text(result));
        json doc;
        doc["sender_value"] = result.sender_value;
        doc["scheme_value"] = result.scheme_value;
        doc["epsilon"] = result.epsilon;
        doc["delta"] = result.delta;
        doc["grid_points"] = result.grid.num_points;
        doc["cells_solved"] = result.diagnostics.cells_solved;
        doc["infeasible_cells"] = result.diagnostics.infeasible_cells;
        std::cout << doc.dump(1) << "\n";
        std::cerr << "solve: " << result.diagnostics.wall_seconds << " s\n";
        return 0;
    }

    if (verify_cmd->parsed()) {
        const PersuasionMdp inst = read_instance(inst_path);
        const PromiseScheme scheme = read_scheme(scheme_path);
        {
            const std::vector<std::string> problems = scheme.validate(inst);
            if (!problems.empty())
                throw std::runtime_error("verify: scheme invalid for instance: " +
                                         problems.front());
        }
        const ViolationReport report = verify_persuasive_exhaustive(inst, scheme, epsilon);
        json doc;
        doc["epsilon"] = epsilon;
        doc["histories"] = history_count(inst);
        doc["violations"] = violations_json(report);
        std::cout << doc.dump(1) << "\n";
        return report.empty() ? 0 : 1;
    }

    if (eval_cmd->parsed()) {
        const PersuasionMdp inst = read_instance(inst_path);
        const MarkovScheme scheme = read_markov_scheme(scheme_path);
        const MarkovEvaluation eval = evaluate_markov_scheme(inst, scheme, epsilon);
        json doc;
        doc["sender_value"] = eval.sender_value;
        doc["epsilon"] = epsilon;
        doc["violations"] = violations_json(eval.report);
        std::cout << doc.dump(1) << "\n";
        return 0;
    }

    if (sim_cmd->parsed()) {
        const PersuasionMdp inst = read_instance(inst_path);
        const PromiseScheme scheme = read_scheme(scheme_path);
        std::optional<DeviationPolicy> policy;
        if (!deviate_at.empty()) {
            const std::vector<int> parts = parse_int_list(deviate_at);
            if (parts.size() != 2)
                throw std::runtime_error("simulate: --deviate-at expects \"h,a\"");
            policy = DeviationPolicy{parts[0], parts[1]};
        }
        const SimulationReport report = simulate(inst, scheme, episodes, sim_seed, policy);
        json doc;
        doc["episodes"] = report.episodes;
        doc["seed"] = report.seed;
        doc["sender_mean"] = report.sender_mean;
        doc["sender_stderr"] = report.sender_stderr;
        doc["receiver_mean"] = report.receiver_mean;
        doc["receiver_stderr"] = report.receiver_stderr;
        if (report.has_deviation) {
            doc["deviate_at"] = {report.policy.trigger_step, report.policy.action};
            doc["deviated_sender_mean"] = report.deviated_sender_mean;
            doc["deviated_sender_stderr"] = report.deviated_sender_stderr;
            doc["deviated_receiver_mean"] = report.deviated_receiver_mean;
            doc["deviated_receiver_stderr"] = report.deviated_receiver_stderr;
        }
        if (!out_path.empty()) {
            json full = doc;
            full["episode_seeds"] = report.episode_seeds;
            write_text(out_path, full.dump(1) + "\n");
        }
        std::cout << doc.dump(1) << "\n";
        return 0;
    }

    if (sep_cmd->parsed()) {
        const PersuasionMdp inst = read_instance(inst_path);
        const SeparationResult result = separation_check(inst, markov_grid, epsilon);
        json doc;
        doc["dp_value"] = result.dp_value;
        doc["markov_value"] = result.markov_value;
        doc["gap"] = result.gap;
        doc["slack_bound"] = result.slack_bound;
        doc["candidates"] = result.candidates;
        std::cout << doc.dump(1) << "\n";
        return 0;
    }

    return 2;
}

}  // namespace

int cli_main(const std::vector<std::string>& args) {
    try {
        return run(args);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

int cli_main(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return cli_main(args);
}

}  // namespace persuasion
