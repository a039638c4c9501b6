#pragma once

#include <string>
#include <vector>

namespace persuasion {

struct MdpLabels {
    std::vector<std::string> states;
    std::vector<std::string> actions;
    std::vector<std::string> observations;
};

/// A finite-horizon Bayesian persuasion instance: an MDP played by the
/// receiver, private observations drawn per state for the sender, and
/// per-step reward tables for both agents. All tables are dense and indexed
/// with 0-based step h in [0, H).
struct PersuasionMdp {
    int num_states = 0;
    int num_actions = 0;
    int num_observations = 0;
    int horizon = 0;

    std::vector<double> sender_reward;    // [h][s][a][theta]
    std::vector<double> receiver_reward;  // [h][s][a][theta]
    std::vector<double> transition;       // [h][s][a][theta][s']
    std::vector<double> prior;            // [h][s][theta]
    std::vector<double> initial;          // [s]
    MdpLabels labels;                     // optional display names

    static PersuasionMdp zeros(int num_states, int num_actions,
                               int num_observations, int horizon);

    std::size_t reward_index(int h, int s, int a, int theta) const {
        return ((static_cast<std::size_t>(h) * num_states + s) * num_actions + a) *
                   num_observations +
               theta;
    }
    std::size_t transition_index(int h, int s, int a, int theta, int s2) const {
        return reward_index(h, s, a, theta) * num_states + s2;
    }
    std::size_t prior_index(int h, int s, int theta) const {
        return (static_cast<std::size_t>(h) * num_states + s) * num_observations +
               theta;
    }

    double sender_r(int h, int s, int a, int theta) const {
        return sender_reward[reward_index(h, s, a, theta)];
    }
    double receiver_r(int h, int s, int a, int theta) const {
        return receiver_reward[reward_index(h, s, a, theta)];
    }
    double p(int h, int s, int a, int theta, int s2) const {
        return transition[transition_index(h, s, a, theta, s2)];
    }
    double mu(int h, int s, int theta) const {
        return prior[prior_index(h, s, theta)];
    }
    double beta(int s) const { return initial[s]; }

    /// Display name helpers; fall back to generated names when labels are absent.
    std::string state_name(int s) const;
    std::string action_name(int a) const;
    std::string observation_name(int theta) const;
};

/// Checks every instance invariant (normalization of transition rows, priors
/// and the initial distribution; reward ranges) and returns one human-readable
/// description per violation. An empty list means the instance is valid.
std::vector<std::string> validate_instance(const PersuasionMdp& inst);

/// Receiver values after a deviation, when the sender has stopped issuing
/// recommendations: value[h][s] for h in [1, H+1] with value[H+1][.] = 0, and
/// the maximizing action per (h, s) with ties broken by lowest action index.
struct DeviationValues {
    int horizon = 0;
    int num_states = 0;
    std::vector<double> value;     // (H+1) x S, row h-1; row H is all zeros
    std::vector<int> best_action;  // H x S

    double at(int h, int s) const {  // h in [1, H+1]
        return value[static_cast<std::size_t>(h - 1) * num_states + s];
    }
    int action(int h, int s) const {  // h in [1, H]
        return best_action[static_cast<std::size_t>(h - 1) * num_states + s];
    }
};

DeviationValues deviation_values(const PersuasionMdp& inst);

/// Alternating state/action sequence (s_1, a_1, ..., s_h). Alternation is
/// structural: states.size() == actions.size() + 1.
struct History {
    std::vector<int> states;
    std::vector<int> actions;

    History() = default;
    explicit History(int s1) : states{s1} {}

    int step() const { return static_cast<int>(states.size()); }
    int current_state() const { return states.back(); }
    void extend(int a, int s2) {
        actions.push_back(a);
        states.push_back(s2);
    }
    std::string to_string() const;
};

/// Instance file I/O (structured-text documents, see README for the schema).
/// read_instance throws std::runtime_error on parse errors (naming the field)
/// and on validation violations; write/read round-trips numeric content exactly.
PersuasionMdp read_instance(const std::string& path);
void write_instance(const PersuasionMdp& inst, const std::string& path);

std::string instance_to_text(const PersuasionMdp& inst);
PersuasionMdp instance_from_text(const std::string& text);

}  // namespace persuasion
