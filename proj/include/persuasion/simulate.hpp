#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "persuasion/mdp.hpp"
#include "persuasion/scheme.hpp"

namespace persuasion {

/// Single-step deviation: at trigger_step the receiver plays `action` instead
/// of the recommendation; afterwards recommendations stop and the receiver
/// plays the deviation-greedy action.
struct DeviationPolicy {
    int trigger_step = 1;  // 1-based
    int action = 0;
};

struct SimulationReport {
    long episodes = 0;
    std::uint64_t seed = 0;
    double sender_mean = 0.0;
    double sender_stderr = 0.0;
    double receiver_mean = 0.0;
    double receiver_stderr = 0.0;
    std::vector<std::uint64_t> episode_seeds;

    // Filled when a deviation policy was injected: the same episode seeds
    // replayed with the deviation, for direct comparison.
    bool has_deviation = false;
    DeviationPolicy policy;
    double deviated_sender_mean = 0.0;
    double deviated_sender_stderr = 0.0;
    double deviated_receiver_mean = 0.0;
    double deviated_receiver_stderr = 0.0;
};

/// Sender-receiver interaction rollouts: draw the start state, decode promises
/// incrementally, sample observations and recommendations, obey (or deviate
/// per policy), sample transitions. Deterministic in (seed, episode index).
SimulationReport simulate(const PersuasionMdp& inst, const PromiseScheme& scheme,
                          long episodes, std::uint64_t seed,
                          const std::optional<DeviationPolicy>& deviation_policy =
                              std::nullopt);

}  // namespace persuasion
