#include "persuasion/simulate.hpp"

#include <cmath>
#include <span>
#include <stdexcept>

#include "persuasion/rng.hpp"

namespace persuasion {

namespace {

struct EpisodeOutcome {
    double sender = 0.0;
    double receiver = 0.0;
};

EpisodeOutcome run_episode(const PersuasionMdp& inst, const PromiseScheme& scheme,
                           const DeviationValues& deviation, std::uint64_t episode_seed,
                           const DeviationPolicy* policy) {
    const int S = inst.num_states, A = inst.num_actions, T = inst.num_observations;
    SeededRng rng(episode_seed);

    EpisodeOutcome out;
    std::vector<double> row(S);
    for (int s = 0; s < S; ++s) row[s] = inst.beta(s);
    int state = rng.categorical(row);
    int promise = 0;
    bool deviated = false;

    std::vector<double> theta_row(T), action_row(A);
    for (int h = 1; h <= inst.horizon; ++h) {
        for (int t = 0; t < T; ++t) theta_row[t] = inst.mu(h - 1, state, t);
        const int theta = rng.categorical(theta_row);

        int recommended = -1;
        int played;
        if (!deviated) {
            const PromiseCell* cell = scheme.find_cell(h, state, promise);
            if (cell == nullptr)
                throw std::runtime_error("simulate: promise closure violated at step " +
                                         std::to_string(h));
            for (int a = 0; a < A; ++a) action_row[a] = cell->rec(theta, a, A);
            recommended = rng.categorical(action_row);
            played = (policy != nullptr && h == policy->trigger_step) ? policy->action
                                                                      : recommended;
        } else {
            played = deviation.action(h, state);
        }

        out.sender += inst.sender_r(h - 1, state, played, theta);
        out.receiver += inst.receiver_r(h - 1, state, played, theta);

        if (h == inst.horizon) break;
        for (int s2 = 0; s2 < S; ++s2) row[s2] = inst.p(h - 1, state, played, theta, s2);
        const int next_state = rng.categorical(row);

        if (!deviated) {
            const PromiseCell* cell = scheme.find_cell(h, state, promise);
            promise = cell->next(recommended, next_state, S);
            if (played != recommended) deviated = true;
        }
        state = next_state;
    }
    return out;
}

struct Moments {
    double mean = 0.0;
    double stderr_ = 0.0;
};

Moments moments(const std::vector<double>& xs) {
    Moments m;
    const double n = static_cast<double>(xs.size());
    for (double x : xs) m.mean += x;
    m.mean /= n;
    if (xs.size() > 1) {
        double ss = 0.0;
        for (double x : xs) ss += (x - m.mean) * (x - m.mean);
        m.stderr_ = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
    }
    return m;
}

}  // namespace

SimulationReport simulate(const PersuasionMdp& inst, const PromiseScheme& scheme,
                          long episodes, std::uint64_t seed,
                          const std::optional<DeviationPolicy>& deviation_policy) {
    if (episodes < 1) throw std::invalid_argument("simulate: episodes must be >= 1");
    if (scheme.horizon != inst.horizon || scheme.num_states != inst.num_states ||
        scheme.num_actions != inst.num_actions ||
        scheme.num_observations != inst.num_observations)
        throw std::invalid_argument("simulate: scheme/instance dimension mismatch");
    if (deviation_policy) {
        if (deviation_policy->trigger_step < 1 ||
            deviation_policy->trigger_step > inst.horizon ||
            deviation_policy->action < 0 || deviation_policy->action >= inst.num_actions)
            throw std::invalid_argument("simulate: deviation policy out of range");
    }

    const DeviationValues deviation = deviation_values(inst);

    SimulationReport report;
    report.episodes = episodes;
    report.seed = seed;
    report.episode_seeds.reserve(episodes);

    std::vector<double> sender(episodes), receiver(episodes);
    std::vector<double> dev_sender, dev_receiver;
    if (deviation_policy) {
        dev_sender.resize(episodes);
        dev_receiver.resize(episodes);
    }

    for (long e = 0; e < episodes; ++e) {
        const std::uint64_t episode_seed = splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(e)));
        report.episode_seeds.push_back(episode_seed);
        const EpisodeOutcome obedient = run_episode(inst, scheme, deviation, episode_seed, nullptr);
        sender[e] = obedient.sender;
        receiver[e] = obedient.receiver;
        if (deviation_policy) {
            const EpisodeOutcome dev =
                run_episode(inst, scheme, deviation, episode_seed, &*deviation_policy);
            dev_sender[e] = dev.sender;
            dev_receiver[e] = dev.receiver;
        }
    }

    const Moments ms = moments(sender), mr = moments(receiver);
    report.sender_mean = ms.mean;
    report.sender_stderr = ms.stderr_;
    report.receiver_mean = mr.mean;
    report.receiver_stderr = mr.stderr_;
    if (deviation_policy) {
        report.has_deviation = true;
        report.policy = *deviation_policy;
        const Moments ds = moments(dev_sender), dr = moments(dev_receiver);
        report.deviated_sender_mean = ds.mean;
        report.deviated_sender_stderr = ds.stderr_;
        report.deviated_receiver_mean = dr.mean;
        report.deviated_receiver_stderr = dr.stderr_;
    }
    return report;
}

}  // namespace persuasion
