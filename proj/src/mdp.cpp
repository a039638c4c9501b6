#include "persuasion/mdp.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace persuasion {

namespace {
constexpr double kNormTol = 1e-9;

std::string coord(int h, int s) {
    return "(h=" + std::to_string(h + 1) + ", s=" + std::to_string(s) + ")";
}
std::string coord(int h, int s, int a, int theta) {
    return "(h=" + std::to_string(h + 1) + ", s=" + std::to_string(s) +
           ", a=" + std::to_string(a) + ", theta=" + std::to_string(theta) + ")";
}
}  // namespace

PersuasionMdp PersuasionMdp::zeros(int num_states, int num_actions,
                                   int num_observations, int horizon) {
    PersuasionMdp inst;
    inst.num_states = num_states;
    inst.num_actions = num_actions;
    inst.num_observations = num_observations;
    inst.horizon = horizon;
    const std::size_t hsat = static_cast<std::size_t>(horizon) * num_states *
                             num_actions * num_observations;
    inst.sender_reward.assign(hsat, 0.0);
    inst.receiver_reward.assign(hsat, 0.0);
    inst.transition.assign(hsat * num_states, 0.0);
    inst.prior.assign(static_cast<std::size_t>(horizon) * num_states * num_observations,
                      0.0);
    inst.initial.assign(num_states, 0.0);
    return inst;
}

std::string PersuasionMdp::state_name(int s) const {
    if (s < static_cast<int>(labels.states.size())) return labels.states[s];
    return "s" + std::to_string(s);
}
std::string PersuasionMdp::action_name(int a) const {
    if (a < static_cast<int>(labels.actions.size())) return labels.actions[a];
    return "a" + std::to_string(a);
}
std::string PersuasionMdp::observation_name(int theta) const {
    if (theta < static_cast<int>(labels.observations.size()))
        return labels.observations[theta];
    return "th" + std::to_string(theta);
}

std::vector<std::string> validate_instance(const PersuasionMdp& inst) {
    std::vector<std::string> out;
    if (inst.num_states <= 0 || inst.num_actions <= 0 || inst.num_observations <= 0 ||
        inst.horizon <= 0) {
        out.push_back("dimensions must be positive");
        return out;
    }
    const std::size_t hsat = static_cast<std::size_t>(inst.horizon) * inst.num_states *
                             inst.num_actions * inst.num_observations;
    if (inst.sender_reward.size() != hsat || inst.receiver_reward.size() != hsat ||
        inst.transition.size() != hsat * inst.num_states ||
        inst.prior.size() != static_cast<std::size_t>(inst.horizon) * inst.num_states *
                                 inst.num_observations ||
        inst.initial.size() != static_cast<std::size_t>(inst.num_states)) {
        out.push_back("table sizes do not match the declared dimensions");
        return out;
    }

    for (int h = 0; h < inst.horizon; ++h) {
        for (int s = 0; s < inst.num_states; ++s) {
            for (int a = 0; a < inst.num_actions; ++a) {
                for (int t = 0; t < inst.num_observations; ++t) {
                    const double rs = inst.sender_r(h, s, a, t);
                    const double rr = inst.receiver_r(h, s, a, t);
                    if (!(rs >= 0.0 && rs <= 1.0) || !std::isfinite(rs))
                        out.push_back("sender reward out of range [0,1] at " +
                                      coord(h, s, a, t));
                    if (!(rr >= 0.0 && rr <= 1.0) || !std::isfinite(rr))
                        out.push_back("receiver reward out of range [0,1] at " +
                                      coord(h, s, a, t));
                    double sum = 0.0;
                    bool negative = false;
                    for (int s2 = 0; s2 < inst.num_states; ++s2) {
                        const double p = inst.p(h, s, a, t, s2);
                        if (p < 0.0 || !std::isfinite(p)) negative = true;
                        sum += p;
                    }
                    if (negative)
                        out.push_back("transition row has a negative entry at " +
                                      coord(h, s, a, t));
                    if (std::abs(sum - 1.0) > kNormTol)
                        out.push_back("transition row not normalized at " +
                                      coord(h, s, a, t) + ": sum=" + std::to_string(sum));
                }
            }
            double mu_sum = 0.0;
            bool mu_negative = false;
            for (int t = 0; t < inst.num_observations; ++t) {
                const double m = inst.mu(h, s, t);
                if (m < 0.0 || !std::isfinite(m)) mu_negative = true;
                mu_sum += m;
            }
            if (mu_negative)
                out.push_back("prior has a negative entry at " + coord(h, s));
            if (std::abs(mu_sum - 1.0) > kNormTol)
                out.push_back("prior not normalized at " + coord(h, s) +
                              ": sum=" + std::to_string(mu_sum));
        }
    }

    double beta_sum = 0.0;
    for (int s = 0; s < inst.num_states; ++s) {
        const double b = inst.beta(s);
        if (b < 0.0 || !std::isfinite(b))
            out.push_back("initial distribution has a negative entry at s=" +
                          std::to_string(s));
        beta_sum += b;
    }
    if (std::abs(beta_sum - 1.0) > kNormTol)
        out.push_back("initial distribution not normalized: sum=" +
                      std::to_string(beta_sum));
    return out;
}

DeviationValues deviation_values(const PersuasionMdp& inst) {
    DeviationValues dev;
    dev.horizon = inst.horizon;
    dev.num_states = inst.num_states;
    dev.value.assign(static_cast<std::size_t>(inst.horizon + 1) * inst.num_states, 0.0);
    dev.best_action.assign(static_cast<std::size_t>(inst.horizon) * inst.num_states, 0);

    for (int h = inst.horizon; h >= 1; --h) {
        for (int s = 0; s < inst.num_states; ++s) {
            double best = -1.0;
            int best_a = 0;
            for (int a = 0; a < inst.num_actions; ++a) {
                double val = 0.0;
                for (int t = 0; t < inst.num_observations; ++t) {
                    const double m = inst.mu(h - 1, s, t);
                    if (m == 0.0) continue;
                    double cont = 0.0;
                    for (int s2 = 0; s2 < inst.num_states; ++s2)
                        cont += inst.p(h - 1, s, a, t, s2) * dev.at(h + 1, s2);
                    val += m * (inst.receiver_r(h - 1, s, a, t) + cont);
                }
                if (val > best) {  // strict: ties keep the lowest action index
                    best = val;
                    best_a = a;
                }
            }
            dev.value[static_cast<std::size_t>(h - 1) * inst.num_states + s] = best;
            dev.best_action[static_cast<std::size_t>(h - 1) * inst.num_states + s] =
                best_a;
        }
    }
    return dev;
}

std::string History::to_string() const {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < states.size(); ++i) {
        if (i > 0) os << ", a" << actions[i - 1] << ", ";
        os << "s" << states[i];
    }
    os << ")";
    return os.str();
}

// ---------------------------------------------------------------------------
// Instance file I/O
// ---------------------------------------------------------------------------

namespace {

using nlohmann::json;

json require_field(const json& doc, const std::string& name) {
    if (!doc.contains(name))
        throw std::runtime_error("instance file: missing required field \"" + name +
                                 "\"");
    return doc.at(name);
}

std::vector<std::string> name_array(const json& doc, const std::string& name) {
    const json arr = require_field(doc, name);
    if (!arr.is_array())
        throw std::runtime_error("instance file: field \"" + name +
                                 "\" must be an array of names");
    std::vector<std::string> out;
    for (const auto& v : arr) out.push_back(v.get<std::string>());
    return out;
}

void flatten_numbers(const json& node, const std::string& field,
                     const std::vector<int>& dims, std::size_t depth,
                     std::vector<double>& out) {
    if (depth == dims.size()) {
        if (!node.is_number())
            throw std::runtime_error("instance file: field \"" + field +
                                     "\" has a non-numeric leaf");
        out.push_back(node.get<double>());
        return;
    }
    if (!node.is_array() || static_cast<int>(node.size()) != dims[depth])
        throw std::runtime_error("instance file: field \"" + field + "\" expects " +
                                 std::to_string(dims[depth]) + " entries at depth " +
                                 std::to_string(depth));
    for (const auto& child : node) flatten_numbers(child, field, dims, depth + 1, out);
}

std::vector<double> read_table(const json& doc, const std::string& field,
                               const std::vector<int>& dims) {
    std::vector<double> out;
    std::size_t expected = 1;
    for (int d : dims) expected *= static_cast<std::size_t>(d);
    out.reserve(expected);
    flatten_numbers(require_field(doc, field), field, dims, 0, out);
    return out;
}

json nest_numbers(const std::vector<double>& flat, const std::vector<int>& dims,
                  std::size_t depth, std::size_t& pos) {
    if (depth == dims.size()) return json(flat[pos++]);
    json arr = json::array();
    for (int i = 0; i < dims[depth]; ++i)
        arr.push_back(nest_numbers(flat, dims, depth + 1, pos));
    return arr;
}

json table_json(const std::vector<double>& flat, const std::vector<int>& dims) {
    std::size_t pos = 0;
    return nest_numbers(flat, dims, 0, pos);
}

}  // namespace

std::string instance_to_text(const PersuasionMdp& inst) {
    json doc;
    doc["horizon"] = inst.horizon;
    json states = json::array(), actions = json::array(), observations = json::array();
    for (int s = 0; s < inst.num_states; ++s) states.push_back(inst.state_name(s));
    for (int a = 0; a < inst.num_actions; ++a) actions.push_back(inst.action_name(a));
    for (int t = 0; t < inst.num_observations; ++t)
        observations.push_back(inst.observation_name(t));
    doc["states"] = states;
    doc["actions"] = actions;
    doc["observations"] = observations;

    const int H = inst.horizon, S = inst.num_states, A = inst.num_actions,
              T = inst.num_observations;
    doc["beta"] = table_json(inst.initial, {S});
    doc["mu"] = table_json(inst.prior, {H, S, T});
    doc["sender_reward"] = table_json(inst.sender_reward, {H, S, A, T});
    doc["receiver_reward"] = table_json(inst.receiver_reward, {H, S, A, T});
    doc["transition"] = table_json(inst.transition, {H, S, A, T, S});
    return doc.dump(1) + "\n";
}

PersuasionMdp instance_from_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(std::string("instance file: ") + e.what());
    }

    PersuasionMdp inst;
    const json horizon = require_field(doc, "horizon");
    if (!horizon.is_number_integer() || horizon.get<int>() < 1)
        throw std::runtime_error("instance file: field \"horizon\" must be an integer >= 1");
    inst.horizon = horizon.get<int>();
    inst.labels.states = name_array(doc, "states");
    inst.labels.actions = name_array(doc, "actions");
    inst.labels.observations = name_array(doc, "observations");
    inst.num_states = static_cast<int>(inst.labels.states.size());
    inst.num_actions = static_cast<int>(inst.labels.actions.size());
    inst.num_observations = static_cast<int>(inst.labels.observations.size());
    if (inst.num_states == 0 || inst.num_actions == 0 || inst.num_observations == 0)
        throw std::runtime_error("instance file: name arrays must be non-empty");

    const int H = inst.horizon, S = inst.num_states, A = inst.num_actions,
              T = inst.num_observations;
    inst.initial = read_table(doc, "beta", {S});
    inst.prior = read_table(doc, "mu", {H, S, T});
    inst.sender_reward = read_table(doc, "sender_reward", {H, S, A, T});
    inst.receiver_reward = read_table(doc, "receiver_reward", {H, S, A, T});
    inst.transition = read_table(doc, "transition", {H, S, A, T, S});

    const std::vector<std::string> violations = validate_instance(inst);
    if (!violations.empty()) {
        std::string msg = "instance file: validation failed:";
        for (const auto& v : violations) msg += "\n  - " + v;
        throw std::runtime_error(msg);
    }
    return inst;
}

PersuasionMdp read_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open instance file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return instance_from_text(buf.str());
}

void write_instance(const PersuasionMdp& inst, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write instance file: " + path);
    out << instance_to_text(inst);
}

}  // namespace persuasion
