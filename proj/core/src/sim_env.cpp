#include "playbook/sim_env.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "playbook/rng.hpp"

namespace playbook {

using nlohmann::json;
using nlohmann::ordered_json;

SyntheticEnv::SyntheticEnv(std::vector<ArmSpec> arms, EnvConfig cfg)
    : cfg_(cfg) {
    cfg_.validate();
    for (const auto& arm : arms) {
        if (!(arm.theta > 0.0 && arm.theta < 1.0)) {
            throw DomainError("theta for (" + arm.context + ", " + arm.formation +
                              ") must be in (0, 1)");
        }
        ArmState state;
        state.theta = arm.theta;
        state.key = CounterRng::derive_key(cfg_.seed, arm.context, arm.formation);
        arms_[{arm.context, arm.formation}] = state;
    }
}

bool SyntheticEnv::has(const std::string& context,
                       const std::string& formation) const {
    return arms_.count({context, formation}) > 0;
}

GameObservation SyntheticEnv::run(const std::string& context,
                                  const std::string& formation) {
    std::lock_guard<std::mutex> lock(mutex_);
    const auto it = arms_.find({context, formation});
    if (it == arms_.end()) {
        throw UnknownArm("no arm registered for (" + context + ", " + formation +
                         ")");
    }
    ArmState& state = it->second;
    // Resume the arm's substream where the previous game left off.
    CounterRng rng(state.key, state.counter);

    GameObservation obs;
    obs.trials = (cfg_.kicks_min == cfg_.kicks_max)
                     ? cfg_.kicks_min
                     : rng.uniform_int(cfg_.kicks_min, cfg_.kicks_max);
    obs.successes = rng.binomial(obs.trials, state.theta);
    state.counter = rng.counter();
    return obs;
}

SyntheticEnv make_validation_env(double theta, int block_size,
                                 std::uint64_t seed) {
    if (block_size < 1) {
        throw DomainError("block size must be at least 1");
    }
    return SyntheticEnv({{"validation", "arm", theta}},
                        EnvConfig::fixed(block_size, seed));
}

std::vector<ArmSpec> load_arms(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open arm table: " + path);
    }
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ParseError("arm table " + path + ": " + e.what());
    }
    const json* records = &doc;
    if (doc.is_object()) {
        if (!doc.contains("arms")) {
            throw SchemaError("arm table " + path + ": missing 'arms'");
        }
        records = &doc["arms"];
    }
    if (!records->is_array()) {
        throw SchemaError("arm table " + path + ": 'arms' must be an array");
    }
    std::vector<ArmSpec> out;
    out.reserve(records->size());
    for (std::size_t i = 0; i < records->size(); ++i) {
        const json& r = (*records)[i];
        const std::string where = "arms[" + std::to_string(i) + "]";
        if (!r.is_object() || !r.contains("context") || !r.contains("formation") ||
            !r.contains("theta")) {
            throw SchemaError(where + ": need context, formation, theta");
        }
        ArmSpec arm;
        try {
            arm.context = r["context"].get<std::string>();
            arm.formation = r["formation"].get<std::string>();
            arm.theta = r["theta"].get<double>();
        } catch (const json::exception& e) {
            throw SchemaError(where + ": " + e.what());
        }
        out.push_back(std::move(arm));
    }
    return out;
}

void save_arms(const std::vector<ArmSpec>& arms, const std::string& path) {
    ordered_json doc;
    doc["arms"] = ordered_json::array();
    for (const auto& arm : arms) {
        doc["arms"].push_back(ordered_json{{"context", arm.context},
                                           {"formation", arm.formation},
                                           {"theta", arm.theta}});
    }
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write arm table: " + path);
    }
    out << doc.dump(2) << '\n';
}

}  // namespace playbook
