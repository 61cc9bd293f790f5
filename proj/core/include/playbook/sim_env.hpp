#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "playbook/beta_posterior.hpp"
#include "playbook/errors.hpp"

namespace playbook {

/// One (context, formation) pair with its true success probability.
/// Contexts are cluster ids during learning and team ids during audits.
struct ArmSpec {
    std::string context;
    std::string formation;
    double theta = 0.5;
};

/// How many corner-kicks one simulated game contains. Defaults to a uniform
/// draw around the typical 37 per game.
struct EnvConfig {
    int kicks_min = 33;
    int kicks_max = 41;
    std::uint64_t seed = 0;

    static EnvConfig fixed(int kicks, std::uint64_t seed) {
        return {kicks, kicks, seed};
    }

    void validate() const {
        if (kicks_min < 1 || kicks_min > kicks_max) {
            throw DomainError("corner-kick range must satisfy 1 <= lo <= hi");
        }
    }
};

/// Anything that can simulate one game and report successes. Implementations
/// must be deterministic given their seed and per-arm call sequence.
class Environment {
public:
    virtual ~Environment() = default;
    virtual GameObservation run(const std::string& context,
                                const std::string& formation) = 0;
    virtual bool has(const std::string& context,
                     const std::string& formation) const = 0;
};

/// Binomial world: each game draws its corner-kick count, then k successes
/// with the arm's theta. Every arm owns a counter-based substream, so
/// interleaving arms (or threads) never changes any arm's sequence.
class SyntheticEnv final : public Environment {
public:
    SyntheticEnv(std::vector<ArmSpec> arms, EnvConfig cfg);

    GameObservation run(const std::string& context,
                        const std::string& formation) override;
    bool has(const std::string& context,
             const std::string& formation) const override;

    const EnvConfig& config() const { return cfg_; }

private:
    struct ArmState {
        double theta = 0.5;
        std::uint64_t key = 0;
        std::uint64_t counter = 0;
    };
    std::map<std::pair<std::string, std::string>, ArmState> arms_;
    EnvConfig cfg_;
    std::mutex mutex_;
};

/// Fixed-block environment for the validation harness: one arm named
/// ("validation", "arm"), exactly `block_size` draws per run.
SyntheticEnv make_validation_env(double theta, int block_size,
                                 std::uint64_t seed);

/// Arm table JSON: {"arms": [{"context", "formation", "theta"}, ...]}
/// (a bare top-level array is also accepted).
std::vector<ArmSpec> load_arms(const std::string& path);
void save_arms(const std::vector<ArmSpec>& arms, const std::string& path);

}  // namespace playbook
