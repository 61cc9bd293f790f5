#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace playbook {

// Counter-based pseudo-random stream (splitmix64). The i-th output is a pure
// function of (key, i), so two streams with distinct keys never interact, no
// matter how their consumers interleave. This is the property the simulation
// environments rely on for schedule-independent results.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t key, std::uint64_t counter = 0)
        : key_(key), counter_(counter) {}

    static std::uint64_t mix64(std::uint64_t x) {
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
        return x ^ (x >> 31);
    }

    /// Stable stream key from a seed plus textual labels (e.g. context and
    /// formation ids). FNV-1a over the bytes, then avalanched.
    static std::uint64_t derive_key(std::uint64_t seed, std::string_view a,
                                    std::string_view b = {}) {
        std::uint64_t h = 1469598103934665603ull;
        auto absorb = [&h](const void* data, std::size_t len) {
            const auto* p = static_cast<const unsigned char*>(data);
            for (std::size_t i = 0; i < len; ++i) {
                h ^= p[i];
                h *= 1099511628211ull;
            }
        };
        absorb(&seed, sizeof seed);
        absorb(a.data(), a.size());
        const unsigned char sep = 0x1f;
        absorb(&sep, 1);
        absorb(b.data(), b.size());
        return mix64(h);
    }

    std::uint64_t next_u64() {
        return mix64(key_ + (++counter_) * 0x9E3779B97F4A7C15ull);
    }

    /// Uniform in [0, 1).
    double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in (0, 1]; safe as a log argument.
    double uniform_pos() { return double((next_u64() >> 11) + 1) * 0x1.0p-53; }

    /// Uniform integer in [lo, hi], inclusive.
    int uniform_int(int lo, int hi) {
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<int>(next_u64() % span);
    }

    /// Standard normal via Box-Muller.
    double normal() {
        const double u1 = uniform_pos();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * std::numbers::pi * u2);
    }

    /// Gamma(shape, 1) via Marsaglia-Tsang; shape < 1 boosted through
    /// Gamma(shape + 1) * U^(1/shape).
    double gamma(double shape) {
        if (shape < 1.0) {
            const double g = gamma(shape + 1.0);
            return g * std::pow(uniform_pos(), 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x = normal();
            double v = 1.0 + c * x;
            if (v <= 0.0) continue;
            v = v * v * v;
            const double u = uniform_pos();
            const double x2 = x * x;
            if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
            if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

    double beta(double a, double b) {
        const double x = gamma(a);
        const double y = gamma(b);
        const double s = x + y;
        if (s <= 0.0) return a / (a + b);
        return x / s;
    }

    /// Count of successes in n Bernoulli(p) trials.
    int binomial(int n, double p) {
        int k = 0;
        for (int i = 0; i < n; ++i) {
            if (uniform() < p) ++k;
        }
        return k;
    }

    std::uint64_t counter() const { return counter_; }

private:
    std::uint64_t key_ = 0;
    std::uint64_t counter_ = 0;
};

}  // namespace playbook
