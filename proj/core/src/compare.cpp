#include "playbook/compare.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "playbook/rng.hpp"

namespace playbook {

namespace {

HdiInterval narrowest_window(std::vector<double>& sorted_values, double mass) {
    const std::size_t n = sorted_values.size();
    const auto k = static_cast<std::size_t>(std::ceil(mass * double(n)));
    const std::size_t take = std::clamp<std::size_t>(k, 1, n);
    std::size_t best = 0;
    double best_width = sorted_values[take - 1] - sorted_values[0];
    for (std::size_t i = 1; i + take <= n; ++i) {
        const double w = sorted_values[i + take - 1] - sorted_values[i];
        if (w < best_width) {
            best_width = w;
            best = i;
        }
    }
    return {sorted_values[best], sorted_values[best + take - 1], mass};
}

DiffEstimate monte_carlo_diff(const BetaPosterior& p1, const BetaPosterior& p2,
                              double mass, long draws, std::uint64_t seed) {
    CounterRng first(CounterRng::derive_key(seed, "diff", "first"));
    CounterRng second(CounterRng::derive_key(seed, "diff", "second"));
    std::vector<double> diffs(static_cast<std::size_t>(draws));
    for (auto& d : diffs) {
        d = first.beta(p1.alpha, p1.beta) - second.beta(p2.alpha, p2.beta);
    }
    std::sort(diffs.begin(), diffs.end());
    DiffEstimate est;
    est.hdi = narrowest_window(diffs, mass);
    est.method = DiffMethod::MonteCarlo;
    est.sample_count = draws;
    est.seed = seed;
    return est;
}

DiffEstimate grid_diff(const BetaPosterior& p1, const BetaPosterior& p2,
                       double mass, int grid_points, std::uint64_t seed) {
    const int g = grid_points;
    const HdiInterval h1 = hdi(p1, mass);
    const HdiInterval h2 = hdi(p2, mass);
    std::vector<double> x1(g), w1(g), x2(g), w2(g);
    const double s1 = h1.width() / g;
    const double s2 = h2.width() / g;
    for (int i = 0; i < g; ++i) {
        x1[i] = h1.lo + (i + 0.5) * s1;
        w1[i] = pdf(p1, x1[i]);
        x2[i] = h2.lo + (i + 0.5) * s2;
        w2[i] = pdf(p2, x2[i]);
    }

    struct WeightedDiff {
        double value;
        double weight;
    };
    std::vector<WeightedDiff> diffs;
    diffs.reserve(std::size_t(g) * g);
    double total = 0.0;
    for (int i = 0; i < g; ++i) {
        for (int j = 0; j < g; ++j) {
            const double w = w1[i] * w2[j];
            diffs.push_back({x1[i] - x2[j], w});
            total += w;
        }
    }
    std::sort(diffs.begin(), diffs.end(),
              [](const WeightedDiff& a, const WeightedDiff& b) {
                  return a.value < b.value;
              });

    // Narrowest window holding `mass` of the total weight, two pointers.
    const double target = mass * total;
    double best_lo = diffs.front().value;
    double best_hi = diffs.back().value;
    double best_width = best_hi - best_lo;
    double acc = 0.0;
    std::size_t right = 0;
    for (std::size_t left = 0; left < diffs.size(); ++left) {
        if (left > 0) acc -= diffs[left - 1].weight;
        while (right < diffs.size() && acc < target) {
            acc += diffs[right].weight;
            ++right;
        }
        if (acc < target) break;
        const double w = diffs[right - 1].value - diffs[left].value;
        if (w < best_width) {
            best_width = w;
            best_lo = diffs[left].value;
            best_hi = diffs[right - 1].value;
        }
    }

    DiffEstimate est;
    est.hdi = {best_lo, best_hi, mass};
    est.method = DiffMethod::HdiGrid;
    est.sample_count = static_cast<long>(g) * g;
    est.seed = seed;
    return est;
}

}  // namespace

std::string to_string(ComparisonOutcome o) {
    switch (o) {
        case ComparisonOutcome::FirstBetter: return "first-better";
        case ComparisonOutcome::SecondBetter: return "second-better";
        case ComparisonOutcome::Equal: return "equal";
        case ComparisonOutcome::Undecided: return "undecided";
    }
    return "undecided";
}

DiffEstimate difference_hdi(const BetaPosterior& p1, const BetaPosterior& p2,
                            double mass, DiffMethod method, long draws,
                            std::uint64_t seed, int grid_points) {
    if (!(mass > 0.0 && mass < 1.0)) {
        throw DomainError("interval mass must be in (0, 1)");
    }
    if (method == DiffMethod::MonteCarlo) {
        if (draws < 10000) {
            throw InsufficientDraws("monte-carlo difference needs >= 10^4 draws");
        }
        return monte_carlo_diff(p1, p2, mass, draws, seed);
    }
    if (grid_points < 2) {
        throw DomainError("grid method needs at least 2 points");
    }
    return grid_diff(p1, p2, mass, grid_points, seed);
}

ComparisonOutcome decide(const DiffEstimate& diff, const RopeInterval& rope) {
    rope.validate();
    const auto& h = diff.hdi;
    if (h.lo >= rope.lo && h.hi <= rope.hi) return ComparisonOutcome::Equal;
    if (h.lo >= 0.0) return ComparisonOutcome::FirstBetter;
    if (h.hi <= 0.0) return ComparisonOutcome::SecondBetter;
    return ComparisonOutcome::Undecided;
}

PairPick tie_break(const BetaPosterior& p1, const BetaPosterior& p2) {
    const double v1 = variance(p1);
    const double v2 = variance(p2);
    if (v1 < v2) return PairPick::First;
    if (v2 < v1) return PairPick::Second;
    return mean(p1) >= mean(p2) ? PairPick::First : PairPick::Second;
}

Ranking rank(const std::vector<BetaPosterior>& posteriors,
             const std::vector<std::vector<ComparisonOutcome>>& outcomes) {
    const int k = static_cast<int>(posteriors.size());
    if (static_cast<int>(outcomes.size()) != k) {
        throw DimensionMismatch("outcome matrix does not match posterior count");
    }
    Ranking r;
    r.wins.assign(k, std::vector<double>(k, 0.0));
    for (int i = 0; i < k; ++i) {
        if (static_cast<int>(outcomes[i].size()) != k) {
            throw DimensionMismatch("outcome matrix is not square");
        }
        for (int j = 0; j < k; ++j) {
            if (i == j) continue;
            switch (outcomes[i][j]) {
                case ComparisonOutcome::FirstBetter: r.wins[i][j] = 1.0; break;
                case ComparisonOutcome::Equal: r.wins[i][j] = 0.5; break;
                default: break;
            }
        }
    }
    std::vector<double> score(k, 0.0);
    for (int i = 0; i < k; ++i) {
        score[i] = std::accumulate(r.wins[i].begin(), r.wins[i].end(), 0.0);
    }
    r.order.resize(k);
    std::iota(r.order.begin(), r.order.end(), 0);
    std::sort(r.order.begin(), r.order.end(), [&](int a, int b) {
        if (score[a] != score[b]) return score[a] > score[b];
        const double ma = mean(posteriors[a]);
        const double mb = mean(posteriors[b]);
        if (ma != mb) return ma > mb;
        const double va = variance(posteriors[a]);
        const double vb = variance(posteriors[b]);
        if (va != vb) return va < vb;
        return a < b;
    });
    return r;
}

std::string comparison_log_line(int round, int i, int j,
                                const DiffEstimate& est,
                                ComparisonOutcome outcome) {
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "{\"round\":%d,\"i\":%d,\"j\":%d,\"hdi_lo\":%.9g,"
                  "\"hdi_hi\":%.9g,\"outcome\":\"%s\"}",
                  round, i, j, est.hdi.lo, est.hdi.hi,
                  to_string(outcome).c_str());
    return buf;
}

}  // namespace playbook
