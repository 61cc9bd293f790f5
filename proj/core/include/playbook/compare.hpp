#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "playbook/beta_posterior.hpp"

namespace playbook {

/// Region of practical equivalence around zero for success-probability
/// differences.
struct RopeInterval {
    double lo = -0.015;
    double hi = +0.015;

    void validate() const {
        if (!(lo < 0.0 && 0.0 < hi)) {
            throw DomainError("ROPE must straddle zero");
        }
    }
};

enum class DiffMethod {
    MonteCarlo,  // sample pairs from the full posteriors
    HdiGrid,     // discretize each posterior's own HDI, weight by density
};

/// HDI of the difference distribution p1 - p2, plus how it was computed.
struct DiffEstimate {
    HdiInterval hdi{-1.0, 1.0, 0.95};
    DiffMethod method = DiffMethod::MonteCarlo;
    long sample_count = 0;
    std::uint64_t seed = 0;
};

enum class ComparisonOutcome { FirstBetter, SecondBetter, Equal, Undecided };

std::string to_string(ComparisonOutcome o);

/// Narrowest interval holding `mass` of the difference distribution.
/// Monte Carlo draws `draws` independent pairs (at least 10^4); the grid
/// method weighs a grid_points^2 lattice over the two marginal HDIs by
/// density. Both are deterministic given their inputs.
DiffEstimate difference_hdi(const BetaPosterior& p1, const BetaPosterior& p2,
                            double mass = 0.95,
                            DiffMethod method = DiffMethod::MonteCarlo,
                            long draws = 200000, std::uint64_t seed = 0,
                            int grid_points = 512);

/// Equal if the interval sits inside the ROPE (checked first, so a tiny
/// all-positive interval still counts as equal); then direction by sign;
/// otherwise undecided.
ComparisonOutcome decide(const DiffEstimate& diff, const RopeInterval& rope);

enum class PairPick { First, Second };

/// Lower variance wins; exact variance tie goes to the higher mean; full tie
/// to the first argument.
PairPick tie_break(const BetaPosterior& p1, const BetaPosterior& p2);

struct Ranking {
    std::vector<int> order;                 // posterior indices, best first
    std::vector<std::vector<double>> wins;  // pairwise win credit
};

/// Orders posteriors by pairwise win count (equal splits the point), then by
/// mean, then by lower variance. `outcomes` is a full matrix where
/// outcomes[i][j] compares posterior i (first) against j (second).
Ranking rank(const std::vector<BetaPosterior>& posteriors,
             const std::vector<std::vector<ComparisonOutcome>>& outcomes);

/// One line of the comparison log: JSON {round, i, j, hdi_lo, hdi_hi, outcome}.
std::string comparison_log_line(int round, int i, int j,
                                const DiffEstimate& est,
                                ComparisonOutcome outcome);

}  // namespace playbook
