#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "playbook/learner.hpp"

namespace playbook {

/// Half-open range [lo, hi) of success-probability differences.
struct DiffBin {
    double lo = 0.0;
    double hi = 0.0;
};

/// The equal zone [0, 0.015) aligned with the ROPE half-width, then
/// width-0.01 bins up to 0.105. Ten bins total.
std::vector<DiffBin> default_bins();

struct PairSample {
    double theta1 = 0.0;
    double theta2 = 0.0;
    int bin = 0;
};

/// Draws pairs_per_bin parameter pairs per bin: theta1 uniform in
/// [0.05, 0.90], the difference uniform in the bin, redrawn while
/// theta2 >= 0.95, operand order randomized.
std::vector<PairSample> generate_pairs(const std::vector<DiffBin>& bins,
                                       int pairs_per_bin, std::uint64_t seed);

struct PairRun {
    int bin = 0;
    double theta1 = 0.0;
    double theta2 = 0.0;
    std::uint64_t seed = 0;  // master seed of the replication
    int samples_per_arm = 0;  // blocks times block size
    ComparisonOutcome outcome = ComparisonOutcome::Undecided;
    bool correct = false;
};

struct BinSummary {
    DiffBin bin;
    int pair_count = 0;
    int correct_count = 0;

    std::optional<double> rate() const {
        if (pair_count == 0) return std::nullopt;
        return double(correct_count) / double(pair_count);
    }
};

struct ValidationReport {
    int block_size = 20;
    std::vector<DiffBin> bins;
    std::vector<PairRun> runs;

    std::vector<BinSummary> summarize() const;
};

/// Runs the two-arm sequential procedure on every pair with fixed-size
/// binomial blocks. A pair is correct when the final outcome matches the true
/// theta ordering; in the equal zone (the bin starting at 0) only an Equal
/// outcome counts. Pairs are independent, so `workers` threads may split them.
ValidationReport run_validation(const std::vector<PairSample>& pairs,
                                const std::vector<DiffBin>& bins,
                                int block_size, const LearningConfig& cfg,
                                int workers = 1);

/// Concatenates runs of a replication into an existing report.
void merge_runs(ValidationReport& into, const ValidationReport& from);

/// Writes rates.csv, samples.csv, and summary.json into out_dir.
void emit_report(const ValidationReport& report, const std::string& out_dir);

}  // namespace playbook
