#include "playbook/validation.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "playbook/rng.hpp"

namespace playbook {

using nlohmann::ordered_json;

namespace {

constexpr double kTheta1Min = 0.05;
constexpr double kTheta1Max = 0.90;
constexpr double kTheta2Cap = 0.95;

void validate_bins(const std::vector<DiffBin>& bins) {
    if (bins.empty()) {
        throw EmptyInput("need at least one difference bin");
    }
    for (const auto& b : bins) {
        if (!(b.lo >= 0.0 && b.lo < b.hi && b.hi <= 1.0)) {
            throw InfeasibleBin("bin [" + std::to_string(b.lo) + ", " +
                                std::to_string(b.hi) + ") is not within [0, 1)");
        }
        if (kTheta1Min + b.lo >= kTheta2Cap) {
            throw InfeasibleBin("bin starting at " + std::to_string(b.lo) +
                                " cannot produce theta2 < " +
                                std::to_string(kTheta2Cap));
        }
    }
    auto sorted = bins;
    std::sort(sorted.begin(), sorted.end(),
              [](const DiffBin& a, const DiffBin& b) { return a.lo < b.lo; });
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        if (sorted[i].lo < sorted[i - 1].hi) {
            throw InfeasibleBin("bins overlap");
        }
    }
}

bool is_equal_zone(const DiffBin& bin) { return bin.lo == 0.0; }

char* fmt(char* buf, std::size_t n, double v) {
    std::snprintf(buf, n, "%.9g", v);
    return buf;
}

}  // namespace

std::vector<DiffBin> default_bins() {
    std::vector<DiffBin> bins;
    bins.push_back({0.0, 0.015});
    for (int i = 0; i < 9; ++i) {
        bins.push_back({0.015 + 0.01 * i, 0.015 + 0.01 * (i + 1)});
    }
    return bins;
}

std::vector<PairSample> generate_pairs(const std::vector<DiffBin>& bins,
                                       int pairs_per_bin, std::uint64_t seed) {
    validate_bins(bins);
    if (pairs_per_bin < 1) {
        throw DomainError("pairs_per_bin must be at least 1");
    }
    CounterRng rng(CounterRng::derive_key(seed, "pair-generation"));
    std::vector<PairSample> out;
    out.reserve(bins.size() * std::size_t(pairs_per_bin));
    for (std::size_t b = 0; b < bins.size(); ++b) {
        for (int p = 0; p < pairs_per_bin; ++p) {
            double theta1 = 0.0;
            double theta2 = 0.0;
            bool ok = false;
            for (int attempt = 0; attempt < 10000; ++attempt) {
                theta1 = kTheta1Min + rng.uniform() * (kTheta1Max - kTheta1Min);
                const double diff =
                    bins[b].lo + rng.uniform() * (bins[b].hi - bins[b].lo);
                theta2 = theta1 + diff;
                if (theta2 < kTheta2Cap) {
                    ok = true;
                    break;
                }
            }
            if (!ok) {
                throw InfeasibleBin("could not draw a pair for bin " +
                                    std::to_string(b));
            }
            if (rng.uniform() < 0.5) std::swap(theta1, theta2);
            out.push_back({theta1, theta2, static_cast<int>(b)});
        }
    }
    return out;
}

std::vector<BinSummary> ValidationReport::summarize() const {
    std::vector<BinSummary> out(bins.size());
    for (std::size_t b = 0; b < bins.size(); ++b) out[b].bin = bins[b];
    for (const auto& run : runs) {
        auto& s = out.at(run.bin);
        ++s.pair_count;
        if (run.correct) ++s.correct_count;
    }
    return out;
}

ValidationReport run_validation(const std::vector<PairSample>& pairs,
                                const std::vector<DiffBin>& bins,
                                int block_size, const LearningConfig& cfg,
                                int workers) {
    if (block_size < 1) {
        throw DomainError("block size must be at least 1");
    }
    cfg.validate();
    validate_bins(bins);

    ValidationReport report;
    report.block_size = block_size;
    report.bins = bins;
    for (const auto& p : pairs) {
        if (p.bin < 0 || p.bin >= static_cast<int>(bins.size())) {
            throw DomainError("pair references bin " + std::to_string(p.bin) +
                              " outside the bin list");
        }
    }
    report.runs.resize(pairs.size());

    auto run_one = [&](std::size_t idx) {
        const PairSample& pair = pairs[idx];
        const auto tag = std::to_string(idx);
        SyntheticEnv env({{"pair", "first", pair.theta1},
                          {"pair", "second", pair.theta2}},
                         EnvConfig::fixed(block_size,
                                          CounterRng::derive_key(
                                              cfg.seed, "validation-env", tag)));
        LearningConfig run_cfg = cfg;
        run_cfg.seed = CounterRng::derive_key(cfg.seed, "validation-cmp", tag);
        const auto res = learn_context(env, "pair", {"first", "second"}, run_cfg);

        PairRun out;
        out.bin = pair.bin;
        out.theta1 = pair.theta1;
        out.theta2 = pair.theta2;
        out.seed = cfg.seed;
        out.samples_per_arm = res.games_per_formation[0] * block_size;
        out.outcome = res.outcomes[0][1];
        if (is_equal_zone(report.bins[pair.bin])) {
            out.correct = out.outcome == ComparisonOutcome::Equal;
        } else if (pair.theta1 > pair.theta2) {
            out.correct = out.outcome == ComparisonOutcome::FirstBetter;
        } else {
            out.correct = out.outcome == ComparisonOutcome::SecondBetter;
        }
        report.runs[idx] = out;
    };

    const int n_workers =
        std::max(1, std::min<int>(workers, static_cast<int>(pairs.size())));
    if (n_workers == 1) {
        for (std::size_t i = 0; i < pairs.size(); ++i) run_one(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(n_workers);
        for (int w = 0; w < n_workers; ++w) {
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= pairs.size()) return;
                    run_one(i);
                }
            });
        }
        for (auto& t : pool) t.join();
    }
    return report;
}

void merge_runs(ValidationReport& into, const ValidationReport& from) {
    if (into.bins.empty()) {
        into.bins = from.bins;
        into.block_size = from.block_size;
    }
    if (into.block_size != from.block_size ||
        into.bins.size() != from.bins.size()) {
        throw DimensionMismatch("cannot merge reports with different shapes");
    }
    into.runs.insert(into.runs.end(), from.runs.begin(), from.runs.end());
}

void emit_report(const ValidationReport& report, const std::string& out_dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) {
        throw IoError("cannot create output directory: " + out_dir);
    }
    char a[32], b[32], c[32], d[32];

    {
        std::ofstream rates(fs::path(out_dir) / "rates.csv", std::ios::binary);
        if (!rates) throw IoError("cannot write rates.csv in " + out_dir);
        rates << "bin_index,bin_lo,bin_hi,pair_count,correct_count,rate\n";
        const auto summaries = report.summarize();
        for (std::size_t i = 0; i < summaries.size(); ++i) {
            const auto& s = summaries[i];
            rates << i << ',' << fmt(a, sizeof a, s.bin.lo) << ','
                  << fmt(b, sizeof b, s.bin.hi) << ',' << s.pair_count << ','
                  << s.correct_count << ',';
            if (const auto r = s.rate()) {
                rates << fmt(c, sizeof c, *r);
            }
            rates << '\n';
        }
    }
    {
        std::ofstream samples(fs::path(out_dir) / "samples.csv",
                              std::ios::binary);
        if (!samples) throw IoError("cannot write samples.csv in " + out_dir);
        samples << "bin_index,bin_lo,bin_hi,theta1,theta2,seed,samples_per_arm,"
                   "outcome,correct\n";
        for (const auto& run : report.runs) {
            const auto& bin = report.bins.at(run.bin);
            samples << run.bin << ',' << fmt(a, sizeof a, bin.lo) << ','
                    << fmt(b, sizeof b, bin.hi) << ','
                    << fmt(c, sizeof c, run.theta1) << ','
                    << fmt(d, sizeof d, run.theta2) << ',' << run.seed << ','
                    << run.samples_per_arm << ',' << to_string(run.outcome)
                    << ',' << (run.correct ? 1 : 0) << '\n';
        }
    }
    {
        ordered_json doc;
        doc["block_size"] = report.block_size;
        doc["total_pairs"] = report.runs.size();
        std::vector<std::uint64_t> seeds;
        for (const auto& run : report.runs) {
            if (std::find(seeds.begin(), seeds.end(), run.seed) == seeds.end()) {
                seeds.push_back(run.seed);
            }
        }
        doc["seeds"] = seeds;
        doc["bins"] = ordered_json::array();
        for (const auto& s : report.summarize()) {
            ordered_json jb;
            jb["lo"] = s.bin.lo;
            jb["hi"] = s.bin.hi;
            jb["pair_count"] = s.pair_count;
            jb["correct_count"] = s.correct_count;
            if (const auto r = s.rate()) {
                jb["rate"] = *r;
            } else {
                jb["rate"] = nullptr;
            }
            doc["bins"].push_back(std::move(jb));
        }
        std::ofstream summary(fs::path(out_dir) / "summary.json",
                              std::ios::binary);
        if (!summary) throw IoError("cannot write summary.json in " + out_dir);
        summary << doc.dump(2) << '\n';
    }
}

}  // namespace playbook
