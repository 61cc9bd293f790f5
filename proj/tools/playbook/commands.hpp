#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace playbook::cli {

struct IngestArgs {
    std::string snapshots;
    std::optional<std::string> grid;
    std::string out;
};

struct ClusterArgs {
    std::string distributions;
    std::string linkage = "average";
    double threshold = 0.0;
    std::string out;
    std::optional<std::string> matrix_out;
};

struct LearnArgs {
    std::string clusters;
    std::string arms;
    std::string config;
    std::string out;
    std::optional<std::string> audit_out;
    std::optional<std::string> trace_dir;
    std::optional<std::uint64_t> seed;
    std::optional<int> games_per_round;
    std::optional<int> budget;
    std::optional<std::string> timestamp;
};

struct ValidateArgs {
    int block_size = 20;
    int seeds = 1;
    std::string out_dir;
    int pairs_per_bin = 10;
    std::uint64_t seed = 1;
    long draws = 10000;
    int budget_blocks = 400;
    int workers = 0;  // 0: pick from hardware
};

struct SelectArgs {
    std::string db;
    std::string input;
};

struct ServeArgs {
    std::string db;
    int port = 0;
    std::string host = "127.0.0.1";
};

int run_ingest(const IngestArgs& args);
int run_cluster(const ClusterArgs& args);
int run_learn(const LearnArgs& args);
int run_validate(const ValidateArgs& args);
int run_select(const SelectArgs& args);
int run_serve(const ServeArgs& args);

}  // namespace playbook::cli
