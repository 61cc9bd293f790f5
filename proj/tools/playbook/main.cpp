#include <exception>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "playbook/errors.hpp"

namespace {

template <typename Fn>
int guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const playbook::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "fatal: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "playbook - pick the best player formation per opponent cluster\n"
        "(grid distributions -> EMD clustering -> sequential Bayes ranking)"};
    app.require_subcommand(1);

    playbook::cli::IngestArgs ingest;
    auto* cmd_ingest = app.add_subcommand(
        "ingest", "Aggregate snapshot CSV into per-team distributions");
    cmd_ingest->add_option("--snapshots", ingest.snapshots, "snapshot CSV file")
        ->required();
    cmd_ingest->add_option("--grid", ingest.grid, "grid spec JSON (optional)");
    cmd_ingest->add_option("--out", ingest.out, "output distributions JSON")
        ->required();

    playbook::cli::ClusterArgs cluster;
    auto* cmd_cluster = app.add_subcommand(
        "cluster", "Cluster team distributions under earth mover's distance");
    cmd_cluster
        ->add_option("--distributions", cluster.distributions,
                     "distributions JSON from ingest")
        ->required();
    cmd_cluster->add_option("--linkage", cluster.linkage,
                            "single | complete | average");
    cmd_cluster
        ->add_option("--threshold", cluster.threshold,
                     "dendrogram cut height in meters")
        ->required();
    cmd_cluster->add_option("--out", cluster.out, "cluster report JSON")
        ->required();
    cmd_cluster->add_option("--matrix-out", cluster.matrix_out,
                            "distance matrix CSV (default: <out>_distances.csv)");

    playbook::cli::LearnArgs learn;
    auto* cmd_learn = app.add_subcommand(
        "learn", "Learn the best formation per cluster on synthetic arms");
    cmd_learn->add_option("--clusters", learn.clusters, "cluster report JSON")
        ->required();
    cmd_learn->add_option("--arms", learn.arms, "arm table JSON")->required();
    cmd_learn->add_option("--config", learn.config, "learning config JSON")
        ->required();
    cmd_learn->add_option("--out", learn.out, "association db JSON")->required();
    cmd_learn->add_option("--audit", learn.audit_out,
                          "also audit every team; write the report here");
    cmd_learn->add_option("--trace-dir", learn.trace_dir,
                          "write posterior traces and comparison logs here");
    cmd_learn->add_option("--seed", learn.seed, "override the config seed");
    cmd_learn->add_option("--games-per-round", learn.games_per_round,
                          "override games per round (M)");
    cmd_learn->add_option("--budget", learn.budget,
                          "override max games per formation");
    cmd_learn->add_option("--timestamp", learn.timestamp,
                          "fixed created_at stamp (for reproducible output)");

    playbook::cli::ValidateArgs validate;
    auto* cmd_validate = app.add_subcommand(
        "validate", "Rank synthetic theta pairs and report accuracy per bin");
    cmd_validate
        ->add_option("--block-size", validate.block_size,
                     "binomial samples per block (20 or 60 in the experiments)")
        ->check(CLI::PositiveNumber);
    cmd_validate->add_option("--seeds", validate.seeds, "replication count")
        ->check(CLI::PositiveNumber);
    cmd_validate->add_option("--out-dir", validate.out_dir, "output directory")
        ->required();
    cmd_validate->add_option("--pairs-per-bin", validate.pairs_per_bin,
                             "theta pairs per difference bin");
    cmd_validate->add_option("--seed", validate.seed, "base seed");
    cmd_validate->add_option("--draws", validate.draws,
                             "monte-carlo draws per comparison (>= 10000)");
    cmd_validate->add_option("--budget", validate.budget_blocks,
                             "max blocks per arm before giving up");
    cmd_validate->add_option("--workers", validate.workers,
                             "worker threads (default: hardware)");

    playbook::cli::SelectArgs select;
    auto* cmd_select = app.add_subcommand(
        "select", "Classify one opponent distribution against a learned db");
    cmd_select->add_option("--db", select.db, "association db JSON")->required();
    cmd_select->add_option("--input", select.input, "query JSON file")
        ->required();

    playbook::cli::ServeArgs serve;
    auto* cmd_serve = app.add_subcommand(
        "serve", "Serve selections over newline-delimited JSON on TCP");
    cmd_serve->add_option("--db", serve.db, "association db JSON")->required();
    cmd_serve->add_option("--port", serve.port, "listen port (0 = ephemeral)")
        ->required();
    cmd_serve->add_option("--host", serve.host, "listen address");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    if (cmd_ingest->parsed()) {
        return guarded([&] { return playbook::cli::run_ingest(ingest); });
    }
    if (cmd_cluster->parsed()) {
        return guarded([&] { return playbook::cli::run_cluster(cluster); });
    }
    if (cmd_learn->parsed()) {
        return guarded([&] { return playbook::cli::run_learn(learn); });
    }
    if (cmd_validate->parsed()) {
        return guarded([&] { return playbook::cli::run_validate(validate); });
    }
    if (cmd_select->parsed()) {
        return guarded([&] { return playbook::cli::run_select(select); });
    }
    if (cmd_serve->parsed()) {
        return guarded([&] { return playbook::cli::run_serve(serve); });
    }
    return 1;
}
