#include "commands.hpp"

#include <algorithm>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "playbook/io.hpp"
#include "playbook/rng.hpp"
#include "playbook/selector.hpp"
#include "playbook/service.hpp"
#include "playbook/validation.hpp"

namespace playbook::cli {

namespace {

std::string utc_now() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string default_matrix_path(const std::string& out) {
    const std::filesystem::path p(out);
    std::filesystem::path derived = p;
    derived.replace_extension();
    derived += "_distances.csv";
    return derived.string();
}

void write_file(const std::string& path, const std::string& text,
                const char* what) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(std::string("cannot write ") + what + ": " + path);
    out << text;
    if (!out) {
        throw IoError(std::string("failed while writing ") + what + ": " + path);
    }
}

}  // namespace

int run_ingest(const IngestArgs& args) {
    const auto snapshots = parse_snapshots_file(args.snapshots);
    DistributionSet ds;
    ds.grid = args.grid ? load_grid(*args.grid) : GridSpec{};
    ds.grid.validate();

    std::vector<std::string> order;
    std::map<std::string, std::vector<TeamDistribution>> per_team;
    for (const auto& snap : snapshots) {
        if (per_team.find(snap.team_id) == per_team.end()) {
            order.push_back(snap.team_id);
        }
        per_team[snap.team_id].push_back(snapshot_to_distribution(snap, ds.grid));
    }
    for (const auto& team : order) {
        ds.teams.push_back(aggregate_distributions(per_team[team]));
    }
    save_distributions(ds, args.out);
    std::cerr << "ingested " << snapshots.size() << " snapshots into "
              << ds.teams.size() << " teams -> " << args.out << "\n";
    return 0;
}

int run_cluster(const ClusterArgs& args) {
    const auto ds = load_distributions(args.distributions);
    const auto costs = ground_costs(ds.grid);
    const auto matrix = distance_matrix(ds.teams, costs);
    const auto linkage = linkage_from_string(args.linkage);
    const auto dendrogram = agglomerate(matrix, linkage);
    const auto clusters = cut(dendrogram, matrix, args.threshold);
    const auto report = make_cluster_report(clusters, matrix, ds.teams, ds.grid);
    save_cluster_report(report, args.out);

    const auto matrix_path = args.matrix_out.value_or(default_matrix_path(args.out));
    write_file(matrix_path, distance_matrix_csv(matrix), "distance matrix");

    std::cerr << clusters.clusters.size() << " clusters at threshold "
              << args.threshold << " (" << args.linkage << " linkage) -> "
              << args.out << "\n"
              << "distance matrix -> " << matrix_path << "\n";
    return 0;
}

int run_learn(const LearnArgs& args) {
    const auto report = load_cluster_report(args.clusters);
    const auto arms = load_arms(args.arms);
    auto setup = load_learn_setup(args.config);
    if (args.seed) setup.learning.seed = *args.seed;
    if (args.games_per_round) setup.learning.games_per_round = *args.games_per_round;
    if (args.budget) setup.learning.max_games_per_formation = *args.budget;
    setup.learning.validate();

    std::set<std::string> formation_set;
    for (const auto& arm : arms) formation_set.insert(arm.formation);
    const std::vector<std::string> formations(formation_set.begin(),
                                              formation_set.end());
    if (formations.empty()) {
        throw SchemaError("arm table defines no formations");
    }

    std::vector<ClusterContext> contexts;
    contexts.reserve(report.clusters.size());
    for (const auto& entry : report.clusters) {
        contexts.push_back({entry.id, entry.medoid_mass});
    }

    SyntheticEnv env(arms,
                     EnvConfig{setup.kicks_min, setup.kicks_max,
                               CounterRng::derive_key(setup.learning.seed, "env")});

    std::vector<std::pair<std::string, ContextResult>> details;
    auto db = learn_all(env, contexts, formations, setup.learning, report.grid,
                        &details);
    db.created_at = args.timestamp.value_or(utc_now());
    save_db(db, args.out);
    std::cerr << "learned " << db.records.size() << " cluster associations ("
              << formations.size() << " formations, seed "
              << setup.learning.seed << ") -> " << args.out << "\n";

    if (args.trace_dir) {
        std::filesystem::create_directories(*args.trace_dir);
        for (const auto& [context, result] : details) {
            write_file((std::filesystem::path(*args.trace_dir) /
                        ("trace_" + context + ".csv"))
                           .string(),
                       posterior_trace_csv(result.trace, setup.learning.hdi_mass),
                       "posterior trace");
            std::string log;
            for (const auto& entry : result.log) {
                log += comparison_log_line(entry.round, entry.i, entry.j,
                                           entry.estimate, entry.outcome);
                log += '\n';
            }
            write_file((std::filesystem::path(*args.trace_dir) /
                        ("comparisons_" + context + ".jsonl"))
                           .string(),
                       log, "comparison log");
        }
        std::cerr << "traces -> " << *args.trace_dir << "\n";
    }

    if (args.audit_out) {
        std::vector<std::pair<std::string, int>> team_clusters;
        for (const auto& entry : report.clusters) {
            for (const auto& team : entry.members) {
                team_clusters.emplace_back(team, entry.id);
            }
        }
        const auto audit =
            per_team_audit(env, team_clusters, db, formations, setup.learning);
        save_audit_report(audit, setup.learning.seed, *args.audit_out);
        std::cerr << "audit flagged " << audit.rows.size() << " of "
                  << team_clusters.size() << " teams -> " << *args.audit_out
                  << "\n";
    }
    return 0;
}

int run_validate(const ValidateArgs& args) {
    if (args.seeds < 1) throw DomainError("--seeds must be at least 1");
    LearningConfig cfg;
    cfg.games_per_round = 1;  // one block per round
    cfg.max_games_per_formation = args.budget_blocks;
    cfg.draws = args.draws;
    const int workers = args.workers > 0
                            ? args.workers
                            : std::max(1u, std::thread::hardware_concurrency());

    const auto bins = default_bins();
    ValidationReport combined;
    for (int replication = 0; replication < args.seeds; ++replication) {
        cfg.seed = args.seed + static_cast<std::uint64_t>(replication);
        const auto pairs = generate_pairs(bins, args.pairs_per_bin, cfg.seed);
        const auto report =
            run_validation(pairs, bins, args.block_size, cfg, workers);
        merge_runs(combined, report);
        std::cerr << "seed " << cfg.seed << ": " << pairs.size()
                  << " pairs done\n";
    }
    emit_report(combined, args.out_dir);
    std::cerr << "block size " << args.block_size << ", " << combined.runs.size()
              << " runs -> " << args.out_dir << "\n";
    return 0;
}

int run_select(const SelectArgs& args) {
    const auto db = load_db(args.db);
    std::ifstream in(args.input);
    if (!in) throw IoError("cannot open query: " + args.input);
    std::ostringstream buf;
    buf << in.rdbuf();
    const auto query = parse_query_json(buf.str(), db.grid);
    const auto result = select(query, db, ground_costs(db.grid));
    std::cout << selection_json_line(result) << "\n";
    return 0;
}

int run_serve(const ServeArgs& args) {
    auto db = load_db(args.db);
    SelectorService service(std::move(db), args.host, args.port);
    service.start();
    std::cerr << "serving " << args.db << " on " << args.host << ":"
              << service.port() << "\n";
    service.wait();
    return 0;
}

}  // namespace playbook::cli
