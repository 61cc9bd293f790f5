#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "playbook/compare.hpp"
#include "playbook/field_grid.hpp"
#include "playbook/sim_env.hpp"

namespace playbook {

struct LearningConfig {
    int games_per_round = 10;         // M: games per formation before comparing
    int max_games_per_formation = 200;
    BetaPosterior prior{2.0, 2.0};
    RopeInterval rope{};
    double hdi_mass = 0.95;
    DiffMethod method = DiffMethod::MonteCarlo;
    long draws = 200000;
    int grid_points = 512;
    std::uint64_t seed = 0;

    void validate() const;
};

struct ComparisonLogEntry {
    int round = 0;
    int i = 0;
    int j = 0;
    DiffEstimate estimate;
    ComparisonOutcome outcome = ComparisonOutcome::Undecided;
};

/// Result of learning one context (cluster or team).
struct ContextResult {
    std::vector<BetaPosterior> posteriors;
    std::vector<std::vector<ComparisonOutcome>> outcomes;  // final, pre tie-break
    Ranking ranking;  // ordering after equal/undecided pairs are tie-broken
    int chosen = 0;
    std::vector<int> games_per_formation;
    int games_used = 0;  // total across formations
    bool fully_resolved = true;
    std::vector<TraceRow> trace;
    std::vector<ComparisonLogEntry> log;
};

/// Round loop: every formation still involved in an undecided pair plays M
/// games, posteriors fold the observations in, then all pairs are re-decided.
/// Stops when nothing is undecided or the next round would exceed the budget;
/// leftover equal/undecided pairs resolve by variance tie-break.
ContextResult learn_context(Environment& env, const std::string& context,
                            const std::vector<std::string>& formations,
                            const LearningConfig& cfg);

/// One cluster's association: who to play against it and how sure we are.
struct AssociationRecord {
    int cluster_id = 0;
    TeamDistribution medoid;
    std::string formation;
    double alpha = 2.0;
    double beta = 2.0;
    HdiInterval hdi{};
    double ratio = 1.0;  // chosen posterior mean over runner-up mean
    int games_used = 0;
    bool fully_resolved = true;
};

struct AssociationDB {
    std::string version = "1";
    std::string created_at;  // optional timestamp, set by callers
    LearningConfig config;
    GridSpec grid;
    std::vector<AssociationRecord> records;
};

struct ClusterContext {
    int cluster_id = 0;
    TeamDistribution medoid;
};

/// Learns every cluster. The environment must expose an arm for each
/// (cluster id, formation) pair; cluster ids are passed as decimal strings.
/// When `details` is given it receives each context's full result, keyed by
/// the context string (for trace and comparison-log export).
AssociationDB learn_all(
    Environment& env, const std::vector<ClusterContext>& clusters,
    const std::vector<std::string>& formations, const LearningConfig& cfg,
    const GridSpec& grid,
    std::vector<std::pair<std::string, ContextResult>>* details = nullptr);

struct AuditRow {
    std::string team;
    int cluster_id = 0;
    std::string selected_formation;  // the cluster's association
    HdiInterval selected_hdi{};      // per-team estimate of that formation
    std::string best_formation;      // this team's own best
    HdiInterval best_hdi{};
    double ratio = 1.0;  // per-team best mean over the selected formation's mean
};

struct AuditReport {
    std::vector<AuditRow> rows;
};

/// Re-estimates every team individually and reports the ones whose best
/// formation differs from their cluster's association.
AuditReport per_team_audit(
    Environment& env,
    const std::vector<std::pair<std::string, int>>& team_clusters,
    const AssociationDB& db, const std::vector<std::string>& formations,
    const LearningConfig& cfg);

/// JSON persistence. save_db writes exactly db_to_json's bytes, so a
/// save/load/save round trip is byte-identical.
std::string db_to_json(const AssociationDB& db);
AssociationDB db_from_json(const std::string& text);
void save_db(const AssociationDB& db, const std::string& path);
AssociationDB load_db(const std::string& path);

}  // namespace playbook
