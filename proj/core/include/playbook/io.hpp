#pragma once

#include <string>
#include <vector>

#include "playbook/clustering.hpp"
#include "playbook/learner.hpp"
#include "playbook/sim_env.hpp"

namespace playbook {

/// Per-team aggregated distributions plus the grid they were built on; the
/// ingest output and cluster input.
struct DistributionSet {
    GridSpec grid;
    std::vector<TeamDistribution> teams;
};

void save_distributions(const DistributionSet& ds, const std::string& path);
DistributionSet load_distributions(const std::string& path);

GridSpec load_grid(const std::string& path);

/// Cluster report: threshold, linkage, members and medoid per cluster. The
/// medoid's mass vector and the grid ride along so downstream stages need no
/// extra inputs.
struct ClusterReportEntry {
    int id = 0;
    std::vector<std::string> members;
    std::string medoid;
    TeamDistribution medoid_mass;
};

struct ClusterReport {
    double threshold = 0.0;
    Linkage linkage = Linkage::Average;
    GridSpec grid;
    std::vector<ClusterReportEntry> clusters;
};

ClusterReport make_cluster_report(const ClusterSet& cs, const DistanceMatrix& m,
                                  const std::vector<TeamDistribution>& ds,
                                  const GridSpec& grid);
void save_cluster_report(const ClusterReport& report, const std::string& path);
ClusterReport load_cluster_report(const std::string& path);

/// Learning configuration file: LearningConfig fields plus the per-game
/// corner-kick range for synthetic environments.
struct LearnSetup {
    LearningConfig learning;
    int kicks_min = 33;
    int kicks_max = 41;
};

LearnSetup load_learn_setup(const std::string& path);
void save_learn_setup(const LearnSetup& setup, const std::string& path);

void save_audit_report(const AuditReport& report, std::uint64_t seed,
                       const std::string& path);

/// One selection query: {"mass": [block_count reals]} or
/// {"positions": [[x, y] * 11]}. Throws ParseError for malformed JSON or
/// types, DimensionMismatch for wrong counts; position mapping may throw
/// PositionOutOfField.
TeamDistribution parse_query_json(const std::string& text, const GridSpec& grid);

}  // namespace playbook
