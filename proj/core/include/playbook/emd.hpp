#pragma once

#include <string>
#include <vector>

#include "playbook/field_grid.hpp"

namespace playbook {

/// Pairwise Euclidean distances between block centroids, in meters. The
/// remainder block sits at the centroid of the field minus the attacking
/// third (default (-17.5, 0)).
struct GroundCosts {
    int block_count = 0;
    std::vector<double> cost;  // row-major block_count x block_count

    double at(int i, int j) const { return cost[std::size_t(i) * block_count + j]; }
};

GroundCosts ground_costs(const GridSpec& grid);

/// Optimal flows for one transport instance, on normalized (unit-mass)
/// marginals.
struct TransportPlan {
    int supply_count = 0;
    int demand_count = 0;
    std::vector<double> flow;  // row-major supply_count x demand_count
    double objective = 0.0;

    double at(int i, int j) const { return flow[std::size_t(i) * demand_count + j]; }
};

/// Exact earth mover's distance between two distributions, solved as a
/// transportation problem. Both sides are normalized to unit mass first, so
/// the result is scale-invariant and a metric whenever the ground costs are.
double emd(const TeamDistribution& a, const TeamDistribution& b,
           const GroundCosts& costs);

/// Same, but returns the full optimal plan.
TransportPlan emd_plan(const TeamDistribution& a, const TeamDistribution& b,
                       const GroundCosts& costs);

struct DistanceMatrix {
    std::vector<std::string> team_ids;
    std::vector<double> d;  // row-major n x n

    int size() const { return static_cast<int>(team_ids.size()); }
    double at(int i, int j) const { return d[std::size_t(i) * team_ids.size() + j]; }
};

/// EMD between every unordered pair.
DistanceMatrix distance_matrix(const std::vector<TeamDistribution>& ds,
                               const GroundCosts& costs);

/// CSV with a header row and column of team ids, 9 significant digits.
std::string distance_matrix_csv(const DistanceMatrix& m);

}  // namespace playbook
