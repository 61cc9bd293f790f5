#pragma once

#include <string>
#include <vector>

#include "playbook/emd.hpp"

namespace playbook {

enum class Linkage { Single, Complete, Average };

Linkage linkage_from_string(const std::string& name);
std::string to_string(Linkage l);

/// One agglomeration step. Node ids follow the usual convention: leaves are
/// 0..n-1, the i-th merge creates node n+i.
struct Merge {
    int left = 0;
    int right = 0;
    double height = 0.0;
};

struct Dendrogram {
    int leaf_count = 0;
    Linkage linkage = Linkage::Average;
    std::vector<Merge> merges;  // exactly leaf_count - 1, heights non-decreasing
};

struct Cluster {
    int id = 0;
    std::vector<int> members;  // team indices, ascending
    int medoid = 0;            // member minimizing summed distance to the rest
};

struct ClusterSet {
    double threshold = 0.0;
    Linkage linkage = Linkage::Average;
    std::vector<Cluster> clusters;  // ordered by smallest member index
};

/// Standard agglomerative clustering on a distance matrix. Ties between
/// candidate merges break toward the lexicographically smallest node pair.
Dendrogram agglomerate(const DistanceMatrix& D, Linkage linkage);

/// Applies every merge with height < threshold and extracts medoids.
ClusterSet cut(const Dendrogram& dend, const DistanceMatrix& D, double threshold);

/// Nearest-medoid classification under EMD; ties go to the smallest cluster id.
int classify(const TeamDistribution& d, const ClusterSet& cs,
             const std::vector<TeamDistribution>& ds, const GroundCosts& costs);

}  // namespace playbook
