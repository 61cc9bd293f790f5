#include "playbook/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace playbook {

namespace {

void validate_matrix(const DistanceMatrix& D) {
    const int n = D.size();
    if (n < 2) {
        throw InvalidMatrix("need at least two teams to cluster");
    }
    if (D.d.size() != std::size_t(n) * n) {
        throw InvalidMatrix("distance matrix is not square");
    }
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double v = D.at(i, j);
            if (v < 0.0) {
                throw InvalidMatrix("negative distance at (" + std::to_string(i) +
                                    ", " + std::to_string(j) + ")");
            }
            if (std::fabs(v - D.at(j, i)) > 1e-9) {
                throw InvalidMatrix("asymmetry beyond 1e-9 at (" +
                                    std::to_string(i) + ", " + std::to_string(j) +
                                    ")");
            }
        }
    }
}

double cluster_distance(const DistanceMatrix& D, const std::vector<int>& a,
                        const std::vector<int>& b, Linkage linkage) {
    double acc = (linkage == Linkage::Single)
                     ? std::numeric_limits<double>::infinity()
                     : 0.0;
    for (int i : a) {
        for (int j : b) {
            const double d = D.at(i, j);
            switch (linkage) {
                case Linkage::Single: acc = std::min(acc, d); break;
                case Linkage::Complete: acc = std::max(acc, d); break;
                case Linkage::Average: acc += d; break;
            }
        }
    }
    if (linkage == Linkage::Average) {
        acc /= double(a.size()) * double(b.size());
    }
    return acc;
}

}  // namespace

Linkage linkage_from_string(const std::string& name) {
    if (name == "single") return Linkage::Single;
    if (name == "complete") return Linkage::Complete;
    if (name == "average") return Linkage::Average;
    throw DomainError("unknown linkage: '" + name + "'");
}

std::string to_string(Linkage l) {
    switch (l) {
        case Linkage::Single: return "single";
        case Linkage::Complete: return "complete";
        case Linkage::Average: return "average";
    }
    return "average";
}

Dendrogram agglomerate(const DistanceMatrix& D, Linkage linkage) {
    validate_matrix(D);
    const int n = D.size();

    struct Active {
        int node_id;
        std::vector<int> members;
    };
    std::vector<Active> active;
    active.reserve(n);
    for (int i = 0; i < n; ++i) active.push_back({i, {i}});

    Dendrogram dend;
    dend.leaf_count = n;
    dend.linkage = linkage;
    dend.merges.reserve(n - 1);

    for (int step = 0; step < n - 1; ++step) {
        std::size_t best_a = 0;
        std::size_t best_b = 1;
        double best_d = std::numeric_limits<double>::infinity();
        int best_lo = 0;
        int best_hi = 0;
        for (std::size_t a = 0; a < active.size(); ++a) {
            for (std::size_t b = a + 1; b < active.size(); ++b) {
                const double d = cluster_distance(D, active[a].members,
                                                  active[b].members, linkage);
                const int lo = std::min(active[a].node_id, active[b].node_id);
                const int hi = std::max(active[a].node_id, active[b].node_id);
                const bool better =
                    d < best_d ||
                    (d == best_d && (lo < best_lo || (lo == best_lo && hi < best_hi)));
                if (better) {
                    best_d = d;
                    best_a = a;
                    best_b = b;
                    best_lo = lo;
                    best_hi = hi;
                }
            }
        }
        Active merged;
        merged.node_id = n + step;
        merged.members = active[best_a].members;
        merged.members.insert(merged.members.end(), active[best_b].members.begin(),
                              active[best_b].members.end());
        std::sort(merged.members.begin(), merged.members.end());
        dend.merges.push_back({best_lo, best_hi, best_d});
        active.erase(active.begin() + best_b);
        active.erase(active.begin() + best_a);
        active.push_back(std::move(merged));
    }
    return dend;
}

ClusterSet cut(const Dendrogram& dend, const DistanceMatrix& D, double threshold) {
    if (threshold < 0.0) {
        throw DomainError("cut threshold must be non-negative");
    }
    const int n = dend.leaf_count;

    // Replay merges below the threshold. Member lists are tracked per node id
    // so merges of merge-nodes resolve to their leaves.
    std::vector<std::vector<int>> node_members(n + dend.merges.size());
    for (int i = 0; i < n; ++i) node_members[i] = {i};
    std::vector<bool> alive(node_members.size(), false);
    for (int i = 0; i < n; ++i) alive[i] = true;

    for (std::size_t k = 0; k < dend.merges.size(); ++k) {
        const auto& m = dend.merges[k];
        if (!(m.height < threshold)) continue;
        auto& joined = node_members[n + k];
        joined = node_members[m.left];
        joined.insert(joined.end(), node_members[m.right].begin(),
                      node_members[m.right].end());
        std::sort(joined.begin(), joined.end());
        alive[m.left] = false;
        alive[m.right] = false;
        alive[n + k] = true;
    }

    std::vector<std::vector<int>> groups;
    for (std::size_t id = 0; id < node_members.size(); ++id) {
        if (alive[id] && !node_members[id].empty()) {
            groups.push_back(node_members[id]);
        }
    }
    std::sort(groups.begin(), groups.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });

    ClusterSet cs;
    cs.threshold = threshold;
    cs.linkage = dend.linkage;
    cs.clusters.reserve(groups.size());
    for (std::size_t g = 0; g < groups.size(); ++g) {
        Cluster c;
        c.id = static_cast<int>(g);
        c.members = groups[g];
        double best = std::numeric_limits<double>::infinity();
        c.medoid = c.members.front();
        for (int cand : c.members) {
            double s = 0.0;
            for (int other : c.members) s += D.at(cand, other);
            if (s < best) {
                best = s;
                c.medoid = cand;
            }
        }
        cs.clusters.push_back(std::move(c));
    }
    return cs;
}

int classify(const TeamDistribution& d, const ClusterSet& cs,
             const std::vector<TeamDistribution>& ds, const GroundCosts& costs) {
    if (cs.clusters.empty()) {
        throw EmptyInput("cluster set is empty");
    }
    int best_id = cs.clusters.front().id;
    double best_dist = std::numeric_limits<double>::infinity();
    for (const auto& c : cs.clusters) {
        const double dist = emd(d, ds.at(c.medoid), costs);
        if (dist < best_dist) {
            best_dist = dist;
            best_id = c.id;
        }
    }
    return best_id;
}

}  // namespace playbook
