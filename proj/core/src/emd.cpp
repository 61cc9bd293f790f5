#include "playbook/emd.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <utility>

namespace playbook {

namespace {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

std::vector<Point> block_centroids(const GridSpec& grid) {
    const double half_len = grid.field.length_m / 2.0;
    const double half_wid = grid.field.width_m / 2.0;
    const double cell_w = (half_len - grid.field.attack_third_min_x) / grid.cols;
    const double cell_h = grid.field.width_m / grid.rows;
    std::vector<Point> pts(grid.block_count());
    for (int r = 0; r < grid.rows; ++r) {
        for (int c = 0; c < grid.cols; ++c) {
            pts[std::size_t(r) * grid.cols + c] = {
                grid.field.attack_third_min_x + (c + 0.5) * cell_w,
                -half_wid + (r + 0.5) * cell_h};
        }
    }
    pts[grid.remainder_block()] = {(-half_len + grid.field.attack_third_min_x) / 2.0,
                                   0.0};
    return pts;
}

// Successive shortest paths with node potentials on the complete bipartite
// transport graph. Supplies and demands are the normalized marginals; every
// augmentation zeroes a residual supply, a residual demand, or a backward
// arc, so the loop terminates quickly at this problem size.
TransportPlan solve_transport(const std::vector<double>& supply,
                              const std::vector<double>& demand,
                              const GroundCosts& costs) {
    const int m = static_cast<int>(supply.size());
    const int n = static_cast<int>(demand.size());
    const int node_count = m + n;
    constexpr double kResidualTol = 1e-13;
    constexpr double kInf = std::numeric_limits<double>::infinity();

    TransportPlan plan;
    plan.supply_count = m;
    plan.demand_count = n;
    plan.flow.assign(std::size_t(m) * n, 0.0);

    std::vector<double> rs = supply;  // residual supply
    std::vector<double> rd = demand;  // residual demand
    std::vector<double> potential(node_count, 0.0);
    std::vector<double> dist(node_count);
    std::vector<int> parent(node_count);
    std::vector<char> done(node_count);

    auto remaining = [&](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    };

    const int max_rounds = 4 * node_count * node_count + 16;
    for (int round = 0; round < max_rounds; ++round) {
        if (remaining(rs) <= kResidualTol || remaining(rd) <= kResidualTol) break;

        // Dijkstra from all supply nodes with residual mass.
        std::fill(dist.begin(), dist.end(), kInf);
        std::fill(parent.begin(), parent.end(), -1);
        std::fill(done.begin(), done.end(), char(0));
        for (int i = 0; i < m; ++i) {
            if (rs[i] > kResidualTol) dist[i] = 0.0;
        }
        for (int step = 0; step < node_count; ++step) {
            int u = -1;
            double best = kInf;
            for (int v = 0; v < node_count; ++v) {
                if (!done[v] && dist[v] < best) {
                    best = dist[v];
                    u = v;
                }
            }
            if (u < 0) break;
            done[u] = 1;
            if (u < m) {
                for (int j = 0; j < n; ++j) {
                    const double rc = std::max(
                        0.0, costs.at(u, j) + potential[u] - potential[m + j]);
                    if (dist[u] + rc < dist[m + j]) {
                        dist[m + j] = dist[u] + rc;
                        parent[m + j] = u;
                    }
                }
            } else {
                const int j = u - m;
                for (int i = 0; i < m; ++i) {
                    if (plan.at(i, j) <= 0.0) continue;
                    const double rc = std::max(
                        0.0, -costs.at(i, j) + potential[u] - potential[i]);
                    if (dist[u] + rc < dist[i]) {
                        dist[i] = dist[u] + rc;
                        parent[i] = u;
                    }
                }
            }
        }

        int target = -1;
        double best = kInf;
        for (int j = 0; j < n; ++j) {
            if (rd[j] > kResidualTol && dist[m + j] < best) {
                best = dist[m + j];
                target = m + j;
            }
        }
        if (target < 0) break;  // numerically exhausted

        // Bottleneck along the path: residual demand at the target, residual
        // supply at the start, and existing flow on every backward arc.
        double push = rd[target - m];
        int start = target;
        for (int v = target; parent[v] >= 0; v = parent[v]) {
            const int p = parent[v];
            if (v < m) push = std::min(push, plan.at(v, p - m));
            start = p;
        }
        push = std::min(push, rs[start]);
        if (push <= 0.0) break;

        for (int v = target; parent[v] >= 0; v = parent[v]) {
            const int p = parent[v];
            if (v >= m) {
                plan.flow[std::size_t(p) * n + (v - m)] += push;
            } else {
                plan.flow[std::size_t(v) * n + (p - m)] -= push;
            }
        }
        rs[start] -= push;
        rd[target - m] -= push;

        for (int v = 0; v < node_count; ++v) {
            potential[v] += std::min(dist[v], best);
        }
    }

    double objective = 0.0;
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) {
            objective += plan.at(i, j) * costs.at(i, j);
        }
    }
    plan.objective = objective;
    return plan;
}

std::vector<double> normalized(const TeamDistribution& d) {
    double total = 0.0;
    for (double x : d.mass) {
        if (x < 0.0) throw DomainError("negative mass in distribution '" + d.team_id + "'");
        total += x;
    }
    if (total <= 0.0) {
        throw ZeroMass("distribution '" + d.team_id + "' has no mass");
    }
    std::vector<double> out(d.mass.size());
    for (std::size_t i = 0; i < d.mass.size(); ++i) out[i] = d.mass[i] / total;
    return out;
}

}  // namespace

GroundCosts ground_costs(const GridSpec& grid) {
    grid.validate();
    const auto pts = block_centroids(grid);
    const int n = grid.block_count();
    GroundCosts gc;
    gc.block_count = n;
    gc.cost.assign(std::size_t(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double dx = pts[i].x - pts[j].x;
            const double dy = pts[i].y - pts[j].y;
            const double dist = std::hypot(dx, dy);
            gc.cost[std::size_t(i) * n + j] = dist;
            gc.cost[std::size_t(j) * n + i] = dist;
        }
    }
    return gc;
}

TransportPlan emd_plan(const TeamDistribution& a, const TeamDistribution& b,
                       const GroundCosts& costs) {
    if (a.block_count() != b.block_count() ||
        a.block_count() != costs.block_count) {
        throw DimensionMismatch("distributions and ground costs disagree on block count");
    }
    return solve_transport(normalized(a), normalized(b), costs);
}

double emd(const TeamDistribution& a, const TeamDistribution& b,
           const GroundCosts& costs) {
    return emd_plan(a, b, costs).objective;
}

DistanceMatrix distance_matrix(const std::vector<TeamDistribution>& ds,
                               const GroundCosts& costs) {
    if (ds.size() < 2) {
        throw EmptyInput("distance matrix needs at least two distributions");
    }
    const int n = static_cast<int>(ds.size());
    DistanceMatrix m;
    m.team_ids.reserve(ds.size());
    for (const auto& d : ds) m.team_ids.push_back(d.team_id);
    m.d.assign(std::size_t(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double dist = emd(ds[i], ds[j], costs);
            m.d[std::size_t(i) * n + j] = dist;
            m.d[std::size_t(j) * n + i] = dist;
        }
    }
    return m;
}

std::string distance_matrix_csv(const DistanceMatrix& m) {
    std::string out = "team";
    for (const auto& id : m.team_ids) {
        out += ',';
        out += id;
    }
    out += '\n';
    char buf[64];
    for (int i = 0; i < m.size(); ++i) {
        out += m.team_ids[i];
        for (int j = 0; j < m.size(); ++j) {
            std::snprintf(buf, sizeof buf, ",%.9g", m.at(i, j));
            out += buf;
        }
        out += '\n';
    }
    return out;
}

}  // namespace playbook
