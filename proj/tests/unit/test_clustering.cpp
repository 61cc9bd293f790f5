#include <set>
#include <vector>

#include "doctest.h"
#include "playbook/clustering.hpp"
#include "playbook/rng.hpp"

using namespace playbook;

namespace {

DistanceMatrix matrix_of(std::vector<std::vector<double>> rows,
                         std::vector<std::string> ids = {}) {
    DistanceMatrix m;
    const int n = static_cast<int>(rows.size());
    for (int i = 0; i < n; ++i) {
        m.team_ids.push_back(ids.empty() ? "t" + std::to_string(i) : ids[i]);
    }
    m.d.assign(std::size_t(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) m.d[std::size_t(i) * n + j] = rows[i][j];
    }
    return m;
}

TeamDistribution point_mass(int block, const std::string& id) {
    TeamDistribution d;
    d.team_id = id;
    d.mass.assign(19, 0.0);
    d.mass[block] = 11.0;
    d.total = 11.0;
    return d;
}

// 14 synthetic teams: 3 near one archetype, 10 near another, 1 far outlier.
std::vector<TeamDistribution> synthetic_fourteen() {
    std::vector<TeamDistribution> teams;
    for (int v = 0; v < 3; ++v) {
        TeamDistribution d;
        d.team_id = "packed" + std::to_string(v);
        d.mass.assign(19, 0.0);
        d.mass[16] = 4.0;
        d.mass[17] = 4.0;
        d.mass[13] = 2.0;
        d.mass[14] = 1.0;
        // small per-team wiggle: move one player to a neighbouring block
        d.mass[13] -= 1.0;
        d.mass[(v % 2 == 0) ? 12 : 10] += 1.0;
        d.total = 11.0;
        teams.push_back(std::move(d));
    }
    for (int v = 0; v < 10; ++v) {
        TeamDistribution d;
        d.team_id = "spread" + std::to_string(v);
        d.mass.assign(19, 0.0);
        d.mass[0] = 2.0;
        d.mass[1] = 2.0;
        d.mass[2] = 2.0;
        d.mass[4] = 2.0;
        d.mass[18] = 3.0;
        d.mass[v % 3] -= 1.0;
        d.mass[3 + (v % 2)] += 1.0;
        d.total = 11.0;
        teams.push_back(std::move(d));
    }
    TeamDistribution outlier;
    outlier.team_id = "outlier";
    outlier.mass.assign(19, 0.0);
    outlier.mass[18] = 11.0;
    outlier.total = 11.0;
    teams.push_back(std::move(outlier));
    return teams;
}

}  // namespace

TEST_SUITE("clustering") {

TEST_CASE("two teams merge once at their distance") {
    const auto dend = agglomerate(matrix_of({{0, 5}, {5, 0}}), Linkage::Average);
    REQUIRE(dend.merges.size() == 1);
    CHECK(dend.merges[0].left == 0);
    CHECK(dend.merges[0].right == 1);
    CHECK(dend.merges[0].height == 5.0);
}

TEST_CASE("a forced merge order is respected by every linkage") {
    const auto D = matrix_of({{0, 1, 10}, {1, 0, 10}, {10, 10, 0}});
    for (auto linkage : {Linkage::Single, Linkage::Complete, Linkage::Average}) {
        const auto dend = agglomerate(D, linkage);
        REQUIRE(dend.merges.size() == 2);
        CHECK(dend.merges[0].left == 0);
        CHECK(dend.merges[0].right == 1);
        CHECK(dend.merges[0].height == 1.0);
        CHECK(dend.merges[1].height == 10.0);
        CHECK(dend.merges[1].left == 2);
        CHECK(dend.merges[1].right == 3);  // the merge node
    }
}

TEST_CASE("distance ties break toward the smallest node pair") {
    const auto D = matrix_of({{0, 2, 2}, {2, 0, 2}, {2, 2, 0}});
    const auto dend = agglomerate(D, Linkage::Average);
    CHECK(dend.merges[0].left == 0);
    CHECK(dend.merges[0].right == 1);
}

TEST_CASE("linkages differ once clusters have several members") {
    // 0 and 1 close; 2 nearer to 1 than to 0
    const auto D = matrix_of({{0, 1, 4}, {1, 0, 2}, {4, 2, 0}});
    const auto single = agglomerate(D, Linkage::Single);
    const auto complete = agglomerate(D, Linkage::Complete);
    const auto average = agglomerate(D, Linkage::Average);
    CHECK(single.merges[1].height == 2.0);
    CHECK(complete.merges[1].height == 4.0);
    CHECK(average.merges[1].height == 3.0);
}

TEST_CASE("invalid matrices are rejected") {
    CHECK_THROWS_AS(agglomerate(matrix_of({{0}}), Linkage::Average),
                    InvalidMatrix);
    CHECK_THROWS_AS(
        agglomerate(matrix_of({{0, 1}, {2, 0}}), Linkage::Average),
        InvalidMatrix);
    CHECK_THROWS_AS(
        agglomerate(matrix_of({{0, -1}, {-1, 0}}), Linkage::Average),
        InvalidMatrix);
}

TEST_CASE("cut at zero isolates every team; beyond the top it joins them all") {
    const auto D = matrix_of({{0, 1, 10}, {1, 0, 10}, {10, 10, 0}});
    const auto dend = agglomerate(D, Linkage::Average);
    const auto singletons = cut(dend, D, 0.0);
    CHECK(singletons.clusters.size() == 3);
    const auto all = cut(dend, D, 100.0);
    REQUIRE(all.clusters.size() == 1);
    CHECK(all.clusters[0].members == std::vector<int>{0, 1, 2});
}

TEST_CASE("cuts partition the teams and coarsen monotonically") {
    CounterRng rng(41);
    const int n = 9;
    std::vector<std::vector<double>> rows(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            rows[i][j] = rows[j][i] = 0.5 + rng.uniform() * 9.5;
        }
    }
    const auto D = matrix_of(rows);
    const auto dend = agglomerate(D, Linkage::Average);
    std::size_t previous = n + 1;
    for (double t : {0.0, 1.0, 2.0, 4.0, 6.0, 8.0, 12.0}) {
        const auto cs = cut(dend, D, t);
        std::set<int> seen;
        for (const auto& c : cs.clusters) {
            for (int member : c.members) CHECK(seen.insert(member).second);
            CHECK(std::count(c.members.begin(), c.members.end(), c.medoid) == 1);
        }
        CHECK(seen.size() == n);
        CHECK(cs.clusters.size() <= previous);
        previous = cs.clusters.size();
    }
}

TEST_CASE("the medoid minimizes the summed distance, ties to the low index") {
    // team 1 is central; 0 and 2 are symmetric around it
    const auto D = matrix_of({{0, 1, 2}, {1, 0, 1}, {2, 1, 0}});
    const auto dend = agglomerate(D, Linkage::Average);
    const auto cs = cut(dend, D, 100.0);
    REQUIRE(cs.clusters.size() == 1);
    CHECK(cs.clusters[0].medoid == 1);

    const auto tie = matrix_of({{0, 1}, {1, 0}});
    const auto cs2 = cut(agglomerate(tie, Linkage::Average), tie, 100.0);
    CHECK(cs2.clusters[0].medoid == 0);
}

TEST_CASE("the synthetic fourteen-team set yields three clusters with a singleton") {
    const auto teams = synthetic_fourteen();
    const auto costs = ground_costs(GridSpec{});
    const auto D = distance_matrix(teams, costs);
    const auto dend = agglomerate(D, Linkage::Average);
    const auto cs = cut(dend, D, 6.0);
    REQUIRE(cs.clusters.size() == 3);
    std::vector<std::size_t> sizes;
    for (const auto& c : cs.clusters) sizes.push_back(c.members.size());
    std::sort(sizes.begin(), sizes.end());
    CHECK(sizes == std::vector<std::size_t>{1, 3, 10});
    // the singleton is the outlier (last team index)
    for (const auto& c : cs.clusters) {
        if (c.members.size() == 1) CHECK(c.members[0] == 13);
    }

    // well-separated clusters re-absorb every one of their members
    for (const auto& c : cs.clusters) {
        for (int member : c.members) {
            CHECK(classify(teams[std::size_t(member)], cs, teams, costs) == c.id);
        }
    }
}

TEST_CASE("classification returns the nearest medoid's cluster") {
    const auto costs = ground_costs(GridSpec{});
    std::vector<TeamDistribution> teams{point_mass(0, "a"), point_mass(1, "b"),
                                        point_mass(17, "c"), point_mass(16, "d")};
    const auto D = distance_matrix(teams, costs);
    const auto dend = agglomerate(D, Linkage::Average);
    const auto cs = cut(dend, D, 15.0);
    REQUIRE(cs.clusters.size() == 2);

    // a medoid's own distribution lands in its own cluster
    for (const auto& c : cs.clusters) {
        CHECK(classify(teams[c.medoid], cs, teams, costs) == c.id);
    }

    // a small perturbation of a medoid stays in its cluster
    auto nudged = teams[cs.clusters[0].medoid];
    nudged.mass[0] -= 1.0;
    nudged.mass[3] += 1.0;
    CHECK(classify(nudged, cs, teams, costs) == cs.clusters[0].id);

    // single-cluster sets classify everything to that cluster
    const auto whole = cut(dend, D, 1000.0);
    REQUIRE(whole.clusters.size() == 1);
    CHECK(classify(point_mass(9, "x"), whole, teams, costs) == 0);
}

}  // TEST_SUITE
