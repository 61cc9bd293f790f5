#include <string>
#include <vector>

#include "doctest.h"
#include "playbook/rng.hpp"
#include "playbook/selector.hpp"
#include "playbook/service.hpp"
#include "test_util.hpp"

using namespace playbook;

namespace {

TeamDistribution block_team(const std::string& id, int block) {
    TeamDistribution d;
    d.team_id = id;
    d.mass.assign(19, 0.0);
    d.mass[block] = 11.0;
    d.total = 11.0;
    return d;
}

AssociationDB sample_db() {
    AssociationDB db;
    db.grid = GridSpec{};
    auto add = [&db](int id, int block, const std::string& formation) {
        AssociationRecord rec;
        rec.cluster_id = id;
        rec.medoid = block_team("medoid" + std::to_string(id), block);
        rec.formation = formation;
        rec.alpha = 40.0 + id;
        rec.beta = 70.0;
        rec.hdi = {0.2 + 0.1 * id, 0.3 + 0.1 * id, 0.95};
        rec.ratio = 1.5;
        rec.games_used = 60;
        db.records.push_back(rec);
    };
    add(0, 0, "F1");
    add(1, 9, "F2");
    add(2, 17, "F3");
    return db;
}

}  // namespace

TEST_SUITE("selector") {

TEST_CASE("each medoid selects its own cluster at distance zero") {
    const auto db = sample_db();
    const auto costs = ground_costs(db.grid);
    for (const auto& rec : db.records) {
        const auto res = select(rec.medoid, db, costs);
        CHECK(res.cluster_id == rec.cluster_id);
        CHECK(res.formation == rec.formation);
        CHECK(res.distance <= 1e-12);
        CHECK(res.hdi.lo == rec.hdi.lo);
    }
}

TEST_CASE("a single-cluster db always answers that cluster") {
    auto db = sample_db();
    db.records.resize(1);
    const auto costs = ground_costs(db.grid);
    CounterRng rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        TeamDistribution q;
        q.team_id = "q";
        q.mass.assign(19, 0.0);
        for (auto& m : q.mass) m = rng.uniform_int(0, 3);
        q.mass[0] += 1.0;
        q.total = 0.0;
        for (double m : q.mass) q.total += m;
        CHECK(select(q, db, costs).cluster_id == 0);
    }
}

TEST_CASE("queries resolve to the constructed nearest medoid") {
    const auto db = sample_db();
    const auto costs = ground_costs(db.grid);
    auto near_two = block_team("q", 17);
    near_two.mass[17] = 10.0;
    near_two.mass[16] = 1.0;
    const auto res = select(near_two, db, costs);
    CHECK(res.cluster_id == 2);
    CHECK(res.formation == "F3");
    CHECK(res.distance > 0.0);
    CHECK(res.distance < 2.0);
}

TEST_CASE("empty dbs and mismatched shapes are rejected") {
    AssociationDB empty;
    const auto costs = ground_costs(GridSpec{});
    CHECK_THROWS_AS(select(block_team("q", 0), empty, costs), EmptyDb);
    const auto db = sample_db();
    TeamDistribution tiny;
    tiny.team_id = "q";
    tiny.mass = {1.0, 2.0};
    tiny.total = 3.0;
    CHECK_THROWS_AS(select(tiny, db, costs), DimensionMismatch);
}

TEST_CASE("selection serializes to one compact JSON line") {
    SelectionResult r;
    r.cluster_id = 1;
    r.formation = "F2";
    r.hdi = {0.25, 0.5, 0.95};
    r.distance = 1.5;
    CHECK(selection_json_line(r) ==
          "{\"cluster\":1,\"formation\":\"F2\",\"hdi\":[0.25,0.5],"
          "\"distance\":1.5}");
}

TEST_CASE("the service answers exactly like the library") {
    const auto db = sample_db();
    const auto costs = ground_costs(db.grid);
    SelectorService service(db, "127.0.0.1", 0);
    service.start();
    REQUIRE(service.port() > 0);

    test::LineClient client(service.port());
    std::string payload;
    std::vector<std::string> expected;
    CounterRng rng(9);
    for (int req = 0; req < 100; ++req) {
        TeamDistribution q;
        q.team_id = "query";
        q.mass.assign(19, 0.0);
        q.total = 0.0;
        for (auto& m : q.mass) {
            m = double(rng.uniform_int(0, 3));
            q.total += m;
        }
        if (q.total == 0.0) {
            q.mass[5] = 1.0;
            q.total = 1.0;
        }
        std::string line = "{\"mass\":[";
        for (int b = 0; b < 19; ++b) {
            line += std::to_string(int(q.mass[b]));
            if (b != 18) line += ',';
        }
        line += "]}";
        payload += line + "\n";
        expected.push_back(selection_json_line(select(q, db, costs)));
    }
    client.send_raw(payload);
    const auto responses = client.read_lines(expected.size());
    REQUIRE(responses.size() == expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) {
        CHECK(responses[i] == expected[i]);
    }
    service.stop();
}

TEST_CASE("positions requests run through the grid") {
    const auto db = sample_db();
    SelectorService service(db, "127.0.0.1", 0);
    service.start();
    test::LineClient client(service.port());
    // eleven players on the first block's centroid
    std::string line = "{\"positions\":[";
    for (int p = 0; p < 11; ++p) {
        line += "[23.33,-28.33]";
        if (p != 10) line += ',';
    }
    line += "]}\n";
    client.send_raw(line);
    const auto responses = client.read_lines(1);
    CHECK(responses[0].find("\"cluster\":0") != std::string::npos);
    service.stop();
}

TEST_CASE("the service survives malformed lines and keeps answering") {
    const auto db = sample_db();
    const auto costs = ground_costs(db.grid);
    SelectorService service(db, "127.0.0.1", 0);
    service.start();
    test::LineClient client(service.port());
    client.send_raw("this is not json\n");
    auto r1 = client.read_lines(1);
    CHECK(r1[0].find("\"error\":\"PARSE\"") != std::string::npos);

    client.send_raw("{\"mass\":[1,2]}\n");
    auto r2 = client.read_lines(1);
    CHECK(r2[0].find("\"error\":\"DIMENSION\"") != std::string::npos);

    client.send_raw("{\"positions\":[[1,2]]}\n");
    auto r3 = client.read_lines(1);
    CHECK(r3[0].find("\"error\":\"DIMENSION\"") != std::string::npos);

    client.send_raw("{\"other\":1}\n");
    auto r4 = client.read_lines(1);
    CHECK(r4[0].find("\"error\":\"PARSE\"") != std::string::npos);

    // all-zero mass cannot be classified
    std::string zeros = "{\"mass\":[0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0]}\n";
    client.send_raw(zeros);
    auto r5 = client.read_lines(1);
    CHECK(r5[0].find("\"error\":\"INTERNAL\"") != std::string::npos);

    // and the connection still works
    const auto good = sample_db().records[1].medoid;
    std::string line = "{\"mass\":[";
    for (int b = 0; b < 19; ++b) {
        line += std::to_string(int(good.mass[b]));
        if (b != 18) line += ',';
    }
    line += "]}\n";
    client.send_raw(line);
    auto r6 = client.read_lines(1);
    CHECK(r6[0] == selection_json_line(select(good, db, costs)));
    service.stop();
}

TEST_CASE("concurrent connections are served independently and in order") {
    const auto db = sample_db();
    const auto costs = ground_costs(db.grid);
    SelectorService service(db, "127.0.0.1", 0);
    service.start();

    test::LineClient a(service.port());
    test::LineClient b(service.port());
    std::string line0 = "{\"mass\":[11,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0]}\n";
    std::string line2 = "{\"mass\":[0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,11,0]}\n";
    a.send_raw(line0 + line2);
    b.send_raw(line2 + line0);
    const auto ra = a.read_lines(2);
    const auto rb = b.read_lines(2);
    CHECK(ra[0].find("\"cluster\":0") != std::string::npos);
    CHECK(ra[1].find("\"cluster\":2") != std::string::npos);
    CHECK(rb[0].find("\"cluster\":2") != std::string::npos);
    CHECK(rb[1].find("\"cluster\":0") != std::string::npos);
    service.stop();
}

TEST_CASE("an empty db cannot be served") {
    AssociationDB empty;
    CHECK_THROWS_AS(SelectorService(empty, "127.0.0.1", 0), EmptyDb);
}

}  // TEST_SUITE
