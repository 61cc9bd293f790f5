#include "playbook/io.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace playbook {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

json read_json_file(const std::string& path, const char* what) {
    std::ifstream in(path);
    if (!in) {
        throw IoError(std::string("cannot open ") + what + ": " + path);
    }
    try {
        json doc;
        in >> doc;
        return doc;
    } catch (const json::exception& e) {
        throw ParseError(std::string(what) + " " + path + ": " + e.what());
    }
}

void write_text_file(const std::string& path, const std::string& text,
                     const char* what) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError(std::string("cannot write ") + what + ": " + path);
    }
    out << text;
    if (!out) {
        throw IoError(std::string("failed while writing ") + what + ": " + path);
    }
}

const json& require(const json& j, const char* key, const std::string& path) {
    if (!j.is_object() || !j.contains(key)) {
        throw SchemaError("missing field: " + path + "." + key);
    }
    return j.at(key);
}

template <typename T>
T get_as(const json& j, const char* key, const std::string& path) {
    try {
        return require(j, key, path).get<T>();
    } catch (const json::exception&) {
        throw SchemaError("bad type for field: " + path + "." + key);
    }
}

template <typename T>
T get_or(const json& j, const char* key, const std::string& path, T fallback) {
    if (!j.is_object() || !j.contains(key)) return fallback;
    return get_as<T>(j, key, path);
}

ordered_json grid_to_json(const GridSpec& grid) {
    return ordered_json{
        {"field",
         ordered_json{{"length_m", grid.field.length_m},
                      {"width_m", grid.field.width_m},
                      {"attack_third_min_x", grid.field.attack_third_min_x}}},
        {"cols", grid.cols},
        {"rows", grid.rows}};
}

GridSpec grid_from_json(const json& j, const std::string& path) {
    GridSpec grid;
    if (j.contains("field")) {
        const json& f = j.at("field");
        grid.field.length_m =
            get_or<double>(f, "length_m", path + ".field", grid.field.length_m);
        grid.field.width_m =
            get_or<double>(f, "width_m", path + ".field", grid.field.width_m);
        grid.field.attack_third_min_x =
            get_or<double>(f, "attack_third_min_x", path + ".field",
                           grid.field.attack_third_min_x);
    }
    grid.cols = get_or<int>(j, "cols", path, grid.cols);
    grid.rows = get_or<int>(j, "rows", path, grid.rows);
    grid.validate();
    return grid;
}

ordered_json team_to_json(const TeamDistribution& d) {
    return ordered_json{
        {"team_id", d.team_id}, {"mass", d.mass}, {"total", d.total}};
}

TeamDistribution team_from_json(const json& j, const std::string& path) {
    TeamDistribution d;
    d.team_id = get_as<std::string>(j, "team_id", path);
    d.mass = get_as<std::vector<double>>(j, "mass", path);
    d.total = 0.0;
    for (double m : d.mass) d.total += m;
    return d;
}

ordered_json hdi_to_json(const HdiInterval& h) {
    return ordered_json::array({h.lo, h.hi});
}

}  // namespace

void save_distributions(const DistributionSet& ds, const std::string& path) {
    ordered_json doc;
    doc["grid"] = grid_to_json(ds.grid);
    doc["teams"] = ordered_json::array();
    for (const auto& team : ds.teams) {
        doc["teams"].push_back(team_to_json(team));
    }
    write_text_file(path, doc.dump(2) + "\n", "distribution set");
}

DistributionSet load_distributions(const std::string& path) {
    const json doc = read_json_file(path, "distribution set");
    DistributionSet ds;
    ds.grid = grid_from_json(require(doc, "grid", "$"), "$.grid");
    const json& teams = require(doc, "teams", "$");
    if (!teams.is_array()) {
        throw SchemaError("bad type for field: $.teams");
    }
    for (std::size_t i = 0; i < teams.size(); ++i) {
        ds.teams.push_back(
            team_from_json(teams[i], "$.teams[" + std::to_string(i) + "]"));
        if (ds.teams.back().block_count() != ds.grid.block_count()) {
            throw SchemaError("$.teams[" + std::to_string(i) +
                              "].mass does not match the grid block count");
        }
    }
    return ds;
}

GridSpec load_grid(const std::string& path) {
    return grid_from_json(read_json_file(path, "grid spec"), "$");
}

ClusterReport make_cluster_report(const ClusterSet& cs, const DistanceMatrix& m,
                                  const std::vector<TeamDistribution>& ds,
                                  const GridSpec& grid) {
    ClusterReport report;
    report.threshold = cs.threshold;
    report.linkage = cs.linkage;
    report.grid = grid;
    for (const auto& c : cs.clusters) {
        ClusterReportEntry entry;
        entry.id = c.id;
        for (int member : c.members) {
            entry.members.push_back(m.team_ids.at(member));
        }
        entry.medoid = m.team_ids.at(c.medoid);
        entry.medoid_mass = ds.at(c.medoid);
        report.clusters.push_back(std::move(entry));
    }
    return report;
}

void save_cluster_report(const ClusterReport& report, const std::string& path) {
    ordered_json doc;
    doc["threshold"] = report.threshold;
    doc["linkage"] = to_string(report.linkage);
    doc["grid"] = grid_to_json(report.grid);
    doc["clusters"] = ordered_json::array();
    for (const auto& entry : report.clusters) {
        ordered_json c;
        c["id"] = entry.id;
        c["members"] = entry.members;
        c["medoid"] = entry.medoid;
        c["medoid_mass"] = team_to_json(entry.medoid_mass);
        doc["clusters"].push_back(std::move(c));
    }
    write_text_file(path, doc.dump(2) + "\n", "cluster report");
}

ClusterReport load_cluster_report(const std::string& path) {
    const json doc = read_json_file(path, "cluster report");
    ClusterReport report;
    report.threshold = get_as<double>(doc, "threshold", "$");
    report.linkage = linkage_from_string(get_as<std::string>(doc, "linkage", "$"));
    report.grid = grid_from_json(require(doc, "grid", "$"), "$.grid");
    const json& clusters = require(doc, "clusters", "$");
    if (!clusters.is_array()) {
        throw SchemaError("bad type for field: $.clusters");
    }
    for (std::size_t i = 0; i < clusters.size(); ++i) {
        const std::string where = "$.clusters[" + std::to_string(i) + "]";
        const json& c = clusters[i];
        ClusterReportEntry entry;
        entry.id = get_as<int>(c, "id", where);
        entry.members = get_as<std::vector<std::string>>(c, "members", where);
        entry.medoid = get_as<std::string>(c, "medoid", where);
        entry.medoid_mass =
            team_from_json(require(c, "medoid_mass", where), where + ".medoid_mass");
        report.clusters.push_back(std::move(entry));
    }
    return report;
}

LearnSetup load_learn_setup(const std::string& path) {
    const json doc = read_json_file(path, "learning config");
    LearnSetup setup;
    LearningConfig& cfg = setup.learning;
    cfg.games_per_round =
        get_or<int>(doc, "games_per_round", "$", cfg.games_per_round);
    cfg.max_games_per_formation = get_or<int>(doc, "max_games_per_formation", "$",
                                              cfg.max_games_per_formation);
    if (doc.contains("prior")) {
        const json& prior = doc.at("prior");
        cfg.prior.alpha = get_as<double>(prior, "alpha", "$.prior");
        cfg.prior.beta = get_as<double>(prior, "beta", "$.prior");
    }
    if (doc.contains("rope")) {
        const json& rope = doc.at("rope");
        if (!rope.is_array() || rope.size() != 2) {
            throw SchemaError("bad type for field: $.rope");
        }
        cfg.rope.lo = rope[0].get<double>();
        cfg.rope.hi = rope[1].get<double>();
    }
    cfg.hdi_mass = get_or<double>(doc, "hdi_mass", "$", cfg.hdi_mass);
    const auto method = get_or<std::string>(doc, "method", "$", "monte-carlo");
    if (method == "monte-carlo") {
        cfg.method = DiffMethod::MonteCarlo;
    } else if (method == "hdi-grid") {
        cfg.method = DiffMethod::HdiGrid;
    } else {
        throw SchemaError("unknown method in $.method: '" + method + "'");
    }
    cfg.draws = get_or<long>(doc, "draws", "$", cfg.draws);
    cfg.grid_points = get_or<int>(doc, "grid_points", "$", cfg.grid_points);
    cfg.seed = get_or<std::uint64_t>(doc, "seed", "$", cfg.seed);
    if (doc.contains("corner_kicks")) {
        const json& kicks = doc.at("corner_kicks");
        if (kicks.is_number_integer()) {
            setup.kicks_min = setup.kicks_max = kicks.get<int>();
        } else if (kicks.is_array() && kicks.size() == 2) {
            setup.kicks_min = kicks[0].get<int>();
            setup.kicks_max = kicks[1].get<int>();
        } else {
            throw SchemaError("$.corner_kicks must be an int or [lo, hi]");
        }
    }
    cfg.validate();
    if (setup.kicks_min < 1 || setup.kicks_min > setup.kicks_max) {
        throw SchemaError("$.corner_kicks must satisfy 1 <= lo <= hi");
    }
    return setup;
}

void save_learn_setup(const LearnSetup& setup, const std::string& path) {
    const LearningConfig& cfg = setup.learning;
    ordered_json doc;
    doc["games_per_round"] = cfg.games_per_round;
    doc["max_games_per_formation"] = cfg.max_games_per_formation;
    doc["prior"] =
        ordered_json{{"alpha", cfg.prior.alpha}, {"beta", cfg.prior.beta}};
    doc["rope"] = ordered_json::array({cfg.rope.lo, cfg.rope.hi});
    doc["hdi_mass"] = cfg.hdi_mass;
    doc["method"] =
        cfg.method == DiffMethod::MonteCarlo ? "monte-carlo" : "hdi-grid";
    doc["draws"] = cfg.draws;
    doc["grid_points"] = cfg.grid_points;
    doc["seed"] = cfg.seed;
    if (setup.kicks_min == setup.kicks_max) {
        doc["corner_kicks"] = setup.kicks_min;
    } else {
        doc["corner_kicks"] = ordered_json::array({setup.kicks_min, setup.kicks_max});
    }
    write_text_file(path, doc.dump(2) + "\n", "learning config");
}

TeamDistribution parse_query_json(const std::string& text,
                                  const GridSpec& grid) {
    json req;
    try {
        req = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(e.what());
    }
    if (!req.is_object()) {
        throw ParseError("request must be a JSON object");
    }
    TeamDistribution query;
    query.team_id = "query";
    if (req.contains("mass")) {
        const json& mass = req["mass"];
        if (!mass.is_array()) {
            throw ParseError("'mass' must be an array of numbers");
        }
        if (static_cast<int>(mass.size()) != grid.block_count()) {
            throw DimensionMismatch(
                "'mass' needs " + std::to_string(grid.block_count()) +
                " entries, got " + std::to_string(mass.size()));
        }
        for (const auto& v : mass) {
            if (!v.is_number()) {
                throw ParseError("'mass' entries must be numbers");
            }
            query.mass.push_back(v.get<double>());
            query.total += query.mass.back();
        }
        return query;
    }
    if (req.contains("positions")) {
        const json& positions = req["positions"];
        if (!positions.is_array()) {
            throw ParseError("'positions' must be an array of [x, y] pairs");
        }
        if (positions.size() != 11) {
            throw DimensionMismatch("'positions' needs 11 entries, got " +
                                    std::to_string(positions.size()));
        }
        PlayerSnapshot snap;
        snap.team_id = "query";
        snap.event_id = "request";
        for (const auto& pos : positions) {
            if (!pos.is_array() || pos.size() != 2 || !pos[0].is_number() ||
                !pos[1].is_number()) {
                throw DimensionMismatch("each position must be an [x, y] pair");
            }
            snap.positions.emplace_back(pos[0].get<double>(),
                                        pos[1].get<double>());
        }
        return snapshot_to_distribution(snap, grid);
    }
    throw ParseError("request needs 'mass' or 'positions'");
}

void save_audit_report(const AuditReport& report, std::uint64_t seed,
                       const std::string& path) {
    ordered_json doc;
    doc["seed"] = seed;
    doc["rows"] = ordered_json::array();
    for (const auto& row : report.rows) {
        ordered_json r;
        r["team"] = row.team;
        r["cluster"] = row.cluster_id;
        r["selected_formation"] = row.selected_formation;
        r["selected_hdi"] = hdi_to_json(row.selected_hdi);
        r["best_formation"] = row.best_formation;
        r["best_hdi"] = hdi_to_json(row.best_hdi);
        r["ratio"] = row.ratio;
        doc["rows"].push_back(std::move(r));
    }
    write_text_file(path, doc.dump(2) + "\n", "audit report");
}

}  // namespace playbook
