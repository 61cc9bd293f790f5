#include "playbook/learner.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "playbook/rng.hpp"

namespace playbook {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

ComparisonOutcome mirrored(ComparisonOutcome o) {
    switch (o) {
        case ComparisonOutcome::FirstBetter: return ComparisonOutcome::SecondBetter;
        case ComparisonOutcome::SecondBetter: return ComparisonOutcome::FirstBetter;
        default: return o;
    }
}

std::uint64_t comparison_seed(const LearningConfig& cfg, const std::string& context,
                              int i, int j, int games_i, int games_j) {
    // Keyed on the evidence the two posteriors hold, not on the round number:
    // re-deciding a pair whose data did not change is then a no-op.
    std::ostringstream tag;
    tag << i << ':' << j << ':' << games_i << ':' << games_j;
    return CounterRng::derive_key(cfg.seed, context, tag.str());
}

}  // namespace

void LearningConfig::validate() const {
    if (games_per_round < 1) {
        throw DomainError("games_per_round must be at least 1");
    }
    if (max_games_per_formation < games_per_round) {
        throw DomainError("budget must allow at least one round");
    }
    if (!(prior.alpha > 0.0 && prior.beta > 0.0)) {
        throw DomainError("prior parameters must be positive");
    }
    if (!(hdi_mass > 0.0 && hdi_mass < 1.0)) {
        throw DomainError("hdi_mass must be in (0, 1)");
    }
    rope.validate();
}

ContextResult learn_context(Environment& env, const std::string& context,
                            const std::vector<std::string>& formations,
                            const LearningConfig& cfg) {
    cfg.validate();
    const int k = static_cast<int>(formations.size());
    if (k < 1) {
        throw EmptyInput("learn_context needs at least one formation");
    }

    ContextResult res;
    res.posteriors.assign(k, cfg.prior);
    res.games_per_formation.assign(k, 0);
    res.outcomes.assign(k, std::vector<ComparisonOutcome>(
                               k, ComparisonOutcome::Undecided));

    if (k == 1) {
        res.outcomes[0][0] = ComparisonOutcome::Equal;
        res.ranking = rank(res.posteriors, res.outcomes);
        res.chosen = 0;
        res.fully_resolved = true;
        return res;
    }

    // (games_i, games_j) at the time each pair was last decided.
    std::vector<std::vector<std::pair<int, int>>> decided_at(
        k, std::vector<std::pair<int, int>>(k, {-1, -1}));

    auto involved_in_undecided = [&](int i) {
        for (int j = 0; j < k; ++j) {
            if (j != i && res.outcomes[i][j] == ComparisonOutcome::Undecided) {
                return true;
            }
        }
        return false;
    };

    for (int round = 1;; ++round) {
        std::vector<int> active;
        for (int i = 0; i < k; ++i) {
            if (involved_in_undecided(i)) active.push_back(i);
        }
        if (active.empty()) {
            res.fully_resolved = true;
            break;
        }
        bool budget_hit = false;
        for (int i : active) {
            if (res.games_per_formation[i] + cfg.games_per_round >
                cfg.max_games_per_formation) {
                budget_hit = true;
                break;
            }
        }
        if (budget_hit) {
            res.fully_resolved = false;
            break;
        }

        for (int i : active) {
            for (int g = 0; g < cfg.games_per_round; ++g) {
                const GameObservation obs = env.run(context, formations[i]);
                res.posteriors[i] = update(res.posteriors[i], obs);
            }
            res.games_per_formation[i] += cfg.games_per_round;
            res.trace.push_back({round, formations[i], res.posteriors[i].alpha,
                                 res.posteriors[i].beta});
        }

        for (int i = 0; i < k; ++i) {
            for (int j = i + 1; j < k; ++j) {
                const std::pair<int, int> now{res.games_per_formation[i],
                                              res.games_per_formation[j]};
                if (decided_at[i][j] == now) continue;
                const auto est = difference_hdi(
                    res.posteriors[i], res.posteriors[j], cfg.hdi_mass,
                    cfg.method, cfg.draws,
                    comparison_seed(cfg, context, i, j, now.first, now.second),
                    cfg.grid_points);
                const auto outcome = decide(est, cfg.rope);
                res.outcomes[i][j] = outcome;
                res.outcomes[j][i] = mirrored(outcome);
                decided_at[i][j] = now;
                res.log.push_back({round, i, j, est, outcome});
            }
        }
    }

    res.games_used = 0;
    for (int g : res.games_per_formation) res.games_used += g;

    auto resolved = res.outcomes;
    for (int i = 0; i < k; ++i) {
        for (int j = i + 1; j < k; ++j) {
            if (resolved[i][j] == ComparisonOutcome::Equal ||
                resolved[i][j] == ComparisonOutcome::Undecided) {
                const auto pick = tie_break(res.posteriors[i], res.posteriors[j]);
                resolved[i][j] = pick == PairPick::First
                                     ? ComparisonOutcome::FirstBetter
                                     : ComparisonOutcome::SecondBetter;
                resolved[j][i] = mirrored(resolved[i][j]);
            }
        }
    }
    res.ranking = rank(res.posteriors, resolved);
    res.chosen = res.ranking.order.front();
    return res;
}

AssociationDB learn_all(
    Environment& env, const std::vector<ClusterContext>& clusters,
    const std::vector<std::string>& formations, const LearningConfig& cfg,
    const GridSpec& grid,
    std::vector<std::pair<std::string, ContextResult>>* details) {
    cfg.validate();
    if (clusters.empty()) {
        throw EmptyInput("learn_all needs at least one cluster");
    }
    for (const auto& c : clusters) {
        for (const auto& f : formations) {
            if (!env.has(std::to_string(c.cluster_id), f)) {
                throw MissingEnvironment("no environment for cluster " +
                                         std::to_string(c.cluster_id) +
                                         ", formation '" + f + "'");
            }
        }
    }

    AssociationDB db;
    db.config = cfg;
    db.grid = grid;
    db.records.reserve(clusters.size());
    for (const auto& c : clusters) {
        const auto res =
            learn_context(env, std::to_string(c.cluster_id), formations, cfg);
        AssociationRecord rec;
        rec.cluster_id = c.cluster_id;
        rec.medoid = c.medoid;
        rec.formation = formations[res.chosen];
        rec.alpha = res.posteriors[res.chosen].alpha;
        rec.beta = res.posteriors[res.chosen].beta;
        rec.hdi = hdi(res.posteriors[res.chosen], cfg.hdi_mass);
        if (res.ranking.order.size() > 1) {
            const auto& runner_up = res.posteriors[res.ranking.order[1]];
            rec.ratio = mean(res.posteriors[res.chosen]) / mean(runner_up);
        }
        rec.games_used = res.games_used;
        rec.fully_resolved = res.fully_resolved;
        db.records.push_back(std::move(rec));
        if (details != nullptr) {
            details->emplace_back(std::to_string(c.cluster_id), res);
        }
    }
    return db;
}

AuditReport per_team_audit(
    Environment& env,
    const std::vector<std::pair<std::string, int>>& team_clusters,
    const AssociationDB& db, const std::vector<std::string>& formations,
    const LearningConfig& cfg) {
    AuditReport report;
    for (const auto& [team, cluster_id] : team_clusters) {
        const AssociationRecord* rec = nullptr;
        for (const auto& r : db.records) {
            if (r.cluster_id == cluster_id) {
                rec = &r;
                break;
            }
        }
        if (rec == nullptr) {
            throw SchemaError("no association record for cluster " +
                              std::to_string(cluster_id));
        }
        const auto selected_it =
            std::find(formations.begin(), formations.end(), rec->formation);
        if (selected_it == formations.end()) {
            throw SchemaError("cluster " + std::to_string(cluster_id) +
                              " selects unknown formation '" + rec->formation +
                              "'");
        }
        const int selected = static_cast<int>(selected_it - formations.begin());

        const auto res = learn_context(env, team, formations, cfg);
        if (res.chosen == selected) continue;

        AuditRow row;
        row.team = team;
        row.cluster_id = cluster_id;
        row.selected_formation = rec->formation;
        row.selected_hdi = hdi(res.posteriors[selected], cfg.hdi_mass);
        row.best_formation = formations[res.chosen];
        row.best_hdi = hdi(res.posteriors[res.chosen], cfg.hdi_mass);
        row.ratio =
            mean(res.posteriors[res.chosen]) / mean(res.posteriors[selected]);
        report.rows.push_back(std::move(row));
    }
    return report;
}

namespace {

ordered_json grid_to_json(const GridSpec& grid) {
    return ordered_json{
        {"field",
         ordered_json{{"length_m", grid.field.length_m},
                      {"width_m", grid.field.width_m},
                      {"attack_third_min_x", grid.field.attack_third_min_x}}},
        {"cols", grid.cols},
        {"rows", grid.rows}};
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

}  // namespace

std::string db_to_json(const AssociationDB& db) {
    ordered_json doc;
    doc["version"] = db.version;
    doc["created_at"] = db.created_at;
    ordered_json cfg;
    cfg["games_per_round"] = db.config.games_per_round;
    cfg["max_games_per_formation"] = db.config.max_games_per_formation;
    cfg["prior"] = ordered_json{{"alpha", db.config.prior.alpha},
                                {"beta", db.config.prior.beta}};
    cfg["rope"] = ordered_json::array({db.config.rope.lo, db.config.rope.hi});
    cfg["hdi_mass"] = db.config.hdi_mass;
    cfg["method"] = db.config.method == DiffMethod::MonteCarlo ? "monte-carlo"
                                                               : "hdi-grid";
    cfg["draws"] = db.config.draws;
    cfg["grid_points"] = db.config.grid_points;
    cfg["seed"] = db.config.seed;
    cfg["grid"] = grid_to_json(db.grid);
    doc["config"] = std::move(cfg);
    doc["clusters"] = ordered_json::array();
    for (const auto& rec : db.records) {
        ordered_json c;
        c["id"] = rec.cluster_id;
        c["medoid"] = ordered_json{{"team_id", rec.medoid.team_id},
                                   {"mass", rec.medoid.mass}};
        c["formation"] = rec.formation;
        c["alpha"] = rec.alpha;
        c["beta"] = rec.beta;
        c["hdi"] = ordered_json::array({rec.hdi.lo, rec.hdi.hi});
        c["ratio"] = rec.ratio;
        c["games_used"] = rec.games_used;
        c["resolved"] = rec.fully_resolved ? "fully" : "budget-exhausted";
        doc["clusters"].push_back(std::move(c));
    }
    return doc.dump(2) + "\n";
}

AssociationDB db_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw SchemaError(std::string("association db is not valid JSON: ") +
                          e.what());
    }
    AssociationDB db;
    db.version = get_as<std::string>(doc, "version", "$");
    db.created_at = get_as<std::string>(doc, "created_at", "$");

    const json& cfg = require(doc, "config", "$");
    db.config.games_per_round = get_as<int>(cfg, "games_per_round", "$.config");
    db.config.max_games_per_formation =
        get_as<int>(cfg, "max_games_per_formation", "$.config");
    const json& prior = require(cfg, "prior", "$.config");
    db.config.prior.alpha = get_as<double>(prior, "alpha", "$.config.prior");
    db.config.prior.beta = get_as<double>(prior, "beta", "$.config.prior");
    const json& rope = require(cfg, "rope", "$.config");
    if (!rope.is_array() || rope.size() != 2) {
        throw SchemaError("bad type for field: $.config.rope");
    }
    db.config.rope.lo = rope[0].get<double>();
    db.config.rope.hi = rope[1].get<double>();
    db.config.hdi_mass = get_as<double>(cfg, "hdi_mass", "$.config");
    const auto method = get_as<std::string>(cfg, "method", "$.config");
    if (method == "monte-carlo") {
        db.config.method = DiffMethod::MonteCarlo;
    } else if (method == "hdi-grid") {
        db.config.method = DiffMethod::HdiGrid;
    } else {
        throw SchemaError("unknown method in $.config.method: '" + method + "'");
    }
    db.config.draws = get_as<long>(cfg, "draws", "$.config");
    db.config.grid_points = get_as<int>(cfg, "grid_points", "$.config");
    db.config.seed = get_as<std::uint64_t>(cfg, "seed", "$.config");

    const json& grid = require(cfg, "grid", "$.config");
    const json& field = require(grid, "field", "$.config.grid");
    db.grid.field.length_m = get_as<double>(field, "length_m", "$.config.grid.field");
    db.grid.field.width_m = get_as<double>(field, "width_m", "$.config.grid.field");
    db.grid.field.attack_third_min_x =
        get_as<double>(field, "attack_third_min_x", "$.config.grid.field");
    db.grid.cols = get_as<int>(grid, "cols", "$.config.grid");
    db.grid.rows = get_as<int>(grid, "rows", "$.config.grid");
    db.grid.validate();

    const json& clusters = require(doc, "clusters", "$");
    if (!clusters.is_array()) {
        throw SchemaError("bad type for field: $.clusters");
    }
    for (std::size_t i = 0; i < clusters.size(); ++i) {
        const std::string path = "$.clusters[" + std::to_string(i) + "]";
        const json& c = clusters[i];
        AssociationRecord rec;
        rec.cluster_id = get_as<int>(c, "id", path);
        const json& medoid = require(c, "medoid", path);
        rec.medoid.team_id = get_as<std::string>(medoid, "team_id", path + ".medoid");
        rec.medoid.mass =
            get_as<std::vector<double>>(medoid, "mass", path + ".medoid");
        if (static_cast<int>(rec.medoid.mass.size()) != db.grid.block_count()) {
            throw SchemaError(path + ".medoid.mass has " +
                              std::to_string(rec.medoid.mass.size()) +
                              " blocks, grid expects " +
                              std::to_string(db.grid.block_count()));
        }
        rec.medoid.total = 0.0;
        for (double m : rec.medoid.mass) rec.medoid.total += m;
        rec.formation = get_as<std::string>(c, "formation", path);
        rec.alpha = get_as<double>(c, "alpha", path);
        rec.beta = get_as<double>(c, "beta", path);
        const json& hdi_field = require(c, "hdi", path);
        if (!hdi_field.is_array() || hdi_field.size() != 2) {
            throw SchemaError("bad type for field: " + path + ".hdi");
        }
        rec.hdi = {hdi_field[0].get<double>(), hdi_field[1].get<double>(),
                   db.config.hdi_mass};
        rec.ratio = get_as<double>(c, "ratio", path);
        rec.games_used = get_as<int>(c, "games_used", path);
        const auto resolved = get_as<std::string>(c, "resolved", path);
        if (resolved == "fully") {
            rec.fully_resolved = true;
        } else if (resolved == "budget-exhausted") {
            rec.fully_resolved = false;
        } else {
            throw SchemaError("unknown value in " + path + ".resolved: '" +
                              resolved + "'");
        }
        db.records.push_back(std::move(rec));
    }
    return db;
}

void save_db(const AssociationDB& db, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write association db: " + path);
    }
    out << db_to_json(db);
    if (!out) {
        throw IoError("failed while writing association db: " + path);
    }
}

AssociationDB load_db(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open association db: " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return db_from_json(buf.str());
}

}  // namespace playbook
