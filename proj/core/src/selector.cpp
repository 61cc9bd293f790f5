#include "playbook/selector.hpp"

#include <limits>

#include <nlohmann/json.hpp>

namespace playbook {

SelectionResult select(const TeamDistribution& opponent,
                       const AssociationDB& db, const GroundCosts& costs) {
    if (db.records.empty()) {
        throw EmptyDb("association db has no clusters");
    }
    const AssociationRecord* best = nullptr;
    double best_dist = std::numeric_limits<double>::infinity();
    for (const auto& rec : db.records) {
        const double dist = emd(opponent, rec.medoid, costs);
        if (dist < best_dist ||
            (dist == best_dist && best != nullptr &&
             rec.cluster_id < best->cluster_id)) {
            best_dist = dist;
            best = &rec;
        }
    }
    return {best->cluster_id, best->formation, best->hdi, best_dist};
}

std::string selection_json_line(const SelectionResult& r) {
    nlohmann::ordered_json doc;
    doc["cluster"] = r.cluster_id;
    doc["formation"] = r.formation;
    doc["hdi"] = nlohmann::ordered_json::array({r.hdi.lo, r.hdi.hi});
    doc["distance"] = r.distance;
    return doc.dump();
}

}  // namespace playbook
