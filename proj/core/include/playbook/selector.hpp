#pragma once

#include <string>

#include "playbook/emd.hpp"
#include "playbook/learner.hpp"

namespace playbook {

struct SelectionResult {
    int cluster_id = 0;
    std::string formation;
    HdiInterval hdi{};
    double distance = 0.0;  // EMD to the winning medoid
};

/// Nearest-medoid classification against the association db; ties go to the
/// smallest cluster id. The record's stored HDI is returned as confidence,
/// together with the distance so callers can apply their own cutoff.
SelectionResult select(const TeamDistribution& opponent,
                       const AssociationDB& db, const GroundCosts& costs);

/// Compact JSON object, exactly the line the TCP service writes back:
/// {"cluster":id,"formation":id,"hdi":[lo,hi],"distance":d}
std::string selection_json_line(const SelectionResult& r);

}  // namespace playbook
