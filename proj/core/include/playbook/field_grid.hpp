#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "playbook/errors.hpp"

namespace playbook {

/// Pitch geometry. The attacking third (x >= attack_third_min_x) is the part
/// of the field that gets partitioned into grid blocks; everything behind it
/// collapses into a single remainder block.
struct FieldSpec {
    double length_m = 105.0;
    double width_m = 68.0;
    double attack_third_min_x = 17.5;
};

struct GridSpec {
    FieldSpec field{};
    int cols = 3;  // along field length, within the attacking third
    int rows = 6;  // along field width

    int block_count() const { return cols * rows + 1; }
    int remainder_block() const { return cols * rows; }

    /// Throws DomainError if the geometry is inconsistent.
    void validate() const;
};

/// Positions of the 11 defending players at one corner-kick event.
struct PlayerSnapshot {
    std::string team_id;
    std::string event_id;
    std::vector<std::pair<double, double>> positions;  // (x, y) meters
};

/// Player mass per grid block; the opponent-defense fingerprint.
struct TeamDistribution {
    std::string team_id;
    std::vector<double> mass;
    double total = 0.0;

    int block_count() const { return static_cast<int>(mass.size()); }
};

/// Block index for a field position. Interior cells are half-open, closed at
/// the field's maximum edge, so boundary points belong to the cell with the
/// larger index along the crossing axis. Positions behind the attacking third
/// map to the remainder block.
int assign_block(std::pair<double, double> pos, const GridSpec& grid);

/// Counts the snapshot's players per block; total mass is always 11.
TeamDistribution snapshot_to_distribution(const PlayerSnapshot& snap,
                                          const GridSpec& grid);

/// Element-wise mean over several distributions of the same team.
TeamDistribution aggregate_distributions(const std::vector<TeamDistribution>& ds);

/// Reads snapshot records from CSV: team_id,event_id,x1,y1,...,x11,y11.
/// Lines starting with '#' and blank lines are skipped.
std::vector<PlayerSnapshot> parse_snapshots(std::istream& in);
std::vector<PlayerSnapshot> parse_snapshots_file(const std::string& path);

}  // namespace playbook
