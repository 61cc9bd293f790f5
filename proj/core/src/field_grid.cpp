#include "playbook/field_grid.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace playbook {

namespace {

constexpr double kFieldTolerance = 1.0;  // meters of slack at the touchlines

double parse_real(const std::string& token, int line_no) {
    double value = 0.0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) {
        throw ParseError("line " + std::to_string(line_no) +
                         ": not a number: '" + token + "'");
    }
    return value;
}

}  // namespace

void GridSpec::validate() const {
    if (field.length_m <= 0.0 || field.width_m <= 0.0) {
        throw DomainError("field dimensions must be positive");
    }
    const double half = field.length_m / 2.0;
    if (!(field.attack_third_min_x > -half && field.attack_third_min_x < half)) {
        throw DomainError("attack_third_min_x must lie strictly inside the field");
    }
    if (cols < 1 || rows < 1) {
        throw DomainError("grid must have at least one column and one row");
    }
}

int assign_block(std::pair<double, double> pos, const GridSpec& grid) {
    grid.validate();
    const auto [x, y] = pos;
    const double half_len = grid.field.length_m / 2.0;
    const double half_wid = grid.field.width_m / 2.0;
    if (std::abs(x) > half_len + kFieldTolerance ||
        std::abs(y) > half_wid + kFieldTolerance) {
        std::ostringstream msg;
        msg << "position (" << x << ", " << y << ") is outside the field";
        throw PositionOutOfField(msg.str());
    }
    if (x < grid.field.attack_third_min_x) {
        return grid.remainder_block();
    }
    const double cell_w = (half_len - grid.field.attack_third_min_x) / grid.cols;
    const double cell_h = grid.field.width_m / grid.rows;
    int col = static_cast<int>(std::floor((x - grid.field.attack_third_min_x) / cell_w));
    int row = static_cast<int>(std::floor((y + half_wid) / cell_h));
    col = std::clamp(col, 0, grid.cols - 1);
    row = std::clamp(row, 0, grid.rows - 1);
    return row * grid.cols + col;
}

TeamDistribution snapshot_to_distribution(const PlayerSnapshot& snap,
                                          const GridSpec& grid) {
    if (snap.positions.size() != 11) {
        throw WrongPlayerCount("snapshot for team '" + snap.team_id + "' has " +
                               std::to_string(snap.positions.size()) +
                               " positions, expected 11");
    }
    TeamDistribution d;
    d.team_id = snap.team_id;
    d.mass.assign(grid.block_count(), 0.0);
    for (const auto& pos : snap.positions) {
        d.mass[assign_block(pos, grid)] += 1.0;
    }
    d.total = 11.0;
    return d;
}

TeamDistribution aggregate_distributions(const std::vector<TeamDistribution>& ds) {
    if (ds.empty()) {
        throw EmptyInput("cannot aggregate zero distributions");
    }
    const auto& head = ds.front();
    TeamDistribution out;
    out.team_id = head.team_id;
    out.mass.assign(head.mass.size(), 0.0);
    for (const auto& d : ds) {
        if (d.team_id != head.team_id) {
            throw MixedTeams("aggregate mixes teams '" + head.team_id +
                             "' and '" + d.team_id + "'");
        }
        if (d.mass.size() != head.mass.size()) {
            throw DimensionMismatch("distributions disagree on block count");
        }
        for (std::size_t i = 0; i < d.mass.size(); ++i) {
            out.mass[i] += d.mass[i];
        }
    }
    const double n = static_cast<double>(ds.size());
    double total = 0.0;
    for (auto& m : out.mass) {
        m /= n;
        total += m;
    }
    out.total = total;
    return out;
}

std::vector<PlayerSnapshot> parse_snapshots(std::istream& in) {
    std::vector<PlayerSnapshot> out;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;

        std::vector<std::string> fields;
        std::size_t start = 0;
        for (;;) {
            const std::size_t comma = line.find(',', start);
            fields.push_back(line.substr(start, comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (fields.size() < 2 || (fields.size() - 2) % 2 != 0) {
            throw ParseError("line " + std::to_string(line_no) +
                             ": expected team_id,event_id followed by x,y pairs");
        }
        const std::size_t pairs = (fields.size() - 2) / 2;
        if (pairs != 11) {
            throw WrongPlayerCount("line " + std::to_string(line_no) + ": has " +
                                   std::to_string(pairs) +
                                   " positions, expected 11");
        }
        PlayerSnapshot snap;
        snap.team_id = fields[0];
        snap.event_id = fields[1];
        if (snap.team_id.empty()) {
            throw ParseError("line " + std::to_string(line_no) + ": empty team_id");
        }
        snap.positions.reserve(11);
        for (std::size_t p = 0; p < pairs; ++p) {
            const double x = parse_real(fields[2 + 2 * p], line_no);
            const double y = parse_real(fields[3 + 2 * p], line_no);
            snap.positions.emplace_back(x, y);
        }
        out.push_back(std::move(snap));
    }
    return out;
}

std::vector<PlayerSnapshot> parse_snapshots_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open snapshot file: " + path);
    }
    return parse_snapshots(in);
}

}  // namespace playbook
