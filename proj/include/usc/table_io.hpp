// table_io.hpp: flat result tables and their CSV / JSON serialisation.
//
// Doubles are written in shortest round-trip form, so reading a file back
// reproduces every value bit for bit. Empty cells mark values that could not
// be computed at that grid point.

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace usc::io {

using Cell = std::variant<std::monostate, double, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    // Index of `name` in columns; throws InvalidSpec if absent.
    std::size_t column(const std::string& name) const;
};

std::string format_double(double v);

// `comment` (if any) becomes a leading "# ..." line.
void write_csv(std::ostream& out, const Table& t, const std::optional<std::string>& comment = {});
// Skips "#" comment lines; numeric fields become doubles, empty fields empty cells.
Table read_csv(std::istream& in);

// {"spec": spec, "rows": [{column: value-or-null, ...}, ...]}
void write_json(std::ostream& out, const Table& t, const nlohmann::ordered_json& spec);
Table read_json(std::istream& in);

}  // namespace usc::io
