#include "usc/table_io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <system_error>

#include "usc/errors.hpp"

namespace usc::io {

namespace {

std::string quote_csv(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + "\"";
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

Cell parse_field(const std::string& s) {
    if (s.empty()) return std::monostate{};
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec == std::errc() && res.ptr == s.data() + s.size()) return v;
    return s;
}

std::string cell_text(const Cell& c) {
    if (std::holds_alternative<double>(c)) return format_double(std::get<double>(c));
    if (std::holds_alternative<std::string>(c)) return quote_csv(std::get<std::string>(c));
    return {};
}

}  // namespace

std::size_t Table::column(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i] == name) return i;
    }
    throw InvalidSpec("no column named '" + name + "'");
}

std::string format_double(double v) {
    if (!std::isfinite(v)) return {};
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void write_csv(std::ostream& out, const Table& t, const std::optional<std::string>& comment) {
    if (comment) out << "# " << *comment << '\n';
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
        out << (i ? "," : "") << quote_csv(t.columns[i]);
    }
    out << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << cell_text(row[i]);
        out << '\n';
    }
    if (!out) throw IoError("failed writing CSV output");
}

Table read_csv(std::istream& in) {
    Table t;
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty() && line.front() == '#') continue;
        if (header) {
            t.columns = split_csv_line(line);
            header = false;
            continue;
        }
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != t.columns.size()) {
            throw IoError("CSV row has " + std::to_string(fields.size()) + " fields, expected " +
                          std::to_string(t.columns.size()));
        }
        std::vector<Cell> row;
        row.reserve(fields.size());
        for (const auto& f : fields) row.push_back(parse_field(f));
        t.rows.push_back(std::move(row));
    }
    if (header) throw IoError("CSV input has no header");
    return t;
}

void write_json(std::ostream& out, const Table& t, const nlohmann::ordered_json& spec) {
    nlohmann::ordered_json doc;
    doc["spec"] = spec;
    doc["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < row.size(); ++i) {
            const auto& c = row[i];
            if (std::holds_alternative<double>(c) && std::isfinite(std::get<double>(c))) {
                obj[t.columns[i]] = std::get<double>(c);
            } else if (std::holds_alternative<std::string>(c)) {
                obj[t.columns[i]] = std::get<std::string>(c);
            } else {
                obj[t.columns[i]] = nullptr;
            }
        }
        doc["rows"].push_back(std::move(obj));
    }
    out << doc.dump(2) << '\n';
    if (!out) throw IoError("failed writing JSON output");
}

Table read_json(std::istream& in) {
    nlohmann::ordered_json doc;
    try {
        doc = nlohmann::ordered_json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.contains("rows") || !doc["rows"].is_array()) throw IoError("JSON has no rows array");
    Table t;
    for (const auto& obj : doc["rows"]) {
        if (t.columns.empty()) {
            for (const auto& [key, _] : obj.items()) t.columns.push_back(key);
        }
        std::vector<Cell> row;
        for (const auto& name : t.columns) {
            const auto it = obj.find(name);
            if (it == obj.end() || it->is_null()) {
                row.emplace_back(std::monostate{});
            } else if (it->is_number()) {
                row.emplace_back(it->get<double>());
            } else if (it->is_string()) {
                row.emplace_back(it->get<std::string>());
            } else {
                throw IoError("unsupported JSON value in column '" + name + "'");
            }
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

}  // namespace usc::io
