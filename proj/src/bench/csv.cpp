#include "adukf/bench/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include "adukf/errors.hpp"

namespace adukf::bench {

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

std::string join(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) out += ',';
        out += fields[i];
    }
    return out;
}

}  // namespace

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_number(std::string_view field) {
    if (field == "nan") return std::nan("");
    if (field == "inf") return INFINITY;
    if (field == "-inf") return -INFINITY;
    double v = 0.0;
    const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
    if (res.ec != std::errc{} || res.ptr != field.data() + field.size() || field.empty()) {
        throw ConfigError("csv: '" + std::string(field) + "' is not a number");
    }
    return v;
}

std::string to_csv_text(const CsvTable& table) {
    std::string out;
    if (!table.metadata.empty()) {
        out += "# ";
        bool first = true;
        for (const auto& [k, v] : table.metadata) {
            if (!first) out += ',';
            first = false;
            out += k + "=" + v;
        }
        out += '\n';
    }
    out += join(table.header) + '\n';
    for (const auto& row : table.rows) {
        out += join(row) + '\n';
    }
    return out;
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw ConfigError("cannot write '" + path.string() + "'");
    }
    out << to_csv_text(table);
    if (!out) {
        throw ConfigError("write failed for '" + path.string() + "'");
    }
}

CsvTable parse_csv(std::string_view text, const std::vector<std::string>& expected_header) {
    if (text.empty() || text.back() != '\n') {
        throw ConfigError("csv: file must be non-empty and newline-terminated");
    }
    text.remove_suffix(1);
    const auto lines = split(text, '\n');

    CsvTable table;
    std::size_t i = 0;
    if (!lines.empty() && lines[0].starts_with("#")) {
        std::string_view meta = lines[0].substr(1);
        if (meta.starts_with(" ")) meta.remove_prefix(1);
        for (std::string_view kv : split(meta, ',')) {
            const std::size_t eq = kv.find('=');
            if (eq == std::string_view::npos) {
                throw ConfigError("csv: malformed metadata entry '" + std::string(kv) + "'");
            }
            table.metadata.emplace(std::string(kv.substr(0, eq)), std::string(kv.substr(eq + 1)));
        }
        i = 1;
    }
    if (i >= lines.size()) {
        throw ConfigError("csv: missing header");
    }
    for (std::string_view h : split(lines[i], ',')) table.header.emplace_back(h);
    if (table.header != expected_header) {
        throw ConfigError("csv: header mismatch, expected '" + join(expected_header) + "' got '" +
                          std::string(lines[i]) + "'");
    }
    for (++i; i < lines.size(); ++i) {
        const auto fields = split(lines[i], ',');
        if (fields.size() != expected_header.size()) {
            throw ConfigError("csv: line " + std::to_string(i + 1) + " has " +
                              std::to_string(fields.size()) + " fields, expected " +
                              std::to_string(expected_header.size()));
        }
        table.rows.emplace_back(fields.begin(), fields.end());
    }
    return table;
}

CsvTable read_csv(const std::filesystem::path& path,
                  const std::vector<std::string>& expected_header) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot open '" + path.string() + "'");
    }
    std::ostringstream text;
    text << in.rdbuf();
    return parse_csv(text.str(), expected_header);
}

}  // namespace adukf::bench
