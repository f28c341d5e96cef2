#pragma once
// Plain CSV with an optional leading "# key=value,key=value" metadata line.
// Numbers are written with the shortest round-trip representation.

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace adukf::bench {

std::string format_number(double v);

using Metadata = std::map<std::string, std::string, std::less<>>;

struct CsvTable {
    Metadata metadata;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

/// Serializes to text. A metadata line is written only when metadata is non-empty.
std::string to_csv_text(const CsvTable& table);
void write_csv(const std::filesystem::path& path, const CsvTable& table);

/// Strict parse: the header must equal `expected_header` exactly, every row must
/// have the same number of fields and the text must end with a newline.
/// Throws ConfigError on any mismatch.
CsvTable parse_csv(std::string_view text, const std::vector<std::string>& expected_header);
CsvTable read_csv(const std::filesystem::path& path,
                  const std::vector<std::string>& expected_header);

/// Parses a full field as a double. Throws ConfigError on trailing characters.
double parse_number(std::string_view field);

}  // namespace adukf::bench
