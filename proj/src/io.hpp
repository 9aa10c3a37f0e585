#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace essh {

// 64-bit FNV-1a, used to fingerprint configs in output headers
std::uint64_t fnv1a(std::string_view s);

// shortest round-trip decimal form; locale-independent and deterministic
std::string format_double(double v);

// RFC-4180: quote fields containing comma, quote, or newline
std::string csv_field(const std::string& raw);

struct CsvDoc {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

// writes `# <metadata JSON>` followed by an RFC-4180 body; the metadata is
// emitted with sorted keys so identical configs give identical bytes
void write_csv(const std::filesystem::path& path, const nlohmann::json& meta,
               const CsvDoc& doc);

void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

}  // namespace essh
