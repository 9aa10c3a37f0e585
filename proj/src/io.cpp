#include "io.hpp"

#include <charconv>
#include <fstream>

#include "types.hpp"

namespace essh {

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string format_double(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, end);
}

std::string csv_field(const std::string& raw) {
  if (raw.find_first_of(",\"\r\n") == std::string::npos) return raw;
  std::string out = "\"";
  for (char c : raw) {
    out += c;
    if (c == '"') out += '"';
  }
  out += '"';
  return out;
}

namespace {
std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    throw Error(ErrorCode::io_error, "cannot open " + path.string());
  }
  return f;
}
}  // namespace

void write_csv(const std::filesystem::path& path, const nlohmann::json& meta,
               const CsvDoc& doc) {
  auto f = open_out(path);
  f << "# " << meta.dump() << "\n";
  for (size_t i = 0; i < doc.columns.size(); ++i) {
    f << (i ? "," : "") << csv_field(doc.columns[i]);
  }
  f << "\n";
  for (const auto& row : doc.rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      f << (i ? "," : "") << csv_field(row[i]);
    }
    f << "\n";
  }
  if (!f) throw Error(ErrorCode::io_error, "write failed: " + path.string());
}

void write_json(const std::filesystem::path& path, const nlohmann::json& doc) {
  auto f = open_out(path);
  f << doc.dump(2) << "\n";
  if (!f) throw Error(ErrorCode::io_error, "write failed: " + path.string());
}

}  // namespace essh
