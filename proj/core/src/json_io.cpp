#include "hierdoc/json_io.hpp"

#include <fstream>
#include <sstream>

#include "hierdoc/error.hpp"

namespace hierdoc {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw UsageError("cannot write file: " + path.string());
  out << contents;
  if (!out) throw Error("write failed: " + path.string());
}

std::vector<Json> read_jsonl(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  std::vector<Json> rows;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      rows.push_back(Json::parse(line));
    } catch (const nlohmann::json::parse_error& e) {
      throw SchemaError(path.string() + ":" + std::to_string(lineno) + ": invalid JSON (" + e.what() + ")");
    }
  }
  return rows;
}

void write_jsonl(const std::filesystem::path& path, const std::vector<Json>& rows) {
  std::string out;
  for (const auto& row : rows) {
    out += row.dump();
    out += '\n';
  }
  write_file(path, out);
}

Json read_json(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(path.string() + ": invalid JSON (" + e.what() + ")");
  }
}

void write_json(const std::filesystem::path& path, const Json& doc) { write_file(path, doc.dump(2) + "\n"); }

std::string require_string(const Json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) throw SchemaError(std::string("missing string field '") + key + "'");
  return it->get<std::string>();
}

double require_number(const Json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_number()) throw SchemaError(std::string("missing numeric field '") + key + "'");
  return it->get<double>();
}

}  // namespace hierdoc
