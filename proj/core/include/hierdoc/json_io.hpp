#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace hierdoc {

using Json = nlohmann::ordered_json;

/// Reads a whole file; throws UsageError when it cannot be opened.
std::string read_file(const std::filesystem::path& path);

/// Writes atomically enough for our purposes: truncate then write.
void write_file(const std::filesystem::path& path, const std::string& contents);

/// One JSON document per non-empty line. Parse failures raise SchemaError naming the line.
std::vector<Json> read_jsonl(const std::filesystem::path& path);
void write_jsonl(const std::filesystem::path& path, const std::vector<Json>& rows);

Json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const Json& doc);

/// Field accessors that raise SchemaError with the field name instead of nlohmann's generic errors.
std::string require_string(const Json& obj, const char* key);
double require_number(const Json& obj, const char* key);

}  // namespace hierdoc
