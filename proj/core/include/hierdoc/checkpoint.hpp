#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "hierdoc/json_io.hpp"
#include "hierdoc/tensor.hpp"

namespace hierdoc::nn {

/// A named tensor bundle with a free-form JSON header. On disk: the 8-byte magic
/// "HDCKPT01", a little-endian u64 header length, the JSON header (tensor names,
/// shapes, dtype, schema_version, plus `meta`), then raw little-endian f64
/// payloads in header order.
struct TensorArchive {
  Json meta = Json::object();
  std::vector<std::string> names;
  std::vector<Tensor> tensors;

  void add(std::string name, Tensor t);
  const Tensor& get(std::string_view name) const;
  bool has(std::string_view name) const;
};

inline constexpr int kCheckpointSchemaVersion = 1;

void save_archive(const std::filesystem::path& path, const TensorArchive& archive);
/// Throws SchemaError on a bad magic, truncated payload or unknown schema version.
TensorArchive load_archive(const std::filesystem::path& path);

}  // namespace hierdoc::nn
