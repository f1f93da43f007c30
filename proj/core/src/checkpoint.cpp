#include "hierdoc/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "hierdoc/error.hpp"

namespace hierdoc::nn {

namespace {

constexpr char kMagic[8] = {'H', 'D', 'C', 'K', 'P', 'T', '0', '1'};

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes a little-endian host");

}  // namespace

void TensorArchive::add(std::string name, Tensor t) {
  if (has(name)) throw UsageError("duplicate tensor name in archive: " + name);
  names.push_back(std::move(name));
  tensors.push_back(std::move(t));
}

bool TensorArchive::has(std::string_view name) const {
  for (const auto& n : names)
    if (n == name) return true;
  return false;
}

const Tensor& TensorArchive::get(std::string_view name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return tensors[i];
  throw SchemaError("archive has no tensor named " + std::string(name));
}

void save_archive(const std::filesystem::path& path, const TensorArchive& archive) {
  Json header;
  header["schema_version"] = kCheckpointSchemaVersion;
  header["dtype"] = "f64";
  Json entries = Json::array();
  for (std::size_t i = 0; i < archive.names.size(); ++i)
    entries.push_back({{"name", archive.names[i]}, {"shape", archive.tensors[i].shape()}});
  header["tensors"] = std::move(entries);
  header["meta"] = archive.meta;
  const std::string hs = header.dump();

  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp);
    out.write(kMagic, sizeof kMagic);
    const std::uint64_t len = hs.size();
    out.write(reinterpret_cast<const char*>(&len), sizeof len);
    out.write(hs.data(), static_cast<std::streamsize>(hs.size()));
    for (const auto& t : archive.tensors)
      out.write(reinterpret_cast<const char*>(t.data()), static_cast<std::streamsize>(t.size() * sizeof(double)));
    if (!out) throw Error("short write to " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

TensorArchive load_archive(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + path.string());
  char magic[8];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof magic) != 0)
    throw SchemaError(path.string() + ": not a hierdoc archive (bad magic)");
  std::uint64_t len = 0;
  if (!in.read(reinterpret_cast<char*>(&len), sizeof len) || len > (1ull << 32))
    throw SchemaError(path.string() + ": truncated header");
  std::string hs(len, '\0');
  if (!in.read(hs.data(), static_cast<std::streamsize>(len))) throw SchemaError(path.string() + ": truncated header");
  Json header;
  try {
    header = Json::parse(hs);
  } catch (const Json::exception& e) {
    throw SchemaError(path.string() + ": malformed header: " + e.what());
  }
  if (header.value("schema_version", 0) != kCheckpointSchemaVersion)
    throw SchemaError(path.string() + ": unsupported schema_version");
  if (header.value("dtype", std::string{}) != "f64") throw SchemaError(path.string() + ": unsupported dtype");

  TensorArchive ar;
  ar.meta = header.value("meta", Json::object());
  for (const auto& e : header.at("tensors")) {
    auto shape = e.at("shape").get<std::vector<std::size_t>>();
    Tensor t(shape, 0.0);
    if (!in.read(reinterpret_cast<char*>(t.data()), static_cast<std::streamsize>(t.size() * sizeof(double))))
      throw SchemaError(path.string() + ": truncated payload for " + e.at("name").get<std::string>());
    ar.add(e.at("name").get<std::string>(), std::move(t));
  }
  return ar;
}

}  // namespace hierdoc::nn
