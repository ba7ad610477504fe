#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "confspec/discretization.hpp"

namespace confspec::table_cache {

namespace {

constexpr char kMagic[4] = {'C', 'S', 'T', 'B'};

template <class T>
void put(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
bool get(std::istream& in, T& v) {
  return static_cast<bool>(in.read(reinterpret_cast<char*>(&v), sizeof(T)));
}

}  // namespace

std::string file_name(Backend b, int n, int node_count) {
  return to_string(b) + "_n" + std::to_string(n) + "_N" + std::to_string(node_count) + ".bin";
}

std::string default_directory() {
  const char* env = std::getenv("CONFSPEC_CACHE_DIR");
  return env ? std::string(env) : std::string();
}

// Layout: magic[4] version:u8 backend:u8 n:u32 N:u32, then x[N], w[N],
// synthesis[N*N] column-major, all little-endian doubles.
std::optional<ZonalSphereSpace::Tables> load(const std::string& dir, int n, int node_count) {
  const auto path = std::filesystem::path(dir) / file_name(Backend::ZonalSphere, n, node_count);
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  char magic[4];
  std::uint8_t version = 0, backend = 0;
  std::uint32_t fn = 0, fN = 0;
  if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) return std::nullopt;
  if (!get(in, version) || version != kVersion) return std::nullopt;
  if (!get(in, backend) || backend != static_cast<std::uint8_t>(Backend::ZonalSphere)) return std::nullopt;
  if (!get(in, fn) || !get(in, fN) || static_cast<int>(fn) != n || static_cast<int>(fN) != node_count)
    return std::nullopt;

  ZonalSphereSpace::Tables t;
  t.x.resize(node_count);
  t.w.resize(node_count);
  t.synthesis.resize(node_count, node_count);
  const auto bytes = static_cast<std::streamsize>(sizeof(double)) * node_count;
  if (!in.read(reinterpret_cast<char*>(t.x.data()), bytes)) return std::nullopt;
  if (!in.read(reinterpret_cast<char*>(t.w.data()), bytes)) return std::nullopt;
  if (!in.read(reinterpret_cast<char*>(t.synthesis.data()), bytes * node_count)) return std::nullopt;
  return t;
}

void store(const std::string& dir, int n, int node_count, const ZonalSphereSpace::Tables& t) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  const auto path = std::filesystem::path(dir) / file_name(Backend::ZonalSphere, n, node_count);
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) return;  // caching is best-effort
    out.write(kMagic, 4);
    put(out, kVersion);
    put(out, static_cast<std::uint8_t>(Backend::ZonalSphere));
    put(out, static_cast<std::uint32_t>(n));
    put(out, static_cast<std::uint32_t>(node_count));
    const auto bytes = static_cast<std::streamsize>(sizeof(double)) * node_count;
    out.write(reinterpret_cast<const char*>(t.x.data()), bytes);
    out.write(reinterpret_cast<const char*>(t.w.data()), bytes);
    out.write(reinterpret_cast<const char*>(t.synthesis.data()), bytes * node_count);
  }
  std::filesystem::rename(tmp, path, ec);
}

}  // namespace confspec::table_cache
