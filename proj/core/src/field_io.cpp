#include "riemdiff/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include <json.hpp>

#include "riemdiff/error.hpp"

namespace riemdiff {

namespace {

std::filesystem::path sidecar(const std::filesystem::path& path) {
  std::filesystem::path p = path;
  p += ".json";
  return p;
}

void check_shape(const ChartGrid& grid, int components, const std::vector<double>& values) {
  if (values.size() != grid.size() * static_cast<std::size_t>(components)) {
    throw ConfigError("field dump: value count does not match grid shape");
  }
}

}  // namespace

void write_field_csv(const std::filesystem::path& path, const ChartGrid& grid, int components,
                     const std::vector<double>& values) {
  check_shape(grid, components, values);
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out.precision(17);
  out << "node,x1";
  if (grid.dim() == 2) out << ",x2";
  for (int c = 0; c < components; ++c) out << ",c" << c;
  out << '\n';
  for (std::size_t node = 0; node < grid.size(); ++node) {
    out << node << ',' << grid.x(node, 0);
    if (grid.dim() == 2) out << ',' << grid.x(node, 1);
    for (int c = 0; c < components; ++c) out << ',' << values[node * static_cast<std::size_t>(components) + c];
    out << '\n';
  }
}

void write_field_raw(const std::filesystem::path& path, const ChartGrid& grid, int components,
                     const std::vector<double>& values) {
  check_shape(grid, components, values);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  for (double v : values) {
    auto bits = std::bit_cast<std::uint64_t>(v);
    if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
    char buf[8];
    std::memcpy(buf, &bits, 8);
    out.write(buf, 8);
  }
  nlohmann::json meta{{"d", grid.dim()}, {"n", grid.n()}, {"components", components}};
  std::ofstream side(sidecar(path));
  side << meta.dump() << '\n';
}

FieldDump read_field_raw(const std::filesystem::path& path) {
  std::ifstream side(sidecar(path));
  if (!side) throw Error("missing sidecar for " + path.string());
  const auto meta = nlohmann::json::parse(side);
  FieldDump dump;
  dump.dim = meta.at("d").get<int>();
  dump.n = meta.at("n").get<int>();
  dump.components = meta.at("components").get<int>();
  std::size_t count = static_cast<std::size_t>(dump.components) * static_cast<std::size_t>(dump.n);
  if (dump.dim == 2) count *= static_cast<std::size_t>(dump.n);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  dump.values.resize(count);
  for (double& v : dump.values) {
    char buf[8];
    if (!in.read(buf, 8)) throw Error("truncated field dump " + path.string());
    std::uint64_t bits = 0;
    std::memcpy(&bits, buf, 8);
    if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
    v = std::bit_cast<double>(bits);
  }
  return dump;
}

}  // namespace riemdiff
