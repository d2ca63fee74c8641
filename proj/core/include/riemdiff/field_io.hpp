#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "riemdiff/grid.hpp"

namespace riemdiff {

// Untyped field snapshot as read back from disk.
struct FieldDump {
  int dim = 0;
  int n = 0;
  int components = 0;
  std::vector<double> values;  // node-major
};

// CSV with a header row; one line per node: node, x1[, x2], c0, c1, ...
// Values are written with 17 significant digits.
void write_field_csv(const std::filesystem::path& path, const ChartGrid& grid, int components,
                     const std::vector<double>& values);

// Raw little-endian float64 at `path` plus a JSON sidecar `path.json`
// holding {"d", "n", "components"}.
void write_field_raw(const std::filesystem::path& path, const ChartGrid& grid, int components,
                     const std::vector<double>& values);
FieldDump read_field_raw(const std::filesystem::path& path);

template <FieldKind K>
void write_field_csv(const std::filesystem::path& path, const Field<K>& f) {
  write_field_csv(path, f.grid(), f.components(), f.values());
}
template <FieldKind K>
void write_field_raw(const std::filesystem::path& path, const Field<K>& f) {
  write_field_raw(path, f.grid(), f.components(), f.values());
}

}  // namespace riemdiff
