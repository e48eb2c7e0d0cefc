#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "nirom/core_data.hpp"
#include "nirom/types.hpp"

namespace nirom::io {

namespace fs = std::filesystem;

/// Reads a header-less numeric CSV. Every row must have the same column count.
/// Errors name the file and the 1-based row.
Matrix read_matrix_csv(const fs::path& path);

/// Reads a single column or single row of numbers.
Vector read_vector_csv(const fs::path& path);

struct Table {
  std::vector<std::string> header;
  Matrix values;
};

/// CSV whose first row is a header of column names.
Table read_table_csv(const fs::path& path);

/// All writers use 17 significant digits.
void write_matrix_csv(const fs::path& path, const Matrix& m);
void write_vector_csv(const fs::path& path, const Vector& v);
void write_table_csv(const fs::path& path, const std::vector<std::string>& header, const Matrix& values);

std::string format_double(double v);

/// Loads a dataset described by a JSON manifest (keys: grid, fields, times, masks,
/// boundary, field_name, geometry). Relative paths resolve against the manifest directory.
SnapshotSet load_snapshots(const fs::path& manifest_path);

/// Writes manifest.json plus CSVs into `dir` (created if needed). Returns the manifest path.
fs::path write_dataset(const fs::path& dir, const SnapshotSet& s);

void write_grid_csv(const fs::path& path, const SpatialGrid& grid);
SpatialGrid read_grid_csv(const fs::path& path);

}  // namespace nirom::io
