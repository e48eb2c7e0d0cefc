#include "nirom/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "nirom/error.hpp"

namespace nirom::io {

namespace {

using json = nlohmann::json;

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_number(const std::string& cell, const fs::path& path, size_t row, size_t col) {
  double v = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  if (!cell.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (cell.empty() || ec != std::errc() || ptr != last) {
    std::ostringstream os;
    os << path.string() << ": non-numeric entry '" << cell << "' at row " << row << ", column " << col;
    throw InputError(os.str());
  }
  return v;
}

std::vector<std::string> read_lines(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    lines.push_back(line);
  }
  return lines;
}

Matrix parse_rows(const std::vector<std::string>& lines, size_t first, const fs::path& path) {
  const size_t nrows = lines.size() - first;
  if (nrows == 0) throw InputError(path.string() + ": no data rows");
  size_t ncols = 0;
  Matrix m;
  for (size_t r = first; r < lines.size(); ++r) {
    const auto cells = split(lines[r]);
    const size_t row_no = r + 1;
    if (r == first) {
      ncols = cells.size();
      m.resize(static_cast<Index>(nrows), static_cast<Index>(ncols));
    } else if (cells.size() != ncols) {
      std::ostringstream os;
      os << path.string() << ": row " << row_no << " has " << cells.size() << " columns, expected " << ncols;
      throw InputError(os.str());
    }
    for (size_t c = 0; c < ncols; ++c)
      m(static_cast<Index>(r - first), static_cast<Index>(c)) = parse_number(cells[c], path, row_no, c + 1);
  }
  return m;
}

void ensure_parent(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
}

std::ofstream open_out(const fs::path& path) {
  ensure_parent(path);
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  return out;
}

fs::path resolve(const fs::path& base, const std::string& rel) {
  const fs::path p(rel);
  return p.is_absolute() ? p : base / p;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Matrix read_matrix_csv(const fs::path& path) { return parse_rows(read_lines(path), 0, path); }

Vector read_vector_csv(const fs::path& path) {
  const Matrix m = read_matrix_csv(path);
  if (m.cols() == 1) return m.col(0);
  if (m.rows() == 1) return m.row(0).transpose();
  throw InputError(path.string() + ": expected a single row or column of numbers");
}

Table read_table_csv(const fs::path& path) {
  const auto lines = read_lines(path);
  if (lines.empty()) throw InputError(path.string() + ": empty file");
  Table t;
  t.header = split(lines[0]);
  t.values = parse_rows(lines, 1, path);
  if (static_cast<Index>(t.header.size()) != t.values.cols()) {
    std::ostringstream os;
    os << path.string() << ": header has " << t.header.size() << " names but rows have " << t.values.cols()
       << " columns";
    throw InputError(os.str());
  }
  return t;
}

void write_matrix_csv(const fs::path& path, const Matrix& m) {
  auto out = open_out(path);
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

void write_vector_csv(const fs::path& path, const Vector& v) {
  auto out = open_out(path);
  for (Index i = 0; i < v.size(); ++i) out << format_double(v(i)) << '\n';
}

void write_table_csv(const fs::path& path, const std::vector<std::string>& header, const Matrix& values) {
  auto out = open_out(path);
  for (size_t c = 0; c < header.size(); ++c) out << (c ? "," : "") << header[c];
  out << '\n';
  for (Index i = 0; i < values.rows(); ++i) {
    for (Index j = 0; j < values.cols(); ++j) out << (j ? "," : "") << format_double(values(i, j));
    out << '\n';
  }
}

void write_grid_csv(const fs::path& path, const SpatialGrid& grid) {
  Matrix g(grid.size(), grid.dim() + 1);
  g.leftCols(grid.dim()) = grid.coords();
  g.col(grid.dim()) = grid.weights();
  write_matrix_csv(path, g);
}

SpatialGrid read_grid_csv(const fs::path& path) {
  const Matrix g = read_matrix_csv(path);
  if (g.cols() < 2 || g.cols() > 3)
    throw InputError(path.string() + ": grid rows must be 'x,w' or 'x,y,w'");
  try {
    return SpatialGrid(g.leftCols(g.cols() - 1), g.col(g.cols() - 1));
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

SnapshotSet load_snapshots(const fs::path& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw InputError("cannot open manifest " + manifest_path.string());
  json man;
  try {
    in >> man;
  } catch (const json::exception& e) {
    throw InputError(manifest_path.string() + ": invalid JSON: " + e.what());
  }
  const fs::path base = manifest_path.parent_path();
  for (const char* key : {"grid", "fields", "times"}) {
    if (!man.contains(key) || !man[key].is_string())
      throw InputError(manifest_path.string() + ": missing required key '" + key + "'");
  }

  const fs::path grid_path = resolve(base, man["grid"].get<std::string>());
  const fs::path fields_path = resolve(base, man["fields"].get<std::string>());
  const fs::path times_path = resolve(base, man["times"].get<std::string>());

  SpatialGrid grid = read_grid_csv(grid_path);
  Matrix fields = read_matrix_csv(fields_path);
  if (fields.cols() != grid.size()) {
    std::ostringstream os;
    os << fields_path.string() << ": row 1 has " << fields.cols() << " columns, grid has " << grid.size()
       << " nodes";
    throw InputError(os.str());
  }
  Vector times = read_vector_csv(times_path);
  if (times.size() != fields.rows()) {
    std::ostringstream os;
    os << times_path.string() << ": " << times.size() << " times for " << fields.rows() << " snapshot rows";
    throw InputError(os.str());
  }
  for (Index i = 1; i < times.size(); ++i) {
    if (!(times(i) > times(i - 1))) {
      std::ostringstream os;
      os << times_path.string() << ": non-increasing times at row " << (i + 1);
      throw InputError(os.str());
    }
  }

  std::vector<DomainMask> masks;
  if (man.contains("masks") && !man["masks"].is_null()) {
    const fs::path mask_path = resolve(base, man["masks"].get<std::string>());
    const Matrix mm = read_matrix_csv(mask_path);
    if (mm.rows() != fields.rows() || mm.cols() != fields.cols()) {
      std::ostringstream os;
      os << mask_path.string() << ": mask is " << mm.rows() << "x" << mm.cols() << ", expected " << fields.rows()
         << "x" << fields.cols();
      throw InputError(os.str());
    }
    for (Index i = 0; i < mm.rows(); ++i) {
      std::vector<bool> f(static_cast<size_t>(mm.cols()));
      for (Index j = 0; j < mm.cols(); ++j) {
        if (mm(i, j) != 0.0 && mm(i, j) != 1.0) {
          std::ostringstream os;
          os << mask_path.string() << ": mask entries must be 0 or 1 (row " << (i + 1) << ")";
          throw InputError(os.str());
        }
        f[static_cast<size_t>(j)] = mm(i, j) != 0.0;
      }
      masks.emplace_back(std::move(f));
    }
  }

  std::optional<BoundaryTrack> boundary;
  if (man.contains("boundary") && !man["boundary"].is_null()) {
    const fs::path bpath = resolve(base, man["boundary"].get<std::string>());
    Table t = read_table_csv(bpath);
    if (t.values.rows() != fields.rows()) {
      std::ostringstream os;
      os << bpath.string() << ": " << t.values.rows() << " rows for " << fields.rows() << " snapshots";
      throw InputError(os.str());
    }
    boundary = BoundaryTrack{std::move(t.header), std::move(t.values)};
  }

  const std::string name = man.value("field_name", std::string("u"));
  SnapshotSet s(std::move(grid), std::move(times), std::move(fields), std::move(masks), std::move(boundary), name);
  if (man.contains("geometry") && !man["geometry"].is_null()) {
    BoundaryGeometry g;
    g.kind = BoundaryGeometry::parse_kind(man["geometry"].at("kind").get<std::string>());
    g.params = man["geometry"].at("params").get<std::vector<std::string>>();
    s = s.with_geometry(std::move(g));
  }
  return s;
}

fs::path write_dataset(const fs::path& dir, const SnapshotSet& s) {
  fs::create_directories(dir);
  json man;
  man["field_name"] = s.field_name();
  man["grid"] = "grid.csv";
  man["fields"] = "fields.csv";
  man["times"] = "times.csv";
  write_grid_csv(dir / "grid.csv", s.grid());
  write_matrix_csv(dir / "fields.csv", s.fields());
  write_vector_csv(dir / "times.csv", s.times());
  if (s.has_moving_boundary()) {
    Matrix mm(s.snapshot_count(), s.node_count());
    for (Index i = 0; i < mm.rows(); ++i)
      for (Index j = 0; j < mm.cols(); ++j) mm(i, j) = s.masks()[static_cast<size_t>(i)].fluid(j) ? 1.0 : 0.0;
    write_matrix_csv(dir / "masks.csv", mm);
    man["masks"] = "masks.csv";
  }
  if (s.boundary()) {
    write_table_csv(dir / "boundary.csv", s.boundary()->names, s.boundary()->values);
    man["boundary"] = "boundary.csv";
  }
  if (s.geometry()) {
    man["geometry"] = {{"kind", BoundaryGeometry::kind_name(s.geometry()->kind)}, {"params", s.geometry()->params}};
  }
  const fs::path mpath = dir / "manifest.json";
  auto out = open_out(mpath);
  out << man.dump(2) << '\n';
  return mpath;
}

}  // namespace nirom::io
