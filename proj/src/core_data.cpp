#include "nirom/core_data.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "nirom/error.hpp"

namespace nirom {

namespace {

constexpr double kDuplicateTol = 1e-12;

void check_unique_nodes(const Matrix& coords) {
  const Index n = coords.rows();
  std::vector<Index> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(), [&](Index a, Index b) { return coords(a, 0) < coords(b, 0); });
  for (size_t a = 0; a < order.size(); ++a) {
    for (size_t b = a + 1; b < order.size(); ++b) {
      const Index i = order[a];
      const Index j = order[b];
      if (coords(j, 0) - coords(i, 0) > kDuplicateTol) break;
      if ((coords.row(i) - coords.row(j)).cwiseAbs().maxCoeff() <= kDuplicateTol) {
        std::ostringstream os;
        os << "duplicate grid nodes " << std::min(i, j) << " and " << std::max(i, j);
        throw InputError(os.str());
      }
    }
  }
}

}  // namespace

SpatialGrid::SpatialGrid(Matrix coords, Vector weights) : coords_(std::move(coords)), weights_(std::move(weights)) {
  if (coords_.cols() != 1 && coords_.cols() != 2) throw InputError("grid dimension must be 1 or 2");
  if (coords_.rows() < 2) throw InputError("grid needs at least 2 nodes");
  if (weights_.size() != coords_.rows()) throw InputError("grid weight count does not match node count");
  for (Index j = 0; j < weights_.size(); ++j) {
    if (!(weights_(j) > 0.0) || !std::isfinite(weights_(j))) {
      std::ostringstream os;
      os << "grid weight at node " << j << " must be positive";
      throw InputError(os.str());
    }
  }
  if (!coords_.allFinite()) throw InputError("grid coordinates must be finite");
  check_unique_nodes(coords_);
}

SpatialGrid SpatialGrid::uniform_1d(double a, double b, Index n) {
  if (n < 2 || !(b > a)) throw InputError("uniform_1d needs n >= 2 and b > a");
  Matrix c(n, 1);
  Vector w(n);
  const double h = (b - a) / static_cast<double>(n - 1);
  for (Index j = 0; j < n; ++j) {
    c(j, 0) = (j == n - 1) ? b : a + h * static_cast<double>(j);
    w(j) = h;
  }
  w(0) = w(n - 1) = 0.5 * h;
  return SpatialGrid(std::move(c), std::move(w));
}

SpatialGrid SpatialGrid::uniform_2d(double x0, double x1, Index nx, double y0, double y1, Index ny) {
  const SpatialGrid gx = uniform_1d(x0, x1, nx);
  const SpatialGrid gy = uniform_1d(y0, y1, ny);
  Matrix c(nx * ny, 2);
  Vector w(nx * ny);
  for (Index j = 0; j < ny; ++j) {
    for (Index i = 0; i < nx; ++i) {
      const Index k = j * nx + i;
      c(k, 0) = gx.coords()(i, 0);
      c(k, 1) = gy.coords()(j, 0);
      w(k) = gx.weights()(i) * gy.weights()(j);
    }
  }
  return SpatialGrid(std::move(c), std::move(w));
}

double SpatialGrid::spacing() const { return std::pow(weights_.mean(), 1.0 / static_cast<double>(dim())); }

bool DomainMask::is_all_fluid() const {
  return std::all_of(fluid_.begin(), fluid_.end(), [](bool f) { return f; });
}

Index DomainMask::occluded_count() const {
  return static_cast<Index>(std::count(fluid_.begin(), fluid_.end(), false));
}

Index BoundaryTrack::column(const std::string& name) const {
  const auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw InputError("boundary parameter '" + name + "' not found");
  return static_cast<Index>(it - names.begin());
}

std::string BoundaryGeometry::kind_name(Kind k) {
  switch (k) {
    case Kind::RadialCavity:
      return "radial_cavity";
    case Kind::Disk:
      return "disk";
  }
  return "unknown";
}

BoundaryGeometry::Kind BoundaryGeometry::parse_kind(const std::string& s) {
  if (s == "radial_cavity") return Kind::RadialCavity;
  if (s == "disk") return Kind::Disk;
  throw InputError("unknown boundary geometry kind '" + s + "'");
}

DomainMask BoundaryGeometry::mask(const SpatialGrid& grid, const BoundaryTrack& track, const Vector& gamma) const {
  std::vector<bool> fluid(static_cast<size_t>(grid.size()), true);
  switch (kind) {
    case Kind::RadialCavity: {
      if (params.size() != 1 || grid.dim() != 1) throw InputError("radial_cavity needs one parameter on a 1D grid");
      const double radius = gamma(track.column(params[0]));
      for (Index j = 0; j < grid.size(); ++j) fluid[static_cast<size_t>(j)] = grid.coords()(j, 0) >= radius;
      break;
    }
    case Kind::Disk: {
      if (params.size() != 3 || grid.dim() != 2) throw InputError("disk needs three parameters on a 2D grid");
      const double cx = gamma(track.column(params[0]));
      const double cy = gamma(track.column(params[1]));
      const double r = gamma(track.column(params[2]));
      for (Index j = 0; j < grid.size(); ++j) {
        const double dx = grid.coords()(j, 0) - cx;
        const double dy = grid.coords()(j, 1) - cy;
        fluid[static_cast<size_t>(j)] = std::hypot(dx, dy) >= r;
      }
      break;
    }
  }
  return DomainMask(std::move(fluid));
}

SnapshotSet::SnapshotSet(SpatialGrid grid, Vector times, Matrix fields, std::vector<DomainMask> masks,
                         std::optional<BoundaryTrack> boundary, std::string field_name)
    : grid_(std::move(grid)),
      times_(std::move(times)),
      fields_(std::move(fields)),
      masks_(std::move(masks)),
      boundary_(std::move(boundary)),
      field_name_(std::move(field_name)) {
  const Index m = fields_.rows();
  if (m < 2) throw InputError("need at least 2 snapshots");
  if (times_.size() != m) {
    std::ostringstream os;
    os << "time count " << times_.size() << " does not match snapshot count " << m;
    throw InputError(os.str());
  }
  if (fields_.cols() != grid_.size()) {
    std::ostringstream os;
    os << "field width " << fields_.cols() << " does not match grid node count " << grid_.size();
    throw InputError(os.str());
  }
  for (Index i = 1; i < m; ++i) {
    if (!(times_(i) > times_(i - 1))) {
      std::ostringstream os;
      os << "non-increasing times at row " << (i + 1);
      throw InputError(os.str());
    }
  }
  if (!fields_.allFinite()) throw InputError("snapshot fields contain non-finite values");
  if (masks_.empty()) {
    masks_.assign(static_cast<size_t>(m), DomainMask::all_fluid(grid_.size()));
  } else if (static_cast<Index>(masks_.size()) != m) {
    throw InputError("mask count does not match snapshot count");
  }
  for (const auto& mk : masks_) {
    if (mk.size() != grid_.size()) throw InputError("mask length does not match grid node count");
  }
  if (boundary_ && boundary_->values.rows() != m) {
    std::ostringstream os;
    os << "boundary track has " << boundary_->values.rows() << " rows, expected " << m;
    throw InputError(os.str());
  }
  if (boundary_ && static_cast<Index>(boundary_->names.size()) != boundary_->values.cols()) {
    throw InputError("boundary track name count does not match column count");
  }
  mean_ = fields_.colwise().mean().transpose();
  fluct_ = fields_.rowwise() - mean_.transpose();
}

bool SnapshotSet::has_moving_boundary() const {
  return std::any_of(masks_.begin(), masks_.end(), [](const DomainMask& m) { return !m.is_all_fluid(); });
}

SnapshotSet SnapshotSet::with_geometry(BoundaryGeometry g) const {
  SnapshotSet out = *this;
  out.geometry_ = std::move(g);
  return out;
}

SnapshotSet SnapshotSet::with_fields(Matrix fields) const {
  SnapshotSet out(grid_, times_, std::move(fields), masks_, boundary_, field_name_);
  out.geometry_ = geometry_;
  return out;
}

DomainMask SnapshotSet::fluid_throughout() const {
  std::vector<bool> f(static_cast<size_t>(grid_.size()), true);
  for (const auto& mk : masks_)
    for (Index j = 0; j < mk.size(); ++j) f[static_cast<size_t>(j)] = f[static_cast<size_t>(j)] && mk.fluid(j);
  return DomainMask(std::move(f));
}

DomainMask SnapshotSet::fluid_ever() const {
  std::vector<bool> f(static_cast<size_t>(grid_.size()), false);
  for (const auto& mk : masks_)
    for (Index j = 0; j < mk.size(); ++j) f[static_cast<size_t>(j)] = f[static_cast<size_t>(j)] || mk.fluid(j);
  return DomainMask(std::move(f));
}

double inner_product(const Eigen::Ref<const Vector>& f, const Eigen::Ref<const Vector>& g, const SpatialGrid& grid) {
  if (f.size() != grid.size() || g.size() != grid.size()) {
    std::ostringstream os;
    os << "inner_product: vector lengths " << f.size() << ", " << g.size() << " do not match grid size "
       << grid.size();
    throw InputError(os.str());
  }
  return (f.array() * g.array() * grid.weights().array()).sum();
}

int polynomial_term_count(int dim, int order) {
  if (order < 0) throw InputError("polynomial order must be nonnegative");
  return dim == 1 ? order + 1 : (order + 1) * (order + 2) / 2;
}

Vector monomial_basis(const Eigen::Ref<const Eigen::RowVectorXd>& x, int order) {
  const int dim = static_cast<int>(x.size());
  Vector p(polynomial_term_count(dim, order));
  if (dim == 1) {
    double v = 1.0;
    for (int k = 0; k <= order; ++k, v *= x(0)) p(k) = v;
    return p;
  }
  int idx = 0;
  for (int deg = 0; deg <= order; ++deg) {
    for (int py = 0; py <= deg; ++py) p(idx++) = std::pow(x(0), deg - py) * std::pow(x(1), py);
  }
  return p;
}

std::string monomial_label(int dim, int order, int term) {
  if (dim == 1) return term == 0 ? "1" : (term == 1 ? "x" : "x^" + std::to_string(term));
  int idx = 0;
  for (int deg = 0; deg <= order; ++deg) {
    for (int py = 0; py <= deg; ++py, ++idx) {
      if (idx != term) continue;
      const int px = deg - py;
      if (deg == 0) return "1";
      std::string s;
      if (px > 0) s += px == 1 ? "x" : "x^" + std::to_string(px);
      if (py > 0) s += py == 1 ? "y" : "y^" + std::to_string(py);
      return s;
    }
  }
  return "?";
}

namespace {

double ls_extrapolate(const SpatialGrid& grid, const DomainMask& mask, const Eigen::RowVectorXd& row, Index node,
                      int order, double snapshot_time) {
  const int terms = polynomial_term_count(grid.dim(), order);
  const size_t want = static_cast<size_t>(3 * terms);
  std::vector<std::pair<double, Index>> cand;
  cand.reserve(static_cast<size_t>(grid.size()));
  const auto xp = grid.point(node);
  for (Index q = 0; q < grid.size(); ++q) {
    if (!mask.fluid(q)) continue;
    cand.emplace_back((grid.point(q) - xp).squaredNorm(), q);
  }
  if (cand.size() < static_cast<size_t>(terms)) {
    std::ostringstream os;
    os << "fill_occluded: occluded node " << node << " at t=" << snapshot_time << " has " << cand.size()
       << " fluid neighbors, " << terms << " required";
    throw InputError(os.str());
  }
  const size_t k = std::min(want, cand.size());
  std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(k), cand.end());
  const double scale = std::sqrt(cand[k - 1].first);

  Matrix vand(static_cast<Index>(k), terms);
  Vector rhs(static_cast<Index>(k));
  for (size_t r = 0; r < k; ++r) {
    const Index q = cand[r].second;
    vand.row(static_cast<Index>(r)) = monomial_basis((grid.point(q) - xp) / scale, order).transpose();
    rhs(static_cast<Index>(r)) = row(q);
  }
  Eigen::ColPivHouseholderQR<Matrix> qr(vand);
  if (qr.rank() < terms) {
    std::ostringstream os;
    os << "fill_occluded: fluid neighbors of node " << node << " do not determine an order-" << order
       << " polynomial";
    throw NumericalError(os.str());
  }
  const Vector c = qr.solve(rhs);
  return c(0);
}

}  // namespace

SnapshotSet fill_occluded(const SnapshotSet& s, const FillOptions& opts) {
  if (!s.has_moving_boundary()) return s;
  Matrix filled = s.fields();
  const auto& grid = s.grid();
  Index vel_col = -1;
  if (opts.strategy == FillStrategy::RigidMotion) {
    if (!s.boundary()) throw InputError("fill_occluded: rigid_motion needs a boundary track");
    vel_col = s.boundary()->column(opts.velocity_param);
  }
  for (Index i = 0; i < s.snapshot_count(); ++i) {
    const DomainMask& mask = s.masks()[static_cast<size_t>(i)];
    const Eigen::RowVectorXd row = s.fields().row(i);
    for (Index j = 0; j < grid.size(); ++j) {
      if (mask.fluid(j)) continue;
      filled(i, j) = opts.strategy == FillStrategy::RigidMotion
                         ? s.boundary()->values(i, vel_col)
                         : ls_extrapolate(grid, mask, row, j, opts.order, s.times()(i));
    }
  }
  return s.with_fields(std::move(filled));
}

}  // namespace nirom
