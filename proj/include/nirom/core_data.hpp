#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "nirom/types.hpp"

namespace nirom {

/// Node coordinates plus per-node quadrature weights on a 1D or 2D domain.
///
/// The weights carry the discrete inner product: (f, g) = sum_j f_j g_j w_j.
class SpatialGrid {
 public:
  SpatialGrid() = default;

  /// Validates: dim in {1,2}, N >= 2, positive weights, no duplicate nodes.
  SpatialGrid(Matrix coords, Vector weights);

  /// Uniform nodes on [a, b] with dual-cell (midpoint) weights; end cells are half width.
  static SpatialGrid uniform_1d(double a, double b, Index n);

  /// Tensor-product uniform grid, x-fastest node ordering.
  static SpatialGrid uniform_2d(double x0, double x1, Index nx, double y0, double y1, Index ny);

  Index size() const { return coords_.rows(); }
  int dim() const { return static_cast<int>(coords_.cols()); }
  const Matrix& coords() const { return coords_; }
  const Vector& weights() const { return weights_; }
  auto point(Index j) const { return coords_.row(j); }

  /// Representative node spacing, (mean weight)^(1/dim).
  double spacing() const;

 private:
  Matrix coords_;  // N x dim
  Vector weights_;
};

/// Per-node occupancy at one time: true = fluid (fixed domain), false = occluded.
class DomainMask {
 public:
  DomainMask() = default;
  explicit DomainMask(std::vector<bool> fluid) : fluid_(std::move(fluid)) {}
  static DomainMask all_fluid(Index n) { return DomainMask(std::vector<bool>(static_cast<size_t>(n), true)); }

  Index size() const { return static_cast<Index>(fluid_.size()); }
  bool fluid(Index j) const { return fluid_[static_cast<size_t>(j)]; }
  bool is_all_fluid() const;
  Index occluded_count() const;
  const std::vector<bool>& values() const { return fluid_; }

  friend bool operator==(const DomainMask&, const DomainMask&) = default;

 private:
  std::vector<bool> fluid_;
};

/// Time series of boundary-characterizing parameters, one column per parameter.
struct BoundaryTrack {
  std::vector<std::string> names;
  Matrix values;  // M x L

  Index column(const std::string& name) const;
};

/// How a predicted boundary parameter vector maps onto a domain mask.
struct BoundaryGeometry {
  enum class Kind { RadialCavity, Disk };
  Kind kind = Kind::RadialCavity;
  /// RadialCavity: {radius}; Disk: {center_x, center_y, radius}.
  std::vector<std::string> params;

  DomainMask mask(const SpatialGrid& grid, const BoundaryTrack& track, const Vector& gamma) const;
  static std::string kind_name(Kind k);
  static Kind parse_kind(const std::string& s);
};

/// Snapshots u(x_j, t_i) with the temporal mean split off.
class SnapshotSet {
 public:
  SnapshotSet() = default;

  /// Validates shapes and time ordering; computes mean and fluctuation.
  /// Empty `masks` means all-fluid.
  SnapshotSet(SpatialGrid grid, Vector times, Matrix fields, std::vector<DomainMask> masks = {},
              std::optional<BoundaryTrack> boundary = std::nullopt, std::string field_name = "u");

  const SpatialGrid& grid() const { return grid_; }
  const Vector& times() const { return times_; }
  const Matrix& fields() const { return fields_; }
  const std::vector<DomainMask>& masks() const { return masks_; }
  const Vector& mean() const { return mean_; }
  const Matrix& fluct() const { return fluct_; }
  const std::optional<BoundaryTrack>& boundary() const { return boundary_; }
  const std::optional<BoundaryGeometry>& geometry() const { return geometry_; }
  const std::string& field_name() const { return field_name_; }

  Index snapshot_count() const { return fields_.rows(); }
  Index node_count() const { return fields_.cols(); }
  bool has_moving_boundary() const;

  SnapshotSet with_geometry(BoundaryGeometry g) const;
  SnapshotSet with_fields(Matrix fields) const;

  /// Per node: fluid in every snapshot.
  DomainMask fluid_throughout() const;
  /// Per node: fluid in at least one snapshot.
  DomainMask fluid_ever() const;

 private:
  SpatialGrid grid_;
  Vector times_;
  Matrix fields_;  // M x N
  std::vector<DomainMask> masks_;
  std::optional<BoundaryTrack> boundary_;
  std::optional<BoundaryGeometry> geometry_;
  std::string field_name_ = "u";
  Vector mean_;
  Matrix fluct_;
};

/// Quadrature approximation of the integral of f*g over the grid.
double inner_product(const Eigen::Ref<const Vector>& f, const Eigen::Ref<const Vector>& g, const SpatialGrid& grid);

inline double l2_norm(const Eigen::Ref<const Vector>& f, const SpatialGrid& grid) {
  return std::sqrt(inner_product(f, f, grid));
}

enum class FillStrategy { RigidMotion, LsExtrapolation };

struct FillOptions {
  FillStrategy strategy = FillStrategy::LsExtrapolation;
  int order = 2;
  /// Boundary column carrying the body velocity (rigid_motion only).
  std::string velocity_param = "velocity";
};

/// Assigns values to occluded nodes so POD can run over the union of both domains.
SnapshotSet fill_occluded(const SnapshotSet& s, const FillOptions& opts);

/// Number of total-degree <= order monomials in `dim` variables.
int polynomial_term_count(int dim, int order);

/// Evaluates the total-degree monomial basis at `x` (graded lexicographic order).
Vector monomial_basis(const Eigen::Ref<const Eigen::RowVectorXd>& x, int order);

/// Human-readable label of monomial `term` for a `dim`-variable basis of `order`.
std::string monomial_label(int dim, int order, int term);

}  // namespace nirom
