#pragma once

#include <limits>

#include "nirom/core_data.hpp"
#include "nirom/types.hpp"

namespace nirom {

/// 1D viscous Burgers on [0, 1] with the closed-form solution.
struct BurgersConfig {
  double reynolds = 100.0;
  Index nx = 1001;   // dx = 1e-3
  double dt = 1e-2;  // nominal solver step, recorded as metadata

  double t0() const;
  double dx() const { return 1.0 / static_cast<double>(nx - 1); }
  void validate() const;
};

double burgers_exact(double x, double t, const BurgersConfig& cfg);
Vector burgers_field(const SpatialGrid& grid, double t, const BurgersConfig& cfg);
SpatialGrid burgers_grid(const BurgersConfig& cfg);

/// M uniformly spaced snapshots on [t1, tM], all-fluid.
SnapshotSet burgers_snapshots(const BurgersConfig& cfg, double t1, double tm, Index m);

/// Manufactured cavity: radius R(t) = base + amplitude cos(omega (t - t_bar)),
/// strain S(r, t) = r / (r^3 + R(t_bar)^3 - R(t)^3) for r >= R(t).
struct BubbleConfig {
  double base = 1.0;
  double amplitude = 0.15;
  double omega = 0.04;
  double t_bar = 5.0;
  double r_max = 5.0;
  Index nr = 401;
  /// End of the forecast window used to size the grid; NaN means tM.
  double t_horizon = std::numeric_limits<double>::quiet_NaN();

  double radius(double t) const;
  /// Smallest radius over [a, b].
  double min_radius(double a, double b) const;
  double max_radius(double a, double b) const;
  void validate() const;
};

double bubble_strain(double r, double t, const BubbleConfig& cfg);

/// Strain at fluid nodes (r >= R(t)) and 0 inside the cavity.
Vector bubble_field(const SpatialGrid& grid, double t, const BubbleConfig& cfg);
DomainMask bubble_mask(const SpatialGrid& grid, double t, const BubbleConfig& cfg);

/// Radial grid on [min R over [t1, t_horizon], r_max]; masks r < R(t_i) as occluded; the
/// boundary track has the single column "R" and the geometry is a radial cavity.
SnapshotSet bubble_snapshots(const BubbleConfig& cfg, double t1, double tm, Index m);

}  // namespace nirom
