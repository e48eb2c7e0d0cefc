#include "nirom/bench.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "nirom/error.hpp"

namespace nirom {

double BurgersConfig::t0() const { return std::exp(reynolds / 8.0); }

void BurgersConfig::validate() const {
  if (!(reynolds > 0.0) || !std::isfinite(reynolds)) throw InputError("Reynolds number must be positive");
  if (nx < 5) throw InputError("Burgers grid needs at least 5 nodes");
  if (!(dt > 0.0)) throw InputError("Burgers dt must be positive");
}

double burgers_exact(double x, double t, const BurgersConfig& cfg) {
  const double tp = t + 1.0;
  return (x / tp) / (1.0 + std::sqrt(tp / cfg.t0()) * std::exp(cfg.reynolds * x * x / (4.0 * tp)));
}

SpatialGrid burgers_grid(const BurgersConfig& cfg) { return SpatialGrid::uniform_1d(0.0, 1.0, cfg.nx); }

Vector burgers_field(const SpatialGrid& grid, double t, const BurgersConfig& cfg) {
  Vector u(grid.size());
  for (Index j = 0; j < grid.size(); ++j) u(j) = burgers_exact(grid.coords()(j, 0), t, cfg);
  return u;
}

SnapshotSet burgers_snapshots(const BurgersConfig& cfg, double t1, double tm, Index m) {
  cfg.validate();
  if (m < 2) throw InputError("need at least 2 snapshots");
  if (!(tm > t1) || t1 < 0.0) throw InputError("snapshot window must satisfy 0 <= t1 < tM");
  SpatialGrid grid = burgers_grid(cfg);
  const Vector times = Vector::LinSpaced(m, t1, tm);
  Matrix fields(m, grid.size());
  for (Index i = 0; i < m; ++i) fields.row(i) = burgers_field(grid, times(i), cfg).transpose();
  return SnapshotSet(std::move(grid), times, std::move(fields));
}

double BubbleConfig::radius(double t) const { return base + amplitude * std::cos(omega * (t - t_bar)); }

namespace {

// Endpoints plus the interior extrema of the cosine.
std::vector<double> radius_candidates(const BubbleConfig& c, double a, double b) {
  std::vector<double> out{c.radius(a), c.radius(b)};
  if (c.omega != 0.0) {
    const double step = std::numbers::pi / std::abs(c.omega);
    const double lo = std::min(a, b), hi = std::max(a, b);
    for (double t = c.t_bar + std::ceil((lo - c.t_bar) / step) * step; t <= hi; t += step) out.push_back(c.radius(t));
  }
  return out;
}

}  // namespace

double BubbleConfig::min_radius(double a, double b) const {
  const auto v = radius_candidates(*this, a, b);
  return *std::min_element(v.begin(), v.end());
}

double BubbleConfig::max_radius(double a, double b) const {
  const auto v = radius_candidates(*this, a, b);
  return *std::max_element(v.begin(), v.end());
}

void BubbleConfig::validate() const {
  if (!(base - std::abs(amplitude) > 0.0)) throw InputError("bubble radius must stay positive (base > |amplitude|)");
  if (!(r_max > base + std::abs(amplitude))) throw InputError("r_max must exceed the largest bubble radius");
  if (nr < 5) throw InputError("bubble grid needs at least 5 radial nodes");
}

double bubble_strain(double r, double t, const BubbleConfig& cfg) {
  const double rb = cfg.radius(cfg.t_bar);
  const double rt = cfg.radius(t);
  return r / (r * r * r + rb * rb * rb - rt * rt * rt);
}

DomainMask bubble_mask(const SpatialGrid& grid, double t, const BubbleConfig& cfg) {
  const double rt = cfg.radius(t);
  std::vector<bool> f(static_cast<size_t>(grid.size()));
  for (Index j = 0; j < grid.size(); ++j) f[static_cast<size_t>(j)] = !(grid.coords()(j, 0) < rt);
  return DomainMask(std::move(f));
}

Vector bubble_field(const SpatialGrid& grid, double t, const BubbleConfig& cfg) {
  const DomainMask mask = bubble_mask(grid, t, cfg);
  Vector u = Vector::Zero(grid.size());
  for (Index j = 0; j < grid.size(); ++j)
    if (mask.fluid(j)) u(j) = bubble_strain(grid.coords()(j, 0), t, cfg);
  return u;
}

SnapshotSet bubble_snapshots(const BubbleConfig& cfg, double t1, double tm, Index m) {
  cfg.validate();
  if (m < 2) throw InputError("need at least 2 snapshots");
  if (!(tm > t1)) throw InputError("snapshot window must satisfy t1 < tM");
  const double t_end = std::isnan(cfg.t_horizon) ? tm : std::max(tm, cfg.t_horizon);
  const double r0 = cfg.min_radius(t1, t_end);
  SpatialGrid grid = SpatialGrid::uniform_1d(r0, cfg.r_max, cfg.nr);
  const Vector times = Vector::LinSpaced(m, t1, tm);
  const double rb3 = std::pow(cfg.radius(cfg.t_bar), 3);

  Matrix fields(m, grid.size());
  Matrix track(m, 1);
  std::vector<DomainMask> masks;
  for (Index i = 0; i < m; ++i) {
    const double rt = cfg.radius(times(i));
    for (Index j = 0; j < grid.size(); ++j) {
      const double r = grid.coords()(j, 0);
      if (r >= rt && !(r * r * r + rb3 - rt * rt * rt > 0.0)) {
        std::ostringstream os;
        os << "bubble strain denominator is nonpositive at r = " << r << ", t = " << times(i);
        throw InputError(os.str());
      }
    }
    fields.row(i) = bubble_field(grid, times(i), cfg).transpose();
    masks.push_back(bubble_mask(grid, times(i), cfg));
    track(i, 0) = rt;
  }
  SnapshotSet s(std::move(grid), times, std::move(fields), std::move(masks), BoundaryTrack{{"R"}, track}, "strain");
  BoundaryGeometry g;
  g.kind = BoundaryGeometry::Kind::RadialCavity;
  g.params = {"R"};
  return s.with_geometry(std::move(g));
}

}  // namespace nirom
