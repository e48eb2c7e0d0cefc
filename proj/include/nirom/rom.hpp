#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nirom/core_data.hpp"
#include "nirom/gpr.hpp"
#include "nirom/mls.hpp"
#include "nirom/pod.hpp"
#include "nirom/types.hpp"

namespace nirom {

struct RomSettings {
  PodThresholds pod;
  GprTolerances gpr_tol;
  GprOptions gpr;
  FillOptions fill;
  MlsConfig mls;
  bool mls_enabled = true;
  /// Overrides the RRMS truncation when set (clamped to the nondegenerate rank).
  std::optional<Index> fixed_modes;
  /// Horizon scan: step defaults to (tM - t1) / M; the scan stops at tM + span_factor (tM - t1).
  std::optional<double> scan_step;
  double scan_span_factor = 10.0;

  void validate() const;
};

/// Flat JSON keys: alpha_pod, beta_pod, beta_gpr_a, beta_gpr_gamma, restarts, seed,
/// fill_strategy, fill_order, velocity_param, mls_enabled, mls_order, kernel_len,
/// min_neighbor_factor, modes, scan_step, scan_span_factor. Missing keys keep `base`.
RomSettings settings_from_json(const std::string& text, RomSettings base = {});
std::string settings_to_json(const RomSettings& s);

struct RomModel {
  RomSettings settings;
  SpatialGrid grid;
  Vector mean;
  PodBasis basis;
  std::vector<GprModel> mode_models;
  double t1 = 0.0;
  double tm = 0.0;
  Index snapshots = 0;

  // Moving boundary (absent for fixed domains).
  std::optional<BoundaryTrack> boundary;
  std::optional<BoundaryGeometry> geometry;
  std::vector<GprModel> boundary_models;
  std::optional<DomainMask> fluid_ever;
  std::optional<DomainMask> fluid_throughout;

  PodHorizon pod_h;
  GprHorizon gpr_a_h;
  std::optional<GprHorizon> gpr_gamma_h;
  std::vector<std::string> warnings;

  bool has_boundary() const { return !boundary_models.empty(); }
  double scan_step() const;
  double t_star() const;
  /// Which criterion sets t_star: "pod", "gpr_a" or "gpr_gamma".
  std::string binding() const;
};

/// Runs boundary regression, occluded fill, POD, projection, and per-mode regression
/// with their horizons.
RomModel build(const SnapshotSet& s, const RomSettings& settings = {});

struct RomErrorParts {
  double pod_tail = 0.0;      // sqrt of the discarded eigenvalue sum
  double gpr_sigma = 0.0;     // weighted sd proxy
  double mls_change = 0.0;    // L2 size of the correction on exposed nodes
};

struct RomForecast {
  double t_query = 0.0;
  Vector field;
  Vector mode_mean;
  Vector mode_sd;
  double t_star_pod = 0.0;  // +inf when unbounded by POD
  bool pod_unbounded = false;
  double t_star_gpr_a = 0.0;
  std::optional<double> t_star_gpr_gamma;
  double t_star = 0.0;
  std::string binding;
  bool beyond_horizon = false;
  double sigma_weighted = 0.0;
  std::optional<Vector> boundary_values;
  std::optional<DomainMask> fluid;  // predicted fluid mask at t_query
  std::vector<Index> exposed_nodes;
  std::vector<Index> corrected_nodes;
  std::vector<Index> skipped_nodes;
  std::vector<MlsNodeReport> mls_report;
  RomErrorParts errors;
};

/// Prediction at t_query. Past t_star a HorizonError is raised unless `force` is set.
RomForecast forecast(const RomModel& m, double t_query, bool force = false);

/// L2 misfit relative to the truth, restricted to fluid nodes when a mask is given.
double relative_error(const Vector& pred, const Vector& truth, const SpatialGrid& grid,
                      const DomainMask* mask = nullptr);

/// build report: R, spectrum, RRMS, RIC, hyperparameters, horizons.
std::string build_report(const RomModel& m);
/// Forecast summary: horizons, flags, corrected node count.
std::string forecast_summary(const RomForecast& f, std::optional<double> rel_error = std::nullopt);

void save_model(const std::filesystem::path& dir, const RomModel& m);
RomModel load_model(const std::filesystem::path& dir);

/// Produces `m` snapshots starting at t_start from the given initial field.
using SnapshotSolver = std::function<SnapshotSet(const Vector& initial_state, double t_start, Index m)>;

struct HandoffRecord {
  int round = 0;
  double window_start = 0.0;
  double window_end = 0.0;
  double t_star = 0.0;
  std::string binding;
};

struct AdaptiveSegment {
  HandoffRecord handoff;
  std::vector<RomForecast> samples;  // forecasts on (window_end, t_star]
};

struct AdaptiveResult {
  std::vector<AdaptiveSegment> segments;
  std::vector<HandoffRecord> log;
  SnapshotSet last_window;
  bool reached_target = false;
};

/// Alternates solver windows and ROM extrapolation until t_target.
AdaptiveResult adaptive_loop(const SnapshotSolver& solver, const Vector& initial_state, double t_start,
                             Index window, double t_target, const RomSettings& settings, int samples_per_segment = 4);

}  // namespace nirom
