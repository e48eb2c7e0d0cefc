#pragma once

#include <vector>

#include "nirom/bench.hpp"
#include "nirom/io.hpp"
#include "nirom/rom.hpp"

namespace nirom {

struct BurgersSetup {
  double t1 = 0.3;
  double tm = 0.5;
  Index snapshots = 20;
  double t_query = 0.6;
  Index nx = 1001;
};

/// reynolds, R, rrms, relative_error at t_query, one row per (Re, R) pair.
io::Table burgers_sweep(const std::vector<double>& reynolds, Index max_modes, const BurgersSetup& setup,
                        const RomSettings& settings);

/// reynolds, R, err_gpr, err_galerkin, x_shock, x_maxerr_gpr, x_maxerr_galerkin, t_star.
/// The Galerkin system is integrated from the first snapshot with dt = spacing / 100.
io::Table galerkin_compare(const std::vector<double>& reynolds, const BurgersSetup& setup,
                           const RomSettings& settings);

/// x, exact, gpr, galerkin at t_query for one Reynolds number.
io::Table galerkin_profile(double reynolds, const BurgersSetup& setup, const RomSettings& settings);

/// dt_star, t, rom_error, sigma_weighted on `points` offsets spanning [0, span].
io::Table error_growth(double reynolds, Index modes, Index points, double span, const BurgersSetup& setup,
                       const RomSettings& settings);

struct BubbleRun {
  Index retained = 0;
  double t_star = 0.0;
  std::string binding;
  double radius_pred = 0.0;
  double radius_true = 0.0;
  Index exposed = 0;
  Index corrected = 0;
  double max_err_before = 0.0;  // exposed nodes only
  double max_err_after = 0.0;
  double rel_err_before = 0.0;  // fluid nodes at t_query
  double rel_err_after = 0.0;
  std::vector<Index> exposed_nodes;
};

/// Moving-boundary pipeline on the manufactured cavity, forced to t_query.
BubbleRun bubble_run(const BubbleConfig& cfg, double t1, double tm, Index m, double t_query,
                     const RomSettings& settings);
io::Table bubble_table(const BubbleRun& r);

}  // namespace nirom
