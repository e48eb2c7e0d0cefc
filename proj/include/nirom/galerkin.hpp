#pragma once

#include <filesystem>
#include <vector>

#include "nirom/core_data.hpp"
#include "nirom/pod.hpp"
#include "nirom/types.hpp"

namespace nirom {

/// Quadratic Galerkin system for 1D Burgers:
/// da_k/dt = B_k + sum_i L_ik a_i + sum_ij N_ijk a_i a_j.
struct GalerkinOperators {
  Vector b;                // R
  Matrix l;                // R x R, l(i, k)
  std::vector<Matrix> n;   // n[k](i, j)
  double reynolds = 1.0;

  Index size() const { return b.size(); }
  Vector rhs(const Vector& a) const;
};

/// First and second derivatives on a uniform 1D grid: central in the interior, one-sided
/// second order at both ends.
Vector fd_first(const Vector& f, double dx);
Vector fd_second(const Vector& f, double dx);

GalerkinOperators assemble_operators(const PodBasis& basis, const Vector& mean, const SpatialGrid& grid,
                                     double reynolds);

struct Trajectory {
  Vector times;
  Matrix coeffs;  // rows match `times`
};

/// Classical RK4 from t0 with fixed dt; output sampled at `out_times`
/// (the step is shortened to land on each one).
Trajectory integrate(const GalerkinOperators& ops, const Vector& a0, double t0, const Vector& out_times, double dt);

/// CSV with header t,a_1..a_R.
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& tr);

}  // namespace nirom
