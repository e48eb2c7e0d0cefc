#pragma once

#include <filesystem>

#include "nirom/core_data.hpp"
#include "nirom/types.hpp"

namespace nirom {

/// RRMS truncation threshold and eigenvalue-decay horizon tolerance.
struct PodThresholds {
  double alpha_pod = 0.01;
  double beta_pod = 0.3;

  void validate() const;
};

/// Correlation-matrix POD of a snapshot set.
///
/// `modes` holds the retained spatial modes row-wise (R x N); `coeffs` the temporal
/// coefficients a_k(t_i) (M x R). Eigenvalues and eigenvectors always cover all M modes
/// so truncation can be revisited without re-solving.
struct PodBasis {
  Vector eigenvalues;   // M, non-increasing, >= 0
  Matrix eigenvectors;  // M x M, column k pairs with eigenvalues(k)
  Matrix all_modes;     // M x N, zero rows past `rank`
  Index rank = 0;       // modes with lambda_k > 1e-12 lambda_1
  Index retained = 0;   // R
  Matrix modes;         // R x N
  Matrix coeffs;        // M x R
  double rrms_tail = 0.0;

  double total_energy() const { return eigenvalues.sum(); }
  double tail_energy() const { return eigenvalues.tail(eigenvalues.size() - retained).sum(); }
};

/// A_ij = (u_hat_i, u_hat_j), symmetrized.
Matrix correlation_matrix(const SnapshotSet& s);

/// Eigendecomposition of A and mode assembly; the result retains all nondegenerate modes.
PodBasis decompose(const Matrix& corr, const SnapshotSet& s);

/// sqrt(sum_{k>R} lambda_k / sum_k lambda_k).
double rrms_error(const Vector& eigenvalues, Index r);

/// Smallest R whose RRMS error is below alpha_pod.
PodBasis truncate(PodBasis b, double alpha_pod);

/// Keeps exactly `r` modes (clamped to the nondegenerate rank).
PodBasis truncate_to(PodBasis b, Index r);

/// a_k(t_i) = (u_hat_i, phi_k) for every row of `fluct` (rows x N).
Matrix project(const Matrix& fluct, const SpatialGrid& grid, const PodBasis& b);
Matrix project(const SnapshotSet& s, const PodBasis& b);

/// mean + sum_k a_k phi_k.
Vector reconstruct(const PodBasis& b, const Vector& mean, const Vector& coeffs);

/// Relative information content per mode, in percent.
Vector ric(const PodBasis& b);

struct PodHorizon {
  double t_star = 0.0;
  double decay_rate = 0.0;  // (ln lambda_2 - ln lambda_{R+2}) / R
  bool unbounded = false;   // formula undefined (R + 2 > M or lambda_{R+2} ~ 0)
};

/// Furthest forecast time allowed by the eigenvalue decay rate.
PodHorizon pod_horizon(const PodBasis& b, double t1, double tm, double beta_pod);

/// eigenvalues.csv, modes.csv, coeffs.csv, eigenvectors.csv and basis.json under `dir`.
void save_basis(const std::filesystem::path& dir, const PodBasis& b);
PodBasis load_basis(const std::filesystem::path& dir);

}  // namespace nirom
