#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "nirom/lbfgs.hpp"
#include "nirom/types.hpp"

namespace nirom {

/// Squared-exponential covariance theta_f^2 exp(-0.5 theta_l^2 (t - t')^2).
struct Kernel {
  double theta_f = 1.0;
  double theta_l = 1.0;  // inverse length scale

  void validate() const;
};

Matrix kernel_matrix(const Kernel& k, const Vector& t, const Vector& tp);

struct NlmlResult {
  double value = 0.0;
  Eigen::Vector3d grad = Eigen::Vector3d::Zero();  // d/d(log theta_f, log theta_l, log sigma)
  double jitter = 0.0;                             // diagonal jitter actually used
};

/// Negative log marginal likelihood of (already mean-adjusted) y under the kernel plus
/// noise_var I. A jitter of 1e-10 theta_f^2 is added and escalated on Cholesky failure.
NlmlResult nlml(const Kernel& k, double noise_var, const Vector& t, const Vector& y);

struct GprOptions {
  int restarts = 8;
  std::uint64_t seed = 0;
  /// Box on (log theta_f, log theta_l, log sigma) in standardized units.
  std::array<double, 3> lower{-6.0, -6.0, -9.0};
  std::array<double, 3> upper{6.0, 6.0, 2.0};
  double restart_spread = 1.5;  // half-width of the log-uniform jitter around the heuristic start
  LbfgsOptions lbfgs;
};

struct Prediction {
  Vector mean;
  Vector sd;
};

/// Scalar GP over time. Inputs are standardized and outputs centred/scaled internally;
/// every public quantity is in the caller's units.
class GprModel {
 public:
  GprModel() = default;

  /// Marginal-likelihood training with multi-start L-BFGS.
  static GprModel train(const Vector& t, const Vector& y, const GprOptions& opts = {});

  /// Fixed hyperparameters in data units; mean function is the sample mean of y.
  static GprModel from_hyperparameters(const Vector& t, const Vector& y, const Kernel& k, double noise_var);

  Prediction predict(const Vector& tq) const;
  std::pair<double, double> predict(double tq) const;

  /// Hyperparameters in data units.
  Kernel kernel() const;
  double noise_var() const;
  double mean_value() const { return y_mean_; }
  double jitter() const { return jitter_ * y_scale_ * y_scale_; }
  double nlml_value() const { return nlml_; }
  bool fallback() const { return fallback_; }
  bool constant() const { return constant_; }
  const Vector& train_t() const { return t_; }
  const Vector& train_y() const { return y_; }

  std::string to_json() const;
  static GprModel from_json(const std::string& text);

 private:
  void factor();

  Vector t_, y_;
  double t_mean_ = 0.0, t_scale_ = 1.0;
  double y_mean_ = 0.0, y_scale_ = 1.0;
  Kernel k_;                  // standardized units
  double noise_ = 0.0;        // standardized units
  double jitter_ = 0.0;
  double nlml_ = 0.0;
  bool fallback_ = false;
  bool constant_ = false;
  Vector ts_;                 // standardized inputs
  Matrix chol_;               // lower factor of C + (noise + jitter) I
  Vector alpha_;
};

struct GprTolerances {
  double beta_gpr_a = 0.01;
  double beta_gpr_gamma = 0.1;

  void validate() const;
};

/// sum_k lambda_k sd_k / sum_k lambda_k |mu_k| over the retained modes.
double mode_uncertainty_ratio(const Vector& lambdas, const Vector& mu, const Vector& sd);

/// sum_{k<=R} lambda_k sd_k / sum_{all k} lambda_k.
double weighted_sigma(const Vector& lambdas_retained, const Vector& sd, double total_energy);

struct GprHorizon {
  double t_star = 0.0;
  bool violated_at_start = false;  // criterion fails at the first scan point; t_star = tM
  bool scan_limit = false;         // criterion never failed up to t_max
  double sigma_weighted = 0.0;     // modes only: weighted sd at t_star
  std::vector<double> per_parameter;  // boundary only
};

/// Walks tM + n step and keeps the last point such that every point up to it satisfies
/// the mode-uncertainty criterion.
GprHorizon gpr_horizon_modes(const std::vector<GprModel>& models, const Vector& lambdas, double total_energy,
                             double tm, double beta, double step, double t_max);

/// Per-parameter sd/|mu| <= beta scan; overall horizon is the minimum over parameters.
GprHorizon gpr_horizon_boundary(const std::vector<GprModel>& models, double tm, double beta, double step,
                                double t_max);

}  // namespace nirom
