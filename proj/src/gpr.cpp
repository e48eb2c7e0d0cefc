#include "nirom/gpr.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "json.hpp"

#include "nirom/error.hpp"

namespace nirom {

namespace {

constexpr double kJitterStart = 1e-10;
constexpr double kJitterMax = 1e-4;

struct Factored {
  Matrix lower;
  double jitter = 0.0;
};

// C must not yet contain jitter.
Factored factorize(Matrix c, double theta_f2) {
  const Index m = c.rows();
  double jitter = kJitterStart * theta_f2;
  const double cap = kJitterMax * theta_f2 * (1.0 + 1e-9);
  for (;;) {
    Matrix cj = c;
    cj.diagonal().array() += jitter;
    Eigen::LLT<Matrix> llt(cj);
    if (llt.info() == Eigen::Success && llt.matrixL().toDenseMatrix().diagonal().allFinite()) {
      Factored f;
      f.lower = llt.matrixL();
      f.jitter = jitter;
      return f;
    }
    jitter *= 10.0;
    if (jitter > cap) break;
  }
  std::ostringstream os;
  os << "Cholesky factorization of the " << m << "x" << m << " covariance failed after jitter escalation to "
     << kJitterMax << " theta_f^2";
  throw NumericalError(os.str());
}

Vector solve_lower(const Matrix& l, const Vector& b) {
  Vector x = l.triangularView<Eigen::Lower>().solve(b);
  return l.transpose().triangularView<Eigen::Upper>().solve(x);
}

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

double median_distance(const Vector& t) {
  std::vector<double> d;
  for (Index i = 0; i < t.size(); ++i)
    for (Index j = i + 1; j < t.size(); ++j) {
      const double v = std::abs(t(i) - t(j));
      if (v > 0.0) d.push_back(v);
    }
  if (d.empty()) return 1.0;
  const auto mid = d.begin() + static_cast<std::ptrdiff_t>(d.size() / 2);
  std::nth_element(d.begin(), mid, d.end());
  return *mid;
}

void check_series(const Vector& t, const Vector& y, Index min_size) {
  if (t.size() != y.size()) throw InputError("GPR: input and output lengths differ");
  if (t.size() < min_size) {
    std::ostringstream os;
    os << "GPR: need at least " << min_size << " training points, got " << t.size();
    throw InputError(os.str());
  }
  if (!t.allFinite() || !y.allFinite()) throw InputError("GPR: non-finite training data");
}

}  // namespace

void Kernel::validate() const {
  if (!(theta_f > 0.0) || !(theta_l > 0.0)) throw InputError("kernel hyperparameters must be positive");
}

Matrix kernel_matrix(const Kernel& k, const Vector& t, const Vector& tp) {
  Matrix c(t.size(), tp.size());
  const double f2 = k.theta_f * k.theta_f;
  const double l2 = k.theta_l * k.theta_l;
  for (Index j = 0; j < tp.size(); ++j)
    for (Index i = 0; i < t.size(); ++i) {
      const double d = t(i) - tp(j);
      c(i, j) = f2 * std::exp(-0.5 * l2 * d * d);
    }
  return c;
}

NlmlResult nlml(const Kernel& k, double noise_var, const Vector& t, const Vector& y) {
  const Index m = t.size();
  if (m < 1 || y.size() != m) throw InputError("nlml: empty or mismatched data");
  const Matrix kk = kernel_matrix(k, t, t);
  Matrix c = kk;
  c.diagonal().array() += noise_var;
  const double f2 = k.theta_f * k.theta_f;
  const Factored fac = factorize(c, f2);

  const Vector alpha = solve_lower(fac.lower, y);
  NlmlResult r;
  r.jitter = fac.jitter;
  r.value = 0.5 * y.dot(alpha) + fac.lower.diagonal().array().log().sum() +
            0.5 * static_cast<double>(m) * std::log(2.0 * std::numbers::pi);

  Matrix cinv = fac.lower.triangularView<Eigen::Lower>().solve(Matrix::Identity(m, m));
  cinv = fac.lower.transpose().triangularView<Eigen::Upper>().solve(cinv);
  const Matrix w = cinv - alpha * alpha.transpose();

  // dC/dlog theta_f = 2K + 2 jitter I (the jitter scales with theta_f^2).
  r.grad(0) = (w.array() * kk.array()).sum() + fac.jitter * w.trace();
  double g1 = 0.0;
  const double l2 = k.theta_l * k.theta_l;
  for (Index j = 0; j < m; ++j)
    for (Index i = 0; i < m; ++i) {
      const double d = t(i) - t(j);
      g1 += w(i, j) * (-kk(i, j) * l2 * d * d);
    }
  r.grad(1) = 0.5 * g1;
  r.grad(2) = noise_var * w.trace();
  return r;
}

void GprModel::factor() {
  if (constant_) {
    chol_.resize(0, 0);
    alpha_ = Vector::Zero(t_.size());
    return;
  }
  const Vector ys = (y_.array() - y_mean_) / y_scale_;
  Matrix c = kernel_matrix(k_, ts_, ts_);
  c.diagonal().array() += noise_;
  const Factored fac = factorize(c, k_.theta_f * k_.theta_f);
  chol_ = fac.lower;
  jitter_ = fac.jitter;
  alpha_ = solve_lower(chol_, ys);
}

GprModel GprModel::from_hyperparameters(const Vector& t, const Vector& y, const Kernel& k, double noise_var) {
  check_series(t, y, 1);
  k.validate();
  if (!(noise_var >= 0.0)) throw InputError("noise variance must be nonnegative");
  GprModel g;
  g.t_ = t;
  g.y_ = y;
  g.y_mean_ = y.mean();
  g.k_ = k;
  g.noise_ = noise_var;
  g.ts_ = t;
  g.factor();
  const Vector yc = y.array() - g.y_mean_;
  g.nlml_ = 0.5 * yc.dot(g.alpha_) + g.chol_.diagonal().array().log().sum() +
            0.5 * static_cast<double>(t.size()) * std::log(2.0 * std::numbers::pi);
  return g;
}

GprModel GprModel::train(const Vector& t, const Vector& y, const GprOptions& opts) {
  check_series(t, y, 2);
  GprModel g;
  g.t_ = t;
  g.y_ = y;
  const double n = static_cast<double>(t.size());
  g.t_mean_ = t.mean();
  g.t_scale_ = std::sqrt((t.array() - g.t_mean_).square().sum() / n);
  if (!(g.t_scale_ > 0.0)) throw InputError("GPR: training inputs are all equal");
  g.ts_ = (t.array() - g.t_mean_) / g.t_scale_;
  g.y_mean_ = y.mean();
  g.y_scale_ = std::sqrt((y.array() - g.y_mean_).square().sum() / n);
  if (!(g.y_scale_ > 1e-14 * std::max(1.0, std::abs(g.y_mean_)))) {
    g.constant_ = true;
    g.y_scale_ = 0.0;
    g.k_ = Kernel{1.0, 1.0 / median_distance(g.ts_)};
    g.noise_ = 0.0;
    g.factor();
    return g;
  }
  const Vector ys = (y.array() - g.y_mean_) / g.y_scale_;

  const Eigen::Array3d lo(opts.lower[0], opts.lower[1], opts.lower[2]);
  const Eigen::Array3d hi(opts.upper[0], opts.upper[1], opts.upper[2]);
  const Eigen::Array3d span = hi - lo;
  auto to_params = [&](const Vector& z) {
    Eigen::Array3d p;
    for (int i = 0; i < 3; ++i) p(i) = lo(i) + span(i) * sigmoid(z(i));
    return p;
  };
  const Vector& ts = g.ts_;
  Objective obj = [&](const Vector& z, Vector& grad) {
    const Eigen::Array3d p = to_params(z);
    grad.setZero(3);
    try {
      const NlmlResult r = nlml(Kernel{std::exp(p(0)), std::exp(p(1))}, std::exp(2.0 * p(2)), ts, ys);
      for (int i = 0; i < 3; ++i) {
        const double s = sigmoid(z(i));
        grad(i) = r.grad(i) * span(i) * s * (1.0 - s);
      }
      return r.value;
    } catch (const NumericalError&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  const Eigen::Array3d heuristic(0.0, std::log(1.0 / median_distance(ts)), -3.0);
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> jit(-opts.restart_spread, opts.restart_spread);
  bool have = false;
  LbfgsResult best;
  for (int r = 0; r < std::max(1, opts.restarts); ++r) {
    Eigen::Array3d p0 = heuristic;
    if (r > 0)
      for (int i = 0; i < 3; ++i) p0(i) += jit(rng);
    Vector z0(3);
    for (int i = 0; i < 3; ++i) {
      const double u = std::clamp((p0(i) - lo(i)) / span(i), 0.01, 0.99);
      z0(i) = std::log(u / (1.0 - u));
    }
    try {
      LbfgsResult res = lbfgs_minimize(obj, z0, opts.lbfgs);
      if (std::isfinite(res.f) && (!have || res.f < best.f)) {
        best = std::move(res);
        have = true;
      }
    } catch (const NumericalError&) {
    }
  }

  Eigen::Array3d p = heuristic;
  if (have) {
    p = to_params(best.x);
    g.nlml_ = best.f;
  } else {
    g.fallback_ = true;
  }
  g.k_ = Kernel{std::exp(p(0)), std::exp(p(1))};
  g.noise_ = std::exp(2.0 * p(2));
  g.factor();
  if (!have) g.nlml_ = nlml(g.k_, g.noise_, ts, ys).value;
  return g;
}

Prediction GprModel::predict(const Vector& tq) const {
  Prediction out;
  if (constant_) {
    out.mean = Vector::Constant(tq.size(), y_mean_);
    out.sd = Vector::Zero(tq.size());
    return out;
  }
  const Vector tqs = (tq.array() - t_mean_) / t_scale_;
  const Matrix ks = kernel_matrix(k_, tqs, ts_);
  out.mean = (ks * alpha_).array() * y_scale_ + y_mean_;
  const Matrix v = chol_.triangularView<Eigen::Lower>().solve(ks.transpose());
  const double f2 = k_.theta_f * k_.theta_f;
  out.sd.resize(tq.size());
  for (Index q = 0; q < tq.size(); ++q) {
    const double var = f2 - v.col(q).squaredNorm();
    out.sd(q) = std::sqrt(std::max(var, 0.0)) * y_scale_;
  }
  return out;
}

std::pair<double, double> GprModel::predict(double tq) const {
  const Prediction p = predict(Vector::Constant(1, tq));
  return {p.mean(0), p.sd(0)};
}

Kernel GprModel::kernel() const { return Kernel{k_.theta_f * y_scale_, k_.theta_l / t_scale_}; }

double GprModel::noise_var() const { return noise_ * y_scale_ * y_scale_; }

std::string GprModel::to_json() const {
  nlohmann::json j;
  j["t"] = std::vector<double>(t_.data(), t_.data() + t_.size());
  j["y"] = std::vector<double>(y_.data(), y_.data() + y_.size());
  j["t_mean"] = t_mean_;
  j["t_scale"] = t_scale_;
  j["y_mean"] = y_mean_;
  j["y_scale"] = y_scale_;
  j["theta_f"] = k_.theta_f;
  j["theta_l"] = k_.theta_l;
  j["noise_var"] = noise_;
  j["nlml"] = nlml_;
  j["fallback"] = fallback_;
  j["constant"] = constant_;
  const Kernel kd = kernel();
  j["data_units"] = {{"theta_f", kd.theta_f}, {"theta_l", kd.theta_l}, {"noise_var", noise_var()}};
  return j.dump(2);
}

GprModel GprModel::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("GPR model JSON: ") + e.what());
  }
  GprModel g;
  try {
    const auto t = j.at("t").get<std::vector<double>>();
    const auto y = j.at("y").get<std::vector<double>>();
    g.t_ = Eigen::Map<const Vector>(t.data(), static_cast<Index>(t.size()));
    g.y_ = Eigen::Map<const Vector>(y.data(), static_cast<Index>(y.size()));
    g.t_mean_ = j.at("t_mean").get<double>();
    g.t_scale_ = j.at("t_scale").get<double>();
    g.y_mean_ = j.at("y_mean").get<double>();
    g.y_scale_ = j.at("y_scale").get<double>();
    g.k_ = Kernel{j.at("theta_f").get<double>(), j.at("theta_l").get<double>()};
    g.noise_ = j.at("noise_var").get<double>();
    g.nlml_ = j.value("nlml", 0.0);
    g.fallback_ = j.value("fallback", false);
    g.constant_ = j.value("constant", false);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("GPR model JSON: ") + e.what());
  }
  check_series(g.t_, g.y_, 1);
  g.ts_ = (g.t_.array() - g.t_mean_) / g.t_scale_;
  g.factor();
  return g;
}

void GprTolerances::validate() const {
  if (!(beta_gpr_a > 0.0)) throw InputError("beta_gpr_a must be positive");
  if (!(beta_gpr_gamma > 0.0)) throw InputError("beta_gpr_gamma must be positive");
}

double mode_uncertainty_ratio(const Vector& lambdas, const Vector& mu, const Vector& sd) {
  const Index r = mu.size();
  const double num = (lambdas.head(r).array() * sd.array()).sum();
  const double den = (lambdas.head(r).array() * mu.array().abs()).sum();
  if (!(den > 0.0)) return std::numeric_limits<double>::infinity();
  return num / den;
}

double weighted_sigma(const Vector& lambdas_retained, const Vector& sd, double total_energy) {
  if (!(total_energy > 0.0)) throw DegenerateError("weighted_sigma: zero total energy");
  return (lambdas_retained.head(sd.size()).array() * sd.array()).sum() / total_energy;
}

namespace {

Vector scan_grid(double tm, double step, double t_max) {
  if (!(step > 0.0)) throw InputError("horizon scan step must be positive");
  const auto n = static_cast<Index>(std::floor((t_max - tm) / step + 1e-9));
  Vector t(std::max<Index>(n, 1));
  for (Index i = 0; i < t.size(); ++i) t(i) = tm + static_cast<double>(i + 1) * step;
  return t;
}

// Index of the first failing grid point, or -1.
template <class Ok>
Index first_violation(Index n, Ok ok) {
  for (Index i = 0; i < n; ++i)
    if (!ok(i)) return i;
  return -1;
}

}  // namespace

GprHorizon gpr_horizon_modes(const std::vector<GprModel>& models, const Vector& lambdas, double total_energy,
                             double tm, double beta, double step, double t_max) {
  if (models.empty()) throw InputError("gpr_horizon_modes: no mode models");
  if (lambdas.size() < static_cast<Index>(models.size())) throw InputError("gpr_horizon_modes: too few eigenvalues");
  const Vector grid = scan_grid(tm, step, t_max);
  const Index r = static_cast<Index>(models.size());
  Matrix mu(grid.size(), r), sd(grid.size(), r);
  for (Index k = 0; k < r; ++k) {
    const Prediction p = models[static_cast<size_t>(k)].predict(grid);
    mu.col(k) = p.mean;
    sd.col(k) = p.sd;
  }
  const Vector lam = lambdas.head(r);
  const Index bad = first_violation(grid.size(), [&](Index i) {
    return mode_uncertainty_ratio(lam, mu.row(i).transpose(), sd.row(i).transpose()) <= beta;
  });

  GprHorizon h;
  if (bad == 0) {
    h.violated_at_start = true;
    h.t_star = tm;
  } else if (bad < 0) {
    h.scan_limit = true;
    h.t_star = grid(grid.size() - 1);
  } else {
    h.t_star = grid(bad - 1);
  }
  Vector sd_star(r);
  for (Index k = 0; k < r; ++k) sd_star(k) = models[static_cast<size_t>(k)].predict(h.t_star).second;
  h.sigma_weighted = weighted_sigma(lam, sd_star, total_energy);
  return h;
}

GprHorizon gpr_horizon_boundary(const std::vector<GprModel>& models, double tm, double beta, double step,
                                double t_max) {
  if (models.empty()) throw InputError("gpr_horizon_boundary: no boundary models");
  const Vector grid = scan_grid(tm, step, t_max);
  GprHorizon h;
  h.t_star = std::numeric_limits<double>::infinity();
  for (const GprModel& m : models) {
    const Prediction p = m.predict(grid);
    const Index bad = first_violation(grid.size(), [&](Index i) {
      const double a = std::abs(p.mean(i));
      return a >= 1e-12 && p.sd(i) / a <= beta;
    });
    double t;
    if (bad == 0) {
      h.violated_at_start = true;
      t = tm;
    } else if (bad < 0) {
      h.scan_limit = true;
      t = grid(grid.size() - 1);
    } else {
      t = grid(bad - 1);
    }
    h.per_parameter.push_back(t);
    h.t_star = std::min(h.t_star, t);
  }
  return h;
}

}  // namespace nirom
