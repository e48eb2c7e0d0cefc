// Acceptance checks for criteria 1-8. One PASS/FAIL line each; exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "nirom/bench.hpp"
#include "nirom/error.hpp"
#include "nirom/galerkin.hpp"
#include "nirom/gpr.hpp"
#include "nirom/mls.hpp"
#include "nirom/pod.hpp"
#include "nirom/rom.hpp"
#include "nirom/suites.hpp"

using namespace nirom;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Matrix gaussian(Index r, Index c, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> d;
  Matrix m(r, c);
  for (Index j = 0; j < c; ++j)
    for (Index i = 0; i < r; ++i) m(i, j) = d(rng);
  return m;
}

Outcome mode_counts() {
  Outcome o;
  const std::vector<double> re{1, 100, 300, 500};
  const std::vector<Index> want{1, 2, 4, 4};
  o.detail << " R =";
  for (size_t i = 0; i < re.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    BurgersConfig c;
    c.reynolds = re[i];
    const SnapshotSet s = burgers_snapshots(c, 0.3, 0.5, 20);
    const PodBasis b = truncate(decompose(correlation_matrix(s), s), 0.01);
    const double dt = seconds_since(t0);
    o.detail << " " << b.retained << " (Re " << re[i] << ", rrms " << b.rrms_tail << ", " << dt << " s)";
    o.require(b.retained == want[i], "Re " + std::to_string(int(re[i])) + " expects R=" + std::to_string(want[i]));
    o.require(dt < 10.0, "runtime");
  }
  return o;
}

Outcome forecast_accuracy() {
  Outcome o;
  const io::Table t = galerkin_compare({1, 100, 500}, BurgersSetup{}, RomSettings{});
  for (Index i = 0; i < t.values.rows(); ++i) {
    const double re = t.values(i, 0), eg = t.values(i, 2), ep = t.values(i, 3);
    const double limit = re < 200 ? 0.05 : 0.25;
    o.detail << " Re " << re << ": gpr " << eg << ", galerkin " << ep << ";";
    o.require(eg <= limit && ep <= limit, "error bound at Re " + std::to_string(int(re)));
    if (re >= 500) {
      const double xs = t.values(i, 4);
      o.detail << " shock x=" << xs << ", max error at x=" << t.values(i, 5) << " / " << t.values(i, 6);
      o.require(std::abs(t.values(i, 5) - xs) <= 0.1 && std::abs(t.values(i, 6) - xs) <= 0.1,
                "errors concentrated near the shock");
    }
  }
  return o;
}

struct Dataset {
  SnapshotSet s;
  std::string name;
};

Outcome pod_identities() {
  Outcome o;
  std::vector<Dataset> sets;
  {
    const auto g = SpatialGrid::uniform_1d(0, 2, 60);
    sets.push_back({SnapshotSet(g, Vector::LinSpaced(9, 0, 1), gaussian(9, 60, 1)), "random 1D"});
    const auto g2 = SpatialGrid::uniform_2d(0, 1, 9, 0, 1, 7);
    sets.push_back({SnapshotSet(g2, Vector::LinSpaced(7, 0, 1), gaussian(7, 63, 2)), "random 2D"});
    BurgersConfig c;
    c.reynolds = 500;
    sets.push_back({burgers_snapshots(c, 0.3, 0.5, 20), "Burgers Re 500"});
  }
  double worst_orth = 0, worst_trace = 0, worst_rss = 0, worst_literal = 0;
  for (const auto& d : sets) {
    const SnapshotSet& s = d.s;
    const PodBasis b0 = decompose(correlation_matrix(s), s);
    const Matrix& w = s.grid().weights();
    const Matrix gram = b0.all_modes.topRows(b0.rank) * w.asDiagonal() * b0.all_modes.topRows(b0.rank).transpose();
    worst_orth = std::max(worst_orth, (gram - Matrix::Identity(b0.rank, b0.rank)).cwiseAbs().maxCoeff());
    double direct = 0;
    for (Index i = 0; i < s.snapshot_count(); ++i) direct += inner_product(s.fluct().row(i), s.fluct().row(i), s.grid());
    worst_trace = std::max(worst_trace, std::abs(b0.eigenvalues.sum() - direct) / direct);

    const double total = b0.total_energy();
    const Index m = s.snapshot_count();
    for (Index r = 1; r <= b0.rank; ++r) {
      const PodBasis b = truncate_to(b0, r);
      double sq = 0, mean_norm = 0;
      for (Index i = 0; i < m; ++i) {
        const Vector rec = reconstruct(b, s.mean(), b.coeffs.row(i).transpose());
        const Vector e = s.fields().row(i).transpose() - rec;
        const double n2 = inner_product(e, e, s.grid());
        sq += n2;
        mean_norm += std::sqrt(n2);
      }
      mean_norm /= static_cast<double>(m);
      const double tail = b.tail_energy();
      worst_rss = std::max(worst_rss, std::abs(std::sqrt(sq) - std::sqrt(tail)) / std::sqrt(total));
      if (tail > 1e-14 * total)
        worst_literal = std::max(worst_literal, std::abs(mean_norm - std::sqrt(tail)) / std::sqrt(tail));
    }
  }
  o.detail << " orthonormality " << worst_orth << ", trace " << worst_trace << ", root-sum-square identity "
           << worst_rss << ", literal mean-norm identity " << worst_literal;
  o.require(worst_orth <= 1e-8, "orthonormality");
  o.require(worst_trace <= 1e-10, "trace identity");
  o.require(worst_rss <= 1e-8, "sqrt(sum ||e_i||^2) = sqrt(tail)");
  o.require(worst_literal <= 1e-8, "(1/M) sum ||e_i|| = sqrt(tail) is false for R < rank");
  return o;
}

Prediction dense_posterior(const Vector& t, const Vector& y, const Kernel& k, double noise, double jitter,
                           const Vector& tq) {
  const double mu0 = y.mean();
  Matrix c = kernel_matrix(k, t, t);
  c.diagonal().array() += noise + jitter;
  const Matrix ks = kernel_matrix(k, tq, t);
  const Eigen::FullPivLU<Matrix> lu(c);
  const Vector w = lu.solve(Vector(y.array() - mu0));
  const Matrix v = lu.solve(Matrix(ks.transpose()));
  Prediction p;
  p.mean = (ks * w).array() + mu0;
  p.sd.resize(tq.size());
  for (Index q = 0; q < tq.size(); ++q)
    p.sd(q) = std::sqrt(std::max(k.theta_f * k.theta_f - ks.row(q).dot(v.col(q)), 0.0));
  return p;
}

Outcome gpr_correctness() {
  Outcome o;
  double worst_grad = 0;
  for (unsigned seed = 0; seed < 50; ++seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1, 1);
    const Index n = 6 + seed % 10;
    const Vector t = gaussian(n, 1, seed).col(0) * 2.0;
    const Vector y = gaussian(n, 1, seed + 1000).col(0);
    const Eigen::Vector3d p(u(rng), u(rng), -1.5 + u(rng));
    auto f = [&](const Eigen::Vector3d& q) {
      return nlml(Kernel{std::exp(q(0)), std::exp(q(1))}, std::exp(2 * q(2)), t, y);
    };
    const NlmlResult r = f(p);
    for (int i = 0; i < 3; ++i) {
      Eigen::Vector3d hi = p, lo = p;
      const double h = 1e-5;
      hi(i) += h;
      lo(i) -= h;
      const double fd = (f(hi).value - f(lo).value) / (2 * h);
      worst_grad = std::max(worst_grad, std::abs(fd - r.grad(i)) / std::max(1.0, std::abs(fd)));
    }
  }
  const Vector t = (Vector(7) << 0.0, 0.2, 0.55, 0.9, 1.4, 2.0, 2.6).finished();
  const Vector y = gaussian(7, 1, 77).col(0);
  const Kernel k{0.9, 1.7};
  const GprModel g = GprModel::from_hyperparameters(t, y, k, 0.01);
  const Vector tq = Vector::LinSpaced(41, -1, 4);
  const Prediction a = g.predict(tq);
  const Prediction b = dense_posterior(t, y, k, 0.01, g.jitter(), tq);
  const double post = std::max((a.mean - b.mean).cwiseAbs().maxCoeff(), (a.sd - b.sd).cwiseAbs().maxCoeff());

  const GprModel trained = GprModel::train(t, y);
  const Kernel kt = trained.kernel();
  const double far = std::abs(trained.predict(t(6) + 10.0 / kt.theta_l).second - kt.theta_f) / kt.theta_f;

  o.detail << " gradient rel err " << worst_grad << " (50 seeds), posterior vs dense " << post
           << ", far-field |sd - theta_f|/theta_f " << far;
  o.require(worst_grad <= 1e-5, "gradient");
  o.require(post <= 1e-9, "posterior");
  o.require(far <= 1e-6, "far field");
  return o;
}

Outcome error_growth_check() {
  Outcome o;
  const io::Table t = error_growth(500, 4, 10, 0.3, BurgersSetup{}, RomSettings{});
  bool err_ok = true, sd_ok = true;
  for (Index i = 1; i < t.values.rows(); ++i) {
    err_ok = err_ok && t.values(i, 2) + 1e-12 >= t.values(i - 1, 2);
    sd_ok = sd_ok && t.values(i, 3) + 1e-12 >= t.values(i - 1, 3);
  }
  const Index last = t.values.rows() - 1;
  o.detail << " rom error " << t.values(0, 2) << " -> " << t.values(last, 2) << ", sigma " << t.values(0, 3) << " -> "
           << t.values(last, 3);
  o.require(err_ok, "rom error nondecreasing");
  o.require(sd_ok, "sigma nondecreasing");
  return o;
}

Outcome horizons() {
  Outcome o;
  BurgersConfig c;
  c.reynolds = 100;
  const SnapshotSet s = burgers_snapshots(c, 0.3, 0.5, 20);
  const RomModel m = build(s);
  const Vector& lam = m.basis.eigenvalues;
  const Index r = m.basis.retained;
  const double beta = m.settings.pod.beta_pod;
  const double closed = 0.5 + 0.2 * beta * (std::log(lam(1)) - std::log(lam(r + 1))) / static_cast<double>(r);
  const double pod_err = std::abs(m.pod_h.t_star - closed);
  o.require(!m.pod_h.unbounded && pod_err <= 1e-12, "POD horizon arithmetic");

  const double step = m.scan_step();
  const double t_max = m.tm + 10.0 * (m.tm - m.t1);
  double prev = -INFINITY;
  bool mono_a = true;
  for (double b : {0.001, 0.003, 0.01, 0.03, 0.1, 0.3, 1.0}) {
    const double ts = gpr_horizon_modes(m.mode_models, lam, m.basis.total_energy(), m.tm, b, step, t_max).t_star;
    mono_a = mono_a && ts >= prev;
    prev = ts;
  }
  o.require(mono_a, "GPR mode horizon monotone in beta");

  BubbleConfig bc;
  bc.t_horizon = 70;
  const RomModel mb = build(bubble_snapshots(bc, 51, 60, 10));
  bool mono_g = mb.has_boundary();
  prev = -INFINITY;
  for (double b : {0.001, 0.01, 0.03, 0.1, 0.3, 1.0}) {
    const double ts = gpr_horizon_boundary(mb.boundary_models, mb.tm, b, mb.scan_step(), 70.0).t_star;
    mono_g = mono_g && ts >= prev;
    prev = ts;
  }
  o.require(mono_g, "GPR boundary horizon monotone in beta");

  bool minimum = true;
  for (const RomModel* x : {&m, &mb}) {
    double want = std::min(x->pod_h.unbounded ? INFINITY : x->pod_h.t_star, x->gpr_a_h.t_star);
    if (x->gpr_gamma_h) want = std::min(want, x->gpr_gamma_h->t_star);
    minimum = minimum && x->t_star() == want;
  }
  o.require(minimum, "composed horizon equals the component minimum");
  o.detail << " pod |t* - closed form| " << pod_err << "; Burgers t* " << m.t_star() << " (" << m.binding()
           << "); bubble t* " << mb.t_star() << " (" << mb.binding() << ")";
  return o;
}

double one_sided_error(double h, int order) {
  MlsConfig cfg;
  cfg.order = order;
  const double xp = 0.3;
  const Vector x = Vector::LinSpaced(12, 0.1, 0.95).array() * h + xp;
  const Vector f = x.array().sin() + x.array().exp();
  return std::abs(mls_fit(Eigen::RowVectorXd::Constant(1, xp), x, f, h, cfg)(0) - (std::sin(xp) + std::exp(xp)));
}

Outcome mls_correction() {
  Outcome o;
  BubbleConfig cfg;
  const BubbleRun r = bubble_run(cfg, 51, 60, 10, 70, RomSettings{});
  o.detail << " exposed " << r.exposed << ", corrected " << r.corrected << ", max err " << r.max_err_before << " -> "
           << r.max_err_after << ", relative " << r.rel_err_before << " -> " << r.rel_err_after;
  o.require(r.exposed > 0 && r.max_err_after < r.max_err_before, "correction reduces max exposed error");
  o.require(r.rel_err_after <= 0.1, "overall relative error");

  // Degree <= 3 reproduction on scattered 2D points.
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  Matrix p(40, 2);
  Vector v(40);
  auto poly = [](double x, double y) { return 0.3 - x + 2 * y + x * y - y * y + 1.5 * x * x * y - y * y * y; };
  for (Index i = 0; i < 40; ++i) {
    p(i, 0) = u(rng);
    p(i, 1) = u(rng);
    v(i) = poly(p(i, 0), p(i, 1));
  }
  double repro = 0;
  for (double xq : {-0.1, 0.0, 0.2})
    repro = std::max(repro, std::abs(mls_fit((Eigen::RowVectorXd(2) << xq, -xq).finished(), p, v, 1.0, MlsConfig{})(0) -
                                     poly(xq, -xq)));
  o.require(repro <= 1e-9, "cubic reproduction");

  double worst_rate_dev = 0;
  for (int s : {1, 2, 3}) {
    double h = 0.4, prev = one_sided_error(h, s);
    for (int k = 0; k < 3; ++k) {
      h /= 2;
      const double e = one_sided_error(h, s);
      worst_rate_dev = std::max(worst_rate_dev, std::abs(std::log2(prev / e) - (s + 1)));
      prev = e;
    }
  }
  o.require(worst_rate_dev <= 0.5, "convergence order");
  o.detail << "; cubic reproduction " << repro << ", worst rate deviation " << worst_rate_dev;
  return o;
}

Outcome adaptive() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  BurgersConfig c;
  const double spacing = 0.2 / 19;
  SnapshotSolver solver = [&](const Vector&, double ts, Index m) {
    return burgers_snapshots(c, ts, ts + spacing * static_cast<double>(m - 1), m);
  };
  const AdaptiveResult r = adaptive_loop(solver, burgers_field(burgers_grid(c), 0.3, c), 0.3, 20, 1.2, RomSettings{});
  const double dt = seconds_since(t0);
  bool increasing = true;
  for (size_t i = 1; i < r.log.size(); ++i) increasing = increasing && r.log[i].t_star > r.log[i - 1].t_star;
  double worst = 0;
  const SpatialGrid g = burgers_grid(c);
  for (const auto& seg : r.segments)
    for (const auto& f : seg.samples) worst = std::max(worst, relative_error(f.field, burgers_field(g, f.t_query, c), g));
  o.detail << " " << r.log.size() << " handoffs, worst segment error " << worst << ", " << dt << " s";
  o.require(r.reached_target, "reaches t=1.2");
  o.require(increasing, "handoff times increase");
  o.require(worst <= 0.1, "segment error");
  o.require(dt < 60.0, "runtime");
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"Burgers mode counts", mode_counts},     {"Burgers forecast accuracy", forecast_accuracy},
      {"POD identities", pod_identities},       {"GPR correctness", gpr_correctness},
      {"error growth beyond data", error_growth_check}, {"horizon criteria", horizons},
      {"MLS correction", mls_correction},       {"adaptive loop", adaptive}};
  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    if (!o.pass) ++failed;
    std::printf("%s criterion %zu (%s):%s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.str().c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed ? 1 : 0;
}
