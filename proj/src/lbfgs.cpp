#include "nirom/lbfgs.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <vector>

#include "nirom/error.hpp"

namespace nirom {

namespace {

struct Point {
  double alpha = 0.0;
  double f = 0.0;
  double d = 0.0;  // directional derivative
  Vector x;
  Vector g;
  bool ok = false;
};

Point evaluate(const Objective& f, const Vector& x0, const Vector& p, double alpha) {
  Point pt;
  pt.alpha = alpha;
  pt.x = x0 + alpha * p;
  pt.g.resize(x0.size());
  pt.f = f(pt.x, pt.g);
  pt.ok = std::isfinite(pt.f) && pt.g.allFinite();
  pt.d = pt.ok ? pt.g.dot(p) : 0.0;
  return pt;
}

double cubic_min(const Point& lo, const Point& hi) {
  const double d1 = lo.d + hi.d - 3.0 * (lo.f - hi.f) / (lo.alpha - hi.alpha);
  const double disc = d1 * d1 - lo.d * hi.d;
  const double a_min = std::min(lo.alpha, hi.alpha);
  const double a_max = std::max(lo.alpha, hi.alpha);
  if (disc >= 0.0) {
    const double d2 = std::copysign(std::sqrt(disc), hi.alpha - lo.alpha);
    const double a = hi.alpha - (hi.alpha - lo.alpha) * (hi.d + d2 - d1) / (hi.d - lo.d + 2.0 * d2);
    const double margin = 0.1 * (a_max - a_min);
    if (std::isfinite(a) && a > a_min + margin && a < a_max - margin) return a;
  }
  return 0.5 * (lo.alpha + hi.alpha);
}

// Nocedal & Wright, algorithms 3.5 and 3.6.
bool line_search(const Objective& f, const Vector& x0, double f0, double d0, const Vector& p,
                 const LbfgsOptions& o, double alpha1, Point& out) {
  Point prev;
  prev.alpha = 0.0;
  prev.f = f0;
  prev.d = d0;
  prev.ok = true;
  double alpha = alpha1;
  int evals = 0;

  auto zoom = [&](Point lo, Point hi) {
    while (evals < o.max_line_search) {
      const double a = hi.ok ? cubic_min(lo, hi) : 0.5 * (lo.alpha + hi.alpha);
      Point cur = evaluate(f, x0, p, a);
      ++evals;
      if (!cur.ok || cur.f > f0 + o.c1 * a * d0 || cur.f >= lo.f) {
        hi = cur;
      } else {
        if (std::abs(cur.d) <= -o.c2 * d0) {
          out = cur;
          return true;
        }
        if (cur.d * (hi.alpha - lo.alpha) >= 0.0) hi = lo;
        lo = cur;
      }
      if (std::abs(hi.alpha - lo.alpha) < 1e-16 * std::max(1.0, lo.alpha)) break;
    }
    if (lo.alpha > 0.0) {
      out = lo;
      return true;
    }
    return false;
  };

  while (evals < o.max_line_search) {
    Point cur = evaluate(f, x0, p, alpha);
    ++evals;
    if (!cur.ok || cur.f > f0 + o.c1 * alpha * d0 || (evals > 1 && cur.f >= prev.f)) return zoom(prev, cur);
    if (std::abs(cur.d) <= -o.c2 * d0) {
      out = cur;
      return true;
    }
    if (cur.d >= 0.0) return zoom(cur, prev);
    prev = cur;
    alpha *= 2.0;
  }
  return false;
}

}  // namespace

LbfgsResult lbfgs_minimize(const Objective& f, Vector x0, const LbfgsOptions& opts) {
  LbfgsResult r;
  r.x = std::move(x0);
  r.grad.resize(r.x.size());
  r.f = f(r.x, r.grad);
  if (!std::isfinite(r.f) || !r.grad.allFinite()) throw NumericalError("lbfgs: objective not finite at the start point");

  std::deque<Vector> s_hist, y_hist;
  std::deque<double> rho_hist;
  for (r.iterations = 0; r.iterations < opts.max_iterations; ++r.iterations) {
    if (r.grad.lpNorm<Eigen::Infinity>() <= opts.grad_tol) {
      r.converged = true;
      break;
    }
    // Two-loop recursion.
    Vector q = r.grad;
    std::vector<double> a(s_hist.size());
    for (size_t i = s_hist.size(); i-- > 0;) {
      a[i] = rho_hist[i] * s_hist[i].dot(q);
      q -= a[i] * y_hist[i];
    }
    if (!s_hist.empty()) q *= s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
    for (size_t i = 0; i < s_hist.size(); ++i) {
      const double b = rho_hist[i] * y_hist[i].dot(q);
      q += (a[i] - b) * s_hist[i];
    }
    Vector p = -q;
    double d0 = p.dot(r.grad);
    if (!(d0 < 0.0)) {
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      p = -r.grad;
      d0 = p.dot(r.grad);
    }
    const double alpha1 = s_hist.empty() ? std::min(1.0, 1.0 / p.lpNorm<Eigen::Infinity>()) : 1.0;

    Point next;
    if (!line_search(f, r.x, r.f, d0, p, opts, alpha1, next)) break;

    Vector s = next.x - r.x;
    Vector y = next.g - r.grad;
    const double f_prev = r.f;
    r.x = std::move(next.x);
    r.grad = std::move(next.g);
    r.f = next.f;

    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
      rho_hist.push_back(1.0 / sy);
      if (static_cast<int>(s_hist.size()) > opts.memory) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
    }
    if (std::abs(f_prev - r.f) <= opts.rel_f_tol * std::max({1.0, std::abs(f_prev), std::abs(r.f)})) {
      r.converged = true;
      ++r.iterations;
      break;
    }
  }
  return r;
}

}  // namespace nirom
