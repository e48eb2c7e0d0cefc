#pragma once

#include <functional>

#include "nirom/types.hpp"

namespace nirom {

struct LbfgsOptions {
  int memory = 10;
  int max_iterations = 200;
  double grad_tol = 1e-8;   // on the infinity norm of the gradient
  double rel_f_tol = 1e-12;
  double c1 = 1e-4;         // sufficient decrease
  double c2 = 0.9;          // curvature
  int max_line_search = 40;
};

struct LbfgsResult {
  Vector x;
  double f = 0.0;
  Vector grad;
  int iterations = 0;
  bool converged = false;
};

/// Returns f(x) and writes the gradient into `g`.
using Objective = std::function<double(const Vector& x, Vector& g)>;

/// Limited-memory BFGS with a strong-Wolfe line search. Non-finite objective values
/// inside the line search are treated as "step too long".
LbfgsResult lbfgs_minimize(const Objective& f, Vector x0, const LbfgsOptions& opts = {});

}  // namespace nirom
