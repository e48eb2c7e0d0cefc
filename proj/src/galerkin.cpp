#include "nirom/galerkin.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "nirom/error.hpp"
#include "nirom/io.hpp"

namespace nirom {

Vector fd_first(const Vector& f, double dx) {
  const Index n = f.size();
  if (n < 5) throw InputError("finite differences need at least 5 grid nodes");
  Vector d(n);
  d(0) = (-3.0 * f(0) + 4.0 * f(1) - f(2)) / (2.0 * dx);
  d(n - 1) = (3.0 * f(n - 1) - 4.0 * f(n - 2) + f(n - 3)) / (2.0 * dx);
  for (Index i = 1; i + 1 < n; ++i) d(i) = (f(i + 1) - f(i - 1)) / (2.0 * dx);
  return d;
}

Vector fd_second(const Vector& f, double dx) {
  const Index n = f.size();
  if (n < 5) throw InputError("finite differences need at least 5 grid nodes");
  Vector d(n);
  const double h2 = dx * dx;
  d(0) = (2.0 * f(0) - 5.0 * f(1) + 4.0 * f(2) - f(3)) / h2;
  d(n - 1) = (2.0 * f(n - 1) - 5.0 * f(n - 2) + 4.0 * f(n - 3) - f(n - 4)) / h2;
  for (Index i = 1; i + 1 < n; ++i) d(i) = (f(i + 1) - 2.0 * f(i) + f(i - 1)) / h2;
  return d;
}

Vector GalerkinOperators::rhs(const Vector& a) const {
  Vector out = b + l.transpose() * a;
  for (Index k = 0; k < size(); ++k) out(k) += a.dot(n[static_cast<size_t>(k)] * a);
  return out;
}

GalerkinOperators assemble_operators(const PodBasis& basis, const Vector& mean, const SpatialGrid& grid,
                                     double reynolds) {
  if (grid.dim() != 1) throw InputError("Galerkin baseline needs a 1D grid");
  if (grid.size() < 5) throw InputError("Galerkin baseline needs at least 5 grid nodes");
  if (!(reynolds > 0.0)) throw InputError("Reynolds number must be positive");
  if (mean.size() != grid.size() || basis.modes.cols() != grid.size())
    throw InputError("Galerkin: mean/modes do not match the grid");
  const Vector x = grid.coords().col(0);
  const double dx = (x(x.size() - 1) - x(0)) / static_cast<double>(x.size() - 1);
  for (Index i = 1; i < x.size(); ++i)
    if (std::abs(x(i) - x(i - 1) - dx) > 1e-9 * std::abs(dx)) throw InputError("Galerkin baseline needs a uniform grid");

  const Index r = basis.retained;
  const double nu = 1.0 / reynolds;
  std::vector<Vector> phi(static_cast<size_t>(r)), dphi(phi.size()), d2phi(phi.size());
  for (Index k = 0; k < r; ++k) {
    phi[static_cast<size_t>(k)] = basis.modes.row(k).transpose();
    dphi[static_cast<size_t>(k)] = fd_first(phi[static_cast<size_t>(k)], dx);
    d2phi[static_cast<size_t>(k)] = fd_second(phi[static_cast<size_t>(k)], dx);
  }
  const Vector dmean = fd_first(mean, dx);
  const Vector d2mean = fd_second(mean, dx);

  GalerkinOperators ops;
  ops.reynolds = reynolds;
  ops.b.resize(r);
  ops.l.resize(r, r);
  ops.n.assign(static_cast<size_t>(r), Matrix(r, r));
  const Vector bterm = nu * d2mean - mean.cwiseProduct(dmean);
  for (Index k = 0; k < r; ++k) {
    const Vector& pk = phi[static_cast<size_t>(k)];
    ops.b(k) = inner_product(bterm, pk, grid);
    for (Index i = 0; i < r; ++i) {
      const size_t si = static_cast<size_t>(i);
      const Vector lt = nu * d2phi[si] - phi[si].cwiseProduct(dmean) - mean.cwiseProduct(dphi[si]);
      ops.l(i, k) = inner_product(lt, pk, grid);
      for (Index j = 0; j < r; ++j) {
        const Vector nt = -phi[si].cwiseProduct(dphi[static_cast<size_t>(j)]);
        ops.n[static_cast<size_t>(k)](i, j) = inner_product(nt, pk, grid);
      }
    }
  }
  return ops;
}

Trajectory integrate(const GalerkinOperators& ops, const Vector& a0, double t0, const Vector& out_times, double dt) {
  if (!(dt > 0.0)) throw InputError("integration step must be positive");
  if (a0.size() != ops.size()) throw InputError("initial state size does not match the operators");
  Trajectory tr;
  tr.times = out_times;
  tr.coeffs.resize(out_times.size(), ops.size());
  Vector a = a0;
  double t = t0;
  for (Index o = 0; o < out_times.size(); ++o) {
    const double target = out_times(o);
    if (target < t - 1e-12 * std::max(1.0, std::abs(t))) throw InputError("output times must be nondecreasing and >= t0");
    while (t < target - 1e-12 * std::max(1.0, std::abs(target))) {
      const double h = std::min(dt, target - t);
      const Vector k1 = ops.rhs(a);
      const Vector k2 = ops.rhs(a + 0.5 * h * k1);
      const Vector k3 = ops.rhs(a + 0.5 * h * k2);
      const Vector k4 = ops.rhs(a + h * k3);
      a += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      t += h;
      if (!a.allFinite()) {
        std::ostringstream os;
        os << "Galerkin integration blew up at t = " << t;
        throw NumericalError(os.str());
      }
    }
    tr.coeffs.row(o) = a.transpose();
  }
  return tr;
}

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& tr) {
  std::vector<std::string> header{"t"};
  for (Index k = 0; k < tr.coeffs.cols(); ++k) header.push_back("a_" + std::to_string(k + 1));
  Matrix m(tr.times.size(), tr.coeffs.cols() + 1);
  m.col(0) = tr.times;
  m.rightCols(tr.coeffs.cols()) = tr.coeffs;
  io::write_table_csv(path, header, m);
}

}  // namespace nirom
