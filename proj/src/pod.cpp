#include "nirom/pod.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "json.hpp"

#include "nirom/error.hpp"
#include "nirom/io.hpp"

namespace nirom {

namespace {

constexpr double kRankTol = 1e-12;       // relative to lambda_1
constexpr double kNegativeTol = 1e-10;   // clamp window for round-off negatives
constexpr double kHorizonFloor = 1e-14;  // lambda_{R+2} below this is treated as zero

void orthonormalize(Matrix& modes, Index count, const SpatialGrid& grid) {
  const Vector& w = grid.weights();
  for (int pass = 0; pass < 2; ++pass) {
    for (Index k = 0; k < count; ++k) {
      for (Index l = 0; l < k; ++l) {
        const double c = (modes.row(k).array() * modes.row(l).array() * w.transpose().array()).sum();
        modes.row(k) -= c * modes.row(l);
      }
      const double n = std::sqrt((modes.row(k).array().square() * w.transpose().array()).sum());
      modes.row(k) /= n;
    }
  }
}

}  // namespace

void PodThresholds::validate() const {
  if (!(alpha_pod > 0.0 && alpha_pod < 1.0)) throw InputError("alpha_pod must lie in (0, 1)");
  if (!(beta_pod > 0.0 && beta_pod < 1.0)) throw InputError("beta_pod must lie in (0, 1)");
}

Matrix correlation_matrix(const SnapshotSet& s) {
  const Matrix weighted = s.fluct() * s.grid().weights().asDiagonal();
  Matrix a = weighted * s.fluct().transpose();
  return 0.5 * (a + a.transpose());
}

PodBasis decompose(const Matrix& corr, const SnapshotSet& s) {
  const Index m = corr.rows();
  if (corr.cols() != m || m != s.snapshot_count()) throw InputError("correlation matrix size mismatch");
  const Matrix sym = 0.5 * (corr + corr.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  if (es.info() != Eigen::Success) throw NumericalError("symmetric eigensolver failed on the correlation matrix");

  std::vector<Index> order(static_cast<size_t>(m));
  std::iota(order.begin(), order.end(), Index{0});
  const Vector& raw = es.eigenvalues();
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return raw(a) > raw(b); });

  PodBasis b;
  b.eigenvalues.resize(m);
  b.eigenvectors.resize(m, m);
  for (Index k = 0; k < m; ++k) {
    b.eigenvalues(k) = raw(order[static_cast<size_t>(k)]);
    b.eigenvectors.col(k) = es.eigenvectors().col(order[static_cast<size_t>(k)]);
  }
  const double lead = b.eigenvalues(0);
  if (!(lead > 0.0)) throw DegenerateError("degenerate input: snapshot fluctuations are identically zero");
  for (Index k = 0; k < m; ++k) {
    if (b.eigenvalues(k) < 0.0) {
      if (b.eigenvalues(k) < -kNegativeTol * lead) {
        std::ostringstream os;
        os << "correlation matrix is indefinite: lambda_" << (k + 1) << " = " << b.eigenvalues(k);
        throw NumericalError(os.str());
      }
      b.eigenvalues(k) = 0.0;
    }
  }

  b.rank = 0;
  while (b.rank < m && b.eigenvalues(b.rank) > kRankTol * lead) ++b.rank;

  b.all_modes = Matrix::Zero(m, s.node_count());
  for (Index k = 0; k < b.rank; ++k) {
    b.all_modes.row(k) = (b.eigenvectors.col(k).transpose() * s.fluct()) / std::sqrt(b.eigenvalues(k));
  }
  orthonormalize(b.all_modes, b.rank, s.grid());

  b.retained = b.rank;
  b.modes = b.all_modes.topRows(b.rank);
  b.coeffs = project(s.fluct(), s.grid(), b);
  b.rrms_tail = rrms_error(b.eigenvalues, b.retained);
  return b;
}

double rrms_error(const Vector& eigenvalues, Index r) {
  const double total = eigenvalues.sum();
  if (!(total > 0.0)) throw DegenerateError("rrms_error: all-zero spectrum");
  const double tail = eigenvalues.tail(eigenvalues.size() - r).sum();
  return std::sqrt(std::max(tail, 0.0) / total);
}

PodBasis truncate_to(PodBasis b, Index r) {
  if (r < 1) throw InputError("at least one mode must be retained");
  r = std::min(r, std::max<Index>(b.rank, 1));
  if (b.coeffs.cols() < r) throw InputError("truncate_to: basis carries fewer coefficient columns than requested");
  b.retained = r;
  b.modes = b.all_modes.topRows(r);
  b.coeffs = b.coeffs.leftCols(r).eval();
  b.rrms_tail = rrms_error(b.eigenvalues, r);
  return b;
}

PodBasis truncate(PodBasis b, double alpha_pod) {
  if (!(alpha_pod > 0.0 && alpha_pod < 1.0)) throw InputError("alpha_pod must lie in (0, 1)");
  const Index m = b.eigenvalues.size();
  Index r = 1;
  while (r < m && !(rrms_error(b.eigenvalues, r) < alpha_pod)) ++r;
  return truncate_to(std::move(b), r);
}

Matrix project(const Matrix& fluct, const SpatialGrid& grid, const PodBasis& b) {
  if (fluct.cols() != grid.size() || b.modes.cols() != grid.size()) {
    std::ostringstream os;
    os << "project: field width " << fluct.cols() << " / mode width " << b.modes.cols() << " vs grid "
       << grid.size();
    throw InputError(os.str());
  }
  return fluct * grid.weights().asDiagonal() * b.modes.transpose();
}

Matrix project(const SnapshotSet& s, const PodBasis& b) { return project(s.fluct(), s.grid(), b); }

Vector reconstruct(const PodBasis& b, const Vector& mean, const Vector& coeffs) {
  if (coeffs.size() != b.retained) {
    std::ostringstream os;
    os << "reconstruct: " << coeffs.size() << " coefficients for " << b.retained << " retained modes";
    throw InputError(os.str());
  }
  if (mean.size() != b.modes.cols()) throw InputError("reconstruct: mean length does not match modes");
  return mean + b.modes.transpose() * coeffs;
}

Vector ric(const PodBasis& b) {
  const double total = b.eigenvalues.sum();
  if (!(total > 0.0)) throw DegenerateError("ric: all-zero spectrum");
  return 100.0 * b.eigenvalues / total;
}

PodHorizon pod_horizon(const PodBasis& b, double t1, double tm, double beta_pod) {
  const Index m = b.eigenvalues.size();
  const Index r = b.retained;
  PodHorizon h;
  // lambda_2 and lambda_{R+2} in 1-based numbering.
  if (r + 2 > m || m < 2 || b.eigenvalues(r + 1) <= kHorizonFloor * b.eigenvalues(0) ||
      b.eigenvalues(1) <= 0.0) {
    h.unbounded = true;
    h.t_star = std::numeric_limits<double>::infinity();
    return h;
  }
  h.decay_rate = (std::log(b.eigenvalues(1)) - std::log(b.eigenvalues(r + 1))) / static_cast<double>(r);
  h.t_star = tm + (tm - t1) * beta_pod * h.decay_rate;
  return h;
}

void save_basis(const std::filesystem::path& dir, const PodBasis& b) {
  std::filesystem::create_directories(dir);
  io::write_vector_csv(dir / "eigenvalues.csv", b.eigenvalues);
  io::write_matrix_csv(dir / "eigenvectors.csv", b.eigenvectors);
  io::write_matrix_csv(dir / "modes.csv", b.modes);
  io::write_matrix_csv(dir / "coeffs.csv", b.coeffs);
  nlohmann::json meta = {{"retained", b.retained}, {"rank", b.rank}, {"rrms_tail", b.rrms_tail},
                         {"snapshots", b.eigenvalues.size()}, {"nodes", b.all_modes.cols()}};
  std::ofstream(dir / "basis.json") << meta.dump(2) << '\n';
}

PodBasis load_basis(const std::filesystem::path& dir) {
  std::ifstream in(dir / "basis.json");
  if (!in) throw InputError("cannot open " + (dir / "basis.json").string());
  nlohmann::json meta;
  in >> meta;
  PodBasis b;
  b.eigenvalues = io::read_vector_csv(dir / "eigenvalues.csv");
  b.eigenvectors = io::read_matrix_csv(dir / "eigenvectors.csv");
  const Matrix modes = io::read_matrix_csv(dir / "modes.csv");
  b.coeffs = io::read_matrix_csv(dir / "coeffs.csv");
  b.retained = meta.at("retained").get<Index>();
  b.rrms_tail = meta.at("rrms_tail").get<double>();
  if (modes.rows() != b.retained || b.coeffs.cols() != b.retained)
    throw InputError((dir / "modes.csv").string() + ": row count does not match retained mode count");
  b.rank = b.retained;  // modes past R are not stored
  b.all_modes = Matrix::Zero(b.eigenvalues.size(), modes.cols());
  b.all_modes.topRows(modes.rows()) = modes;
  b.modes = modes;
  return b;
}

}  // namespace nirom
