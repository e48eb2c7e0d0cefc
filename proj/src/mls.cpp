#include "nirom/mls.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "nirom/error.hpp"
#include "nirom/io.hpp"

namespace nirom {

namespace {

constexpr double kPivotTol = 1e-12;

// In-place Cholesky of the moment matrix; names the first monomial whose pivot collapses.
Matrix cholesky(const Matrix& a, int dim, int order) {
  const Index n = a.rows();
  Matrix l = Matrix::Zero(n, n);
  const double scale = a.diagonal().maxCoeff();
  for (Index j = 0; j < n; ++j) {
    double d = a(j, j) - l.row(j).head(j).squaredNorm();
    if (!(d > kPivotTol * scale)) {
      throw DegenerateError("MLS moment matrix is rank deficient along monomial " +
                            monomial_label(dim, order, static_cast<int>(j)));
    }
    l(j, j) = std::sqrt(d);
    for (Index i = j + 1; i < n; ++i) l(i, j) = (a(i, j) - l.row(i).head(j).dot(l.row(j).head(j))) / l(j, j);
  }
  return l;
}

}  // namespace

void MlsConfig::validate() const {
  if (order < 0) throw InputError("MLS order must be >= 0");
  if (!(kernel_len > 0.0)) throw InputError("MLS kernel_len must be positive");
  if (!(min_neighbor_factor >= 1.0)) throw InputError("MLS min_neighbor_factor must be >= 1");
  if (!(growth > 1.0)) throw InputError("MLS growth factor must exceed 1");
  if (max_growth_steps < 0) throw InputError("MLS max_growth_steps must be >= 0");
}

double wendland_c2(double q) {
  if (q < 0.0) q = -q;
  if (q >= 1.0) return 0.0;
  const double a = 1.0 - q;
  return a * a * a * a * (4.0 * q + 1.0);
}

Vector mls_fit(const Eigen::Ref<const Eigen::RowVectorXd>& xp, const Matrix& points, const Vector& values,
               double h, const MlsConfig& cfg) {
  cfg.validate();
  if (!(h > 0.0)) throw InputError("MLS support radius must be positive");
  const int dim = static_cast<int>(xp.size());
  if (points.cols() != dim || points.rows() != values.size()) throw InputError("MLS: neighbour arrays mismatch");
  const int terms = cfg.term_count(dim);
  const auto need = static_cast<Index>(std::ceil(cfg.min_neighbor_factor * terms - 1e-12));
  if (points.rows() < need) {
    std::ostringstream os;
    os << "MLS: " << points.rows() << " neighbours for " << terms << " polynomial terms, need at least " << need;
    throw InputError(os.str());
  }

  Matrix moment = Matrix::Zero(terms, terms);
  Vector rhs = Vector::Zero(terms);
  for (Index i = 0; i < points.rows(); ++i) {
    const Eigen::RowVectorXd d = (points.row(i) - xp) / h;
    const double q = d.norm();
    if (q > 1.0 + 1e-12) {
      std::ostringstream os;
      os << "MLS: neighbour " << i << " lies outside the support (distance " << q * h << " > h = " << h << ")";
      throw InputError(os.str());
    }
    const double w = wendland_c2(q);
    if (w <= 0.0) continue;
    const Vector p = monomial_basis(d, cfg.order);
    moment.noalias() += w * p * p.transpose();
    rhs.noalias() += w * values(i) * p;
  }
  const Matrix l = cholesky(moment, dim, cfg.order);
  Vector c = l.triangularView<Eigen::Lower>().solve(rhs);
  return l.transpose().triangularView<Eigen::Upper>().solve(c);
}

std::vector<Index> MlsCorrection::corrected_nodes() const {
  std::vector<Index> out;
  for (const auto& r : report)
    if (r.corrected) out.push_back(r.node);
  return out;
}

std::vector<Index> MlsCorrection::skipped_nodes() const {
  std::vector<Index> out;
  for (const auto& r : report)
    if (!r.corrected) out.push_back(r.node);
  return out;
}

MlsCorrection correct_field(const Vector& field, const std::vector<Index>& exposed, const DomainMask& fluid_history,
                            const SpatialGrid& grid, const MlsConfig& cfg) {
  cfg.validate();
  if (field.size() != grid.size() || fluid_history.size() != grid.size())
    throw InputError("correct_field: field, mask and grid sizes differ");
  for (Index e : exposed) {
    if (e < 0 || e >= grid.size()) throw InputError("correct_field: exposed node index out of range");
    if (fluid_history.fluid(e)) {
      std::ostringstream os;
      os << "correct_field: node " << e << " is both exposed and part of the fluid history";
      throw InputError(os.str());
    }
  }

  std::vector<Index> pool;
  for (Index j = 0; j < grid.size(); ++j)
    if (fluid_history.fluid(j)) pool.push_back(j);

  const int terms = cfg.term_count(grid.dim());
  const auto need = static_cast<Index>(std::ceil(cfg.min_neighbor_factor * terms - 1e-12));
  const double h0 = cfg.kernel_len * grid.spacing();

  MlsCorrection out;
  out.field = field;
  out.report.reserve(exposed.size());
  for (Index e : exposed) {
    MlsNodeReport rep;
    rep.node = e;
    rep.before = field(e);
    rep.after = field(e);
    const auto xp = grid.point(e);
    double h = h0;
    for (int step = 0; step <= cfg.max_growth_steps; ++step, h *= cfg.growth) {
      std::vector<Index> nb;
      for (Index j : pool)
        if ((grid.point(j) - xp).norm() < h) nb.push_back(j);
      rep.h = h;
      rep.neighbors = static_cast<Index>(nb.size());
      if (rep.neighbors < need) continue;
      Matrix pts(rep.neighbors, grid.dim());
      Vector vals(rep.neighbors);
      for (Index i = 0; i < rep.neighbors; ++i) {
        pts.row(i) = grid.point(nb[static_cast<size_t>(i)]);
        vals(i) = field(nb[static_cast<size_t>(i)]);
      }
      try {
        const Vector c = mls_fit(xp, pts, vals, h, cfg);
        rep.after = c(0);
        rep.corrected = true;
        rep.note.clear();
        break;
      } catch (const DegenerateError& err) {
        rep.note = err.what();
      }
    }
    if (!rep.corrected) {
      if (rep.note.empty()) {
        std::ostringstream os;
        os << "support cap reached with " << rep.neighbors << " of " << need << " neighbours";
        rep.note = os.str();
      }
    } else {
      out.field(e) = rep.after;
    }
    out.report.push_back(std::move(rep));
  }
  return out;
}

void write_correction_report(const std::filesystem::path& path, const std::vector<MlsNodeReport>& report) {
  Matrix m(static_cast<Index>(report.size()), 6);
  for (size_t i = 0; i < report.size(); ++i) {
    const auto& r = report[i];
    m.row(static_cast<Index>(i)) << static_cast<double>(r.node), r.h, static_cast<double>(r.neighbors), r.before,
        r.after, r.corrected ? 1.0 : 0.0;
  }
  io::write_table_csv(path, {"node", "h", "neighbors", "before", "after", "corrected"}, m);
}

}  // namespace nirom
