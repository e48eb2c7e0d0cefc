#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "nirom/bench.hpp"
#include "nirom/error.hpp"
#include "nirom/pod.hpp"

using namespace nirom;

namespace {

SnapshotSet random_set(Index m, Index n, unsigned seed) {
  return SnapshotSet(SpatialGrid::uniform_1d(0, 2, n), Vector::LinSpaced(m, 0, 1), testutil::random_matrix(m, n, seed));
}

SnapshotSet random_set_2d(unsigned seed) {
  const auto g = SpatialGrid::uniform_2d(0, 1, 8, 0, 1, 6);
  return SnapshotSet(g, Vector::LinSpaced(7, 0, 1), testutil::random_matrix(7, g.size(), seed));
}

PodBasis full(const SnapshotSet& s) { return decompose(correlation_matrix(s), s); }

PodBasis spectrum_only(std::vector<double> lam) {
  PodBasis b;
  const auto m = static_cast<Index>(lam.size());
  b.eigenvalues = Eigen::Map<Vector>(lam.data(), m);
  b.eigenvectors = Matrix::Identity(m, m);
  b.all_modes = Matrix::Zero(m, 3);
  b.rank = m;
  b.retained = m;
  b.modes = b.all_modes;
  b.coeffs = Matrix::Zero(m, m);
  return b;
}

double max_orthonormality_error(const PodBasis& b, const SpatialGrid& g) {
  double err = 0.0;
  for (Index k = 0; k < b.modes.rows(); ++k)
    for (Index l = 0; l < b.modes.rows(); ++l)
      err = std::max(err, std::abs(inner_product(b.modes.row(k).transpose(), b.modes.row(l).transpose(), g) -
                                   (k == l ? 1.0 : 0.0)));
  return err;
}

}  // namespace

TEST_CASE("correlation matrix of an antisymmetric pair") {
  const auto g = SpatialGrid::uniform_1d(0, 1, 11);
  const Vector v = testutil::random_vector(11, 3);
  Matrix u(2, 11);
  u.row(0) = v.transpose();
  u.row(1) = -v.transpose();
  const SnapshotSet s(g, Vector::LinSpaced(2, 0, 1), u);
  const Matrix a = correlation_matrix(s);
  const double c = inner_product(v, v, g);
  CHECK(a(0, 0) == doctest::Approx(c).epsilon(1e-14));
  CHECK(a(0, 1) == doctest::Approx(-c).epsilon(1e-14));
  CHECK(a(1, 0) == a(0, 1));
}

TEST_CASE("correlation matrix of constant-in-time fields is zero") {
  Matrix u(3, 5);
  for (int i = 0; i < 3; ++i) u.row(i) = testutil::random_vector(5, 1).transpose();
  const SnapshotSet s(SpatialGrid::uniform_1d(0, 1, 5), Vector::LinSpaced(3, 0, 1), u);
  CHECK(correlation_matrix(s).cwiseAbs().maxCoeff() < 1e-28);
  CHECK_THROWS_AS(full(s), DegenerateError);
}

TEST_CASE("correlation matrix matches a double-loop quadrature") {
  const auto s = random_set(4, 23, 7);
  const Matrix a = correlation_matrix(s);
  for (Index i = 0; i < 4; ++i)
    for (Index j = 0; j < 4; ++j) {
      double ref = 0.0;
      for (Index n = 0; n < 23; ++n) ref += s.fluct()(i, n) * s.fluct()(j, n) * s.grid().weights()(n);
      CHECK(std::abs(a(i, j) - ref) <= 1e-12 * std::max(1.0, std::abs(ref)));
    }
  CHECK(a == a.transpose());
}

TEST_CASE("diagonal correlation gives normalized snapshots as modes") {
  const auto g = SpatialGrid::uniform_1d(0, 1, 201);
  const Vector x = g.coords().col(0);
  const Vector s1 = (2 * M_PI * x.array()).sin() * 2.0;
  const Vector s2 = (4 * M_PI * x.array()).sin();
  // fluct rows are +-s1, +-s2 after mean removal of the four snapshots.
  Matrix u(4, 201);
  u.row(0) = s1.transpose();
  u.row(1) = -s1.transpose();
  u.row(2) = s2.transpose();
  u.row(3) = -s2.transpose();
  const SnapshotSet s(g, Vector::LinSpaced(4, 0, 1), u);
  const PodBasis b = full(s);
  CHECK(b.rank == 2);
  CHECK(b.eigenvalues(0) == doctest::Approx(2.0 * inner_product(s1, s1, g)).epsilon(1e-12));
  CHECK(b.eigenvalues(1) == doctest::Approx(2.0 * inner_product(s2, s2, g)).epsilon(1e-12));
  const Vector m1 = b.modes.row(0).transpose();
  CHECK(std::abs(std::abs(inner_product(m1, s1, g)) - l2_norm(s1, g)) < 1e-10);
  CHECK(b.coeffs.col(1).tail(2).norm() > 0.0);
}

TEST_CASE("orthonormality and trace identity") {
  for (const SnapshotSet& s : {random_set(9, 40, 1), random_set_2d(2)}) {
    const PodBasis b = full(s);
    CHECK(max_orthonormality_error(b, s.grid()) <= 1e-8);
    double trace = 0.0;
    for (Index i = 0; i < s.snapshot_count(); ++i) trace += inner_product(s.fluct().row(i).transpose(), s.fluct().row(i).transpose(), s.grid());
    CHECK(std::abs(b.eigenvalues.sum() - trace) <= 1e-10 * trace);
  }
  BurgersConfig c;
  c.reynolds = 100;
  const SnapshotSet s = burgers_snapshots(c, 0.3, 0.5, 6);
  const PodBasis b = full(s);
  CHECK(max_orthonormality_error(b, s.grid()) <= 1e-8);
  double trace = 0.0;
  for (Index i = 0; i < 6; ++i) trace += inner_product(s.fluct().row(i).transpose(), s.fluct().row(i).transpose(), s.grid());
  CHECK(std::abs(b.eigenvalues.sum() - trace) <= 1e-10 * trace);
  for (Index k = 1; k < b.eigenvalues.size(); ++k) CHECK(b.eigenvalues(k) <= b.eigenvalues(k - 1));
  CHECK(b.eigenvalues.minCoeff() >= 0.0);
}

TEST_CASE("truncate examples") {
  CHECK(truncate(spectrum_only({9, 1}), 0.4).retained == 1);
  CHECK(truncate(spectrum_only({9, 1}), 0.4).rrms_tail == doctest::Approx(std::sqrt(0.1)));
  CHECK(truncate(spectrum_only({9, 1}), 0.3).retained == 2);
  CHECK(truncate(spectrum_only({9, 1}), 0.999).retained == 1);
  CHECK_THROWS_AS(truncate(spectrum_only({9, 1}), 1.0), InputError);
  CHECK_THROWS_AS(truncate(spectrum_only({9, 1}), 0.0), InputError);
}

TEST_CASE("truncate is monotone in alpha") {
  const PodBasis b = full(random_set(12, 60, 4));
  Index prev = b.eigenvalues.size();
  for (double a = 0.001; a < 1.0; a *= 1.5) {
    const Index r = truncate(b, a).retained;
    CHECK(r <= prev);
    prev = r;
  }
}

TEST_CASE("projection consistency and completeness") {
  const SnapshotSet s = random_set(6, 35, 11);
  const PodBasis b = full(s);
  REQUIRE(b.retained == 5);  // mean removal costs one rank
  const Matrix a = project(s, b);
  const double scale = std::sqrt(b.eigenvalues(0));
  for (Index k = 0; k < b.rank; ++k)
    for (Index i = 0; i < 6; ++i)
      CHECK(std::abs(a(i, k) - std::sqrt(b.eigenvalues(k)) * b.eigenvectors(i, k)) <= 1e-10 * scale);
  for (Index i = 0; i < 6; ++i) {
    const Vector rec = reconstruct(b, s.mean(), a.row(i).transpose());
    const Vector ref = s.fields().row(i).transpose();
    CHECK((rec - ref).norm() <= 1e-8 * ref.norm());
  }
  CHECK(project(Matrix::Zero(3, 35), s.grid(), b).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(project(Matrix::Zero(3, 34), s.grid(), b), InputError);
}

TEST_CASE("reconstruct basics") {
  const SnapshotSet s = random_set(5, 20, 12);
  const PodBasis b = truncate_to(full(s), 3);
  CHECK(reconstruct(b, s.mean(), Vector::Zero(3)) == s.mean());
  CHECK_THROWS_AS(reconstruct(b, s.mean(), Vector::Zero(2)), InputError);
}

TEST_CASE("truncation error identity holds for every R") {
  for (const SnapshotSet& s : {random_set(8, 50, 21), random_set_2d(22), random_set(5, 400, 23)}) {
    const PodBasis b0 = full(s);
    const double total = b0.eigenvalues.sum();
    for (Index r = 1; r <= b0.rank; ++r) {
      const PodBasis b = truncate_to(b0, r);
      double sq = 0.0;
      for (Index i = 0; i < s.snapshot_count(); ++i) {
        const Vector rec = reconstruct(b, Vector::Zero(s.node_count()), b.coeffs.row(i).transpose());
        const Vector d = s.fluct().row(i).transpose() - rec;
        sq += inner_product(d, d, s.grid());
      }
      const double tail = b.tail_energy();
      CHECK(std::abs(sq - tail) <= 1e-8 * tail + 1e-13 * total);
    }
  }
}

TEST_CASE("relative information content") {
  const Vector r = ric(spectrum_only({3, 1}));
  CHECK(r(0) == doctest::Approx(75.0));
  CHECK(r(1) == doctest::Approx(25.0));
  CHECK(ric(spectrum_only({4}))(0) == doctest::Approx(100.0));
  const Vector rr = ric(full(random_set(7, 30, 3)));
  CHECK(rr.sum() == doctest::Approx(100.0).epsilon(1e-10));
  CHECK_THROWS_AS(ric(spectrum_only({0, 0})), DegenerateError);

  BurgersConfig lo, hi;
  lo.reynolds = 1;
  hi.reynolds = 500;
  const double ric_lo = ric(full(burgers_snapshots(lo, 0.3, 0.5, 20)))(0);
  const double ric_hi = ric(full(burgers_snapshots(hi, 0.3, 0.5, 20)))(0);
  CHECK(ric_lo > ric_hi);
}

TEST_CASE("POD horizon arithmetic") {
  PodBasis b = truncate_to(spectrum_only({100, 10, 1, 0.1, 0.01}), 2);
  const PodHorizon h = pod_horizon(b, 0.3, 0.5, 0.3);
  CHECK_FALSE(h.unbounded);
  const double expected = 0.5 + 0.2 * 0.3 * (std::log(10.0) - std::log(0.1)) / 2.0;
  CHECK(h.t_star == doctest::Approx(expected).epsilon(1e-14));
  CHECK(h.t_star == doctest::Approx(0.63816).epsilon(1e-4));
  CHECK(pod_horizon(b, 0.3, 0.5, 1e-12).t_star == doctest::Approx(0.5).epsilon(1e-10));
  const double d1 = pod_horizon(b, 0.3, 0.5, 0.3).t_star - 0.5;
  const double d2 = pod_horizon(b, 0.1, 0.5, 0.3).t_star - 0.5;
  CHECK(d2 == doctest::Approx(2.0 * d1).epsilon(1e-12));
  double prev = 0.0;
  for (double beta = 0.05; beta < 1.0; beta += 0.1) {
    const double t = pod_horizon(b, 0.3, 0.5, beta).t_star;
    CHECK(t >= prev);
    prev = t;
  }
}

TEST_CASE("POD horizon degenerate cases are unbounded") {
  CHECK(pod_horizon(truncate_to(spectrum_only({100, 10, 1}), 2), 0, 1, 0.3).unbounded);
  CHECK(pod_horizon(truncate_to(spectrum_only({100, 10, 1e-20, 0}), 1), 0, 1, 0.3).unbounded);
  CHECK(std::isinf(pod_horizon(truncate_to(spectrum_only({100, 10, 1}), 2), 0, 1, 0.3).t_star));
}

TEST_CASE("basis save and load") {
  const SnapshotSet s = random_set(6, 25, 31);
  const PodBasis b = truncate_to(full(s), 3);
  const auto dir = testutil::temp_dir("pod");
  save_basis(dir, b);
  const PodBasis back = load_basis(dir);
  CHECK(back.retained == 3);
  CHECK(back.eigenvalues == b.eigenvalues);
  CHECK(back.modes == b.modes);
  CHECK(back.coeffs == b.coeffs);
  CHECK(back.rrms_tail == b.rrms_tail);
}
