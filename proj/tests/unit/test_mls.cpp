#include <cmath>

#include "doctest.h"
#include "nirom/error.hpp"
#include "nirom/mls.hpp"

using namespace nirom;

namespace {

Matrix column(const Vector& v) { return v; }

Eigen::RowVectorXd pt(double x) { return Eigen::RowVectorXd::Constant(1, x); }

// One-sided neighbours at xp + h * (0.1 .. 0.95).
double one_sided_error(double h, int order, double xp) {
  MlsConfig cfg;
  cfg.order = order;
  const Vector x = Vector::LinSpaced(12, 0.1, 0.95).array() * h + xp;
  const Vector f = x.array().sin() + x.array().exp();
  const Vector c = mls_fit(pt(xp), column(x), f, h, cfg);
  return std::abs(c(0) - (std::sin(xp) + std::exp(xp)));
}

}  // namespace

TEST_CASE("Wendland weight") {
  CHECK(wendland_c2(0.0) == 1.0);
  CHECK(wendland_c2(1.0) == 0.0);
  CHECK(wendland_c2(1.5) == 0.0);
  double prev = 1.0;
  for (double q = 0.05; q < 1.0; q += 0.05) {
    const double w = wendland_c2(q);
    CHECK(w > 0.0);
    CHECK(w <= prev);
    prev = w;
  }
}

TEST_CASE("MLS reproduces linear and cubic data") {
  MlsConfig lin;
  lin.order = 1;
  const Vector x = Vector::LinSpaced(6, 0.1, 0.6);
  const Vector f = 2.0 * x.array() + 1.0;
  CHECK(mls_fit(pt(0.33), column(x), f, 0.5, lin)(0) == doctest::Approx(2 * 0.33 + 1).epsilon(1e-12));

  MlsConfig cub;
  const Vector xc = Vector::LinSpaced(9, -0.4, 0.4);
  const Vector fc = xc.array().cube() * 3.0 - xc.array().square() + 0.5;
  CHECK(std::abs(mls_fit(pt(0.05), column(xc), fc, 0.5, cub)(0) - (3 * 0.05 * 0.05 * 0.05 - 0.05 * 0.05 + 0.5)) < 1e-9);
}

TEST_CASE("MLS reproduces a cubic in 2D") {
  MlsConfig cfg;
  std::vector<Eigen::RowVector2d> pts;
  for (int i = -3; i <= 3; ++i)
    for (int j = -3; j <= 3; ++j) pts.emplace_back(0.1 * i, 0.1 * j);
  Matrix p(static_cast<Index>(pts.size()), 2);
  Vector v(p.rows());
  auto f = [](double x, double y) { return 1 + x - y + x * y * y + 2 * x * x * x; };
  for (Index i = 0; i < p.rows(); ++i) {
    p.row(i) = pts[static_cast<size_t>(i)];
    v(i) = f(p(i, 0), p(i, 1));
  }
  const Eigen::RowVectorXd xp = (Eigen::RowVectorXd(2) << 0.02, -0.03).finished();
  CHECK(std::abs(mls_fit(xp, p, v, 0.5, cfg)(0) - f(0.02, -0.03)) < 1e-9);
}

TEST_CASE("MLS error order is s+1 under h-halving") {
  for (int s : {1, 2, 3}) {
    double h = 0.4;
    double prev = one_sided_error(h, s, 0.3);
    for (int k = 0; k < 3; ++k) {
      h /= 2;
      const double e = one_sided_error(h, s, 0.3);
      const double rate = std::log2(prev / e);
      CHECK(std::abs(rate - (s + 1)) <= 0.5);
      prev = e;
    }
  }
}

TEST_CASE("MLS error reporting") {
  MlsConfig cfg;
  const Vector x = Vector::LinSpaced(5, 0.1, 0.5);
  CHECK_THROWS_WITH_AS(mls_fit(pt(0), column(x), x, 1.0, cfg), doctest::Contains("5 neighbours for 4 polynomial terms"),
                       InputError);
  CHECK_THROWS_AS(mls_fit(pt(0), column(Vector::LinSpaced(8, 0.1, 2.0)), Vector::Zero(8), 1.0, cfg), InputError);

  // Collinear points in 2D cannot resolve y.
  MlsConfig lin;
  lin.order = 1;
  Matrix p(6, 2);
  p.col(0) = Vector::LinSpaced(6, -0.3, 0.3);
  p.col(1).setZero();
  CHECK_THROWS_WITH_AS(mls_fit((Eigen::RowVectorXd(2) << 0, 0).finished(), p, Vector::Ones(6), 1.0, lin),
                       doctest::Contains("monomial y"), DegenerateError);
}

namespace {

struct Line {
  SpatialGrid grid = SpatialGrid::uniform_1d(0, 1, 101);
  DomainMask history;
  std::vector<Index> exposed;
  Line() {
    std::vector<bool> h(101, true);
    for (Index j = 0; j < 20; ++j) h[static_cast<size_t>(j)] = false;
    history = DomainMask(h);
    for (Index j = 15; j < 20; ++j) exposed.push_back(j);
  }
};

}  // namespace

TEST_CASE("correct_field reproduces a global cubic and leaves others alone") {
  Line l;
  const Vector x = l.grid.coords().col(0);
  const Vector truth = 1.0 + x.array() - 2.0 * x.array().cube();
  Vector field = truth;
  for (Index j : l.exposed) field(j) += 0.3;
  const MlsCorrection c = correct_field(field, l.exposed, l.history, l.grid, MlsConfig{});
  CHECK(c.corrected_nodes().size() == 5);
  for (Index j : l.exposed) CHECK(std::abs(c.field(j) - truth(j)) < 1e-9);
  for (Index j = 20; j < 101; ++j) CHECK(c.field(j) == field(j));
  for (const auto& r : c.report) CHECK(r.h > 0.0);
}

TEST_CASE("correct_field with no exposed nodes is the identity") {
  Line l;
  const Vector f = Vector::LinSpaced(101, 3, 4);
  const MlsCorrection c = correct_field(f, {}, l.history, l.grid, MlsConfig{});
  CHECK(c.field == f);
  CHECK(c.report.empty());
}

TEST_CASE("correct_field rejects exposed nodes in the fluid history") {
  Line l;
  CHECK_THROWS_AS(correct_field(Vector::Zero(101), {50}, l.history, l.grid, MlsConfig{}), InputError);
}

TEST_CASE("correct_field lists nodes it cannot reach") {
  const auto g = SpatialGrid::uniform_1d(0, 1, 101);
  std::vector<bool> h(101, false);
  for (Index j = 95; j < 101; ++j) h[static_cast<size_t>(j)] = true;
  const MlsCorrection c = correct_field(Vector::Ones(101), {0, 90}, DomainMask(h), g, MlsConfig{});
  CHECK(c.skipped_nodes() == std::vector<Index>{0});
  CHECK(c.report[0].note.find("support cap") != std::string::npos);
  CHECK(c.field(0) == 1.0);
}

TEST_CASE("correct_field is local") {
  Line l;
  const Vector x = l.grid.coords().col(0);
  Vector f = x.array().sin();
  const MlsCorrection a = correct_field(f, l.exposed, l.history, l.grid, MlsConfig{});
  double hmax = 0.0;
  for (const auto& r : a.report) hmax = std::max(hmax, r.h);
  f(100) += 5.0;  // x = 1, far outside every support
  REQUIRE(1.0 - x(19) > hmax);
  const MlsCorrection b = correct_field(f, l.exposed, l.history, l.grid, MlsConfig{});
  for (Index j : l.exposed) CHECK(a.field(j) == b.field(j));
}

TEST_CASE("config validation") {
  MlsConfig c;
  c.kernel_len = 0;
  CHECK_THROWS_AS(c.validate(), InputError);
  c = MlsConfig{};
  c.min_neighbor_factor = 0.5;
  CHECK_THROWS_AS(c.validate(), InputError);
}
