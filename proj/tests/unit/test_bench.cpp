#include <cmath>

#include "doctest.h"
#include "nirom/bench.hpp"
#include "nirom/error.hpp"
#include "nirom/pod.hpp"

using namespace nirom;

namespace {

double residual(double x, double t, double h, const BurgersConfig& c) {
  auto u = [&](double xx, double tt) { return burgers_exact(xx, tt, c); };
  const double ut = (u(x, t + h) - u(x, t - h)) / (2 * h);
  const double ux = (u(x + h, t) - u(x - h, t)) / (2 * h);
  const double uxx = (u(x + h, t) - 2 * u(x, t) + u(x - h, t)) / (h * h);
  return ut + u(x, t) * ux - uxx / c.reynolds;
}

}  // namespace

TEST_CASE("Burgers closed form") {
  BurgersConfig c;
  CHECK(burgers_exact(0.0, 0.4, c) == 0.0);
  CHECK(burgers_exact(0.5, 0.6, c) == doctest::Approx(0.27867204779240575).epsilon(1e-14));
  // t = 0 initial condition: x / (1 + sqrt(1/t0) exp(Re x^2 / 4)).
  const double x = 0.3;
  CHECK(burgers_exact(x, 0.0, c) ==
        doctest::Approx(x / (1 + std::exp(-c.reynolds / 16.0) * std::exp(c.reynolds * x * x / 4))).epsilon(1e-14));
}

TEST_CASE("Burgers closed form satisfies the PDE") {
  BurgersConfig c;
  for (double x : {0.2, 0.45, 0.7}) {
    const double r1 = std::abs(residual(x, 0.4, 1e-3, c));
    const double r2 = std::abs(residual(x, 0.4, 5e-4, c));
    CHECK((r2 < 1e-3 || r2 < r1 / 3.0));
  }
}

TEST_CASE("Burgers snapshots") {
  BurgersConfig c;
  const SnapshotSet s = burgers_snapshots(c, 0.3, 0.5, 20);
  CHECK(s.snapshot_count() == 20);
  CHECK(s.node_count() == 1001);
  CHECK(s.times()(0) == 0.3);
  CHECK(s.times()(19) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK((s.mean() - s.fields().colwise().mean().transpose()).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(!s.has_moving_boundary());

  const PodBasis b = truncate(decompose(correlation_matrix(s), s), 0.01);
  CHECK(b.retained == 2);
  BurgersConfig low;
  low.reynolds = 1.0;
  const SnapshotSet sl = burgers_snapshots(low, 0.3, 0.5, 20);
  CHECK(truncate(decompose(correlation_matrix(sl), sl), 0.01).retained == 1);

  CHECK_THROWS_AS(burgers_snapshots(c, 0.5, 0.3, 20), InputError);
  BurgersConfig bad;
  bad.reynolds = -1;
  CHECK_THROWS_AS(bad.validate(), InputError);
}

TEST_CASE("bubble strain") {
  BubbleConfig c;
  for (double r : {1.2, 2.0, 4.5}) CHECK(bubble_strain(r, c.t_bar, c) == doctest::Approx(1.0 / (r * r)));
  for (double t : {40.0, 55.0, 70.0}) {
    const double rt = c.radius(t);
    const double rb = c.radius(c.t_bar);
    CHECK(bubble_strain(rt, t, c) == doctest::Approx(rt / (rb * rb * rb)));
  }
}

TEST_CASE("bubble snapshots and masks") {
  BubbleConfig c;
  c.t_horizon = 70.0;
  const SnapshotSet s = bubble_snapshots(c, 51, 60, 10);
  CHECK(s.has_moving_boundary());
  CHECK(s.field_name() == "strain");
  CHECK(s.boundary()->names == std::vector<std::string>{"R"});
  CHECK(s.grid().coords()(0, 0) == doctest::Approx(c.min_radius(51, 70)));
  // R(t) is decreasing on this window so each fluid region contains the previous one.
  for (Index i = 1; i < s.snapshot_count(); ++i) {
    CHECK(s.boundary()->values(i, 0) < s.boundary()->values(i - 1, 0));
    for (Index j = 0; j < s.node_count(); ++j)
      if (s.masks()[static_cast<size_t>(i - 1)].fluid(j)) CHECK(s.masks()[static_cast<size_t>(i)].fluid(j));
  }
  // Strain decays with r away from the cavity.
  const Vector last = s.fields().row(9).transpose();
  for (Index j = 1; j < s.node_count(); ++j)
    if (s.masks()[9].fluid(j - 1)) CHECK(last(j) < last(j - 1));

  BubbleConfig bad;
  bad.amplitude = 1.5;
  CHECK_THROWS_AS(bad.validate(), InputError);
  bad = BubbleConfig{};
  bad.r_max = 1.0;
  CHECK_THROWS_AS(bad.validate(), InputError);
}

TEST_CASE("bubble radius extremes") {
  BubbleConfig c;
  CHECK(c.max_radius(0, 100) == doctest::Approx(1.15));
  CHECK(c.min_radius(0, 100) == doctest::Approx(0.85));
  CHECK(c.min_radius(51, 60) == doctest::Approx(c.radius(60)));
}
