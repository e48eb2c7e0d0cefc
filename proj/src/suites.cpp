#include "nirom/suites.hpp"

#include <cmath>

#include "nirom/galerkin.hpp"

namespace nirom {

namespace {

Index argmax_abs(const Vector& v) {
  Index i = 0;
  v.cwiseAbs().maxCoeff(&i);
  return i;
}

io::Table make_table(std::vector<std::string> header, const std::vector<std::vector<double>>& rows) {
  io::Table t;
  t.header = std::move(header);
  t.values.resize(static_cast<Index>(rows.size()), static_cast<Index>(t.header.size()));
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < rows[i].size(); ++j) t.values(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
  return t;
}

struct Pair {
  Vector gpr;
  Vector galerkin;
  Vector exact;
  RomModel model;
  SnapshotSet snaps;
};

Pair run_pair(double re, const BurgersSetup& st, const RomSettings& settings) {
  BurgersConfig c;
  c.reynolds = re;
  c.nx = st.nx;
  Pair p;
  p.snaps = burgers_snapshots(c, st.t1, st.tm, st.snapshots);
  p.model = build(p.snaps, settings);
  p.gpr = forecast(p.model, st.t_query, true).field;
  const GalerkinOperators ops = assemble_operators(p.model.basis, p.model.mean, p.snaps.grid(), re);
  const double dt = (st.tm - st.t1) / static_cast<double>(st.snapshots - 1) / 100.0;
  const Trajectory tr = integrate(ops, p.model.basis.coeffs.row(0).transpose(), st.t1, Vector::Constant(1, st.t_query), dt);
  p.galerkin = reconstruct(p.model.basis, p.model.mean, tr.coeffs.row(0).transpose());
  p.exact = burgers_field(p.snaps.grid(), st.t_query, c);
  return p;
}

}  // namespace

io::Table burgers_sweep(const std::vector<double>& reynolds, Index max_modes, const BurgersSetup& st,
                        const RomSettings& settings) {
  std::vector<std::vector<double>> rows;
  for (double re : reynolds) {
    BurgersConfig c;
    c.reynolds = re;
    c.nx = st.nx;
    const SnapshotSet s = burgers_snapshots(c, st.t1, st.tm, st.snapshots);
    const Vector truth = burgers_field(s.grid(), st.t_query, c);
    for (Index r = 1; r <= max_modes; ++r) {
      RomSettings o = settings;
      o.fixed_modes = r;
      const RomModel m = build(s, o);
      if (m.basis.retained < r) break;
      const RomForecast f = forecast(m, st.t_query, true);
      rows.push_back({re, static_cast<double>(r), m.basis.rrms_tail, relative_error(f.field, truth, s.grid())});
    }
  }
  return make_table({"reynolds", "R", "rrms", "relative_error"}, rows);
}

io::Table galerkin_compare(const std::vector<double>& reynolds, const BurgersSetup& st, const RomSettings& settings) {
  std::vector<std::vector<double>> rows;
  for (double re : reynolds) {
    const Pair p = run_pair(re, st, settings);
    const auto& grid = p.snaps.grid();
    const Vector x = grid.coords().col(0);
    const double dx = x(1) - x(0);
    const Index shock = argmax_abs(fd_first(p.exact, dx));
    rows.push_back({re, static_cast<double>(p.model.basis.retained), relative_error(p.gpr, p.exact, grid),
                    relative_error(p.galerkin, p.exact, grid), x(shock), x(argmax_abs(p.gpr - p.exact)),
                    x(argmax_abs(p.galerkin - p.exact)), p.model.t_star()});
  }
  return make_table({"reynolds", "R", "err_gpr", "err_galerkin", "x_shock", "x_maxerr_gpr", "x_maxerr_galerkin",
                     "t_star"},
                    rows);
}

io::Table galerkin_profile(double re, const BurgersSetup& st, const RomSettings& settings) {
  const Pair p = run_pair(re, st, settings);
  io::Table t;
  t.header = {"x", "exact", "gpr", "galerkin"};
  t.values.resize(p.exact.size(), 4);
  t.values.col(0) = p.snaps.grid().coords().col(0);
  t.values.col(1) = p.exact;
  t.values.col(2) = p.gpr;
  t.values.col(3) = p.galerkin;
  return t;
}

io::Table error_growth(double re, Index modes, Index points, double span, const BurgersSetup& st,
                       const RomSettings& settings) {
  BurgersConfig c;
  c.reynolds = re;
  c.nx = st.nx;
  const SnapshotSet s = burgers_snapshots(c, st.t1, st.tm, st.snapshots);
  RomSettings o = settings;
  o.fixed_modes = modes;
  const RomModel m = build(s, o);
  std::vector<std::vector<double>> rows;
  for (Index i = 0; i < points; ++i) {
    const double d = points > 1 ? span * static_cast<double>(i) / static_cast<double>(points - 1) : 0.0;
    const double t = st.tm + d;
    const RomForecast f = forecast(m, t, true);
    rows.push_back({d, t, relative_error(f.field, burgers_field(s.grid(), t, c), s.grid()), f.sigma_weighted});
  }
  return make_table({"dt_star", "t", "rom_error", "sigma_weighted"}, rows);
}

BubbleRun bubble_run(const BubbleConfig& cfg_in, double t1, double tm, Index m, double t_query,
                     const RomSettings& settings) {
  BubbleConfig cfg = cfg_in;
  if (std::isnan(cfg.t_horizon)) cfg.t_horizon = t_query;
  const SnapshotSet s = bubble_snapshots(cfg, t1, tm, m);
  const RomModel model = build(s, settings);
  const RomForecast f = forecast(model, t_query, true);

  BubbleRun r;
  r.retained = model.basis.retained;
  r.t_star = model.t_star();
  r.binding = model.binding();
  r.radius_pred = f.boundary_values ? (*f.boundary_values)(0) : std::numeric_limits<double>::quiet_NaN();
  r.radius_true = cfg.radius(t_query);
  r.exposed = static_cast<Index>(f.exposed_nodes.size());
  r.corrected = static_cast<Index>(f.corrected_nodes.size());
  r.exposed_nodes = f.exposed_nodes;

  const auto& grid = s.grid();
  const DomainMask truth_mask = bubble_mask(grid, t_query, cfg);
  const Vector truth = bubble_field(grid, t_query, cfg);
  Vector before = f.field;
  for (const auto& rep : f.mls_report) {
    before(rep.node) = rep.before;
    const double exact = bubble_strain(grid.coords()(rep.node, 0), t_query, cfg);
    r.max_err_before = std::max(r.max_err_before, std::abs(rep.before - exact));
    r.max_err_after = std::max(r.max_err_after, std::abs(rep.after - exact));
  }
  r.rel_err_before = relative_error(before, truth, grid, &truth_mask);
  r.rel_err_after = relative_error(f.field, truth, grid, &truth_mask);
  return r;
}

io::Table bubble_table(const BubbleRun& r) {
  return make_table({"R", "t_star", "radius_pred", "radius_true", "exposed", "corrected", "max_err_before",
                     "max_err_after", "rel_err_before", "rel_err_after"},
                    {{static_cast<double>(r.retained), r.t_star, r.radius_pred, r.radius_true,
                      static_cast<double>(r.exposed), static_cast<double>(r.corrected), r.max_err_before,
                      r.max_err_after, r.rel_err_before, r.rel_err_after}});
}

}  // namespace nirom
