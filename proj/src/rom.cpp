#include "nirom/rom.hpp"

#include <cmath>
#include <fstream>
#include <future>
#include <limits>
#include <sstream>

#include "json.hpp"

#include "nirom/error.hpp"
#include "nirom/io.hpp"

namespace nirom {

namespace {

using json = nlohmann::json;

constexpr double kInf = std::numeric_limits<double>::infinity();

json horizon_value(double t) { return std::isfinite(t) ? json(t) : json(nullptr); }

json settings_json(const RomSettings& s) {
  json j;
  j["alpha_pod"] = s.pod.alpha_pod;
  j["beta_pod"] = s.pod.beta_pod;
  j["beta_gpr_a"] = s.gpr_tol.beta_gpr_a;
  j["beta_gpr_gamma"] = s.gpr_tol.beta_gpr_gamma;
  j["restarts"] = s.gpr.restarts;
  j["seed"] = s.gpr.seed;
  j["fill_strategy"] = s.fill.strategy == FillStrategy::RigidMotion ? "rigid_motion" : "ls_extrapolation";
  j["fill_order"] = s.fill.order;
  j["velocity_param"] = s.fill.velocity_param;
  j["mls_enabled"] = s.mls_enabled;
  j["mls_order"] = s.mls.order;
  j["kernel_len"] = s.mls.kernel_len;
  j["min_neighbor_factor"] = s.mls.min_neighbor_factor;
  j["modes"] = s.fixed_modes ? json(*s.fixed_modes) : json(nullptr);
  j["scan_step"] = s.scan_step ? json(*s.scan_step) : json(nullptr);
  j["scan_span_factor"] = s.scan_span_factor;
  return j;
}

std::vector<GprModel> train_all(const Vector& t, const Matrix& series, const GprOptions& base, std::uint64_t offset) {
  std::vector<std::future<GprModel>> jobs;
  for (Index k = 0; k < series.cols(); ++k) {
    GprOptions o = base;
    o.seed = base.seed + offset + static_cast<std::uint64_t>(k);
    Vector y = series.col(k);
    jobs.push_back(std::async(std::launch::async, [t, y = std::move(y), o] { return GprModel::train(t, y, o); }));
  }
  std::vector<GprModel> out;
  out.reserve(jobs.size());
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

void write_mask(const std::filesystem::path& p, const DomainMask& m) {
  Vector v(m.size());
  for (Index j = 0; j < m.size(); ++j) v(j) = m.fluid(j) ? 1.0 : 0.0;
  io::write_vector_csv(p, v);
}

DomainMask read_mask(const std::filesystem::path& p) {
  const Vector v = io::read_vector_csv(p);
  std::vector<bool> f(static_cast<size_t>(v.size()));
  for (Index j = 0; j < v.size(); ++j) f[static_cast<size_t>(j)] = v(j) != 0.0;
  return DomainMask(std::move(f));
}

json horizon_json(const GprHorizon& h) {
  json j{{"t_star", h.t_star},
         {"violated_at_start", h.violated_at_start},
         {"scan_limit", h.scan_limit},
         {"sigma_weighted", h.sigma_weighted}};
  if (!h.per_parameter.empty()) j["per_parameter"] = h.per_parameter;
  return j;
}

GprHorizon horizon_from(const json& j) {
  GprHorizon h;
  h.t_star = j.at("t_star").get<double>();
  h.violated_at_start = j.at("violated_at_start").get<bool>();
  h.scan_limit = j.at("scan_limit").get<bool>();
  h.sigma_weighted = j.at("sigma_weighted").get<double>();
  if (j.contains("per_parameter")) h.per_parameter = j["per_parameter"].get<std::vector<double>>();
  return h;
}

std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw InputError("cannot open " + p.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

void RomSettings::validate() const {
  pod.validate();
  gpr_tol.validate();
  mls.validate();
  if (fill.order < 0) throw InputError("fill order must be >= 0");
  if (gpr.restarts < 1) throw InputError("GPR restarts must be >= 1");
  if (fixed_modes && *fixed_modes < 1) throw InputError("modes must be >= 1");
  if (scan_step && !(*scan_step > 0.0)) throw InputError("scan_step must be positive");
  if (!(scan_span_factor > 0.0)) throw InputError("scan_span_factor must be positive");
}

RomSettings settings_from_json(const std::string& text, RomSettings s) {
  json j;
  try {
    j = json::parse(text);
    if (j.contains("alpha_pod")) s.pod.alpha_pod = j["alpha_pod"].get<double>();
    if (j.contains("beta_pod")) s.pod.beta_pod = j["beta_pod"].get<double>();
    if (j.contains("beta_gpr_a")) s.gpr_tol.beta_gpr_a = j["beta_gpr_a"].get<double>();
    if (j.contains("beta_gpr_gamma")) s.gpr_tol.beta_gpr_gamma = j["beta_gpr_gamma"].get<double>();
    if (j.contains("restarts")) s.gpr.restarts = j["restarts"].get<int>();
    if (j.contains("seed")) s.gpr.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("fill_strategy")) {
      const auto v = j["fill_strategy"].get<std::string>();
      if (v == "rigid_motion") s.fill.strategy = FillStrategy::RigidMotion;
      else if (v == "ls_extrapolation") s.fill.strategy = FillStrategy::LsExtrapolation;
      else throw InputError("unknown fill_strategy '" + v + "'");
    }
    if (j.contains("fill_order")) s.fill.order = j["fill_order"].get<int>();
    if (j.contains("velocity_param")) s.fill.velocity_param = j["velocity_param"].get<std::string>();
    if (j.contains("mls_enabled")) s.mls_enabled = j["mls_enabled"].get<bool>();
    if (j.contains("mls_order")) s.mls.order = j["mls_order"].get<int>();
    if (j.contains("kernel_len")) s.mls.kernel_len = j["kernel_len"].get<double>();
    if (j.contains("min_neighbor_factor")) s.mls.min_neighbor_factor = j["min_neighbor_factor"].get<double>();
    if (j.contains("modes") && !j["modes"].is_null()) s.fixed_modes = j["modes"].get<Index>();
    if (j.contains("scan_step") && !j["scan_step"].is_null()) s.scan_step = j["scan_step"].get<double>();
    if (j.contains("scan_span_factor")) s.scan_span_factor = j["scan_span_factor"].get<double>();
  } catch (const json::exception& e) {
    throw InputError(std::string("settings: ") + e.what());
  }
  s.validate();
  return s;
}

std::string settings_to_json(const RomSettings& s) { return settings_json(s).dump(2); }

double RomModel::scan_step() const {
  return settings.scan_step ? *settings.scan_step : (tm - t1) / static_cast<double>(snapshots);
}

double RomModel::t_star() const {
  double t = pod_h.unbounded ? kInf : pod_h.t_star;
  t = std::min(t, gpr_a_h.t_star);
  if (gpr_gamma_h) t = std::min(t, gpr_gamma_h->t_star);
  return t;
}

std::string RomModel::binding() const {
  const double t = t_star();
  if (!pod_h.unbounded && pod_h.t_star == t) return "pod";
  if (gpr_a_h.t_star == t) return "gpr_a";
  return "gpr_gamma";
}

RomModel build(const SnapshotSet& s, const RomSettings& settings) {
  settings.validate();
  RomModel m;
  m.settings = settings;
  m.grid = s.grid();
  m.t1 = s.times()(0);
  m.tm = s.times()(s.snapshot_count() - 1);
  m.snapshots = s.snapshot_count();
  const double step = m.scan_step();
  const double t_max = m.tm + settings.scan_span_factor * (m.tm - m.t1);

  const SnapshotSet* data = &s;
  SnapshotSet filled;
  if (s.has_moving_boundary()) {
    if (!s.boundary()) throw InputError("moving-boundary data needs a boundary track");
    m.boundary = *s.boundary();
    m.geometry = s.geometry();
    m.boundary_models = train_all(s.times(), s.boundary()->values, settings.gpr, 1000);
    m.gpr_gamma_h = gpr_horizon_boundary(m.boundary_models, m.tm, settings.gpr_tol.beta_gpr_gamma, step, t_max);
    m.fluid_ever = s.fluid_ever();
    m.fluid_throughout = s.fluid_throughout();
    if (!m.geometry) m.warnings.push_back("no boundary geometry given: exposed nodes cannot be located, MLS correction skipped");
    filled = fill_occluded(s, settings.fill);
    data = &filled;
  }

  m.mean = data->mean();
  PodBasis b = decompose(correlation_matrix(*data), *data);
  m.basis = settings.fixed_modes ? truncate_to(std::move(b), *settings.fixed_modes)
                                 : truncate(std::move(b), settings.pod.alpha_pod);
  m.pod_h = pod_horizon(m.basis, m.t1, m.tm, settings.pod.beta_pod);
  if (m.pod_h.unbounded) m.warnings.push_back("POD horizon unbounded: lambda_{R+2} unavailable or zero");

  m.mode_models = train_all(s.times(), m.basis.coeffs, settings.gpr, 0);
  for (size_t k = 0; k < m.mode_models.size(); ++k)
    if (m.mode_models[k].fallback())
      m.warnings.push_back("mode " + std::to_string(k + 1) + ": GPR training diverged, heuristic hyperparameters used");
  for (size_t l = 0; l < m.boundary_models.size(); ++l)
    if (m.boundary_models[l].fallback())
      m.warnings.push_back("boundary " + m.boundary->names[l] + ": GPR training diverged, heuristic hyperparameters used");

  m.gpr_a_h = gpr_horizon_modes(m.mode_models, m.basis.eigenvalues, m.basis.total_energy(), m.tm,
                                settings.gpr_tol.beta_gpr_a, step, t_max);
  if (m.gpr_a_h.violated_at_start) m.warnings.push_back("mode uncertainty criterion fails at the first step: t*_GPR,a = tM");
  if (m.gpr_a_h.scan_limit) m.warnings.push_back("mode uncertainty criterion held up to the scan limit");
  if (m.gpr_gamma_h && m.gpr_gamma_h->violated_at_start)
    m.warnings.push_back("boundary uncertainty criterion fails at the first step: t*_GPR,Gamma = tM");
  return m;
}

RomForecast forecast(const RomModel& m, double t_query, bool force) {
  if (!(t_query > m.t1)) {
    std::ostringstream os;
    os << "t_query = " << t_query << " must exceed t1 = " << m.t1;
    throw InputError(os.str());
  }
  RomForecast f;
  f.t_query = t_query;
  f.pod_unbounded = m.pod_h.unbounded;
  f.t_star_pod = m.pod_h.unbounded ? kInf : m.pod_h.t_star;
  f.t_star_gpr_a = m.gpr_a_h.t_star;
  if (m.gpr_gamma_h) f.t_star_gpr_gamma = m.gpr_gamma_h->t_star;
  f.t_star = m.t_star();
  f.binding = m.binding();
  f.beyond_horizon = t_query > f.t_star;
  if (f.beyond_horizon && !force) {
    std::ostringstream os;
    os.precision(12);
    os << "t_query = " << t_query << " is beyond the forecast horizon t* = " << f.t_star << " (bound by " << f.binding
       << "); use force to extrapolate";
    throw HorizonError(os.str(), f.t_star);
  }

  const Index r = m.basis.retained;
  f.mode_mean.resize(r);
  f.mode_sd.resize(r);
  for (Index k = 0; k < r; ++k) {
    const auto [mu, sd] = m.mode_models[static_cast<size_t>(k)].predict(t_query);
    f.mode_mean(k) = mu;
    f.mode_sd(k) = sd;
  }
  f.field = reconstruct(m.basis, m.mean, f.mode_mean);
  f.sigma_weighted = weighted_sigma(m.basis.eigenvalues.head(r), f.mode_sd, m.basis.total_energy());
  f.errors.pod_tail = std::sqrt(std::max(m.basis.tail_energy(), 0.0));
  f.errors.gpr_sigma = f.sigma_weighted;

  if (m.has_boundary()) {
    Vector gamma(static_cast<Index>(m.boundary_models.size()));
    for (size_t l = 0; l < m.boundary_models.size(); ++l)
      gamma(static_cast<Index>(l)) = m.boundary_models[l].predict(t_query).first;
    f.boundary_values = gamma;
    if (m.geometry) {
      const DomainMask now = m.geometry->mask(m.grid, *m.boundary, gamma);
      f.fluid = now;
      std::vector<bool> history(static_cast<size_t>(m.grid.size()));
      for (Index j = 0; j < m.grid.size(); ++j) {
        if (now.fluid(j) && !m.fluid_ever->fluid(j)) f.exposed_nodes.push_back(j);
        history[static_cast<size_t>(j)] = now.fluid(j) && m.fluid_throughout->fluid(j);
      }
      if (m.settings.mls_enabled && !f.exposed_nodes.empty()) {
        MlsCorrection c = correct_field(f.field, f.exposed_nodes, DomainMask(std::move(history)), m.grid, m.settings.mls);
        double change = 0.0;
        for (const auto& rep : c.report) {
          const double d = rep.after - rep.before;
          change += d * d * m.grid.weights()(rep.node);
        }
        f.errors.mls_change = std::sqrt(change);
        f.corrected_nodes = c.corrected_nodes();
        f.skipped_nodes = c.skipped_nodes();
        f.mls_report = std::move(c.report);
        f.field = std::move(c.field);
      }
    }
  }
  return f;
}

double relative_error(const Vector& pred, const Vector& truth, const SpatialGrid& grid, const DomainMask* mask) {
  if (pred.size() != truth.size() || pred.size() != grid.size()) throw InputError("relative_error: size mismatch");
  Vector w = grid.weights();
  if (mask) {
    if (mask->size() != grid.size()) throw InputError("relative_error: mask size mismatch");
    for (Index j = 0; j < w.size(); ++j)
      if (!mask->fluid(j)) w(j) = 0.0;
  }
  const double den = (truth.array().square() * w.array()).sum();
  if (!(den > 0.0)) throw InputError("relative_error: truth has zero norm");
  return std::sqrt(((truth - pred).array().square() * w.array()).sum() / den);
}

std::string build_report(const RomModel& m) {
  json j;
  j["retained"] = m.basis.retained;
  j["snapshots"] = m.snapshots;
  j["t1"] = m.t1;
  j["tM"] = m.tm;
  const Vector& lam = m.basis.eigenvalues;
  j["eigenvalues"] = std::vector<double>(lam.data(), lam.data() + lam.size());
  j["rrms"] = m.basis.rrms_tail;
  const Vector r = ric(m.basis);
  j["ric"] = std::vector<double>(r.data(), r.data() + r.size());
  json modes = json::array();
  for (size_t k = 0; k < m.mode_models.size(); ++k) {
    const auto& g = m.mode_models[k];
    const Kernel kd = g.kernel();
    modes.push_back({{"mode", k + 1},
                     {"theta_f", kd.theta_f},
                     {"theta_l", kd.theta_l},
                     {"noise_var", g.noise_var()},
                     {"nlml", g.nlml_value()},
                     {"fallback", g.fallback()}});
  }
  j["mode_models"] = modes;
  if (m.has_boundary()) {
    json bm = json::array();
    for (size_t l = 0; l < m.boundary_models.size(); ++l) {
      const auto& g = m.boundary_models[l];
      const Kernel kd = g.kernel();
      bm.push_back({{"name", m.boundary->names[l]},
                    {"theta_f", kd.theta_f},
                    {"theta_l", kd.theta_l},
                    {"noise_var", g.noise_var()},
                    {"fallback", g.fallback()}});
    }
    j["boundary_models"] = bm;
  }
  j["t_star_pod"] = horizon_value(m.pod_h.unbounded ? kInf : m.pod_h.t_star);
  j["pod_unbounded"] = m.pod_h.unbounded;
  j["pod_decay_rate"] = m.pod_h.decay_rate;
  j["t_star_gpr_a"] = m.gpr_a_h.t_star;
  j["sigma_weighted_at_t_star_gpr_a"] = m.gpr_a_h.sigma_weighted;
  j["t_star_gpr_gamma"] = m.gpr_gamma_h ? json(m.gpr_gamma_h->t_star) : json(nullptr);
  j["t_star"] = horizon_value(m.t_star());
  j["binding"] = m.binding();
  j["scan_step"] = m.scan_step();
  j["settings"] = settings_json(m.settings);
  j["warnings"] = m.warnings;
  return j.dump(2);
}

std::string forecast_summary(const RomForecast& f, std::optional<double> rel_error) {
  json j;
  j["t_query"] = f.t_query;
  j["t_star_pod"] = horizon_value(f.t_star_pod);
  j["pod_unbounded"] = f.pod_unbounded;
  j["t_star_gpr_a"] = f.t_star_gpr_a;
  j["t_star_gpr_gamma"] = f.t_star_gpr_gamma ? json(*f.t_star_gpr_gamma) : json(nullptr);
  j["t_star"] = horizon_value(f.t_star);
  j["binding"] = f.binding;
  j["beyond_horizon"] = f.beyond_horizon;
  j["sigma_weighted"] = f.sigma_weighted;
  j["mode_mean"] = std::vector<double>(f.mode_mean.data(), f.mode_mean.data() + f.mode_mean.size());
  j["mode_sd"] = std::vector<double>(f.mode_sd.data(), f.mode_sd.data() + f.mode_sd.size());
  if (f.boundary_values)
    j["boundary_values"] =
        std::vector<double>(f.boundary_values->data(), f.boundary_values->data() + f.boundary_values->size());
  j["exposed_nodes"] = f.exposed_nodes.size();
  j["corrected_nodes"] = f.corrected_nodes.size();
  j["skipped_nodes"] = f.skipped_nodes;
  j["error_parts"] = {{"pod_tail", f.errors.pod_tail},
                      {"gpr_sigma", f.errors.gpr_sigma},
                      {"mls_change", f.errors.mls_change}};
  if (rel_error) j["relative_error"] = *rel_error;
  return j.dump(2);
}

void save_model(const std::filesystem::path& dir, const RomModel& m) {
  namespace fs = std::filesystem;
  fs::create_directories(dir / "gpr");
  save_basis(dir / "basis", m.basis);
  io::write_vector_csv(dir / "mean.csv", m.mean);
  io::write_grid_csv(dir / "grid.csv", m.grid);
  for (size_t k = 0; k < m.mode_models.size(); ++k)
    std::ofstream(dir / "gpr" / ("mode_" + std::to_string(k + 1) + ".json")) << m.mode_models[k].to_json() << '\n';
  for (size_t l = 0; l < m.boundary_models.size(); ++l)
    std::ofstream(dir / "gpr" / ("boundary_" + std::to_string(l + 1) + ".json")) << m.boundary_models[l].to_json()
                                                                                  << '\n';
  json j;
  j["settings"] = settings_json(m.settings);
  j["t1"] = m.t1;
  j["tM"] = m.tm;
  j["snapshots"] = m.snapshots;
  j["modes"] = m.mode_models.size();
  j["pod_horizon"] = {{"t_star", m.pod_h.unbounded ? 0.0 : m.pod_h.t_star},
                      {"decay_rate", m.pod_h.decay_rate},
                      {"unbounded", m.pod_h.unbounded}};
  j["gpr_a_horizon"] = horizon_json(m.gpr_a_h);
  j["gpr_gamma_horizon"] = m.gpr_gamma_h ? horizon_json(*m.gpr_gamma_h) : json(nullptr);
  j["warnings"] = m.warnings;
  if (m.has_boundary()) {
    io::write_table_csv(dir / "boundary.csv", m.boundary->names, m.boundary->values);
    write_mask(dir / "fluid_ever.csv", *m.fluid_ever);
    write_mask(dir / "fluid_throughout.csv", *m.fluid_throughout);
    j["boundary_models"] = m.boundary_models.size();
    if (m.geometry)
      j["geometry"] = {{"kind", BoundaryGeometry::kind_name(m.geometry->kind)}, {"params", m.geometry->params}};
  }
  std::ofstream(dir / "model.json") << j.dump(2) << '\n';
}

RomModel load_model(const std::filesystem::path& dir) {
  json j;
  try {
    j = json::parse(read_text(dir / "model.json"));
  } catch (const json::exception& e) {
    throw InputError((dir / "model.json").string() + ": " + e.what());
  }
  RomModel m;
  try {
    m.settings = settings_from_json(j.at("settings").dump());
    m.t1 = j.at("t1").get<double>();
    m.tm = j.at("tM").get<double>();
    m.snapshots = j.at("snapshots").get<Index>();
    const auto& ph = j.at("pod_horizon");
    m.pod_h.unbounded = ph.at("unbounded").get<bool>();
    m.pod_h.t_star = m.pod_h.unbounded ? kInf : ph.at("t_star").get<double>();
    m.pod_h.decay_rate = ph.at("decay_rate").get<double>();
    m.gpr_a_h = horizon_from(j.at("gpr_a_horizon"));
    if (!j.at("gpr_gamma_horizon").is_null()) m.gpr_gamma_h = horizon_from(j["gpr_gamma_horizon"]);
    m.warnings = j.value("warnings", std::vector<std::string>{});
    m.basis = load_basis(dir / "basis");
    m.mean = io::read_vector_csv(dir / "mean.csv");
    m.grid = io::read_grid_csv(dir / "grid.csv");
    const auto modes = j.at("modes").get<size_t>();
    for (size_t k = 0; k < modes; ++k)
      m.mode_models.push_back(GprModel::from_json(read_text(dir / "gpr" / ("mode_" + std::to_string(k + 1) + ".json"))));
    if (j.contains("boundary_models")) {
      const auto nb = j["boundary_models"].get<size_t>();
      for (size_t l = 0; l < nb; ++l)
        m.boundary_models.push_back(
            GprModel::from_json(read_text(dir / "gpr" / ("boundary_" + std::to_string(l + 1) + ".json"))));
      io::Table t = io::read_table_csv(dir / "boundary.csv");
      m.boundary = BoundaryTrack{std::move(t.header), std::move(t.values)};
      m.fluid_ever = read_mask(dir / "fluid_ever.csv");
      m.fluid_throughout = read_mask(dir / "fluid_throughout.csv");
      if (j.contains("geometry")) {
        BoundaryGeometry g;
        g.kind = BoundaryGeometry::parse_kind(j["geometry"].at("kind").get<std::string>());
        g.params = j["geometry"].at("params").get<std::vector<std::string>>();
        m.geometry = std::move(g);
      }
    }
  } catch (const json::exception& e) {
    throw InputError((dir / "model.json").string() + ": " + e.what());
  }
  if (static_cast<Index>(m.mode_models.size()) != m.basis.retained)
    throw InputError(dir.string() + ": mode model count does not match the retained modes");
  if (m.mean.size() != m.grid.size() || m.basis.modes.cols() != m.grid.size())
    throw InputError(dir.string() + ": mean/modes do not match the grid");
  return m;
}

AdaptiveResult adaptive_loop(const SnapshotSolver& solver, const Vector& initial_state, double t_start, Index window,
                             double t_target, const RomSettings& settings, int samples_per_segment) {
  if (window < 2) throw InputError("adaptive window needs at least 2 snapshots");
  if (samples_per_segment < 1) throw InputError("samples_per_segment must be >= 1");
  AdaptiveResult out;
  Vector state = initial_state;
  double t = t_start;
  int stalled = 0;
  for (int round = 1;; ++round) {
    SnapshotSet snaps = solver(state, t, window);
    const double tm = snaps.times()(snaps.snapshot_count() - 1);
    if (!(tm > t) && round > 1) throw NumericalError("adaptive loop: solver window did not advance time");
    if (t_target <= tm) {
      out.last_window = std::move(snaps);
      out.reached_target = true;
      break;
    }
    const RomModel m = build(snaps, settings);
    const double t_star = std::min(m.t_star(), t_target);
    HandoffRecord rec;
    rec.round = round;
    rec.window_start = snaps.times()(0);
    rec.window_end = tm;
    rec.t_star = t_star;
    rec.binding = t_star < m.t_star() ? "target" : m.binding();
    out.log.push_back(rec);

    if (!(t_star > tm)) {
      if (++stalled >= 2) {
        std::ostringstream os;
        os << "adaptive loop made no ROM progress on two consecutive rounds (t* = tM = " << tm << ", bound by "
           << m.binding() << ")";
        throw NumericalError(os.str());
      }
    } else {
      stalled = 0;
    }

    AdaptiveSegment seg;
    seg.handoff = rec;
    for (int i = 1; i <= samples_per_segment; ++i) {
      const double tq = tm + (t_star - tm) * static_cast<double>(i) / samples_per_segment;
      seg.samples.push_back(forecast(m, tq, true));
    }
    state = seg.samples.back().field;
    t = t_star;
    out.segments.push_back(std::move(seg));
    if (t >= t_target) {
      out.last_window = std::move(snaps);
      out.reached_target = true;
      break;
    }
  }
  return out;
}

}  // namespace nirom
