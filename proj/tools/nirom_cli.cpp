#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "nirom/bench.hpp"
#include "nirom/error.hpp"
#include "nirom/io.hpp"
#include "nirom/rom.hpp"
#include "nirom/suites.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace nirom;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitHorizon = 2;

json read_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InputError(path + ": " + e.what());
  }
}

// flag > config > default
template <class T>
T pick(const CLI::Option* opt, const T& flag_value, const json& cfg, const char* key, const T& fallback) {
  if (opt && opt->count() > 0) return flag_value;
  if (cfg.contains(key) && !cfg[key].is_null()) {
    try {
      return cfg[key].get<T>();
    } catch (const json::exception& e) {
      throw InputError(std::string("config key '") + key + "': " + e.what());
    }
  }
  return fallback;
}

fs::path manifest_of(const fs::path& p) { return fs::is_directory(p) ? p / "manifest.json" : p; }

void write_text(const fs::path& p, const std::string& text) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p);
  if (!out) throw InputError("cannot write " + p.string());
  out << text << '\n';
}

struct Common {
  std::string config;
  std::string out;
};

struct SettingsFlags {
  double alpha_pod = 0, beta_pod = 0, beta_gpr_a = 0, beta_gpr_gamma = 0, kernel_len = 0;
  int mls_order = 0, restarts = 0, fill_order = 0;
  long long modes = 0;
  std::uint64_t seed = 0;
  bool no_mls = false;
  CLI::Option *o_alpha = nullptr, *o_beta = nullptr, *o_ga = nullptr, *o_gg = nullptr, *o_s = nullptr,
              *o_kl = nullptr, *o_rs = nullptr, *o_seed = nullptr, *o_modes = nullptr, *o_fill = nullptr,
              *o_nomls = nullptr;

  void add(CLI::App* app) {
    o_alpha = app->add_option("--alpha-pod", alpha_pod, "RRMS truncation threshold");
    o_beta = app->add_option("--beta-pod", beta_pod, "POD horizon tolerance");
    o_ga = app->add_option("--beta-gpr-a", beta_gpr_a, "mode uncertainty tolerance");
    o_gg = app->add_option("--beta-gpr-gamma", beta_gpr_gamma, "boundary uncertainty tolerance");
    o_s = app->add_option("--mls-order", mls_order, "MLS polynomial order s");
    o_kl = app->add_option("--kernel-len", kernel_len, "initial MLS support in grid spacings");
    o_rs = app->add_option("--restarts", restarts, "GPR optimizer restarts");
    o_seed = app->add_option("--seed", seed, "seed for GPR restarts (env NIROM_SEED)");
    o_modes = app->add_option("--modes", modes, "retain exactly this many modes");
    o_fill = app->add_option("--fill-order", fill_order, "polynomial order of the occluded fill");
    o_nomls = app->add_flag("--no-mls", no_mls, "skip the MLS correction");
  }

  RomSettings resolve(const json& cfg) const {
    RomSettings s = settings_from_json(cfg.dump());
    if (const char* env = std::getenv("NIROM_SEED")) {
      try {
        s.gpr.seed = std::stoull(env);
      } catch (const std::exception&) {
        throw InputError(std::string("NIROM_SEED is not an unsigned integer: ") + env);
      }
    }
    if (o_alpha->count()) s.pod.alpha_pod = alpha_pod;
    if (o_beta->count()) s.pod.beta_pod = beta_pod;
    if (o_ga->count()) s.gpr_tol.beta_gpr_a = beta_gpr_a;
    if (o_gg->count()) s.gpr_tol.beta_gpr_gamma = beta_gpr_gamma;
    if (o_s->count()) s.mls.order = mls_order;
    if (o_kl->count()) s.mls.kernel_len = kernel_len;
    if (o_rs->count()) s.gpr.restarts = restarts;
    if (o_seed->count()) s.gpr.seed = seed;
    if (o_modes->count()) s.fixed_modes = static_cast<Index>(modes);
    if (o_fill->count()) s.fill.order = fill_order;
    if (o_nomls->count()) s.mls_enabled = false;
    s.validate();
    return s;
  }
};

void write_table(const fs::path& p, const io::Table& t) {
  io::write_table_csv(p, t.header, t.values);
  std::cout << "wrote " << p.string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonintrusive reduced-order modeling with POD, GPR and MLS"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a benchmark dataset");
  Common gen_c;
  std::string gen_kind;
  double re = 0, t1 = 0, tm = 0, t_horizon = 0, amplitude = 0, omega = 0, base = 0, t_bar = 0, r_max = 0;
  long long m = 0, nx = 0, nr = 0;
  gen->add_option("benchmark", gen_kind, "burgers or bubble")->required()->check(CLI::IsMember({"burgers", "bubble"}));
  gen->add_option("--config", gen_c.config, "JSON config file");
  gen->add_option("--out", gen_c.out, "dataset directory")->required();
  auto* o_re = gen->add_option("--re", re, "Reynolds number");
  auto* o_t1 = gen->add_option("--t1", t1, "first snapshot time");
  auto* o_tm = gen->add_option("--tM", tm, "last snapshot time");
  auto* o_m = gen->add_option("--m", m, "snapshot count");
  auto* o_nx = gen->add_option("--nx", nx, "Burgers grid nodes");
  auto* o_nr = gen->add_option("--nr", nr, "bubble radial nodes");
  auto* o_th = gen->add_option("--t-horizon", t_horizon, "bubble forecast window end (sizes the grid)");
  auto* o_amp = gen->add_option("--amplitude", amplitude, "bubble radius amplitude");
  auto* o_om = gen->add_option("--omega", omega, "bubble radius angular frequency");
  auto* o_base = gen->add_option("--base", base, "bubble mean radius");
  auto* o_tbar = gen->add_option("--t-bar", t_bar, "strain reference time");
  auto* o_rmax = gen->add_option("--r-max", r_max, "outer radius");

  // build
  auto* bld = app.add_subcommand("build", "build a ROM from a dataset");
  Common bld_c;
  std::string data;
  SettingsFlags bld_s;
  bld->add_option("--data", data, "dataset directory or manifest")->required();
  bld->add_option("--config", bld_c.config, "JSON config file");
  bld->add_option("--out", bld_c.out, "model directory")->required();
  bld_s.add(bld);

  // forecast
  auto* fc = app.add_subcommand("forecast", "evaluate a ROM at a query time");
  std::string model_dir, truth, fc_out;
  double t_query = 0;
  bool force = false;
  fc->add_option("--model", model_dir, "model directory")->required();
  fc->add_option("--t", t_query, "query time")->required();
  fc->add_flag("--force", force, "allow queries beyond t*");
  fc->add_option("--truth", truth, "dataset holding the reference field at the query time");
  fc->add_option("--out", fc_out, "output directory")->required();

  // horizon
  auto* hz = app.add_subcommand("horizon", "print the horizon criteria of a ROM");
  std::string hz_model;
  hz->add_option("--model", hz_model, "model directory")->required();

  // bench
  auto* bn = app.add_subcommand("bench", "run a benchmark suite");
  Common bn_c;
  std::string suite;
  SettingsFlags bn_s;
  bn->add_option("suite", suite, "burgers-sweep, bubble, galerkin-compare or error-growth")
      ->required()
      ->check(CLI::IsMember({"burgers-sweep", "bubble", "galerkin-compare", "error-growth"}));
  bn->add_option("--config", bn_c.config, "JSON config file");
  bn->add_option("--out", bn_c.out, "results directory")->required();
  bn_s.add(bn);

  // adaptive
  auto* ad = app.add_subcommand("adaptive", "alternate closed-form Burgers windows with ROM forecasts");
  Common ad_c;
  SettingsFlags ad_s;
  double ad_re = 0, ad_t1 = 0, ad_target = 0, ad_spacing = 0;
  long long ad_m = 0;
  ad->add_option("--config", ad_c.config, "JSON config file");
  ad->add_option("--out", ad_c.out, "output directory")->required();
  auto* o_adre = ad->add_option("--re", ad_re, "Reynolds number");
  auto* o_adt1 = ad->add_option("--t1", ad_t1, "start time");
  auto* o_adtt = ad->add_option("--t-target", ad_target, "final time");
  auto* o_adm = ad->add_option("--m", ad_m, "snapshots per solver window");
  auto* o_adsp = ad->add_option("--spacing", ad_spacing, "snapshot spacing");
  ad_s.add(ad);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (gen->parsed()) {
      const json cfg = read_config(gen_c.config);
      const fs::path out(gen_c.out);
      SnapshotSet s;
      if (gen_kind == "burgers") {
        BurgersConfig c;
        c.reynolds = pick(o_re, re, cfg, "re", 100.0);
        c.nx = static_cast<Index>(pick(o_nx, nx, cfg, "nx", 1001LL));
        const double a = pick(o_t1, t1, cfg, "t1", 0.3);
        const double b = pick(o_tm, tm, cfg, "tM", 0.5);
        const auto count = static_cast<Index>(pick(o_m, m, cfg, "m", 20LL));
        s = burgers_snapshots(c, a, b, count);
      } else {
        BubbleConfig c;
        c.base = pick(o_base, base, cfg, "base", c.base);
        c.amplitude = pick(o_amp, amplitude, cfg, "amplitude", c.amplitude);
        c.omega = pick(o_om, omega, cfg, "omega", c.omega);
        c.t_bar = pick(o_tbar, t_bar, cfg, "t_bar", c.t_bar);
        c.r_max = pick(o_rmax, r_max, cfg, "r_max", c.r_max);
        c.nr = static_cast<Index>(pick(o_nr, nr, cfg, "nr", static_cast<long long>(c.nr)));
        c.t_horizon = pick(o_th, t_horizon, cfg, "t_horizon", 70.0);
        const double a = pick(o_t1, t1, cfg, "t1", 51.0);
        const double b = pick(o_tm, tm, cfg, "tM", 60.0);
        const auto count = static_cast<Index>(pick(o_m, m, cfg, "m", 10LL));
        s = bubble_snapshots(c, a, b, count);
      }
      std::cout << "wrote " << io::write_dataset(out, s).string() << '\n';
    } else if (bld->parsed()) {
      const RomSettings st = bld_s.resolve(read_config(bld_c.config));
      const SnapshotSet s = io::load_snapshots(manifest_of(data));
      const RomModel model = build(s, st);
      const fs::path out(bld_c.out);
      save_model(out, model);
      write_text(out / "report.json", build_report(model));
      std::cout << "R = " << model.basis.retained << ", t* = " << model.t_star() << " (" << model.binding() << ")\n";
      for (const auto& w : model.warnings) std::cerr << "warning: " << w << '\n';
      std::cout << "wrote " << (out / "report.json").string() << '\n';
    } else if (fc->parsed()) {
      const RomModel model = load_model(model_dir);
      const RomForecast f = forecast(model, t_query, force);
      const fs::path out(fc_out);
      io::write_vector_csv(out / "field.csv", f.field);
      if (!f.mls_report.empty()) write_correction_report(out / "mls_report.csv", f.mls_report);
      std::optional<double> err;
      if (!truth.empty()) {
        const SnapshotSet ref = io::load_snapshots(manifest_of(truth));
        Index row = -1;
        for (Index i = 0; i < ref.snapshot_count(); ++i)
          if (std::abs(ref.times()(i) - t_query) <= 1e-9 * std::max(1.0, std::abs(t_query))) row = i;
        if (row < 0) {
          std::ostringstream os;
          os << truth << ": no snapshot at t = " << t_query;
          throw InputError(os.str());
        }
        if (ref.node_count() != model.grid.size()) throw InputError(truth + ": grid size differs from the model");
        const Vector ref_field = ref.fields().row(row).transpose();
        const DomainMask* mask = ref.has_moving_boundary() ? &ref.masks()[static_cast<size_t>(row)] : nullptr;
        err = relative_error(f.field, ref_field, model.grid, mask);
      }
      write_text(out / "summary.json", forecast_summary(f, err));
      if (f.beyond_horizon) std::cerr << "warning: forecast is beyond t* = " << f.t_star << " (forced)\n";
      if (err) std::cout << "relative error = " << *err << '\n';
      std::cout << "wrote " << (out / "summary.json").string() << '\n';
    } else if (hz->parsed()) {
      const RomModel model = load_model(hz_model);
      json j;
      j["t_star_pod"] = model.pod_h.unbounded ? json(nullptr) : json(model.pod_h.t_star);
      j["pod_unbounded"] = model.pod_h.unbounded;
      j["t_star_gpr_a"] = model.gpr_a_h.t_star;
      j["t_star_gpr_gamma"] = model.gpr_gamma_h ? json(model.gpr_gamma_h->t_star) : json(nullptr);
      j["t_star"] = std::isfinite(model.t_star()) ? json(model.t_star()) : json(nullptr);
      j["binding"] = model.binding();
      std::cout << j.dump(2) << '\n';
    } else if (bn->parsed()) {
      const json cfg = read_config(bn_c.config);
      const RomSettings st = bn_s.resolve(cfg);
      const fs::path out(bn_c.out);
      BurgersSetup setup;
      setup.nx = static_cast<Index>(pick<long long>(nullptr, 0, cfg, "nx", 1001));
      if (suite == "burgers-sweep") {
        write_table(out / "burgers_sweep.csv",
                    burgers_sweep({1.0, 100.0, 300.0, 500.0}, pick<long long>(nullptr, 0, cfg, "max_modes", 8), setup, st));
      } else if (suite == "galerkin-compare") {
        write_table(out / "galerkin_compare.csv", galerkin_compare({1.0, 100.0, 300.0, 500.0}, setup, st));
        for (double r : {1.0, 100.0, 500.0}) {
          std::ostringstream name;
          name << "galerkin_profile_re" << r << ".csv";
          write_table(out / name.str(), galerkin_profile(r, setup, st));
        }
      } else if (suite == "error-growth") {
        const double r = pick<double>(nullptr, 0, cfg, "re", 500.0);
        write_table(out / "error_growth.csv", error_growth(r, pick<long long>(nullptr, 0, cfg, "modes", 4), 10, 0.3, setup, st));
      } else {
        BubbleConfig c;
        const BubbleRun r = bubble_run(c, pick<double>(nullptr, 0, cfg, "t1", 51.0), pick<double>(nullptr, 0, cfg, "tM", 60.0),
                                       pick<long long>(nullptr, 0, cfg, "m", 10), pick<double>(nullptr, 0, cfg, "t_query", 70.0), st);
        write_table(out / "bubble.csv", bubble_table(r));
      }
    } else if (ad->parsed()) {
      const json cfg = read_config(ad_c.config);
      const RomSettings st = ad_s.resolve(cfg);
      BurgersConfig c;
      c.reynolds = pick(o_adre, ad_re, cfg, "re", 100.0);
      c.validate();
      const double start = pick(o_adt1, ad_t1, cfg, "t1", 0.3);
      const double target = pick(o_adtt, ad_target, cfg, "t_target", 1.2);
      const auto window = static_cast<Index>(pick(o_adm, ad_m, cfg, "m", 20LL));
      const double spacing = pick(o_adsp, ad_spacing, cfg, "spacing", 0.2 / 19.0);
      if (!(spacing > 0.0)) throw InputError("spacing must be positive");
      SnapshotSolver solver = [&](const Vector&, double t0, Index count) {
        return burgers_snapshots(c, t0, t0 + spacing * static_cast<double>(count - 1), count);
      };
      const SpatialGrid grid = burgers_grid(c);
      const AdaptiveResult res = adaptive_loop(solver, burgers_field(grid, start, c), start, window, target, st);
      Matrix log(static_cast<Index>(res.segments.size()), 5);
      std::vector<std::vector<double>> samples;
      for (size_t i = 0; i < res.segments.size(); ++i) {
        const auto& seg = res.segments[i];
        double worst = 0.0;
        for (const auto& f : seg.samples) {
          const double e = relative_error(f.field, burgers_field(grid, f.t_query, c), grid);
          worst = std::max(worst, e);
          samples.push_back({static_cast<double>(seg.handoff.round), f.t_query, e, f.sigma_weighted});
        }
        log.row(static_cast<Index>(i)) << seg.handoff.round, seg.handoff.window_start, seg.handoff.window_end,
            seg.handoff.t_star, worst;
        std::cout << "round " << seg.handoff.round << ": window [" << seg.handoff.window_start << ", "
                  << seg.handoff.window_end << "], t* = " << seg.handoff.t_star << " (" << seg.handoff.binding
                  << "), max error " << worst << '\n';
      }
      const fs::path out(ad_c.out);
      io::write_table_csv(out / "handoffs.csv", {"round", "window_start", "window_end", "t_star", "max_error"}, log);
      Matrix sm(static_cast<Index>(samples.size()), 4);
      for (size_t i = 0; i < samples.size(); ++i)
        for (int j = 0; j < 4; ++j) sm(static_cast<Index>(i), j) = samples[i][static_cast<size_t>(j)];
      io::write_table_csv(out / "segments.csv", {"round", "t", "relative_error", "sigma_weighted"}, sm);
      std::cout << "wrote " << (out / "handoffs.csv").string() << '\n';
    }
  } catch (const HorizonError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitHorizon;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitOk;
}
