#include "noisechaos/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <thread>

#include "noisechaos/channel_one.hpp"
#include "noisechaos/channel_two.hpp"
#include "noisechaos/diagnostics.hpp"
#include "noisechaos/errors.hpp"
#include "noisechaos/lanczos.hpp"

namespace noisechaos {

using nlohmann::json;

namespace {

const std::pair<ExperimentKind, const char*> kExperimentNames[] = {
    {ExperimentKind::SffScan, "sff_scan"},
    {ExperimentKind::TwoPointScan, "two_point_scan"},
    {ExperimentKind::LanczosScan, "lanczos_scan"},
    {ExperimentKind::OtocScan, "otoc_scan"},
    {ExperimentKind::TransferScan, "transfer_scan"},
    {ExperimentKind::ReturnScan, "return_scan"},
    {ExperimentKind::SffVarianceScan, "sff_variance_scan"},
    {ExperimentKind::OracleCompare, "oracle_compare"},
};

// ---- config field access ----

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

const json* find(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

const json& object_at(const json& obj, const std::string& path, const char* key) {
  const json* v = find(obj, key);
  if (!v) throw ConfigError(join(path, key), "missing");
  if (!v->is_object()) throw ConfigError(join(path, key), "must be an object");
  return *v;
}

double number(const json& obj, const std::string& path, const char* key,
              std::optional<double> def = std::nullopt) {
  const json* v = find(obj, key);
  if (!v) {
    if (def) return *def;
    throw ConfigError(join(path, key), "missing");
  }
  if (!v->is_number()) throw ConfigError(join(path, key), "must be a number");
  const double x = v->get<double>();
  if (!std::isfinite(x)) throw ConfigError(join(path, key), "must be finite");
  return x;
}

long long integer(const json& obj, const std::string& path, const char* key,
                  std::optional<long long> def = std::nullopt) {
  const json* v = find(obj, key);
  if (!v) {
    if (def) return *def;
    throw ConfigError(join(path, key), "missing");
  }
  if (!v->is_number_integer()) throw ConfigError(join(path, key), "must be an integer");
  return v->get<long long>();
}

std::uint64_t seed_value(const json& obj, const std::string& path, const char* key,
                         std::uint64_t def) {
  const json* v = find(obj, key);
  if (!v) return def;
  if (v->is_number_unsigned()) return v->get<std::uint64_t>();
  if (v->is_number_integer() && v->get<long long>() >= 0) {
    return static_cast<std::uint64_t>(v->get<long long>());
  }
  throw ConfigError(join(path, key), "must be a non-negative integer");
}

std::string text(const json& obj, const std::string& path, const char* key,
                 std::optional<std::string> def = std::nullopt) {
  const json* v = find(obj, key);
  if (!v) {
    if (def) return *def;
    throw ConfigError(join(path, key), "missing");
  }
  if (!v->is_string()) throw ConfigError(join(path, key), "must be a string");
  return v->get<std::string>();
}

bool flag(const json& obj, const std::string& path, const char* key, bool def) {
  const json* v = find(obj, key);
  if (!v) return def;
  if (!v->is_boolean()) throw ConfigError(join(path, key), "must be true or false");
  return v->get<bool>();
}

Ensemble ensemble_field(const json& obj, const std::string& path, const char* key,
                        const char* def) {
  const std::string s = text(obj, path, key, def);
  try {
    return ensemble_from_string(s);
  } catch (const Error&) {
    throw ConfigError(join(path, key), "expected \"gue\" or \"goe\", got \"" + s + "\"");
  }
}

std::vector<std::vector<double>> load_levels(const std::string& path) {
  json doc;
  try {
    doc = json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    throw ConfigError("spectrum.file", std::string("not valid JSON: ") + e.what());
  } catch (const Error& e) {
    throw ConfigError("spectrum.file", e.what());
  }
  std::vector<std::vector<double>> out;
  try {
    if (doc.is_array() && !doc.empty() && doc.front().is_array()) {
      out = doc.get<std::vector<std::vector<double>>>();
    } else {
      out.push_back(doc.get<std::vector<double>>());
    }
  } catch (const json::exception&) {
    throw ConfigError("spectrum.file", "expected an array of levels or an array of arrays");
  }
  for (std::size_t r = 0; r < out.size(); ++r) {
    if (out[r].size() < 2) {
      throw ConfigError("spectrum.file", "realization " + std::to_string(r) + " has < 2 levels");
    }
  }
  return out;
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt_short(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

// Runs fn(r) for r in [0, n) on up to `threads` workers.
template <class Fn>
void parallel_for(int n, int threads, Fn&& fn) {
  const int workers = std::max(1, std::min(threads, n));
  if (workers == 1) {
    for (int r = 0; r < n; ++r) fn(r);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (int r = w; r < n; r += workers) fn(r);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

NoiseModel make_model(const NoiseDescriptor& nd, const Spectrum& spec, double J) {
  if (nd.profile == "gibbs") return NoiseModel::gibbs(nd.ensemble, spec, J, nd.beta);
  return NoiseModel::constant(nd.ensemble, spec.dim(), J);
}

// Analytic SFF for any supported model.
std::vector<Complex> sff_values(const Spectrum& spec, const NoiseModel& model,
                                std::span<const double> grid) {
  std::vector<Complex> v;
  if (model.is_constant()) {
    const double J = model.constant_J();
    for (double t : grid) {
      v.emplace_back(model.ensemble() == Ensemble::GUE ? sff_gue_const_value(spec, J, t)
                                                       : sff_goe_const_value(spec, J, t));
    }
  } else {
    for (const ChannelOne& ch : u1_general_series(spec, model, grid)) {
      v.push_back(sff_from_channel(ch));
    }
  }
  return v;
}

std::vector<Complex> two_point_values(const Spectrum& spec, const NoiseModel& model,
                                      const MatrixXcd& O, std::span<const double> grid) {
  std::vector<Complex> v;
  if (model.is_constant()) {
    const double J = model.constant_J();
    for (double t : grid) {
      v.push_back(model.ensemble() == Ensemble::GUE ? two_point_gue_const_value(spec, J, O, t)
                                                    : two_point_goe_const_value(spec, J, O, t));
    }
  } else {
    for (const ChannelOne& ch : u1_general_series(spec, model, grid)) {
      v.push_back(two_point_from_channel(ch, O));
    }
  }
  return v;
}

struct Writer {
  const ExperimentConfig& cfg;
  std::string hash;
  std::vector<std::string> files;

  void write(const DiagnosticSeries& s, const std::string& stem) {
    namespace fs = std::filesystem;
    const fs::path dir(cfg.out_dir);
    if (cfg.write_csv) {
      const fs::path p = dir / (stem + ".csv");
      write_text_file(p.string(), series_to_csv(s, "config_hash=" + hash));
      files.push_back(p.string());
    }
    if (cfg.write_json) {
      json j = series_to_json(s);
      j["config_hash"] = hash;
      j["config"] = cfg.canonical;
      j["config"].erase("output");
      const fs::path p = dir / (stem + ".json");
      write_text_file(p.string(), j.dump(2) + "\n");
      files.push_back(p.string());
    }
  }
};

DiagnosticSeries analytic_series(std::string name, const Spectrum& spec, const NoiseModel& model,
                                 std::span<const double> grid, std::vector<Complex> values) {
  DiagnosticSeries s;
  s.name = std::move(name);
  s.times.assign(grid.begin(), grid.end());
  s.values = std::move(values);
  s.spectrum_hash = spectrum_hash(spec);
  s.noise = describe(model);
  s.dim = spec.dim();
  s.validate();
  return s;
}

// Mean over spectrum realizations of a per-realization series, reduced in index order.
template <class Fn>
std::vector<Complex> realization_mean(const ExperimentConfig& cfg, std::size_t n_t, Fn&& fn) {
  const int n = cfg.spectrum.n_realizations;
  std::vector<std::vector<Complex>> per(n);
  parallel_for(n, cfg.threads, [&](int r) { per[r] = fn(realization(cfg.spectrum, r)); });
  std::vector<Complex> mean(n_t, 0.0);
  for (const auto& v : per) {
    for (std::size_t k = 0; k < n_t; ++k) mean[k] += v[k];
  }
  for (auto& m : mean) m /= static_cast<double>(n);
  return mean;
}

DiagnosticSeries averaged_series(const ExperimentConfig& cfg, std::string name, double J,
                                 std::span<const double> grid, std::vector<Complex> values) {
  const Spectrum first = realization(cfg.spectrum, 0);
  DiagnosticSeries s =
      analytic_series(std::move(name), first, make_model(cfg.noise, first, J), grid,
                      std::move(values));
  s.seed = cfg.spectrum.seed;
  s.extra = {{"J", J}, {"n_realizations", cfg.spectrum.n_realizations}};
  return s;
}

std::string stem(const ExperimentConfig& cfg, const std::string& what, double J) {
  return to_string(cfg.experiment) + "_" + what + "_J" + fmt_short(J);
}

double max_z(const DiagnosticSeries& analytic, const DiagnosticSeries& mc) {
  double z = 0.0;
  for (std::size_t k = 0; k < analytic.values.size(); ++k) {
    const double diff = std::abs(analytic.values[k] - mc.values[k]);
    const double se = (*mc.stderrs)[k];
    // rounding-level agreement (t = 0, where every sample is identical)
    if (diff <= 1e-10 * std::max(1.0, std::abs(analytic.values[k]))) continue;
    z = std::max(z, se > 0.0 ? diff / se : std::numeric_limits<double>::infinity());
  }
  return z;
}

void check_operator_dim(const ExperimentConfig& cfg, const char* what, int min_dim) {
  if (cfg.spectrum.dim < min_dim) {
    throw ConfigError("spectrum.dim", std::string(what) + " needs dim >= " +
                                          std::to_string(min_dim));
  }
}

}  // namespace

std::string to_string(ExperimentKind k) {
  for (const auto& [kind, name] : kExperimentNames) {
    if (kind == k) return name;
  }
  return "unknown";
}

ExperimentKind experiment_from_string(const std::string& s) {
  for (const auto& [kind, name] : kExperimentNames) {
    if (s == name) return kind;
  }
  throw ConfigError("experiment", "unknown experiment \"" + s + "\"");
}

MatrixXcd random_hermitian_operator(int D, Rng& rng, bool traceless) {
  std::normal_distribution<double> normal(0.0, 1.0);
  MatrixXcd m(D, D);
  for (int i = 0; i < D; ++i) {
    for (int j = 0; j < D; ++j) m(i, j) = Complex(normal(rng), normal(rng));
  }
  MatrixXcd h = 0.5 * (m + m.adjoint());
  if (traceless) h -= (h.trace() / static_cast<double>(D)) * MatrixXcd::Identity(D, D);
  const double norm = std::sqrt((h * h).trace().real() / D);
  return h / norm;
}

Spectrum realization(const SpectrumSource& src, int r) {
  if (!src.levels.empty()) return Spectrum(src.levels[r % src.levels.size()]);
  Rng rng = substream(src.seed, static_cast<std::uint64_t>(r));
  return src.sample == Ensemble::GUE ? sample_gue_spectrum(src.dim, rng)
                                     : sample_goe_spectrum(src.dim, rng);
}

ExperimentConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("(root)", "config must be a JSON object");
  ExperimentConfig c;
  c.experiment = experiment_from_string(text(j, "", "experiment"));

  // spectrum
  const json& sp = object_at(j, "", "spectrum");
  if (const json* f = find(sp, "file")) {
    if (!f->is_string()) throw ConfigError("spectrum.file", "must be a string");
    c.spectrum.file = f->get<std::string>();
    c.spectrum.levels = load_levels(*c.spectrum.file);
    c.spectrum.dim = static_cast<int>(c.spectrum.levels.front().size());
    for (const auto& lv : c.spectrum.levels) {
      if (static_cast<int>(lv.size()) != c.spectrum.dim) {
        throw ConfigError("spectrum.file", "realizations differ in dimension");
      }
    }
    c.spectrum.n_realizations = static_cast<int>(
        integer(sp, "spectrum", "n_realizations", static_cast<long long>(c.spectrum.levels.size())));
  } else {
    c.spectrum.sample = ensemble_field(sp, "spectrum", "sample", "gue");
    c.spectrum.dim = static_cast<int>(integer(sp, "spectrum", "dim"));
    if (c.spectrum.dim < 2) throw ConfigError("spectrum.dim", "must be >= 2");
    c.spectrum.n_realizations = static_cast<int>(integer(sp, "spectrum", "n_realizations", 1));
    c.spectrum.seed = seed_value(sp, "spectrum", "seed", 0);
  }
  if (c.spectrum.n_realizations < 1) {
    throw ConfigError("spectrum.n_realizations", "must be >= 1");
  }

  // noise
  if (const json* nz = find(j, "noise")) {
    if (!nz->is_object()) throw ConfigError("noise", "must be an object");
    c.noise.ensemble = ensemble_field(*nz, "noise", "ensemble", "gue");
    c.noise.profile = text(*nz, "noise", "profile", "const");
    if (c.noise.profile != "const" && c.noise.profile != "gibbs") {
      throw ConfigError("noise.profile", "expected \"const\" or \"gibbs\"");
    }
    c.noise.beta = number(*nz, "noise", "beta", 0.0);
    if (c.noise.beta < 0.0) throw ConfigError("noise.beta", "must be >= 0");
  }

  // time grid
  if (c.experiment != ExperimentKind::LanczosScan || find(j, "t_grid")) {
    const json& tg = object_at(j, "", "t_grid");
    c.t_grid.t_min = number(tg, "t_grid", "t_min", 0.0);
    c.t_grid.t_max = number(tg, "t_grid", "t_max");
    c.t_grid.n_points = static_cast<int>(integer(tg, "t_grid", "n_points"));
    const std::string spacing = text(tg, "t_grid", "spacing", "linear");
    if (spacing == "linear") {
      c.t_grid.spacing = GridSpacing::Linear;
    } else if (spacing == "log") {
      c.t_grid.spacing = GridSpacing::Log;
    } else {
      throw ConfigError("t_grid.spacing", "expected \"linear\" or \"log\"");
    }
    try {
      make_time_grid(c.t_grid.t_min, c.t_grid.t_max, c.t_grid.n_points, c.t_grid.spacing);
    } catch (const Error& e) {
      throw ConfigError("t_grid", e.what());
    }
  }

  // J list
  const json* jl = find(j, "J_list");
  if (!jl) throw ConfigError("J_list", "missing");
  if (!jl->is_array() || jl->empty()) throw ConfigError("J_list", "must be a non-empty array");
  for (std::size_t k = 0; k < jl->size(); ++k) {
    const json& v = (*jl)[k];
    const std::string path = "J_list[" + std::to_string(k) + "]";
    if (!v.is_number()) throw ConfigError(path, "must be a number");
    const double J = v.get<double>();
    if (!(J >= 0.0) || !std::isfinite(J)) throw ConfigError(path, "must be finite and >= 0");
    c.J_list.push_back(J);
  }

  // Monte Carlo
  if (const json* mc = find(j, "montecarlo")) {
    if (!mc->is_object()) throw ConfigError("montecarlo", "must be an object");
    TrajectoryConfig t;
    t.dt = number(*mc, "montecarlo", "dt");
    if (!(t.dt > 0.0)) throw ConfigError("montecarlo.dt", "must be positive");
    t.n_traj = static_cast<int>(integer(*mc, "montecarlo", "n_traj"));
    if (t.n_traj < 2) throw ConfigError("montecarlo.n_traj", "must be >= 2");
    t.seed = seed_value(*mc, "montecarlo", "seed", 0);
    c.montecarlo = t;
  }
  if (c.experiment == ExperimentKind::OracleCompare && !c.montecarlo) {
    throw ConfigError("montecarlo", "required by oracle_compare");
  }

  // output
  if (const json* out = find(j, "output")) {
    if (!out->is_object()) throw ConfigError("output", "must be an object");
    c.out_dir = text(*out, "output", "dir", ".");
    c.write_csv = flag(*out, "output", "csv", true);
    c.write_json = flag(*out, "output", "json", true);
    if (!c.write_csv && !c.write_json) {
      throw ConfigError("output", "at least one of csv/json must be enabled");
    }
  }

  // observable options
  if (const json* ob = find(j, "observable")) {
    if (!ob->is_object()) throw ConfigError("observable", "must be an object");
    c.op.traceless = flag(*ob, "observable", "traceless", false);
    c.op.seed = seed_value(*ob, "observable", "seed", 1);
    c.transfer_i = static_cast<int>(integer(*ob, "observable", "i", 0));
    c.transfer_j = static_cast<int>(integer(*ob, "observable", "j", 0));
    c.partition = text(*ob, "observable", "partition", "eigenbasis");
    if (c.partition != "eigenbasis" && c.partition != "blocks") {
      throw ConfigError("observable.partition", "expected \"eigenbasis\" or \"blocks\"");
    }
    c.block_size = static_cast<int>(integer(*ob, "observable", "block_size", 1));
    if (c.block_size < 1) throw ConfigError("observable.block_size", "must be >= 1");
  }
  for (const auto& [val, key] : {std::pair{c.transfer_i, "i"}, std::pair{c.transfer_j, "j"}}) {
    if (val < 0 || val >= c.spectrum.dim) {
      throw ConfigError(std::string("observable.") + key, "out of range for spectrum dim");
    }
  }

  // Lanczos
  if (const json* lz = find(j, "lanczos")) {
    if (!lz->is_object()) throw ConfigError("lanczos", "must be an object");
    const std::string model = text(*lz, "lanczos", "model", "sech");
    if (model != "sech") throw ConfigError("lanczos.model", "only \"sech\" is supported");
    c.lanczos.alpha = number(*lz, "lanczos", "alpha", 1.0);
    if (!(c.lanczos.alpha > 0.0)) throw ConfigError("lanczos.alpha", "must be positive");
    c.lanczos.n_max = static_cast<int>(integer(*lz, "lanczos", "n_max", 30));
    if (c.lanczos.n_max < 1) throw ConfigError("lanczos.n_max", "must be >= 1");
    const long long digits = integer(*lz, "lanczos", "digits", 120);
    if (digits < 50) throw ConfigError("lanczos.digits", "must be >= 50");
    c.lanczos.digits = static_cast<unsigned>(digits);
    c.lanczos.tau = number(*lz, "lanczos", "tr_ratio", 1.0);
    c.lanczos.breakdown_tol = number(*lz, "lanczos", "breakdown_tol", 1e-14);
  }

  if (const json* orc = find(j, "oracle")) {
    if (!orc->is_object()) throw ConfigError("oracle", "must be an object");
    c.oracle_sigma = number(*orc, "oracle", "sigma", 3.0);
    if (!(c.oracle_sigma > 0.0)) throw ConfigError("oracle.sigma", "must be positive");
  }

  // experiment-specific requirements
  const bool gue_const = c.noise.ensemble == Ensemble::GUE && c.noise.profile == "const";
  if (c.experiment == ExperimentKind::OtocScan || c.experiment == ExperimentKind::SffVarianceScan) {
    if (!gue_const) throw ConfigError("noise", "two-replica scans need gue const noise");
    check_operator_dim(c, "two-replica scans", 3);
  }
  if (c.experiment == ExperimentKind::ReturnScan && !gue_const) {
    throw ConfigError("noise", "return_scan needs gue const noise");
  }
  if (c.experiment == ExperimentKind::ReturnScan && c.partition == "blocks" &&
      c.spectrum.dim % c.block_size != 0) {
    throw ConfigError("observable.block_size", "must divide spectrum.dim");
  }

  c.canonical = {
      {"experiment", to_string(c.experiment)},
      {"spectrum",
       c.spectrum.file ? json{{"file", *c.spectrum.file},
                              {"n_realizations", c.spectrum.n_realizations}}
                       : json{{"sample", to_string(c.spectrum.sample)},
                              {"dim", c.spectrum.dim},
                              {"n_realizations", c.spectrum.n_realizations},
                              {"seed", c.spectrum.seed}}},
      {"noise",
       {{"ensemble", to_string(c.noise.ensemble)}, {"profile", c.noise.profile},
        {"beta", c.noise.beta}}},
      {"t_grid",
       {{"t_min", c.t_grid.t_min}, {"t_max", c.t_grid.t_max}, {"n_points", c.t_grid.n_points},
        {"spacing", c.t_grid.spacing == GridSpacing::Linear ? "linear" : "log"}}},
      {"J_list", c.J_list},
      {"output", {{"dir", c.out_dir}, {"csv", c.write_csv}, {"json", c.write_json}}},
      {"observable",
       {{"traceless", c.op.traceless}, {"seed", c.op.seed}, {"i", c.transfer_i},
        {"j", c.transfer_j}, {"partition", c.partition}, {"block_size", c.block_size}}},
      {"lanczos",
       {{"model", "sech"}, {"alpha", c.lanczos.alpha}, {"n_max", c.lanczos.n_max},
        {"digits", c.lanczos.digits}, {"tr_ratio", c.lanczos.tau},
        {"breakdown_tol", c.lanczos.breakdown_tol}}},
      {"oracle", {{"sigma", c.oracle_sigma}}},
  };
  if (c.montecarlo) {
    c.canonical["montecarlo"] = {
        {"dt", c.montecarlo->dt}, {"n_traj", c.montecarlo->n_traj}, {"seed", c.montecarlo->seed}};
  }
  return c;
}

std::string config_hash(const ExperimentConfig& cfg) {
  json j = cfg.canonical;
  // output location does not change the data
  j.erase("output");
  return fnv1a_hex(j.dump());
}

void apply_overrides(ExperimentConfig& cfg, const std::optional<std::string>& out_dir,
                     std::optional<int> threads, std::optional<std::uint64_t> seed) {
  if (out_dir) {
    cfg.out_dir = *out_dir;
    cfg.canonical["output"]["dir"] = *out_dir;
  }
  if (threads) {
    if (*threads < 1) throw ConfigError("--threads", "must be >= 1");
    cfg.threads = *threads;
  }
  if (seed) {
    cfg.spectrum.seed = *seed;
    if (!cfg.spectrum.file) cfg.canonical["spectrum"]["seed"] = *seed;
    if (cfg.montecarlo) {
      cfg.montecarlo->seed = *seed;
      cfg.canonical["montecarlo"]["seed"] = *seed;
    }
  }
}

RunReport run(const ExperimentConfig& cfg) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(cfg.out_dir, ec);
  if (ec) throw Error("cannot create output directory " + cfg.out_dir + ": " + ec.message());

  Writer writer{cfg, config_hash(cfg), {}};
  RunReport report;
  std::vector<double> grid;
  if (cfg.experiment != ExperimentKind::LanczosScan) {
    grid = make_time_grid(cfg.t_grid.t_min, cfg.t_grid.t_max, cfg.t_grid.n_points,
                          cfg.t_grid.spacing);
  }
  const std::size_t n_t = grid.size();
  const int D = cfg.spectrum.dim;

  Rng op_rng = substream(cfg.op.seed, 0);
  const MatrixXcd O = random_hermitian_operator(D, op_rng, cfg.op.traceless);
  const MatrixXcd A = random_hermitian_operator(D, op_rng, true);
  const MatrixXcd B = random_hermitian_operator(D, op_rng, true);

  for (double J : cfg.J_list) {
    switch (cfg.experiment) {
      case ExperimentKind::SffScan: {
        auto v = realization_mean(cfg, n_t, [&](const Spectrum& s) {
          return sff_values(s, make_model(cfg.noise, s, J), grid);
        });
        writer.write(averaged_series(cfg, "sff", J, grid, std::move(v)), stem(cfg, "sff", J));
        break;
      }
      case ExperimentKind::TwoPointScan: {
        auto v = realization_mean(cfg, n_t, [&](const Spectrum& s) {
          return two_point_values(s, make_model(cfg.noise, s, J), O, grid);
        });
        writer.write(averaged_series(cfg, "two_point", J, grid, std::move(v)),
                     stem(cfg, "two_point", J));
        break;
      }
      case ExperimentKind::LanczosScan: {
        LanczosOptions opts;
        opts.digits = cfg.lanczos.digits;
        opts.breakdown_tol = cfg.lanczos.breakdown_tol;
        int n_max = cfg.lanczos.n_max;
        std::optional<int> breakdown;
        LanczosResult r;
        try {
          r = lanczos_sech(cfg.lanczos.alpha, J, cfg.lanczos.tau, n_max, opts);
        } catch (const LanczosBreakdown& e) {
          // keep the chain up to the last nonzero coefficient
          if (e.level() < 3) throw;
          breakdown = e.level();
          n_max = e.level() - 1;
          r = lanczos_sech(cfg.lanczos.alpha, J, cfg.lanczos.tau, n_max, opts);
        }
        DiagnosticSeries s;
        s.name = "lanczos_b_signed";
        for (int n = 1; n <= r.n_max; ++n) {
          s.times.push_back(n);
          s.values.emplace_back(r.b_signed[n - 1]);
        }
        s.noise = "gue const J=" + fmt(J);
        s.extra = {{"J", J}, {"abscissa", "n"}, {"alpha", cfg.lanczos.alpha},
                   {"tr_ratio", cfg.lanczos.tau}};
        if (breakdown) s.extra["breakdown_level"] = *breakdown;
        s.validate();
        writer.write(s, stem(cfg, "b", J));
        break;
      }
      case ExperimentKind::OtocScan: {
        auto v = realization_mean(cfg, n_t, [&](const Spectrum& s) {
          std::vector<Complex> out;
          for (double t : grid) out.push_back(otoc(s, J, t, A, B));
          return out;
        });
        writer.write(averaged_series(cfg, "otoc", J, grid, std::move(v)), stem(cfg, "otoc", J));
        break;
      }
      case ExperimentKind::TransferScan: {
        auto v = realization_mean(cfg, n_t, [&](const Spectrum& s) {
          return transfer_probability(s, make_model(cfg.noise, s, J), cfg.transfer_i,
                                      cfg.transfer_j, grid)
              .values;
        });
        DiagnosticSeries s = averaged_series(cfg, "transfer", J, grid, std::move(v));
        s.extra["i"] = cfg.transfer_i;
        s.extra["j"] = cfg.transfer_j;
        writer.write(s, stem(cfg, "transfer", J));
        break;
      }
      case ExperimentKind::ReturnScan: {
        ProjectorPartition part = ProjectorPartition::eigenbasis(D);
        if (cfg.partition == "blocks") {
          std::vector<std::vector<int>> groups(D / cfg.block_size);
          for (int k = 0; k < D; ++k) groups[k / cfg.block_size].push_back(k);
          part = ProjectorPartition::blocks(D, groups);
        }
        auto v = realization_mean(cfg, n_t, [&](const Spectrum& s) {
          return return_probability(s, J, part, grid).values;
        });
        DiagnosticSeries s = averaged_series(cfg, "return_probability", J, grid, std::move(v));
        s.extra["partition"] = cfg.partition;
        writer.write(s, stem(cfg, "return", J));
        break;
      }
      case ExperimentKind::SffVarianceScan: {
        std::vector<Complex> second(n_t), meansq(n_t);
        auto v = realization_mean(cfg, 2 * n_t, [&](const Spectrum& s) {
          std::vector<Complex> out;
          for (double t : grid) {
            const SffMoments m = sff_variance(s, J, t);
            out.emplace_back(m.second_moment);
            out.emplace_back(m.mean_squared);
          }
          return out;
        });
        std::vector<Complex> var(n_t);
        for (std::size_t k = 0; k < n_t; ++k) {
          second[k] = v[2 * k];
          var[k] = v[2 * k] - v[2 * k + 1];
        }
        writer.write(averaged_series(cfg, "sff_second_moment", J, grid, std::move(second)),
                     stem(cfg, "second_moment", J));
        writer.write(averaged_series(cfg, "sff_variance", J, grid, std::move(var)),
                     stem(cfg, "variance", J));
        break;
      }
      case ExperimentKind::OracleCompare: {
        const Spectrum spec = realization(cfg.spectrum, 0);
        const NoiseModel model = make_model(cfg.noise, spec, J);
        const bool two_replica = model.is_constant() && model.ensemble() == Ensemble::GUE && D >= 3;

        std::vector<NamedObservable> obs = {
            sff_observable(D), two_point_mc_observable(O),
            transfer_mc_observable(cfg.transfer_i, cfg.transfer_j)};
        std::vector<DiagnosticSeries> analytic = {
            analytic_series("sff", spec, model, grid, sff_values(spec, model, grid)),
            analytic_series("two_point", spec, model, grid,
                            two_point_values(spec, model, O, grid)),
            transfer_probability(spec, model, cfg.transfer_i, cfg.transfer_j, grid)};
        if (two_replica) {
          obs.push_back(otoc_mc_observable(A, B));
          obs.push_back(sff_squared_mc_observable());
          std::vector<Complex> ot, sq;
          for (double t : grid) {
            ot.push_back(otoc(spec, J, t, A, B));
            sq.emplace_back(sff_variance(spec, J, t).second_moment);
          }
          analytic.push_back(analytic_series("otoc", spec, model, grid, std::move(ot)));
          analytic.push_back(analytic_series("sff_squared", spec, model, grid, std::move(sq)));
        }
        TrajectoryConfig tc = *cfg.montecarlo;
        tc.threads = cfg.threads;
        const std::vector<DiagnosticSeries> mc = estimate_observables(spec, model, tc, grid, obs);
        for (std::size_t k = 0; k < mc.size(); ++k) {
          OracleCheck chk;
          chk.series = mc[k].name;
          chk.J = J;
          chk.max_z = max_z(analytic[k], mc[k]);
          chk.pass = chk.max_z <= cfg.oracle_sigma;
          report.oracle_pass = report.oracle_pass && chk.pass;
          report.checks.push_back(chk);
          writer.write(analytic[k], stem(cfg, mc[k].name + "_analytic", J));
          writer.write(mc[k], stem(cfg, mc[k].name + "_mc", J));
        }
        break;
      }
    }
  }

  report.files = writer.files;
  json checks = json::array();
  for (const OracleCheck& c : report.checks) {
    checks.push_back({{"series", c.series}, {"J", c.J}, {"max_z", c.max_z}, {"pass", c.pass}});
  }
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  report.summary = {{"experiment", to_string(cfg.experiment)},
                    {"config_hash", writer.hash},
                    {"timestamp", stamp},
                    {"files", report.files},
                    {"oracle", checks},
                    {"status", report.oracle_pass ? "pass" : "fail"}};
  const fs::path summary = fs::path(cfg.out_dir) / "summary.json";
  write_text_file(summary.string(), report.summary.dump(2) + "\n");
  return report;
}

}  // namespace noisechaos
