#include "qgate/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace qgate::cli {

namespace {

// Typed, path-aware access to one JSON object. Tracks consumed keys so that
// finish() can reject anything unrecognised.
class Block {
 public:
  Block(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw ConfigError(path_, "expected an object");
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return node_.contains(key);
  }

  std::string child_path(const std::string& key) const {
    return path_ + "/" + key;
  }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    return node_.at(key);
  }

  template <class T>
  void read(const std::string& key, T& out) {
    if (!has(key)) return;
    out = as<T>(node_.at(key), child_path(key));
  }

  template <class T>
  void read_optional(const std::string& key, std::optional<T>& out) {
    if (!has(key) || node_.at(key).is_null()) return;
    out = as<T>(node_.at(key), child_path(key));
  }

  Block sub(const std::string& key) {
    seen_.insert(key);
    return Block(node_.at(key), child_path(key));
  }

  void finish() const {
    for (auto it = node_.begin(); it != node_.end(); ++it) {
      if (!seen_.count(it.key())) {
        throw ConfigError(child_path(it.key()), "unknown key");
      }
    }
  }

  template <class T>
  static T as(const json& v, const std::string& path) {
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw ConfigError(path, "expected a boolean");
      return v.get<bool>();
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) throw ConfigError(path, "expected a string");
      return v.get<std::string>();
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) throw ConfigError(path, "expected an integer");
      if constexpr (std::is_unsigned_v<T>) {
        if (v.is_number_unsigned()) return v.get<T>();
        if (v.get<long long>() < 0) throw ConfigError(path, "must be >= 0");
      }
      return v.get<T>();
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) throw ConfigError(path, "expected a number");
      const double d = v.get<double>();
      if (!std::isfinite(d)) throw ConfigError(path, "must be finite");
      return d;
    } else if constexpr (std::is_same_v<T, std::vector<double>> ||
                         std::is_same_v<T, std::vector<int>>) {
      if (!v.is_array()) throw ConfigError(path, "expected an array");
      T out;
      for (std::size_t i = 0; i < v.size(); ++i) {
        out.push_back(as<typename T::value_type>(v[i], path + "/" + std::to_string(i)));
      }
      return out;
    } else {
      static_assert(sizeof(T) == 0, "unsupported config type");
    }
  }

  const std::string& path() const { return path_; }

 private:
  const json& node_;
  std::string path_;
  std::set<std::string> seen_;
};

RealMatrix parse_real_matrix(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) throw ConfigError(path, "expected a square array");
  const auto p = static_cast<Eigen::Index>(v.size());
  RealMatrix m(p, p);
  for (Eigen::Index i = 0; i < p; ++i) {
    const std::string row_path = path + "/" + std::to_string(i);
    const auto row =
        Block::as<std::vector<double>>(v[static_cast<std::size_t>(i)], row_path);
    if (static_cast<Eigen::Index>(row.size()) != p) {
      throw ConfigError(row_path, "row length does not match matrix size");
    }
    for (Eigen::Index j = 0; j < p; ++j) m(i, j) = row[static_cast<std::size_t>(j)];
  }
  return m;
}

// [[[re, im], [re, im]], [[re, im], [re, im]]]
ComplexMatrix parse_gate_matrix(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2) throw ConfigError(path, "expected 2 rows");
  ComplexMatrix g(2, 2);
  for (std::size_t i = 0; i < 2; ++i) {
    const std::string rp = path + "/" + std::to_string(i);
    if (!v[i].is_array() || v[i].size() != 2) throw ConfigError(rp, "expected 2 entries");
    for (std::size_t j = 0; j < 2; ++j) {
      const std::string ep = rp + "/" + std::to_string(j);
      const auto pair = Block::as<std::vector<double>>(v[i][j], ep);
      if (pair.size() != 2) throw ConfigError(ep, "expected [re, im]");
      g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = {pair[0], pair[1]};
    }
  }
  return g;
}

Envelope parse_envelope(const std::string& s, const std::string& path) {
  if (s == "sin_squared") return Envelope::sin_squared;
  if (s == "flat") return Envelope::flat;
  throw ConfigError(path, "envelope must be 'sin_squared' or 'flat'");
}

std::string envelope_name(Envelope e) {
  return e == Envelope::flat ? "flat" : "sin_squared";
}

ExecPolicy parse_policy(const std::string& s, const std::string& path) {
  if (s == "serial") return ExecPolicy::serial;
  if (s == "parallel") return ExecPolicy::parallel;
  throw ConfigError(path, "policy must be 'serial' or 'parallel'");
}

void read_ga(Block b, GaConfig& ga, GaBounds& bounds) {
  b.read("population", ga.population);
  b.read("generations", ga.generations);
  b.read("tournament_size", ga.tournament_size);
  b.read("crossover_rate", ga.crossover_rate);
  b.read("mutation_rate", ga.mutation_rate);
  b.read("mutation_scale", ga.mutation_scale);
  b.read("mutation_decay", ga.mutation_decay);
  b.read("elitism", ga.elitism);
  b.read("components", bounds.components);
  b.read("amplitude_max", bounds.amplitude_max);
  b.read("frequency_min", bounds.frequency_min);
  b.read("frequency_max", bounds.frequency_max);
  if (b.has("envelope")) {
    bounds.envelope = parse_envelope(
        Block::as<std::string>(b.raw("envelope"), b.child_path("envelope")),
        b.child_path("envelope"));
  }
  if (b.has("policy")) {
    ga.policy = parse_policy(
        Block::as<std::string>(b.raw("policy"), b.child_path("policy")),
        b.child_path("policy"));
  }
  b.finish();
}

void read_gradient(Block b, GradConfig& g) {
  b.read("alpha", g.alpha);
  b.read("max_iters", g.max_iters);
  b.read("tol_grad", g.tol_grad);
  b.read("tol_obj", g.tol_obj);
  b.read("tol_j", g.tol_j);
  b.read("initial_step", g.initial_step);
  b.read("backtrack", g.backtrack);
  b.read("armijo", g.armijo);
  b.read("max_backtracks", g.max_backtracks);
  b.read("lbfgs_memory", g.lbfgs_memory);
  b.read("amplitude_bound", g.amplitude_bound);
  if (b.has("objective")) {
    const auto p = b.child_path("objective");
    const auto s = Block::as<std::string>(b.raw("objective"), p);
    if (s == "distance") {
      g.objective = Objective::distance;
    } else if (s == "squared_distance") {
      g.objective = Objective::squared_distance;
    } else {
      throw ConfigError(p, "objective must be 'distance' or 'squared_distance'");
    }
  }
  if (b.has("direction")) {
    const auto p = b.child_path("direction");
    const auto s = Block::as<std::string>(b.raw("direction"), p);
    if (s == "lbfgs") {
      g.direction = SearchDirection::lbfgs;
    } else if (s == "steepest") {
      g.direction = SearchDirection::steepest;
    } else {
      throw ConfigError(p, "direction must be 'lbfgs' or 'steepest'");
    }
  }
  b.finish();
}

template <class Fn>
void wrap(const std::string& path, Fn&& fn) {
  try {
    fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(path, e.what());
  }
}

}  // namespace

RunConfig RunConfig::from_json(const json& doc) {
  RunConfig cfg;
  Block root(doc, "");
  root.read("seed", cfg.seed);

  if (!root.has("system")) throw ConfigError("/system", "missing required block");
  {
    Block b = root.sub("system");
    if (!b.has("n")) throw ConfigError("/system/n", "missing required key");
    b.read("n", cfg.system.n);
    b.read("gamma", cfg.system.gamma);
    b.read("gamma_prime", cfg.system.gamma_prime);
    b.read_optional("frequencies", cfg.system.frequencies);
    b.read("mu", cfg.system.mu);
    if (b.has("couplings") && !b.raw("couplings").is_null()) {
      cfg.system.couplings =
          parse_real_matrix(b.raw("couplings"), b.child_path("couplings"));
    }
    b.finish();
  }

  if (!root.has("grid")) throw ConfigError("/grid", "missing required block");
  {
    Block b = root.sub("grid");
    if (!b.has("t_final")) throw ConfigError("/grid/t_final", "missing required key");
    b.read("t_final", cfg.grid.t_final);
    b.read("steps", cfg.grid.steps);
    b.read("max_dt", cfg.grid.max_dt);
    b.finish();
  }

  if (root.has("target")) {
    Block b = root.sub("target");
    b.read("gate", cfg.target.gate);
    if (b.has("matrix") && !b.raw("matrix").is_null()) {
      cfg.target.matrix = parse_gate_matrix(b.raw("matrix"), b.child_path("matrix"));
      if (!b.has("gate")) cfg.target.gate = "custom";
    }
    b.finish();
  }

  if (root.has("optimizer")) {
    Block b = root.sub("optimizer");
    if (b.has("stages")) {
      const auto p = b.child_path("stages");
      const json& arr = b.raw("stages");
      if (!arr.is_array()) throw ConfigError(p, "expected an array");
      cfg.optimizer.stages.clear();
      for (std::size_t i = 0; i < arr.size(); ++i) {
        const auto ip = p + "/" + std::to_string(i);
        const auto s = Block::as<std::string>(arr[i], ip);
        if (s == "ga") {
          cfg.optimizer.stages.push_back(Stage::ga);
        } else if (s == "gradient") {
          cfg.optimizer.stages.push_back(Stage::gradient);
        } else {
          throw ConfigError(ip, "stage must be 'ga' or 'gradient'");
        }
      }
    }
    if (b.has("init")) {
      const auto p = b.child_path("init");
      const auto s = Block::as<std::string>(b.raw("init"), p);
      if (s == "zero") {
        cfg.optimizer.init = FieldInit::zero;
      } else if (s == "resonant") {
        cfg.optimizer.init = FieldInit::resonant;
      } else {
        throw ConfigError(p, "init must be 'zero' or 'resonant'");
      }
    }
    if (b.has("ga")) read_ga(b.sub("ga"), cfg.optimizer.ga, cfg.optimizer.bounds);
    if (b.has("gradient")) read_gradient(b.sub("gradient"), cfg.optimizer.gradient);
    b.finish();
  }

  if (root.has("ensemble")) {
    Block b = root.sub("ensemble");
    b.read("size", cfg.ensemble.size);
    b.read_optional("gamma_mean", cfg.ensemble.gamma_mean);
    b.read_optional("gamma_sd", cfg.ensemble.gamma_sd);
    b.read_optional("env_ratio", cfg.ensemble.env_ratio);
    b.read("bins", cfg.ensemble.bins);
    b.finish();
  }

  if (root.has("sweep")) {
    Block b = root.sub("sweep");
    b.read("gammas", cfg.sweep.gammas);
    b.read("warm_start", cfg.sweep.warm_start);
    b.read("cross_n", cfg.sweep.cross_n);
    b.finish();
  }

  if (root.has("output")) {
    Block b = root.sub("output");
    b.read("directory", cfg.output_directory);
    b.finish();
  }
  root.finish();

  cfg.set_seed(cfg.seed);
  cfg.validate();
  return cfg;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), "cannot open config file");
  json doc;
  try {
    doc = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string(), std::string("parse error: ") + e.what());
  }
  return from_json(doc);
}

void RunConfig::set_seed(std::uint64_t s) {
  seed = s;
  optimizer.ga.seed = s;
}

SystemSpec RunConfig::system_spec(int n, double gamma) const {
  SystemSpec spec;
  wrap("/system/n", [&] { spec = default_spec(n, gamma, system.gamma_prime); });
  if (system.frequencies) {
    if (static_cast<int>(system.frequencies->size()) < n + 1) {
      throw ConfigError("/system/frequencies",
                        "need at least n + 1 = " + std::to_string(n + 1) +
                            " frequencies");
    }
    spec.omegas.assign(system.frequencies->begin(),
                       system.frequencies->begin() + n + 1);
  }
  spec.mu = system.mu;
  if (system.couplings && n == system.n) spec.couplings = *system.couplings;
  wrap("/system", [&] { spec.validate(); });
  return spec;
}

SystemSpec RunConfig::system_spec() const {
  return system_spec(system.n, system.gamma);
}

TimeGrid RunConfig::time_grid() const {
  TimeGrid g;
  wrap("/grid", [&] {
    g = grid.steps > 0 ? TimeGrid{grid.t_final, grid.steps}
                       : TimeGrid::with_max_step(grid.t_final, grid.max_dt);
    g.validate();
  });
  return g;
}

GateTarget RunConfig::gate() const {
  GateTarget t;
  if (target.matrix) {
    t = {*target.matrix, target.gate};
    wrap("/target/matrix", [&] { t.validate(); });
  } else {
    wrap("/target/gate", [&] { t = GateTarget::from_name(target.gate); });
  }
  return t;
}

EnsembleConfig RunConfig::ensemble_config() const {
  EnsembleConfig c;
  c.size = ensemble.size;
  c.gamma_mean = ensemble.gamma_mean.value_or(system.gamma);
  c.gamma_sd = ensemble.gamma_sd.value_or(c.gamma_mean / 8.0);
  c.env_ratio = ensemble.env_ratio.value_or(
      system.gamma != 0.0 ? system.gamma_prime / system.gamma : 0.0);
  c.seed = seed;
  return c;
}

void RunConfig::validate() const {
  system_spec();
  time_grid();
  gate();
  wrap("/optimizer/ga", [&] {
    optimizer.ga.validate();
    optimizer.bounds.validate();
  });
  wrap("/optimizer/gradient", [&] { optimizer.gradient.validate(); });
  if (ensemble.bins < 1) throw ConfigError("/ensemble/bins", "must be >= 1");
  wrap("/ensemble", [&] { ensemble_config().validate(); });
  for (std::size_t i = 0; i < sweep.gammas.size(); ++i) {
    if (sweep.gammas[i] < 0.0) {
      throw ConfigError("/sweep/gammas/" + std::to_string(i), "must be >= 0");
    }
  }
  for (std::size_t i = 0; i < sweep.cross_n.size(); ++i) {
    const int n = sweep.cross_n[i];
    if (n < 0 || n > kMaxEnvironment) {
      throw ConfigError("/sweep/cross_n/" + std::to_string(i),
                        "must be in [0, " + std::to_string(kMaxEnvironment) + "]");
    }
  }
  if (output_directory.empty()) {
    throw ConfigError("/output/directory", "must not be empty");
  }
}

json RunConfig::to_json() const {
  json j;
  j["seed"] = seed;
  const SystemSpec spec = system_spec();
  json couplings = json::array();
  for (Eigen::Index i = 0; i < spec.couplings.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < spec.couplings.cols(); ++k) {
      row.push_back(spec.couplings(i, k));
    }
    couplings.push_back(row);
  }
  j["system"] = {{"n", system.n},
                 {"gamma", system.gamma},
                 {"gamma_prime", system.gamma_prime},
                 {"frequencies", spec.omegas},
                 {"mu", system.mu},
                 {"couplings", couplings}};
  const TimeGrid g = time_grid();
  j["grid"] = {{"t_final", g.t_final}, {"steps", g.steps}, {"max_dt", grid.max_dt}};
  const GateTarget t = gate();
  json matrix = json::array();
  for (Eigen::Index r = 0; r < 2; ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < 2; ++c) {
      row.push_back({t.g(r, c).real(), t.g(r, c).imag()});
    }
    matrix.push_back(row);
  }
  j["target"] = {{"gate", t.name}, {"matrix", matrix}};

  json stages = json::array();
  for (Stage s : optimizer.stages) stages.push_back(s == Stage::ga ? "ga" : "gradient");
  const auto& ga = optimizer.ga;
  const auto& bd = optimizer.bounds;
  const auto& gr = optimizer.gradient;
  j["optimizer"] = {
      {"stages", stages},
      {"init", optimizer.init == FieldInit::zero ? "zero" : "resonant"},
      {"ga",
       {{"population", ga.population},
        {"generations", ga.generations},
        {"tournament_size", ga.tournament_size},
        {"crossover_rate", ga.crossover_rate},
        {"mutation_rate", ga.mutation_rate},
        {"mutation_scale", ga.mutation_scale},
        {"mutation_decay", ga.mutation_decay},
        {"elitism", ga.elitism},
        {"components", bd.components},
        {"amplitude_max", bd.amplitude_max},
        {"frequency_min", bd.frequency_min},
        {"frequency_max", bd.frequency_max},
        {"envelope", envelope_name(bd.envelope)},
        {"policy", std::string(to_string(ga.policy))}}},
      {"gradient",
       {{"alpha", gr.alpha},
        {"max_iters", gr.max_iters},
        {"tol_grad", gr.tol_grad},
        {"tol_obj", gr.tol_obj},
        {"tol_j", gr.tol_j},
        {"initial_step", gr.initial_step},
        {"backtrack", gr.backtrack},
        {"armijo", gr.armijo},
        {"max_backtracks", gr.max_backtracks},
        {"lbfgs_memory", gr.lbfgs_memory},
        {"amplitude_bound", gr.amplitude_bound},
        {"objective", std::string(to_string(gr.objective))},
        {"direction",
         gr.direction == SearchDirection::lbfgs ? "lbfgs" : "steepest"}}}};

  const EnsembleConfig ec = ensemble_config();
  j["ensemble"] = {{"size", ec.size},
                   {"gamma_mean", ec.gamma_mean},
                   {"gamma_sd", ec.gamma_sd},
                   {"env_ratio", ec.env_ratio},
                   {"bins", ensemble.bins}};
  j["sweep"] = {{"gammas", sweep.gammas},
                {"warm_start", sweep.warm_start},
                {"cross_n", sweep.cross_n}};
  j["output"] = {{"directory", output_directory}};
  return j;
}

}  // namespace qgate::cli
