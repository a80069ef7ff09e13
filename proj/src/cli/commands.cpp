#include "qgate/cli/commands.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <random>
#include <fstream>

#include "qgate/cli/io.hpp"

namespace qgate::cli {

namespace fs = std::filesystem;

namespace {

// The output location is left out so that reruns into different
// directories produce identical reports.
json envelope_of(const RunConfig& cfg) {
  json config = cfg.to_json();
  config.erase("output");
  return {{"config", config}, {"seed", cfg.seed}};
}

PiecewiseField load_field(const fs::path& path, const TimeGrid& grid) {
  try {
    return read_field_csv(path, grid);
  } catch (const std::exception& e) {
    throw ConfigError("--field", e.what());
  }
}

const fs::path& require_field(const CommandArgs& args, const char* command) {
  if (!args.field) {
    throw ConfigError("--field", std::string(command) + " needs a field file");
  }
  return *args.field;
}

std::string sanitize(std::string s) {
  for (char& ch : s) {
    if (ch == ',' || ch == '\n') ch = ';';
  }
  return s;
}

json summary_json(const SystemSpec& spec, const TimeGrid& grid,
                  const PiecewiseField& field, const GateEvaluation& ev) {
  return {{"n", spec.n},
          {"a_max", field.max_amplitude()},
          {"t_final", grid.t_final},
          {"fluence", field.fluence()},
          {"fidelity", ev.fidelity},
          {"entropy_final", ev.entropy}};
}

void write_histogram(const fs::path& path, std::span<const double> values, int bins) {
  const Histogram h = histogram(values, bins);
  CsvWriter out(path, {"bin_lo", "bin_hi", "count"});
  for (std::size_t b = 0; b < h.counts.size(); ++b) {
    out.row({format_double(h.edges[b]), format_double(h.edges[b + 1]),
             std::to_string(h.counts[b])});
  }
}

std::vector<std::string> coupling_columns(int n) {
  std::vector<std::string> cols;
  for (int i = 0; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) {
      cols.push_back("g_" + std::to_string(i) + "_" + std::to_string(j));
    }
  }
  return cols;
}

EnsembleReport read_samples(const fs::path& path, int n) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--samples", "cannot open " + path.string());
  std::vector<std::string> header{"draw", "F", "S_vN"};
  for (auto& c : coupling_columns(n)) header.push_back(c);
  std::string line;
  if (!std::getline(in, line) || split_csv(line) != header) {
    throw ConfigError("--samples", path.string() +
                                       ": header does not match the configured system");
  }
  EnsembleReport report;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != header.size()) {
      throw ConfigError("--samples", path.string() + ":" + std::to_string(lineno) +
                                         ": wrong column count");
    }
    EnsembleSample s;
    try {
      s.draw = std::stoull(cells[0]);
      s.fidelity = std::stod(cells[1]);
      s.entropy = std::stod(cells[2]);
      for (std::size_t c = 3; c < cells.size(); ++c) s.couplings.push_back(std::stod(cells[c]));
    } catch (const std::exception&) {
      throw ConfigError("--samples", path.string() + ":" + std::to_string(lineno) +
                                         ": not a number");
    }
    report.samples.push_back(std::move(s));
  }
  if (report.samples.empty()) throw ConfigError("--samples", "no samples in " + path.string());
  summarize(report);
  return report;
}

}  // namespace

PiecewiseField initial_field(FieldInit init, const SystemSpec& spec, const TimeGrid& grid) {
  PiecewiseField f = PiecewiseField::zeros(grid);
  if (init == FieldInit::resonant) {
    for (int k = 0; k < grid.steps; ++k) {
      const double t = grid.midpoint(k);
      f.values[static_cast<std::size_t>(k)] =
          0.5 * envelope_value(Envelope::sin_squared, t, grid.t_final) *
          std::cos(spec.omegas[0] * t);
    }
  }
  return f;
}

RecipeResult run_recipe(const SystemSpec& spec, const GateTarget& target,
                        const TimeGrid& grid, const OptimizerBlock& optimizer,
                        const PiecewiseField* warm) {
  RecipeResult r;
  PiecewiseField current = warm ? *warm : initial_field(optimizer.init, spec, grid);
  for (Stage stage : optimizer.stages) {
    if (stage == Stage::ga) {
      if (warm) continue;
      GaResult ga = ga_optimize(spec, target, grid, optimizer.ga, optimizer.bounds);
      current = synthesize(ga.best);
      r.ga = std::move(ga);
    } else {
      OptimReport rep = optimize(spec, current, target, optimizer.gradient);
      current = rep.field;
      r.gradient = std::move(rep);
    }
  }
  const GateEvaluation ev = evaluate_gate(spec, current, target);
  r.field = std::move(current);
  r.fidelity = ev.fidelity;
  r.entropy = ev.entropy;
  return r;
}

int cmd_optimize(const CommandArgs& args, std::ostream& log) {
  const RunConfig& cfg = args.config;
  const SystemSpec spec = cfg.system_spec();
  const TimeGrid grid = cfg.time_grid();
  const GateTarget target = cfg.gate();
  std::optional<PiecewiseField> warm;
  if (args.field) warm = load_field(*args.field, grid);
  fs::create_directories(args.out);

  const RecipeResult r = run_recipe(spec, target, grid, cfg.optimizer, warm ? &*warm : nullptr);
  const GateEvaluation ev{r.fidelity, r.entropy};

  write_field_csv(args.out / "field.csv", r.field);
  json report = envelope_of(cfg);
  if (r.ga) {
    CsvWriter out(args.out / "ga_history.csv", {"generation", "best_fidelity"});
    for (std::size_t g = 0; g < r.ga->history.size(); ++g) {
      out.row({std::to_string(g), format_double(r.ga->history[g])});
    }
    report["ga"] = {{"best_fidelity", r.ga->best_fidelity},
                    {"generations", r.ga->history.size() - 1},
                    {"stagnant_generations", r.ga->stagnant_generations},
                    {"genome", r.ga->best.genome()}};
  }
  if (r.gradient) {
    const OptimReport& g = *r.gradient;
    CsvWriter out(args.out / "history.csv", {"iteration", "objective"});
    for (std::size_t i = 0; i < g.objective_history.size(); ++i) {
      out.row({std::to_string(i), format_double(g.objective_history[i])});
    }
    report["gradient"] = {{"iterations", g.iterations},
                          {"stop_reason", std::string(to_string(g.reason))},
                          {"fidelity", g.fidelity},
                          {"fluence", g.fluence},
                          {"grad_norm", g.grad_norm},
                          {"squared_path_used", g.squared_path_used},
                          {"objective_history", g.objective_history}};
  }
  const json summary = summary_json(spec, grid, r.field, ev);
  report["summary"] = summary;
  {
    CsvWriter out(args.out / "summary.csv",
                  {"n", "A_max", "t_f", "fluence", "F", "S_vN"});
    out.row({std::to_string(spec.n), format_double(r.field.max_amplitude()),
             format_double(grid.t_final), format_double(r.field.fluence()),
             format_double(ev.fidelity), format_double(ev.entropy)});
  }
  write_json(args.out / "report.json", report);

  log << "n=" << spec.n << " F=" << format_double(ev.fidelity)
      << " S_vN=" << format_double(ev.entropy)
      << " fluence=" << format_double(r.field.fluence())
      << " A_max=" << format_double(r.field.max_amplitude()) << '\n';
  return kSuccess;
}

int cmd_sweep(const CommandArgs& args, std::ostream& log) {
  const RunConfig& cfg = args.config;
  const TimeGrid grid = cfg.time_grid();
  const GateTarget target = cfg.gate();
  const int n = cfg.system.n;
  std::vector<double> gammas = cfg.sweep.gammas;
  if (gammas.empty()) gammas.push_back(cfg.system.gamma);
  for (int m : cfg.sweep.cross_n) cfg.system_spec(m, cfg.system.gamma);
  std::optional<PiecewiseField> fixed;
  if (args.field) fixed = load_field(*args.field, grid);
  fs::create_directories(args.out);

  struct Row {
    std::string kind;
    int n;
    double gamma;
    double fidelity = std::nan("");
    double entropy = std::nan("");
    double reference = std::nan("");
    std::string status = "ok";
  };
  std::vector<Row> rows;
  std::optional<PiecewiseField> previous;
  int failures = 0;

  for (double gamma : gammas) {
    Row row{fixed ? "fixed" : "optimized", n, gamma};
    std::optional<PiecewiseField> field;
    try {
      const SystemSpec spec = cfg.system_spec(n, gamma);
      if (fixed) {
        field = *fixed;
      } else {
        const PiecewiseField* warm =
            cfg.sweep.warm_start && previous ? &*previous : nullptr;
        field = run_recipe(spec, target, grid, cfg.optimizer, warm).field;
        previous = field;
      }
      const GateEvaluation ev = evaluate_gate(spec, *field, target);
      row.fidelity = ev.fidelity;
      row.entropy = ev.entropy;
    } catch (const std::exception& e) {
      row.status = "error: " + sanitize(e.what());
      ++failures;
    }
    rows.push_back(row);
    log << row.kind << " n=" << n << " gamma=" << format_double(gamma)
        << " F=" << format_double(row.fidelity) << ' ' << row.status << '\n';
    if (!field) continue;

    // Transplant the field to other environment sizes; the reference is the
    // same field refined by the gradient stage on the larger system.
    for (int m : cfg.sweep.cross_n) {
      Row cross{"cross", m, gamma};
      try {
        const SystemSpec spec_m = cfg.system_spec(m, gamma);
        const GateEvaluation ev = evaluate_gate(spec_m, *field, target);
        cross.fidelity = ev.fidelity;
        cross.entropy = ev.entropy;
        OptimizerBlock refine = cfg.optimizer;
        refine.stages = {Stage::gradient};
        cross.reference = run_recipe(spec_m, target, grid, refine, &*field).fidelity;
      } catch (const std::exception& e) {
        cross.status = "error: " + sanitize(e.what());
        ++failures;
      }
      rows.push_back(cross);
      log << "cross n=" << m << " gamma=" << format_double(gamma)
          << " F=" << format_double(cross.fidelity)
          << " F_ref=" << format_double(cross.reference) << ' ' << cross.status << '\n';
    }
  }

  auto cell = [](double v) { return std::isnan(v) ? std::string() : format_double(v); };
  json jrows = json::array();
  {
    CsvWriter out(args.out / "sweep.csv",
                  {"kind", "n", "gamma", "F", "S_vN", "F_reference", "status"});
    for (const Row& r : rows) {
      out.row({r.kind, std::to_string(r.n), format_double(r.gamma), cell(r.fidelity),
               cell(r.entropy), cell(r.reference), r.status});
      json jr = {{"kind", r.kind}, {"n", r.n}, {"gamma", r.gamma}, {"status", r.status}};
      jr["fidelity"] = std::isnan(r.fidelity) ? json() : json(r.fidelity);
      jr["entropy_final"] = std::isnan(r.entropy) ? json() : json(r.entropy);
      jr["fidelity_reference"] = std::isnan(r.reference) ? json() : json(r.reference);
      jrows.push_back(jr);
    }
  }
  json report = envelope_of(cfg);
  report["rows"] = jrows;
  report["failures"] = failures;
  write_json(args.out / "sweep.json", report);
  return failures == 0 ? kSuccess : kRuntimeFailure;
}

int cmd_entropy(const CommandArgs& args, std::ostream& log) {
  const RunConfig& cfg = args.config;
  const SystemSpec spec = cfg.system_spec();
  const TimeGrid grid = cfg.time_grid();
  const GateTarget target = cfg.gate();
  const PiecewiseField field = load_field(require_field(args, "entropy"), grid);
  fs::create_directories(args.out);

  const auto controlled = entropy_trace(spec, field);
  const auto uncontrolled = entropy_trace(spec, PiecewiseField::zeros(grid));
  {
    CsvWriter out(args.out / "entropy.csv", {"t", "controlled", "uncontrolled"});
    for (std::size_t k = 0; k < controlled.size(); ++k) {
      out.row(std::vector<double>{controlled[k].t, controlled[k].entropy,
                                  uncontrolled[k].entropy});
    }
  }
  {
    const auto spectrum = instantaneous_spectrum(spec, field);
    std::vector<std::string> header{"t"};
    for (std::size_t i = 0; i < spec.dim(); ++i) header.push_back("E" + std::to_string(i));
    CsvWriter out(args.out / "spectrum.csv", header);
    for (int k = 0; k < grid.steps; ++k) {
      std::vector<double> row{grid.midpoint(k)};
      const auto& e = spectrum[static_cast<std::size_t>(k)];
      row.insert(row.end(), e.begin(), e.end());
      out.row(row);
    }
  }
  double peak = 0.0;
  for (const auto& p : controlled) peak = std::max(peak, p.entropy);
  const GateEvaluation ev = evaluate_gate(spec, field, target);
  json report = envelope_of(cfg);
  report["final_controlled"] = controlled.back().entropy;
  report["final_uncontrolled"] = uncontrolled.back().entropy;
  report["peak_controlled"] = peak;
  report["fidelity"] = ev.fidelity;
  write_json(args.out / "entropy.json", report);

  log << "S_vN(t_f) controlled=" << format_double(controlled.back().entropy)
      << " uncontrolled=" << format_double(uncontrolled.back().entropy) << '\n';
  return kSuccess;
}

int cmd_ensemble(const CommandArgs& args, std::ostream& log) {
  const RunConfig& cfg = args.config;
  const SystemSpec base = cfg.system_spec();
  const TimeGrid grid = cfg.time_grid();
  const GateTarget target = cfg.gate();
  const PiecewiseField field = load_field(require_field(args, "ensemble"), grid);
  const EnsembleConfig ec = cfg.ensemble_config();
  std::optional<EnsembleReport> stored;
  if (args.samples) stored = read_samples(*args.samples, base.n);
  fs::create_directories(args.out);

  const GateEvaluation nominal = evaluate_gate(base, field, target);
  const EnsembleReport report = stored ? *stored : evaluate_ensemble(field, base, target, ec);

  std::vector<double> f, s;
  for (const auto& smp : report.samples) {
    f.push_back(smp.fidelity);
    s.push_back(smp.entropy);
  }
  {
    std::vector<std::string> header{"draw", "F", "S_vN"};
    for (auto& c : coupling_columns(base.n)) header.push_back(c);
    CsvWriter out(args.out / "samples.csv", header);
    for (const auto& smp : report.samples) {
      std::vector<std::string> cells{std::to_string(smp.draw), format_double(smp.fidelity),
                                     format_double(smp.entropy)};
      for (double g : smp.couplings) cells.push_back(format_double(g));
      out.row(cells);
    }
  }
  write_histogram(args.out / "hist_fidelity.csv", f, cfg.ensemble.bins);
  write_histogram(args.out / "hist_entropy.csv", s, cfg.ensemble.bins);

  const auto [f_lo, f_hi] = std::minmax_element(f.begin(), f.end());
  json doc = envelope_of(cfg);
  doc["size"] = report.samples.size();
  doc["nominal"] = {{"fidelity", nominal.fidelity}, {"entropy_final", nominal.entropy}};
  doc["fidelity"] = {{"mean", report.f_mean},
                     {"sd", report.f_sd},
                     {"relative_sd", report.f_sd / report.f_mean},
                     {"skewness", skewness(f)},
                     {"min", *f_lo},
                     {"max", *f_hi}};
  doc["entropy_final"] = {{"mean", report.s_mean},
                          {"sd", report.s_sd},
                          {"skewness", skewness(s)}};
  write_json(args.out / "ensemble.json", doc);

  log << "L=" << report.samples.size() << " F_mean=" << format_double(report.f_mean)
      << " F_sd=" << format_double(report.f_sd) << " S_mean=" << format_double(report.s_mean)
      << '\n';
  return kSuccess;
}

int cmd_check(const CommandArgs& args, std::ostream& log) {
  const RunConfig& cfg = args.config;
  const SystemSpec spec = cfg.system_spec();
  const TimeGrid grid = cfg.time_grid();
  const GateTarget target = cfg.gate();
  fs::create_directories(args.out);

  json checks = json::array();
  bool all = true;
  auto record = [&](const std::string& name, double value, double tolerance) {
    const bool pass = std::isfinite(value) && value <= tolerance;
    all = all && pass;
    checks.push_back({{"name", name}, {"value", value}, {"tolerance", tolerance}, {"pass", pass}});
    log << (pass ? "[ok]   " : "[FAIL] ") << name << " = " << format_double(value) << '\n';
  };

  const ComplexMatrix drift = build_drift(spec);
  const ComplexMatrix control = build_control_op(spec);
  record("drift_hermiticity", hermiticity_error(drift), 1e-12);
  record("control_hermiticity", hermiticity_error(control), 1e-12);
  record("target_unitarity", unitarity_error(target.g), 1e-12);

  const PiecewiseField field = initial_field(FieldInit::resonant, spec, grid);
  const auto traj = propagate(spec, field, true);
  record("propagator_unitarity", unitarity_error(traj.final()), 1e-10);

  const int half = grid.steps / 2;
  if (half > 0) {
    const TimeGrid g1{half * grid.dt(), half};
    const TimeGrid g2{(grid.steps - half) * grid.dt(), grid.steps - half};
    PiecewiseField f1{g1, {field.values.begin(), field.values.begin() + half}};
    PiecewiseField f2{g2, {field.values.begin() + half, field.values.end()}};
    const ComplexMatrix composed =
        propagate(spec, f2, false).final() * propagate(spec, f1, false).final();
    record("composition", (composed - traj.final()).cwiseAbs().maxCoeff(), 1e-10);
  }

  std::mt19937_64 rng(cfg.seed);
  const ComplexMatrix b_final = haar_unitary(static_cast<Eigen::Index>(spec.dim()), rng);
  const auto costate = propagate_costate(spec, field, b_final);
  const Complex pairing = (b_final * traj.final()).trace();
  double drift_pairing = 0.0;
  for (std::size_t k = 0; k < costate.size(); ++k) {
    drift_pairing = std::max(drift_pairing,
                             std::abs((costate[k] * traj.unitaries[k]).trace() - pairing));
  }
  record("costate_pairing", drift_pairing / std::max(1.0, std::abs(pairing)), 1e-8);

  double perfect = 0.0;
  if (spec.n > 0) {
    const auto env_dim = static_cast<Eigen::Index>(spec.dim() / 2);
    for (int trial = 0; trial < 10; ++trial) {
      const ComplexMatrix phi = haar_unitary(env_dim, rng);
      perfect = std::max(perfect, distance(kron(target.g, phi), target, spec.n).j);
    }
  } else {
    perfect = distance(target.g, target, 0).j;
  }
  record("perfect_gate_distance", perfect, 1e-10);

  const double s0 = von_neumann_entropy(reduced_density(initial_state(spec.n), spec.n));
  record("initial_entropy", std::abs(s0), 1e-12);

  const DistanceResult d = distance(traj.final(), target, spec.n);
  record("distance_range", std::max(0.0, std::max(-d.j, d.j - 1.0)), 0.0);

  json doc = envelope_of(cfg);
  doc["checks"] = checks;
  doc["all_pass"] = all;
  if (spec.n <= 2) {
    const LieClosure lc = controllability_dim(spec);
    doc["controllability"] = {{"dimension", lc.dimension},
                              {"depth", lc.depth},
                              {"completely_controllable", completely_controllable(lc, spec.n)}};
    log << "controllability dimension = " << lc.dimension << '\n';
  }
  write_json(args.out / "check.json", doc);
  return all ? kSuccess : kRuntimeFailure;
}

}  // namespace qgate::cli
