#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "output.hpp"
#include "qfcs/fcs.hpp"
#include "qfcs/model_io.hpp"
#include "qfcs/parallel.hpp"
#include "qfcs/rates.hpp"
#include "qfcs/vmodel.hpp"

namespace qfcs::cli {

void Tolerances::apply(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw std::invalid_argument("tolerance override needs KEY=VAL");
  const std::string key = assignment.substr(0, eq);
  auto it = values.find(key);
  if (it == values.end()) throw std::invalid_argument("unknown tolerance key '" + key + "'");
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(assignment.substr(eq + 1), &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != assignment.size() - eq - 1 || !(v > 0.0)) {
    throw std::invalid_argument("tolerance '" + key + "' needs a positive number");
  }
  it->second = v;
}

namespace {

struct Settings {
  std::string preset;
  std::string config;
  std::string method = "all";
  std::string out;
  std::string format = "csv";
  std::size_t jobs = 0;
  std::vector<std::string> tol_overrides;
  std::optional<double> nu, alpha, a, t_left, t_right;
  std::vector<double> deltas;

  // cgf
  std::size_t chi_points = 200;
  std::optional<double> chi_max;
  std::string bath;
  // transport / coherence
  double t_bar = 4.0;
  std::size_t alpha_points = 21;
  // crossover
  double cross_min = 1e-3, cross_max = 0.9;
  std::size_t cross_points = 31;
  // coherence
  double coh_min = 1e-3, coh_max = 0.3;
  std::size_t coh_points = 16;
  // tur
  double dt_min = 1e-3, dt_max = 3.9;
  std::size_t dt_points = 40;
  // generator
  double chi_re = 0.0, chi_im = 0.0;
  // selftest
  bool quick = false;
  bool fault = false;
};

// Model source resolved from --preset / --config and parameter overrides.
struct Source {
  std::optional<VParams> v;
  std::optional<ModelConfig> config;
  std::vector<std::pair<std::string, std::string>> params;

  OpenSystem system() const { return v ? v_system(*v) : build_open_system(*config); }
};

std::string num(double x) { return format_double(x); }

Source resolve_source(const Settings& s) {
  Source src;
  const bool overrides = s.nu || s.alpha || s.a || s.t_left || s.t_right || !s.deltas.empty();
  if (!s.preset.empty() == !s.config.empty()) {
    throw std::invalid_argument("give exactly one of --preset or --config");
  }
  if (!s.config.empty()) {
    if (overrides) throw std::invalid_argument("parameter overrides apply to presets only");
    src.config = read_model_config(s.config);
    src.params.push_back({"config", s.config});
    return src;
  }
  VParams p = find_preset(s.preset).params;
  if (s.nu) p.nu = *s.nu;
  if (s.alpha) p.alpha = *s.alpha;
  if (s.a) p.a = *s.a;
  if (s.t_left) p.t_left = *s.t_left;
  if (s.t_right) p.t_right = *s.t_right;
  if (!s.deltas.empty()) p.delta = s.deltas.front();
  p.validate();
  src.v = p;
  src.params = {{"preset", s.preset},      {"nu", num(p.nu)},         {"delta", num(p.delta)},
                {"alpha", num(p.alpha)},    {"a", num(p.a)},           {"t_left", num(p.t_left)},
                {"t_right", num(p.t_right)}};
  return src;
}

std::vector<Method> methods_for(const std::string& name) {
  if (name == "all") return {std::begin(kAllMethods), std::end(kAllMethods)};
  return {parse_method(name)};
}

const VParams& need_preset(const Source& src, const char* command) {
  if (!src.v) throw std::invalid_argument(std::string(command) + " sweeps V-model parameters and needs --preset");
  return *src.v;
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  if (n == 0) throw std::invalid_argument("grid needs at least one point");
  std::vector<double> out(n, lo);
  for (std::size_t i = 1; i < n; ++i) {
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return out;
}

std::vector<double> logspace(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0) || !(hi >= lo)) throw std::invalid_argument("log grid needs 0 < min <= max");
  auto e = linspace(std::log(lo), std::log(hi), n);
  for (auto& x : e) x = std::exp(x);
  if (n > 1) {
    e.front() = lo;
    e.back() = hi;
  }
  return e;
}

std::string element_label(const LevelPair& p, std::size_t levels) {
  if (levels < 10) return std::to_string(p.a + 1) + std::to_string(p.b + 1);
  return std::to_string(p.a + 1) + ":" + std::to_string(p.b + 1);
}

std::string branch_flag(const SymmetryPoint& p) {
  if (p.ambiguous && p.crossing) return "ambiguous|crossing";
  if (p.ambiguous) return "ambiguous";
  if (p.crossing) return "crossing";
  return "ok";
}

Report cmd_cgf(const Settings& s, const Source& src) {
  Report r{"cgf", s.method, src.params, {}};
  std::vector<std::optional<double>> deltas;
  if (src.v && s.deltas.size() > 1) {
    for (double d : s.deltas) deltas.push_back(d);
  } else {
    deltas.push_back(src.v ? std::optional<double>(src.v->delta) : std::nullopt);
  }
  r.params.push_back({"chi_points", std::to_string(s.chi_points)});
  if (s.chi_max) r.params.push_back({"chi_max", num(*s.chi_max)});
  for (const auto& delta : deltas) {
    std::optional<OpenSystem> system;
    if (delta) {
      VParams p = *src.v;
      p.delta = *delta;
      system.emplace(v_system(p));
    } else {
      system.emplace(src.system());
    }
    const std::size_t bath = s.bath.empty() ? 0 : system->model.bath_index(s.bath);
    const auto grid = s.chi_max ? linspace(0.0, *s.chi_max, s.chi_points)
                                : periodic_chi_grid(system->model, s.chi_points);
    for (Method m : methods_for(s.method)) {
      const auto rep = fluctuation_symmetry_scan(*system, m, grid, bath, s.jobs);
      Table t;
      t.label = "method=" + std::string(to_string(m)) + (delta ? ", delta=" + num(*delta) : "");
      t.columns = {"chi", "Re_G", "Im_G", "Re_G_shifted", "Im_G_shifted", "residual", "branch_flag"};
      for (const auto& p : rep.points) {
        t.rows.push_back({p.chi, p.g.real(), p.g.imag(), p.g_shifted.real(), p.g_shifted.imag(),
                          p.residual, branch_flag(p)});
      }
      r.blocks.push_back(std::move(t));
    }
  }
  return r;
}

Report cmd_transport(const Settings& s, const Source& src) {
  const VParams& base = need_preset(src, "transport");
  Report r{"transport", s.method, src.params, {}};
  r.params.push_back({"t_bar", num(s.t_bar)});
  r.params.push_back({"alpha_points", std::to_string(s.alpha_points)});
  const auto alphas = linspace(-1.0, 1.0, s.alpha_points);
  const auto methods = methods_for(s.method);
  struct Cell4 {
    RelationCheck gk, second;
  };
  std::vector<Cell4> cells(alphas.size() * methods.size());
  parallel_for(cells.size(), s.jobs, [&](std::size_t k) {
    VParams p = base;
    p.alpha = alphas[k / methods.size()];
    const auto system = v_system(p);
    const Method m = methods[k % methods.size()];
    cells[k] = {green_kubo_check(system, m, s.t_bar), second_order_check(system, m, s.t_bar)};
  });
  Table t;
  t.label = "delta=" + num(base.delta);
  t.columns = {"alpha", "method", "gk_lhs", "gk_rhs", "eq32_lhs", "eq32_rhs"};
  for (std::size_t k = 0; k < cells.size(); ++k) {
    t.rows.push_back({alphas[k / methods.size()], std::string(to_string(methods[k % methods.size()])),
                      cells[k].gk.lhs, cells[k].gk.rhs, cells[k].second.lhs, cells[k].second.rhs});
  }
  r.blocks.push_back(std::move(t));
  return r;
}

Report cmd_crossover(const Settings& s, const Source& src, const Tolerances& tol) {
  const VParams& base = need_preset(src, "crossover");
  Report r{"crossover", "all", src.params, {}};
  r.params.push_back({"delta_min", num(s.cross_min)});
  r.params.push_back({"delta_max", num(s.cross_max)});
  r.params.push_back({"delta_points", std::to_string(s.cross_points)});
  const auto rows = crossover_scan(base, logspace(s.cross_min, s.cross_max, s.cross_points), s.jobs);
  Table t;
  t.columns = {"delta", "J_redfield", "J_unified", "J_secular", "closest_method"};
  for (const auto& row : rows) {
    const auto c = classify_closeness(row.j_redfield, row.j_unified, row.j_secular, tol["closeness"]);
    t.rows.push_back({row.delta, row.j_redfield, row.j_unified, row.j_secular, std::string(to_string(c))});
  }
  r.blocks.push_back(std::move(t));
  return r;
}

Report cmd_coherence(const Settings& s, const Source& src) {
  const VParams& base = need_preset(src, "coherence");
  std::vector<Method> methods;
  if (s.method == "all") {
    methods = {Method::kRedfield, Method::kUnified};
  } else {
    methods = {parse_method(s.method)};
  }
  Report r{"coherence", s.method, src.params, {}};
  r.params.push_back({"alpha_points", std::to_string(s.alpha_points)});
  r.params.push_back({"delta_min", num(s.coh_min)});
  r.params.push_back({"delta_max", num(s.coh_max)});
  r.params.push_back({"delta_points", std::to_string(s.coh_points)});
  const auto rows = coherence_map(base, linspace(-1.0, 1.0, s.alpha_points),
                                  linspace(s.coh_min, s.coh_max, s.coh_points), methods, s.jobs);
  Table t;
  t.columns = {"alpha", "delta", "method", "re_rho23", "im_rho23"};
  for (const auto& row : rows) {
    t.rows.push_back({row.alpha, row.delta, std::string(to_string(row.method)), row.rho23.real(),
                      row.rho23.imag()});
  }
  r.blocks.push_back(std::move(t));
  return r;
}

Report cmd_tur(const Settings& s, const Source& src) {
  Report r{"tur", s.method, src.params, {}};
  r.params.push_back({"t_bar", num(s.t_bar)});
  r.params.push_back({"dt_min", num(s.dt_min)});
  r.params.push_back({"dt_max", num(s.dt_max)});
  r.params.push_back({"dt_points", std::to_string(s.dt_points)});
  const auto system = src.system();
  const auto grid = logspace(s.dt_min, s.dt_max, s.dt_points);
  Table t;
  t.columns = {"deltaT", "method", "mean_J", "var_J", "ratio"};
  Table limits;
  limits.label = "extrapolated deltaT -> 0";
  limits.columns = {"method", "ratio_limit"};
  for (Method m : methods_for(s.method)) {
    const auto scan = tur_scan(system, m, s.t_bar, grid, s.jobs);
    for (const auto& p : scan.points) {
      t.rows.push_back({p.delta_t, std::string(to_string(m)), p.mean, p.variance, p.ratio});
    }
    limits.rows.push_back({std::string(to_string(m)), scan.limit ? *scan.limit : std::nan("")});
  }
  r.blocks.push_back(std::move(t));
  r.blocks.push_back(std::move(limits));
  return r;
}

Report cmd_rates(const Settings&, const Source& src) {
  const auto system = src.system();
  const auto table = RateTable::for_partition(system.model.baths(), system.partition);
  Report r{"rates", "none", src.params, {}};
  Table t;
  t.columns = {"bath", "omega", "rate"};
  for (const auto& e : table.entries()) {
    t.rows.push_back({system.model.baths()[e.bath].id, e.omega, e.rate});
  }
  Table db;
  db.label = "detailed balance";
  db.columns = {"max_relative_residual"};
  db.rows.push_back({table.detailed_balance_residual()});
  r.blocks.push_back(std::move(t));
  r.blocks.push_back(std::move(db));
  return r;
}

CountingField generator_field(const Settings& s, const OpenSystem& system) {
  const std::size_t bath = s.bath.empty() ? 0 : system.model.bath_index(s.bath);
  return single_bath_field(system.model, bath, {s.chi_re, s.chi_im});
}

void write_generator_json(const Settings& s, const Source& src, std::ostream& out) {
  const auto system = src.system();
  const auto chi = generator_field(s, system);
  nlohmann::ordered_json doc;
  doc["schema_version"] = 1;
  doc["command"] = "generator";
  doc["params"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : src.params) doc["params"][k] = v;
  doc["chi"] = nlohmann::ordered_json::array();
  for (const auto& c : chi) doc["chi"].push_back({c.real(), c.imag()});
  doc["generators"] = nlohmann::ordered_json::array();
  for (Method m : methods_for(s.method)) {
    const auto g = build_generator(system, m, chi);
    nlohmann::ordered_json item;
    item["method"] = std::string(to_string(m));
    item["ordering"] = nlohmann::ordered_json::array();
    for (const auto& p : g.ordering.entries()) item["ordering"].push_back(element_label(p, g.ordering.levels()));
    item["matrix"] = nlohmann::ordered_json::array();
    for (Eigen::Index i = 0; i < g.matrix.rows(); ++i) {
      nlohmann::ordered_json row = nlohmann::ordered_json::array();
      for (Eigen::Index j = 0; j < g.matrix.cols(); ++j) {
        row.push_back({g.matrix(i, j).real(), g.matrix(i, j).imag()});
      }
      item["matrix"].push_back(std::move(row));
    }
    item["leakage"] = g.leakage;
    doc["generators"].push_back(std::move(item));
  }
  out << doc.dump(2) << '\n';
}

Report cmd_generator_csv(const Settings& s, const Source& src) {
  const auto system = src.system();
  const auto chi = generator_field(s, system);
  Report r{"generator", s.method, src.params, {}};
  r.params.push_back({"chi_re", num(s.chi_re)});
  r.params.push_back({"chi_im", num(s.chi_im)});
  for (Method m : methods_for(s.method)) {
    const auto g = build_generator(system, m, chi);
    Table t;
    t.label = "method=" + std::string(to_string(m));
    t.columns = {"row", "col", "re", "im"};
    const auto n = g.ordering.levels();
    for (Eigen::Index i = 0; i < g.matrix.rows(); ++i) {
      for (Eigen::Index j = 0; j < g.matrix.cols(); ++j) {
        t.rows.push_back({element_label(g.ordering[static_cast<std::size_t>(i)], n),
                          element_label(g.ordering[static_cast<std::size_t>(j)], n),
                          g.matrix(i, j).real(), g.matrix(i, j).imag()});
      }
    }
    r.blocks.push_back(std::move(t));
  }
  return r;
}

Report cmd_steady_state(const Settings& s, const Source& src) {
  const auto system = src.system();
  Report r{"steady-state", s.method, src.params, {}};
  for (Method m : methods_for(s.method)) {
    const auto rho = steady_state(system, m);
    Table t;
    t.label = "method=" + std::string(to_string(m));
    t.columns = {"element", "re", "im"};
    for (std::size_t k = 0; k < system.basis.size(); ++k) {
      const auto v = rho(static_cast<Eigen::Index>(k));
      t.rows.push_back({element_label(system.basis[k], system.basis.levels()), v.real(), v.imag()});
    }
    r.blocks.push_back(std::move(t));
  }
  return r;
}

void emit(const Settings& s, const std::function<void(std::ostream&)>& writer, std::ostream& out) {
  if (s.out.empty()) {
    writer(out);
    return;
  }
  std::ofstream file(s.out, std::ios::binary);
  if (!file) throw std::invalid_argument("cannot open output file '" + s.out + "'");
  writer(file);
  if (!file) throw std::runtime_error("failed writing '" + s.out + "'");
}

void emit_report(const Settings& s, const Report& r, std::ostream& out) {
  emit(s, [&](std::ostream& o) { s.format == "json" ? write_json(r, o) : write_csv(r, o); }, out);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Settings s;
  CLI::App app{"Heat-current statistics for open quantum systems", "qfcs"};
  app.require_subcommand(1);

  auto* preset = app.add_option("--preset", s.preset, "V-model preset (fig2, fig4a, fig4b, fig5, fig6, fig7a, fig7b)");
  auto* config = app.add_option("--config", s.config, "JSON model file");
  preset->excludes(config);
  app.add_option("--method", s.method, "unified|secular|redfield|all")
      ->check(CLI::IsMember({"unified", "secular", "redfield", "all"}));
  app.add_option("--out", s.out, "output file (default stdout)");
  app.add_option("--format", s.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--jobs", s.jobs, "worker threads (0 = all cores)")->envname("QFCS_JOBS");
  app.add_option("--tol-override", s.tol_overrides, "KEY=VAL tolerance override")->take_all();
  app.add_option("--nu", s.nu, "excited-level energy");
  app.add_option("--delta", s.deltas, "excited-level splitting (cgf accepts several)")->delimiter(',');
  app.add_option("--alpha", s.alpha, "R-bath coupling asymmetry");
  app.add_option("--ohmic-a", s.a, "Ohmic coefficient for both baths");
  app.add_option("--t-left", s.t_left, "L-bath temperature");
  app.add_option("--t-right", s.t_right, "R-bath temperature");

  auto* cgf = app.add_subcommand("cgf", "CGF and its shifted counterpart along a chi grid");
  cgf->add_option("--chi-points", s.chi_points, "grid size")->check(CLI::PositiveNumber);
  cgf->add_option("--chi-max", s.chi_max, "grid end (default 2 pi / max Bohr frequency)");
  cgf->add_option("--bath", s.bath, "counted bath id (default: first bath)");

  auto* transport = app.add_subcommand("transport", "linear-response transport relations over alpha");
  transport->add_option("--t-bar", s.t_bar, "equilibrium temperature");
  transport->add_option("--alpha-points", s.alpha_points, "alpha grid size on [-1, 1]")->check(CLI::PositiveNumber);

  auto* crossover = app.add_subcommand("crossover", "mean current per method over delta");
  crossover->add_option("--delta-min", s.cross_min);
  crossover->add_option("--delta-max", s.cross_max);
  crossover->add_option("--delta-points", s.cross_points)->check(CLI::PositiveNumber);

  auto* coherence = app.add_subcommand("coherence", "steady-state rho_23 over alpha and delta");
  coherence->add_option("--alpha-points", s.alpha_points)->check(CLI::PositiveNumber);
  coherence->add_option("--delta-min", s.coh_min);
  coherence->add_option("--delta-max", s.coh_max);
  coherence->add_option("--delta-points", s.coh_points)->check(CLI::PositiveNumber);

  auto* tur = app.add_subcommand("tur", "TUR ratio over deltaT at fixed mean temperature");
  tur->add_option("--t-bar", s.t_bar);
  tur->add_option("--dt-min", s.dt_min);
  tur->add_option("--dt-max", s.dt_max);
  tur->add_option("--dt-points", s.dt_points)->check(CLI::PositiveNumber);

  auto* rates = app.add_subcommand("rates", "golden-rule rate table");
  auto* generator = app.add_subcommand("generator", "dump L(chi)");
  generator->add_option("--chi", s.chi_re, "real part of chi");
  generator->add_option("--chi-imag", s.chi_im, "imaginary part of chi");
  generator->add_option("--bath", s.bath, "counted bath id (default: first bath)");
  auto* steady = app.add_subcommand("steady-state", "kernel of L(0)");
  auto* selftest = app.add_subcommand("selftest", "invariant suite");
  selftest->add_flag("--quick", s.quick, "reduced suite");
  selftest->add_flag("--inject-fault", s.fault, "corrupt one closed-form entry");

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    std::vector<std::string> args;
    for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kInvalidConfig;
  }

  try {
    Tolerances tol;
    for (const auto& t : s.tol_overrides) tol.apply(t);
    if (selftest->parsed()) return run_selftest(s.quick, s.fault, tol, out);

    const Source src = resolve_source(s);
    if (!cgf->parsed() && s.deltas.size() > 1) {
      throw std::invalid_argument("only cgf accepts several --delta values");
    }
    if (cgf->parsed()) emit_report(s, cmd_cgf(s, src), out);
    if (transport->parsed()) emit_report(s, cmd_transport(s, src), out);
    if (crossover->parsed()) emit_report(s, cmd_crossover(s, src, tol), out);
    if (coherence->parsed()) emit_report(s, cmd_coherence(s, src), out);
    if (tur->parsed()) emit_report(s, cmd_tur(s, src), out);
    if (rates->parsed()) emit_report(s, cmd_rates(s, src), out);
    if (steady->parsed()) emit_report(s, cmd_steady_state(s, src), out);
    if (generator->parsed()) {
      if (s.format == "json") {
        emit(s, [&](std::ostream& o) { write_generator_json(s, src, o); }, out);
      } else {
        emit_report(s, cmd_generator_csv(s, src), out);
      }
    }
    return kOk;
  } catch (const SolverError& e) {
    err << "solver failure: " << e.what() << '\n';
    return kSolverFailure;
  } catch (const std::invalid_argument& e) {
    err << "invalid configuration: " << e.what() << '\n';
    return kInvalidConfig;
  } catch (const std::domain_error& e) {
    err << "invalid configuration: " << e.what() << '\n';
    return kInvalidConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kSolverFailure;
  }
}

}  // namespace qfcs::cli
