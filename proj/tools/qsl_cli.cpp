#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qsl/bounds.hpp"
#include "qsl/optimize.hpp"
#include "qsl/random.hpp"
#include "qsl/scenarios.hpp"
#include "qsl/selftest.hpp"
#include "qsl/spectral.hpp"

namespace {

using json = nlohmann::json;

struct CliError : std::runtime_error {  // exit code 2
  using std::runtime_error::runtime_error;
};

std::string fmt12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

struct Record {
  std::string scenario;
  std::string axis;
  double axis_value = 0.0;
  std::string bound;
  double value = 0.0;
  std::string p;        // empty when not applicable
  std::string w_index;  // empty when not applicable
  std::string basis;
  double numerator = 0.0;
  double denominator = 0.0;
  bool degenerate = false;
  double wall_ms = 0.0;
};

const char* kCsvHeader =
    "scenario,axis,axis_value,bound,value,p,w_index,basis,numerator,"
    "denominator,degenerate,wall_time_ms";

std::string to_csv(const Record& r) {
  std::ostringstream os;
  os << r.scenario << ',' << r.axis << ',' << fmt12(r.axis_value) << ','
     << r.bound << ',' << fmt12(r.value) << ',' << r.p << ',' << r.w_index
     << ',' << r.basis << ',' << fmt12(r.numerator) << ','
     << fmt12(r.denominator) << ',' << (r.degenerate ? 1 : 0) << ','
     << fmt12(r.wall_ms);
  return os.str();
}

json to_json(const Record& r) {
  json j;
  j["scenario"] = r.scenario;
  j["axis"] = r.axis;
  j["axis_value"] = r.axis_value;
  j["bound"] = r.bound;
  j["value"] = r.value;
  if (!r.p.empty()) j["p"] = std::stod(r.p);
  if (!r.w_index.empty()) j["w_index"] = std::stoi(r.w_index);
  j["basis"] = r.basis;
  j["numerator"] = r.numerator;
  j["denominator"] = r.denominator;
  j["degenerate"] = r.degenerate;
  j["wall_time_ms"] = r.wall_ms;
  return j;
}

struct Options {
  std::string scenario;
  std::vector<std::string> params;
  std::optional<double> tau;
  std::vector<std::string> bounds;
  double p = 2.0;
  int w_index = 0;  // 0 = all-ones default (n²)
  std::string basis = "canonical";
  int grid_points = 512;
  std::uint64_t seed = 0;
  int jobs = 0;
  std::string format = "csv";
  std::string out;
  std::string config;
  bool timing = false;
  // sweep only
  std::string axis;
  std::string values;
  // optimize only
  int basis_samples = 100;
  int hillclimb_iters = 6000;
};

std::map<std::string, double> collect_params(const Options& opt) {
  std::map<std::string, double> params;
  if (!opt.config.empty()) params = qsl::parse_config_file(opt.config);
  for (const auto& kv : opt.params) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw CliError("--param expects key=value, got '" + kv + "'");
    try {
      params[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
    } catch (const std::exception&) {
      throw CliError("--param: cannot parse number in '" + kv + "'");
    }
  }
  if (opt.tau) params["tau"] = *opt.tau;
  return params;
}

qsl::Matrix basis_from_file(const std::string& path, int n) {
  std::ifstream in(path);
  if (!in) throw CliError("cannot open basis file: " + path);
  std::vector<double> nums;
  double v;
  while (in >> v) nums.push_back(v);
  if (static_cast<int>(nums.size()) != 2 * n * n)
    throw CliError("basis file must hold " + std::to_string(2 * n * n) +
                   " reals (re im pairs, row-major) for dimension " +
                   std::to_string(n));
  qsl::Matrix u(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      u(i, j) = qsl::Complex(nums[2 * (i * n + j)], nums[2 * (i * n + j) + 1]);
  if (!qsl::is_unitary(u)) throw CliError("basis file matrix is not unitary");
  return u;
}

qsl::Matrix resolve_basis(const std::string& selector, const qsl::Scenario& sc) {
  const int n = sc.trajectory.dim();
  if (selector == "canonical") return qsl::Matrix::Identity(n, n);
  if (selector == "energy") {
    // H = 0 (pure dissipation): every basis is an energy basis; use canonical.
    if (!sc.trajectory.generator.hamiltonian) return qsl::Matrix::Identity(n, n);
    return qsl::hermitian_eig(sc.trajectory.generator.hamiltonian(0.0)).second;
  }
  if (selector == "delta_diag") {
    const qsl::Matrix delta =
        sc.trajectory.samples.back() - sc.trajectory.samples.front();
    return qsl::hermitian_eig(0.5 * (delta + delta.adjoint())).second;
  }
  if (selector.rfind("haar:", 0) == 0) {
    try {
      return qsl::haar_unitary(n, std::stoull(selector.substr(5)));
    } catch (const std::exception&) {
      throw CliError("basis 'haar:SEED': cannot parse seed");
    }
  }
  if (selector.rfind("file:", 0) == 0)
    return basis_from_file(selector.substr(5), n);
  throw CliError("unknown basis selector: " + selector);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

std::vector<double> parse_values(const std::string& spec) {
  std::vector<double> out;
  const auto colon = split(spec, ':');
  try {
    if (colon.size() == 3) {
      const double start = std::stod(colon[0]);
      const double stop = std::stod(colon[1]);
      const int count = std::stoi(colon[2]);
      if (count < 1) throw CliError("--values: count must be >= 1");
      for (int k = 0; k < count; ++k)
        out.push_back(count == 1 ? start
                                 : start + (stop - start) * k / (count - 1));
      return out;
    }
    for (const auto& tok : split(spec, ',')) out.push_back(std::stod(tok));
  } catch (const CliError&) {
    throw;
  } catch (const std::exception&) {
    throw CliError("--values: cannot parse '" + spec + "'");
  }
  if (out.empty()) throw CliError("--values: empty list");
  for (double x : out)
    if (!std::isfinite(x)) throw CliError("--values: non-finite entry");
  return out;
}

/// Evaluates one named bound on a built scenario.
std::vector<Record> evaluate_bound(const qsl::Scenario& sc,
                                   const std::string& bound,
                                   const Options& opt) {
  const auto& traj = sc.trajectory;
  const int n2 = traj.dim() * traj.dim();
  const int w_index = opt.w_index == 0 ? n2 : opt.w_index;
  if (w_index < 1 || w_index > n2)
    throw CliError("--w-index must be in 1.." + std::to_string(n2));
  const bool open_system = !traj.generator.jumps.empty();
  const bool state_traj =
      traj.generator.picture == qsl::Picture::schrodinger;

  Record rec;
  rec.scenario = qsl::scenario_name(sc.id);
  rec.bound = bound;
  rec.basis = opt.basis;

  const auto t0 = std::chrono::steady_clock::now();
  if (bound == "int" || bound == "sup") {
    const qsl::BoundSpec spec{opt.p,
                              qsl::WeightVector::indicator(n2, w_index),
                              resolve_basis(opt.basis, sc),
                              bound == "int" ? qsl::BoundForm::integral
                                             : qsl::BoundForm::supremum};
    const auto res = qsl::qsl_bound(traj, spec);
    rec.value = res.value;
    rec.numerator = res.numerator;
    rec.denominator = res.denominator;
    rec.degenerate = res.degenerate;
    rec.p = fmt12(opt.p);
    rec.w_index = std::to_string(w_index);
  } else if (bound == "opt_int" || bound == "opt_sup") {
    qsl::OptimizeConfig cfg;
    cfg.seed = opt.seed;
    cfg.basis_samples = opt.basis_samples;
    cfg.hillclimb_iters = opt.hillclimb_iters;
    cfg.target_form = bound == "opt_int" ? qsl::BoundForm::integral
                                         : qsl::BoundForm::supremum;
    const auto rep = qsl::optimize_full(traj, cfg);
    rec.value = rep.best_value;
    rec.p = fmt12(rep.best_p);
    rec.w_index = std::to_string(rep.best_w_index);
    rec.basis = "optimized";
  } else if (bound == "mt") {
    if (!state_traj || !traj.generator.hamiltonian)
      throw CliError("bound 'mt' needs a state trajectory with a Hamiltonian");
    rec.value = qsl::mt_bound_closed(traj, traj.generator.hamiltonian);
  } else if (bound == "dl" || bound == "mt_open") {
    if (!state_traj || !open_system)
      throw CliError("bound '" + bound + "' needs an open-system state trajectory");
    const auto dl = qsl::dl_bound(traj);
    rec.value = bound == "dl" ? dl.value : dl.mt_open;
    if (bound == "dl") rec.basis = dl.winning_norm;
  } else if (bound == "tq") {
    if (traj.generator.picture != qsl::Picture::heisenberg)
      throw CliError("bound 'tq' needs a Heisenberg-picture trajectory");
    rec.value = qsl::t_q_bound(traj, sc.initial);
  } else if (bound == "tc") {
    if (sc.coherence_observable.size() == 0)
      throw CliError("bound 'tc' needs a scenario with a coherence observable");
    rec.value = qsl::t_c_bound(traj, sc.coherence_observable);
  } else {
    throw CliError("unknown bound: " + bound);
  }
  if (opt.timing)
    rec.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
  return {rec};
}

std::vector<Record> evaluate_point(Options opt, const std::string& axis,
                                   double axis_value) {
  auto params = collect_params(opt);
  if (!axis.empty()) params[axis] = axis_value;
  qsl::ScenarioConfig cfg;
  cfg.id = qsl::scenario_from_name(opt.scenario);
  cfg.params = params;
  cfg.grid_points = opt.grid_points;
  cfg.seed = opt.seed;
  const qsl::Scenario sc = qsl::build_scenario(cfg);
  std::vector<Record> out;
  for (const auto& b : opt.bounds) {
    auto recs = evaluate_bound(sc, b, opt);
    for (auto& r : recs) {
      r.axis = axis.empty() ? "tau" : axis;
      r.axis_value = axis.empty() ? params.at("tau") : axis_value;
      out.push_back(std::move(r));
    }
  }
  return out;
}

void emit(const Options& opt, const std::vector<Record>& records) {
  std::ostream* os = &std::cout;
  std::ofstream file;
  if (!opt.out.empty()) {
    file.open(opt.out);
    if (!file) throw CliError("cannot open output file: " + opt.out);
    os = &file;
  }
  if (opt.format == "csv") {
    *os << "# seed=" << opt.seed << "\n" << kCsvHeader << "\n";
    for (const auto& r : records) *os << to_csv(r) << "\n";
  } else if (opt.format == "jsonl") {
    for (const auto& r : records) {
      json j = to_json(r);
      j["seed"] = opt.seed;
      *os << j.dump() << "\n";
    }
  } else {
    throw CliError("unknown format: " + opt.format);
  }
}

void validate_common(const Options& opt) {
  if (opt.scenario.empty()) throw CliError("--scenario is required");
  if (opt.bounds.empty()) throw CliError("--bounds must name at least one bound");
  if (opt.p < 1.0) throw CliError("--p must be >= 1");
  if (opt.grid_points < 64) throw CliError("--grid-points must be >= 64");
}

int cmd_run(const Options& opt) {
  validate_common(opt);
  emit(opt, evaluate_point(opt, "", 0.0));
  return 0;
}

int cmd_sweep(const Options& opt) {
  validate_common(opt);
  if (opt.axis.empty()) throw CliError("--axis is required for sweep");
  const std::vector<double> values = parse_values(opt.values);

  std::vector<std::vector<Record>> results(values.size());
  std::vector<std::string> errors(values.size());
  std::atomic<size_t> next{0};
  std::atomic<bool> numerical_failure{false};
  const unsigned hw = std::thread::hardware_concurrency();
  const size_t workers =
      std::min(values.size(),
               size_t(opt.jobs > 0 ? opt.jobs : (hw ? hw : 1)));
  auto work = [&]() {
    for (size_t i = next.fetch_add(1); i < values.size();
         i = next.fetch_add(1)) {
      try {
        results[i] = evaluate_point(opt, opt.axis, values[i]);
      } catch (const std::exception& e) {
        errors[i] = e.what();
        numerical_failure = true;
      }
    }
  };
  std::vector<std::thread> pool;
  for (size_t w = 0; w + 1 < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  for (size_t i = 0; i < values.size(); ++i)
    if (!errors[i].empty()) {
      std::cerr << "error: " << opt.axis << "=" << fmt12(values[i]) << ": "
                << errors[i] << "\n";
      return 3;
    }
  (void)numerical_failure;
  std::vector<Record> flat;
  for (auto& r : results)
    for (auto& rec : r) flat.push_back(std::move(rec));
  emit(opt, flat);
  return 0;
}

int cmd_optimize(Options opt) {
  if (opt.bounds.empty()) opt.bounds = {"opt_int"};
  for (const auto& b : opt.bounds)
    if (b != "opt_int" && b != "opt_sup")
      throw CliError("optimize accepts bounds opt_int and opt_sup only");
  validate_common(opt);
  emit(opt, evaluate_point(opt, "", 0.0));
  return 0;
}

int cmd_selftest() {
  const auto results = qsl::run_selftests();
  int failures = 0;
  for (const auto& r : results) {
    std::cout << (r.passed ? "[PASS] " : "[FAIL] ") << r.name;
    if (!r.passed && !r.detail.empty()) std::cout << " — " << r.detail;
    std::cout << "\n";
    failures += r.passed ? 0 : 1;
  }
  std::cout << results.size() - failures << "/" << results.size()
            << " checks passed\n";
  return failures == 0 ? 0 : 1;
}

void add_common_flags(CLI::App* cmd, Options& opt, bool with_spec_flags) {
  cmd->add_option("--scenario", opt.scenario,
                  "qubit_ti|qudit4|spont_emission|nv_center|dephasing|"
                  "coherence_gen");
  cmd->add_option("--param", opt.params, "scenario parameter key=value")
      ->take_all();
  cmd->add_option("--tau", opt.tau, "total evolution time");
  cmd->add_option("--bounds", opt.bounds,
                  "comma list from int,sup,opt_int,opt_sup,mt,dl,mt_open,tq,tc")
      ->delimiter(',');
  if (with_spec_flags) {
    cmd->add_option("--p", opt.p, "exponent in [1, inf)");
    cmd->add_option("--w-index", opt.w_index,
                    "j for w = indicator(j); default n^2 (all ones)");
    cmd->add_option("--basis", opt.basis,
                    "canonical|energy|delta_diag|haar:SEED|file:PATH");
  }
  cmd->add_option("--grid-points", opt.grid_points, "trajectory grid intervals");
  cmd->add_option("--seed", opt.seed, "RNG seed, echoed in output");
  cmd->add_option("--jobs", opt.jobs, "worker threads (default: cores)");
  cmd->add_option("--format", opt.format, "csv|jsonl");
  cmd->add_option("--out", opt.out, "output path (default: stdout)");
  cmd->add_option("--config", opt.config, "key = value parameter file");
  cmd->add_flag("--timing", opt.timing, "record wall times (breaks byte determinism)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantum speed limit bound toolkit"};
  app.require_subcommand(1);
  Options opt;

  CLI::App* run = app.add_subcommand("run", "evaluate bounds at one point");
  add_common_flags(run, opt, true);

  CLI::App* sweep = app.add_subcommand("sweep", "sweep one parameter axis");
  add_common_flags(sweep, opt, true);
  sweep->add_option("--axis", opt.axis, "parameter key to sweep");
  sweep->add_option("--values", opt.values,
                    "start:stop:count grid or comma list");

  CLI::App* optimize =
      app.add_subcommand("optimize", "maximize the bound over (p, w, basis)");
  add_common_flags(optimize, opt, false);
  optimize->add_option("--basis-samples", opt.basis_samples,
                       "Monte Carlo basis budget");
  optimize->add_option("--hillclimb-iters", opt.hillclimb_iters,
                       "hill-climb iteration cap");

  CLI::App* selftest =
      app.add_subcommand("selftest", "run the built-in invariant suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (run->parsed()) return cmd_run(opt);
    if (sweep->parsed()) return cmd_sweep(opt);
    if (optimize->parsed()) return cmd_optimize(opt);
    if (selftest->parsed()) return cmd_selftest();
  } catch (const CliError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
