#include "carpa/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include <CLI11.hpp>

#include "carpa/analysis.hpp"
#include "carpa/driver.hpp"
#include "carpa/rng.hpp"

namespace carpa {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::string item;
  std::istringstream stream(text);
  while (std::getline(stream, item, ',')) items.push_back(item);
  return items;
}

std::string join_names(const std::vector<Method>& methods) {
  std::string out;
  for (size_t i = 0; i < methods.size(); ++i) {
    if (i > 0) out += ", ";
    out += method_name(methods[i]);
  }
  return out;
}

struct ArgError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<Method> parse_methods(const std::string& list,
                                  const std::vector<Method>& allowed) {
  std::vector<Method> out;
  for (const std::string& name : split_list(list)) {
    const auto tag = parse_method_name(name);
    if (!tag || std::find(allowed.begin(), allowed.end(), *tag) == allowed.end()) {
      throw ArgError("unknown method '" + name + "'; valid names: " +
                     join_names(allowed));
    }
    out.push_back(*tag);
  }
  if (out.empty()) throw ArgError("empty method list");
  return out;
}

std::vector<double> parse_tolerances(const std::string& list,
                                     std::vector<std::string>& labels) {
  std::vector<double> out;
  for (const std::string& tok : split_list(list)) {
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0' || !(v > 0.0)) {
      throw ArgError("unparsable tolerance '" + tok + "'");
    }
    out.push_back(v);
    labels.push_back(tok);
  }
  if (out.empty()) throw ArgError("empty tolerance list");
  return out;
}

std::string parameter_string(const MethodSpec& spec) {
  struct Visitor {
    std::string operator()(const MAP&) const { return ""; }
    std::string operator()(const SP&) const { return ""; }
    std::string operator()(const RAP& p) const { return "mu=" + fmt(p.mu); }
    std::string operator()(const PRAP& p) const { return "mu=" + fmt(p.mu); }
    std::string operator()(const GRAP& p) const {
      return "mu=" + fmt(p.mu) + ";alpha1=" + fmt(p.alpha1) + ";alpha2=" + fmt(p.alpha2);
    }
    std::string operator()(const AAMR& p) const {
      return "mu=" + fmt(p.mu) + ";beta=" + fmt(p.beta);
    }
    std::string operator()(const RAAR& p) const { return "mu=" + fmt(p.mu); }
    std::string operator()(const DRAP& p) const { return "mu=" + fmt(p.mu); }
    std::string operator()(const DR& p) const { return "mu=" + fmt(p.mu); }
    std::string operator()(const NSDR&) const { return ""; }
    std::string operator()(const CARPA& p) const {
      return "gamma=" + fmt(p.gamma) + ";mu=" + fmt(p.mu);
    }
    std::string operator()(const NSCARPA& p) const {
      return "gamma0=" + fmt(p.gamma0) + ";gamma_min=" + fmt(p.gamma_min) +
             ";gamma_max=" + fmt(p.gamma_max) + ";mu=" + fmt(p.mu) + ";c1=" + fmt(p.c1) +
             ";c2=" + fmt(p.c2) + ";delta=" + fmt(p.delta);
    }
  };
  return std::visit(Visitor{}, spec);
}

// The benchmark parameter sets: tangent-ball experiments relax nothing and
// use GRAP alpha = 0.4, nsCARPA c1 = 0.5; the sparse-recovery experiments use
// GRAP alpha = 0.75 and nsCARPA c1 = 0.9.
MethodSpec benchmark_spec(Method tag, double grap_alpha, double nscarpa_c1) {
  switch (tag) {
    case Method::Dr: return DR{1.0};
    case Method::NsDr: return NSDR{};
    case Method::Map: return MAP{};
    case Method::Grap: return GRAP{1.0, grap_alpha, grap_alpha};
    case Method::Carpa: return CARPA{0.5, 1.0};
    case Method::NsCarpa: {
      NSCARPA p;
      p.gamma0 = 0.5;
      p.gamma_min = 0.0;
      p.gamma_max = 1.0;
      p.mu = 1.0;
      p.c1 = nscarpa_c1;
      p.c2 = 50.0;
      p.delta = 0.01;
      return p;
    }
    default:
      throw ArgError("method " + method_name(tag) + " has no benchmark setting");
  }
}

const std::vector<Method> kRateMethods = {
    Method::Sp,   Method::Rap,  Method::Prap, Method::Grap, Method::Aamr,
    Method::Raar, Method::Drap, Method::Map,  Method::Dr,   Method::Carpa};

const std::vector<Method> kBenchMethods = {Method::Dr,    Method::NsDr,
                                           Method::Map,   Method::Grap,
                                           Method::Carpa, Method::NsCarpa};

// ---------------------------------------------------------------------------
// Subcommand bodies
// ---------------------------------------------------------------------------

void cmd_rates(std::ostream& os, double theta_p, long sweep) {
  if (sweep < 1) throw ArgError("--grid must be positive");
  if (!(theta_p > 0.0) || theta_p > M_PI_2 + 1e-15) {
    throw ArgError("--theta-p must lie in (0, pi/2]");
  }
  os << "theta_F,method,rate,params\n";
  for (long i = 1; i <= sweep; ++i) {
    const double theta_f =
        theta_p * static_cast<double>(i) / static_cast<double>(sweep);
    for (Method tag : kRateMethods) {
      const RatePrediction pred = optimal_rate(tag, theta_f, theta_p);
      os << fmt(theta_f) << ',' << method_name(tag) << ',' << fmt(pred.rate) << ','
         << parameter_string(pred.params) << '\n';
    }
  }
}

void cmd_subspace(std::ostream& os, double theta_f, double theta_p,
                  const std::vector<Method>& methods, double tol, long max_iters,
                  std::uint64_t seed) {
  const ProblemInstance inst = gen_experiment_subspaces(theta_f, theta_p, seed);
  const Vector z0 = inst.start_sampler(derive_seed(seed, 1));
  StopRule stop;
  stop.error_tol = tol;
  stop.max_iters = max_iters;

  os << "method,k,error,empirical_rate,theoretical_rate\n";
  for (Method tag : methods) {
    MethodSpec spec;
    if (tag == Method::NsDr || tag == Method::NsCarpa) {
      spec = benchmark_spec(tag, 0.4, 0.5);
    } else {
      spec = optimal_params(tag, theta_f, theta_p);
    }
    const RunRecord rec = run(spec, inst.x_set, inst.y_set, z0, stop, inst.known_solution);
    const std::string name = method_name(tag);
    for (size_t k = 0; k < rec.errors.size(); ++k) {
      os << name << ',' << k << ',' << fmt(rec.errors[k]) << ",,\n";
    }
    std::string fitted;
    try {
      fitted = fmt(empirical_rate(rec.errors));
    } catch (const InsufficientData&) {
      // leave blank when the run never enters the fit window
    }
    std::string theory;
    if (tag != Method::NsDr && tag != Method::NsCarpa) {
      theory = fmt(optimal_rate(tag, theta_f, theta_p).rate);
    }
    os << name << ",,," << fitted << ',' << theory << '\n';
  }
}

void cmd_ball_line(std::ostream& os, const std::vector<double>& tols,
                   const std::vector<std::string>& tol_labels, long trials,
                   long max_iters, std::uint64_t seed) {
  if (trials < 1) throw ArgError("--trials must be positive");
  if (max_iters < 1) throw ArgError("--max-iters must be positive");
  os << "tol,method,mean_iterations,hit_max_fraction\n";
  for (size_t t = 0; t < tols.size(); ++t) {
    StopRule stop;
    stop.residual_tol = tols[t];
    stop.max_iters = max_iters;
    for (Method tag : kBenchMethods) {
      const MethodSpec spec = benchmark_spec(tag, 0.4, 0.5);
      const AverageResult avg =
          average_iterations(gen_ball_line, spec, trials, stop, seed);
      os << tol_labels[t] << ',' << method_name(tag) << ',' << fmt(avg.mean) << ','
         << fmt(avg.hit_max_fraction) << '\n';
    }
  }
}

void cmd_cs(std::ostream& os, const std::string& preset,
            const std::vector<Method>& methods, double tol, std::uint64_t seed) {
  static const std::vector<std::string> kCsPresets = {"toy", "t4-1", "t4-2", "t4-3",
                                                      "t4-4"};
  if (std::find(kCsPresets.begin(), kCsPresets.end(), preset) == kCsPresets.end()) {
    throw ArgError("unknown preset '" + preset +
                   "'; valid presets: toy, t4-1, t4-2, t4-3, t4-4");
  }
  const ProblemInstance inst = *make_preset(preset, seed);
  const Vector z0 = inst.start_sampler(derive_seed(seed, 1));
  StopRule stop;
  stop.error_tol = tol;
  stop.max_iters = 10000;

  os << "method,k,error,support_size\n";
  for (Method tag : methods) {
    const MethodSpec spec = benchmark_spec(tag, 0.75, 0.9);
    std::vector<long> supports;
    RunOptions options;
    options.observer = [&](long /*k*/, const Vector& z) {
      supports.push_back(support_size(project(inst.y_set, z)));
    };
    const RunRecord rec =
        run(spec, inst.x_set, inst.y_set, z0, stop, inst.known_solution, options);
    const std::string name = method_name(tag);
    for (size_t k = 0; k < rec.errors.size(); ++k) {
      os << name << ',' << k << ',' << fmt(rec.errors[k]) << ',' << supports[k] << '\n';
    }
  }
}

void cmd_trajectory(std::ostream& os, const std::string& problem, Method tag,
                    long steps, std::uint64_t seed) {
  if (steps < 1) throw ArgError("--steps must be positive");
  if (problem != "subspace2d" && problem != "ball-line") {
    throw ArgError("unknown problem '" + problem +
                   "'; valid problems: subspace2d, ball-line");
  }
  // Two lines through the origin at angle 0.5.
  const double theta = 0.5;
  const auto make_two_lines = [theta] {
    Matrix qx(2, 1), qy(2, 1);
    qx << 1.0, 0.0;
    qy << std::cos(theta), std::sin(theta);
    return ProblemInstance{
        LinearSubspace(qx),
        LinearSubspace(qy),
        2,
        Vector(Vector::Zero(2)),
        [](std::uint64_t s) {
          Rng r(s);
          Vector v = r.normal_vector(2);
          return Vector(10.0 * v / v.norm());
        },
        "two-lines",
    };
  };

  ProblemInstance inst = problem == "subspace2d" ? make_two_lines() : gen_ball_line(seed);
  MethodSpec spec;
  if (problem == "subspace2d") {
    if (tag == Method::Carpa) {
      spec = CARPA{2.0 * std::cos(theta) * std::sin(theta), 1.0};
    } else if (tag == Method::NsDr || tag == Method::NsCarpa) {
      spec = benchmark_spec(tag, 0.4, 0.5);
    } else {
      spec = optimal_params(tag, theta, theta);
    }
  } else {
    if (tag == Method::Aamr) {
      spec = AAMR{1.0, 1.0};
    } else if (requires_subspaces(tag)) {
      throw ArgError("method " + method_name(tag) +
                     " needs two subspaces; use --problem subspace2d");
    } else {
      spec = benchmark_spec(tag, 0.4, 0.5);
    }
  }

  const Vector z0 = inst.start_sampler(derive_seed(seed, 1));
  StopRule stop;
  stop.residual_tol = std::numeric_limits<double>::denorm_min();
  stop.max_iters = steps;
  RunOptions options;
  options.record_trajectory = true;
  const RunRecord rec =
      run(spec, inst.x_set, inst.y_set, z0, stop, inst.known_solution, options);

  os << "k,z_1,z_2\n";
  for (size_t k = 0; k < rec.trajectory.size(); ++k) {
    os << k << ',' << fmt(rec.trajectory[k][0]) << ',' << fmt(rec.trajectory[k][1])
       << '\n';
  }
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Projection-method benchmarks for two-set convex feasibility"};
  app.require_subcommand(1);
  app.fallthrough(); // --out/--seed may follow the subcommand

  std::string out_path;
  std::uint64_t seed = 42;
  app.add_option("--out", out_path, "Write the CSV to this path instead of stdout")
      ->capture_default_str();
  app.add_option("--seed", seed, "PRNG seed")->capture_default_str();

  auto* rates = app.add_subcommand(
      "rates", "Optimal convergence rates swept over the Friedrichs angle");
  double rates_theta_p = M_PI_2;
  long rates_grid = 200;
  rates->add_option("--theta-p", rates_theta_p, "Largest principal angle (radians)")
      ->capture_default_str();
  rates->add_option("--grid", rates_grid, "Number of theta_F sweep points")
      ->capture_default_str();

  auto* subspace = app.add_subcommand(
      "subspace", "Per-iteration errors on the 100-dimensional two-subspace problem");
  double sub_theta_f = 0.4;
  double sub_theta_p = M_PI_2;
  std::string sub_methods = "MAP,DR,GRAP,AAMR,CARPA";
  double sub_tol = 1e-12;
  subspace->add_option("--theta-f", sub_theta_f, "Friedrichs angle (radians)")
      ->capture_default_str();
  subspace->add_option("--theta-p", sub_theta_p, "Largest principal angle (radians)")
      ->capture_default_str();
  subspace->add_option("--methods", sub_methods, "Comma-separated method names")
      ->capture_default_str();
  subspace->add_option("--tol", sub_tol, "Stopping tolerance on |z^k - z*|")
      ->capture_default_str();

  auto* ball = app.add_subcommand(
      "ball-line", "Averaged iteration counts on the tangent ball-line problem");
  std::string ball_tols = "1e-4,1e-6,1e-8,1e-10";
  long ball_trials = 10000;
  long ball_max_iters = 10000;
  ball->add_option("--tols", ball_tols, "Comma-separated residual tolerances")
      ->capture_default_str();
  ball->add_option("--trials", ball_trials, "Number of random starting points")
      ->capture_default_str();
  ball->add_option("--max-iters", ball_max_iters, "Iteration budget per trial")
      ->capture_default_str();

  auto* cs = app.add_subcommand(
      "cs", "Sparse-recovery feasibility runs with support tracking");
  std::string cs_preset;
  std::string cs_methods = "DR,nsDR,MAP,GRAP,CARPA,nsCARPA";
  double cs_tol = 1e-12;
  cs->add_option("--preset", cs_preset, "Instance preset: toy, t4-1 .. t4-4")
      ->required();
  cs->add_option("--methods", cs_methods, "Comma-separated method names")
      ->capture_default_str();
  cs->add_option("--tol", cs_tol, "Stopping tolerance on |z^k - x*|")
      ->capture_default_str();

  auto* traj = app.add_subcommand("trajectory", "2D iterate path of one method");
  std::string traj_problem = "subspace2d";
  std::string traj_method = "DR";
  long traj_steps = 60;
  traj->add_option("--problem", traj_problem, "subspace2d or ball-line")
      ->capture_default_str();
  traj->add_option("--method", traj_method, "Method name")->capture_default_str();
  traj->add_option("--steps", traj_steps, "Number of iterations to record")
      ->capture_default_str();

  std::vector<std::string> argv_storage;
  argv_storage.emplace_back("carpa");
  for (const auto& a : args) argv_storage.push_back(a);
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return 2;
  }

  std::ofstream file;
  std::ostream* os = &out;
  if (!out_path.empty()) {
    file.open(out_path, std::ios::binary);
    if (!file) {
      err << "cannot open output path: " << out_path << "\n";
      return 1;
    }
    os = &file;
  }

  try {
    if (rates->parsed()) {
      cmd_rates(*os, rates_theta_p, rates_grid);
    } else if (subspace->parsed()) {
      const auto methods = parse_methods(sub_methods, all_methods());
      cmd_subspace(*os, sub_theta_f, sub_theta_p, methods, sub_tol, 10000, seed);
    } else if (ball->parsed()) {
      std::vector<std::string> labels;
      const auto tols = parse_tolerances(ball_tols, labels);
      cmd_ball_line(*os, tols, labels, ball_trials, ball_max_iters, seed);
    } else if (cs->parsed()) {
      const auto methods = parse_methods(cs_methods, kBenchMethods);
      cmd_cs(*os, cs_preset, methods, cs_tol, seed);
    } else if (traj->parsed()) {
      const auto tag = parse_method_name(traj_method);
      if (!tag) {
        throw ArgError("unknown method '" + traj_method + "'; valid names: " +
                       join_names(all_methods()));
      }
      cmd_trajectory(*os, traj_problem, *tag, traj_steps, seed);
    }
  } catch (const ArgError& e) {
    err << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return 1;
  }
  return 0;
}

} // namespace carpa
