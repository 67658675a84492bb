// Acceptance suite: exercises every advertised guarantee end to end and
// prints one pass/fail line per criterion.

#include <Eigen/Eigenvalues>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "carpa/analysis.hpp"
#include "carpa/cli.hpp"
#include "carpa/driver.hpp"
#include "carpa/rng.hpp"

using namespace carpa;

namespace {

struct Check {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

std::string csv_from_cli(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(args, out, err);
  if (code != 0) {
    throw Error("cli exited with code " + std::to_string(code) + ": " + err.str());
  }
  return out.str();
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream stream(text);
  std::string line;
  while (std::getline(stream, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    rows.push_back(std::move(cells));
  }
  return rows;
}

double modulus_by_eigensolver(double gamma, double mu, double s2) {
  const double c2 = 1.0 - s2;
  const double c = std::sqrt(c2);
  const double s = std::sqrt(s2);
  Matrix n(2, 2);
  n << 1.0 - mu + mu * c2, -mu * c * s, mu * c * s, 1.0 - mu - mu * gamma + mu * c2;
  const Eigen::EigenSolver<Matrix> solver(n);
  return std::max(std::abs(solver.eigenvalues()[0]), std::abs(solver.eigenvalues()[1]));
}

// --------------------------------------------------------------------------
// 1. CARPA modulus formula vs direct eigenvalue computation
// --------------------------------------------------------------------------
Check criterion1() {
  Check c;
  const auto start = std::chrono::steady_clock::now();
  long defective = 0;
  for (double gamma = 0.0; gamma < 0.95; gamma += 0.1) {
    for (double mu = 0.2; mu < 2.0 / (1.0 + gamma) - 1e-9; mu += 0.2) {
      for (double s2 = 0.05; s2 <= 1.0 + 1e-12; s2 += 0.05) {
        const double s2c = std::min(s2, 1.0);
        const double fast = carpa_modulus(gamma, mu, s2c);
        const double direct = modulus_by_eigensolver(gamma, mu, s2c);
        const double disc = gamma * gamma - 4.0 * s2c + 4.0 * s2c * s2c;
        // At an exact discriminant zero the double root is Hoelder-1/2
        // conditioned; sqrt(ulp) is the best two routes can agree to.
        double tol = 1e-12;
        if (std::abs(disc) < 1e-8) {
          tol = 1e-7;
          ++defective;
        }
        c.require(std::abs(fast - direct) < tol,
                  "modulus mismatch at gamma=" + std::to_string(gamma) +
                      " mu=" + std::to_string(mu) + " s2=" + std::to_string(s2c) +
                      " |diff|=" + std::to_string(std::abs(fast - direct)));
      }
    }
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  c.require(seconds < 1.0, "grid sweep took " + std::to_string(seconds) + " s");
  c.require(defective >= 4, "expected the grid to contain the defective points");
  return c;
}

// --------------------------------------------------------------------------
// 2. rates subcommand vs the closed forms at theta_p = pi/2
// --------------------------------------------------------------------------
Check criterion2() {
  Check c;
  const long sweep = 50;
  const long carpa_grid = 100000; // optimal_rate default inside the CLI
  const auto rows = parse_csv(csv_from_cli(
      {"rates", "--theta-p", "1.5707963267948966", "--grid", std::to_string(sweep)}));
  c.require(rows.size() == 1 + static_cast<size_t>(sweep) * 10, "row count");
  for (size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const double tf = std::stod(row[0]);
    const double rate = std::stod(row[2]);
    const double sf = std::sin(tf);
    const double cf = std::cos(tf);
    const std::string& m = row[1];
    double expected = -1.0;
    if (m == "SP") expected = (1.0 + cf) / 2.0;
    else if (m == "RAP") expected = (1.0 - sf * sf) / (1.0 + sf * sf);
    else if (m == "PRAP") expected = (1.0 - sf * sf) / (1.0 + sf * sf);
    else if (m == "GRAP" || m == "AAMR") expected = (1.0 - sf) / (1.0 + sf);
    else if (m == "RAAR") expected = cf / std::sqrt(1.0 + 2.0 * cf * sf);
    else if (m == "DRAP") expected = 1.0 - sf;
    else if (m == "MAP") expected = cf * cf;
    else if (m == "DR") expected = cf;
    if (expected >= 0.0) {
      c.require(std::abs(rate - expected) <= 1e-12,
                m + " at theta_F=" + row[0] + ": " + row[2] + " vs closed form " +
                    std::to_string(expected));
    } else if (m == "CARPA") {
      // closed form applies where case 1 verifiably governs the oracle
      const double gamma_f = 2.0 * cf * sf;
      if (gamma_f < 1.0) {
        const double boundary =
            (1.0 + std::sqrt(std::max(1.0 - gamma_f * gamma_f, 0.0))) / 2.0;
        const double mod_f = modulus_by_eigensolver(gamma_f, 1.0, sf * sf);
        const double mod_p = modulus_by_eigensolver(gamma_f, 1.0, 1.0);
        if (sf * sf <= boundary + 1e-12 && mod_p <= mod_f + 1e-9) {
          const double formula = cf * cf - cf * sf;
          c.require(std::abs(rate - formula) <= 2.0 / carpa_grid,
                    "CARPA at theta_F=" + row[0] + ": " + row[2] +
                        " vs case-1 form " + std::to_string(formula));
        }
      }
      c.require(rate >= 0.0 && rate < 1.0, "CARPA rate in [0, 1)");
    }
  }
  return c;
}

// --------------------------------------------------------------------------
// 3. Subspace benchmark: fitted rates match theory, AAMR/GRAP fastest
// --------------------------------------------------------------------------
Check criterion3() {
  Check c;
  const auto start = std::chrono::steady_clock::now();
  for (double tf : {0.1, 0.4, 0.7, 1.0}) {
    const auto rows = parse_csv(csv_from_cli(
        {"subspace", "--theta-f", std::to_string(tf), "--theta-p",
         "1.5707963267948966", "--methods", "MAP,DR,GRAP,AAMR,CARPA", "--tol",
         "1e-12", "--seed", "42"}));
    std::map<std::string, double> fitted;
    std::map<std::string, double> theory;
    for (size_t r = 1; r < rows.size(); ++r) {
      const auto& row = rows[r];
      if (row.size() == 5 && row[1].empty()) {
        fitted[row[0]] = std::stod(row[3]);
        theory[row[0]] = std::stod(row[4]);
      }
    }
    c.require(fitted.size() == 5, "summary rows missing at theta_F=" + std::to_string(tf));
    for (const auto& [name, emp] : fitted) {
      c.require(std::abs(emp - theory[name]) <= 0.02,
                name + " at theta_F=" + std::to_string(tf) + ": fitted " +
                    std::to_string(emp) + " vs theory " + std::to_string(theory[name]));
    }
    const double fastest_pair = std::max(fitted["AAMR"], fitted["GRAP"]);
    for (const std::string other : {"MAP", "DR", "CARPA"}) {
      c.require(fastest_pair <= fitted[other] + 1e-9,
                "AAMR/GRAP not fastest at theta_F=" + std::to_string(tf) + " (" +
                    other + " fitted " + std::to_string(fitted[other]) + ")");
    }
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  c.require(seconds < 30.0, "panels took " + std::to_string(seconds) + " s");
  return c;
}

// --------------------------------------------------------------------------
// 4. Tangent ball-line iteration counts against the reference table
// --------------------------------------------------------------------------
Check criterion4() {
  Check c;
  const auto start = std::chrono::steady_clock::now();
  const auto rows = parse_csv(csv_from_cli(
      {"ball-line", "--tols", "1e-4,1e-6,1e-8,1e-10", "--trials", "10000",
       "--max-iters", "10000", "--seed", "42"}));

  // reference means; -1 marks the budget-exhausted cell
  const std::map<std::string, std::vector<double>> reference = {
      {"DR", {24, 177, 758, 1017}},      {"nsDR", {15, 21, 28, 35}},
      {"MAP", {292, 6290, 9995, -1}},    {"GRAP", {178, 4481, 9925, 9989}},
      {"CARPA", {104, 3030, 9172, 9823}}, {"nsCARPA", {64, 305, 790, 1140}}};
  const std::vector<std::string> tols = {"1e-4", "1e-6", "1e-8", "1e-10"};

  std::map<std::string, std::map<std::string, double>> mean;
  std::map<std::string, std::map<std::string, double>> hit_max;
  for (size_t r = 1; r < rows.size(); ++r) {
    mean[rows[r][0]][rows[r][1]] = std::stod(rows[r][2]);
    hit_max[rows[r][0]][rows[r][1]] = std::stod(rows[r][3]);
  }

  for (size_t t = 0; t < tols.size(); ++t) {
    for (const auto& [name, refs] : reference) {
      const double got = mean[tols[t]][name];
      const double ref = refs[t];
      if (ref < 0.0) {
        c.require(hit_max[tols[t]][name] >= 0.9,
                  name + " at " + tols[t] + ": exhausted fraction " +
                      std::to_string(hit_max[tols[t]][name]));
        c.require(got >= 9000.0, name + " at " + tols[t] + ": mean " +
                                     std::to_string(got) + " for a '-' cell");
      } else {
        c.require(got >= 0.5 * ref && got <= 1.5 * ref,
                  name + " at " + tols[t] + ": mean " + std::to_string(got) +
                      " outside +-50% of " + std::to_string(ref));
      }
    }
  }
  // per-tolerance ranking must match the reference table
  std::string rank_report;
  for (const auto& tol : tols) {
    const std::vector<std::string> expected_order = {"nsDR", "DR",    "nsCARPA",
                                                     "CARPA", "GRAP", "MAP"};
    std::vector<std::string> order = expected_order;
    std::sort(order.begin(), order.end(), [&](const auto& a, const auto& b) {
      return mean[tol][a] < mean[tol][b];
    });
    if (order != expected_order) {
      rank_report += "ranking at " + tol + " is [";
      for (const auto& m : order) rank_report += " " + m;
      rank_report += " ];";
    }
  }
  c.require(rank_report.empty(), rank_report);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  c.require(seconds < 120.0, "benchmark took " + std::to_string(seconds) + " s");
  return c;
}

// --------------------------------------------------------------------------
// 5. l1 projection vs the bisection oracle
// --------------------------------------------------------------------------
Vector l1_project_bisection(const Vector& w, double cap) {
  if (w.lpNorm<1>() <= cap) return w;
  if (cap == 0.0) return Vector::Zero(w.size());
  const Vector mag = w.cwiseAbs();
  double lo = 0.0;
  double hi = mag.maxCoeff();
  for (int iter = 0; iter < 200; ++iter) {
    const double tau = 0.5 * (lo + hi);
    ((mag.array() - tau).max(0.0).sum() > cap ? lo : hi) = tau;
  }
  const double tau = 0.5 * (lo + hi);
  Vector out(w.size());
  for (Index i = 0; i < w.size(); ++i) {
    const double m = std::abs(w[i]) - tau;
    out[i] = m > 0.0 ? std::copysign(m, w[i]) : 0.0;
  }
  return out;
}

Check criterion5() {
  Check c;
  const auto start = std::chrono::steady_clock::now();
  Rng rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    const Index n = 1 + static_cast<Index>(rng.below(50));
    const Vector w = 4.0 * rng.normal_vector(n);
    const double cap = 0.05 + 3.0 * rng.uniform();
    const Vector fast = L1Ball(cap).project(w);
    const Vector oracle = l1_project_bisection(w, cap);
    c.require((fast - oracle).cwiseAbs().maxCoeff() <= 1e-10,
              "projection deviates from the bisection oracle");
    c.require(fast.lpNorm<1>() <= cap + 1e-12, "projection leaves the ball");
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  c.require(seconds < 1.0, "oracle sweep took " + std::to_string(seconds) + " s");
  return c;
}

// --------------------------------------------------------------------------
// 6. Fejer monotonicity across set kinds; nsCARPA gamma Cauchy tail
// --------------------------------------------------------------------------
ProblemInstance two_balls_instance(std::uint64_t seed) {
  Rng rng(seed);
  const Index n = 3 + static_cast<Index>(rng.below(5));
  const Vector meet = rng.normal_vector(n);
  const Vector c1 = rng.normal_vector(n);
  const Vector c2 = rng.normal_vector(n);
  return ProblemInstance{
      EuclideanBall(c1, (c1 - meet).norm() + 0.2),
      EuclideanBall(c2, (c2 - meet).norm() + 0.2),
      n,
      meet,
      [n](std::uint64_t s) {
        Rng r(s);
        return Vector(3.0 * r.normal_vector(n));
      },
      "two-balls",
  };
}

Check criterion6() {
  Check c;
  const NSCARPA nscarpa_defaults{};
  for (int i = 0; i < 50; ++i) {
    const std::uint64_t seed = 5000 + static_cast<std::uint64_t>(i);
    ProblemInstance inst = [&]() -> ProblemInstance {
      switch (i % 4) {
        case 0: {
          Rng meta(seed);
          const Index p = 1 + static_cast<Index>(meta.below(3));
          const Index q = p + static_cast<Index>(meta.below(3));
          const Index n = p + q + 2 + static_cast<Index>(meta.below(10));
          std::vector<double> angles(static_cast<size_t>(p));
          for (auto& a : angles) a = 0.15 + 1.3 * meta.uniform();
          std::sort(angles.begin(), angles.end());
          return gen_two_subspaces(n, p, q, angles, seed);
        }
        case 1:
          return gen_ball_line(seed);
        case 2:
          return gen_cs_instance(8, 20, 2, CsKind::Gaussian, seed);
        default:
          return two_balls_instance(seed);
      }
    }();
    const Vector z0 = inst.start_sampler(derive_seed(seed, 1));
    StopRule stop;
    stop.residual_tol = 1e-12;
    stop.max_iters = 300;

    std::vector<MethodSpec> specs = {MAP{}, DR{1.0}, GRAP{1.0, 0.4, 0.4},
                                     CARPA{0.5, 1.0}, AAMR{1.0, 1.0}};
    if (i % 4 == 0) {
      specs.insert(specs.end(), {SP{}, RAP{1.2}, PRAP{1.0}, RAAR{0.7}, DRAP{0.5},
                                 AAMR{1.0, 0.75}});
    }
    for (const auto& spec : specs) {
      const RunRecord rec =
          run(spec, inst.x_set, inst.y_set, z0, stop, inst.known_solution);
      for (size_t k = 1; k + 1 < rec.errors.size() && c.ok; ++k) {
        c.require(rec.errors[k] <= rec.errors[k - 1] + 1e-10,
                  method_name(spec) + " on " + inst.label + ": error rose at k=" +
                      std::to_string(k));
      }
    }

    const RunRecord ns =
        run(nscarpa_defaults, inst.x_set, inst.y_set, z0, stop, inst.known_solution);
    for (double e : ns.errors) {
      c.require(e <= ns.errors.front() + 100.0, "nsCARPA iterates unbounded");
    }
    const auto& gs = ns.gamma_history;
    const double c2cfg = nscarpa_defaults.c2;
    const double delta = nscarpa_defaults.delta;
    for (size_t i0 = 1; i0 < gs.size(); i0 = i0 * 2 + 1) {
      for (size_t j = i0 + 1; j < gs.size(); j += 1 + (gs.size() - i0) / 16) {
        const double bound =
            c2cfg / ((1.0 + delta) * std::pow(static_cast<double>(i0), 1.0 + delta));
        c.require(std::abs(gs[j] - gs[i0]) <= bound + 1e-12,
                  "gamma tail bound violated at (i=" + std::to_string(i0) +
                      ", j=" + std::to_string(j) + ")");
      }
    }
  }
  return c;
}

// --------------------------------------------------------------------------
// 7. Sparse recovery on the scaled instance
// --------------------------------------------------------------------------
Check criterion7() {
  Check c;
  const auto start = std::chrono::steady_clock::now();
  const std::uint64_t seed = 7;
  const auto inst = gen_cs_instance(125, 500, 12, CsKind::Gaussian, seed);
  const Vector z0 = inst.start_sampler(derive_seed(seed, 1));
  const std::vector<Index> true_support = support(*inst.known_solution);
  c.require(true_support.size() == 12, "planted support size");

  std::vector<MethodSpec> specs = {GRAP{1.0, 0.75, 0.75}, CARPA{0.5, 1.0}};
  NSCARPA nsc;
  nsc.c1 = 0.9;
  specs.push_back(nsc);

  for (const auto& spec : specs) {
    StopRule stop;
    stop.error_tol = 1e-12;
    stop.max_iters = 10000;
    std::vector<std::vector<Index>> support_track;
    RunOptions options;
    options.observer = [&](long, const Vector& z) {
      support_track.push_back(support(project(inst.y_set, z)));
    };
    const RunRecord rec =
        run(spec, inst.x_set, inst.y_set, z0, stop, inst.known_solution, options);

    long first_below = -1;
    for (size_t k = 0; k < rec.errors.size(); ++k) {
      if (rec.errors[k] <= 1e-6) {
        first_below = static_cast<long>(k);
        break;
      }
    }
    c.require(first_below >= 0 && first_below <= 10000,
              method_name(spec) + " never reached 1e-6");

    c.require(support_track.size() >= 10, "run too short to judge the support");
    const size_t tail_start = support_track.size() - support_track.size() / 10 - 1;
    for (size_t k = tail_start; k < support_track.size(); ++k) {
      c.require(support_track[k] == true_support,
                method_name(spec) + ": support differs from supp(x*) at k=" +
                    std::to_string(k));
    }
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  c.require(seconds < 30.0, "recovery runs took " + std::to_string(seconds) + " s");
  return c;
}

// --------------------------------------------------------------------------
// 8. Subspace generator round-trip
// --------------------------------------------------------------------------
Check criterion8() {
  Check c;
  Rng meta(31415);
  for (int trial = 0; trial < 100; ++trial) {
    const Index p = 1 + static_cast<Index>(meta.below(8));
    const Index q = p + static_cast<Index>(meta.below(8));
    const Index extra = static_cast<Index>(
        meta.below(static_cast<std::uint64_t>(100 - p - q + 1)));
    const Index n = p + q + extra;
    std::vector<double> angles(static_cast<size_t>(p));
    for (auto& a : angles) a = 0.02 + (M_PI_2 - 0.02) * meta.uniform();
    std::sort(angles.begin(), angles.end());
    const auto inst = gen_two_subspaces(n, p, q, angles, meta.below(1ull << 40));
    const auto pa = principal_angles(std::get<LinearSubspace>(inst.x_set),
                                     std::get<LinearSubspace>(inst.y_set));
    c.require(pa.angles.size() == angles.size(), "angle count");
    for (size_t i = 0; i < angles.size() && c.ok; ++i) {
      c.require(std::abs(pa.angles[i] - angles[i]) <= 1e-10,
                "angle " + std::to_string(i) + " off by " +
                    std::to_string(std::abs(pa.angles[i] - angles[i])));
    }
  }
  return c;
}

// --------------------------------------------------------------------------
// 9. Trajectory shapes: DR spirals, CARPA contracts
// --------------------------------------------------------------------------
Check criterion9() {
  Check c;
  const auto dr_rows = parse_csv(csv_from_cli({"trajectory", "--problem", "subspace2d",
                                               "--method", "DR", "--steps", "60",
                                               "--seed", "5"}));
  long sign_changes_1 = 0;
  long sign_changes_2 = 0;
  for (size_t r = 2; r < dr_rows.size(); ++r) {
    const double prev1 = std::stod(dr_rows[r - 1][1]);
    const double cur1 = std::stod(dr_rows[r][1]);
    const double prev2 = std::stod(dr_rows[r - 1][2]);
    const double cur2 = std::stod(dr_rows[r][2]);
    if (prev1 * cur1 < 0.0) ++sign_changes_1;
    if (prev2 * cur2 < 0.0) ++sign_changes_2;
  }
  c.require(sign_changes_1 >= 5, "DR z_1 changed sign only " +
                                     std::to_string(sign_changes_1) + " times");
  c.require(sign_changes_2 >= 5, "DR z_2 changed sign only " +
                                     std::to_string(sign_changes_2) + " times");

  const auto ca_rows = parse_csv(csv_from_cli({"trajectory", "--problem", "subspace2d",
                                               "--method", "CARPA", "--steps", "20",
                                               "--seed", "5"}));
  c.require(ca_rows.size() >= 20, "CARPA trajectory too short");
  for (size_t r = 3; r < ca_rows.size(); ++r) { // rows 2.. are iterates k >= 1
    const double prev =
        std::hypot(std::stod(ca_rows[r - 1][1]), std::stod(ca_rows[r - 1][2]));
    const double cur = std::hypot(std::stod(ca_rows[r][1]), std::stod(ca_rows[r][2]));
    c.require(cur < prev, "CARPA norm did not decrease at row " + std::to_string(r));
  }
  return c;
}

} // namespace

int main() {
  struct Entry {
    int id;
    const char* title;
    std::function<Check()> fn;
  };
  const std::vector<Entry> criteria = {
      {1, "CARPA modulus matches direct 2x2 eigenvalues on the parameter grid",
       criterion1},
      {2, "rate sweep reproduces the closed forms at theta_p = pi/2", criterion2},
      {3, "subspace benchmark: fitted rates match theory, AAMR/GRAP fastest",
       criterion3},
      {4, "tangent ball-line iteration counts match the reference table", criterion4},
      {5, "l1 projection agrees with the bisection oracle", criterion5},
      {6, "Fejer monotonicity and the nsCARPA gamma tail bound", criterion6},
      {7, "sparse recovery reaches 1e-6 and pins the planted support", criterion7},
      {8, "subspace generator reproduces requested principal angles", criterion8},
      {9, "DR trajectory spirals while CARPA contracts monotonically", criterion9},
  };

  int failures = 0;
  for (const auto& entry : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Check result;
    try {
      result = entry.fn();
    } catch (const std::exception& e) {
      result.ok = false;
      result.detail = std::string("exception: ") + e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    std::printf("[%s] criterion %d: %s (%.2f s)%s%s\n", result.ok ? "PASS" : "FAIL",
                entry.id, entry.title, seconds, result.ok ? "" : " -- ",
                result.ok ? "" : result.detail.c_str());
    std::fflush(stdout);
    if (!result.ok) ++failures;
  }
  return failures;
}
