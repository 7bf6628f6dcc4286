// End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
// exits non-zero if any fails. Seeds are fixed here so reruns are identical.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cauchy_est/estimators.hpp"
#include "cauchy_est/geometry.hpp"
#include "cauchy_est/mle.hpp"
#include "cauchy_est/simulation.hpp"
#include "cli.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace cauchy_est;
using nlohmann::json;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += (ok ? "" : "FAILED ") + what;
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult cli_run(std::vector<std::string> args) {
  args.insert(args.begin(), "cauchy-est");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::istringstream in;
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), in, out, err);
  return {code, out.str(), err.str()};
}

json cli_json(const std::vector<std::string>& args) {
  const CliResult r = cli_run(args);
  if (r.code != 0) throw std::runtime_error("command failed: " + r.err);
  return json::parse(r.out);
}

// -- 1 ------------------------------------------------------------------------

Verdict kl_oracle() {
  const double mus[] = {-5.0, 0.0, 5.0};
  const double sigmas[] = {0.5, 1.0, 10.0};
  std::vector<HalfPlanePoint> grid;
  for (double m : mus)
    for (double s : sigmas) grid.emplace_back(m, s);
  double worst = 0.0;
  for (const auto& a : grid) {
    for (const auto& b : grid) {
      const double closed = kl_halfplane(a, b);
      const double quad = oracle::kl_by_quadrature(a.re(), a.im(), b.re(), b.im());
      worst = std::max(worst, std::fabs(closed - quad));
    }
  }
  Verdict v;
  v.require(worst < 1e-6, std::to_string(grid.size() * grid.size()) + " pairs, max|diff| = " +
                              fmt("%.3g", worst) + " (< 1e-6)");
  return v;
}

// -- 2 ------------------------------------------------------------------------

Verdict one_step_table_cells() {
  struct Cell {
    const char* generator;
    std::size_t n;
    double paper;
    double band;
  };
  const Cell cells[] = {
      {"f1", 100, 4.056, 0.10},  {"f2", 100, 4.186, 0.10},  {"f3", 100, 4.034, 0.10},
      {"f4", 100, 4.097, 0.10},  {"f1", 1000, 4.008, 0.10}, {"f2", 1000, 4.022, 0.10},
      {"f3", 1000, 4.007, 0.10}, {"f4", 1000, 4.013, 0.10}, {"f2", 10, 6.551, 0.30},
  };
  Verdict v;
  for (const Cell& c : cells) {
    const json rows = cli_json({"simulate-mse", "--theta", "0+1i", "--n", std::to_string(c.n),
                                "--generator", c.generator, "--estimator", "one_step", "--seed",
                                "2024", "--format", "json"});
    const double stat = rows.at(0).at("statistic").get<double>();
    v.require(std::fabs(stat - c.paper) <= c.band, std::string(c.generator) + "/n=" + std::to_string(c.n) +
                                                       " " + fmt("%.4f", stat) + " vs " +
                                                       fmt("%.3f", c.paper) + " +-" + fmt("%.2f", c.band));
  }
  return v;
}

// -- 3 ------------------------------------------------------------------------

Verdict mle_table_cells() {
  Verdict v;
  for (const auto& [n, paper] : {std::pair{100, 4.117}, std::pair{1000, 4.015}}) {
    const json rows = cli_json({"simulate-mse", "--theta", "0+1i", "--n", std::to_string(n), "--estimator",
                                "mle", "--seed", "2025", "--format", "json"});
    const double stat = rows.at(0).at("statistic").get<double>();
    v.require(std::fabs(stat - paper) <= 0.10,
              "n=" + std::to_string(n) + " " + fmt("%.4f", stat) + " vs " + fmt("%.3f", paper) + " +-0.10");
  }
  return v;
}

// -- 4 ------------------------------------------------------------------------

Verdict median_adjusted_cells() {
  Verdict v;
  struct Cell {
    const char* theta;
    std::size_t n;
    double paper;
  };
  for (const Cell& c : {Cell{"10+1i", 1000, 4.009}, Cell{"0+10i", 100, 4.137}}) {
    const json rows = cli_json({"simulate-mse", "--theta", c.theta, "--n", std::to_string(c.n), "--generator",
                                "f1", "--estimator", "one_step_median", "--seed", "2026", "--format", "json"});
    const double stat = rows.at(0).at("statistic").get<double>();
    v.require(std::fabs(stat - c.paper) <= 0.10, std::string("f1 median-adjusted theta=") + c.theta +
                                                     " n=" + std::to_string(c.n) + " " + fmt("%.4f", stat) +
                                                     " vs " + fmt("%.3f", c.paper) + " +-0.10");
  }
  const json raw = cli_json({"simulate-mse", "--theta", "10+1i", "--n", "10", "--generator", "f3",
                             "--estimator", "one_step", "--seed", "2026", "--format", "json"});
  const double stat = raw.at(0).at("statistic").get<double>();
  v.require(stat > 30.0, "raw f3 theta=10+1i n=10 " + fmt("%.2f", stat) + " > 30");
  return v;
}

// -- 5 ------------------------------------------------------------------------

double rel_gap(Complex got, Complex want) { return std::abs(got - want) / std::abs(want); }

// x -> a x + b maps theta to a theta + b for a > 0 and to a conj(theta) + b for a < 0.
Complex transform(Complex theta, double a, double b) {
  return (a > 0.0 ? a * theta : a * std::conj(theta)) + b;
}

Verdict equivariance() {
  testing::Gen gen(505);
  double worst_mle = 0.0, worst_pipe = 0.0;
  for (int k = 0; k < 100; ++k) {
    const std::vector<double> xs = gen.cauchy_batch(gen.size(5, 200), gen.uniform(-20, 20), gen.uniform(0.1, 10));
    double a = std::exp(gen.uniform(-3.0, 3.0));
    if (k % 2 == 1) a = -a;
    const double b = gen.uniform(-100.0, 100.0);
    std::vector<double> moved(xs);
    for (double& x : moved) x = a * x + b;

    const Complex m0 = mle(xs).theta_hat.value();
    const Complex m1 = mle(moved).theta_hat.value();
    worst_mle = std::max(worst_mle, rel_gap(m1, transform(m0, a, b)));

    const Complex p0 = estimate_pipeline(Generator::f1(), xs, true).estimate.value();
    const Complex p1 = estimate_pipeline(Generator::f1(), moved, true).estimate.value();
    worst_pipe = std::max(worst_pipe, rel_gap(p1, transform(p0, a, b)));
  }
  Verdict v;
  v.require(worst_mle < 1e-9, "MLE max relative gap " + fmt("%.3g", worst_mle) + " (< 1e-9)");
  v.require(worst_pipe < 1e-9, "f1 median-adjusted max relative gap " + fmt("%.3g", worst_pipe) + " (< 1e-9)");
  return v;
}

// -- 6 ------------------------------------------------------------------------

Verdict fixed_point() {
  testing::Gen gen(606);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const std::vector<double> xs = gen.cauchy_batch(gen.size(5, 50), gen.uniform(-5, 5), gen.uniform(0.2, 5));
    const HalfPlanePoint theta = mle(xs).theta_hat;
    const Complex next = one_step(xs, theta).value.value();
    worst = std::max(worst, std::abs(next - theta.value()));
  }
  Verdict v;
  v.require(worst < 1e-8, "100 batches, max|one_step(mle) - mle| = " + fmt("%.3g", worst) + " (< 1e-8)");
  return v;
}

// -- 7 ------------------------------------------------------------------------

Verdict disk_identity() {
  testing::Gen gen(707);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const DiskPoint w = gen.disk(0.99);
    const HalfPlanePoint alpha = gen.halfplane(10.0, 2.0);
    const HalfPlanePoint z = mobius_to_halfplane(w, alpha);
    const double lhs = 4.0 * z.im() * z.im() * std::norm(mobius_to_disk_derivative(z.value(), alpha));
    const double rhs = (1.0 - w.norm_sq()) * (1.0 - w.norm_sq());
    worst = std::max(worst, std::fabs(lhs - rhs));
  }
  Verdict v;
  v.require(worst < 1e-10, "1000 points, max|lhs - rhs| = " + fmt("%.3g", worst) + " (< 1e-10)");
  return v;
}

// -- 8 ------------------------------------------------------------------------

Verdict tail_decay() {
  const json rows = cli_json({"simulate-tail", "--theta", "0+1i", "--eps", "1", "--n", "10,20,40", "--generator",
                              "f3", "--estimator", "one_step", "--seed", "2027", "--format", "json"});
  Verdict v;
  std::vector<double> p;
  for (const json& r : rows) p.push_back(r.at("p_hat").get<double>());
  const bool decreasing = p.size() == 3 && p[0] > p[1] && p[1] > p[2];
  v.require(decreasing, "p_hat " + fmt("%.5f", p.at(0)) + " > " + fmt("%.5f", p.at(1)) + " > " +
                            fmt("%.5f", p.at(2)));
  const json& last = rows.at(2).at("rate_ratio");
  const double ratio = last.is_null() ? INFINITY : last.get<double>();
  v.require(ratio >= 0.5 && ratio <= 2.0, "rate_ratio(n=40) " + fmt("%.4f", ratio) + " in [0.5, 2]");
  return v;
}

// -- 9 ------------------------------------------------------------------------

Verdict circular_mse() {
  const json rows = cli_json({"simulate-mse", "--circular", "--w", "0.5+0i", "--alpha", "0+1i", "--n", "1000",
                              "--generator", "f1", "--seed", "2028", "--format", "json"});
  const double stat = rows.at(0).at("statistic").get<double>();
  Verdict v;
  v.require(stat >= 0.95 && stat <= 1.15, "n E|W-w|^2/(1-|w|^2)^2 = " + fmt("%.4f", stat) + " in [0.95, 1.15]");
  return v;
}

// -- 10 -----------------------------------------------------------------------

Verdict determinism() {
  const std::vector<std::vector<std::string>> commands = {
      {"simulate-mse", "--n", "100", "--generator", "f1,f3", "--seed", "2024"},
      {"simulate-mse", "--n", "50", "--estimator", "mle", "-R", "20000", "--seed", "2025"},
      {"simulate-tail", "--n", "10,20,40", "--seed", "2027"},
      {"simulate-mse", "--circular", "--w", "0.5+0i", "--n", "100", "--generator", "f1", "--seed", "2028"},
      {"sample", "--n", "1000", "--seed", "7", "--stream", "3"},
  };
  Verdict v;
  int identical = 0;
  for (const auto& base : commands) {
    std::string reference;
    bool same = true;
    for (const char* workers : {"1", "2", "4", "0", "1"}) {
      auto args = base;
      if (args.front() != "sample") args.insert(args.end(), {"--workers", workers});
      const CliResult r = cli_run(args);
      if (r.code != 0) {
        same = false;
        break;
      }
      if (reference.empty()) reference = r.out;
      same = same && r.out == reference;
    }
    identical += same ? 1 : 0;
    if (!same) v.require(false, base.front() + " output differs between runs");
  }
  v.require(identical == static_cast<int>(commands.size()),
            std::to_string(identical) + "/" + std::to_string(commands.size()) +
                " commands byte-identical at workers 1, 2, 4, auto and on repeat");
  return v;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Verdict()> check;
  };
  const Criterion criteria[] = {
      {1, "kl closed form vs quadrature", kl_oracle},
      {2, "one-step table cells at theta=i", one_step_table_cells},
      {3, "MLE table cells at theta=i", mle_table_cells},
      {4, "median-adjusted cells", median_adjusted_cells},
      {5, "affine equivariance", equivariance},
      {6, "MLE is a one-step fixed point", fixed_point},
      {7, "disk information identity", disk_identity},
      {8, "tail probability decay", tail_decay},
      {9, "circular normalized MSE", circular_mse},
      {10, "determinism across worker counts", determinism},
  };

  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.check();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] %2d %s: %s (%.1fs)\n", v.pass ? "PASS" : "FAIL", c.id, c.name, v.detail.c_str(), secs);
    std::fflush(stdout);
    failed += v.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed, std::size(criteria));
  return failed == 0 ? 0 : 1;
}
