#include "cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cauchy_est/complex_literal.hpp"
#include "cauchy_est/errors.hpp"
#include "cauchy_est/estimators.hpp"
#include "cauchy_est/geometry.hpp"
#include "cauchy_est/mle.hpp"
#include "cauchy_est/sampling.hpp"
#include "cauchy_est/simulation.hpp"

namespace cauchy_est::cli {

namespace {

constexpr std::size_t kDefaultReplications = 100000;
constexpr std::size_t kFullReplications = 1000000;

using json = nlohmann::json;

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

// One value per line; blank lines and '#' comments are skipped. With several
// comma-separated columns only the first is read.
std::vector<double> read_values(std::istream& in) {
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string field = trim(line.substr(0, line.find(',')));
    if (field.empty() || field.front() == '#') continue;
    double v = 0.0;
    const char* begin = field.data();
    if (field.front() == '+') ++begin;
    const auto [ptr, ec] = std::from_chars(begin, field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size() || !std::isfinite(v)) {
      throw std::invalid_argument("line " + std::to_string(line_no) + ": not a finite number: '" +
                                  field + "'");
    }
    values.push_back(v);
  }
  if (values.empty()) throw std::invalid_argument("input contains no samples");
  return values;
}

std::vector<double> read_input(const std::string& path, std::istream& in) {
  if (path.empty() || path == "-") return read_values(in);
  std::ifstream file(path);
  if (!file) throw std::invalid_argument("cannot open input file '" + path + "'");
  return read_values(file);
}

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path);
  if (!file) throw std::invalid_argument("cannot open output file '" + path + "'");
  file << text;
}

json pair(Complex z) { return json::array({z.real(), z.imag()}); }

HalfPlanePoint parse_halfplane(const std::string& text, const char* flag) {
  const Complex z = parse_complex(text);
  if (!(z.imag() > 0.0)) {
    throw std::invalid_argument(std::string(flag) + " must have a positive imaginary part");
  }
  return HalfPlanePoint(z);
}

DiskPoint parse_disk(const std::string& text, const char* flag) {
  const Complex z = parse_complex(text);
  if (!(std::norm(z) < 1.0)) throw std::invalid_argument(std::string(flag) + " must lie inside the unit disk");
  return DiskPoint(z);
}

// Options shared by the two simulate subcommands.
struct SimulateOptions {
  std::string scenario_file;
  std::string theta = "0+1i";
  std::vector<std::size_t> n;
  std::string estimator = "one_step";
  std::vector<std::string> generators{"f3"};
  std::size_t replications = kDefaultReplications;
  bool full = false;
  std::uint64_t seed = 0;
  unsigned workers = 0;
  std::string out;
  std::string json_out;
  std::string format = "csv";

  std::size_t effective_replications() const { return full ? kFullReplications : replications; }
};

void add_simulate_options(CLI::App* cmd, SimulateOptions& o) {
  cmd->add_option("--scenario", o.scenario_file, "JSON scenario file (object or array)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--theta", o.theta, "true parameter mu+sigmai")->capture_default_str();
  cmd->add_option("--n", o.n, "sample size(s)")->delimiter(',');
  cmd->add_option("--estimator", o.estimator, "qam | one_step | one_step_median | mle")
      ->capture_default_str();
  cmd->add_option("--generator", o.generators, "f1..f4, log:a+bi or recip:a+bi")
      ->delimiter(',')
      ->capture_default_str();
  cmd->add_option("--replications,-R", o.replications, "Monte-Carlo replications per cell")
      ->capture_default_str();
  cmd->add_flag("--full", o.full, "use 10^6 replications");
  cmd->add_option("--seed", o.seed, "base seed")->required()->envname("CAUCHY_EST_SEED");
  cmd->add_option("--workers", o.workers, "worker threads (0 = hardware); results do not depend on it");
  cmd->add_option("--out", o.out, "write CSV here instead of standard output");
  cmd->add_option("--json", o.json_out, "also write the JSON mirror here");
  cmd->add_option("--format", o.format, "standard output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
}

// Scenario-file entries without their own seed inherit --seed; --full
// overrides replication counts.
json prepare_scenarios(const SimulateOptions& o) {
  std::ifstream file(o.scenario_file);
  json doc = json::parse(file);
  auto fix = [&](json& obj) {
    if (!obj.is_object()) return;
    if (!obj.contains("base_seed") && !obj.contains("seed")) obj["base_seed"] = o.seed;
    if (o.full) obj["replications"] = kFullReplications;
  };
  if (doc.is_array()) {
    for (json& obj : doc) fix(obj);
  } else {
    fix(doc);
  }
  return doc;
}

template <class Row>
void emit_rows(const SimulateOptions& o, const std::vector<Row>& rows, std::ostream& out) {
  json arr = json::array();
  for (const Row& r : rows) arr.push_back(to_json(r));
  if (!o.json_out.empty()) write_output(o.json_out, arr.dump(2) + "\n", out);
  if (o.format == "json") {
    write_output(o.out, arr.dump(2) + "\n", out);
  } else {
    write_output(o.out, to_csv(std::span<const Row>(rows)), out);
  }
}

// sample ---------------------------------------------------------------------

struct SampleOptions {
  std::size_t n = 0;
  std::string theta = "0+1i";
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  bool circular = false;
  std::string w = "0+0i";
  std::string alpha = "0+1i";
  std::string out;
};

int do_sample(const SampleOptions& o, std::ostream& out) {
  if (o.n == 0) throw std::invalid_argument("--n must be at least 1");
  std::ostringstream text;
  text.precision(17);
  const SeedSpec seed{o.seed, o.stream};
  if (o.circular) {
    const DiskPoint w = parse_disk(o.w, "--w");
    const HalfPlanePoint alpha = parse_halfplane(o.alpha, "--alpha");
    const AngleBatch batch = sample_circular(o.n, w, alpha, seed);
    text << "# circular w=" << format_complex(w.value()) << " alpha=" << format_complex(alpha.value())
         << " n=" << o.n << " seed=" << o.seed << " stream=" << o.stream << '\n';
    for (double a : batch.angles()) text << a << '\n';
  } else {
    const HalfPlanePoint theta = parse_halfplane(o.theta, "--theta");
    const SampleBatch batch = sample_cauchy(o.n, theta, seed);
    text << "# cauchy theta=" << format_complex(theta.value()) << " n=" << o.n << " seed=" << o.seed
         << " stream=" << o.stream << '\n';
    for (double x : batch.values()) text << x << '\n';
  }
  write_output(o.out, text.str(), out);
  return kExitOk;
}

// estimate -------------------------------------------------------------------

struct EstimateOptions {
  std::string in;
  std::string generator = "f3";
  bool median_adjust = false;
  bool strict_median = false;
  bool circular = false;
  std::string alpha = "0+1i";
  std::string out;
};

int do_estimate(const EstimateOptions& o, std::istream& in, std::ostream& out, std::ostream& err) {
  const Generator g = Generator::parse(o.generator);
  const MedianRule rule = o.strict_median ? MedianRule::Plain : MedianRule::ThreePoint;
  std::vector<double> xs = read_input(o.in, in);

  std::optional<HalfPlanePoint> alpha;
  if (o.circular) {
    alpha = parse_halfplane(o.alpha, "--alpha");
    for (double& a : xs) {
      if (!(a >= 0.0 && a < 2.0 * std::acos(-1.0))) {
        throw std::invalid_argument("circular samples must be angles in [0, 2pi)");
      }
      a = angle_to_real(a, *alpha);
    }
  }

  const EstimateOutcome y =
      o.median_adjust ? qam_estimate_median_adjusted(g, xs, rule) : qam_estimate(g, xs);
  json doc;
  doc["y"] = pair(y.raw);
  doc["diagnostics"] = {{"generator", g.label()},
                        {"median_adjust", o.median_adjust},
                        {"n", xs.size()},
                        {"boundary_hit", y.boundary_hit},
                        {"mean_magnitude", y.mean_magnitude}};
  if (y.degenerate()) {
    doc["z"] = nullptr;
    write_output(o.out, doc.dump() + "\n", out);
    err << "error: degenerate initializer: generator " << g.label() << " gave Im(Y) = " << y.raw.imag()
        << '\n';
    return kExitUsage;
  }
  const OneStepResult z = one_step(xs, *y.value);
  doc["z"] = pair(z.value.value());
  doc["diagnostics"]["halvings"] = z.halvings;
  if (alpha) {
    const Complex w = h_extended(z.value.value(), *alpha);
    doc["w"] = pair(w);
    doc["alpha"] = pair(alpha->value());
  }
  write_output(o.out, doc.dump() + "\n", out);
  return kExitOk;
}

// mle ------------------------------------------------------------------------

struct MleOptions {
  std::string in;
  SolverConfig cfg;
  std::string out;
};

int do_mle(const MleOptions& o, std::istream& in, std::ostream& out) {
  const std::vector<double> xs = read_input(o.in, in);
  const MleResult fit = mle(xs, o.cfg);
  const json doc = {{"theta", pair(fit.theta_hat.value())},
                    {"iterations", fit.iterations},
                    {"score_norm", fit.final_score_norm},
                    {"converged", fit.converged}};
  write_output(o.out, doc.dump() + "\n", out);
  return kExitOk;
}

// kl / rate --------------------------------------------------------------------

struct KlOptions {
  std::string from;
  std::string to;
  bool disk = false;
  std::string out;
};

int do_kl(const KlOptions& o, std::ostream& out) {
  const double kl = o.disk ? kl_circular(parse_disk(o.from, "--from"), parse_disk(o.to, "--to"))
                           : kl_halfplane(parse_halfplane(o.from, "--from"), parse_halfplane(o.to, "--to"));
  write_output(o.out, json{{"kl", kl}}.dump() + "\n", out);
  return kExitOk;
}

struct RateOptions {
  double eps = 0.0;
  std::string theta = "0+1i";
  bool disk = false;
  std::string w = "0+0i";
  std::string out;
};

int do_rate(const RateOptions& o, std::ostream& out) {
  const double b = o.disk ? bahadur_rate_circular(o.eps, parse_disk(o.w, "--w"))
                          : bahadur_rate(o.eps, parse_halfplane(o.theta, "--theta"));
  write_output(o.out, json{{"b", b}}.dump() + "\n", out);
  return kExitOk;
}

// simulate-mse -----------------------------------------------------------------

struct MseOptions : SimulateOptions {
  std::string table;
  bool circular = false;
  std::string w = "0+0i";
  std::string alpha = "0+1i";
  bool median_adjust = false;
};

int do_simulate_mse(const MseOptions& o, std::ostream& out, std::ostream& err) {
  const RunOptions run{o.workers};
  const std::size_t reps = o.effective_replications();

  if (o.circular) {
    if (o.n.empty()) throw std::invalid_argument("--n is required");
    const DiskPoint w = parse_disk(o.w, "--w");
    const HalfPlanePoint alpha = parse_halfplane(o.alpha, "--alpha");
    std::vector<CircularSimRow> rows;
    bool any_failed = false;
    for (std::size_t n : o.n) {
      for (const std::string& label : o.generators) {
        const CircularMseScenario s{w, alpha, n, Generator::parse(label), o.median_adjust, reps, o.seed};
        s.validate();
        try {
          rows.push_back(run_circular_mse(s, run));
        } catch (const std::exception& e) {
          any_failed = true;
          err << "error: cell n=" << n << " generator=" << label << ": " << e.what() << '\n';
          rows.push_back({s, std::numeric_limits<double>::quiet_NaN(),
                          std::numeric_limits<double>::quiet_NaN(), reps, e.what()});
        }
      }
    }
    emit_rows(o, rows, out);
    return any_failed ? kExitPartialFailure : kExitOk;
  }

  std::vector<MseScenario> scenarios;
  if (!o.scenario_file.empty()) {
    scenarios = mse_scenarios_from_json(prepare_scenarios(o));
  } else if (!o.table.empty()) {
    const HalfPlanePoint theta = parse_halfplane(o.theta, "--theta");
    if (o.table == "one-step") scenarios = one_step_table(theta, false, reps, o.seed);
    if (o.table == "one-step-median") scenarios = one_step_table(theta, true, reps, o.seed);
    if (o.table == "mle") scenarios = mle_table(reps, o.seed);
  } else {
    if (o.n.empty()) throw std::invalid_argument("--n is required without --scenario or --table");
    const HalfPlanePoint theta = parse_halfplane(o.theta, "--theta");
    const EstimatorKind kind = parse_estimator_kind(o.estimator);
    for (std::size_t n : o.n) {
      for (const std::string& label : o.generators) {
        MseScenario s{theta, n, kind, Generator::parse(label), reps, o.seed};
        s.validate();
        scenarios.push_back(s);
      }
    }
  }

  const std::vector<SimTableRow> rows = run_table(scenarios, run);
  bool any_failed = false;
  for (const SimTableRow& r : rows) {
    if (std::isnan(r.statistic)) {
      any_failed = true;
      err << "error: cell n=" << r.scenario.n << " generator=" << r.scenario.generator.label() << ": "
          << r.failure_mode << '\n';
    } else if (r.failures > 0) {
      err << "warning: cell n=" << r.scenario.n << " generator=" << r.scenario.generator.label() << ": "
          << r.failures << " replications excluded (" << r.failure_mode << ")\n";
    }
  }
  emit_rows(o, rows, out);
  return any_failed ? kExitPartialFailure : kExitOk;
}

// simulate-tail ----------------------------------------------------------------

struct TailOptions : SimulateOptions {
  double eps = 1.0;
};

int do_simulate_tail(const TailOptions& o, std::ostream& out, std::ostream& err) {
  const RunOptions run{o.workers};
  std::vector<TailScenario> scenarios;
  if (!o.scenario_file.empty()) {
    scenarios = tail_scenarios_from_json(prepare_scenarios(o));
  } else {
    if (o.n.empty()) throw std::invalid_argument("--n is required without --scenario");
    const HalfPlanePoint theta = parse_halfplane(o.theta, "--theta");
    const EstimatorKind kind = parse_estimator_kind(o.estimator);
    for (std::size_t n : o.n) {
      for (const std::string& label : o.generators) {
        TailScenario s{theta, n, o.eps, kind, Generator::parse(label), o.effective_replications(), o.seed};
        s.validate();
        scenarios.push_back(s);
      }
    }
  }

  std::vector<TailResult> rows;
  bool any_failed = false;
  for (const TailScenario& s : scenarios) {
    try {
      rows.push_back(run_tail(s, run));
      for (const std::string& w : rows.back().warnings) err << "warning: n=" << s.n << ": " << w << '\n';
    } catch (const std::exception& e) {
      any_failed = true;
      err << "error: cell n=" << s.n << ": " << e.what() << '\n';
      TailResult failed;
      failed.scenario = s;
      failed.failures = s.replications;
      failed.p_hat = failed.rate_ratio = failed.mc_stderr_p = std::numeric_limits<double>::quiet_NaN();
      failed.warnings.push_back(e.what());
      rows.push_back(failed);
    }
  }
  emit_rows(o, rows, out);
  return any_failed ? kExitPartialFailure : kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Closed-form, one-step and maximum-likelihood estimation for the Cauchy family",
               "cauchy-est"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "expand help for all subcommands");

  SampleOptions sample;
  auto* sample_cmd = app.add_subcommand("sample", "draw Cauchy or circular Cauchy samples as CSV");
  sample_cmd->add_option("--n", sample.n, "sample size")->required();
  sample_cmd->add_option("--theta", sample.theta, "parameter mu+sigmai")->capture_default_str();
  sample_cmd->add_option("--seed", sample.seed, "base seed")->required()->envname("CAUCHY_EST_SEED");
  sample_cmd->add_option("--stream", sample.stream, "stream index")->capture_default_str();
  sample_cmd->add_flag("--circular", sample.circular, "draw circle angles from P^cc_w");
  sample_cmd->add_option("--w", sample.w, "circular parameter inside the unit disk")->capture_default_str();
  sample_cmd->add_option("--alpha", sample.alpha, "Moebius center")->capture_default_str();
  sample_cmd->add_option("--out", sample.out, "output file");

  EstimateOptions estimate;
  auto* estimate_cmd = app.add_subcommand("estimate", "quasi-arithmetic mean and one-step estimate");
  estimate_cmd->add_option("--in", estimate.in, "CSV input (default: standard input)");
  estimate_cmd->add_option("--generator", estimate.generator, "f1..f4, log:a+bi or recip:a+bi")
      ->capture_default_str();
  estimate_cmd->add_flag("--median-adjust", estimate.median_adjust, "center the sample at its median");
  estimate_cmd->add_flag("--strict-median", estimate.strict_median,
                         "use the plain middle order statistic for odd n");
  estimate_cmd->add_flag("--circular", estimate.circular, "input is circle angles in [0, 2pi)");
  estimate_cmd->add_option("--alpha", estimate.alpha, "Moebius center for --circular")->capture_default_str();
  estimate_cmd->add_option("--out", estimate.out, "output file");

  MleOptions mle_opts;
  auto* mle_cmd = app.add_subcommand("mle", "maximum-likelihood estimate by Fisher scoring");
  mle_cmd->add_option("--in", mle_opts.in, "CSV input (default: standard input)");
  mle_cmd->add_option("--score-tol", mle_opts.cfg.score_tol, "convergence tolerance on |score|")
      ->capture_default_str();
  mle_cmd->add_option("--step-tol", mle_opts.cfg.step_tol, "relative step tolerance")->capture_default_str();
  mle_cmd->add_option("--max-iters", mle_opts.cfg.max_iters, "iteration cap")->capture_default_str();
  mle_cmd->add_option("--out", mle_opts.out, "output file");

  KlOptions kl;
  auto* kl_cmd = app.add_subcommand("kl", "Kullback-Leibler divergence K(P_from | P_to)");
  kl_cmd->add_option("--from", kl.from, "first parameter")->required();
  kl_cmd->add_option("--to", kl.to, "second parameter")->required();
  kl_cmd->add_flag("--disk", kl.disk, "parameters are circular Cauchy points of the unit disk");
  kl_cmd->add_option("--out", kl.out, "output file");

  RateOptions rate;
  auto* rate_cmd = app.add_subcommand("rate", "Bahadur rate b(eps, theta)");
  rate_cmd->add_option("--eps", rate.eps, "radius")->required();
  rate_cmd->add_option("--theta", rate.theta, "parameter mu+sigmai")->capture_default_str();
  rate_cmd->add_flag("--disk", rate.disk, "circular rate at --w");
  rate_cmd->add_option("--w", rate.w, "circular parameter")->capture_default_str();
  rate_cmd->add_option("--out", rate.out, "output file");

  MseOptions mse;
  auto* mse_cmd = app.add_subcommand("simulate-mse", "Monte-Carlo normalized mean squared error");
  add_simulate_options(mse_cmd, mse);
  mse_cmd->add_option("--table", mse.table, "preset layout")
      ->check(CLI::IsMember({"one-step", "one-step-median", "mle"}));
  mse_cmd->add_flag("--circular", mse.circular, "circular estimator W_n at --w");
  mse_cmd->add_option("--w", mse.w, "circular parameter")->capture_default_str();
  mse_cmd->add_option("--alpha", mse.alpha, "Moebius center")->capture_default_str();
  mse_cmd->add_flag("--median-adjust", mse.median_adjust, "median-adjusted initializer for --circular");

  TailOptions tail;
  auto* tail_cmd = app.add_subcommand("simulate-tail", "Monte-Carlo tail probability P(|T - theta| > eps)");
  add_simulate_options(tail_cmd, tail);
  tail_cmd->add_option("--eps", tail.eps, "radius")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*sample_cmd) return do_sample(sample, out);
    if (*estimate_cmd) return do_estimate(estimate, in, out, err);
    if (*mle_cmd) return do_mle(mle_opts, in, out);
    if (*kl_cmd) return do_kl(kl, out);
    if (*rate_cmd) return do_rate(rate, out);
    if (*mse_cmd) return do_simulate_mse(mse, out, err);
    if (*tail_cmd) return do_simulate_tail(tail, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace cauchy_est::cli
