#include "evidenza/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "evidenza/bench.hpp"
#include "evidenza/error.hpp"
#include "evidenza/report.hpp"

namespace evidenza {
namespace {

struct UsageError : Error {
  using Error::Error;
};

struct Flags {
  std::string model;
  std::string estimator;
  std::size_t m = 0;
  std::size_t n = 0;
  std::size_t live = 0;
  double q = 0.0;
  double eps = 0.0;
  std::uint64_t seed = 0;
  std::string format;
  std::string out;
  std::size_t reps = 0;
  std::size_t levels = 0;
  std::size_t per_level = 0;
  std::size_t max_iter = 0;
  std::size_t threads = 0;
  std::string config;
  std::vector<std::size_t> ngrid = {16, 32, 64, 128, 256};
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--model", f.model, "Model id: " + [] {
    std::string ids;
    for (const auto& id : model_ids()) ids += (ids.empty() ? "" : ", ") + id;
    return ids;
  }());
  sub->add_option("--estimator", f.estimator, "Estimator id");
  sub->add_option("--m", f.m, "Prior draws behind the empirical quantile function");
  sub->add_option("--n", f.n, "Grid points or Monte Carlo draws");
  sub->add_option("--live", f.live, "Nested sampling live points");
  sub->add_option("--q", f.q, "Vertical ladder ratio in (0,1)");
  sub->add_option("--eps", f.eps, "Nested sampling stopping threshold");
  sub->add_option("--seed", f.seed, "Master seed (default: $EVIDENZA_SEED)");
  sub->add_option("--format", f.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--out", f.out, "Output file (default: standard output)");
  sub->add_option("--levels", f.levels, "Vertical ladder depth");
  sub->add_option("--per-level", f.per_level, "Constrained draws per ladder level");
  sub->add_option("--max-iter", f.max_iter, "Nested sampling iteration cap");
  sub->add_option("--threads", f.threads, "Worker threads for replication (0: all cores)");
  sub->add_option("--config", f.config, "JSON experiment config; flags override its fields");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Built-in defaults < EVIDENZA_SEED < --config < flags.
ExperimentConfig resolve(const CLI::App& sub, const Flags& f) {
  ExperimentConfig c;
  c.model_id.clear();
  if (const char* env = std::getenv("EVIDENZA_SEED"); env && *env) {
    try {
      std::size_t used = 0;
      c.seed = std::stoull(env, &used);
      if (env[used] != '\0') throw std::invalid_argument(env);
    } catch (const std::exception&) {
      throw UsageError(std::string("EVIDENZA_SEED is not an unsigned integer: ") + env);
    }
  }
  if (sub.count("--config")) c = config_from_json(read_file(f.config), c);

  const auto given = [&](const char* name) {
    const CLI::Option* opt = sub.get_option_no_throw(name);
    return opt != nullptr && opt->count() > 0;
  };
  if (given("--model")) c.model_id = f.model;
  if (given("--estimator")) c.estimator_id = f.estimator;
  if (given("--m")) c.m = f.m;
  if (given("--n")) c.n = f.n;
  if (given("--live")) c.n_live = f.live;
  if (given("--q")) c.q = f.q;
  if (given("--eps")) c.epsilon = f.eps;
  if (given("--seed")) c.seed = f.seed;
  if (given("--format")) c.output_format = f.format == "json" ? OutputFormat::json : OutputFormat::csv;
  if (given("--out")) c.output_path = f.out;
  if (given("--reps")) c.replicates = f.reps;
  if (given("--levels")) c.levels = f.levels;
  if (given("--per-level")) c.per_level = f.per_level;
  if (given("--max-iter")) c.max_iter = f.max_iter;
  if (given("--threads")) c.threads = f.threads;

  if (c.model_id.empty()) throw UsageError("--model is required\n" + sub.help());
  c.validate();
  return c;
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error("cannot write " + path);
  file << text;
  if (!file) throw Error("write failed: " + path);
}

void cmd_estimate(const ExperimentConfig& c, std::ostream& out) {
  const auto model = make_model(c.model_id);
  SeededStream stream(c.seed, 0);
  emit(c.output_path, estimate_json(run_estimator(*model, c, stream), c.model_id) + "\n", out);
}

void cmd_replicate(const ExperimentConfig& c, std::ostream& out) {
  const auto report = replicate(c);
  std::ostringstream text;
  if (c.output_format == OutputFormat::csv) {
    write_csv(report, text);
  } else {
    text << report_json(report) << '\n';
  }
  emit(c.output_path, text.str(), out);
}

void cmd_convergence(const ExperimentConfig& c, const std::vector<std::size_t>& grid,
                     std::ostream& out) {
  if (grid.size() < 3) throw UsageError("--ngrid needs at least three entries");
  const auto fit = slope_fit(c, grid);
  out << slope_fit_json(fit, c) << '\n';
  if (!c.output_path.empty()) {
    std::ostringstream csv;
    write_slope_csv(fit, csv);
    emit(c.output_path, csv.str(), out);
  }
}

void cmd_lorenz(const ExperimentConfig& c, std::ostream& out) {
  const auto model = make_model(c.model_id);
  SeededStream stream(c.seed, 0);
  const auto result = vertical_geometric(*model, c.q, c.levels, c.per_level, stream);
  std::ostringstream csv;
  write_lorenz_csv(result, csv);
  emit(c.output_path, csv.str(), out);
}

}  // namespace

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bayesian evidence estimation benchmarks", "evidenza"};
  app.require_subcommand(1);

  Flags f;
  auto* estimate = app.add_subcommand("estimate", "Run one estimate and print it as JSON");
  auto* rep = app.add_subcommand("replicate", "Replicate an estimator and report RMSE and MAPE");
  auto* conv = app.add_subcommand("convergence", "Fit the log-log RMSE slope over a grid of n");
  auto* lorenz = app.add_subcommand("lorenz", "Write the vertical likelihood ladder as CSV");
  for (auto* sub : {estimate, rep, conv, lorenz}) add_common(sub, f);
  for (auto* sub : {rep, conv}) sub->add_option("--reps", f.reps, "Replicates");
  conv->add_option("--ngrid", f.ngrid, "Comma-separated grid of n")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    const ExperimentConfig config = resolve(*sub, f);
    if (sub == estimate) {
      cmd_estimate(config, out);
    } else if (sub == rep) {
      cmd_replicate(config, out);
    } else if (sub == conv) {
      cmd_convergence(config, f.ngrid, out);
    } else {
      cmd_lorenz(config, out);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}

}  // namespace evidenza
