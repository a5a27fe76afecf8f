// Copyright 2026 The lossbound Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "config.hpp"
#include "lossbound/bounds.hpp"
#include "lossbound/recsys.hpp"

namespace lossbound::cli {

namespace fs = std::filesystem;

namespace {

// ---------------------------------------------------------------------------
// Option structs, one per command.

struct CommonOptions {
  std::string config;
  std::uint64_t seed = 0;
  std::string out = ".";
};

struct VerifyOptions {
  CommonOptions common;
  std::size_t fuzz_cases = 100'000;
  std::size_t trials = 100'000;
  std::string populations = "10,100,1000";
  std::string ranks = "1,2,5,20";
  std::string negatives = "1,5,100";
  std::string metrics = "ndcg,mrr";
};

struct SurfaceOptions {
  CommonOptions common;
  std::size_t population = 1000;
  std::string negatives = "1,2,5,20,50,100";
  std::string ranks = "1:50";
  std::string metric = "ndcg";
  std::string losses = "bpr,cce";
  long long gamma0 = -1;
};

struct TrainOptions {
  CommonOptions common;
  std::string dataset;
  std::string format = "auto";
  std::string loss = "bpr";
  std::size_t negatives = 1;
  std::string scorer = "factor";
  std::size_t dim = 64;
  std::size_t batch_size = 128;
  double lr = 0.001;
  int epochs = 100;
  std::string optimizer = "adam";
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double init_std = 0.1;
  int cutoff = 10;
};

struct SweepOptions {
  TrainOptions train;
  std::string losses = "bce,bpr,cce";
  std::string negatives_list = "1,5";
  std::string seeds;
};

struct SynthOptions {
  CommonOptions common;
  std::size_t users = 200;
  std::size_t items = 200;
  std::size_t blocks = 10;
  std::size_t events_per_user = 12;
};

// ---------------------------------------------------------------------------
// Helpers

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    const auto e = item.find_last_not_of(" \t");
    out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

std::vector<LossKind> parse_losses(const std::string& text,
                                   const std::string& flag) {
  std::vector<LossKind> losses;
  for (const auto& name : split_list(text)) {
    const auto kind = parse_loss(name);
    if (!kind) {
      throw UsageError("--" + flag + ": unknown loss '" + name +
                       "' (expected bce, bpr or cce)");
    }
    losses.push_back(*kind);
  }
  if (losses.empty()) throw UsageError("--" + flag + ": empty list");
  return losses;
}

std::vector<MetricKind> parse_metrics(const std::string& text,
                                      const std::string& flag) {
  std::vector<MetricKind> metrics;
  for (const auto& name : split_list(text)) {
    const auto kind = parse_metric(name);
    if (!kind) {
      throw UsageError("--" + flag + ": unknown metric '" + name +
                       "' (expected ndcg or mrr)");
    }
    metrics.push_back(*kind);
  }
  if (metrics.empty()) throw UsageError("--" + flag + ": empty list");
  return metrics;
}

std::vector<long long> parse_positive_list(const std::string& text,
                                           const std::string& flag) {
  auto values = parse_int_list(split_list(text), flag);
  for (long long v : values) {
    if (v < 1) throw UsageError("--" + flag + ": values must be >= 1");
  }
  return values;
}

unsigned worker_count() {
  if (const char* env = std::getenv(kWorkersEnv)) {
    const int n = std::atoi(env);
    if (n > 0) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

fs::path prepare_out_dir(const std::string& dir) {
  const fs::path path(dir);
  std::error_code ec;
  fs::create_directories(path, ec);
  if (ec || !fs::is_directory(path)) {
    throw IoError("cannot create output directory " + path.string() +
                  (ec ? ": " + ec.message() : ""));
  }
  return path;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

void add_common(CLI::App* sub, CommonOptions& common) {
  sub->add_option("--config", common.config,
                  "Plain-text 'key = value' file; flags override it");
  sub->add_option("--seed", common.seed, "Root seed of every random stream");
  sub->add_option("--out", common.out, "Output directory");
}

void add_training_options(CLI::App* sub, TrainOptions& o) {
  sub->add_option("--dataset", o.dataset, "Interaction log")->required();
  sub->add_option("--format", o.format, "csv, movielens or auto (by extension)");
  sub->add_option("--scorer", o.scorer, "factor or history-mean");
  sub->add_option("--dim", o.dim, "Embedding dimension")
      ->check(CLI::PositiveNumber);
  sub->add_option("--batch-size", o.batch_size, "Examples per update")
      ->check(CLI::PositiveNumber);
  sub->add_option("--lr", o.lr, "Learning rate")->check(CLI::NonNegativeNumber);
  sub->add_option("--epochs", o.epochs, "Training epochs (0: evaluate only)")
      ->check(CLI::NonNegativeNumber);
  sub->add_option("--optimizer", o.optimizer, "adam or sgd");
  sub->add_option("--beta1", o.beta1, "Adam first-moment decay");
  sub->add_option("--beta2", o.beta2, "Adam second-moment decay");
  sub->add_option("--eps", o.eps, "Adam epsilon");
  sub->add_option("--init-std", o.init_std, "Std of the initial embeddings");
  sub->add_option("--cutoff", o.cutoff, "Metric cutoff k for NDCG@k / MRR@k")
      ->check(CLI::PositiveNumber);
}

ExperimentConfig resolved_config(const CLI::App* sub) {
  ExperimentConfig config;
  config.command = sub->get_name();
  for (const CLI::Option* opt : sub->get_options()) {
    const std::string name = opt->get_single_name();
    if (name == "help" || name == "config") continue;
    std::string value;
    if (opt->count() > 0) {
      const auto& results = opt->results();
      for (std::size_t i = 0; i < results.size(); ++i) {
        if (i) value += ',';
        value += results[i];
      }
    } else {
      value = opt->get_default_str();
    }
    config.entries.emplace_back(name, value);
  }
  return config;
}

TrainConfig to_train_config(const TrainOptions& o) {
  TrainConfig config;
  const auto loss = parse_loss(o.loss);
  if (!loss) throw UsageError("--loss: unknown loss '" + o.loss + "'");
  const auto scorer = parse_scorer(o.scorer);
  if (!scorer) throw UsageError("--scorer: unknown scorer '" + o.scorer + "'");
  const auto optimizer = parse_optimizer(o.optimizer);
  if (!optimizer) {
    throw UsageError("--optimizer: unknown optimizer '" + o.optimizer + "'");
  }
  config.loss = *loss;
  config.negatives = o.negatives;
  config.scorer = *scorer;
  config.dim = o.dim;
  config.batch_size = o.batch_size;
  config.learning_rate = o.lr;
  config.epochs = o.epochs;
  config.optimizer = *optimizer;
  config.beta1 = o.beta1;
  config.beta2 = o.beta2;
  config.epsilon = o.eps;
  config.init_std = o.init_std;
  config.seed = o.common.seed;
  config.cutoff = o.cutoff;
  try {
    config.validate();
  } catch (const InvalidInput& e) {
    throw UsageError(e.what());
  }
  return config;
}

InteractionDataset load_dataset(const TrainOptions& o, std::ostream& err) {
  const fs::path path(o.dataset);
  if (!fs::exists(path)) {
    throw IoError("dataset file not found: " + path.string());
  }
  InteractionFormat format = InteractionFormat::kCsv;
  if (o.format == "auto") {
    if (path.extension() == ".dat") format = InteractionFormat::kMovieLens;
  } else {
    const auto parsed = parse_interaction_format(o.format);
    if (!parsed) throw UsageError("--format: unknown format '" + o.format + "'");
    format = *parsed;
  }
  const InteractionDataset dataset = load_interactions(path, format);
  if (dataset.dropped_users > 0) {
    err << "warning: dropped " << dataset.dropped_users
        << " user(s) with fewer than " << kMinEventsPerUser
        << " interactions\n";
  }
  return dataset;
}

std::string describe(const ScoreSet& scores) {
  std::ostringstream ss;
  ss.precision(17);
  ss << "s+=" << scores.positive_score() << " negatives=[";
  const auto negs = scores.negative_scores();
  for (std::size_t i = 0; i < negs.size(); ++i) {
    if (i) ss << ", ";
    ss << negs[i];
  }
  ss << "] K=" << negs.size();
  return ss.str();
}

// ---------------------------------------------------------------------------
// Commands

int cmd_verify(const VerifyOptions& o, const CLI::App* sub, std::ostream& out,
               std::ostream& err) {
  if (o.trials == 0) throw UsageError("--trials must be >= 1");
  if (o.fuzz_cases == 0) throw UsageError("--fuzz-cases must be >= 1");
  const auto populations = parse_positive_list(o.populations, "populations");
  const auto ranks = parse_positive_list(o.ranks, "ranks");
  const auto ks = parse_positive_list(o.negatives, "negatives");
  const auto metrics = parse_metrics(o.metrics, "metrics");

  const fs::path dir = prepare_out_dir(o.common.out);
  write_config_file(dir / "resolved_config.txt", resolved_config(sub));

  std::optional<std::string> counterexample;

  std::vector<FuzzSummary> fuzz;
  for (ScoreGenerator gen : {ScoreGenerator::kUniform, ScoreGenerator::kGaussian,
                             ScoreGenerator::kNearTie}) {
    fuzz.push_back(fuzz_full_chain(o.fuzz_cases, o.common.seed, gen));
    fuzz.push_back(fuzz_sampled_lower_bounds(o.fuzz_cases, o.common.seed, gen));
  }
  {
    auto csv = open_output(dir / "fuzz_summary.csv");
    csv << "suite,generator,cases,failures\n";
    for (const auto& f : fuzz) {
      csv << f.name << ',' << to_string(f.generator) << ',' << f.cases << ','
          << f.failures << '\n';
      out << f.name << " [" << to_string(f.generator) << "]: " << f.failures
          << "/" << f.cases << " failures\n";
      if (f.first_failure && !counterexample) {
        counterexample = f.name + " violated (" + f.first_failure->check +
                         "): " + describe(f.first_failure->scores);
      }
    }
  }

  const unsigned workers = worker_count();
  std::vector<BoundReport> reports;
  for (long long n : populations) {
    for (long long r : ranks) {
      if (r > n + 1) continue;
      Rng rng = make_stream(o.common.seed,
                            (static_cast<std::uint64_t>(n) << 20) |
                                static_cast<std::uint64_t>(r));
      const ScoreSet scores = make_rank_scenario(
          static_cast<std::size_t>(n), Rank(r), rng);
      for (long long k : ks) {
        if (k > n) continue;
        for (MetricKind metric : metrics) {
          SamplerConfig config{static_cast<std::size_t>(k), o.common.seed};
          BoundReport report =
              monte_carlo_bound_check(scores, config, metric, o.trials, workers);
          report.scenario.generator = "rank_scenario";
          for (const auto& s : report.per_loss) {
            if ((!s.consistent() || s.lower_bound_passes != s.trials) &&
                !counterexample) {
              std::ostringstream ss;
              ss << "Monte Carlo bound violated: N=" << n << " r+=" << r
                 << " K=" << k << " loss=" << to_string(s.loss)
                 << " metric=" << to_string(s.metric)
                 << " frequency=" << s.frequency
                 << " bound=" << s.theoretical_bound
                 << " std_err=" << s.std_err
                 << " lower_bound_passes=" << s.lower_bound_passes << "/" << s.trials;
              counterexample = ss.str();
            }
          }
          reports.push_back(std::move(report));
        }
      }
    }
  }
  {
    auto csv = open_output(dir / "monte_carlo.csv");
    write_monte_carlo_csv(csv, reports);
  }
  out << reports.size() << " Monte Carlo scenarios, " << o.trials
      << " trials each\n";

  if (counterexample) {
    err << "counterexample: " << *counterexample << '\n';
    return kExitCounterexample;
  }
  out << "all checks passed\n";
  return kExitOk;
}

int cmd_surface(const SurfaceOptions& o, const CLI::App* sub,
                std::ostream& out) {
  const auto ks = parse_positive_list(o.negatives, "negatives");
  const auto ranks = parse_positive_list(o.ranks, "ranks");
  const auto losses = parse_losses(o.losses, "losses");
  const auto metric = parse_metric(o.metric);
  if (!metric) throw UsageError("--metric: unknown metric '" + o.metric + "'");

  const std::vector<std::size_t> k_values(ks.begin(), ks.end());
  const std::vector<std::int64_t> rank_values(ranks.begin(), ranks.end());
  std::optional<std::size_t> gamma0;
  if (o.gamma0 >= 0) gamma0 = static_cast<std::size_t>(o.gamma0);

  std::vector<SurfaceCell> cells;
  for (LossKind loss : losses) {
    auto part = bound_surface(o.population, k_values, rank_values, *metric,
                              loss, gamma0);
    cells.insert(cells.end(), part.begin(), part.end());
  }

  const fs::path dir = prepare_out_dir(o.common.out);
  {
    auto csv = open_output(dir / "surface.csv");
    write_surface_csv(csv, cells);
    if (!csv) throw IoError("failed writing " + (dir / "surface.csv").string());
  }
  write_config_file(dir / "resolved_config.txt", resolved_config(sub));
  out << "wrote " << cells.size() << " surface rows to "
      << (dir / "surface.csv").string() << '\n';
  return kExitOk;
}

int cmd_train(const TrainOptions& o, const CLI::App* sub, std::ostream& out,
              std::ostream& err) {
  TrainConfig config = to_train_config(o);
  const InteractionDataset dataset = load_dataset(o, err);
  const SplitDataset split = split_leave_last(dataset);
  const fs::path dir = prepare_out_dir(o.common.out);
  write_config_file(dir / "resolved_config.txt", resolved_config(sub));
  {
    auto csv = open_output(dir / "id_mapping.csv");
    write_id_mapping(csv, dataset);
  }

  const TrainResult result = train(split, config);
  {
    auto csv = open_output(dir / "trace.csv");
    write_trace_csv(csv, result.trace);
  }
  {
    auto model = open_output(dir / "model.txt");
    write_model(model, result.params);
  }
  const EvalResult test =
      evaluate(result.params, split, config.cutoff, EvalSplit::kTest);
  out << "best epoch " << result.best_epoch << ": validation NDCG@"
      << config.cutoff << " = " << result.best_validation_ndcg
      << ", test NDCG@" << config.cutoff << " = " << test.ndcg << ", test MRR@"
      << config.cutoff << " = " << test.mrr << '\n';
  return kExitOk;
}

int cmd_sweep(const SweepOptions& o, const CLI::App* sub, std::ostream& out,
              std::ostream& err) {
  const auto losses = parse_losses(o.losses, "losses");
  const auto ks = parse_positive_list(o.negatives_list, "negatives");
  std::vector<long long> seeds;
  if (o.seeds.empty()) {
    seeds.push_back(static_cast<long long>(o.train.common.seed));
  } else {
    seeds = parse_int_list(split_list(o.seeds), "seeds");
  }
  const TrainConfig base = to_train_config(o.train);
  const SplitDataset split = split_leave_last(load_dataset(o.train, err));
  const fs::path dir = prepare_out_dir(o.train.common.out);
  write_config_file(dir / "resolved_config.txt", resolved_config(sub));

  struct Cell {
    TrainConfig config;
    std::vector<TraceRow> trace;
    std::string error;
  };
  std::vector<Cell> cells;
  for (LossKind loss : losses) {
    for (long long k : ks) {
      for (long long seed : seeds) {
        Cell cell;
        cell.config = base;
        cell.config.loss = loss;
        cell.config.negatives = static_cast<std::size_t>(k);
        cell.config.seed = static_cast<std::uint64_t>(seed);
        cells.push_back(std::move(cell));
      }
    }
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      try {
        cells[i].trace = train(split, cells[i].config).trace;
      } catch (const std::exception& e) {
        cells[i].error = e.what();
      }
    }
  };
  const unsigned threads =
      std::min<unsigned>(worker_count(), static_cast<unsigned>(cells.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::size_t failed = 0;
  {
    auto csv = open_output(dir / "sweep.csv");
    auto status = open_output(dir / "sweep_status.csv");
    csv << "loss,negatives,seed,epoch,split,metric,cutoff,value\n";
    status << "loss,negatives,seed,status,message\n";
    csv.precision(17);
    for (const auto& cell : cells) {
      const auto& c = cell.config;
      status << to_string(c.loss) << ',' << c.negatives << ',' << c.seed << ','
             << (cell.error.empty() ? "ok" : "failed") << ',' << '"'
             << cell.error << '"' << '\n';
      if (!cell.error.empty()) {
        ++failed;
        err << "cell loss=" << to_string(c.loss) << " K=" << c.negatives
            << " seed=" << c.seed << " failed: " << cell.error << '\n';
        continue;
      }
      for (const auto& row : cell.trace) {
        csv << to_string(c.loss) << ',' << c.negatives << ',' << c.seed << ','
            << row.epoch << ',' << to_string(row.split) << ','
            << to_string(row.metric) << ',' << row.cutoff << ',' << row.value
            << '\n';
      }
    }
  }
  out << cells.size() - failed << "/" << cells.size()
      << " sweep cells completed\n";
  return failed == 0 ? kExitOk : kExitRuntime;
}

int cmd_synth(const SynthOptions& o, const CLI::App* sub, std::ostream& out) {
  BlockDatasetSpec spec{o.users, o.items, o.blocks, o.events_per_user};
  InteractionDataset dataset;
  try {
    dataset = make_block_dataset(spec, o.common.seed);
  } catch (const InvalidInput& e) {
    throw UsageError(e.what());
  }
  const fs::path dir = prepare_out_dir(o.common.out);
  {
    auto csv = open_output(dir / "interactions.csv");
    write_interactions_csv(csv, dataset);
  }
  write_config_file(dir / "resolved_config.txt", resolved_config(sub));
  out << "wrote " << dataset.events.size() << " interactions to "
      << (dir / "interactions.csv").string() << '\n';
  return kExitOk;
}

// Splices `key = value` entries from --config in front of the user's own
// flags. Entries whose key the user also passed on the command line are
// dropped, so flags always win.
std::vector<std::string> merge_config(CLI::App& app,
                                      const std::vector<std::string>& args) {
  if (args.empty() || args[0].starts_with("-")) return args;
  CLI::App* sub = app.get_subcommand_no_throw(args[0]);
  if (sub == nullptr) return args;

  std::string config_path;
  std::set<std::string> given;
  for (std::size_t i = 1; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (!a.starts_with("--")) continue;
    const auto eq = a.find('=');
    const std::string key = a.substr(2, eq == std::string::npos ? eq : eq - 2);
    given.insert(key);
    if (key == "config") {
      if (eq != std::string::npos) {
        config_path = a.substr(eq + 1);
      } else if (i + 1 < args.size()) {
        config_path = args[i + 1];
      }
    }
  }
  if (config_path.empty()) return args;

  std::vector<std::string> merged{args[0]};
  for (const auto& [key, value] : read_config_file(config_path)) {
    const CLI::Option* opt = sub->get_option_no_throw("--" + key);
    if (opt == nullptr || key == "config" || key == "help") {
      throw UsageError("unknown config key '" + key + "' for command '" +
                       args[0] + "'");
    }
    if (given.count(key)) continue;
    merged.push_back("--" + key + "=" + value);
  }
  merged.insert(merged.end(), args.begin() + 1, args.end());
  return merged;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Loss/metric bound verification and sampled-loss training"};
  app.name("lossbound");
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();

  VerifyOptions verify;
  auto* verify_cmd =
      app.add_subcommand("verify", "Fuzz the deterministic inequalities and "
                                   "Monte Carlo check the bound probabilities");
  add_common(verify_cmd, verify.common);
  verify_cmd->add_option("--fuzz-cases", verify.fuzz_cases,
                         "Random score sets per fuzz suite and generator");
  verify_cmd->add_option("--trials", verify.trials,
                         "Monte Carlo trials per scenario");
  verify_cmd->add_option("--populations", verify.populations,
                         "Negative population sizes N");
  verify_cmd->add_option("--ranks", verify.ranks, "True ranks r+");
  verify_cmd->add_option("--negatives", verify.negatives, "Sample sizes K");
  verify_cmd->add_option("--metrics", verify.metrics, "ndcg and/or mrr");

  SurfaceOptions surface;
  auto* surface_cmd = app.add_subcommand(
      "surface", "Bound probability grid over K and r+ as CSV");
  add_common(surface_cmd, surface.common);
  surface_cmd->add_option("--population", surface.population,
                          "Negative population size N")
      ->check(CLI::PositiveNumber);
  surface_cmd->add_option("--negatives", surface.negatives,
                          "K values, e.g. 1,2,5 or 1:10");
  surface_cmd->add_option("--ranks", surface.ranks, "r+ values, e.g. 1:50");
  surface_cmd->add_option("--metric", surface.metric, "ndcg or mrr");
  surface_cmd->add_option("--losses", surface.losses, "Subset of bce,bpr,cce");
  surface_cmd->add_option("--gamma0", surface.gamma0,
                          "|Gamma_0| for BCE cells (-1: worst case r+ - 1)");

  TrainOptions train_opts;
  auto* train_cmd =
      app.add_subcommand("train", "Train one model with a sampled loss");
  add_common(train_cmd, train_opts.common);
  add_training_options(train_cmd, train_opts);
  train_cmd->add_option("--loss", train_opts.loss, "bce, bpr or cce");
  train_cmd->add_option("--negatives", train_opts.negatives,
                        "Negatives K per positive")
      ->check(CLI::PositiveNumber);

  SweepOptions sweep;
  auto* sweep_cmd = app.add_subcommand(
      "sweep", "Train every (loss, K, seed) combination and merge the traces");
  add_common(sweep_cmd, sweep.train.common);
  add_training_options(sweep_cmd, sweep.train);
  sweep_cmd->add_option("--losses", sweep.losses, "Subset of bce,bpr,cce");
  sweep_cmd->add_option("--negatives", sweep.negatives_list, "K values");
  sweep_cmd->add_option("--seeds", sweep.seeds,
                        "Seed list (defaults to --seed)");

  SynthOptions synth;
  auto* synth_cmd = app.add_subcommand(
      "synth", "Write a synthetic block-preference interaction log");
  add_common(synth_cmd, synth.common);
  synth_cmd->add_option("--users", synth.users)->check(CLI::PositiveNumber);
  synth_cmd->add_option("--items", synth.items)->check(CLI::PositiveNumber);
  synth_cmd->add_option("--blocks", synth.blocks)->check(CLI::PositiveNumber);
  synth_cmd->add_option("--events-per-user", synth.events_per_user)
      ->check(CLI::PositiveNumber);

  try {
    std::vector<std::string> merged = merge_config(app, args);
    std::reverse(merged.begin(), merged.end());
    app.parse(merged);

    if (*verify_cmd) return cmd_verify(verify, verify_cmd, out, err);
    if (*surface_cmd) return cmd_surface(surface, surface_cmd, out);
    if (*train_cmd) return cmd_train(train_opts, train_cmd, out, err);
    if (*sweep_cmd) return cmd_sweep(sweep, sweep_cmd, out, err);
    if (*synth_cmd) return cmd_synth(synth, synth_cmd, out);
    return kExitUsage;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InvalidInput& e) {
    err << "invalid input: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace lossbound::cli
