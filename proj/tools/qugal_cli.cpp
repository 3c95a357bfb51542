// Copyright 2026 The qugal Authors.
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

// qugal: run the named experiments from the command line.
//
//   qugal run --experiment qmmw-approx --config run.cfg --set rounds=1600 --out out/
//   qugal sweep --seeds 1..5 --experiment qugan-enttest --set target=ghz-4q --out out/
//   qugal presets

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include <CLI11.hpp>

#include "qugal/experiment.hpp"
#include "qugal/state_io.hpp"

namespace {

struct RunOptions {
  std::string experiment;
  std::string config_file;
  std::vector<std::string> overrides;
  std::string out_dir;
};

void add_run_options(CLI::App* cmd, RunOptions& opts) {
  cmd->add_option("--experiment,-e", opts.experiment, "experiment name");
  cmd->add_option("--config,-c", opts.config_file, "key=value config file");
  cmd->add_option("--set,-s", opts.overrides, "override one key (key=value), repeatable");
  cmd->add_option("--out,-o", opts.out_dir, "output directory (default: $QUGAL_OUT_DIR)");
}

qugal::ExperimentConfig build_config(const RunOptions& opts) {
  qugal::ExperimentConfig config;
  if (!opts.config_file.empty()) config.values = qugal::load_config_file(opts.config_file);
  for (const auto& o : opts.overrides) qugal::apply_override(config.values, o);
  if (!opts.experiment.empty()) config.values["experiment"] = opts.experiment;
  const auto it = config.values.find("experiment");
  if (it == config.values.end()) throw qugal::ConfigError("no experiment given (--experiment or config key)");
  config.experiment = it->second;
  return config;
}

std::filesystem::path resolve_out_dir(const RunOptions& opts) {
  if (!opts.out_dir.empty()) return opts.out_dir;
  if (const char* env = std::getenv("QUGAL_OUT_DIR"); env && *env) return env;
  throw qugal::ConfigError("no output directory (--out or QUGAL_OUT_DIR)");
}

std::pair<long, long> parse_seed_range(const std::string& text) {
  const auto dots = text.find("..");
  try {
    std::size_t used = 0;
    if (dots == std::string::npos) {
      const long v = std::stol(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return {v, v};
    }
    const std::string a = text.substr(0, dots), b = text.substr(dots + 2);
    std::size_t used_b = 0;
    const long lo = std::stol(a, &used), hi = std::stol(b, &used_b);
    if (used != a.size() || used_b != b.size() || lo > hi || lo < 0) throw std::invalid_argument(text);
    return {lo, hi};
  } catch (const std::exception&) {
    throw qugal::ConfigError("--seeds: expected a..b with 0 <= a <= b, got '" + text + "'");
  }
}

int cmd_run(const RunOptions& opts) {
  const auto config = build_config(opts);
  const auto out = resolve_out_dir(opts);
  const auto record = qugal::run_experiment(config);
  qugal::write_run(record, out);
  std::cout << record.summary.dump(2) << "\n";
  return qugal::kExitOk;
}

int cmd_sweep(const RunOptions& opts, const std::string& seeds, unsigned jobs) {
  const auto base = build_config(opts);
  const auto out = resolve_out_dir(opts);
  const auto [lo, hi] = parse_seed_range(seeds);
  const std::size_t n = std::size_t(hi - lo + 1);
  std::vector<nlohmann::ordered_json> summaries(n);
  std::vector<std::string> errors(n);
  std::vector<int> codes(n, qugal::kExitOk);

  std::mutex next_mutex;
  std::size_t next = 0;
  const auto worker = [&] {
    for (;;) {
      std::size_t i;
      {
        std::lock_guard lock(next_mutex);
        if (next == n) return;
        i = next++;
      }
      auto config = base;
      const long seed = lo + long(i);
      config.values["seed"] = std::to_string(seed);
      try {
        const auto record = qugal::run_experiment(config);
        qugal::write_run(record, out / ("seed-" + std::to_string(seed)));
        summaries[i] = record.summary;
      } catch (const std::exception& e) {
        errors[i] = e.what();
        codes[i] = qugal::exit_code_for(e);
      }
    }
  };
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < std::min<std::size_t>(jobs, n); ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  nlohmann::ordered_json all = nlohmann::ordered_json::array();
  int status = qugal::kExitOk;
  for (std::size_t i = 0; i < n; ++i) {
    const long seed = lo + long(i);
    if (codes[i] != qugal::kExitOk) {
      std::cerr << "seed " << seed << ": " << errors[i] << "\n";
      status = codes[i];
      all.push_back({{"seed", seed}, {"error", errors[i]}});
      continue;
    }
    all.push_back({{"seed", seed},
                   {"verdict", summaries[i]["verdict"]},
                   {"final_loss", summaries[i]["final_loss"]},
                   {"final_fidelity", summaries[i]["final_fidelity"]}});
  }
  std::ofstream(out / "sweep.json") << all.dump(2) << "\n";
  std::cout << all.dump(2) << "\n";
  return status;
}

int cmd_presets() {
  for (const auto& p : qugal::list_presets()) std::cout << p.name << "\t" << p.description << "\n";
  return qugal::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qugal: QMMW and QuGAN experiments"};
  app.set_version_flag("--version", qugal::version_string());
  app.require_subcommand(1);

  RunOptions run_opts, sweep_opts;
  auto* run = app.add_subcommand("run", "run one experiment");
  add_run_options(run, run_opts);

  std::string seeds;
  unsigned jobs = 0;
  auto* sweep = app.add_subcommand("sweep", "run one experiment over a range of seeds");
  add_run_options(sweep, sweep_opts);
  sweep->add_option("--seeds", seeds, "seed range a..b")->required();
  sweep->add_option("--jobs,-j", jobs, "worker threads (default: all cores)");

  app.add_subcommand("presets", "list named target states");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return qugal::kExitUsage;
  }

  try {
    if (*run) return cmd_run(run_opts);
    if (*sweep) return cmd_sweep(sweep_opts, seeds, jobs);
    return cmd_presets();
  } catch (const std::exception& e) {
    std::cerr << "qugal: error: " << e.what() << "\n";
    return qugal::exit_code_for(e);
  }
}
