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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include <sys/wait.h>
#include <unistd.h>

#include <catch2/catch_amalgamated.hpp>

#include "qugal/experiment.hpp"
#include "qugal/state_io.hpp"

using namespace qugal;
using Catch::Approx;
using Catch::Matchers::ContainsSubstring;
namespace fs = std::filesystem;

namespace {

ExperimentConfig make(const std::string& experiment, ConfigValues values) {
  values["experiment"] = experiment;
  return {experiment, std::move(values)};
}

std::vector<std::vector<std::string>> csv_rows(const std::string& csv) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const std::exception& e) {
    return e.what();
  }
  return "no error";
}

fs::path scratch_dir(const std::string& tag) {
  const fs::path p = fs::temp_directory_path() / ("qugal-test-" + tag + "-" + std::to_string(::getpid()));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("numbers print with 17 significant digits and read back exactly", "[experiment]") {
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(0.5) == "0.5");
  CHECK(format_number(1e-20) == "9.9999999999999995e-21");
  for (double v : {0.1, 1.0 / 3.0, 0.56123456789, 1e-300, 123456.789}) {
    CHECK(std::stod(format_number(v)) == v);
  }
}

TEST_CASE("config text parsing", "[experiment]") {
  const auto v = parse_config_text("# comment\n rounds = 400 \n\ntarget=ghz-4q # trailing\n");
  CHECK(v.at("rounds") == "400");
  CHECK(v.at("target") == "ghz-4q");
  CHECK_THAT(error_of([] { parse_config_text("rounds = 4\nbogus = 1\n", "run.cfg"); }),
             ContainsSubstring("run.cfg:2: unknown config key 'bogus'"));
  CHECK_THAT(error_of([] { parse_config_text("rounds 4\n"); }), ContainsSubstring("expected key=value"));
  CHECK_THAT(error_of([] { parse_config_text("rounds =\n"); }), ContainsSubstring("empty value"));
}

TEST_CASE("overrides replace file values", "[experiment]") {
  auto v = parse_config_text("rounds = 400\n");
  apply_override(v, "rounds=1600");
  CHECK(v.at("rounds") == "1600");
  CHECK_THROWS_AS(apply_override(v, "nope=1"), ConfigError);
}

TEST_CASE("pure state files", "[state-io]") {
  const auto zero = std::get<PureState<double>>(parse_state_text("1 0\n0 0\n"));
  CHECK(zero.n_qubits() == 1);
  CHECK(zero.amplitudes()(0) == std::complex<double>(1, 0));
  const auto bell = std::get<PureState<double>>(
      parse_state_text("0.7071067811865476 0\n0 0\n0 0\n0.7071067811865476 0\n"));
  CHECK(std::abs(bell.amplitudes().squaredNorm() - 1.0) < 1e-10);
  // within 1e-6: renormalized
  const auto near = std::get<PureState<double>>(parse_state_text("1.0000001 0\n0 0\n"));
  CHECK(std::abs(near.amplitudes().squaredNorm() - 1.0) < 1e-12);
}

TEST_CASE("density state files", "[state-io]") {
  const auto d = std::get<DensityMatrix<double>>(parse_state_text("2\n0.5 0 0 0\n0 0 0.5 0\n"));
  const auto eig = herm_eig(d.matrix());
  CHECK(eig.eigenvalues(0) == Approx(0.5));
  CHECK(eig.eigenvalues(1) == Approx(0.5));
  const auto off = std::get<DensityMatrix<double>>(parse_state_text("2\n0.5 0 0 -0.25\n0 0.25 0.5 0\n"));
  CHECK(off.matrix()(0, 1) == std::complex<double>(0, -0.25));
}

TEST_CASE("malformed state files are rejected with line numbers", "[state-io]") {
  const auto err = [](const std::string& text) { return error_of([&] { parse_state_text(text, "s.txt"); }); };
  CHECK_THAT(err("1 0\n0 0 0\n"), ContainsSubstring("s.txt:2: expected 're im'"));
  CHECK_THAT(err("1 0\n# c\n0 x\n"), ContainsSubstring("s.txt:3: not a finite number"));
  CHECK_THAT(err("1 0\n0 1\n"), ContainsSubstring("squared norm deviates"));
  CHECK_THAT(err("1 0\n0 1\n"), ContainsSubstring("lines 1-2"));
  CHECK_THAT(err("1 0\n0 0\n0 0\n"), ContainsSubstring("not a power of two"));
  CHECK_THAT(err("# nothing\n"), ContainsSubstring("no data rows"));
  CHECK_THAT(err("3\n1 0 0 0 0 0\n"), ContainsSubstring("s.txt:1: dimension must be a power of two"));
  CHECK_THAT(err("2\n0.5 0 0 0\n0 0 0.5\n"), ContainsSubstring("s.txt:3: expected 4 values"));
  CHECK_THAT(err("2\n0.5 0 0.1 0\n0 0 0.5 0\n"), ContainsSubstring("not Hermitian"));
  CHECK_THAT(err("2\n0.6 0 0 0\n0 0 0.6 0\n"), ContainsSubstring("trace is"));
  CHECK_THAT(err("2\n1.5 0 0 0\n0 0 -0.5 0\n"), ContainsSubstring("smallest eigenvalue"));
  CHECK_THROWS_AS(parse_state_text("1 0\n0 1\n"), StateFileError);
  CHECK_THROWS_AS(load_state_file("/nonexistent/state.txt"), StateFileError);
}

TEST_CASE("presets are the documented states", "[state-io]") {
  const auto rho = std::get<DensityMatrix<double>>(preset_state("rho-sep-4q")).matrix();
  CHECK(rho(0, 0).real() == 0.5);
  CHECK(rho(15, 15).real() == 0.5);
  CHECK(rho.cwiseAbs().sum() == Approx(1.0));
  const double h = 1.0 / std::sqrt(2.0);
  const auto psi = std::get<PureState<double>>(preset_state("psi-sep")).amplitudes();
  CHECK(psi(0b0000).real() == Approx(h));
  CHECK(psi(0b1000).real() == Approx(h));
  CHECK(psi.cwiseAbs().sum() == Approx(2 * h));
  const auto ghz = std::get<PureState<double>>(preset_state("ghz-4q")).amplitudes();
  CHECK(ghz(0).real() == Approx(h));
  CHECK(ghz(15).real() == Approx(h));
  CHECK(ghz.cwiseAbs().sum() == Approx(2 * h));
  for (const auto& p : list_presets()) CHECK(is_preset(p.name));
  CHECK_THROWS_AS(preset_state("nope"), StateFileError);
}

TEST_CASE("maximally mixed target keeps the loss at one half", "[experiment]") {
  const auto rec = run_experiment(make("qmmw-approx", {{"target", "mixed-1q"}, {"rounds", "50"}}));
  const auto rows = csv_rows(rec.trace_csv);
  REQUIRE(rows.size() == 51);
  CHECK(rows[0] == std::vector<std::string>{"round", "loss", "fidelity", "gen_regret_rate", "disc_regret_rate"});
  for (std::size_t i = 1; i < rows.size(); ++i) {
    REQUIRE(rows[i].size() == 5);
    CHECK(rows[i][1] == "0.5");
    CHECK(rows[i][3].empty());
  }
  CHECK(rec.summary["final_loss"].get<double>() == Approx(0.5));
}

TEST_CASE("every experiment writes a schema-valid summary", "[experiment]") {
  const std::vector<ExperimentConfig> runs{
      make("qmmw-approx", {{"rounds", "100"}}),
      make("regret-audit", {{"rounds", "100"}}),
      make("qmmw-enttest", {{"rounds", "100"}, {"target", "ghz-4q"}}),
      make("qugan-enttest", {{"rounds", "20"}, {"generator_blocks", "2"}, {"discriminator_blocks", "1"}}),
      make("sign-resolve", {{"rounds", "100"}}),
      make("sign-resolve", {{"algorithm", "qugan"}, {"rounds", "10"}, {"generator_blocks", "1"},
                            {"discriminator_blocks", "1"}}),
  };
  for (const auto& cfg : runs) {
    const auto rec = run_experiment(cfg);
    INFO(cfg.experiment);
    CHECK(check_summary_schema(rec.summary).empty());
    const auto rows = csv_rows(rec.trace_csv);
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const double loss = std::stod(rows[i][1]);
      CHECK((loss >= 0.0 && loss <= 1.0));
    }
    CHECK(rec.summary["config"]["experiment"] == cfg.experiment);
  }
}

TEST_CASE("schema check reports missing and mistyped fields", "[experiment]") {
  auto s = run_experiment(make("qmmw-approx", {{"rounds", "100"}})).summary;
  s.erase("verdict");
  s["rounds"] = "many";
  const auto problems = check_summary_schema(s);
  CHECK(problems.size() == 2);
}

TEST_CASE("regret audit fills the regret columns", "[experiment]") {
  const auto rec = run_experiment(make("regret-audit", {{"rounds", "100"}}));
  const auto rows = csv_rows(rec.trace_csv);
  CHECK_FALSE(rows[1][3].empty());
  CHECK_FALSE(rows[1][4].empty());
  const auto& r = rec.summary["result"];
  CHECK(r["generator_regret_rate"].get<double>() ==
        Approx(r["generator_regret_rate_replayed"].get<double>()).margin(1e-10));
  CHECK_THROWS_AS(run_experiment(make("regret-audit", {{"rounds", "100"}, {"audit", "false"}})), ConfigError);
}

TEST_CASE("qmmw sign resolution picks the positive exponents", "[experiment]") {
  const auto rec = run_experiment(make("sign-resolve", {}));
  const auto& sel = rec.summary["result"]["selected"];
  REQUIRE(sel.is_object());
  CHECK(sel["generator_sign"] == 1);
  CHECK(sel["discriminator_sign"] == 1);
}

TEST_CASE("identical configs give identical bytes", "[experiment][property]") {
  const auto cfg = make("qugan-enttest", {{"rounds", "15"}, {"generator_blocks", "2"}, {"seed", "4"}});
  CHECK(run_experiment(cfg).trace_csv == run_experiment(cfg).trace_csv);
  const auto q = make("regret-audit", {{"rounds", "64"}});
  CHECK(run_experiment(q).trace_csv == run_experiment(q).trace_csv);
}

TEST_CASE("errors map to distinct exit codes", "[experiment]") {
  const auto code = [](const ExperimentConfig& cfg) {
    try {
      run_experiment(cfg);
    } catch (const std::exception& e) {
      return exit_code_for(e);
    }
    return int(kExitOk);
  };
  CHECK(code(make("nope", {})) == kExitUnknownExperiment);
  CHECK(code(make("qmmw-approx", {{"target", "/nonexistent.txt"}})) == kExitStateFile);
  CHECK(code(make("qmmw-enttest", {{"split", "1|1"}})) == kExitDimension);
  CHECK(code(make("qmmw-approx", {{"rounds", "abc"}})) == kExitConfig);
  CHECK(code(make("qmmw-enttest", {{"target", "rho-sep-4q"}})) == kExitConfig);
  CHECK(code(make("qmmw-approx", {{"rounds", "2"}})) == kExitConfig);
  CHECK_THAT(error_of([] { run_experiment(make("nope", {})); }), ContainsSubstring("unknown experiment 'nope'"));
}

TEST_CASE("state files work as targets", "[experiment]") {
  const auto dir = scratch_dir("target");
  const auto file = dir / "plus.txt";
  std::ofstream(file) << "# |+>\n0.7071067811865476 0\n0.7071067811865476 0\n";
  const auto rec = run_experiment(make("qmmw-approx", {{"target", file.string()}, {"rounds", "100"}}));
  CHECK(rec.summary["n_qubits"] == 1);
  CHECK(rec.summary["final_fidelity"].get<double>() > 0.8);
  fs::remove_all(dir);
}

TEST_CASE("runs are written to the output directory", "[experiment]") {
  const auto dir = scratch_dir("write") / "nested";
  const auto rec = run_experiment(make("qmmw-approx", {{"rounds", "100"}}));
  write_run(rec, dir);
  CHECK(slurp(dir / "trace.csv") == rec.trace_csv);
  CHECK(nlohmann::ordered_json::parse(slurp(dir / "summary.json")) == rec.summary);
  fs::remove_all(dir.parent_path());
}

// ---------------------------------------------------------------------------
// Command line

namespace {

int shell(const std::string& cmd) {
  const int status = std::system((cmd + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

const std::string cli = QUGAL_CLI_PATH;

}  // namespace

TEST_CASE("cli subcommands and exit codes", "[cli]") {
  const auto dir = scratch_dir("cli");
  const std::string out = (dir / "run").string();
  CHECK(shell(cli + " presets") == kExitOk);
  CHECK(shell(cli) == kExitUsage);
  CHECK(shell(cli + " run --bogus") == kExitUsage);
  CHECK(shell(cli + " run --experiment nope --out " + out) == kExitUnknownExperiment);
  CHECK(shell(cli + " run --experiment qmmw-approx --set target=/nonexistent --out " + out) == kExitStateFile);
  CHECK(shell(cli + " run --experiment qmmw-enttest --set 'split=3|3' --set target=psi-sep --out " + out) ==
        kExitDimension);
  CHECK(shell(cli + " run --experiment qmmw-approx --set bogus=1 --out " + out) == kExitConfig);
  CHECK(shell("env -u QUGAL_OUT_DIR " + cli + " run --experiment qmmw-approx") == kExitConfig);
  CHECK(shell(cli + " run --experiment qmmw-approx --config /nonexistent.cfg --out " + out) == kExitConfig);

  std::ofstream(dir / "run.cfg") << "experiment = qmmw-approx\nrounds = 400\n";
  CHECK(shell(cli + " run --config " + (dir / "run.cfg").string() + " --set rounds=100 --out " + out) == kExitOk);
  const auto summary = nlohmann::ordered_json::parse(slurp(dir / "run" / "summary.json"));
  CHECK(summary["rounds"] == 100);
  CHECK(check_summary_schema(summary).empty());

  CHECK(shell("QUGAL_OUT_DIR=" + (dir / "env").string() + " " + cli +
              " run --experiment qmmw-approx --set rounds=64") == kExitOk);
  CHECK(fs::exists(dir / "env" / "trace.csv"));
  fs::remove_all(dir);
}

TEST_CASE("cli sweep writes one directory per seed", "[cli]") {
  const auto dir = scratch_dir("sweep");
  CHECK(shell(cli + " sweep --seeds 3..5 --jobs 2 --experiment qugan-enttest --set rounds=5 "
                    "--set generator_blocks=1 --set discriminator_blocks=1 --out " + dir.string()) == kExitOk);
  for (int s = 3; s <= 5; ++s) {
    const auto summary = nlohmann::ordered_json::parse(slurp(dir / ("seed-" + std::to_string(s)) / "summary.json"));
    CHECK(summary["config"]["seed"] == std::to_string(s));
  }
  const auto all = nlohmann::ordered_json::parse(slurp(dir / "sweep.json"));
  CHECK(all.size() == 3);
  // a single-threaded rerun of one seed yields the same bytes
  CHECK(shell(cli + " run --experiment qugan-enttest --set rounds=5 --set generator_blocks=1 "
                    "--set discriminator_blocks=1 --set seed=4 --out " + (dir / "again").string()) == kExitOk);
  CHECK(slurp(dir / "again" / "trace.csv") == slurp(dir / "seed-4" / "trace.csv"));
  CHECK(shell(cli + " sweep --seeds 5..3 --experiment qmmw-approx --out " + dir.string()) == kExitConfig);
  fs::remove_all(dir);
}
