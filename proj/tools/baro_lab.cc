// baro_lab: experiment runner for the BARO knapsack secretary algorithm.
//
//   baro_lab run <config.json>   [--out DIR] [--threads N] [--profile P]
//   baro_lab sweep <config.json> [--out DIR] [--threads N] [--profile P]
//   baro_lab verify <suite>      [--seed S] [--cases N]
//
// Exit codes: 0 success, 1 failed check, 2 usage or config error, 3 I/O.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

#include "baro/error.h"
#include "baro/experiment.h"
#include "baro/verify.h"

namespace {

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kUsage = 2;
constexpr int kIo = 3;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void WriteFile(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << content;
  if (!out.flush()) throw IoError("write failed: " + path.string());
}

void EnsureDir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
}

int CmdRun(const std::string& config_path, const std::string& out_dir,
           int threads, const std::string& profile) {
  const std::string text = ReadFile(config_path);
  baro::ExperimentConfig config;
  try {
    config = baro::ParseExperimentConfig(text);
  } catch (const baro::ConfigError& e) {
    std::cerr << config_path << ":" << e.line() << ": " << e.what() << "\n";
    return kUsage;
  }
  if (!profile.empty()) baro::ApplyProfile(config, profile);
  const baro::ExperimentResult result = baro::RunExperiment(config, threads);

  const std::filesystem::path dir(out_dir);
  EnsureDir(dir);
  WriteFile(dir / "summary.json", baro::SummaryJson(result));
  WriteFile(dir / "trials.csv", baro::TrialsCsv(result.rows));
  for (const baro::Trace& trace : result.traces) {
    const std::string name = "trace_" +
                             std::string(baro::AlgorithmName(trace.algorithm)) +
                             "_" + std::to_string(trace.seed) + ".csv";
    WriteFile(dir / name, baro::TraceCsv(trace));
  }

  int64_t failures = 0;
  for (const baro::AlgorithmResult& r : result.results) {
    std::cout << baro::AlgorithmName(r.algorithm)
              << ": ratio=" << baro::FormatNumber(r.ratio.ratio_mean)
              << " ci95=" << baro::FormatNumber(r.ratio.ratio_ci95)
              << " trials=" << r.ratio.trials
              << " invariant_failures=" << r.invariant_failures << "\n";
    failures += r.invariant_failures;
  }
  std::cout << "opt_ro=" << baro::FormatNumber(result.opt_ro)
            << " out=" << dir.string() << "\n";
  return failures == 0 ? kOk : kCheckFailed;
}

int CmdSweep(const std::string& config_path, const std::string& out_dir,
             int threads, const std::string& profile) {
  const std::string text = ReadFile(config_path);
  baro::SweepConfig config;
  try {
    config = baro::ParseSweepConfig(text);
  } catch (const baro::ConfigError& e) {
    std::cerr << config_path << ":" << e.line() << ": " << e.what() << "\n";
    return kUsage;
  }
  if (!profile.empty()) baro::ApplyProfile(config.base, profile);
  std::vector<baro::SweepRow> rows;
  try {
    rows = baro::RunSweep(config, threads);
  } catch (const baro::InvalidParameter& e) {
    std::cerr << config_path << ":0: grid point rejected: " << e.what() << "\n";
    return kUsage;
  }
  const std::filesystem::path dir(out_dir);
  EnsureDir(dir);
  const std::string csv = baro::SweepCsv(rows);
  WriteFile(dir / "sweep.csv", csv);
  std::cout << csv;
  return kOk;
}

int CmdVerify(const std::string& suite, uint64_t seed, int64_t cases) {
  if (!baro::IsSuite(suite)) {
    std::cerr << "unknown suite: " << suite << " (expected one of:";
    for (const std::string& s : baro::SuiteNames()) std::cerr << " " << s;
    std::cerr << ")\n";
    return kUsage;
  }
  const baro::SuiteReport report = baro::RunSuite(suite, seed, cases);
  for (const baro::CheckTally& c : report.checks) {
    std::cout << c.name << ": pass=" << c.pass << " flag=" << c.flag
              << " fail=" << c.fail;
    for (const auto& [name, value] : c.notes) {
      std::cout << " " << name << "=" << value;
    }
    std::cout << "\n";
    for (const std::string& f : c.failures) std::cout << "  FAIL " << f << "\n";
  }
  std::cout << report.suite << ": " << (report.ok() ? "ok" : "FAILED") << "\n";
  return report.ok() ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"BARO knapsack secretary experiment runner"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out", profile, suite;
  int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  uint64_t seed = 1;
  int64_t cases = 0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("config", config_path, "Config JSON")->required();
    cmd->add_option("--out", out_dir, "Output directory");
    cmd->add_option("--threads", threads, "Worker threads")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--profile", profile, "Constants profile")
        ->check(CLI::IsMember({"paper", "practical"}));
  };
  CLI::App* run = app.add_subcommand("run", "Run seeded trials");
  add_common(run);
  CLI::App* sweep = app.add_subcommand("sweep", "Run a parameter grid");
  add_common(sweep);
  CLI::App* verify = app.add_subcommand("verify", "Run an oracle suite");
  verify->add_option("suite", suite, "Suite name")->required();
  verify->add_option("--seed", seed, "Seed");
  verify->add_option("--cases", cases, "Suite size (0 = default)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*run) return CmdRun(config_path, out_dir, threads, profile);
    if (*sweep) return CmdSweep(config_path, out_dir, threads, profile);
    return CmdVerify(suite, seed, cases);
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kIo;
  } catch (const baro::InvalidParameter& e) {
    std::cerr << "invalid parameter: " << e.what() << "\n";
    return kUsage;
  }
}
