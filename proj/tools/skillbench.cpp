#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "skillbench/bench.hpp"
#include "skillbench/plan_text.hpp"
#include "skillbench/wire.hpp"

namespace {

constexpr int kExitSimulation = 2;
constexpr int kExitArguments = 3;

using skillbench::ExecutionType;
namespace bench = skillbench::bench;

std::vector<ExecutionType> parse_etypes(const std::string& name) {
  if (name == "all") return {ExecutionType::RC, ExecutionType::SM, ExecutionType::CM};
  const auto etype = skillbench::parse_execution_type(name);
  if (!etype) throw CLI::ValidationError("--etype", "expected rc, sm, cm or all");
  return {*etype};
}

int run_command(const std::vector<std::string>& setups, const std::string& etype_name,
                std::size_t reps, std::uint64_t seed, const std::string& format, bool raw,
                const std::string& trace_path) {
  const auto etypes = parse_etypes(etype_name);
  std::vector<bench::ScenarioConfig> configs;
  for (const auto& s : setups) configs.push_back(bench::load_setup(s));

  std::ofstream trace;
  if (!trace_path.empty()) {
    trace.open(trace_path);
    if (!trace) throw skillbench::SkillError(skillbench::Errc::InvalidValue,
                                             "cannot write " + trace_path);
  }

  std::vector<bench::MeasurementReport> reports;
  for (const auto& config : configs) {
    for (const auto etype : etypes) {
      auto observe = [&](std::size_t rep, const bench::RunResult& run) {
        if (!trace) return;
        trace << "# setup=" << config.name << " etype=" << skillbench::to_string(etype)
              << " rep=" << rep << '\n'
              << run.trace.lines();
      };
      reports.push_back(bench::run_benchmark(config, etype, reps, seed, observe));
    }
  }
  bench::attach_improvement(reports);

  if (format == "csv") {
    std::cout << (raw ? bench::render_raw_csv(reports) : bench::render_summary_csv(reports));
  } else {
    std::cout << bench::render_table(reports);
  }
  return 0;
}

int plan_command(const std::string& setup, bool hex) {
  const auto plans = bench::scenario_plans(bench::load_setup(setup));
  if (!hex) {
    std::cout << skillbench::text::serialize_plans(plans);
    return 0;
  }
  std::uint32_t index = 1;
  for (const auto& plan : plans) {
    for (const auto& image : skillbench::wire::explode_plan(plan, index)) {
      for (const auto b : image) std::printf("%02x", b);
      std::printf("\n");
      ++index;
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Skill-triggered robot motion benchmark"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run the pick & place benchmark");
  std::vector<std::string> setups{"a"};
  std::string etype = "all";
  std::size_t reps = 25;
  std::uint64_t seed = 1;
  std::string format = "table";
  bool raw = false;
  std::string trace_path;
  run->add_option("--setup", setups, "Setup name (a, b) or scenario file; repeatable")
      ->capture_default_str();
  run->add_option("--etype", etype, "rc, sm, cm or all")
      ->check(CLI::IsMember({"rc", "sm", "cm", "all", "RC", "SM", "CM"}))
      ->capture_default_str();
  run->add_option("--reps", reps, "Repetitions per execution type")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  run->add_option("--seed", seed, "Jitter seed")->capture_default_str();
  run->add_option("--format", format, "table or csv")
      ->check(CLI::IsMember({"table", "csv"}))
      ->capture_default_str();
  run->add_flag("--raw", raw, "With csv: one row per repetition");
  run->add_option("--trace", trace_path, "Write simulation traces to this file");

  auto* plan = app.add_subcommand("plan", "Print the planned motion groups");
  std::string plan_setup = "a";
  bool hex = false;
  plan->add_option("--setup", plan_setup, "Setup name or scenario file")->capture_default_str();
  plan->add_flag("--hex", hex, "Print wire records as hex instead of plan text");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitArguments;
  }

  try {
    if (*run) return run_command(setups, etype, reps, seed, format, raw, trace_path);
    return plan_command(plan_setup, hex);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitArguments;
  } catch (const skillbench::SkillError& e) {
    std::cerr << "error: " << e.what() << '\n';
    switch (e.code()) {
      case skillbench::Errc::UnknownSetup:
      case skillbench::Errc::InvalidScenarioFile:
      case skillbench::Errc::InvalidValue:
        return kExitArguments;
      default:
        return kExitSimulation;
    }
  }
}
