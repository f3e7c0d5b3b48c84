#include "skillbench/bench.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>

#include "skillbench/plan_text.hpp"
#include "skillbench/plc_trigger.hpp"
#include "skillbench/robot_executor.hpp"

namespace skillbench::bench {

std::uint64_t repetition_seed(std::uint64_t seed, std::size_t rep) {
  // splitmix64 finalizer
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (static_cast<std::uint64_t>(rep) + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

RunResult run_once(const ScenarioConfig& config, const std::vector<ContinuousSkillPlan>& plans,
                   ExecutionType etype, std::uint64_t rep_seed) {
  const Pose start = build_scenario(config).start;
  robot::RobotExecutor robot_side({.cycle_us = config.sim.robot_cycle_us}, start);

  std::vector<plc::SkillRequest> requests;
  switch (etype) {
    case ExecutionType::RC:
      robot_side.load_native_program(plans);
      requests.push_back(plc::SkillRequest::native(robot_side.native_total()));
      break;
    case ExecutionType::SM: {
      std::vector<MotionCommand> motions;
      for (const auto& plan : plans) {
        motions.insert(motions.end(), plan.motions().begin(), plan.motions().end());
      }
      requests = plc::run_single_motion_sequence(motions);
      break;
    }
    case ExecutionType::CM:
      requests = plc::continuous_requests(plans);
      break;
  }

  plc::SkillSequencer plc_side(std::move(requests));
  sim::SimConfig sim = config.sim;
  sim.jitter = true;
  sim.seed = rep_seed;

  RunResult r;
  r.trace = sim::run(sim, plc_side, robot_side);
  if (r.trace.failed) {
    throw SkillError(Errc::RobotError,
                     "run failed with robot error " + std::to_string(r.trace.robot_error));
  }
  r.elapsed_ms = static_cast<double>(r.trace.elapsed_us) / 1000.0;
  r.consumed = robot_side.consumed();
  r.fallbacks = robot_side.fallbacks();
  r.blends = robot_side.blends();
  return r;
}

MeasurementReport run_benchmark(const ScenarioConfig& config, ExecutionType etype,
                                std::size_t reps, std::uint64_t seed,
                                const RunObserver& observe) {
  if (reps == 0) throw SkillError(Errc::InvalidValue, "reps must be at least 1");
  const auto plans = scenario_plans(config);
  MeasurementReport report;
  report.setup = config.name;
  report.etype = etype;
  for (std::size_t rep = 0; rep < reps; ++rep) {
    const RunResult r = run_once(config, plans, etype, repetition_seed(seed, rep));
    report.elapsed_ms.push_back(r.elapsed_ms);
    report.fallbacks += r.fallbacks;
    if (observe) observe(rep, r);
  }
  report.aet_ms = mean(report.elapsed_ms);
  report.mad_ms = mad(report.elapsed_ms);
  return report;
}

double mean(std::span<const double> values) {
  if (values.empty()) throw SkillError(Errc::EmptyInput, "mean of an empty list");
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double mad(std::span<const double> values) {
  const double m = mean(values);
  double sum = 0.0;
  for (const double v : values) sum += std::abs(v - m);
  return sum / static_cast<double>(values.size());
}

double compute_improvement(double sm_aet, double cm_aet) {
  if (!(sm_aet > 0.0)) throw SkillError(Errc::NonPositiveBaseline, "SM baseline must be positive");
  return (sm_aet - cm_aet) / sm_aet;
}

void attach_improvement(std::vector<MeasurementReport>& reports) {
  for (auto& cm : reports) {
    if (cm.etype != ExecutionType::CM) continue;
    for (const auto& sm : reports) {
      if (sm.etype == ExecutionType::SM && sm.setup == cm.setup) {
        cm.aet_i = compute_improvement(sm.aet_ms, cm.aet_ms);
      }
    }
  }
}

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  for (;;) {
    const auto next = line.find(sep, pos);
    out.emplace_back(line.substr(pos, next - pos));
    if (next == std::string_view::npos) return out;
    pos = next + 1;
  }
}

}  // namespace

std::string render_table(const std::vector<MeasurementReport>& reports) {
  std::string out;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%-8s %-4s %10s %10s %8s\n", "setup", "ET", "AET (ms)",
                "MAD (ms)", "AET_i");
  out += buf;
  for (const auto& r : reports) {
    const std::string aet_i = r.aet_i ? fixed(*r.aet_i * 100.0, 1) + " %" : "";
    std::snprintf(buf, sizeof(buf), "%-8s %-4s %10s %10s %8s\n", r.setup.c_str(),
                  std::string(to_string(r.etype)).c_str(), fixed(r.aet_ms, 1).c_str(),
                  fixed(r.mad_ms, 1).c_str(), aet_i.c_str());
    out += buf;
  }
  return out;
}

std::string render_summary_csv(const std::vector<MeasurementReport>& reports) {
  std::string out = "setup,etype,aet_ms,mad_ms,aet_i\n";
  for (const auto& r : reports) {
    out += r.setup + ',' + std::string(to_string(r.etype)) + ',' + text::format_number(r.aet_ms) +
           ',' + text::format_number(r.mad_ms) + ',' +
           (r.aet_i ? text::format_number(*r.aet_i) : "") + '\n';
  }
  return out;
}

std::string render_raw_csv(const std::vector<MeasurementReport>& reports) {
  std::string out = "setup,etype,rep,elapsed_ms\n";
  for (const auto& r : reports) {
    for (std::size_t i = 0; i < r.elapsed_ms.size(); ++i) {
      out += r.setup + ',' + std::string(to_string(r.etype)) + ',' + std::to_string(i) + ',' +
             text::format_number(r.elapsed_ms[i]) + '\n';
    }
  }
  return out;
}

std::vector<SummaryRow> parse_summary_csv(std::string_view text) {
  std::vector<SummaryRow> rows;
  bool header = true;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != 5) throw SkillError(Errc::ParseError, "expected 5 CSV columns");
    if (header) {
      if (line != "setup,etype,aet_ms,mad_ms,aet_i") {
        throw SkillError(Errc::ParseError, "unexpected CSV header");
      }
      header = false;
      continue;
    }
    SummaryRow row;
    row.setup = cells[0];
    const auto etype = parse_execution_type(cells[1]);
    if (!etype) throw SkillError(Errc::ParseError, "unknown execution type '" + cells[1] + "'");
    row.etype = *etype;
    row.aet_ms = text::parse_number(cells[2]);
    row.mad_ms = text::parse_number(cells[3]);
    if (!cells[4].empty()) row.aet_i = text::parse_number(cells[4]);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace skillbench::bench
