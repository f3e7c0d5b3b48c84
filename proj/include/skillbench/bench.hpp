#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "skillbench/core.hpp"
#include "skillbench/fieldbus_sim.hpp"
#include "skillbench/planner.hpp"

namespace skillbench::bench {

/// Pick & place cell layout, millimetres.
struct Geometry {
  Vec3 grip_point{500.0, -150.0, 100.0};  // part seat at the carrier bottom
  double carrier_depth = 30.0;
  double assembly_distance = 300.0;        // along +y from the grip point
  std::optional<double> clearance = 300.0;  // absolute height of the obstacle pass
  double tool_a = 180.0;
  double tool_b = 0.0;
  double tool_c = 180.0;

  void validate() const;
};

struct ScenarioConfig {
  std::string name = "a";
  Geometry geometry;
  planner::PlanningConfig planning;
  sim::SimConfig sim;
};

/// Built-in setups "a" and "b", or a scenario file path.
ScenarioConfig load_setup(const std::string& name_or_path);
ScenarioConfig parse_scenario(std::string_view text, std::string name);

planner::Process build_scenario(const ScenarioConfig& config);
std::vector<ContinuousSkillPlan> scenario_plans(const ScenarioConfig& config);

struct RunResult {
  double elapsed_ms = 0.0;
  sim::SimTrace trace;
  std::vector<wire::RecordImage> consumed;
  std::size_t fallbacks = 0;
  std::size_t blends = 0;
};

/// Seed of repetition `rep`; identical across execution types so runs pair up.
std::uint64_t repetition_seed(std::uint64_t seed, std::size_t rep);

RunResult run_once(const ScenarioConfig& config, const std::vector<ContinuousSkillPlan>& plans,
                   ExecutionType etype, std::uint64_t rep_seed);

struct MeasurementReport {
  std::string setup;
  ExecutionType etype = ExecutionType::CM;
  std::vector<double> elapsed_ms;
  double aet_ms = 0.0;
  double mad_ms = 0.0;
  std::optional<double> aet_i;
  std::size_t fallbacks = 0;
};

using RunObserver = std::function<void(std::size_t rep, const RunResult& run)>;

MeasurementReport run_benchmark(const ScenarioConfig& config, ExecutionType etype,
                                std::size_t reps, std::uint64_t seed,
                                const RunObserver& observe = {});

double mean(std::span<const double> values);
double mad(std::span<const double> values);
double compute_improvement(double sm_aet, double cm_aet);

/// Fills AET_i of each CM report from the SM report of the same setup.
void attach_improvement(std::vector<MeasurementReport>& reports);

std::string render_table(const std::vector<MeasurementReport>& reports);
std::string render_summary_csv(const std::vector<MeasurementReport>& reports);
std::string render_raw_csv(const std::vector<MeasurementReport>& reports);

struct SummaryRow {
  std::string setup;
  ExecutionType etype = ExecutionType::CM;
  double aet_ms = 0.0;
  double mad_ms = 0.0;
  std::optional<double> aet_i;

  bool operator==(const SummaryRow&) const = default;
};

std::vector<SummaryRow> parse_summary_csv(std::string_view text);

}  // namespace skillbench::bench
