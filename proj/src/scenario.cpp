#include <fstream>
#include <sstream>

#include "skillbench/bench.hpp"
#include "skillbench/plan_text.hpp"

namespace skillbench::bench {

void Geometry::validate() const {
  if (!grip_point.allFinite()) throw SkillError(Errc::InvalidValue, "grip point must be finite");
  if (!(carrier_depth > 0.0) || !(assembly_distance > 0.0)) {
    throw SkillError(Errc::InvalidValue, "carrier depth and assembly distance must be positive");
  }
  if (clearance && !std::isfinite(*clearance)) {
    throw SkillError(Errc::InvalidValue, "clearance must be finite");
  }
}

namespace {

ScenarioConfig setup_a() {
  ScenarioConfig c;
  c.name = "a";
  c.planning.pre_move_length = 50.0;
  c.planning.post_move_length = 50.0;
  c.planning.approx_distance = 10.0;
  c.planning.lin = {250.0, 2000.0};
  c.planning.ptp = {400.0, 3000.0};
  c.planning.joint = {180.0, 720.0};
  return c;
}

ScenarioConfig setup_b() {
  ScenarioConfig c = setup_a();
  c.name = "b";
  c.planning.lin = {200.0, 1200.0};
  c.planning.ptp = {320.0, 1800.0};
  c.planning.joint = {150.0, 500.0};
  return c;
}

}  // namespace

ScenarioConfig parse_scenario(std::string_view text, std::string name) {
  ScenarioConfig c = setup_a();
  c.name = std::move(name);
  try {
    const auto records = text::parse_records(text);
    if (records.empty() || records.front().keyword != "skillbench-scenario") {
      throw SkillError(Errc::InvalidScenarioFile, "missing 'skillbench-scenario' header");
    }
    for (const auto& r : records) {
      if (r.keyword == "skillbench-scenario") {
        if (r.has("name")) c.name = r.at("name");
        continue;
      }
      auto dyn = [&](Dynamics& d) {
        if (r.has("v")) d.velocity = r.number("v");
        if (r.has("a")) d.acceleration = r.number("a");
      };
      if (r.keyword == "lin") {
        dyn(c.planning.lin);
      } else if (r.keyword == "ptp") {
        dyn(c.planning.ptp);
      } else if (r.keyword == "joint") {
        dyn(c.planning.joint);
      } else if (r.keyword == "geometry") {
        auto& g = c.geometry;
        if (r.has("grip")) {
          const auto& s = r.at("grip");
          std::array<double, 3> v{};
          std::size_t pos = 0;
          for (std::size_t i = 0; i < 3; ++i) {
            const auto comma = s.find(',', pos);
            if ((i < 2) != (comma != std::string::npos)) {
              throw SkillError(Errc::InvalidScenarioFile, "grip needs x,y,z");
            }
            v[i] = text::parse_number(std::string_view(s).substr(pos, comma - pos));
            pos = comma + 1;
          }
          g.grip_point = Vec3(v[0], v[1], v[2]);
        }
        if (r.has("depth")) g.carrier_depth = r.number("depth");
        if (r.has("distance")) g.assembly_distance = r.number("distance");
        if (r.has("clearance")) {
          if (r.at("clearance") == "none") {
            g.clearance.reset();
          } else {
            g.clearance = r.number("clearance");
          }
        }
      } else if (r.keyword == "planner") {
        if (r.has("pre")) c.planning.pre_move_length = r.number("pre");
        if (r.has("post")) c.planning.post_move_length = r.number("post");
        if (r.has("approx")) c.planning.approx_distance = r.number("approx");
      } else if (r.keyword == "cycles") {
        auto us = [&](std::string_view key, std::int64_t& out) {
          if (r.has(key)) out = static_cast<std::int64_t>(std::llround(r.number(key) * 1000.0));
        };
        us("plc_ms", c.sim.plc_cycle_us);
        us("bus_ms", c.sim.bus_cycle_us);
        us("robot_ms", c.sim.robot_cycle_us);
        if (r.has("timeout_s")) c.sim.timeout_s = r.number("timeout_s");
      } else {
        throw SkillError(Errc::InvalidScenarioFile,
                         "line " + std::to_string(r.line) + ": unknown section '" + r.keyword + "'");
      }
    }
    c.geometry.validate();
    c.planning.validate();
    c.sim.validate();
  } catch (const SkillError& e) {
    if (e.code() == Errc::InvalidScenarioFile) throw;
    throw SkillError(Errc::InvalidScenarioFile, e.what());
  }
  return c;
}

ScenarioConfig load_setup(const std::string& name_or_path) {
  if (name_or_path == "a" || name_or_path == "A") return setup_a();
  if (name_or_path == "b" || name_or_path == "B") return setup_b();
  std::ifstream in(name_or_path);
  if (!in) throw SkillError(Errc::UnknownSetup, "no setup or file named '" + name_or_path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario(text.str(), name_or_path);
}

planner::Process build_scenario(const ScenarioConfig& config) {
  const Geometry& g = config.geometry;
  g.validate();
  auto pose = [&](const Vec3& p) { return Pose(p, g.tool_a, g.tool_b, g.tool_c); };
  const Vec3 up(0.0, 0.0, g.carrier_depth);
  const Vec3 grip = g.grip_point;
  const Vec3 place = grip + Vec3(0.0, g.assembly_distance, 0.0);
  const Vec3 home = grip + up + Vec3(0.0, 0.0, config.planning.pre_move_length);

  using planner::ProcessStep;
  planner::Process p;
  p.start = pose(home);
  p.steps = {
      ProcessStep::primary("A", pose(grip + up), pose(grip)),
      ProcessStep::standstill("grip", "grip"),
      ProcessStep::primary("B", pose(grip), pose(grip + up)),
      ProcessStep::transit("to_assembly"),
      ProcessStep::primary("C", pose(place + up), pose(place)),
      ProcessStep::standstill("release", "release"),
      ProcessStep::primary("D", pose(place), pose(place + up)),
      ProcessStep::transit("return", pose(home), g.clearance),
  };
  return p;
}

std::vector<ContinuousSkillPlan> scenario_plans(const ScenarioConfig& config) {
  return planner::plan(build_scenario(config), config.planning);
}

}  // namespace skillbench::bench
