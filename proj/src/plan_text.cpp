#include "skillbench/plan_text.hpp"

#include <charconv>
#include <sstream>

namespace skillbench::text {
namespace {

constexpr std::string_view kPlanHeader = "skillbench-plan";
constexpr std::string_view kProcessHeader = "skillbench-process";

[[noreturn]] void fail(int line, const std::string& what) {
  throw SkillError(Errc::ParseError, "line " + std::to_string(line) + ": " + what);
}

std::vector<double> parse_list(const Record& r, std::string_view key, std::size_t count) {
  const std::string& value = r.at(key);
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= value.size()) {
    const std::size_t comma = value.find(',', pos);
    const std::size_t end = comma == std::string::npos ? value.size() : comma;
    try {
      out.push_back(parse_number(std::string_view(value).substr(pos, end - pos)));
    } catch (const SkillError&) {
      fail(r.line, "bad number list for " + std::string(key));
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (out.size() != count) fail(r.line, std::string(key) + " needs " + std::to_string(count) + " values");
  return out;
}

std::string join(std::initializer_list<double> values) {
  std::string out;
  for (double v : values) {
    if (!out.empty()) out += ',';
    out += format_number(v);
  }
  return out;
}

std::string pose_list(const Pose& p) { return join({p.x(), p.y(), p.z(), p.a(), p.b(), p.c()}); }

Pose pose_from(const Record& r, std::string_view key) {
  const auto v = parse_list(r, key, 6);
  return Pose(v[0], v[1], v[2], v[3], v[4], v[5]);
}

unsigned parse_uint(const Record& r, std::string_view key, unsigned max) {
  const std::string& value = r.at(key);
  unsigned out = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size() || out > max) {
    fail(r.line, "bad integer for " + std::string(key));
  }
  return out;
}

void check_header(const std::vector<Record>& records, std::string_view header) {
  if (records.empty() || records.front().keyword != header) {
    throw SkillError(Errc::ParseError, "expected '" + std::string(header) + "' header");
  }
  if (records.front().at("version") != "1") fail(records.front().line, "unsupported version");
}

}  // namespace

std::string format_number(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw SkillError(Errc::InvalidValue, "unformattable number");
  return std::string(buf, ptr);
}

double parse_number(std::string_view token) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
  if (ec != std::errc() || ptr != token.data() + token.size() || token.empty()) {
    throw SkillError(Errc::ParseError, "bad number '" + std::string(token) + "'");
  }
  return out;
}

const std::string& Record::at(std::string_view key) const {
  const auto it = fields.find(key);
  if (it == fields.end()) fail(line, "missing field '" + std::string(key) + "'");
  return it->second;
}

double Record::number(std::string_view key) const {
  try {
    return parse_number(at(key));
  } catch (const SkillError& e) {
    if (e.code() == Errc::ParseError && has(key)) fail(line, "bad number for " + std::string(key));
    throw;
  }
}

std::vector<Record> parse_records(std::string_view text) {
  std::vector<Record> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream tokens(line);
    std::string token;
    Record r;
    r.line = number;
    while (tokens >> token) {
      if (r.keyword.empty()) {
        r.keyword = token;
        continue;
      }
      const auto eq = token.find('=');
      if (eq == std::string::npos || eq == 0) fail(number, "expected key=value, got '" + token + "'");
      if (!r.fields.emplace(token.substr(0, eq), token.substr(eq + 1)).second) {
        fail(number, "duplicate key '" + token.substr(0, eq) + "'");
      }
    }
    if (!r.keyword.empty()) out.push_back(std::move(r));
  }
  return out;
}

std::string serialize_plans(const std::vector<ContinuousSkillPlan>& plans) {
  std::ostringstream out;
  out << kPlanHeader << " version=1 groups=" << plans.size() << '\n';
  for (const auto& plan : plans) {
    out << "group motions=" << plan.size();
    if (plan.terminal_action()) out << " terminal=" << *plan.terminal_action();
    out << '\n';
    for (std::size_t i = 0; i < plan.size(); ++i) {
      const MotionCommand& m = plan.motions()[i];
      out << "motion type=" << to_string(m.type()) << " label=" << to_string(plan.labels()[i]);
      if (m.is_joint()) {
        const auto& j = m.joints().values();
        out << " joints=" << join({j[0], j[1], j[2], j[3], j[4], j[5]});
      } else {
        out << " pose=" << pose_list(m.pose());
      }
      if (m.aux_point()) {
        const Vec3& a = *m.aux_point();
        out << " aux=" << join({a.x(), a.y(), a.z()});
      }
      out << " v=" << format_number(m.velocity()) << " acc=" << format_number(m.acceleration())
          << " approx=" << format_number(m.approx_distance())
          << " tool=" << unsigned(m.frames().tool) << " base=" << unsigned(m.frames().base);
      if (m.force_setpoint() != 0) out << " force=" << m.force_setpoint();
      out << '\n';
    }
    out << "end\n";
  }
  return out.str();
}

std::vector<ContinuousSkillPlan> parse_plans(std::string_view text) {
  const auto records = parse_records(text);
  check_header(records, kPlanHeader);
  std::vector<ContinuousSkillPlan> plans;
  std::vector<MotionCommand> motions;
  std::vector<PathLabel> labels;
  std::optional<std::string> terminal;
  bool in_group = false;
  for (std::size_t k = 1; k < records.size(); ++k) {
    const Record& r = records[k];
    if (r.keyword == "group") {
      if (in_group) fail(r.line, "group inside group");
      in_group = true;
      terminal = r.has("terminal") ? std::optional(r.at("terminal")) : std::nullopt;
    } else if (r.keyword == "motion") {
      if (!in_group) fail(r.line, "motion outside group");
      const auto type = parse_motion_type(r.at("type"));
      const auto label = parse_path_label(r.at("label"));
      if (!type) fail(r.line, "unknown motion type");
      if (!label) fail(r.line, "unknown label");
      MotionCommand::Target target;
      if (*type == MotionType::PtpJoint) {
        const auto j = parse_list(r, "joints", 6);
        target = JointTarget({j[0], j[1], j[2], j[3], j[4], j[5]});
      } else {
        target = pose_from(r, "pose");
      }
      std::optional<Vec3> aux;
      if (r.has("aux")) {
        const auto a = parse_list(r, "aux", 3);
        aux = Vec3(a[0], a[1], a[2]);
      }
      const FrameIds frames{static_cast<std::uint8_t>(parse_uint(r, "tool", 255)),
                            static_cast<std::uint8_t>(parse_uint(r, "base", 255))};
      const std::uint32_t force = r.has("force") ? parse_uint(r, "force", 0xFFFFFFFFu) : 0;
      try {
        motions.emplace_back(*type, target, aux, Dynamics{r.number("v"), r.number("acc")},
                             r.number("approx"), frames, force);
      } catch (const SkillError& e) {
        if (e.code() == Errc::ParseError) throw;
        fail(r.line, e.what());
      }
      labels.push_back(*label);
    } else if (r.keyword == "end") {
      if (!in_group) fail(r.line, "end outside group");
      try {
        plans.emplace_back(std::move(motions), std::move(labels), terminal);
      } catch (const SkillError& e) {
        fail(r.line, e.what());
      }
      motions.clear();
      labels.clear();
      in_group = false;
    } else {
      fail(r.line, "unknown record '" + r.keyword + "'");
    }
  }
  if (in_group) throw SkillError(Errc::ParseError, "unterminated group");
  return plans;
}

std::string serialize_process(const planner::Process& process) {
  std::ostringstream out;
  out << kProcessHeader << " version=1\n";
  out << "start pose=" << pose_list(process.start) << '\n';
  for (const auto& step : process.steps) {
    out << "step kind=" << planner::to_string(step.kind);
    if (!step.name.empty()) out << " name=" << step.name;
    if (step.label) out << " label=" << to_string(*step.label);
    if (step.entry) out << " entry=" << pose_list(*step.entry);
    if (step.exit) out << " exit=" << pose_list(*step.exit);
    if (!step.action.empty()) out << " action=" << step.action;
    if (step.target) out << " target=" << pose_list(*step.target);
    if (step.clearance) out << " clearance=" << format_number(*step.clearance);
    if (step.joint_target) {
      const auto& j = step.joint_target->values();
      out << " joints=" << join({j[0], j[1], j[2], j[3], j[4], j[5]});
    }
    out << '\n';
  }
  return out.str();
}

planner::Process parse_process(std::string_view text) {
  const auto records = parse_records(text);
  check_header(records, kProcessHeader);
  planner::Process process;
  bool have_start = false;
  for (std::size_t k = 1; k < records.size(); ++k) {
    const Record& r = records[k];
    if (r.keyword == "start") {
      process.start = pose_from(r, "pose");
      have_start = true;
      continue;
    }
    if (r.keyword != "step") fail(r.line, "unknown record '" + r.keyword + "'");
    planner::ProcessStep step;
    const std::string& kind = r.at("kind");
    if (kind == "PRIMARY_PATH") {
      step.kind = planner::StepKind::PrimaryPath;
    } else if (kind == "STANDSTILL_ACTION") {
      step.kind = planner::StepKind::StandstillAction;
    } else if (kind == "TRANSIT") {
      step.kind = planner::StepKind::Transit;
    } else {
      fail(r.line, "unknown step kind '" + kind + "'");
    }
    if (r.has("name")) step.name = r.at("name");
    if (r.has("label")) {
      step.label = parse_path_label(r.at("label"));
      if (!step.label) fail(r.line, "unknown label");
    }
    if (r.has("entry")) step.entry = pose_from(r, "entry");
    if (r.has("exit")) step.exit = pose_from(r, "exit");
    if (r.has("action")) step.action = r.at("action");
    if (r.has("target")) step.target = pose_from(r, "target");
    if (r.has("clearance")) step.clearance = r.number("clearance");
    if (r.has("joints")) {
      const auto j = parse_list(r, "joints", 6);
      step.joint_target = JointTarget({j[0], j[1], j[2], j[3], j[4], j[5]});
    }
    process.steps.push_back(std::move(step));
  }
  if (!have_start) throw SkillError(Errc::ParseError, "process has no start pose");
  return process;
}

}  // namespace skillbench::text
