#include "skillbench/planner.hpp"

#include <cmath>

namespace skillbench::planner {
namespace {

constexpr double kPositionTol = 1e-6;

bool same_position(const Vec3& a, const Vec3& b) { return (a - b).norm() <= kPositionTol; }

std::string step_id(const ProcessStep& step) {
  return step.name.empty() ? std::string(to_string(step.kind)) : step.name;
}

}  // namespace

std::string_view to_string(StepKind kind) {
  switch (kind) {
    case StepKind::PrimaryPath: return "PRIMARY_PATH";
    case StepKind::StandstillAction: return "STANDSTILL_ACTION";
    case StepKind::Transit: return "TRANSIT";
  }
  return "?";
}

std::string_view to_string(MotionRole role) {
  switch (role) {
    case MotionRole::Primary: return "primary";
    case MotionRole::Pre: return "pre";
    case MotionRole::Post: return "post";
    case MotionRole::Secondary: return "secondary";
  }
  return "?";
}

ProcessStep ProcessStep::primary(std::string name, const Pose& entry, const Pose& exit,
                                 std::optional<PathLabel> label) {
  ProcessStep s;
  s.kind = StepKind::PrimaryPath;
  s.name = std::move(name);
  s.entry = entry;
  s.exit = exit;
  s.label = label;
  return s;
}

ProcessStep ProcessStep::standstill(std::string name, std::string action) {
  ProcessStep s;
  s.kind = StepKind::StandstillAction;
  s.name = std::move(name);
  s.action = std::move(action);
  return s;
}

ProcessStep ProcessStep::transit(std::string name, std::optional<Pose> target,
                                 std::optional<double> clearance) {
  ProcessStep s;
  s.kind = StepKind::Transit;
  s.name = std::move(name);
  s.target = target;
  s.clearance = clearance;
  return s;
}

void PlanningConfig::validate() const {
  auto finite_nonneg = [](double v) { return std::isfinite(v) && v >= 0.0; };
  if (!finite_nonneg(pre_move_length) || !finite_nonneg(post_move_length) ||
      !finite_nonneg(approx_distance)) {
    throw SkillError(Errc::InvalidValue, "planning lengths must be >= 0");
  }
  for (const Dynamics& d : {lin, ptp, joint}) {
    if (!(d.velocity > 0.0 && d.acceleration > 0.0 && std::isfinite(d.velocity) &&
          std::isfinite(d.acceleration))) {
      throw SkillError(Errc::InvalidValue, "planning dynamics must be positive");
    }
  }
}

std::vector<PlannedMotion> motions_of(const MotionSequence& sequence) {
  std::vector<PlannedMotion> out;
  for (const auto& item : sequence) {
    if (const auto* m = std::get_if<PlannedMotion>(&item)) out.push_back(*m);
  }
  return out;
}

std::vector<ProcessStep> label_process(const std::vector<ProcessStep>& steps) {
  if (steps.empty()) throw SkillError(Errc::EmptyProcess, "process has no steps");
  std::vector<ProcessStep> out = steps;
  for (auto& step : out) {
    switch (step.kind) {
      case StepKind::StandstillAction:
        if (step.label && *step.label != PathLabel::AccurateStop) {
          throw SkillError(Errc::InvalidValue, step_id(step) + ": standstill needs ACCURATE_STOP");
        }
        step.label = PathLabel::AccurateStop;
        break;
      case StepKind::PrimaryPath:
        if (step.label == PathLabel::AccurateStop) {
          throw SkillError(Errc::InvalidValue, step_id(step) + ": primary path cannot stop");
        }
        if (!step.label) step.label = PathLabel::AccuratePath;
        break;
      case StepKind::Transit:
        if (!step.label) step.label = PathLabel::Blending;
        break;
    }
  }
  return out;
}

MotionSequence plan_primary_motions(const std::vector<ProcessStep>& labeled,
                                    const PlanningConfig& cfg) {
  cfg.validate();
  MotionSequence out;
  for (std::size_t i = 0; i < labeled.size(); ++i) {
    const ProcessStep& step = labeled[i];
    switch (step.kind) {
      case StepKind::PrimaryPath: {
        if (!step.entry || !step.exit) {
          throw SkillError(Errc::UnresolvedPose, step_id(step) + ": primary path poses missing");
        }
        const bool enters = i + 1 < labeled.size() &&
                            labeled[i + 1].kind == StepKind::StandstillAction;
        const bool leaves = i > 0 && labeled[i - 1].kind == StepKind::StandstillAction;
        // Between two standstills both ends are pinned; neither extension fits.
        out.push_back(PlannedMotion{
            MotionCommand::linear(*step.exit, cfg.lin, 0.0, cfg.frames),
            step.label.value_or(PathLabel::AccuratePath), MotionRole::Primary, step_id(step),
            step.entry->position(), enters && !leaves, leaves && !enters});
        break;
      }
      case StepKind::StandstillAction:
        out.push_back(StandstillMarker{step_id(step), step.action});
        break;
      case StepKind::Transit:
        out.push_back(TransitPlaceholder{step});
        break;
    }
  }
  return out;
}

MotionSequence add_pre_post_movements(const MotionSequence& sequence, const PlanningConfig& cfg) {
  cfg.validate();
  MotionSequence out;
  for (const auto& item : sequence) {
    const auto* m = std::get_if<PlannedMotion>(&item);
    if (!m || m->role != MotionRole::Primary) {
      out.push_back(item);
      continue;
    }
    const Vec3 entry = m->start;
    const Vec3 exit = m->motion.pose().position();
    const Vec3 span = exit - entry;
    const bool has_direction = span.norm() > 0.0;
    const Vec3 dir = has_direction ? Vec3(span.normalized()) : Vec3(Vec3::Zero());

    if (m->needs_pre && cfg.pre_move_length > 0.0 && has_direction) {
      const Vec3 pre_start = entry - cfg.pre_move_length * dir;
      const Pose& exit_pose = m->motion.pose();
      const Pose entry_pose(entry, exit_pose.a(), exit_pose.b(), exit_pose.c());
      out.push_back(PlannedMotion{MotionCommand::linear(entry_pose, cfg.lin, 0.0, cfg.frames),
                                  PathLabel::AccuratePath, MotionRole::Pre, m->origin, pre_start,
                                  false, false});
    }
    out.push_back(*m);
    if (m->needs_post && cfg.post_move_length > 0.0 && has_direction) {
      const Pose post_end = m->motion.pose().translated(cfg.post_move_length * dir);
      out.push_back(PlannedMotion{
          MotionCommand::linear(post_end, cfg.lin, cfg.approx_distance, cfg.frames),
          PathLabel::Blending, MotionRole::Post, m->origin, exit, false, false});
    }
  }
  return out;
}

MotionSequence plan_secondary_motions(const MotionSequence& sequence, const Pose& start,
                                      const PlanningConfig& cfg) {
  cfg.validate();
  MotionSequence out;
  Pose current = start;
  bool position_known = true;

  auto next_motion_start = [&](std::size_t from) -> std::optional<Pose> {
    for (std::size_t k = from; k < sequence.size(); ++k) {
      if (const auto* m = std::get_if<PlannedMotion>(&sequence[k])) {
        const Pose& target = m->motion.is_joint() ? current : m->motion.pose();
        return Pose(m->start, target.a(), target.b(), target.c());
      }
      if (std::holds_alternative<TransitPlaceholder>(sequence[k])) return std::nullopt;
    }
    return std::nullopt;
  };

  for (std::size_t i = 0; i < sequence.size(); ++i) {
    const auto& item = sequence[i];
    if (const auto* m = std::get_if<PlannedMotion>(&item)) {
      if (position_known && !same_position(m->start, current.position())) {
        throw SkillError(Errc::UnresolvedPose,
                         m->origin + ": motion does not start where the previous one ended");
      }
      out.push_back(*m);
      if (!m->motion.is_joint()) {
        current = m->motion.pose();
        position_known = true;
      }
      continue;
    }
    if (std::holds_alternative<StandstillMarker>(item)) {
      out.push_back(item);
      continue;
    }

    const ProcessStep& step = std::get<TransitPlaceholder>(item).step;
    const double approx =
        step.label.value_or(PathLabel::Blending) == PathLabel::Blending ? cfg.approx_distance : 0.0;
    const PathLabel label = approx > 0.0 ? PathLabel::Blending : PathLabel::AccuratePath;

    if (step.joint_target) {
      out.push_back(PlannedMotion{
          MotionCommand::ptp_joint(*step.joint_target, cfg.joint, approx, cfg.frames), label,
          MotionRole::Secondary, step_id(step), current.position(), false, false});
      position_known = false;
      continue;
    }

    std::optional<Pose> destination = step.target;
    if (!destination) destination = next_motion_start(i + 1);
    if (!destination) {
      throw SkillError(Errc::UnresolvedPose, step_id(step) + ": transit has no destination");
    }
    if (!position_known) {
      throw SkillError(Errc::UnresolvedPose,
                       step_id(step) + ": cartesian transit after a joint move");
    }

    const Vec3 from = current.position();
    const Vec3 to = destination->position();
    if (step.clearance) {
      const double h = *step.clearance;
      if (!std::isfinite(h) || h < std::min(from.z(), to.z())) {
        throw SkillError(Errc::UnreachableClearance,
                         step_id(step) + ": clearance below both transit endpoints");
      }
      const Vec3 mid(0.5 * (from.x() + to.x()), 0.5 * (from.y() + to.y()), h);
      const Pose via(mid, current.a(), current.b(), current.c());
      out.push_back(PlannedMotion{MotionCommand::ptp(via, cfg.ptp, approx, cfg.frames), label,
                                  MotionRole::Secondary, step_id(step), from, false, false});
      out.push_back(PlannedMotion{MotionCommand::ptp(*destination, cfg.ptp, approx, cfg.frames),
                                  label, MotionRole::Secondary, step_id(step), mid, false, false});
    } else if (!same_position(from, to) || current.a() != destination->a() ||
               current.b() != destination->b() || current.c() != destination->c()) {
      out.push_back(PlannedMotion{MotionCommand::ptp(*destination, cfg.ptp, approx, cfg.frames),
                                  label, MotionRole::Secondary, step_id(step), from, false, false});
    }
    current = *destination;
  }
  return out;
}

std::vector<ContinuousSkillPlan> coalesce_continuous(const MotionSequence& sequence) {
  std::vector<ContinuousSkillPlan> groups;
  std::vector<MotionCommand> motions;
  std::vector<PathLabel> labels;

  auto close_group = [&](std::optional<std::string> action) {
    motions.back() = motions.back().with_approx(0.0);
    labels.back() = PathLabel::AccurateStop;
    groups.emplace_back(std::move(motions), std::move(labels), std::move(action));
    motions.clear();
    labels.clear();
  };

  for (const auto& item : sequence) {
    if (const auto* m = std::get_if<PlannedMotion>(&item)) {
      motions.push_back(m->motion);
      labels.push_back(m->label);
      continue;
    }
    if (const auto* s = std::get_if<StandstillMarker>(&item)) {
      if (!motions.empty()) {
        close_group(s->action);
      } else if (!groups.empty()) {
        // Back-to-back standstills: the action joins the previous group's stop.
        const ContinuousSkillPlan& prev = groups.back();
        std::string merged = prev.terminal_action() ? *prev.terminal_action() + "+" + s->action
                                                    : s->action;
        groups.back() = ContinuousSkillPlan(prev.motions(), prev.labels(), std::move(merged));
      }
      continue;
    }
    throw SkillError(Errc::UnresolvedPose, "transit left unplanned before step IV");
  }
  if (!motions.empty()) close_group(std::nullopt);
  return groups;
}

std::vector<ContinuousSkillPlan> plan(const Process& process, const PlanningConfig& cfg) {
  const auto labeled = label_process(process.steps);
  auto sequence = plan_primary_motions(labeled, cfg);
  sequence = add_pre_post_movements(sequence, cfg);
  sequence = plan_secondary_motions(sequence, process.start, cfg);
  return coalesce_continuous(sequence);
}

}  // namespace skillbench::planner
