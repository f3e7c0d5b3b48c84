#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "skillbench/core.hpp"

namespace skillbench::planner {

enum class StepKind { PrimaryPath, StandstillAction, Transit };

std::string_view to_string(StepKind kind);

/// One process-level step before motion planning.
struct ProcessStep {
  StepKind kind = StepKind::Transit;
  std::string name;
  std::optional<PathLabel> label;

  // PrimaryPath: linear path from entry to exit.
  std::optional<Pose> entry;
  std::optional<Pose> exit;

  // StandstillAction: e.g. "grip" or "release".
  std::string action;

  // Transit: destination (defaults to the start of the next motion), an
  // optional minimum height over obstacles, or an explicit joint target.
  std::optional<Pose> target;
  std::optional<double> clearance;
  std::optional<JointTarget> joint_target;

  static ProcessStep primary(std::string name, const Pose& entry, const Pose& exit,
                             std::optional<PathLabel> label = std::nullopt);
  static ProcessStep standstill(std::string name, std::string action);
  static ProcessStep transit(std::string name, std::optional<Pose> target = std::nullopt,
                             std::optional<double> clearance = std::nullopt);

  bool operator==(const ProcessStep&) const = default;
};

struct Process {
  Pose start;
  std::vector<ProcessStep> steps;

  bool operator==(const Process&) const = default;
};

struct PlanningConfig {
  double pre_move_length = 0.0;
  double post_move_length = 0.0;
  double approx_distance = 10.0;
  Dynamics lin{250.0, 2000.0};
  Dynamics ptp{400.0, 3000.0};
  Dynamics joint{180.0, 720.0};
  FrameIds frames{};

  void validate() const;
};

enum class MotionRole { Primary, Pre, Post, Secondary };

std::string_view to_string(MotionRole role);

struct PlannedMotion {
  MotionCommand motion;
  PathLabel label;
  MotionRole role;
  std::string origin;  // name of the process step it came from
  Vec3 start;          // position the motion starts from
  bool needs_pre = false;
  bool needs_post = false;
};

struct StandstillMarker {
  std::string name;
  std::string action;
};

struct TransitPlaceholder {
  ProcessStep step;
};

using PlanItem = std::variant<PlannedMotion, StandstillMarker, TransitPlaceholder>;
using MotionSequence = std::vector<PlanItem>;

std::vector<PlannedMotion> motions_of(const MotionSequence& sequence);

std::vector<ProcessStep> label_process(const std::vector<ProcessStep>& steps);

/// Step I: one exact LIN per primary path, tagged PRE/POST by whether it
/// enters or leaves a standstill action.
MotionSequence plan_primary_motions(const std::vector<ProcessStep>& labeled,
                                    const PlanningConfig& cfg);

/// Step II: collinear linear pre/post movements.
MotionSequence add_pre_post_movements(const MotionSequence& sequence, const PlanningConfig& cfg);

/// Step III: point-to-point secondary motions for the transits.
MotionSequence plan_secondary_motions(const MotionSequence& sequence, const Pose& start,
                                      const PlanningConfig& cfg);

/// Step IV: split at standstill actions into continuous skills.
std::vector<ContinuousSkillPlan> coalesce_continuous(const MotionSequence& sequence);

std::vector<ContinuousSkillPlan> plan(const Process& process, const PlanningConfig& cfg);

}  // namespace skillbench::planner
