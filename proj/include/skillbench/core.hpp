#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "skillbench/error.hpp"
#include "skillbench/geometry.hpp"

namespace skillbench {

/// Cartesian TCP pose. Position in millimetres, orientation as fixed-axis
/// Z-Y'-X'' angles in degrees, each normalized into [-180, 180).
class Pose {
 public:
  Pose() = default;
  Pose(double x, double y, double z, double a = 0.0, double b = 0.0, double c = 0.0);
  explicit Pose(const Vec3& position, double a = 0.0, double b = 0.0, double c = 0.0)
      : Pose(position.x(), position.y(), position.z(), a, b, c) {}

  double x() const { return values_[0]; }
  double y() const { return values_[1]; }
  double z() const { return values_[2]; }
  double a() const { return values_[3]; }
  double b() const { return values_[4]; }
  double c() const { return values_[5]; }

  Vec3 position() const { return {values_[0], values_[1], values_[2]}; }
  const std::array<double, 6>& values() const { return values_; }

  /// Same orientation, position moved by `offset`.
  Pose translated(const Vec3& offset) const;

  bool operator==(const Pose&) const = default;

 private:
  std::array<double, 6> values_{};
};

double normalize_degrees(double angle);

/// Six joint values in degrees. Robots with fewer axes leave the tail at zero.
class JointTarget {
 public:
  JointTarget() = default;
  explicit JointTarget(const std::array<double, 6>& joints);

  double operator[](std::size_t i) const { return joints_[i]; }
  const std::array<double, 6>& values() const { return joints_; }

  bool operator==(const JointTarget&) const = default;

 private:
  std::array<double, 6> joints_{};
};

enum class MotionType : std::uint8_t {
  LinCartesian = 1,
  PtpCartesian = 2,
  PtpJoint = 3,
  Circular = 4,
  Spline = 5,
  LinForce = 6,
};

std::string_view to_string(MotionType type);
std::optional<MotionType> motion_type_from_code(std::uint8_t code);
std::optional<MotionType> parse_motion_type(std::string_view name);

enum class PathLabel : std::uint8_t { Blending, AccuratePath, AccurateStop };

std::string_view to_string(PathLabel label);
std::optional<PathLabel> parse_path_label(std::string_view name);

enum class ExecutionType : std::uint8_t { RC, SM, CM };

std::string_view to_string(ExecutionType type);
std::optional<ExecutionType> parse_execution_type(std::string_view name);

struct Dynamics {
  double velocity = 0.0;      // mm/s, deg/s for joint moves
  double acceleration = 0.0;  // mm/s^2, deg/s^2 for joint moves

  bool operator==(const Dynamics&) const = default;
};

struct FrameIds {
  std::uint8_t tool = 0;
  std::uint8_t base = 0;

  bool operator==(const FrameIds&) const = default;
};

/// One motion primitive. Validated on construction; immutable afterwards.
class MotionCommand {
 public:
  using Target = std::variant<Pose, JointTarget>;

  MotionCommand(MotionType type, Target target, std::optional<Vec3> aux_point, Dynamics dynamics,
                double approx_distance, FrameIds frames = {}, std::uint32_t force_setpoint = 0);

  static MotionCommand linear(const Pose& target, Dynamics dynamics, double approx_distance = 0.0,
                              FrameIds frames = {});
  static MotionCommand ptp(const Pose& target, Dynamics dynamics, double approx_distance = 0.0,
                           FrameIds frames = {});
  static MotionCommand ptp_joint(const JointTarget& target, Dynamics dynamics,
                                 double approx_distance = 0.0, FrameIds frames = {});
  static MotionCommand circular(const Vec3& aux_point, const Pose& target, Dynamics dynamics,
                                double approx_distance = 0.0, FrameIds frames = {});
  static MotionCommand spline(const Pose& target, Dynamics dynamics, double approx_distance = 0.0,
                              FrameIds frames = {});
  static MotionCommand linear_force(const Pose& target, std::uint32_t force_decinewton,
                                    Dynamics dynamics, double approx_distance = 0.0,
                                    FrameIds frames = {});

  MotionType type() const { return type_; }
  const Target& target() const { return target_; }
  bool is_joint() const { return type_ == MotionType::PtpJoint; }
  /// Cartesian target; throws InvalidValue for joint targets.
  const Pose& pose() const;
  const JointTarget& joints() const;
  const std::optional<Vec3>& aux_point() const { return aux_; }
  const Dynamics& dynamics() const { return dynamics_; }
  double velocity() const { return dynamics_.velocity; }
  double acceleration() const { return dynamics_.acceleration; }
  double approx_distance() const { return approx_; }
  const FrameIds& frames() const { return frames_; }
  std::uint32_t force_setpoint() const { return force_; }

  MotionCommand with_approx(double approx_distance) const;

  bool operator==(const MotionCommand& other) const;

 private:
  MotionType type_;
  Target target_;
  std::optional<Vec3> aux_;
  Dynamics dynamics_;
  double approx_;
  FrameIds frames_;
  std::uint32_t force_;
};

/// Ordered motions executed as one continuous skill, ending in an exact stop.
class ContinuousSkillPlan {
 public:
  ContinuousSkillPlan(std::vector<MotionCommand> motions, std::vector<PathLabel> labels,
                      std::optional<std::string> terminal_action = std::nullopt);
  /// Labels derived from the approximation distances.
  explicit ContinuousSkillPlan(std::vector<MotionCommand> motions,
                               std::optional<std::string> terminal_action = std::nullopt);

  const std::vector<MotionCommand>& motions() const { return motions_; }
  const std::vector<PathLabel>& labels() const { return labels_; }
  const std::optional<std::string>& terminal_action() const { return terminal_action_; }
  std::size_t size() const { return motions_.size(); }

  bool operator==(const ContinuousSkillPlan&) const = default;

 private:
  std::vector<MotionCommand> motions_;
  std::vector<PathLabel> labels_;
  std::optional<std::string> terminal_action_;
};

double pose_distance(const Pose& p, const Pose& q);

/// Turn angle at `corner` between the incoming and outgoing segments.
double corner_angle(const Pose& prev, const Pose& corner, const Pose& next);

}  // namespace skillbench
