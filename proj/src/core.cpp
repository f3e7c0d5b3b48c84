#include "skillbench/core.hpp"

#include <cmath>
#include <numbers>

namespace skillbench {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::InvalidValue: return "InvalidValue";
    case Errc::DegenerateSegment: return "DegenerateSegment";
    case Errc::UnencodableValue: return "UnencodableValue";
    case Errc::UnknownMotionType: return "UnknownMotionType";
    case Errc::NonFiniteScalar: return "NonFiniteScalar";
    case Errc::MalformedContinuation: return "MalformedContinuation";
    case Errc::InconsistentFlags: return "InconsistentFlags";
    case Errc::FrameTooShort: return "FrameTooShort";
    case Errc::FrameTooLong: return "FrameTooLong";
    case Errc::BadCommandWord: return "BadCommandWord";
    case Errc::RecordCountOutOfRange: return "RecordCountOutOfRange";
    case Errc::InconsistentHeader: return "InconsistentHeader";
    case Errc::NonZeroPadding: return "NonZeroPadding";
    case Errc::BadStateCode: return "BadStateCode";
    case Errc::InfeasibleBoundary: return "InfeasibleBoundary";
    case Errc::ReversalAngle: return "ReversalAngle";
    case Errc::EmptyProcess: return "EmptyProcess";
    case Errc::UnresolvedPose: return "UnresolvedPose";
    case Errc::UnreachableClearance: return "UnreachableClearance";
    case Errc::BusySkill: return "BusySkill";
    case Errc::PlanTooLarge: return "PlanTooLarge";
    case Errc::FeedbackRegression: return "FeedbackRegression";
    case Errc::RobotError: return "RobotError";
    case Errc::NotRunning: return "NotRunning";
    case Errc::DecodeError: return "DecodeError";
    case Errc::StarvationTimeout: return "StarvationTimeout";
    case Errc::SimTimeout: return "SimTimeout";
    case Errc::UnknownSetup: return "UnknownSetup";
    case Errc::InvalidScenarioFile: return "InvalidScenarioFile";
    case Errc::NonPositiveBaseline: return "NonPositiveBaseline";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::ParseError: return "ParseError";
  }
  return "Unknown";
}

double normalize_degrees(double angle) {
  double r = angle - 360.0 * std::floor((angle + 180.0) / 360.0);
  if (r >= 180.0) r -= 360.0;
  if (r < -180.0) r += 360.0;
  return r;
}

Pose::Pose(double x, double y, double z, double a, double b, double c) {
  values_ = {x, y, z, a, b, c};
  for (double v : values_) {
    if (!std::isfinite(v)) throw SkillError(Errc::InvalidValue, "pose component is not finite");
  }
  for (std::size_t i = 3; i < 6; ++i) values_[i] = normalize_degrees(values_[i]);
}

Pose Pose::translated(const Vec3& offset) const {
  return Pose(x() + offset.x(), y() + offset.y(), z() + offset.z(), a(), b(), c());
}

JointTarget::JointTarget(const std::array<double, 6>& joints) : joints_(joints) {
  for (double v : joints_) {
    if (!std::isfinite(v)) throw SkillError(Errc::InvalidValue, "joint value is not finite");
  }
}

std::string_view to_string(MotionType type) {
  switch (type) {
    case MotionType::LinCartesian: return "LIN";
    case MotionType::PtpCartesian: return "PTP";
    case MotionType::PtpJoint: return "PTP_JOINT";
    case MotionType::Circular: return "CIRC";
    case MotionType::Spline: return "SPLINE";
    case MotionType::LinForce: return "LIN_FORCE";
  }
  return "?";
}

std::optional<MotionType> motion_type_from_code(std::uint8_t code) {
  if (code < 1 || code > 6) return std::nullopt;
  return static_cast<MotionType>(code);
}

std::optional<MotionType> parse_motion_type(std::string_view name) {
  for (std::uint8_t code = 1; code <= 6; ++code) {
    auto type = static_cast<MotionType>(code);
    if (to_string(type) == name) return type;
  }
  return std::nullopt;
}

std::string_view to_string(PathLabel label) {
  switch (label) {
    case PathLabel::Blending: return "BLENDING";
    case PathLabel::AccuratePath: return "ACCURATE_PATH";
    case PathLabel::AccurateStop: return "ACCURATE_STOP";
  }
  return "?";
}

std::optional<PathLabel> parse_path_label(std::string_view name) {
  for (auto label : {PathLabel::Blending, PathLabel::AccuratePath, PathLabel::AccurateStop}) {
    if (to_string(label) == name) return label;
  }
  return std::nullopt;
}

std::string_view to_string(ExecutionType type) {
  switch (type) {
    case ExecutionType::RC: return "RC";
    case ExecutionType::SM: return "SM";
    case ExecutionType::CM: return "CM";
  }
  return "?";
}

std::optional<ExecutionType> parse_execution_type(std::string_view name) {
  if (name == "RC" || name == "rc") return ExecutionType::RC;
  if (name == "SM" || name == "sm") return ExecutionType::SM;
  if (name == "CM" || name == "cm") return ExecutionType::CM;
  return std::nullopt;
}

MotionCommand::MotionCommand(MotionType type, Target target, std::optional<Vec3> aux_point,
                             Dynamics dynamics, double approx_distance, FrameIds frames,
                             std::uint32_t force_setpoint)
    : type_(type),
      target_(std::move(target)),
      aux_(std::move(aux_point)),
      dynamics_(dynamics),
      approx_(approx_distance),
      frames_(frames),
      force_(force_setpoint) {
  if (!motion_type_from_code(static_cast<std::uint8_t>(type))) {
    throw SkillError(Errc::InvalidValue, "unknown motion type");
  }
  if (!(std::isfinite(dynamics.velocity) && dynamics.velocity > 0.0)) {
    throw SkillError(Errc::InvalidValue, "velocity must be positive");
  }
  if (!(std::isfinite(dynamics.acceleration) && dynamics.acceleration > 0.0)) {
    throw SkillError(Errc::InvalidValue, "acceleration must be positive");
  }
  if (!(std::isfinite(approx_distance) && approx_distance >= 0.0)) {
    throw SkillError(Errc::InvalidValue, "approximation distance must be >= 0");
  }
  const bool joint_target = std::holds_alternative<JointTarget>(target_);
  if (joint_target != (type == MotionType::PtpJoint)) {
    throw SkillError(Errc::InvalidValue, "joint target iff PTP_JOINT");
  }
  if (aux_.has_value() != (type == MotionType::Circular)) {
    throw SkillError(Errc::InvalidValue, "auxiliary point iff CIRCULAR");
  }
  if (aux_ && !aux_->allFinite()) {
    throw SkillError(Errc::InvalidValue, "auxiliary point is not finite");
  }
  if (force_ != 0 && type != MotionType::LinForce) {
    throw SkillError(Errc::InvalidValue, "force setpoint only for LIN_FORCE");
  }
}

MotionCommand MotionCommand::linear(const Pose& target, Dynamics dynamics, double approx_distance,
                                    FrameIds frames) {
  return {MotionType::LinCartesian, target, std::nullopt, dynamics, approx_distance, frames};
}

MotionCommand MotionCommand::ptp(const Pose& target, Dynamics dynamics, double approx_distance,
                                 FrameIds frames) {
  return {MotionType::PtpCartesian, target, std::nullopt, dynamics, approx_distance, frames};
}

MotionCommand MotionCommand::ptp_joint(const JointTarget& target, Dynamics dynamics,
                                       double approx_distance, FrameIds frames) {
  return {MotionType::PtpJoint, target, std::nullopt, dynamics, approx_distance, frames};
}

MotionCommand MotionCommand::circular(const Vec3& aux_point, const Pose& target,
                                      Dynamics dynamics, double approx_distance,
                                      FrameIds frames) {
  return {MotionType::Circular, target, aux_point, dynamics, approx_distance, frames};
}

MotionCommand MotionCommand::spline(const Pose& target, Dynamics dynamics, double approx_distance,
                                    FrameIds frames) {
  return {MotionType::Spline, target, std::nullopt, dynamics, approx_distance, frames};
}

MotionCommand MotionCommand::linear_force(const Pose& target, std::uint32_t force_decinewton,
                                          Dynamics dynamics, double approx_distance,
                                          FrameIds frames) {
  return {MotionType::LinForce, target, std::nullopt, dynamics, approx_distance, frames,
          force_decinewton};
}

const Pose& MotionCommand::pose() const {
  if (const auto* p = std::get_if<Pose>(&target_)) return *p;
  throw SkillError(Errc::InvalidValue, "motion has a joint target");
}

const JointTarget& MotionCommand::joints() const {
  if (const auto* j = std::get_if<JointTarget>(&target_)) return *j;
  throw SkillError(Errc::InvalidValue, "motion has a cartesian target");
}

MotionCommand MotionCommand::with_approx(double approx_distance) const {
  return {type_, target_, aux_, dynamics_, approx_distance, frames_, force_};
}

bool MotionCommand::operator==(const MotionCommand& other) const {
  if (aux_.has_value() != other.aux_.has_value()) return false;
  if (aux_ && *aux_ != *other.aux_) return false;
  return type_ == other.type_ && target_ == other.target_ && dynamics_ == other.dynamics_ &&
         approx_ == other.approx_ && frames_ == other.frames_ && force_ == other.force_;
}

namespace {

std::vector<PathLabel> derive_labels(const std::vector<MotionCommand>& motions) {
  std::vector<PathLabel> labels;
  labels.reserve(motions.size());
  for (std::size_t i = 0; i < motions.size(); ++i) {
    if (i + 1 == motions.size()) {
      labels.push_back(PathLabel::AccurateStop);
    } else {
      labels.push_back(motions[i].approx_distance() > 0.0 ? PathLabel::Blending
                                                          : PathLabel::AccuratePath);
    }
  }
  return labels;
}

}  // namespace

ContinuousSkillPlan::ContinuousSkillPlan(std::vector<MotionCommand> motions,
                                         std::vector<PathLabel> labels,
                                         std::optional<std::string> terminal_action)
    : motions_(std::move(motions)),
      labels_(std::move(labels)),
      terminal_action_(std::move(terminal_action)) {
  if (motions_.empty()) throw SkillError(Errc::InvalidValue, "continuous plan is empty");
  if (labels_.size() != motions_.size()) {
    throw SkillError(Errc::InvalidValue, "one label per motion required");
  }
  if (motions_.back().approx_distance() != 0.0) {
    throw SkillError(Errc::InvalidValue, "continuous plan must end in an exact stop");
  }
  for (std::size_t i = 0; i + 1 < labels_.size(); ++i) {
    if (labels_[i] == PathLabel::AccurateStop) {
      throw SkillError(Errc::InvalidValue, "accurate stop inside a continuous plan");
    }
  }
}

ContinuousSkillPlan::ContinuousSkillPlan(std::vector<MotionCommand> motions,
                                         std::optional<std::string> terminal_action)
    : ContinuousSkillPlan(motions, derive_labels(motions), std::move(terminal_action)) {}

double pose_distance(const Pose& p, const Pose& q) { return (p.position() - q.position()).norm(); }

double corner_angle(const Pose& prev, const Pose& corner, const Pose& next) {
  const Vec3 incoming = corner.position() - prev.position();
  const Vec3 outgoing = next.position() - corner.position();
  if (incoming.squaredNorm() == 0.0 || outgoing.squaredNorm() == 0.0) {
    throw SkillError(Errc::DegenerateSegment, "corner segment has zero length");
  }
  return turn_angle(incoming, outgoing);
}

bool circle_through(const Vec3& start, const Vec3& mid, const Vec3& end, Circle3& out) {
  const Vec3 u = mid - start;
  const Vec3 v = end - start;
  const Vec3 w = u.cross(v);
  const double w2 = w.squaredNorm();
  const double scale = u.squaredNorm() * v.squaredNorm();
  if (scale == 0.0 || w2 <= 1e-18 * scale) return false;
  // Circumcenter of the triangle (start, mid, end).
  const Vec3 center =
      start + (u.squaredNorm() * v.cross(w) + v.squaredNorm() * w.cross(u)) / (2.0 * w2);
  out.center = center;
  out.normal = w / std::sqrt(w2);
  out.radius = (start - center).norm();
  const Vec3 rs = start - center;
  const Vec3 re = end - center;
  double sweep = std::atan2(out.normal.dot(rs.cross(re)), rs.dot(re));
  if (sweep <= 0.0) sweep += 2.0 * std::numbers::pi;
  out.sweep = sweep;
  return true;
}

}  // namespace skillbench
