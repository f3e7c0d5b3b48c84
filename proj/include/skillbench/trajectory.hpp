#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "skillbench/core.hpp"

namespace skillbench::trajectory {

/// Turn angles at or below this are treated as a straight continuation.
inline constexpr double kCollinearAngle = 1e-6;
/// Turn angles at or above pi minus this are reversals.
inline constexpr double kReversalMargin = 1e-9;

struct SegmentSpec {
  double length = 0.0;
  double v_max = 0.0;
  double accel = 0.0;
  double v_in = 0.0;
  double v_out = 0.0;
};

/// Duration of the time-optimal accelerate / cruise / decelerate profile
/// (piecewise-constant acceleration) between the boundary speeds.
double segment_time(const SegmentSpec& spec);

/// Dominant-axis synchronized joint move.
double ptp_time(std::span<const double> joint_deltas, double v_joint, double a_joint,
                double v_in = 0.0, double v_out = 0.0);

struct BlendGeometry {
  double radius = 0.0;      // +inf for a straight continuation
  double arc_length = 0.0;  // path length replacing 2 * truncation of the segments
  double v_blend = 0.0;
  double truncation = 0.0;  // shortening of each adjacent segment
  double deviation = 0.0;   // max distance of the arc from the corner
};

/// Circular arc tangent to both segments at `approx_distance` from the corner.
BlendGeometry blend_geometry(double angle, double approx_distance, double v1, double v2,
                             double accel);

/// One motion reduced to what timing needs.
struct PathSegment {
  bool joint_space = false;
  double length = 0.0;  // mm, or dominant-axis degrees for joint moves
  double v_max = 0.0;
  double accel = 0.0;
  Vec3 start = Vec3::Zero();
  Vec3 end = Vec3::Zero();
  Vec3 dir_in = Vec3::Zero();   // unit tangent at the start
  Vec3 dir_out = Vec3::Zero();  // unit tangent at the end
  double approx_end = 0.0;      // approximation distance of this motion's target
  std::size_t records = 1;      // wire records the motion occupies
};

/// Resolves motions into path segments starting from the given TCP position
/// and joint state. Joint moves leave the TCP position unchanged.
std::vector<PathSegment> build_segments(std::span<const MotionCommand> motions, const Vec3& start,
                                        const std::array<double, 6>& start_joints = {});

enum class CornerKind { Stop, Blend, PassThrough };

struct CornerPlan {
  CornerKind kind = CornerKind::Stop;
  bool degraded = false;  // blending was requested but the corner stops
  double angle = 0.0;
  BlendGeometry geometry;
  double speed = 0.0;  // path speed through the corner
};

struct GroupProfile {
  std::vector<double> segment_durations;  // truncated straight/arc parts
  std::vector<double> blend_durations;    // one per interior corner
  std::vector<CornerPlan> corners;        // one per interior corner
  std::vector<double> boundary_speeds;    // n + 1 speeds: entry, corners, exit
  std::vector<double> motion_durations;   // segment plus the blend leading into it
  double total_time = 0.0;
  double max_path_deviation = 0.0;
};

struct ChainEntry {
  double speed = 0.0;
  double truncation = 0.0;  // already consumed by a blend before the chain
  /// Corner kinds an earlier plan chose for the leading corners. Keeping
  /// them and stopping after the last one always honours the entry speed.
  std::vector<CornerKind> committed;
};

/// Plans a chain of segments ending in a stop: corner classification, then
/// a forward (acceleration) and backward (deceleration) pass. Variants that
/// cannot slow down from a nonzero entry speed in time are never chosen.
GroupProfile plan_chain(std::span<const PathSegment> segments, bool blending_enabled,
                        ChainEntry entry = {});

/// `waypoints` holds the start position followed by each motion's end
/// position (n + 1 entries).
GroupProfile plan_group_profile(const ContinuousSkillPlan& group, std::span<const Vec3> waypoints,
                                bool blending_enabled,
                                const std::array<double, 6>& start_joints = {});

}  // namespace skillbench::trajectory
