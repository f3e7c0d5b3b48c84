#include "skillbench/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace skillbench::trajectory {
namespace {

constexpr double kRelTol = 1e-9;

bool close_enough(double a, double b) {
  return std::fabs(a - b) <= kRelTol * std::max({1.0, std::fabs(a), std::fabs(b)});
}

Vec3 unit_or_zero(const Vec3& v) {
  const double n = v.norm();
  return n > 0.0 ? Vec3(v / n) : Vec3(Vec3::Zero());
}

}  // namespace

double segment_time(const SegmentSpec& s) {
  if (!(s.length >= 0.0) || !std::isfinite(s.length)) {
    throw SkillError(Errc::InvalidValue, "segment length must be >= 0");
  }
  if (!(s.v_max > 0.0) || !(s.accel > 0.0)) {
    throw SkillError(Errc::InvalidValue, "segment v_max and accel must be positive");
  }
  const double vmax_tol = s.v_max * (1.0 + kRelTol);
  if (s.v_in < 0.0 || s.v_out < 0.0 || s.v_in > vmax_tol || s.v_out > vmax_tol) {
    throw SkillError(Errc::InvalidValue, "boundary speed outside [0, v_max]");
  }
  const double v_in = std::min(s.v_in, s.v_max);
  const double v_out = std::min(s.v_out, s.v_max);
  const double a = s.accel;
  const double reach = 2.0 * a * s.length;
  const double needed = std::fabs(v_out * v_out - v_in * v_in);
  if (needed > reach && !close_enough(needed, reach)) {
    throw SkillError(Errc::InfeasibleBoundary, "boundary speeds not reachable within length");
  }
  if (s.length == 0.0) return 0.0;

  const double peak_sq = a * s.length + 0.5 * (v_in * v_in + v_out * v_out);
  if (peak_sq >= s.v_max * s.v_max) {
    const double d_acc = (s.v_max * s.v_max - v_in * v_in) / (2.0 * a);
    const double d_dec = (s.v_max * s.v_max - v_out * v_out) / (2.0 * a);
    const double cruise = std::max(0.0, s.length - d_acc - d_dec);
    return (s.v_max - v_in) / a + (s.v_max - v_out) / a + cruise / s.v_max;
  }
  const double peak = std::max({std::sqrt(peak_sq), v_in, v_out});
  return (peak - v_in) / a + (peak - v_out) / a;
}

double ptp_time(std::span<const double> joint_deltas, double v_joint, double a_joint, double v_in,
                double v_out) {
  double dominant = 0.0;
  for (double d : joint_deltas) dominant = std::max(dominant, std::fabs(d));
  return segment_time({dominant, v_joint, a_joint, v_in, v_out});
}

BlendGeometry blend_geometry(double angle, double approx_distance, double v1, double v2,
                             double accel) {
  if (!(angle >= 0.0) || !(approx_distance >= 0.0)) {
    throw SkillError(Errc::InvalidValue, "blend angle and distance must be >= 0");
  }
  if (angle >= std::numbers::pi) {
    throw SkillError(Errc::ReversalAngle, "cannot blend a reversal");
  }
  BlendGeometry g;
  g.truncation = approx_distance;
  if (approx_distance == 0.0) return g;
  if (angle == 0.0) {
    g.radius = std::numeric_limits<double>::infinity();
    g.arc_length = 2.0 * approx_distance;
    g.v_blend = std::min(v1, v2);
    return g;
  }
  const double half = 0.5 * angle;
  g.radius = approx_distance / std::tan(half);
  g.arc_length = g.radius * angle;
  g.v_blend = std::min({v1, v2, std::sqrt(accel * g.radius)});
  g.deviation = approx_distance * std::tan(0.25 * angle);
  return g;
}

namespace {

std::vector<PathSegment> build(std::span<const MotionCommand> motions, const Vec3& start,
                               const std::array<double, 6>& start_joints, const Vec3* ends) {
  std::vector<PathSegment> out;
  out.reserve(motions.size());
  Vec3 position = start;
  std::array<double, 6> joints = start_joints;
  for (std::size_t i = 0; i < motions.size(); ++i) {
    const MotionCommand& m = motions[i];
    PathSegment seg;
    seg.v_max = m.velocity();
    seg.accel = m.acceleration();
    seg.approx_end = m.approx_distance();
    seg.start = position;
    if (m.is_joint()) {
      seg.joint_space = true;
      double dominant = 0.0;
      for (std::size_t j = 0; j < 6; ++j) {
        dominant = std::max(dominant, std::fabs(m.joints()[j] - joints[j]));
      }
      joints = m.joints().values();
      seg.length = dominant;
      seg.end = position;
      out.push_back(seg);
      continue;
    }
    const Vec3 end = ends ? ends[i] : m.pose().position();
    seg.end = end;
    if (m.type() == MotionType::Circular) {
      seg.records = 2;
      const Vec3 aux = *m.aux_point();
      Circle3 circle;
      if (circle_through(position, aux, end, circle)) {
        seg.length = circle.radius * circle.sweep;
        seg.dir_in = unit_or_zero(circle.normal.cross(position - circle.center));
        seg.dir_out = unit_or_zero(circle.normal.cross(end - circle.center));
      } else {
        seg.length = (aux - position).norm() + (end - aux).norm();
        seg.dir_in = unit_or_zero(aux - position);
        if (seg.dir_in.isZero()) seg.dir_in = unit_or_zero(end - aux);
        seg.dir_out = unit_or_zero(end - aux);
        if (seg.dir_out.isZero()) seg.dir_out = seg.dir_in;
      }
    } else {
      seg.length = (end - position).norm();
      seg.dir_in = unit_or_zero(end - position);
      seg.dir_out = seg.dir_in;
    }
    position = end;
    out.push_back(seg);
  }
  return out;
}

}  // namespace

std::vector<PathSegment> build_segments(std::span<const MotionCommand> motions, const Vec3& start,
                                        const std::array<double, 6>& start_joints) {
  return build(motions, start, start_joints, nullptr);
}

namespace {

CornerPlan classify_corner(const PathSegment& before, const PathSegment& after, bool blending) {
  CornerPlan c;
  if (!blending) return c;
  if (before.joint_space || after.joint_space || before.length == 0.0 || after.length == 0.0) {
    c.degraded = before.approx_end > 0.0;
    return c;
  }
  c.angle = turn_angle(before.dir_out, after.dir_in);
  if (c.angle <= kCollinearAngle) {
    c.kind = CornerKind::PassThrough;
    c.speed = std::min(before.v_max, after.v_max);
    return c;
  }
  const double approx = before.approx_end;
  if (approx == 0.0) return c;
  if (c.angle >= std::numbers::pi - kReversalMargin || approx > 0.5 * before.length ||
      approx > 0.5 * after.length) {
    c.degraded = true;
    return c;
  }
  c.geometry = blend_geometry(c.angle, approx, before.v_max, after.v_max,
                              std::min(before.accel, after.accel));
  c.kind = CornerKind::Blend;
  c.speed = c.geometry.v_blend;
  return c;
}

double truncation(const CornerPlan& c) {
  return c.kind == CornerKind::Blend ? c.geometry.truncation : 0.0;
}

}  // namespace

namespace {

GroupProfile solve_chain(std::span<const PathSegment> segments, std::vector<CornerPlan> corners,
                         ChainEntry entry) {
  GroupProfile p;
  const std::size_t n = segments.size();
  std::vector<double> eff(n);
  std::vector<double> u(n + 1);
  for (;;) {
    for (std::size_t i = 0; i < n; ++i) {
      const double t_start = i == 0 ? entry.truncation : truncation(corners[i - 1]);
      const double t_end = i + 1 < n ? truncation(corners[i]) : 0.0;
      eff[i] = std::max(0.0, segments[i].length - t_start - t_end);
    }
    u[0] = entry.speed;
    u[n] = 0.0;
    for (std::size_t j = 1; j < n; ++j) {
      u[j] = corners[j - 1].kind == CornerKind::Stop ? 0.0 : corners[j - 1].speed;
    }
    for (std::size_t j = 1; j < n; ++j) {
      u[j] = std::min(u[j], std::sqrt(u[j - 1] * u[j - 1] + 2.0 * segments[j - 1].accel * eff[j - 1]));
    }
    for (std::size_t j = n - 1; j >= 1; --j) {
      u[j] = std::min(u[j], std::sqrt(u[j + 1] * u[j + 1] + 2.0 * segments[j].accel * eff[j]));
    }
    // A blend that the passes squeeze to a standstill is an exact stop.
    bool changed = false;
    for (std::size_t j = 1; j < n; ++j) {
      CornerPlan& c = corners[j - 1];
      if (c.kind != CornerKind::Stop && u[j] <= 1e-9) {
        c = CornerPlan{};
        c.degraded = true;
        changed = true;
      }
    }
    if (!changed) break;
  }

  p.corners = std::move(corners);
  p.boundary_speeds = u;
  // The entry speed is fixed; segment 0 must still be able to reach u[1].
  const double needed = u[0] * u[0] - u[1] * u[1];
  const double reach = 2.0 * segments[0].accel * eff[0];
  if (needed > reach && !close_enough(needed, reach)) {
    p.total_time = std::numeric_limits<double>::infinity();
    return p;
  }
  p.segment_durations.resize(n);
  p.motion_durations.resize(n);
  p.blend_durations.assign(n - 1, 0.0);
  for (std::size_t j = 1; j < n; ++j) {
    CornerPlan& c = p.corners[j - 1];
    c.speed = u[j];
    if (c.kind == CornerKind::Blend) {
      p.blend_durations[j - 1] = c.geometry.arc_length / u[j];
      p.max_path_deviation = std::max(p.max_path_deviation, c.geometry.deviation);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    p.segment_durations[i] =
        segment_time({eff[i], segments[i].v_max, segments[i].accel, u[i], u[i + 1]});
    p.motion_durations[i] = p.segment_durations[i] + (i > 0 ? p.blend_durations[i - 1] : 0.0);
    p.total_time += p.motion_durations[i];
  }
  return p;
}

CornerPlan demoted() {
  CornerPlan c;
  c.degraded = true;
  return c;
}

}  // namespace

GroupProfile plan_chain(std::span<const PathSegment> segments, bool blending_enabled,
                        ChainEntry entry) {
  const std::size_t n = segments.size();
  if (n == 0) return {};

  std::vector<CornerPlan> corners;
  corners.reserve(n - 1);
  for (std::size_t j = 1; j < n; ++j) {
    corners.push_back(classify_corner(segments[j - 1], segments[j], blending_enabled));
  }
  GroupProfile best = solve_chain(segments, corners, entry);
  if (entry.speed > 0.0 && n > 1) {
    auto kept = corners;
    for (std::size_t j = 0; j + 1 < n; ++j) {
      const bool keep = j < entry.committed.size() && entry.committed[j] != CornerKind::Stop;
      if (!keep && kept[j].kind != CornerKind::Stop) kept[j] = demoted();
    }
    GroupProfile candidate = solve_chain(segments, std::move(kept), entry);
    if (candidate.total_time < best.total_time) best = std::move(candidate);
  }

  // Slow arcs can cost more than stopping; drop blends while that helps.
  for (bool improved = true; improved;) {
    improved = false;
    for (std::size_t j = 0; j + 1 < n; ++j) {
      if (best.corners[j].kind != CornerKind::Blend) continue;
      auto trial = best.corners;
      trial[j] = demoted();
      GroupProfile candidate = solve_chain(segments, std::move(trial), entry);
      if (candidate.total_time < best.total_time) {
        best = std::move(candidate);
        improved = true;
      }
    }
  }
  bool any_blend = false;
  for (const auto& c : best.corners) any_blend |= c.kind == CornerKind::Blend;
  if (any_blend) {
    std::vector<CornerPlan> without = best.corners;
    for (auto& c : without) {
      if (c.kind == CornerKind::Blend) c = demoted();
    }
    GroupProfile candidate = solve_chain(segments, std::move(without), entry);
    if (candidate.total_time < best.total_time) best = std::move(candidate);
  }
  if (!std::isfinite(best.total_time)) {
    throw SkillError(Errc::InfeasibleBoundary, "entry speed cannot be brought down within the chain");
  }
  return best;
}

GroupProfile plan_group_profile(const ContinuousSkillPlan& group, std::span<const Vec3> waypoints,
                                bool blending_enabled, const std::array<double, 6>& start_joints) {
  if (waypoints.size() != group.size() + 1) {
    throw SkillError(Errc::InvalidValue, "need one waypoint per motion plus the start");
  }
  const auto segments =
      build(group.motions(), waypoints[0], start_joints, waypoints.data() + 1);
  return plan_chain(segments, blending_enabled);
}

}  // namespace skillbench::trajectory
