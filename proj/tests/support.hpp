// Shared generators and reference models for the test suites.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "skillbench/core.hpp"
#include "skillbench/fieldbus_sim.hpp"
#include "skillbench/plc_trigger.hpp"
#include "skillbench/robot_executor.hpp"
#include "skillbench/trajectory.hpp"
#include "skillbench/wire.hpp"

namespace skillbench::testing {

#define EXPECT_SKILL_ERROR(stmt, errc)                                  \
  do {                                                                  \
    try {                                                               \
      stmt;                                                             \
      ADD_FAILURE() << "expected " << ::skillbench::to_string(errc);    \
    } catch (const ::skillbench::SkillError& e) {                       \
      EXPECT_EQ(e.code(), errc) << e.what();                            \
    }                                                                   \
  } while (0)

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

/// Value that survives the float32 wire trip unchanged.
// Kept out of line: GCC 11 SLP vectorization at -O3 folds the narrowing away.
[[gnu::noinline]] inline double f32(double v) { return static_cast<double>(static_cast<float>(v)); }

// Draws happen in statement order; argument evaluation order is unspecified.
inline Pose draw_pose(Rng& rng, const Vec3& lo, const Vec3& hi) {
  std::array<double, 6> v{};
  for (int i = 0; i < 3; ++i) v[i] = f32(uniform(rng, lo[i], hi[i]));
  v[3] = f32(uniform(rng, -180.0, 179.0));
  v[4] = f32(uniform(rng, -90.0, 90.0));
  v[5] = f32(uniform(rng, -180.0, 179.0));
  return Pose(v[0], v[1], v[2], v[3], v[4], v[5]);
}

inline Pose random_pose(Rng& rng, double span = 500.0) {
  return draw_pose(rng, Vec3(-span, -span, 0.0), Vec3(span, span, span));
}

/// Random motion of any type. Positions wander near `near` so paths stay short.
inline MotionCommand random_motion(Rng& rng, const Vec3& near, double step = 20.0) {
  const double vel = f32(uniform(rng, 200.0, 800.0));
  const Dynamics dyn{vel, f32(uniform(rng, 2000.0, 8000.0))};
  const double approx = uniform_int(rng, 0, 2) == 0 ? 0.0 : f32(uniform(rng, 0.5, 5.0));
  const auto tool = static_cast<std::uint8_t>(uniform_int(rng, 0, 3));
  const FrameIds frames{tool, static_cast<std::uint8_t>(uniform_int(rng, 0, 3))};
  auto target = [&] {
    const Vec3 d(step, step, step);
    return draw_pose(rng, near - d, near + d);
  };
  switch (uniform_int(rng, 1, 6)) {
    case 1: return MotionCommand::linear(target(), dyn, approx, frames);
    case 2: return MotionCommand::ptp(target(), dyn, approx, frames);
    case 3: {
      std::array<double, 6> j{};
      for (auto& v : j) v = f32(uniform(rng, -30.0, 30.0));
      const double jv = f32(uniform(rng, 100.0, 400.0));
      const Dynamics jdyn{jv, f32(uniform(rng, 500.0, 2000.0))};
      return MotionCommand::ptp_joint(JointTarget(j), jdyn, approx, frames);
    }
    case 4: {
      const Pose t = target();
      const double ax = f32(near.x() + uniform(rng, -step, step));
      const Vec3 aux(ax, f32(near.y() + uniform(rng, -step, step)), f32(near.z()));
      return MotionCommand::circular(aux, t, dyn, approx, frames);
    }
    case 5: return MotionCommand::spline(target(), dyn, approx, frames);
    default:
      return MotionCommand::linear_force(target(), static_cast<std::uint32_t>(uniform_int(rng, 0, 65535)),
                                         dyn, approx, frames);
  }
}

/// Plan whose exploded record count is exactly `records`.
inline ContinuousSkillPlan random_plan(Rng& rng, std::size_t records) {
  std::vector<MotionCommand> motions;
  std::size_t count = 0;
  Vec3 here(400.0, 0.0, 300.0);
  while (count < records) {
    MotionCommand m = random_motion(rng, here);
    if (m.type() == MotionType::Circular && count + 2 > records) continue;
    count += m.type() == MotionType::Circular ? 2 : 1;
    if (!m.is_joint()) here = m.pose().position();
    motions.push_back(std::move(m));
  }
  motions.back() = motions.back().with_approx(0.0);
  return ContinuousSkillPlan(std::move(motions), std::nullopt);
}

/// Reference handoff: the records a robot must consume, in order, when it
/// reads the plans straight from memory.
inline std::vector<wire::RecordImage> direct_handoff(const std::vector<ContinuousSkillPlan>& plans) {
  std::vector<wire::RecordImage> out;
  for (const auto& plan : plans) {
    for (const auto& image : wire::explode_plan(plan, 1)) out.push_back(image);
  }
  return out;
}

/// Reference duration of a trapezoidal segment: the peak speed is found by
/// bisection on the distance budget, then the velocity curve is integrated
/// numerically to confirm it covers the length.
struct ProfileOracle {
  double time = 0.0;
  double covered = 0.0;
};

inline ProfileOracle integrate_profile(const trajectory::SegmentSpec& s) {
  auto dist = [&](double vp) {
    return (vp * vp - s.v_in * s.v_in) / (2 * s.accel) + (vp * vp - s.v_out * s.v_out) / (2 * s.accel);
  };
  double lo = std::max(s.v_in, s.v_out), hi = s.v_max;
  double vp = hi;
  if (dist(hi) > s.length) {
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      (dist(mid) > s.length ? hi : lo) = mid;
    }
    vp = 0.5 * (lo + hi);
  }
  const double t1 = (vp - s.v_in) / s.accel;
  const double t3 = (vp - s.v_out) / s.accel;
  const double cruise = std::max(0.0, s.length - dist(vp));
  const double t2 = cruise / vp;
  ProfileOracle out;
  out.time = t1 + t2 + t3;
  // Composite Simpson over each phase of v(t).
  auto simpson = [](auto f, double a, double b) {
    const int n = 64;
    if (b <= a) return 0.0;
    const double h = (b - a) / n;
    double sum = f(a) + f(b);
    for (int i = 1; i < n; ++i) sum += f(a + i * h) * (i % 2 ? 4 : 2);
    return sum * h / 3;
  };
  out.covered = simpson([&](double t) { return s.v_in + s.accel * t; }, 0, t1) + vp * t2 +
                simpson([&](double t) { return vp - s.accel * t; }, 0, t3);
  return out;
}

/// Feasible segment spec: the exit speed is reachable from the entry speed.
inline trajectory::SegmentSpec random_spec(Rng& rng) {
  trajectory::SegmentSpec s;
  s.length = uniform_int(rng, 0, 20) == 0 ? 0.0 : uniform(rng, 0.01, 1000.0);
  s.v_max = uniform(rng, 1.0, 1000.0);
  s.accel = uniform(rng, 10.0, 10000.0);
  const double reach = std::sqrt(2.0 * s.accel * s.length);
  s.v_in = uniform(rng, 0.0, s.v_max);
  const double lo = std::sqrt(std::max(0.0, s.v_in * s.v_in - reach * reach));
  const double hi = std::min(s.v_max, std::sqrt(s.v_in * s.v_in + reach * reach));
  s.v_out = uniform(rng, lo, std::max(lo, hi));
  return s;
}

/// Start position plus a polyline of LIN motions with random corner distances.
struct RandomGroup {
  ContinuousSkillPlan plan;
  std::vector<Vec3> waypoints;
};

inline RandomGroup random_group(Rng& rng, std::size_t n, double scale = 1.0) {
  std::vector<MotionCommand> motions;
  std::vector<Vec3> wps{Vec3::Zero()};
  for (std::size_t i = 0; i < n; ++i) {
    Vec3 next;
    do {
      const double dx = uniform(rng, -200, 200);
      const double dy = uniform(rng, -200, 200);
      next = wps.back() + Vec3(dx, dy, uniform(rng, -50, 50)) * scale;
    } while ((next - wps.back()).norm() < 1.0);
    wps.push_back(next);
    const double approx = i + 1 == n || uniform_int(rng, 0, 3) == 0 ? 0.0 : uniform(rng, 0.1, 40.0) * scale;
    const Dynamics d{uniform(rng, 50, 500), uniform(rng, 200, 5000)};
    motions.push_back(uniform_int(rng, 0, 1) ? MotionCommand::linear(Pose(next), d, approx)
                                             : MotionCommand::ptp(Pose(next), d, approx));
  }
  return {ContinuousSkillPlan(std::move(motions), std::nullopt), wps};
}

/// Arbitrary record that decodes cleanly; fields need not form a valid motion.
inline wire::MotionRecord random_record(Rng& rng) {
  using namespace wire;
  MotionRecord r;
  r.type = static_cast<MotionType>(uniform_int(rng, 1, 6));
  r.record_seq = static_cast<std::uint16_t>(uniform_int(rng, 0, 65535));
  const bool continuation = r.type == MotionType::Circular && uniform_int(rng, 0, 1);
  if (r.type == MotionType::PtpJoint) r.flags = flags::kJointTarget;
  if (continuation) r.flags = flags::kContinuation;
  for (std::size_t i = 0; i < 6; ++i) {
    r.target[i] = continuation && i >= 3 ? 0.0f : static_cast<float>(uniform(rng, -1e4, 1e4));
  }
  r.velocity = static_cast<float>(uniform(rng, 0.001, 5000));
  r.acceleration = static_cast<float>(uniform(rng, 0.001, 50000));
  r.approx_distance = static_cast<float>(uniform(rng, 0, 50));
  r.tool_frame = static_cast<std::uint8_t>(uniform_int(rng, 0, 255));
  r.base_frame = static_cast<std::uint8_t>(uniform_int(rng, 0, 255));
  r.force_setpoint =
      r.type == MotionType::LinForce ? static_cast<std::uint16_t>(uniform_int(rng, 0, 65535)) : 0;
  return r;
}

inline std::vector<std::uint8_t> from_hex(const std::string& hex) {
  std::vector<std::uint8_t> out;
  for (std::size_t i = 0; i + 1 < hex.size(); i += 2) {
    out.push_back(static_cast<std::uint8_t>(std::stoul(hex.substr(i, 2), nullptr, 16)));
  }
  return out;
}

/// Drives one streamed run through the co-simulation.
struct StreamRun {
  sim::SimTrace trace;
  std::vector<wire::RecordImage> consumed;
  std::size_t fallbacks = 0;
  std::size_t blends = 0;
  std::vector<robot::TraceEvent> robot_trace;
};

inline StreamRun stream(const std::vector<ContinuousSkillPlan>& plans, sim::SimConfig cfg = {},
                        const Pose& start = Pose(400.0, 0.0, 300.0)) {
  robot::RobotExecutor robot({.cycle_us = cfg.robot_cycle_us}, start);
  plc::SkillSequencer plc(plc::continuous_requests(plans));
  StreamRun out;
  out.trace = sim::run(cfg, plc, robot);
  out.consumed = robot.consumed();
  out.fallbacks = robot.fallbacks();
  out.blends = robot.blends();
  out.robot_trace = robot.trace();
  return out;
}

}  // namespace skillbench::testing
