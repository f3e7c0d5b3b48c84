#include <gtest/gtest.h>

#include <numbers>

#include "skillbench/trajectory.hpp"
#include "support.hpp"

using namespace skillbench;
using namespace skillbench::trajectory;
using skillbench::testing::Rng;
using skillbench::testing::uniform;
using skillbench::testing::uniform_int;

using skillbench::testing::random_group;
using skillbench::testing::random_spec;

TEST(SegmentTime, Examples) {
  EXPECT_NEAR(segment_time({300, 250, 1000, 0, 0}), 1.45, 1e-12);
  EXPECT_EQ(segment_time({0, 250, 1000, 0, 0}), 0.0);
  EXPECT_NEAR(segment_time({30, 250, 1000, 0, 0}), 2.0 * std::sqrt(0.03), 1e-12);
}

TEST(SegmentTime, Errors) {
  EXPECT_SKILL_ERROR(segment_time({1, 250, 1000, 0, 200}), Errc::InfeasibleBoundary);
  EXPECT_SKILL_ERROR(segment_time({1, 0, 1000, 0, 0}), Errc::InvalidValue);
  EXPECT_SKILL_ERROR(segment_time({1, 10, 1000, 20, 0}), Errc::InvalidValue);
  EXPECT_SKILL_ERROR(segment_time({-1, 10, 1000, 0, 0}), Errc::InvalidValue);
}

TEST(SegmentTime, MatchesIntegratedProfile) {
  Rng rng(5);
  for (int i = 0; i < 1000; ++i) {
    const SegmentSpec s = random_spec(rng);
    const auto oracle = skillbench::testing::integrate_profile(s);
    const double t = segment_time(s);
    ASSERT_NEAR(t, oracle.time, 1e-6) << s.length << " " << s.v_max << " " << s.accel << " "
                                      << s.v_in << " " << s.v_out;
    ASSERT_NEAR(oracle.covered, s.length, 1e-6 * std::max(1.0, s.length));
    ASSERT_GE(t + 1e-12, s.length / s.v_max);
  }
}

TEST(PtpTime, DominantAxis) {
  const double zeros[6] = {};
  EXPECT_EQ(ptp_time(zeros, 180, 720), 0.0);
  const double one[6] = {90, 0, 0, 0, 0, 0};
  EXPECT_NEAR(ptp_time(one, 180, 720), 0.75, 1e-12);
  const double two[6] = {90, -45, 0, 0, 0, 0};
  EXPECT_EQ(ptp_time(two, 180, 720), ptp_time(one, 180, 720));
}

TEST(BlendGeometry, RightAngle) {
  const auto g = blend_geometry(std::numbers::pi / 2, 10, 250, 250, 1000);
  EXPECT_NEAR(g.radius, 10.0, 1e-12);
  EXPECT_NEAR(g.arc_length, 5.0 * std::numbers::pi, 1e-12);
  EXPECT_NEAR(g.v_blend, 100.0, 1e-12);
  EXPECT_EQ(g.truncation, 10.0);
}

TEST(BlendGeometry, EdgeCases) {
  const auto straight = blend_geometry(0.0, 10, 250, 200, 1000);
  EXPECT_TRUE(std::isinf(straight.radius));
  EXPECT_EQ(straight.v_blend, 200.0);
  EXPECT_EQ(straight.deviation, 0.0);
  EXPECT_EQ(blend_geometry(1.0, 0.0, 250, 250, 1000).v_blend, 0.0);
  EXPECT_SKILL_ERROR(blend_geometry(std::numbers::pi, 10, 1, 1, 1), Errc::ReversalAngle);
}

TEST(BlendGeometry, SampledArcStaysWithinApproxDistance) {
  Rng rng(9);
  for (int i = 0; i < 2000; ++i) {
    const double angle = uniform(rng, 1e-4, std::numbers::pi - 1e-4);
    const double d = uniform(rng, 0.01, 50.0);
    const auto g = blend_geometry(angle, d, 500, 500, 5000);
    // Corner at the origin, incoming along +x, outgoing turned by `angle`.
    const Vec3 u(1, 0, 0), w(std::cos(angle), std::sin(angle), 0);
    const Vec3 t1 = -d * u, t2 = d * w;
    const Vec3 center = t1 + g.radius * Vec3(0, 1, 0);
    ASSERT_NEAR((t2 - center).norm(), g.radius, 1e-9 * std::max(1.0, g.radius));
    ASSERT_NEAR((t2 - center).dot(w), 0.0, 1e-9 * std::max(1.0, g.radius));  // tangent
    double worst = 0.0, closest = INFINITY;
    for (int k = 0; k <= 200; ++k) {
      const double phi = angle * k / 200.0;
      const Vec3 p = center + g.radius * Vec3(std::sin(phi), -std::cos(phi), 0);
      worst = std::max(worst, p.norm());
      closest = std::min(closest, p.norm());
    }
    ASSERT_LE(worst, d + 1e-9);
    ASSERT_NEAR(closest, g.deviation, 1e-9 * std::max(1.0, d));
  }
}

TEST(GroupProfile, SingleSegmentIgnoresBlendingFlag) {
  const ContinuousSkillPlan plan({MotionCommand::linear(Pose(300, 0, 0), {250, 1000})}, std::nullopt);
  const Vec3 wps[] = {Vec3::Zero(), Vec3(300, 0, 0)};
  EXPECT_EQ(plan_group_profile(plan, wps, true).total_time,
            plan_group_profile(plan, wps, false).total_time);
  EXPECT_NEAR(plan_group_profile(plan, wps, true).total_time, 1.45, 1e-12);
}

TEST(GroupProfile, PerpendicularCornerBlendIsFaster) {
  const Dynamics d{250, 1000};
  const ContinuousSkillPlan plan(
      {MotionCommand::linear(Pose(300, 0, 0), d, 10.0), MotionCommand::linear(Pose(300, 300, 0), d)},
      std::nullopt);
  const Vec3 wps[] = {Vec3::Zero(), Vec3(300, 0, 0), Vec3(300, 300, 0)};
  const auto blended = plan_group_profile(plan, wps, true);
  const auto stopped = plan_group_profile(plan, wps, false);
  EXPECT_NEAR(stopped.total_time, 2.9, 1e-12);
  ASSERT_EQ(blended.corners.size(), 1u);
  EXPECT_EQ(blended.corners[0].kind, CornerKind::Blend);
  EXPECT_NEAR(blended.corners[0].speed, 100.0, 1e-9);
  // Hand computation: 290 mm 0->100 with cap 250, arc 5*pi at 100, 290 mm 100->0.
  const double seg = segment_time({290, 250, 1000, 0, 100});
  EXPECT_NEAR(blended.total_time, 2 * seg + 5 * std::numbers::pi / 100, 1e-12);
  EXPECT_LT(blended.total_time, stopped.total_time);
  EXPECT_NEAR(blended.max_path_deviation, 10 * std::tan(std::numbers::pi / 8), 1e-12);
}

TEST(GroupProfile, ExactWaypointsMatchStopTiming) {
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    auto g = random_group(rng, 6);
    std::vector<MotionCommand> exact;
    for (const auto& m : g.plan.motions()) exact.push_back(m.with_approx(0.0));
    const ContinuousSkillPlan plan(exact, std::nullopt);
    // Non-collinear random corners: no pass-through applies.
    EXPECT_EQ(plan_group_profile(plan, g.waypoints, true).total_time,
              plan_group_profile(plan, g.waypoints, false).total_time);
  }
}

TEST(GroupProfile, CollinearJunctionPassesThrough) {
  const Dynamics d{250, 2000};
  const ContinuousSkillPlan plan(
      {MotionCommand::linear(Pose(0, 0, 50), d), MotionCommand::linear(Pose(0, 0, 0), d)}, std::nullopt);
  const Vec3 wps[] = {Vec3(0, 0, 80), Vec3(0, 0, 50), Vec3(0, 0, 0)};
  const auto p = plan_group_profile(plan, wps, true);
  EXPECT_EQ(p.corners[0].kind, CornerKind::PassThrough);
  EXPECT_NEAR(p.total_time, segment_time({80, 250, 2000, 0, 0}), 1e-12);
  EXPECT_EQ(p.max_path_deviation, 0.0);
}

TEST(GroupProfile, DegenerateCornersStop) {
  const Dynamics d{250, 2000};
  // approx larger than half the following segment
  const ContinuousSkillPlan short_next(
      {MotionCommand::linear(Pose(100, 0, 0), d, 20.0), MotionCommand::linear(Pose(100, 30, 0), d)},
      std::nullopt);
  const Vec3 w1[] = {Vec3::Zero(), Vec3(100, 0, 0), Vec3(100, 30, 0)};
  const auto p1 = plan_group_profile(short_next, w1, true);
  EXPECT_EQ(p1.corners[0].kind, CornerKind::Stop);
  EXPECT_TRUE(p1.corners[0].degraded);
  // reversal
  const ContinuousSkillPlan reversal(
      {MotionCommand::linear(Pose(100, 0, 0), d, 5.0), MotionCommand::linear(Pose(0, 0, 0), d)},
      std::nullopt);
  const Vec3 w2[] = {Vec3::Zero(), Vec3(100, 0, 0), Vec3(0, 0, 0)};
  EXPECT_EQ(plan_group_profile(reversal, w2, true).corners[0].kind, CornerKind::Stop);
}

TEST(GroupProfile, RandomizedInvariants) {
  Rng rng(21);
  for (int i = 0; i < 2000; ++i) {
    const auto g = random_group(rng, static_cast<std::size_t>(uniform_int(rng, 1, 12)));
    const auto on = plan_group_profile(g.plan, g.waypoints, true);
    const auto off = plan_group_profile(g.plan, g.waypoints, false);
    ASSERT_LE(on.total_time, off.total_time + 1e-9) << "case " << i;

    double sum = 0.0, max_approx = 0.0;
    for (double t : on.segment_durations) sum += t;
    for (double t : on.blend_durations) sum += t;
    ASSERT_NEAR(sum, on.total_time, 1e-9);
    for (const auto& m : g.plan.motions()) max_approx = std::max(max_approx, m.approx_distance());
    ASSERT_LE(on.max_path_deviation, max_approx + 1e-9);

    bool any_blend = false;
    for (std::size_t j = 0; j < on.corners.size(); ++j) {
      const auto& c = on.corners[j];
      if (c.kind == CornerKind::Blend) {
        any_blend = true;
        // arc entered, traversed and left at one speed, within the centripetal cap
        ASSERT_EQ(c.speed, on.boundary_speeds[j + 1]);
        ASSERT_LE(c.speed, c.geometry.v_blend + 1e-12);
        ASSERT_LE(c.geometry.deviation, g.plan.motions()[j].approx_distance() + 1e-9);
      }
    }
    if (!any_blend) ASSERT_NEAR(on.total_time, off.total_time, 1e-9);

    // Scaling lengths and corner distances up never makes the group faster.
    std::vector<MotionCommand> scaled;
    std::vector<Vec3> wps;
    for (const auto& w : g.waypoints) wps.push_back(2.0 * w);
    for (std::size_t k = 0; k < g.plan.size(); ++k) {
      const auto& m = g.plan.motions()[k];
      scaled.emplace_back(m.type(), Pose(wps[k + 1]), std::nullopt, m.dynamics(), 2.0 * m.approx_distance());
    }
    const ContinuousSkillPlan big(scaled, std::nullopt);
    ASSERT_GE(plan_group_profile(big, wps, true).total_time, on.total_time - 1e-9);
  }
}

TEST(GroupProfile, CommittedEntryStaysFeasible) {
  // Entering at 200 mm/s, 10 mm is too short to stop but the straight
  // continuation leaves room to slow down on the next segment.
  PathSegment a, b;
  a.length = 10;
  b.length = 100;
  for (auto* s : {&a, &b}) {
    s->v_max = 250;
    s->accel = 1000;
    s->dir_in = s->dir_out = Vec3(1, 0, 0);
  }
  a.end = Vec3(10, 0, 0);
  b.start = a.end;
  b.end = Vec3(110, 0, 0);
  const PathSegment chain[] = {a, b};
  ChainEntry entry{200, 0, {CornerKind::PassThrough}};
  const auto p = plan_chain(chain, true, entry);
  EXPECT_EQ(p.corners[0].kind, CornerKind::PassThrough);
  EXPECT_GE(p.corners[0].speed * p.corners[0].speed, 200.0 * 200.0 - 2 * 1000 * 10 - 1e-6);
  EXPECT_TRUE(std::isfinite(p.total_time));

  const PathSegment alone[] = {a};
  EXPECT_SKILL_ERROR(plan_chain(alone, true, entry), Errc::InfeasibleBoundary);
}

TEST(BuildSegments, CircleAndJointMoves) {
  const Dynamics d{100, 1000};
  const MotionCommand motions[] = {
      MotionCommand::circular(Vec3(100, 100, 0), Pose(200, 0, 0), d),
      MotionCommand::ptp_joint(JointTarget({90, 10, 0, 0, 0, 0}), {180, 720}),
  };
  const auto segs = build_segments(motions, Vec3::Zero());
  ASSERT_EQ(segs.size(), 2u);
  EXPECT_NEAR(segs[0].length, 100.0 * std::numbers::pi, 1e-9);
  EXPECT_EQ(segs[0].records, 2u);
  EXPECT_TRUE(segs[1].joint_space);
  EXPECT_DOUBLE_EQ(segs[1].length, 90.0);
  EXPECT_EQ(segs[1].end, segs[0].end);
}
