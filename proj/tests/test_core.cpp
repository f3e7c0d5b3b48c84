#include <gtest/gtest.h>

#include <numbers>

#include "skillbench/core.hpp"
#include "support.hpp"

using namespace skillbench;
using skillbench::testing::Rng;

TEST(Pose, NormalizesAnglesIntoHalfOpenRange) {
  const Pose p(0, 0, 0, 180.0, -180.0, 540.0);
  EXPECT_DOUBLE_EQ(p.a(), -180.0);
  EXPECT_DOUBLE_EQ(p.b(), -180.0);
  EXPECT_DOUBLE_EQ(p.c(), -180.0);
  EXPECT_DOUBLE_EQ(Pose(0, 0, 0, 359.0).a(), -1.0);
  EXPECT_DOUBLE_EQ(Pose(0, 0, 0, -181.0).a(), 179.0);
}

TEST(Pose, RejectsNonFinite) {
  EXPECT_SKILL_ERROR(Pose(std::nan(""), 0, 0), Errc::InvalidValue);
  EXPECT_SKILL_ERROR(Pose(0, 0, 0, INFINITY), Errc::InvalidValue);
  EXPECT_SKILL_ERROR(JointTarget({0, 0, 0, 0, 0, NAN}), Errc::InvalidValue);
}

TEST(PoseDistance, Examples) {
  EXPECT_DOUBLE_EQ(pose_distance(Pose(1, 2, 3), Pose(1, 2, 3)), 0.0);
  EXPECT_DOUBLE_EQ(pose_distance(Pose(0, 0, 0), Pose(300, 0, 0)), 300.0);
  EXPECT_DOUBLE_EQ(pose_distance(Pose(0, 0, 0), Pose(3, 4, 0)), 5.0);
  EXPECT_DOUBLE_EQ(pose_distance(Pose(3, 4, 0), Pose(0, 0, 0)), 5.0);
}

TEST(CornerAngle, Examples) {
  EXPECT_NEAR(corner_angle(Pose(0, 0, 0), Pose(1, 0, 0), Pose(2, 0, 0)), 0.0, 1e-12);
  EXPECT_NEAR(corner_angle(Pose(0, 0, 0), Pose(10, 0, 0), Pose(10, 10, 0)), std::numbers::pi / 2,
              1e-12);
  EXPECT_NEAR(corner_angle(Pose(0, 0, 0), Pose(10, 0, 0), Pose(0, 0, 0)), std::numbers::pi, 1e-12);
  EXPECT_SKILL_ERROR(corner_angle(Pose(1, 1, 1), Pose(1, 1, 1), Pose(2, 0, 0)),
                     Errc::DegenerateSegment);
  EXPECT_SKILL_ERROR(corner_angle(Pose(0, 0, 0), Pose(1, 1, 1), Pose(1, 1, 1)),
                     Errc::DegenerateSegment);
}

TEST(CornerAngle, InvariantUnderRigidTransforms) {
  Rng rng(11);
  for (int i = 0; i < 1000; ++i) {
    Vec3 p[3];
    for (auto& v : p) v = Vec3::Random() * 100.0;
    if ((p[1] - p[0]).norm() < 1e-3 || (p[2] - p[1]).norm() < 1e-3) continue;
    const Eigen::Quaterniond q = Eigen::Quaterniond::UnitRandom();
    const Vec3 t = Vec3::Random() * 1000.0;
    auto moved = [&](const Vec3& v) { return Pose(q * v + t); };
    const double before = corner_angle(Pose(p[0]), Pose(p[1]), Pose(p[2]));
    const double after = corner_angle(moved(p[0]), moved(p[1]), moved(p[2]));
    EXPECT_NEAR(before, after, 1e-9);
    EXPECT_GE(before, 0.0);
    EXPECT_LE(before, std::numbers::pi);
  }
}

TEST(MotionCommand, EnforcesInvariants) {
  const Dynamics ok{100, 1000};
  EXPECT_SKILL_ERROR(MotionCommand::linear(Pose(), {0, 1000}), Errc::InvalidValue);
  EXPECT_SKILL_ERROR(MotionCommand::linear(Pose(), {100, -1}), Errc::InvalidValue);
  EXPECT_SKILL_ERROR(MotionCommand::linear(Pose(), ok, -1.0), Errc::InvalidValue);
  // aux point iff CIRCULAR
  EXPECT_SKILL_ERROR(MotionCommand(MotionType::LinCartesian, Pose(), Vec3(1, 2, 3), ok, 0),
                     Errc::InvalidValue);
  EXPECT_SKILL_ERROR(MotionCommand(MotionType::Circular, Pose(), std::nullopt, ok, 0),
                     Errc::InvalidValue);
  // joint target iff PTP_JOINT
  EXPECT_SKILL_ERROR(MotionCommand(MotionType::PtpJoint, Pose(), std::nullopt, ok, 0),
                     Errc::InvalidValue);
  EXPECT_SKILL_ERROR(MotionCommand(MotionType::LinCartesian, JointTarget(), std::nullopt, ok, 0),
                     Errc::InvalidValue);
  // force only on LIN_FORCE
  EXPECT_SKILL_ERROR(MotionCommand(MotionType::LinCartesian, Pose(), std::nullopt, ok, 0, {}, 5),
                     Errc::InvalidValue);
  EXPECT_NO_THROW(MotionCommand::circular(Vec3(1, 0, 0), Pose(2, 2, 0), ok));
  EXPECT_EQ(MotionCommand::linear_force(Pose(), 120, ok).force_setpoint(), 120u);
}

TEST(Enums, NamesRoundTrip) {
  for (int code = 1; code <= 6; ++code) {
    const auto t = motion_type_from_code(static_cast<std::uint8_t>(code));
    ASSERT_TRUE(t);
    EXPECT_EQ(parse_motion_type(to_string(*t)), t);
  }
  EXPECT_FALSE(motion_type_from_code(0));
  EXPECT_FALSE(motion_type_from_code(7));
  for (auto l : {PathLabel::Blending, PathLabel::AccuratePath, PathLabel::AccurateStop}) {
    EXPECT_EQ(parse_path_label(to_string(l)), l);
  }
  EXPECT_EQ(parse_execution_type("cm"), ExecutionType::CM);
  EXPECT_EQ(parse_execution_type("RC"), ExecutionType::RC);
  EXPECT_FALSE(parse_execution_type("xx"));
}

TEST(ContinuousSkillPlan, Invariants) {
  const Dynamics d{100, 1000};
  EXPECT_SKILL_ERROR(ContinuousSkillPlan({}, std::nullopt), Errc::InvalidValue);
  EXPECT_SKILL_ERROR(ContinuousSkillPlan({MotionCommand::linear(Pose(1, 0, 0), d, 5.0)}, std::nullopt),
                     Errc::InvalidValue);
  EXPECT_SKILL_ERROR(
      ContinuousSkillPlan({MotionCommand::linear(Pose(1, 0, 0), d), MotionCommand::linear(Pose(2, 0, 0), d)},
                          {PathLabel::AccurateStop, PathLabel::AccurateStop}, std::nullopt),
      Errc::InvalidValue);
  const ContinuousSkillPlan plan({MotionCommand::linear(Pose(1, 0, 0), d, 2.0),
                                  MotionCommand::linear(Pose(2, 0, 0), d)},
                                 std::string("grip"));
  EXPECT_EQ(plan.labels().front(), PathLabel::Blending);
  EXPECT_EQ(plan.labels().back(), PathLabel::AccurateStop);
  EXPECT_EQ(plan.terminal_action(), "grip");
}
