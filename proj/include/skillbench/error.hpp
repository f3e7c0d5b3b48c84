#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace skillbench {

enum class Errc {
  InvalidValue,
  DegenerateSegment,
  // wire
  UnencodableValue,
  UnknownMotionType,
  NonFiniteScalar,
  MalformedContinuation,
  InconsistentFlags,
  FrameTooShort,
  FrameTooLong,
  BadCommandWord,
  RecordCountOutOfRange,
  InconsistentHeader,
  NonZeroPadding,
  BadStateCode,
  // trajectory
  InfeasibleBoundary,
  ReversalAngle,
  // planner
  EmptyProcess,
  UnresolvedPose,
  UnreachableClearance,
  // plc
  BusySkill,
  PlanTooLarge,
  FeedbackRegression,
  RobotError,
  NotRunning,
  // robot
  DecodeError,
  StarvationTimeout,
  // sim / bench
  SimTimeout,
  UnknownSetup,
  InvalidScenarioFile,
  NonPositiveBaseline,
  EmptyInput,
  ParseError,
};

std::string_view to_string(Errc code);

class SkillError : public std::runtime_error {
 public:
  SkillError(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace skillbench
