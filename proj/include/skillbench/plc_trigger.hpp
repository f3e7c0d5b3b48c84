#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "skillbench/core.hpp"
#include "skillbench/wire.hpp"

namespace skillbench::plc {

enum class SkillState : std::uint8_t { Idle, Loading, Running, Done, Error, Aborting };

std::string_view to_string(SkillState state);
bool transition_allowed(SkillState from, SkillState to);

/// PLC-side skill function block: state machine plus the FIFO update logic
/// that streams records through the five command-frame slots.
class PlcSkill {
 public:
  wire::CommandFrame start_skill(const ContinuousSkillPlan& plan);
  wire::CommandFrame start_records(std::vector<wire::RecordImage> records);
  /// Triggers a program already resident on the robot (RC execution).
  wire::CommandFrame start_native(std::uint32_t total_records);

  /// One PLC cycle with the latest feedback image.
  wire::CommandFrame cycle(const wire::FeedbackFrame& feedback);

  wire::CommandFrame abort();
  /// DONE -> IDLE.
  void reset();
  /// ERROR -> IDLE.
  void acknowledge_error();

  SkillState state() const { return state_; }
  const wire::CommandFrame& frame() const { return frame_; }
  std::uint32_t total_no() const { return frame_.total_no; }
  std::uint32_t loaded_through() const { return frame_.loaded_through; }
  std::uint32_t last_cur_exec() const { return last_cur_exec_; }
  std::uint8_t robot_error_code() const { return robot_error_; }
  std::uint64_t window_violations() const { return window_violations_; }
  const std::vector<SkillState>& history() const { return history_; }

 private:
  void transition(SkillState to);
  void begin(std::uint32_t total, bool native);
  void publish(const wire::CommandFrame& before);
  bool is_current(const wire::FeedbackFrame& feedback) const;

  SkillState state_ = SkillState::Idle;
  wire::CommandFrame frame_{};
  std::vector<wire::RecordImage> records_;
  std::array<std::uint32_t, wire::kSlotCount> slot_record_{};
  bool native_ = false;
  std::uint16_t start_seq_ = 0;
  std::uint16_t abort_seq_ = 0;
  std::uint32_t last_cur_exec_ = 0;
  std::uint8_t robot_error_ = 0;
  std::uint64_t window_violations_ = 0;
  std::vector<SkillState> history_{SkillState::Idle};
};

/// One skill invocation queued on the PLC.
struct SkillRequest {
  std::vector<wire::RecordImage> records;
  std::optional<std::uint32_t> native_total;  // set for RC triggers

  static SkillRequest streamed(const ContinuousSkillPlan& plan);
  static SkillRequest native(std::uint32_t total_records);
};

/// Continuous-motion execution: one skill per group.
std::vector<SkillRequest> continuous_requests(const std::vector<ContinuousSkillPlan>& plans);
/// Single-motion execution: every motion is its own skill ending in an exact stop.
std::vector<ContinuousSkillPlan> single_motion_plans(const std::vector<MotionCommand>& motions);
std::vector<SkillRequest> run_single_motion_sequence(const std::vector<MotionCommand>& motions);

/// PLC program that runs queued skills back to back, starting each one as
/// soon as the previous reports DONE. Measures the sequence time from the
/// cycle that emits the first START to the cycle that reads the last DONE.
class SkillSequencer {
 public:
  using AbortPredicate = std::function<bool(std::size_t skill, const wire::FeedbackFrame&)>;

  explicit SkillSequencer(std::vector<SkillRequest> requests);

  wire::CommandFrame cycle(const wire::FeedbackFrame& feedback, std::int64_t now_us);

  void abort_when(AbortPredicate predicate) { abort_when_ = std::move(predicate); }

  bool finished() const { return finished_; }
  bool aborted() const { return aborted_; }
  std::size_t skills_started() const { return started_; }
  std::size_t skills_completed() const { return completed_; }
  std::optional<std::int64_t> start_us() const { return start_us_; }
  std::optional<std::int64_t> stop_us() const { return stop_us_; }
  const PlcSkill& skill() const { return skill_; }
  std::uint64_t window_violations() const { return skill_.window_violations(); }

 private:
  void start_next(std::int64_t now_us);

  std::vector<SkillRequest> requests_;
  PlcSkill skill_;
  std::size_t next_ = 0;
  std::size_t started_ = 0;
  std::size_t completed_ = 0;
  bool finished_ = false;
  bool aborted_ = false;
  std::optional<std::int64_t> start_us_;
  std::optional<std::int64_t> stop_us_;
  AbortPredicate abort_when_;
};

}  // namespace skillbench::plc
