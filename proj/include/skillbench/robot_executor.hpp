#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "skillbench/core.hpp"
#include "skillbench/trajectory.hpp"
#include "skillbench/wire.hpp"

namespace skillbench::robot {

enum class EventKind {
  SkillStart,
  RecordStart,
  RecordEnd,
  Blend,
  PassThrough,
  ExactStop,
  Fallback,
  State,
  Error,
};

std::string_view to_string(EventKind kind);

struct TraceEvent {
  std::int64_t t_us = 0;  // cycle on which the robot observed it
  EventKind kind = EventKind::State;
  std::uint32_t record = 0;
  std::string detail;
};

struct RobotConfig {
  std::int64_t cycle_us = 4000;
  std::uint32_t starvation_timeout_cycles = 250;
};

/// How the active motion's endpoint will be passed.
struct BlendDecision {
  trajectory::CornerKind kind = trajectory::CornerKind::Stop;
  bool fallback = false;          // successor exists but was not yet streamed
  bool successor_visible = false;
  std::uint32_t visible_through = 0;
  double speed = 0.0;
  trajectory::BlendGeometry geometry;
};

/// Error codes reported in the feedback frame.
inline constexpr std::uint8_t kErrorDecode = 1;
inline constexpr std::uint8_t kErrorStarvation = 2;

/// Robot-controller side of the skill: consumes command frames, keeps the
/// motion queue, plans ahead over the visible records and reports progress.
class RobotExecutor {
 public:
  explicit RobotExecutor(RobotConfig config = {}, const Pose& initial_pose = {});

  /// Resident program for RC execution; a START then runs it without
  /// reading the command-frame slots. Group ends are exact stops.
  void load_native_program(const std::vector<ContinuousSkillPlan>& plans);
  std::uint32_t native_total() const;

  wire::FeedbackFrame cycle(const wire::CommandFrame& frame, std::int64_t now_us);

  /// Blend decision for the active motion's endpoint; without an active
  /// motion, for the motion starting at the next record given what is visible.
  BlendDecision lookahead_plan() const;

  wire::ExecutorState state() const { return state_; }
  std::uint32_t cur_exec() const { return cur_exec_; }
  std::uint32_t total_no() const { return total_no_; }
  const std::vector<TraceEvent>& trace() const { return trace_; }
  /// Records in the order the executor took them into execution.
  const std::vector<wire::RecordImage>& consumed() const { return consumed_; }
  std::size_t fallbacks() const { return fallbacks_; }
  std::size_t blends() const { return blends_; }
  /// Exact (continuous-time) end of the last completed motion, seconds.
  double last_motion_end_s() const { return last_end_s_; }
  const Vec3& position() const { return position_; }

 private:
  struct Active {
    std::uint32_t first = 0;
    std::size_t records = 1;
    double start_s = 0.0;
    double end_s = 0.0;
    Vec3 from = Vec3::Zero();
    Vec3 to = Vec3::Zero();
    std::optional<std::array<double, 6>> joints_after;
    std::array<double, 3> orientation{};
    BlendDecision decision;
  };

  struct Lookahead {
    std::vector<MotionCommand> motions;
    std::vector<std::size_t> record_counts;
    bool successor_exists = false;
  };

  void set_state(wire::ExecutorState s, std::int64_t now_us);
  void fail(std::uint8_t code, const std::string& why, std::int64_t now_us);
  void start_skill(const wire::CommandFrame& frame, std::int64_t now_us);
  bool ingest(const wire::CommandFrame& frame, std::int64_t now_us);
  void advance(std::int64_t now_us, bool fresh_records);
  bool begin_motion(std::int64_t now_us, double start_s);
  std::uint32_t group_end(std::uint32_t index) const;
  std::uint32_t visible_through() const;
  Lookahead collect(std::uint32_t first) const;
  std::optional<MotionCommand> motion_at(std::uint32_t index, std::size_t& records) const;
  wire::FeedbackFrame feedback(std::int64_t now_us) const;
  void log(std::int64_t t_us, EventKind kind, std::uint32_t record, std::string detail);

  RobotConfig config_;
  wire::ExecutorState state_ = wire::ExecutorState::Idle;
  std::uint8_t error_code_ = 0;
  std::uint16_t acked_seq_ = 0;
  bool seen_frame_ = false;

  std::uint32_t total_no_ = 0;
  std::uint32_t cur_exec_ = 0;
  std::uint32_t loaded_through_ = 0;
  std::uint32_t ingested_through_ = 0;
  std::map<std::uint32_t, wire::MotionRecord> buffer_;

  bool native_loaded_ = false;
  bool native_run_ = false;
  std::vector<wire::MotionRecord> native_records_;
  std::vector<std::uint32_t> native_group_ends_;

  std::optional<Active> active_;
  trajectory::ChainEntry entry_{};
  double pending_arc_s_ = 0.0;
  double next_start_s_ = 0.0;
  std::uint32_t starved_cycles_ = 0;
  std::int64_t arrival_us_ = 0;

  Vec3 position_ = Vec3::Zero();
  std::array<double, 3> orientation_{};
  std::array<double, 6> joints_{};
  double last_end_s_ = 0.0;

  std::vector<TraceEvent> trace_;
  std::vector<wire::RecordImage> consumed_;
  std::size_t fallbacks_ = 0;
  std::size_t blends_ = 0;
};

/// Rebuilds a motion command from its wire record(s). `aux` is the
/// continuation record for CIRCULAR motions.
MotionCommand to_motion(const wire::MotionRecord& record,
                        const wire::MotionRecord* aux = nullptr);

struct NativeRun {
  std::vector<TraceEvent> trace;
  std::vector<wire::RecordImage> consumed;
  double done_s = 0.0;        // cycle on which DONE was reported
  double motion_time_s = 0.0; // exact end of the last motion
  std::size_t cycles = 0;
};

/// Runs the plans as a resident robot program without a PLC or fieldbus.
NativeRun execute_native(const std::vector<ContinuousSkillPlan>& plans, const Pose& start = {},
                         RobotConfig config = {});

}  // namespace skillbench::robot
