#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "skillbench/core.hpp"

namespace skillbench::wire {

inline constexpr std::size_t kRecordSize = 44;
inline constexpr std::size_t kFrameSize = 256;
inline constexpr std::size_t kSlotCount = 5;
inline constexpr std::size_t kCommandHeaderSize = 12;
inline constexpr std::size_t kFeedbackUsedSize = 36;

static_assert(kCommandHeaderSize + kSlotCount * kRecordSize <= kFrameSize);

using RecordImage = std::array<std::uint8_t, kRecordSize>;
using FrameImage = std::array<std::uint8_t, kFrameSize>;

namespace flags {
inline constexpr std::uint8_t kJointTarget = 0x01;
inline constexpr std::uint8_t kContinuation = 0x02;
inline constexpr std::uint8_t kReservedMask = 0xFC;
}  // namespace flags

/// Logical content of one 44-byte queue entry. Scalars are the
/// single-precision values that travel on the wire.
struct MotionRecord {
  MotionType type = MotionType::LinCartesian;
  std::uint8_t flags = 0;
  std::uint16_t record_seq = 0;
  std::array<float, 6> target{};
  float velocity = 0.0f;
  float acceleration = 0.0f;
  float approx_distance = 0.0f;
  std::uint8_t tool_frame = 0;
  std::uint8_t base_frame = 0;
  std::uint16_t force_setpoint = 0;

  bool is_joint() const { return (flags & flags::kJointTarget) != 0; }
  bool is_continuation() const { return (flags & flags::kContinuation) != 0; }

  bool operator==(const MotionRecord&) const = default;
};

RecordImage encode(const MotionRecord& record);
MotionRecord decode_record(std::span<const std::uint8_t> image);

/// Single-record encoding. CIRCULAR needs two records; use explode_motion.
RecordImage encode_record(const MotionCommand& cmd, std::uint16_t record_seq);

/// One record per motion, two for CIRCULAR (continuation carrying the
/// auxiliary point, then the target). record_seq values are consecutive.
std::vector<RecordImage> explode_motion(const MotionCommand& cmd, std::uint32_t next_record_seq);

/// Records of a whole plan, numbered from `first_record_index` (1-based).
std::vector<RecordImage> explode_plan(const ContinuousSkillPlan& plan,
                                      std::uint32_t first_record_index = 1);

inline std::size_t slot_for_record(std::uint32_t record_index) {
  return static_cast<std::size_t>((record_index - 1) % kSlotCount);
}

enum class CommandWord : std::uint8_t { Idle = 0, Start = 1, Abort = 2 };

struct CommandFrame {
  CommandWord command = CommandWord::Idle;
  std::uint8_t record_count = 0;
  std::uint32_t total_no = 0;
  std::uint32_t loaded_through = 0;
  std::uint16_t frame_seq = 0;
  std::array<RecordImage, kSlotCount> slots{};

  bool operator==(const CommandFrame&) const = default;
};

FrameImage encode(const CommandFrame& frame);
CommandFrame decode_command_frame(std::span<const std::uint8_t> image);

enum class ExecutorState : std::uint8_t {
  Idle = 0,
  Loading = 1,
  Running = 2,
  Done = 3,
  Error = 4,
  Aborting = 5,
};

std::string_view to_string(ExecutorState state);

struct FeedbackFrame {
  ExecutorState state = ExecutorState::Idle;
  std::uint8_t error_code = 0;
  std::uint32_t cur_exec = 0;
  std::uint16_t acked_seq = 0;
  std::array<float, 6> tcp_pose{};

  bool operator==(const FeedbackFrame&) const = default;
};

FrameImage encode(const FeedbackFrame& frame);
FeedbackFrame decode_feedback_frame(std::span<const std::uint8_t> image);

/// 16-bit serial-number comparison: true when `a` is at or after `b`.
inline bool seq_at_or_after(std::uint16_t a, std::uint16_t b) {
  return static_cast<std::int16_t>(static_cast<std::uint16_t>(a - b)) >= 0;
}

}  // namespace skillbench::wire
