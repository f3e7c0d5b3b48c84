#include "skillbench/wire.hpp"

#include <bit>
#include <cmath>
#include <limits>

namespace skillbench::wire {
namespace {

void put_u16(std::uint8_t* p, std::uint16_t v) {
  p[0] = static_cast<std::uint8_t>(v);
  p[1] = static_cast<std::uint8_t>(v >> 8);
}

void put_u32(std::uint8_t* p, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) p[i] = static_cast<std::uint8_t>(v >> (8 * i));
}

void put_f32(std::uint8_t* p, float v) { put_u32(p, std::bit_cast<std::uint32_t>(v)); }

std::uint16_t get_u16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t get_u32(const std::uint8_t* p) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p[i]) << (8 * i);
  return v;
}

float get_f32(const std::uint8_t* p) { return std::bit_cast<float>(get_u32(p)); }

float to_wire_scalar(double v) {
  if (!std::isfinite(v) || std::fabs(v) > std::numeric_limits<float>::max()) {
    throw SkillError(Errc::UnencodableValue, "scalar does not fit a finite float32");
  }
  return static_cast<float>(v);
}

void check_finite(float v) {
  if (!std::isfinite(v)) throw SkillError(Errc::NonFiniteScalar, "record scalar is not finite");
}

void check_length(std::span<const std::uint8_t> image, std::size_t expected) {
  if (image.size() < expected) throw SkillError(Errc::FrameTooShort, "image too short");
  if (image.size() > expected) throw SkillError(Errc::FrameTooLong, "image too long");
}

void check_padding(std::span<const std::uint8_t> image, std::size_t from) {
  for (std::size_t i = from; i < image.size(); ++i) {
    if (image[i] != 0) throw SkillError(Errc::NonZeroPadding, "padding byte is not zero");
  }
}

MotionRecord base_record(const MotionCommand& cmd, std::uint16_t record_seq) {
  MotionRecord r;
  r.type = cmd.type();
  r.record_seq = record_seq;
  r.velocity = to_wire_scalar(cmd.velocity());
  r.acceleration = to_wire_scalar(cmd.acceleration());
  r.approx_distance = to_wire_scalar(cmd.approx_distance());
  r.tool_frame = cmd.frames().tool;
  r.base_frame = cmd.frames().base;
  if (cmd.force_setpoint() > std::numeric_limits<std::uint16_t>::max()) {
    throw SkillError(Errc::UnencodableValue, "force setpoint exceeds 16 bits");
  }
  r.force_setpoint = static_cast<std::uint16_t>(cmd.force_setpoint());
  return r;
}

MotionRecord target_record(const MotionCommand& cmd, std::uint16_t record_seq) {
  MotionRecord r = base_record(cmd, record_seq);
  if (cmd.is_joint()) {
    r.flags = flags::kJointTarget;
    for (std::size_t i = 0; i < 6; ++i) r.target[i] = to_wire_scalar(cmd.joints()[i]);
  } else {
    for (std::size_t i = 0; i < 6; ++i) r.target[i] = to_wire_scalar(cmd.pose().values()[i]);
  }
  return r;
}

}  // namespace

RecordImage encode(const MotionRecord& r) {
  RecordImage out{};
  std::uint8_t* p = out.data();
  p[0] = static_cast<std::uint8_t>(r.type);
  p[1] = r.flags;
  put_u16(p + 2, r.record_seq);
  for (std::size_t i = 0; i < 6; ++i) put_f32(p + 4 + 4 * i, r.target[i]);
  put_f32(p + 28, r.velocity);
  put_f32(p + 32, r.acceleration);
  put_f32(p + 36, r.approx_distance);
  p[40] = r.tool_frame;
  p[41] = r.base_frame;
  put_u16(p + 42, r.force_setpoint);
  return out;
}

MotionRecord decode_record(std::span<const std::uint8_t> image) {
  check_length(image, kRecordSize);
  const std::uint8_t* p = image.data();
  MotionRecord r;
  const auto type = motion_type_from_code(p[0]);
  if (!type) throw SkillError(Errc::UnknownMotionType, "motion type code " + std::to_string(p[0]));
  r.type = *type;
  r.flags = p[1];
  r.record_seq = get_u16(p + 2);
  for (std::size_t i = 0; i < 6; ++i) r.target[i] = get_f32(p + 4 + 4 * i);
  r.velocity = get_f32(p + 28);
  r.acceleration = get_f32(p + 32);
  r.approx_distance = get_f32(p + 36);
  r.tool_frame = p[40];
  r.base_frame = p[41];
  r.force_setpoint = get_u16(p + 42);

  for (float v : r.target) check_finite(v);
  check_finite(r.velocity);
  check_finite(r.acceleration);
  check_finite(r.approx_distance);

  if (r.flags & flags::kReservedMask) {
    throw SkillError(Errc::InconsistentFlags, "reserved flag bits set");
  }
  if (r.is_joint() != (r.type == MotionType::PtpJoint) && !r.is_continuation()) {
    throw SkillError(Errc::InconsistentFlags, "joint flag does not match motion type");
  }
  if (r.is_continuation()) {
    if (r.type != MotionType::Circular || r.is_joint()) {
      throw SkillError(Errc::MalformedContinuation, "continuation outside a circular motion");
    }
    for (std::size_t i = 3; i < 6; ++i) {
      if (r.target[i] != 0.0f) {
        throw SkillError(Errc::MalformedContinuation, "continuation carries orientation");
      }
    }
  }
  return r;
}

RecordImage encode_record(const MotionCommand& cmd, std::uint16_t record_seq) {
  if (cmd.type() == MotionType::Circular) {
    throw SkillError(Errc::UnencodableValue, "circular motion needs explode_motion");
  }
  return encode(target_record(cmd, record_seq));
}

std::vector<RecordImage> explode_motion(const MotionCommand& cmd, std::uint32_t next_record_seq) {
  std::vector<RecordImage> out;
  auto seq = static_cast<std::uint16_t>(next_record_seq);
  if (cmd.type() == MotionType::Circular) {
    MotionRecord aux = base_record(cmd, seq);
    aux.flags = flags::kContinuation;
    aux.approx_distance = 0.0f;
    aux.force_setpoint = 0;
    const Vec3& point = *cmd.aux_point();
    for (int i = 0; i < 3; ++i) aux.target[i] = to_wire_scalar(point[i]);
    out.push_back(encode(aux));
    ++seq;
  }
  out.push_back(encode(target_record(cmd, seq)));
  return out;
}

std::vector<RecordImage> explode_plan(const ContinuousSkillPlan& plan,
                                      std::uint32_t first_record_index) {
  std::vector<RecordImage> out;
  std::uint32_t index = first_record_index;
  for (const auto& motion : plan.motions()) {
    auto records = explode_motion(motion, index);
    index += static_cast<std::uint32_t>(records.size());
    out.insert(out.end(), records.begin(), records.end());
  }
  return out;
}

FrameImage encode(const CommandFrame& f) {
  if (f.record_count > kSlotCount) {
    throw SkillError(Errc::RecordCountOutOfRange, "record_count above slot count");
  }
  FrameImage out{};
  std::uint8_t* p = out.data();
  p[0] = static_cast<std::uint8_t>(f.command);
  p[1] = f.record_count;
  put_u32(p + 2, f.total_no);
  put_u32(p + 6, f.loaded_through);
  put_u16(p + 10, f.frame_seq);
  for (std::size_t s = 0; s < kSlotCount; ++s) {
    std::copy(f.slots[s].begin(), f.slots[s].end(), p + kCommandHeaderSize + s * kRecordSize);
  }
  return out;
}

CommandFrame decode_command_frame(std::span<const std::uint8_t> image) {
  check_length(image, kFrameSize);
  const std::uint8_t* p = image.data();
  CommandFrame f;
  if (p[0] > static_cast<std::uint8_t>(CommandWord::Abort)) {
    throw SkillError(Errc::BadCommandWord, "command word " + std::to_string(p[0]));
  }
  f.command = static_cast<CommandWord>(p[0]);
  f.record_count = p[1];
  if (f.record_count > kSlotCount) {
    throw SkillError(Errc::RecordCountOutOfRange, "record_count " + std::to_string(p[1]));
  }
  f.total_no = get_u32(p + 2);
  f.loaded_through = get_u32(p + 6);
  if (f.loaded_through > f.total_no) {
    throw SkillError(Errc::InconsistentHeader, "loadedThrough exceeds totalNo");
  }
  f.frame_seq = get_u16(p + 10);
  for (std::size_t s = 0; s < kSlotCount; ++s) {
    const std::uint8_t* src = p + kCommandHeaderSize + s * kRecordSize;
    std::copy(src, src + kRecordSize, f.slots[s].begin());
  }
  check_padding(image, kCommandHeaderSize + kSlotCount * kRecordSize);
  return f;
}

std::string_view to_string(ExecutorState state) {
  switch (state) {
    case ExecutorState::Idle: return "IDLE";
    case ExecutorState::Loading: return "LOADING";
    case ExecutorState::Running: return "RUNNING";
    case ExecutorState::Done: return "DONE";
    case ExecutorState::Error: return "ERROR";
    case ExecutorState::Aborting: return "ABORTING";
  }
  return "?";
}

FrameImage encode(const FeedbackFrame& f) {
  FrameImage out{};
  std::uint8_t* p = out.data();
  p[0] = static_cast<std::uint8_t>(f.state);
  p[1] = f.error_code;
  put_u32(p + 2, f.cur_exec);
  put_u16(p + 6, f.acked_seq);
  for (std::size_t i = 0; i < 6; ++i) put_f32(p + 8 + 4 * i, f.tcp_pose[i]);
  return out;
}

FeedbackFrame decode_feedback_frame(std::span<const std::uint8_t> image) {
  check_length(image, kFrameSize);
  const std::uint8_t* p = image.data();
  if (p[0] > static_cast<std::uint8_t>(ExecutorState::Aborting)) {
    throw SkillError(Errc::BadStateCode, "state code " + std::to_string(p[0]));
  }
  FeedbackFrame f;
  f.state = static_cast<ExecutorState>(p[0]);
  f.error_code = p[1];
  f.cur_exec = get_u32(p + 2);
  f.acked_seq = get_u16(p + 6);
  for (std::size_t i = 0; i < 6; ++i) f.tcp_pose[i] = get_f32(p + 8 + 4 * i);
  check_padding(image, 32);
  return f;
}

}  // namespace skillbench::wire
