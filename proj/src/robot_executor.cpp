#include "skillbench/robot_executor.hpp"

#include <algorithm>
#include <cstdio>

namespace skillbench::robot {
namespace {

constexpr std::size_t kMaxChain = 256;
constexpr double kTimeEps = 1e-9;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

}  // namespace

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::SkillStart: return "skill_start";
    case EventKind::RecordStart: return "record_start";
    case EventKind::RecordEnd: return "record_end";
    case EventKind::Blend: return "blend";
    case EventKind::PassThrough: return "pass_through";
    case EventKind::ExactStop: return "exact_stop";
    case EventKind::Fallback: return "fallback";
    case EventKind::State: return "state";
    case EventKind::Error: return "error";
  }
  return "?";
}

MotionCommand to_motion(const wire::MotionRecord& r, const wire::MotionRecord* aux) {
  const Dynamics dynamics{r.velocity, r.acceleration};
  const FrameIds frames{r.tool_frame, r.base_frame};
  const auto& t = r.target;
  if (r.is_continuation()) throw SkillError(Errc::DecodeError, "continuation without target");
  if (r.type == MotionType::PtpJoint) {
    return MotionCommand::ptp_joint(JointTarget({t[0], t[1], t[2], t[3], t[4], t[5]}), dynamics,
                                    r.approx_distance, frames);
  }
  const Pose pose(t[0], t[1], t[2], t[3], t[4], t[5]);
  std::optional<Vec3> aux_point;
  if (r.type == MotionType::Circular) {
    if (!aux) throw SkillError(Errc::DecodeError, "circular target without continuation");
    aux_point = Vec3(aux->target[0], aux->target[1], aux->target[2]);
  }
  return MotionCommand(r.type, pose, aux_point, dynamics, r.approx_distance, frames,
                       r.type == MotionType::LinForce ? r.force_setpoint : 0u);
}

RobotExecutor::RobotExecutor(RobotConfig config, const Pose& initial_pose)
    : config_(config),
      position_(initial_pose.position()),
      orientation_{initial_pose.a(), initial_pose.b(), initial_pose.c()} {}

void RobotExecutor::load_native_program(const std::vector<ContinuousSkillPlan>& plans) {
  native_records_.clear();
  native_group_ends_.clear();
  std::uint32_t index = 1;
  for (const auto& plan : plans) {
    for (const auto& image : wire::explode_plan(plan, index)) {
      native_records_.push_back(wire::decode_record(image));
    }
    index = static_cast<std::uint32_t>(native_records_.size()) + 1;
    native_group_ends_.push_back(static_cast<std::uint32_t>(native_records_.size()));
  }
  native_loaded_ = true;
}

std::uint32_t RobotExecutor::native_total() const {
  return static_cast<std::uint32_t>(native_records_.size());
}

void RobotExecutor::log(std::int64_t t_us, EventKind kind, std::uint32_t record,
                        std::string detail) {
  trace_.push_back({t_us, kind, record, std::move(detail)});
}

void RobotExecutor::set_state(wire::ExecutorState s, std::int64_t now_us) {
  if (s == state_) return;
  state_ = s;
  log(now_us, EventKind::State, cur_exec_, std::string(wire::to_string(s)));
}

void RobotExecutor::fail(std::uint8_t code, const std::string& why, std::int64_t now_us) {
  error_code_ = code;
  active_.reset();
  log(now_us, EventKind::Error, cur_exec_, why);
  set_state(wire::ExecutorState::Error, now_us);
}

void RobotExecutor::start_skill(const wire::CommandFrame& frame, std::int64_t now_us) {
  native_run_ = native_loaded_;
  total_no_ = native_run_ ? native_total() : frame.total_no;
  cur_exec_ = 0;
  loaded_through_ = 0;
  ingested_through_ = 0;
  buffer_.clear();
  active_.reset();
  entry_ = {};
  pending_arc_s_ = 0.0;
  next_start_s_ = static_cast<double>(now_us) * 1e-6;
  starved_cycles_ = 0;
  error_code_ = 0;
  log(now_us, EventKind::SkillStart, 0, "total=" + std::to_string(total_no_));
  set_state(wire::ExecutorState::Loading, now_us);
  if (native_run_ && frame.total_no != total_no_) {
    fail(kErrorDecode, "START totalNo does not match the resident program", now_us);
  }
}

bool RobotExecutor::ingest(const wire::CommandFrame& frame, std::int64_t now_us) {
  loaded_through_ = std::min(frame.loaded_through, total_no_);
  bool fresh = false;
  for (std::uint32_t m = ingested_through_ + 1; m <= loaded_through_; ++m) {
    wire::MotionRecord record;
    try {
      record = wire::decode_record(frame.slots[wire::slot_for_record(m)]);
    } catch (const SkillError& e) {
      fail(kErrorDecode, "record " + std::to_string(m) + ": " + e.what(), now_us);
      return false;
    }
    if (record.record_seq != static_cast<std::uint16_t>(m)) {
      fail(kErrorDecode, "record " + std::to_string(m) + ": record_seq mismatch", now_us);
      return false;
    }
    buffer_[m] = record;
    fresh = true;
    ingested_through_ = m;
  }
  arrival_us_ = fresh ? now_us : arrival_us_;
  return fresh;
}

std::uint32_t RobotExecutor::visible_through() const {
  return native_run_ ? total_no_ : ingested_through_;
}

std::uint32_t RobotExecutor::group_end(std::uint32_t index) const {
  if (!native_run_) return total_no_;
  const auto it = std::lower_bound(native_group_ends_.begin(), native_group_ends_.end(), index);
  return it == native_group_ends_.end() ? total_no_ : *it;
}

std::optional<MotionCommand> RobotExecutor::motion_at(std::uint32_t index,
                                                      std::size_t& records) const {
  auto fetch = [&](std::uint32_t m) -> const wire::MotionRecord* {
    if (m == 0 || m > visible_through()) return nullptr;
    if (native_run_) return &native_records_[m - 1];
    const auto it = buffer_.find(m);
    return it == buffer_.end() ? nullptr : &it->second;
  };
  const wire::MotionRecord* first = fetch(index);
  if (!first) return std::nullopt;
  if (first->is_continuation()) {
    const wire::MotionRecord* target = fetch(index + 1);
    if (!target) return std::nullopt;
    if (target->type != MotionType::Circular || target->is_continuation()) {
      throw SkillError(Errc::DecodeError, "continuation not followed by its circular target");
    }
    records = 2;
    return to_motion(*target, first);
  }
  records = 1;
  return to_motion(*first);
}

RobotExecutor::Lookahead RobotExecutor::collect(std::uint32_t first) const {
  Lookahead la;
  const std::uint32_t end = group_end(first);
  std::uint32_t index = first;
  while (index <= end && la.motions.size() < kMaxChain) {
    std::size_t records = 1;
    auto motion = motion_at(index, records);
    if (!motion) break;
    if (index + records - 1 > end) {
      throw SkillError(Errc::DecodeError, "circular pair crosses the end of the sequence");
    }
    la.motions.push_back(std::move(*motion));
    la.record_counts.push_back(records);
    index += static_cast<std::uint32_t>(records);
  }
  if (!la.record_counts.empty()) {
    la.successor_exists = first + la.record_counts.front() - 1 < end;
  }
  return la;
}

BlendDecision RobotExecutor::lookahead_plan() const {
  if (active_) return active_->decision;
  BlendDecision d;
  d.visible_through = visible_through();
  const Lookahead la = collect(cur_exec_ + 1);
  if (la.motions.empty()) return d;
  d.successor_visible = la.motions.size() >= 2;
  if (!d.successor_visible) {
    d.fallback = la.successor_exists;
    return d;
  }
  const auto segments = trajectory::build_segments(la.motions, position_, joints_);
  const auto profile = trajectory::plan_chain(segments, true, entry_);
  const auto& corner = profile.corners.front();
  d.kind = corner.kind;
  d.speed = corner.speed;
  d.geometry = corner.geometry;
  return d;
}

bool RobotExecutor::begin_motion(std::int64_t now_us, double start_s) {
  const std::uint32_t first = cur_exec_ + 1;
  Lookahead la;
  try {
    la = collect(first);
  } catch (const SkillError& e) {
    fail(kErrorDecode, e.what(), now_us);
    return false;
  }
  if (la.motions.empty()) return false;

  const auto segments = trajectory::build_segments(la.motions, position_, joints_);
  const auto profile = trajectory::plan_chain(segments, true, entry_);
  const std::size_t records = la.record_counts.front();
  const double duration = pending_arc_s_ + profile.segment_durations.front();

  Active a;
  a.first = first;
  a.records = records;
  a.start_s = start_s;
  a.end_s = start_s + duration;
  a.from = position_;
  a.to = segments.front().end;
  const MotionCommand& m = la.motions.front();
  if (m.is_joint()) {
    a.joints_after = m.joints().values();
    a.orientation = orientation_;
  } else {
    a.orientation = {m.pose().a(), m.pose().b(), m.pose().c()};
  }

  for (std::uint32_t k = first; k < first + records; ++k) {
    const wire::MotionRecord& r = native_run_ ? native_records_[k - 1] : buffer_.at(k);
    consumed_.push_back(wire::encode(r));
    log(now_us, EventKind::RecordStart, k, std::string(to_string(r.type)));
  }

  const std::uint32_t last = first + static_cast<std::uint32_t>(records) - 1;
  BlendDecision& d = a.decision;
  d.visible_through = visible_through();
  d.successor_visible = la.motions.size() >= 2;
  d.fallback = !d.successor_visible && la.successor_exists;
  if (d.successor_visible) {
    d.kind = profile.corners.front().kind;
    d.speed = profile.corners.front().speed;
    d.geometry = profile.corners.front().geometry;
  }
  const std::string visible = " visible=" + std::to_string(visible_through());
  if (la.motions.size() >= 2) {
    const auto& corner = profile.corners.front();
    std::vector<trajectory::CornerKind> ahead;
    for (std::size_t j = 1; j < profile.corners.size(); ++j) ahead.push_back(profile.corners[j].kind);
    switch (corner.kind) {
      case trajectory::CornerKind::Blend:
        ++blends_;
        log(now_us, EventKind::Blend, last,
            "v=" + fmt(corner.speed) + " r=" + fmt(corner.geometry.radius) + visible);
        entry_ = {corner.speed, corner.geometry.truncation, std::move(ahead)};
        pending_arc_s_ = profile.blend_durations.front();
        break;
      case trajectory::CornerKind::PassThrough:
        log(now_us, EventKind::PassThrough, last, "v=" + fmt(corner.speed) + visible);
        entry_ = {corner.speed, 0.0, std::move(ahead)};
        pending_arc_s_ = 0.0;
        break;
      case trajectory::CornerKind::Stop:
        log(now_us, EventKind::ExactStop, last, corner.degraded ? "degraded" : "exact");
        entry_ = {};
        pending_arc_s_ = 0.0;
        break;
    }
  } else {
    if (la.successor_exists) {
      ++fallbacks_;
      log(now_us, EventKind::Fallback, last, "successor not streamed" + visible);
    } else {
      log(now_us, EventKind::ExactStop, last, "end of sequence");
    }
    entry_ = {};
    pending_arc_s_ = 0.0;
  }

  active_ = a;
  set_state(wire::ExecutorState::Running, now_us);
  return true;
}

void RobotExecutor::advance(std::int64_t now_us, bool fresh_records) {
  const double now_s = static_cast<double>(now_us) * 1e-6;
  for (;;) {
    if (state_ == wire::ExecutorState::Error) return;
    if (active_) {
      if (active_->end_s > now_s + kTimeEps) return;
      const Active done = *active_;
      active_.reset();
      for (std::uint32_t k = done.first; k < done.first + done.records; ++k) {
        ++cur_exec_;
        log(now_us, EventKind::RecordEnd, k, "t=" + fmt(done.end_s));
      }
      position_ = done.to;
      orientation_ = done.orientation;
      if (done.joints_after) joints_ = *done.joints_after;
      last_end_s_ = done.end_s;
      next_start_s_ = done.end_s;
      starved_cycles_ = 0;
      continue;
    }
    if (cur_exec_ >= total_no_) {
      set_state(wire::ExecutorState::Done, now_us);
      return;
    }
    // A motion cannot start before the robot held its records.
    const double start_s =
        native_run_ ? next_start_s_
                    : std::max(next_start_s_, static_cast<double>(arrival_us_) * 1e-6);
    if (begin_motion(now_us, start_s)) {
      starved_cycles_ = 0;
      continue;
    }
    if (state_ == wire::ExecutorState::Error) return;
    if (!fresh_records && ++starved_cycles_ >= config_.starvation_timeout_cycles) {
      fail(kErrorStarvation, "no record arrived for " + std::to_string(starved_cycles_) + " cycles",
           now_us);
    }
    return;
  }
}

wire::FeedbackFrame RobotExecutor::cycle(const wire::CommandFrame& frame, std::int64_t now_us) {
  using wire::CommandWord;
  using wire::ExecutorState;
  const bool new_frame = !seen_frame_ || frame.frame_seq != acked_seq_;
  seen_frame_ = true;

  if (new_frame) {
    switch (frame.command) {
      case CommandWord::Abort:
        if (state_ == ExecutorState::Loading || state_ == ExecutorState::Running) {
          active_.reset();
          log(now_us, EventKind::State, cur_exec_, "abort");
          set_state(ExecutorState::Aborting, now_us);
        }
        break;
      case CommandWord::Start:
        // After DONE, a late window refresh of the finished skill may still
        // arrive; only a window that begins at record 1 starts a new skill.
        if (state_ == ExecutorState::Idle ||
            (state_ == ExecutorState::Done && frame.record_count == frame.loaded_through)) {
          start_skill(frame, now_us);
        }
        break;
      case CommandWord::Idle:
        if (state_ == ExecutorState::Done || state_ == ExecutorState::Error ||
            state_ == ExecutorState::Aborting) {
          set_state(ExecutorState::Idle, now_us);
        }
        break;
    }
  } else if (state_ == ExecutorState::Aborting) {
    set_state(ExecutorState::Idle, now_us);
  }
  acked_seq_ = frame.frame_seq;

  if (state_ == ExecutorState::Loading || state_ == ExecutorState::Running) {
    bool fresh = false;
    if (!native_run_ && frame.command == CommandWord::Start) fresh = ingest(frame, now_us);
    if (state_ != ExecutorState::Error) advance(now_us, fresh);
  }
  return feedback(now_us);
}

wire::FeedbackFrame RobotExecutor::feedback(std::int64_t now_us) const {
  wire::FeedbackFrame f;
  f.state = state_;
  f.error_code = error_code_;
  f.cur_exec = cur_exec_;
  f.acked_seq = acked_seq_;
  Vec3 p = position_;
  std::array<double, 3> o = orientation_;
  if (active_) {
    const double now_s = static_cast<double>(now_us) * 1e-6;
    const double span = active_->end_s - active_->start_s;
    const double frac = span > 0.0 ? std::clamp((now_s - active_->start_s) / span, 0.0, 1.0) : 1.0;
    p = active_->from + frac * (active_->to - active_->from);
  }
  f.tcp_pose = {static_cast<float>(p.x()), static_cast<float>(p.y()), static_cast<float>(p.z()),
                static_cast<float>(o[0]),  static_cast<float>(o[1]),  static_cast<float>(o[2])};
  return f;
}

NativeRun execute_native(const std::vector<ContinuousSkillPlan>& plans, const Pose& start,
                         RobotConfig config) {
  RobotExecutor executor(config, start);
  executor.load_native_program(plans);
  wire::CommandFrame frame;
  frame.command = wire::CommandWord::Start;
  frame.total_no = executor.native_total();
  frame.frame_seq = 1;

  NativeRun run;
  std::int64_t now_us = 0;
  // Generous bound; a resident program cannot starve.
  const std::size_t max_cycles = 100'000'000;
  for (;;) {
    const auto fb = executor.cycle(frame, now_us);
    ++run.cycles;
    if (fb.state == wire::ExecutorState::Done || fb.state == wire::ExecutorState::Error) break;
    if (run.cycles >= max_cycles) throw SkillError(Errc::SimTimeout, "native run did not finish");
    now_us += config.cycle_us;
  }
  if (executor.state() == wire::ExecutorState::Error) {
    throw SkillError(Errc::RobotError, "native program failed");
  }
  run.trace = executor.trace();
  run.consumed = executor.consumed();
  run.done_s = static_cast<double>(now_us) * 1e-6;
  run.motion_time_s = executor.last_motion_end_s();
  return run;
}

}  // namespace skillbench::robot
