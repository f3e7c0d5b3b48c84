#include "skillbench/plc_trigger.hpp"

#include <limits>

namespace skillbench::plc {

std::string_view to_string(SkillState state) {
  switch (state) {
    case SkillState::Idle: return "IDLE";
    case SkillState::Loading: return "LOADING";
    case SkillState::Running: return "RUNNING";
    case SkillState::Done: return "DONE";
    case SkillState::Error: return "ERROR";
    case SkillState::Aborting: return "ABORTING";
  }
  return "?";
}

bool transition_allowed(SkillState from, SkillState to) {
  if (to == SkillState::Error) return from != SkillState::Error;
  switch (from) {
    case SkillState::Idle: return to == SkillState::Loading;
    case SkillState::Loading: return to == SkillState::Running || to == SkillState::Aborting;
    case SkillState::Running: return to == SkillState::Done || to == SkillState::Aborting;
    case SkillState::Done: return to == SkillState::Idle;
    case SkillState::Aborting: return to == SkillState::Idle;
    case SkillState::Error: return to == SkillState::Idle;
  }
  return false;
}

void PlcSkill::transition(SkillState to) {
  if (!transition_allowed(state_, to)) {
    throw std::logic_error(std::string("illegal skill transition ") +
                           std::string(to_string(state_)) + " -> " + std::string(to_string(to)));
  }
  state_ = to;
  history_.push_back(to);
}

wire::CommandFrame PlcSkill::start_skill(const ContinuousSkillPlan& plan) {
  return start_records(wire::explode_plan(plan));
}

wire::CommandFrame PlcSkill::start_records(std::vector<wire::RecordImage> records) {
  if (state_ != SkillState::Idle) throw SkillError(Errc::BusySkill, "skill is not idle");
  if (records.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw SkillError(Errc::PlanTooLarge, "more records than a 32-bit totalNo can count");
  }
  records_ = std::move(records);
  begin(static_cast<std::uint32_t>(records_.size()), false);
  return frame_;
}

wire::CommandFrame PlcSkill::start_native(std::uint32_t total_records) {
  if (state_ != SkillState::Idle) throw SkillError(Errc::BusySkill, "skill is not idle");
  records_.clear();
  begin(total_records, true);
  return frame_;
}

void PlcSkill::begin(std::uint32_t total, bool native) {
  native_ = native;
  last_cur_exec_ = 0;
  robot_error_ = 0;
  slot_record_.fill(0);
  frame_.command = wire::CommandWord::Start;
  frame_.total_no = total;
  frame_.loaded_through = 0;
  frame_.record_count = 0;
  if (!native) {
    const auto initial = std::min<std::uint32_t>(total, wire::kSlotCount);
    for (std::uint32_t m = 1; m <= initial; ++m) {
      frame_.slots[wire::slot_for_record(m)] = records_[m - 1];
      slot_record_[wire::slot_for_record(m)] = m;
    }
    frame_.loaded_through = initial;
    frame_.record_count = static_cast<std::uint8_t>(initial);
  }
  ++frame_.frame_seq;
  start_seq_ = frame_.frame_seq;
  transition(SkillState::Loading);
}

void PlcSkill::publish(const wire::CommandFrame& before) {
  wire::CommandFrame candidate = frame_;
  candidate.frame_seq = before.frame_seq;
  if (!(candidate == before)) ++frame_.frame_seq;
}

bool PlcSkill::is_current(const wire::FeedbackFrame& feedback) const {
  return wire::seq_at_or_after(feedback.acked_seq, start_seq_);
}

wire::CommandFrame PlcSkill::cycle(const wire::FeedbackFrame& feedback) {
  using wire::ExecutorState;
  if (state_ == SkillState::Idle || state_ == SkillState::Done || state_ == SkillState::Error) {
    return frame_;
  }
  if (!is_current(feedback)) return frame_;

  const wire::CommandFrame before = frame_;

  if (state_ == SkillState::Aborting) {
    if (wire::seq_at_or_after(feedback.acked_seq, abort_seq_) &&
        (feedback.state == ExecutorState::Aborting || feedback.state == ExecutorState::Idle)) {
      transition(SkillState::Idle);
      frame_.command = wire::CommandWord::Idle;
      publish(before);
    }
    return frame_;
  }

  if (feedback.state == ExecutorState::Error) {
    robot_error_ = feedback.error_code;
    transition(SkillState::Error);
    throw SkillError(Errc::RobotError,
                     "robot reported error code " + std::to_string(feedback.error_code));
  }

  if (state_ == SkillState::Loading) {
    if (feedback.state == ExecutorState::Idle) return frame_;
    transition(SkillState::Running);
  }

  const std::uint32_t cur = feedback.cur_exec;
  if (cur < last_cur_exec_) {
    transition(SkillState::Error);
    throw SkillError(Errc::FeedbackRegression, "curExec went from " +
                                                   std::to_string(last_cur_exec_) + " to " +
                                                   std::to_string(cur));
  }
  if (cur > frame_.total_no) {
    transition(SkillState::Error);
    throw SkillError(Errc::RobotError, "curExec beyond totalNo");
  }

  if (!native_) {
    for (std::uint32_t k = last_cur_exec_ + 1; k <= cur; ++k) {
      const std::uint64_t next = static_cast<std::uint64_t>(k) + wire::kSlotCount;
      if (next > frame_.total_no) break;
      const std::size_t slot = wire::slot_for_record(static_cast<std::uint32_t>(next));
      // The slot still holds record k; it may only be reused once k completed.
      if (slot_record_[slot] > cur) ++window_violations_;
      frame_.slots[slot] = records_[next - 1];
      slot_record_[slot] = static_cast<std::uint32_t>(next);
      frame_.loaded_through = static_cast<std::uint32_t>(next);
    }
    frame_.record_count = static_cast<std::uint8_t>(frame_.loaded_through - cur);
  }
  last_cur_exec_ = cur;

  if (feedback.state == ExecutorState::Done && cur == frame_.total_no) {
    transition(SkillState::Done);
  }
  publish(before);
  return frame_;
}

wire::CommandFrame PlcSkill::abort() {
  if (state_ != SkillState::Loading && state_ != SkillState::Running) {
    throw SkillError(Errc::NotRunning, "no skill to abort");
  }
  const wire::CommandFrame before = frame_;
  frame_.command = wire::CommandWord::Abort;
  publish(before);
  abort_seq_ = frame_.frame_seq;
  transition(SkillState::Aborting);
  return frame_;
}

void PlcSkill::reset() {
  if (state_ != SkillState::Done) throw SkillError(Errc::NotRunning, "reset needs DONE");
  transition(SkillState::Idle);
}

void PlcSkill::acknowledge_error() {
  if (state_ != SkillState::Error) throw SkillError(Errc::NotRunning, "no error to acknowledge");
  const wire::CommandFrame before = frame_;
  frame_.command = wire::CommandWord::Idle;
  publish(before);
  transition(SkillState::Idle);
}

SkillRequest SkillRequest::streamed(const ContinuousSkillPlan& plan) {
  return {wire::explode_plan(plan), std::nullopt};
}

SkillRequest SkillRequest::native(std::uint32_t total_records) { return {{}, total_records}; }

std::vector<SkillRequest> continuous_requests(const std::vector<ContinuousSkillPlan>& plans) {
  std::vector<SkillRequest> out;
  out.reserve(plans.size());
  for (const auto& plan : plans) out.push_back(SkillRequest::streamed(plan));
  return out;
}

std::vector<ContinuousSkillPlan> single_motion_plans(const std::vector<MotionCommand>& motions) {
  std::vector<ContinuousSkillPlan> out;
  out.reserve(motions.size());
  for (const auto& m : motions) {
    out.emplace_back(std::vector<MotionCommand>{m.with_approx(0.0)},
                     std::vector<PathLabel>{PathLabel::AccurateStop});
  }
  return out;
}

std::vector<SkillRequest> run_single_motion_sequence(const std::vector<MotionCommand>& motions) {
  return continuous_requests(single_motion_plans(motions));
}

SkillSequencer::SkillSequencer(std::vector<SkillRequest> requests)
    : requests_(std::move(requests)) {}

void SkillSequencer::start_next(std::int64_t now_us) {
  SkillRequest& request = requests_[next_++];
  if (request.native_total) {
    skill_.start_native(*request.native_total);
  } else {
    skill_.start_records(std::move(request.records));
  }
  ++started_;
  if (!start_us_) start_us_ = now_us;
}

wire::CommandFrame SkillSequencer::cycle(const wire::FeedbackFrame& feedback, std::int64_t now_us) {
  if (finished_) return skill_.frame();
  if (requests_.empty()) {
    finished_ = true;
    start_us_ = stop_us_ = now_us;
    return skill_.frame();
  }
  if (skill_.state() == SkillState::Idle && !aborted_ && next_ < requests_.size()) {
    start_next(now_us);
    return skill_.frame();
  }

  skill_.cycle(feedback);

  if (abort_when_ && !aborted_ &&
      (skill_.state() == SkillState::Loading || skill_.state() == SkillState::Running) &&
      abort_when_(started_ - 1, feedback)) {
    skill_.abort();
    aborted_ = true;
    return skill_.frame();
  }

  if (skill_.state() == SkillState::Done) {
    ++completed_;
    skill_.reset();
    if (next_ < requests_.size()) {
      start_next(now_us);
    } else {
      finished_ = true;
      stop_us_ = now_us;
    }
  } else if (aborted_ && skill_.state() == SkillState::Idle) {
    finished_ = true;
    stop_us_ = now_us;
  }
  return skill_.frame();
}

}  // namespace skillbench::plc
