#include "skillbench/fieldbus_sim.hpp"

#include <array>
#include <cinttypes>
#include <cstdio>
#include <random>
#include <unordered_set>

namespace skillbench::sim {

void SimConfig::validate() const {
  if (plc_cycle_us <= 0 || bus_cycle_us <= 0 || robot_cycle_us <= 0) {
    throw SkillError(Errc::InvalidValue, "cycle times must be positive");
  }
  if (!(timeout_s > 0.0)) throw SkillError(Errc::InvalidValue, "timeout must be positive");
}

std::string_view to_string(Task task) {
  switch (task) {
    case Task::Plc: return "plc";
    case Task::Bus: return "bus";
    case Task::Robot: return "robot";
  }
  return "?";
}

Phases draw_phases(const SimConfig& config) {
  if (!config.jitter) return {};
  std::mt19937_64 rng(config.seed);
  auto draw = [&](std::int64_t cycle) {
    return std::uniform_int_distribution<std::int64_t>(0, cycle - 1)(rng);
  };
  Phases p;
  p.plc_us = draw(config.plc_cycle_us);
  p.bus_us = draw(config.bus_cycle_us);
  p.robot_us = draw(config.robot_cycle_us);
  return p;
}

std::uint64_t fnv1a(std::span<const std::uint8_t> bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const std::uint8_t b : bytes) {
    h ^= b;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string SimTrace::lines() const {
  std::string out;
  char buf[64];
  for (const auto& e : events) {
    std::snprintf(buf, sizeof(buf), "%" PRId64 " ", e.t_us);
    out += buf;
    out += to_string(e.task);
    out += ' ';
    out += e.event;
    std::snprintf(buf, sizeof(buf), " %016" PRIx64, e.hash);
    out += buf;
    if (!e.payload.empty()) {
      out += ' ';
      out += e.payload;
    }
    out += '\n';
  }
  return out;
}

namespace {

std::string describe(const wire::CommandFrame& f) {
  return "cmd=" + std::to_string(static_cast<int>(f.command)) + " seq=" +
         std::to_string(f.frame_seq) + " total=" + std::to_string(f.total_no) +
         " loaded=" + std::to_string(f.loaded_through) +
         " count=" + std::to_string(f.record_count);
}

std::string describe(const wire::FeedbackFrame& f) {
  return "state=" + std::string(wire::to_string(f.state)) + " ack=" +
         std::to_string(f.acked_seq) + " cur=" + std::to_string(f.cur_exec) +
         " err=" + std::to_string(f.error_code);
}

}  // namespace

SimTrace run(const SimConfig& config, plc::SkillSequencer& plc_side,
             robot::RobotExecutor& robot_side) {
  config.validate();
  const Phases phases = draw_phases(config);
  const auto timeout_us = static_cast<std::int64_t>(config.timeout_s * 1e6);

  // Process images: PLC output / robot input and robot output / PLC input.
  wire::FrameImage plc_out{}, robot_in{}, robot_out{}, plc_in{};
  {
    wire::FeedbackFrame idle;
    robot_out = plc_in = wire::encode(idle);
    wire::CommandFrame none;
    plc_out = robot_in = wire::encode(none);
  }
  std::unordered_set<std::uint64_t> produced{fnv1a(plc_out)};

  SimTrace trace;
  std::array<std::int64_t, 3> next{phases.plc_us, phases.bus_us, phases.robot_us};
  const std::array<std::int64_t, 3> period{config.plc_cycle_us, config.bus_cycle_us,
                                           config.robot_cycle_us};
  std::uint64_t last_plc_hash = fnv1a(plc_out);
  std::uint64_t last_robot_hash = fnv1a(robot_out);
  std::uint64_t last_bus_hash = 0;
  // Images only change when their producer changes them; decode and hash lazily.
  wire::CommandFrame last_frame = wire::decode_command_frame(plc_out);
  std::uint64_t robot_in_hash = last_plc_hash;
  wire::CommandFrame robot_in_frame = last_frame;
  bool robot_in_stale = false;
  std::size_t robot_events_seen = robot_side.trace().size();

  for (;;) {
    // Earliest task; ties go to the lower task index.
    std::size_t task = 0;
    for (std::size_t i = 1; i < next.size(); ++i) {
      if (next[i] < next[task]) task = i;
    }
    const std::int64_t now = next[task];
    next[task] += period[task];
    if (now - phases.plc_us > timeout_us) {
      throw SkillError(Errc::SimTimeout,
                       "simulation did not finish within " + std::to_string(config.timeout_s) + " s");
    }

    if (task == 0) {
      const auto feedback = wire::decode_feedback_frame(plc_in);
      wire::CommandFrame frame;
      try {
        frame = plc_side.cycle(feedback, now);
      } catch (const SkillError& e) {
        trace.failed = true;
        trace.robot_error = plc_side.skill().robot_error_code();
        trace.start_us = plc_side.start_us().value_or(now);
        trace.stop_us = now;
        trace.elapsed_us = now - trace.start_us;
        trace.events.push_back({now, Task::Plc, "error", e.what(), fnv1a(plc_out)});
        break;
      }
      if (!(frame == last_frame)) {
        plc_out = wire::encode(frame);
        last_frame = frame;
        const std::uint64_t fresh = fnv1a(plc_out);
        produced.insert(fresh);
        if (fresh != last_plc_hash) {
          trace.events.push_back({now, Task::Plc, "publish", describe(frame), fresh});
          last_plc_hash = fresh;
        }
      }
      const std::uint64_t h = last_plc_hash;
      if (plc_side.finished()) {
        trace.completed = !plc_side.aborted();
        trace.aborted = plc_side.aborted();
        trace.start_us = plc_side.start_us().value_or(now);
        trace.stop_us = plc_side.stop_us().value_or(now);
        trace.elapsed_us = trace.stop_us - trace.start_us;
        trace.events.push_back({now, Task::Plc, trace.aborted ? "aborted" : "finished",
                                "elapsed_us=" + std::to_string(trace.elapsed_us), h});
        break;
      }
      if (plc_side.skill().state() == plc::SkillState::Error) {
        trace.failed = true;
        trace.robot_error = plc_side.skill().robot_error_code();
        trace.start_us = plc_side.start_us().value_or(now);
        trace.stop_us = now;
        trace.elapsed_us = now - trace.start_us;
        trace.events.push_back({now, Task::Plc, "error",
                                "robot_error=" + std::to_string(trace.robot_error), h});
        break;
      }
    } else if (task == 1) {
      if (robot_in != plc_out) {
        robot_in = plc_out;
        robot_in_stale = true;
      }
      plc_in = robot_out;
      const std::uint64_t h = last_plc_hash ^ (last_robot_hash * 31);
      if (h != last_bus_hash) {
        trace.events.push_back({now, Task::Bus, "exchange", "", h});
        last_bus_hash = h;
      }
    } else {
      if (robot_in_stale) {
        robot_in_hash = fnv1a(robot_in);
        robot_in_frame = wire::decode_command_frame(robot_in);
        robot_in_stale = false;
      }
      const std::uint64_t seen = robot_in_hash;
      if (!produced.contains(seen)) {
        ++trace.torn_frames;
        trace.events.push_back({now, Task::Robot, "torn_frame", "", seen});
      }
      wire::FeedbackFrame feedback;
      try {
        feedback = robot_side.cycle(robot_in_frame, now);
      } catch (const SkillError& e) {
        trace.failed = true;
        trace.events.push_back({now, Task::Robot, "error", e.what(), seen});
        break;
      }
      robot_out = wire::encode(feedback);
      const auto& events = robot_side.trace();
      for (; robot_events_seen < events.size(); ++robot_events_seen) {
        const auto& ev = events[robot_events_seen];
        trace.events.push_back({now, Task::Robot, std::string(robot::to_string(ev.kind)),
                                "record=" + std::to_string(ev.record) + " " + ev.detail, seen});
      }
      const std::uint64_t h = fnv1a(robot_out);
      if (h != last_robot_hash) {
        trace.events.push_back({now, Task::Robot, "feedback", describe(feedback), h});
        last_robot_hash = h;
      }
    }
  }
  trace.window_violations = plc_side.window_violations();
  return trace;
}

}  // namespace skillbench::sim
