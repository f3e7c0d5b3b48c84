#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "skillbench/plc_trigger.hpp"
#include "skillbench/robot_executor.hpp"
#include "skillbench/wire.hpp"

namespace skillbench::sim {

struct SimConfig {
  std::int64_t plc_cycle_us = 1000;
  std::int64_t bus_cycle_us = 1000;
  std::int64_t robot_cycle_us = 4000;
  bool jitter = false;
  std::uint64_t seed = 0;
  double timeout_s = 600.0;

  void validate() const;
};

enum class Task : std::uint8_t { Plc = 0, Bus = 1, Robot = 2 };

std::string_view to_string(Task task);

struct Phases {
  std::int64_t plc_us = 0;
  std::int64_t bus_us = 0;
  std::int64_t robot_us = 0;
};

/// First-fire offsets of the three tasks; all zero without jitter.
Phases draw_phases(const SimConfig& config);

struct SimEvent {
  std::int64_t t_us = 0;
  Task task = Task::Plc;
  std::string event;
  std::string payload;
  std::uint64_t hash = 0;  // image the task produced or observed
};

struct SimTrace {
  std::vector<SimEvent> events;
  std::int64_t start_us = 0;  // PLC cycle that emitted the first START
  std::int64_t stop_us = 0;   // PLC cycle that read the last DONE
  std::int64_t elapsed_us = 0;
  bool completed = false;
  bool aborted = false;
  bool failed = false;
  std::uint8_t robot_error = 0;
  std::uint64_t torn_frames = 0;
  std::uint64_t window_violations = 0;

  /// One line per event: `t_us task event hash payload`.
  std::string lines() const;
};

std::uint64_t fnv1a(std::span<const std::uint8_t> bytes);

/// Runs PLC, bus and robot tasks until the PLC has read the last DONE, a
/// side fails, or the timeout passes (SimTimeout).
SimTrace run(const SimConfig& config, plc::SkillSequencer& plc_side,
             robot::RobotExecutor& robot_side);

}  // namespace skillbench::sim
