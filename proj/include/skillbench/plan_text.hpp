#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "skillbench/core.hpp"
#include "skillbench/planner.hpp"

namespace skillbench::text {

/// Shortest decimal that parses back to the same double.
std::string format_number(double value);
double parse_number(std::string_view token);

/// `key=value` tokens of one line after the leading keyword.
struct Record {
  std::string keyword;
  std::map<std::string, std::string, std::less<>> fields;
  int line = 0;

  const std::string& at(std::string_view key) const;
  bool has(std::string_view key) const { return fields.find(key) != fields.end(); }
  double number(std::string_view key) const;
};

/// Splits text into records, skipping blank lines and `#` comments.
std::vector<Record> parse_records(std::string_view text);

std::string serialize_plans(const std::vector<ContinuousSkillPlan>& plans);
std::vector<ContinuousSkillPlan> parse_plans(std::string_view text);

std::string serialize_process(const planner::Process& process);
planner::Process parse_process(std::string_view text);

}  // namespace skillbench::text
