#pragma once

// Structured (JSON) rendering of analysis results.

#include <string>
#include <string_view>
#include <vector>

#include "desync/conditions.hpp"
#include "desync/equiv.hpp"
#include "desync/loop_config.hpp"
#include "json.hpp"

namespace desync {

inline constexpr std::string_view kToolVersion = "0.1.0";

/// At most this many deadlocks are listed individually.
inline constexpr std::size_t kReportedDeadlocks = 20;

nlohmann::json to_json(const LoopConfig& cfg);
nlohmann::json to_json(const EquivVerdict& v);
nlohmann::json to_json(const DeadlockReport& d);
nlohmann::json to_json(const ValidityVerdict& v, const Signature& sig);
nlohmann::json to_json(const ConditionReport& r, const Signature& sig);
nlohmann::json lts_stats(const Lts& lts);

/// One CLI invocation. Everything except `timings` is a function of the
/// inputs and options.
struct RunReport {
  std::string command;
  std::vector<std::string> inputs;
  /// SHA-256 of the input files, concatenated in order.
  std::string input_digest;
  nlohmann::json config = nlohmann::json::object();
  nlohmann::json results = nlohmann::json::object();
  nlohmann::json timings = nlohmann::json::object();
  std::vector<std::string> warnings;
  int exit_code = 0;

  nlohmann::json to_json() const;
};

}  // namespace desync
