#pragma once

#include "diracham/gamma.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace diracham {

inline constexpr int kReportSchemaVersion = 1;

struct CheckResult {
  std::string suite;
  std::string name;
  bool passed = true;
  double residual = 0.0;
  std::string detail;
};

// Flat list of named checks. A suite passes iff every check passed.
class Report {
 public:
  void add(CheckResult c) { checks_.push_back(std::move(c)); }
  void add(std::string suite, std::string name, bool passed, double residual = 0.0, std::string detail = {}) {
    checks_.push_back({std::move(suite), std::move(name), passed, residual, std::move(detail)});
  }
  void add(const IdentityCheck& c) {
    std::string idx;
    for (int i : c.indices) idx += (idx.empty() ? "" : ",") + std::to_string(i);
    add(c.representation, c.identity + "(" + idx + ")", c.passed, c.residual_norm);
  }
  void merge(const Report& other) { checks_.insert(checks_.end(), other.checks_.begin(), other.checks_.end()); }

  const std::vector<CheckResult>& checks() const { return checks_; }
  std::size_t size() const { return checks_.size(); }
  std::size_t failures() const {
    std::size_t n = 0;
    for (const auto& c : checks_) n += !c.passed;
    return n;
  }
  bool passed() const { return failures() == 0; }
  std::optional<CheckResult> first_failure() const {
    for (const auto& c : checks_)
      if (!c.passed) return c;
    return std::nullopt;
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& c : checks_) {
      nlohmann::ordered_json j;
      j["suite"] = c.suite;
      j["name"] = c.name;
      j["passed"] = c.passed;
      j["residual"] = c.residual;
      if (!c.detail.empty()) j["detail"] = c.detail;
      arr.push_back(std::move(j));
    }
    return arr;
  }

 private:
  std::vector<CheckResult> checks_;
};

}  // namespace diracham
