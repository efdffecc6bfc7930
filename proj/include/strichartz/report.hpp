// Machine-readable record of a computation. Serialization is stable: object
// keys are sorted and every floating-point value is written with 15
// significant digits, so equal inputs give byte-identical output apart from
// elapsed_ms.
#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "strichartz/hermite.hpp"

namespace strichartz {

using Json = nlohmann::json;

inline constexpr const char* kVersion = "1.0.0";

struct Check {
  std::string name;
  double computed = 0.0;
  double reference = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string note;
};

class Report {
 public:
  explicit Report(std::string command);

  void input(const std::string& key, Json value) { inputs_[key] = std::move(value); }
  void output(const std::string& key, Json value) { outputs_[key] = std::move(value); }
  void reference(const std::string& key, Json value) { references_[key] = std::move(value); }

  // Records |computed - reference| <= tolerance.
  bool check_close(const std::string& name, double computed, double reference, double tolerance,
                   const std::string& note = "");
  // Records a check whose pass/fail was decided by the caller.
  bool check(const std::string& name, bool pass, double computed = 0.0, double reference = 0.0,
             double tolerance = 0.0, const std::string& note = "");

  const std::vector<Check>& checks() const { return checks_; }
  bool passed() const;
  const std::string& command() const { return command_; }
  void set_elapsed_ms(double ms) { elapsed_ms_ = ms; }

  Json to_json() const;
  std::string dump() const;

 private:
  std::string command_;
  Json inputs_ = Json::object();
  Json outputs_ = Json::object();
  Json references_ = Json::object();
  std::vector<Check> checks_;
  double elapsed_ms_ = 0.0;
};

// Pretty-printed JSON with sorted keys and %.15g numbers.
std::string serialize(const Json& value, int indent = 2);

// [[re, im], ...] in storage order, with shape metadata.
Json state_to_json(const SpectralState& state);
// Accepts {"dim", "cutoff", "coeffs": [[re, im], ...]}; throws DomainError on malformed input.
SpectralState state_from_json(const Json& value);

}  // namespace strichartz
