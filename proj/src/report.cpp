#include "strichartz/report.hpp"

#include <cmath>
#include <cstdio>

#include "strichartz/errors.hpp"

namespace strichartz {
namespace {

std::string format_number(double v) {
  if (std::isnan(v)) return "\"nan\"";
  if (std::isinf(v)) return v > 0 ? "\"inf\"" : "\"-inf\"";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  std::string s(buf);
  // Keep a marker that the value is floating point.
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

void write(const Json& v, int indent, int depth, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent) * (depth + 1), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent) * depth, ' ');
  const char* nl = indent > 0 ? "\n" : "";
  switch (v.type()) {
    case Json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += "{";
      out += nl;
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {  // std::map order: sorted keys
        if (!first) {
          out += ",";
          out += nl;
        }
        first = false;
        out += pad + Json(it.key()).dump() + (indent > 0 ? ": " : ":");
        write(it.value(), indent, depth + 1, out);
      }
      out += nl + close_pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      // Short arrays of scalars stay on one line.
      bool flat = v.size() <= 8;
      for (const auto& e : v) flat = flat && e.is_primitive();
      out += "[";
      bool first = true;
      for (const auto& e : v) {
        if (!first) out += flat ? ", " : ",";
        if (!flat) out += nl + pad;
        first = false;
        write(e, indent, depth + 1, out);
      }
      if (!flat) out += nl + close_pad;
      out += "]";
      return;
    }
    case Json::value_t::number_float:
      out += format_number(v.get<double>());
      return;
    default:
      out += v.dump();
  }
}

}  // namespace

Report::Report(std::string command) : command_(std::move(command)) {}

bool Report::check_close(const std::string& name, double computed, double reference, double tolerance,
                         const std::string& note) {
  const bool pass = std::abs(computed - reference) <= tolerance;
  checks_.push_back({name, computed, reference, tolerance, pass, note});
  return pass;
}

bool Report::check(const std::string& name, bool pass, double computed, double reference, double tolerance,
                   const std::string& note) {
  checks_.push_back({name, computed, reference, tolerance, pass, note});
  return pass;
}

bool Report::passed() const {
  for (const auto& c : checks_)
    if (!c.pass) return false;
  return true;
}

Json Report::to_json() const {
  Json j;
  j["command"] = command_;
  j["version"] = kVersion;
  j["inputs"] = inputs_;
  j["outputs"] = outputs_;
  j["references"] = references_;
  Json checks = Json::array();
  for (const auto& c : checks_) {
    Json e{{"name", c.name}, {"computed", c.computed}, {"reference", c.reference}, {"tolerance", c.tolerance},
           {"pass", c.pass}};
    if (!c.note.empty()) e["note"] = c.note;
    checks.push_back(std::move(e));
  }
  j["checks"] = std::move(checks);
  j["passed"] = passed();
  j["elapsed_ms"] = elapsed_ms_;
  return j;
}

std::string Report::dump() const { return serialize(to_json()) + "\n"; }

std::string serialize(const Json& value, int indent) {
  std::string out;
  write(value, indent, 0, out);
  return out;
}

Json state_to_json(const SpectralState& state) {
  Json coeffs = Json::array();
  for (std::size_t i = 0; i < state.size(); ++i) coeffs.push_back({state[i].real(), state[i].imag()});
  return {{"dim", state.dim()}, {"cutoff", state.cutoff()}, {"coeffs", std::move(coeffs)}};
}

SpectralState state_from_json(const Json& value) {
  try {
    const int dim = value.at("dim").get<int>();
    const int cutoff = value.at("cutoff").get<int>();
    const Json& list = value.at("coeffs");
    if (!list.is_array()) throw DomainError("state: coeffs must be an array");
    std::vector<cplx> coeffs;
    for (const auto& c : list) {
      if (c.is_number()) coeffs.emplace_back(c.get<double>(), 0.0);
      else if (c.is_array() && c.size() == 2) coeffs.emplace_back(c[0].get<double>(), c[1].get<double>());
      else throw DomainError("state: each coefficient must be a number or a [re, im] pair");
    }
    const std::size_t expected = dim == 1 ? cutoff : static_cast<std::size_t>(cutoff) * cutoff;
    if (coeffs.size() < expected) coeffs.resize(expected);  // trailing zeros may be omitted
    return SpectralState(dim, cutoff, std::move(coeffs));
  } catch (const Json::exception& e) {
    throw DomainError(std::string("state: malformed JSON datum: ") + e.what());
  }
}

}  // namespace strichartz
