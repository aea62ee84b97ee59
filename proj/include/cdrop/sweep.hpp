#pragma once

// Parameter sweeps: rescore a scenario while one JSON field takes each value
// of a list, and emit `param,U_bits,p` rows.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cdrop/scenario_io.hpp"
#include "cdrop/unexpectedness.hpp"

namespace cdrop {

enum class SweepParameter { distance_km, time_h, rank, credibility_bits };

struct SweepSpec {
  SweepParameter parameter = SweepParameter::distance_km;
  std::vector<double> values;
  std::string scenario_path;
  std::string pointer;  // RFC 6901 pointer to the swept field
  double offset = 0.0;  // written value = offset + swept value
};

struct SweepRow {
  double param;
  Bits U;
  std::optional<double> p;
};

inline constexpr std::size_t kMaxSweepCount = 10'000;

inline SweepSpec parse_sweep_spec(const io::json& j, const std::filesystem::path& base_dir = {}) {
  std::vector<Violation> problems;
  SweepSpec spec;

  const std::string param = j.value("parameter", "");
  if (param == "distance_km") spec.parameter = SweepParameter::distance_km;
  else if (param == "time_h") spec.parameter = SweepParameter::time_h;
  else if (param == "rank") spec.parameter = SweepParameter::rank;
  else if (param == "credibility_bits") spec.parameter = SweepParameter::credibility_bits;
  else problems.push_back({"parameter", "must be distance_km, time_h, rank or credibility_bits"});

  if (j.contains("values") == j.contains("range")) {
    problems.push_back({"values", "give exactly one of values or range"});
  } else if (j.contains("values")) {
    for (const auto& v : j.at("values")) {
      if (v.is_number()) spec.values.push_back(v.get<double>());
      else problems.push_back({"values", "must be numbers"});
    }
  } else {
    const auto& r = j.at("range");
    const double start = r.value("start", 0.0);
    const double factor = r.value("factor", 0.0);
    const auto count = r.value("count", std::int64_t{0});
    if (count < 1 || static_cast<std::size_t>(count) > kMaxSweepCount) {
      problems.push_back({"range.count", "must lie in 1..10000"});
    } else if (!(factor > 0.0) || !std::isfinite(factor)) {
      problems.push_back({"range.factor", "must be finite and > 0"});
    } else {
      double v = start;
      for (std::int64_t i = 0; i < count; ++i, v *= factor) spec.values.push_back(v);
    }
  }
  if (spec.values.size() > kMaxSweepCount) problems.push_back({"values", "at most 10000 values"});
  for (double v : spec.values)
    if (!(v > 0.0) || !std::isfinite(v)) {
      problems.push_back({"values", "must be finite and > 0"});
      break;
    }

  if (!j.contains("target") || !j.at("target").is_object()) {
    problems.push_back({"target", "scenario and pointer required"});
  } else {
    const auto& t = j.at("target");
    const std::string scenario = t.value("scenario", "");
    spec.pointer = t.value("pointer", "");
    spec.offset = t.value("offset", 0.0);
    if (scenario.empty()) problems.push_back({"target.scenario", "required"});
    if (spec.pointer.empty()) problems.push_back({"target.pointer", "required"});
    const std::filesystem::path p(scenario);
    spec.scenario_path = (p.is_relative() && !base_dir.empty()) ? (base_dir / p).string() : p.string();
  }
  if (!problems.empty()) throw io::SchemaError(std::move(problems));
  return spec;
}

/// Scores the scenario once per value with the pointed-to field overwritten.
inline std::vector<SweepRow> run_sweep(const io::json& scenario, const std::string& pointer,
                                       std::span<const double> values, SweepParameter parameter, double offset = 0.0) {
  io::json::json_pointer ptr;
  try {
    ptr = io::json::json_pointer(pointer);
  } catch (const io::json::exception& e) {
    throw io::SchemaError("target.pointer", e.what());
  }
  if (!scenario.contains(ptr)) throw io::SchemaError("target.pointer", "no field at '" + pointer + "'");

  std::vector<SweepRow> rows;
  rows.reserve(values.size());
  for (double v : values) {
    io::json copy = scenario;
    if (parameter == SweepParameter::rank) copy[ptr] = static_cast<std::int64_t>(std::llround(offset + v));
    else copy[ptr] = offset + v;
    const auto report = unexpectedness(io::parse_scenario(copy));
    rows.push_back({v, report.U, report.cognitive_probability});
  }
  return rows;
}

inline std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  return run_sweep(io::read_json_file(spec.scenario_path), spec.pointer, spec.values, spec.parameter, spec.offset);
}

inline std::string to_csv(std::span<const SweepRow> rows) {
  std::string out = "param,U_bits,p\n";
  char buf[128];
  for (const auto& r : rows) {
    if (r.p) std::snprintf(buf, sizeof buf, "%.10g,%.4f,%.6g\n", r.param, io::round_bits(r.U), *r.p);
    else std::snprintf(buf, sizeof buf, "%.10g,%.4f,\n", r.param, io::round_bits(r.U));
    out += buf;
  }
  return out;
}

}  // namespace cdrop
