#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "schurlab/funcs.hpp"
#include "schurlab/pipeline.hpp"
#include "schurlab/symnorm.hpp"

namespace schurlab {

using json = nlohmann::json;

// 17 significant digits, '.' decimal point, "inf"/"-inf"/"nan" for non-finite.
std::string format_double(double v);

// {"kind": "schatten", "p": 2} / {"kind": "kyfan", "k": 3} /
// {"kind": "lorentz", "weights": [...]} / {"kind": "orlicz", "family": "power", "p": 2}.
// An infinite p is written as the string "inf". Custom Orlicz functions throw InvalidInput.
json to_json(const SymmetricNormSpec& spec);
// Also accepts the short string form understood by parse_space.
SymmetricNormSpec spec_from_json(const json& j);

json to_json(const GrowthSchedule& schedule);
json to_json(const Tolerances& tol);
json to_json(const PipelineConfig& cfg);
// Missing keys keep their defaults. Throws InvalidInput on malformed input.
PipelineConfig config_from_json(const json& j);

json to_json(const Check& check);
// {name: {"pass", "margin", "tol", "value", "threshold"}}
json checks_to_json(const std::vector<Check>& checks);

struct RunManifest {
  std::string command;
  json config;
  std::string timestamp;  // omitted when empty
  bool passed = false;
  std::size_t checks_total = 0;
  std::size_t checks_failed = 0;
};

json to_json(const RunManifest& manifest);

// {"manifest": ..., "schedule": ..., "stages": [...], "direct_sum": ..., "checks": ...}
json theorem_report_to_json(const TheoremReport& report, const RunManifest& manifest, bool dump_matrices = false);
std::pair<std::size_t, std::size_t> count_checks(const TheoremReport& report);  // total, failed

// Header plus one row per stage.
std::string stages_csv(const TheoremReport& report);
// t, f(t), f'(t), h(log|t|) on a grid of (0, 1).
std::string function_samples_csv(const ScalarC1Function& f, const ScalarC1Function& h, std::size_t count);

json matrix_to_json(const ComplexMatrix& x);

std::string tool_version();

}  // namespace schurlab
