#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "mgl/harness.hpp"

namespace mgl::io {

using json = nlohmann::json;

json to_json(const AdversarialSpec& spec);
AdversarialSpec spec_from_json(const json& j);

json to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const json& j);

/// A single config, an array of configs, or {"base": {...}, "configs": [patches...]}.
std::vector<ExperimentConfig> configs_from_json(const json& j);

json to_json(const KernelModel& model);
KernelModel kernel_model_from_json(const json& j);

json to_json(const BandReport& r);
json to_json(const RkhsProfile& p);
json to_json(const TrialResult& t);
json to_json(const ExperimentReport& r);
json to_json(const IntegralityReport& r);

void write_dataset_csv(std::ostream& os, const std::vector<LabeledPoint>& data);
std::vector<LabeledPoint> read_dataset_csv(std::istream& is);

void write_measure_csv(std::ostream& os, const WeightedAtomMeasure& mu);
void write_profile_csv(std::ostream& os, const TabulatedProfile& t);

/// Shortest round-trip decimal form, with "inf" / "-inf" / "nan" spelled out.
std::string format_number(double v);

json read_json_file(const std::string& path);

}  // namespace mgl::io
