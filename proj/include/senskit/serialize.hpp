#pragma once

#include <json.hpp>

#include "senskit/maps.hpp"

namespace senskit::serialize {

nlohmann::json config_json(const PipelineConfig& cfg);
nlohmann::json provenance_json(const Provenance& prov);
nlohmann::json normalization_json(const NormalizationRecord& rec);

}  // namespace senskit::serialize
