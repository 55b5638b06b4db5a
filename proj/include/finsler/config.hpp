#pragma once

#include <string>

#include "json.hpp"

#include "finsler/metric.hpp"

namespace finsler {

/// Metric from a config record with keys
///   kind (catalog name, required), dimension (>= 2, required),
///   params (object, optional), domain_radius (optional), name (optional).
/// Unknown keys are rejected with InvalidParameter.
MetricSpec metric_from_config(const nlohmann::json& config);

/// Same, read from a JSON file.
MetricSpec load_metric_config(const std::string& path);

}  // namespace finsler
