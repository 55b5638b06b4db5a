#include "finsler/config.hpp"

#include <fstream>

#include "finsler/catalog.hpp"

namespace finsler {

MetricSpec metric_from_config(const nlohmann::json& config) {
    if (!config.is_object()) throw InvalidParameter("metric config must be an object");
    for (const auto& [key, value] : config.items()) {
        if (key != "kind" && key != "dimension" && key != "params" && key != "domain_radius" && key != "name") {
            throw InvalidParameter("unknown config key '" + key + "'");
        }
    }
    if (!config.contains("kind") || !config.at("kind").is_string()) {
        throw InvalidParameter("config needs a string 'kind'");
    }
    if (!config.contains("dimension") || !config.at("dimension").is_number_integer()) {
        throw InvalidParameter("config needs an integer 'dimension'");
    }
    const nlohmann::json params = config.value("params", nlohmann::json::object());
    if (!params.is_object()) throw InvalidParameter("config 'params' must be an object");
    MetricSpec spec = catalog(config.at("kind").get<std::string>(), config.at("dimension").get<int>(), params);
    if (config.contains("domain_radius")) {
        if (!config.at("domain_radius").is_number()) throw InvalidParameter("'domain_radius' must be a number");
        spec = spec.restricted(config.at("domain_radius").get<double>());
    }
    if (config.contains("name")) {
        if (!config.at("name").is_string()) throw InvalidParameter("'name' must be a string");
        spec = spec.renamed(config.at("name").get<std::string>());
    }
    return spec;
}

MetricSpec load_metric_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidParameter("cannot open config file " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidParameter("config file " + path + " is not valid JSON: " + e.what());
    }
    return metric_from_config(j);
}

}  // namespace finsler
