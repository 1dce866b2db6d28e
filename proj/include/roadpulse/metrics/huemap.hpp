#pragma once

#include "roadpulse/netbuild/network.hpp"

#include <nlohmann/json_fwd.hpp>

#include <string>
#include <unordered_map>

namespace roadpulse::metrics {

struct ColorScale {
    std::string low = "dark_blue";
    std::string high = "dark_red";
};

// GeoJSON FeatureCollection with one LineString per link that has a value.
// hue01 is the min-max normalized position on the color scale; when all
// values are equal every feature sits at 0.5.
nlohmann::json hue_map(const netbuild::RoadNetwork& net,
                       const std::unordered_map<std::string, double>& values,
                       const ColorScale& scale = {});

void save_geojson(const nlohmann::json& doc, const std::string& path);

} // namespace roadpulse::metrics
