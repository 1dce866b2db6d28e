#include "roadpulse/metrics/huemap.hpp"

#include "roadpulse/common/error.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <limits>

namespace roadpulse::metrics {

using nlohmann::json;

json hue_map(const netbuild::RoadNetwork& net,
             const std::unordered_map<std::string, double>& values, const ColorScale& scale) {
    if (values.empty())
        fail("empty-values", "hue map needs at least one link value");

    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const netbuild::Link& lk : net.links()) {
        auto it = values.find(lk.id);
        if (it == values.end())
            continue;
        lo = std::min(lo, it->second);
        hi = std::max(hi, it->second);
    }
    if (!std::isfinite(lo))
        fail("empty-values", "no value keys match network links");

    json features = json::array();
    for (const netbuild::Link& lk : net.links()) {
        auto it = values.find(lk.id);
        if (it == values.end())
            continue;
        const double value = it->second;
        const double hue01 = hi > lo ? (value - lo) / (hi - lo) : 0.5;

        const netbuild::Node& a = net.node(net.node_index(lk.from));
        const netbuild::Node& b = net.node(net.node_index(lk.to));
        json feature;
        feature["type"] = "Feature";
        feature["geometry"] = {{"type", "LineString"},
                               {"coordinates", json::array({json::array({a.lon, a.lat}),
                                                            json::array({b.lon, b.lat})})}};
        feature["properties"] = {{"link_id", lk.id}, {"value", value}, {"hue01", hue01}};
        features.push_back(std::move(feature));
    }

    json doc;
    doc["type"] = "FeatureCollection";
    doc["properties"] = {{"scale_low", scale.low}, {"scale_high", scale.high}};
    doc["features"] = std::move(features);
    return doc;
}

void save_geojson(const json& doc, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        fail("io", "cannot write '" + path + "'");
    out << doc.dump(2) << '\n';
}

} // namespace roadpulse::metrics
