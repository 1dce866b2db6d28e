#pragma once

#include "roadpulse/netbuild/network.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace roadpulse::netbuild {

struct Zone {
    std::string id;
    std::string centroid_node;
    int row = 0;
    int col = 0;
    std::vector<std::string> connectors; // links incident to the centroid
};

struct ZoneSet {
    std::vector<Zone> zones;
    BBox bbox; // grid extent (the network bbox at build time)
    int rows = 0;
    int cols = 0;

    int zone_index(std::string_view id) const;
    int zone_count() const { return static_cast<int>(zones.size()); }

    // Grid-cell rectangle of a zone, used for zonal GeoJSON polygons.
    BBox cell_bounds(const Zone& z) const;
};

// Uniform rows x cols grid over the network bbox. Cells without any network
// node are dropped; each surviving cell becomes a zone whose centroid is the
// cell's node nearest the cell center (ties by node id).
ZoneSet build_zones(const RoadNetwork& net, int rows, int cols);

void save_zones(const ZoneSet& zs, const std::string& path);
ZoneSet load_zones(const RoadNetwork& net, const std::string& path);

} // namespace roadpulse::netbuild
