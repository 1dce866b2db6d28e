#pragma once

#include "roadpulse/netbuild/network.hpp"

#include <string>

namespace roadpulse::netbuild {

struct ParseStats {
    int ways_total = 0;
    int ways_drivable = 0;
    int links_built = 0;
    int components_dropped = 0;
    int links_dropped = 0;
    int nodes_dropped = 0;
};

// Builds the directed road graph from an OpenStreetMap XML extract.
// Ways are clipped to the bounding box and split at junction nodes; each
// resulting segment becomes one directed link per travel direction (one for
// one-way segments). Free-flow time comes from an explicit maxspeed tag when
// present, else from the per-class default table; capacity is the per-class
// per-lane default scaled by the lanes tag. Only the largest weakly
// connected component is returned.
RoadNetwork parse_network(const std::string& osm_xml_path, const BBox& bbox, NetworkMode mode,
                          const ClassTable& defaults = {}, ParseStats* stats = nullptr);

// Same, from an in-memory document (used by tests and fixtures).
RoadNetwork parse_network_text(const std::string& osm_xml, const BBox& bbox, NetworkMode mode,
                               const ClassTable& defaults = {}, ParseStats* stats = nullptr);

} // namespace roadpulse::netbuild
