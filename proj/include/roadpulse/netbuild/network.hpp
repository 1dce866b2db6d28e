#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace roadpulse::netbuild {

enum class RoadClass { Motorway, Primary, Secondary, Tertiary, Residential };

const char* to_string(RoadClass c);
RoadClass road_class_from_string(const std::string& s);

enum class NetworkMode { City, Highway };

const char* to_string(NetworkMode m);
NetworkMode network_mode_from_string(const std::string& s);

struct BBox {
    double min_lon = 0, min_lat = 0, max_lon = 0, max_lat = 0;

    bool contains(double lat, double lon) const {
        return lat >= min_lat && lat <= max_lat && lon >= min_lon && lon <= max_lon;
    }
    bool degenerate() const { return min_lon >= max_lon || min_lat >= max_lat; }
};

struct Node {
    std::string id;
    double lat = 0;
    double lon = 0;
};

struct Link {
    std::string id;
    std::string from;
    std::string to;
    double length_m = 0;
    double free_flow_s = 0;
    double capacity_vph = 0;
    RoadClass road_class = RoadClass::Residential;
};

// Per-road-class speed and per-lane capacity defaults, applied when the
// source document carries no explicit tags. All overridable via config.
struct ClassDefaults {
    double speed_kmh;
    double capacity_per_lane_vph;
};

struct ClassTable {
    ClassDefaults motorway{110.0, 2000.0};
    ClassDefaults primary{60.0, 1200.0};
    ClassDefaults secondary{50.0, 900.0};
    ClassDefaults tertiary{40.0, 600.0};
    ClassDefaults residential{40.0, 600.0};

    const ClassDefaults& get(RoadClass c) const;
};

// Directed road graph. Immutable after construction; construction validates
// the invariants (unique ids, positive attributes, endpoints present, weak
// connectivity) and builds the adjacency indexes.
class RoadNetwork {
public:
    RoadNetwork(NetworkMode mode, std::vector<Node> nodes, std::vector<Link> links);

    NetworkMode mode() const { return mode_; }
    const std::vector<Node>& nodes() const { return nodes_; }
    const std::vector<Link>& links() const { return links_; }
    int node_count() const { return static_cast<int>(nodes_.size()); }
    int link_count() const { return static_cast<int>(links_.size()); }

    const Node& node(int i) const { return nodes_[static_cast<std::size_t>(i)]; }
    const Link& link(int i) const { return links_[static_cast<std::size_t>(i)]; }

    int node_index(std::string_view id) const; // -1 when absent
    int link_index(std::string_view id) const;

    const std::vector<int>& links_out(int node_idx) const { return out_[static_cast<std::size_t>(node_idx)]; }
    const std::vector<int>& links_in(int node_idx) const { return in_[static_cast<std::size_t>(node_idx)]; }

    // Length filter default for reliability and network-averaged metrics:
    // 100 m for city networks, 500 m for the intercity highway network.
    double default_min_link_length() const { return mode_ == NetworkMode::City ? 100.0 : 500.0; }

    BBox bbox() const;

private:
    NetworkMode mode_;
    std::vector<Node> nodes_;
    std::vector<Link> links_;
    std::vector<std::vector<int>> out_;
    std::vector<std::vector<int>> in_;
    // id -> index maps kept sorted for O(log n) lookup without extra deps
    std::vector<int> node_by_id_;
    std::vector<int> link_by_id_;
};

// Great-circle distance in meters.
double haversine_m(double lat1, double lon1, double lat2, double lon2);

void save_network(const RoadNetwork& net, const std::string& nodes_path, const std::string& links_path);
RoadNetwork load_network(NetworkMode mode, const std::string& nodes_path, const std::string& links_path);

} // namespace roadpulse::netbuild
