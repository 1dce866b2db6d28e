#pragma once

#include "roadpulse/assign/vdf.hpp"
#include "roadpulse/netbuild/network.hpp"
#include "roadpulse/netbuild/zones.hpp"

#include <span>
#include <vector>

namespace roadpulse::assign {

// Assignment view of the road network: the real directed links plus, per
// zone, a pair of virtual connector arcs between a virtual zone node and the
// zone's centroid. Connectors carry a fixed crossing time and effectively
// infinite capacity so they never congest.
class AssignGraph {
public:
    AssignGraph(const netbuild::RoadNetwork& net, const netbuild::ZoneSet& zones,
                double connector_time_s = 10.0);

    const netbuild::RoadNetwork& network() const { return *net_; }
    const netbuild::ZoneSet& zone_set() const { return *zones_; }

    int node_count() const { return static_cast<int>(rank_.size()); }
    int arc_count() const { return static_cast<int>(arc_from_.size()); }
    int real_link_count() const { return real_links_; }
    int zone_count() const { return static_cast<int>(zone_node_.size()); }

    int zone_node(int zone_idx) const { return zone_node_[static_cast<std::size_t>(zone_idx)]; }
    bool is_connector(int arc) const { return arc >= real_links_; }

    int arc_from(int a) const { return arc_from_[static_cast<std::size_t>(a)]; }
    int arc_to(int a) const { return arc_to_[static_cast<std::size_t>(a)]; }
    double arc_fft(int a) const { return arc_fft_[static_cast<std::size_t>(a)]; }
    double arc_capacity(int a) const { return arc_cap_[static_cast<std::size_t>(a)]; }

    const std::vector<int>& out_arcs(int node) const { return out_[static_cast<std::size_t>(node)]; }

    // Deterministic tie-break order: real nodes by id (natural order), then
    // zone nodes in zone order.
    int rank(int node) const { return rank_[static_cast<std::size_t>(node)]; }

    std::vector<double> free_flow_times() const { return arc_fft_; }
    void times_from_flows(std::span<const double> arc_flows, const VdfParams& p,
                          std::vector<double>& out_times) const;

private:
    const netbuild::RoadNetwork* net_;
    const netbuild::ZoneSet* zones_;
    int real_links_ = 0;
    std::vector<int> arc_from_, arc_to_;
    std::vector<double> arc_fft_, arc_cap_;
    std::vector<std::vector<int>> out_;
    std::vector<int> zone_node_;
    std::vector<int> rank_;
};

// Least-cost paths from a zone's virtual node to every reachable node.
// Equal-cost ties resolve to the smallest predecessor node id, then the
// smallest arc index, so trees are unique and reruns identical.
struct PathTree {
    std::vector<double> dist;   // by node index; +inf when unreachable
    std::vector<int> pred_arc;  // -1 at the origin / unreachable
    std::vector<int> pred_node;
    std::vector<int> order;     // settled nodes, increasing (dist, rank)
};

PathTree shortest_path_tree(const AssignGraph& g, std::span<const double> arc_times, int origin_zone);

} // namespace roadpulse::assign
