#include "roadpulse/assign/graph.hpp"

#include "roadpulse/common/error.hpp"
#include "roadpulse/common/util.hpp"

#include <algorithm>
#include <limits>
#include <queue>

namespace roadpulse::assign {

namespace {
constexpr double kConnectorCapacityVph = 1e9;
}

AssignGraph::AssignGraph(const netbuild::RoadNetwork& net, const netbuild::ZoneSet& zones,
                         double connector_time_s)
    : net_(&net), zones_(&zones) {
    if (connector_time_s <= 0)
        fail("config", "connector crossing time must be positive");

    const int n_real = net.node_count();
    const int n_zones = zones.zone_count();
    real_links_ = net.link_count();

    const int total_nodes = n_real + n_zones;
    out_.assign(static_cast<std::size_t>(total_nodes), {});
    rank_.assign(static_cast<std::size_t>(total_nodes), 0);

    arc_from_.reserve(static_cast<std::size_t>(real_links_ + 2 * n_zones));
    arc_to_.reserve(arc_from_.capacity());
    arc_fft_.reserve(arc_from_.capacity());
    arc_cap_.reserve(arc_from_.capacity());

    for (int li = 0; li < real_links_; ++li) {
        const netbuild::Link& lk = net.link(li);
        const int a = net.node_index(lk.from);
        const int b = net.node_index(lk.to);
        arc_from_.push_back(a);
        arc_to_.push_back(b);
        arc_fft_.push_back(lk.free_flow_s);
        arc_cap_.push_back(lk.capacity_vph);
        out_[static_cast<std::size_t>(a)].push_back(li);
    }

    zone_node_.resize(static_cast<std::size_t>(n_zones));
    for (int z = 0; z < n_zones; ++z) {
        const int centroid = net.node_index(zones.zones[static_cast<std::size_t>(z)].centroid_node);
        if (centroid < 0)
            fail("zoning", "zone '" + zones.zones[static_cast<std::size_t>(z)].id +
                               "' centroid missing from network");
        const int znode = n_real + z;
        zone_node_[static_cast<std::size_t>(z)] = znode;

        const int out_arc = static_cast<int>(arc_from_.size());
        arc_from_.push_back(znode);
        arc_to_.push_back(centroid);
        arc_fft_.push_back(connector_time_s);
        arc_cap_.push_back(kConnectorCapacityVph);
        out_[static_cast<std::size_t>(znode)].push_back(out_arc);

        const int in_arc = static_cast<int>(arc_from_.size());
        arc_from_.push_back(centroid);
        arc_to_.push_back(znode);
        arc_fft_.push_back(connector_time_s);
        arc_cap_.push_back(kConnectorCapacityVph);
        out_[static_cast<std::size_t>(centroid)].push_back(in_arc);
    }

    // natural-order ranks over real node ids; zone nodes follow
    std::vector<int> by_id(static_cast<std::size_t>(n_real));
    for (int i = 0; i < n_real; ++i)
        by_id[static_cast<std::size_t>(i)] = i;
    std::sort(by_id.begin(), by_id.end(), [&](int a, int b) {
        return natural_less(net.node(a).id, net.node(b).id);
    });
    for (int r = 0; r < n_real; ++r)
        rank_[static_cast<std::size_t>(by_id[static_cast<std::size_t>(r)])] = r;
    for (int z = 0; z < n_zones; ++z)
        rank_[static_cast<std::size_t>(n_real + z)] = n_real + z;
}

void AssignGraph::times_from_flows(std::span<const double> arc_flows, const VdfParams& p,
                                   std::vector<double>& out_times) const {
    const std::size_t a = arc_fft_.size();
    out_times.resize(a);
    for (std::size_t i = 0; i < a; ++i)
        out_times[i] = vdf_time(arc_fft_[i], arc_cap_[i], arc_flows[i], p);
}

PathTree shortest_path_tree(const AssignGraph& g, std::span<const double> arc_times, int origin_zone) {
    const int n = g.node_count();
    constexpr double kInf = std::numeric_limits<double>::infinity();

    PathTree tree;
    tree.dist.assign(static_cast<std::size_t>(n), kInf);
    tree.pred_arc.assign(static_cast<std::size_t>(n), -1);
    tree.pred_node.assign(static_cast<std::size_t>(n), -1);
    tree.order.reserve(static_cast<std::size_t>(n));

    std::vector<char> settled(static_cast<std::size_t>(n), 0);
    using QItem = std::pair<double, int>; // (dist, node rank) for deterministic pops
    std::priority_queue<QItem, std::vector<QItem>, std::greater<>> pq;

    std::vector<int> node_of_rank(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v)
        node_of_rank[static_cast<std::size_t>(g.rank(v))] = v;

    const int origin = g.zone_node(origin_zone);
    tree.dist[static_cast<std::size_t>(origin)] = 0;
    pq.emplace(0.0, g.rank(origin));

    while (!pq.empty()) {
        const auto [d, rank] = pq.top();
        pq.pop();
        const int u = node_of_rank[static_cast<std::size_t>(rank)];
        if (settled[static_cast<std::size_t>(u)])
            continue;
        settled[static_cast<std::size_t>(u)] = 1;
        tree.order.push_back(u);

        for (int arc : g.out_arcs(u)) {
            const double w = arc_times[static_cast<std::size_t>(arc)];
            if (!(w > 0))
                fail("numeric", "nonpositive arc time in shortest path search");
            const int v = g.arc_to(arc);
            if (settled[static_cast<std::size_t>(v)])
                continue;
            const double nd = d + w;
            double& dv = tree.dist[static_cast<std::size_t>(v)];
            if (nd < dv) {
                dv = nd;
                tree.pred_arc[static_cast<std::size_t>(v)] = arc;
                tree.pred_node[static_cast<std::size_t>(v)] = u;
                pq.emplace(nd, g.rank(v));
            } else if (nd == dv) {
                const int cur_pred = tree.pred_node[static_cast<std::size_t>(v)];
                if (cur_pred >= 0 &&
                    (g.rank(u) < g.rank(cur_pred) ||
                     (u == cur_pred && arc < tree.pred_arc[static_cast<std::size_t>(v)]))) {
                    tree.pred_arc[static_cast<std::size_t>(v)] = arc;
                    tree.pred_node[static_cast<std::size_t>(v)] = u;
                }
            }
        }
    }
    return tree;
}

} // namespace roadpulse::assign
