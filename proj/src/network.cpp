#include "roadpulse/netbuild/network.hpp"

#include "roadpulse/common/csv.hpp"
#include "roadpulse/common/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace roadpulse::netbuild {

const char* to_string(RoadClass c) {
    switch (c) {
    case RoadClass::Motorway: return "motorway";
    case RoadClass::Primary: return "primary";
    case RoadClass::Secondary: return "secondary";
    case RoadClass::Tertiary: return "tertiary";
    case RoadClass::Residential: return "residential";
    }
    return "residential";
}

RoadClass road_class_from_string(const std::string& s) {
    if (s == "motorway") return RoadClass::Motorway;
    if (s == "primary") return RoadClass::Primary;
    if (s == "secondary") return RoadClass::Secondary;
    if (s == "tertiary") return RoadClass::Tertiary;
    if (s == "residential") return RoadClass::Residential;
    fail("schema", "unknown road class '" + s + "'");
}

const char* to_string(NetworkMode m) {
    return m == NetworkMode::City ? "city" : "highway";
}

NetworkMode network_mode_from_string(const std::string& s) {
    if (s == "city") return NetworkMode::City;
    if (s == "highway") return NetworkMode::Highway;
    fail("config", "unknown network mode '" + s + "', expected city or highway");
}

const ClassDefaults& ClassTable::get(RoadClass c) const {
    switch (c) {
    case RoadClass::Motorway: return motorway;
    case RoadClass::Primary: return primary;
    case RoadClass::Secondary: return secondary;
    case RoadClass::Tertiary: return tertiary;
    case RoadClass::Residential: return residential;
    }
    return residential;
}

double haversine_m(double lat1, double lon1, double lat2, double lon2) {
    constexpr double kEarthRadiusM = 6371000.0;
    constexpr double deg = std::numbers::pi / 180.0;
    const double dlat = (lat2 - lat1) * deg;
    const double dlon = (lon2 - lon1) * deg;
    const double a = std::sin(dlat / 2) * std::sin(dlat / 2) +
                     std::cos(lat1 * deg) * std::cos(lat2 * deg) * std::sin(dlon / 2) * std::sin(dlon / 2);
    return 2.0 * kEarthRadiusM * std::atan2(std::sqrt(a), std::sqrt(1.0 - a));
}

RoadNetwork::RoadNetwork(NetworkMode mode, std::vector<Node> nodes, std::vector<Link> links)
    : mode_(mode), nodes_(std::move(nodes)), links_(std::move(links)) {
    const int n = node_count();
    const int m = link_count();

    node_by_id_.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const Node& nd = nodes_[static_cast<std::size_t>(i)];
        if (nd.lat < -90.0 || nd.lat > 90.0 || nd.lon < -180.0 || nd.lon > 180.0)
            fail("invalid-network", "node '" + nd.id + "' has out-of-range coordinates");
        node_by_id_[static_cast<std::size_t>(i)] = i;
    }
    std::sort(node_by_id_.begin(), node_by_id_.end(), [&](int a, int b) {
        return nodes_[static_cast<std::size_t>(a)].id < nodes_[static_cast<std::size_t>(b)].id;
    });
    for (int i = 1; i < n; ++i)
        if (nodes_[static_cast<std::size_t>(node_by_id_[i - 1])].id ==
            nodes_[static_cast<std::size_t>(node_by_id_[i])].id)
            fail("invalid-network",
                 "duplicate node id '" + nodes_[static_cast<std::size_t>(node_by_id_[i])].id + "'");

    link_by_id_.resize(static_cast<std::size_t>(m));
    out_.assign(static_cast<std::size_t>(n), {});
    in_.assign(static_cast<std::size_t>(n), {});
    for (int i = 0; i < m; ++i) {
        const Link& lk = links_[static_cast<std::size_t>(i)];
        if (lk.length_m <= 0 || lk.free_flow_s <= 0 || lk.capacity_vph <= 0)
            fail("invalid-network", "link '" + lk.id + "' has nonpositive length/time/capacity");
        const int a = node_index(lk.from);
        const int b = node_index(lk.to);
        if (a < 0 || b < 0)
            fail("invalid-network", "link '" + lk.id + "' references unknown node");
        if (a == b)
            fail("invalid-network", "link '" + lk.id + "' is a self-loop");
        out_[static_cast<std::size_t>(a)].push_back(i);
        in_[static_cast<std::size_t>(b)].push_back(i);
        link_by_id_[static_cast<std::size_t>(i)] = i;
    }
    std::sort(link_by_id_.begin(), link_by_id_.end(), [&](int a, int b) {
        return links_[static_cast<std::size_t>(a)].id < links_[static_cast<std::size_t>(b)].id;
    });
    for (int i = 1; i < m; ++i)
        if (links_[static_cast<std::size_t>(link_by_id_[i - 1])].id ==
            links_[static_cast<std::size_t>(link_by_id_[i])].id)
            fail("invalid-network",
                 "duplicate link id '" + links_[static_cast<std::size_t>(link_by_id_[i])].id + "'");

    if (n == 0 || m == 0)
        fail("empty-network", "network has no nodes or no links");

    // Weak connectivity: one BFS over the undirected view.
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int reached = 1;
    while (!stack.empty()) {
        const int u = stack.back();
        stack.pop_back();
        auto visit = [&](int v) {
            if (!seen[static_cast<std::size_t>(v)]) {
                seen[static_cast<std::size_t>(v)] = 1;
                ++reached;
                stack.push_back(v);
            }
        };
        for (int li : out_[static_cast<std::size_t>(u)])
            visit(node_index(links_[static_cast<std::size_t>(li)].to));
        for (int li : in_[static_cast<std::size_t>(u)])
            visit(node_index(links_[static_cast<std::size_t>(li)].from));
    }
    if (reached != n)
        fail("invalid-network", "network is not weakly connected (" + std::to_string(n - reached) +
                                    " unreachable nodes)");
}

int RoadNetwork::node_index(std::string_view id) const {
    auto it = std::lower_bound(node_by_id_.begin(), node_by_id_.end(), id, [&](int i, std::string_view key) {
        return std::string_view(nodes_[static_cast<std::size_t>(i)].id) < key;
    });
    if (it == node_by_id_.end() || std::string_view(nodes_[static_cast<std::size_t>(*it)].id) != id)
        return -1;
    return *it;
}

int RoadNetwork::link_index(std::string_view id) const {
    auto it = std::lower_bound(link_by_id_.begin(), link_by_id_.end(), id, [&](int i, std::string_view key) {
        return std::string_view(links_[static_cast<std::size_t>(i)].id) < key;
    });
    if (it == link_by_id_.end() || std::string_view(links_[static_cast<std::size_t>(*it)].id) != id)
        return -1;
    return *it;
}

BBox RoadNetwork::bbox() const {
    BBox b{180.0, 90.0, -180.0, -90.0};
    for (const Node& nd : nodes_) {
        b.min_lon = std::min(b.min_lon, nd.lon);
        b.max_lon = std::max(b.max_lon, nd.lon);
        b.min_lat = std::min(b.min_lat, nd.lat);
        b.max_lat = std::max(b.max_lat, nd.lat);
    }
    return b;
}

void save_network(const RoadNetwork& net, const std::string& nodes_path, const std::string& links_path) {
    csv::Writer nw(nodes_path);
    nw.row({"id", "lat", "lon"});
    for (const Node& nd : net.nodes())
        nw.row({nd.id, csv::format_double(nd.lat), csv::format_double(nd.lon)});
    nw.close();

    csv::Writer lw(links_path);
    lw.row({"id", "from", "to", "length_m", "fft_s", "capacity_vph", "class"});
    for (const Link& lk : net.links())
        lw.row({lk.id, lk.from, lk.to, csv::format_double(lk.length_m), csv::format_double(lk.free_flow_s),
                csv::format_double(lk.capacity_vph), to_string(lk.road_class)});
    lw.close();
}

RoadNetwork load_network(NetworkMode mode, const std::string& nodes_path, const std::string& links_path) {
    const csv::Table nt = csv::read_table(nodes_path);
    const auto ni = nt.require("id");
    const auto nlat = nt.require("lat");
    const auto nlon = nt.require("lon");
    std::vector<Node> nodes;
    nodes.reserve(nt.rows.size());
    for (const auto& r : nt.rows)
        nodes.push_back(Node{r.at(ni, "id"), csv::parse_double(r.at(nlat, "lat"), nodes_path),
                             csv::parse_double(r.at(nlon, "lon"), nodes_path)});

    const csv::Table lt = csv::read_table(links_path);
    const auto li = lt.require("id");
    const auto lf = lt.require("from");
    const auto lto = lt.require("to");
    const auto ll = lt.require("length_m");
    const auto lt_s = lt.require("fft_s");
    const auto lc = lt.require("capacity_vph");
    const auto lcl = lt.require("class");
    std::vector<Link> links;
    links.reserve(lt.rows.size());
    for (const auto& r : lt.rows)
        links.push_back(Link{r.at(li, "id"), r.at(lf, "from"), r.at(lto, "to"),
                             csv::parse_double(r.at(ll, "length_m"), links_path),
                             csv::parse_double(r.at(lt_s, "fft_s"), links_path),
                             csv::parse_double(r.at(lc, "capacity_vph"), links_path),
                             road_class_from_string(r.at(lcl, "class"))});

    return RoadNetwork(mode, std::move(nodes), std::move(links));
}

} // namespace roadpulse::netbuild
