#include "roadpulse/netbuild/zones.hpp"

#include "roadpulse/common/csv.hpp"
#include "roadpulse/common/error.hpp"
#include "roadpulse/common/util.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace roadpulse::netbuild {

int ZoneSet::zone_index(std::string_view id) const {
    for (std::size_t i = 0; i < zones.size(); ++i)
        if (zones[i].id == id)
            return static_cast<int>(i);
    return -1;
}

BBox ZoneSet::cell_bounds(const Zone& z) const {
    const double cell_w = (bbox.max_lon - bbox.min_lon) / cols;
    const double cell_h = (bbox.max_lat - bbox.min_lat) / rows;
    return BBox{bbox.min_lon + z.col * cell_w, bbox.min_lat + z.row * cell_h,
                bbox.min_lon + (z.col + 1) * cell_w, bbox.min_lat + (z.row + 1) * cell_h};
}

static std::vector<std::string> centroid_connectors(const RoadNetwork& net, int node_idx) {
    std::vector<std::string> out;
    for (int li : net.links_out(node_idx))
        out.push_back(net.link(li).id);
    for (int li : net.links_in(node_idx))
        out.push_back(net.link(li).id);
    std::sort(out.begin(), out.end());
    return out;
}

ZoneSet build_zones(const RoadNetwork& net, int rows, int cols) {
    if (rows < 1 || cols < 1 || rows * cols < 2)
        fail("zoning", "grid must have at least 2 cells, got " + std::to_string(rows) + "x" +
                           std::to_string(cols));
    const BBox box = net.bbox();
    const double cell_w = (box.max_lon - box.min_lon) / cols;
    const double cell_h = (box.max_lat - box.min_lat) / rows;
    if (cell_w <= 0 || cell_h <= 0)
        fail("zoning", "network extent is degenerate, cannot grid");

    auto cell_of = [&](const Node& nd) {
        int r = static_cast<int>(std::floor((nd.lat - box.min_lat) / cell_h));
        int c = static_cast<int>(std::floor((nd.lon - box.min_lon) / cell_w));
        r = std::clamp(r, 0, rows - 1);
        c = std::clamp(c, 0, cols - 1);
        return std::pair<int, int>{r, c};
    };

    // cell -> best node (squared equirectangular distance to cell center)
    std::map<std::pair<int, int>, std::pair<double, int>> best;
    for (int i = 0; i < net.node_count(); ++i) {
        const Node& nd = net.node(i);
        if (net.links_out(i).empty() && net.links_in(i).empty())
            continue;
        const auto [r, c] = cell_of(nd);
        const double cx = box.min_lon + (c + 0.5) * cell_w;
        const double cy = box.min_lat + (r + 0.5) * cell_h;
        const double dx = (nd.lon - cx) * std::cos(cy * 0.017453292519943295);
        const double dy = nd.lat - cy;
        const double d2 = dx * dx + dy * dy;
        auto it = best.find({r, c});
        if (it == best.end()) {
            best[{r, c}] = {d2, i};
        } else if (d2 < it->second.first ||
                   (d2 == it->second.first &&
                    natural_less(nd.id, net.node(it->second.second).id))) {
            it->second = {d2, i};
        }
    }

    if (best.size() < 2)
        fail("zoning", "fewer than 2 non-empty grid cells, no OD structure possible");

    ZoneSet zs;
    zs.bbox = box;
    zs.rows = rows;
    zs.cols = cols;
    for (const auto& [cell, pick] : best) {
        Zone z;
        z.row = cell.first;
        z.col = cell.second;
        z.id = "Z" + std::to_string(cell.first) + "_" + std::to_string(cell.second);
        z.centroid_node = net.node(pick.second).id;
        z.connectors = centroid_connectors(net, pick.second);
        zs.zones.push_back(std::move(z));
    }
    return zs;
}

void save_zones(const ZoneSet& zs, const std::string& path) {
    csv::Writer w(path);
    w.comment("grid rows=" + std::to_string(zs.rows) + " cols=" + std::to_string(zs.cols) +
              " bbox=" + csv::format_double(zs.bbox.min_lon) + "," + csv::format_double(zs.bbox.min_lat) +
              "," + csv::format_double(zs.bbox.max_lon) + "," + csv::format_double(zs.bbox.max_lat));
    w.row({"zone_id", "centroid_node", "row", "col"});
    for (const Zone& z : zs.zones)
        w.row({z.id, z.centroid_node, std::to_string(z.row), std::to_string(z.col)});
    w.close();
}

ZoneSet load_zones(const RoadNetwork& net, const std::string& path) {
    const csv::Table t = csv::read_table(path);
    const auto zi = t.require("zone_id");
    const auto ci = t.require("centroid_node");
    const auto ri = t.require("row");
    const auto co = t.require("col");

    ZoneSet zs;
    // grid metadata rides in the leading comment line
    for (const std::string& c : t.comments) {
        int rows = 0, cols = 0;
        double a, b, cc, d;
        if (std::sscanf(c.c_str(), "grid rows=%d cols=%d bbox=%lf,%lf,%lf,%lf", &rows, &cols, &a, &b,
                        &cc, &d) == 6) {
            zs.rows = rows;
            zs.cols = cols;
            zs.bbox = BBox{a, b, cc, d};
        }
    }
    if (zs.rows == 0 || zs.cols == 0)
        fail("schema", path + ": missing grid metadata comment");

    for (const auto& r : t.rows) {
        Zone z;
        z.id = r.at(zi, "zone_id");
        z.centroid_node = r.at(ci, "centroid_node");
        z.row = static_cast<int>(csv::parse_long(r.at(ri, "row"), path));
        z.col = static_cast<int>(csv::parse_long(r.at(co, "col"), path));
        const int ni = net.node_index(z.centroid_node);
        if (ni < 0)
            fail("schema", path + ": centroid node '" + z.centroid_node + "' not in network");
        z.connectors = centroid_connectors(net, ni);
        if (z.connectors.empty())
            fail("schema", path + ": centroid '" + z.centroid_node + "' has no incident links");
        zs.zones.push_back(std::move(z));
    }
    for (std::size_t i = 0; i < zs.zones.size(); ++i)
        for (std::size_t j = i + 1; j < zs.zones.size(); ++j) {
            if (zs.zones[i].id == zs.zones[j].id)
                fail("schema", path + ": duplicate zone id '" + zs.zones[i].id + "'");
            if (zs.zones[i].centroid_node == zs.zones[j].centroid_node)
                fail("schema", path + ": centroid '" + zs.zones[i].centroid_node + "' used twice");
        }
    if (zs.zone_count() < 2)
        fail("zoning", path + ": fewer than 2 zones");
    return zs;
}

} // namespace roadpulse::netbuild
