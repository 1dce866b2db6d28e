#include "roadpulse/estimate/reports.hpp"

#include "roadpulse/common/csv.hpp"
#include "roadpulse/common/error.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>

namespace roadpulse::estimate {

using assign::AssignGraph;
using assign::OdMatrix;

static double pct_delta(double value, double base, const char* what) {
    if (base == 0)
        fail("undefined-delta", std::string("base ") + what + " is zero, delta undefined");
    return 100.0 * (value - base) / base;
}

ComparisonReport compare_days(const std::string& city_label, const DayStats& base,
                              std::span<const DayStats> others) {
    if (base.stats.total_demand <= 0)
        fail("undefined-stats", "base day has zero total demand");

    ComparisonReport report;
    report.city_label = city_label;
    report.base_date = base.date;
    report.rows.push_back(ComparisonRow{base.date, std::nullopt, std::nullopt, std::nullopt});
    for (const DayStats& day : others) {
        ComparisonRow row;
        row.date = day.date;
        row.d_trip_length = pct_delta(day.stats.avg_trip_length_m, base.stats.avg_trip_length_m,
                                      "average trip length");
        row.d_travel_time = pct_delta(day.stats.avg_travel_time_s, base.stats.avg_travel_time_s,
                                      "average travel time");
        row.d_demand = pct_delta(day.stats.total_demand, base.stats.total_demand, "total demand");
        report.rows.push_back(row);
    }
    return report;
}

std::string render_delta(std::optional<double> delta) {
    if (!delta)
        return "-";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%+.2f", *delta);
    return buf;
}

std::string render_comparison_text(const ComparisonReport& report) {
    std::string out;
    out += "City: " + report.city_label + "\n";
    char line[160];
    std::snprintf(line, sizeof(line), "%-12s  %16s  %16s  %14s\n", "Date", "d trip length %",
                  "d travel time %", "d demand %");
    out += line;
    for (const ComparisonRow& row : report.rows) {
        std::snprintf(line, sizeof(line), "%-12s  %16s  %16s  %14s\n", row.date.to_string().c_str(),
                      render_delta(row.d_trip_length).c_str(), render_delta(row.d_travel_time).c_str(),
                      render_delta(row.d_demand).c_str());
        out += line;
    }
    out += "Average travel time is demand-weighted.\n";
    return out;
}

void save_comparison_csv(const ComparisonReport& report, const std::string& path) {
    csv::Writer w(path);
    w.comment("city=" + report.city_label + " base=" + report.base_date.to_string());
    w.comment("average travel time is demand-weighted");
    w.row({"date", "delta_trip_length_pct", "delta_travel_time_pct", "delta_demand_pct"});
    for (const ComparisonRow& row : report.rows)
        w.row({row.date.to_string(), render_delta(row.d_trip_length), render_delta(row.d_travel_time),
               render_delta(row.d_demand)});
    w.close();
}

std::vector<double> zone_production_shares(const OdMatrix& od) {
    const double total = od.total();
    if (total <= 0)
        fail("undefined-shares", "zero OD matrix, production shares undefined");
    std::vector<double> shares(static_cast<std::size_t>(od.zone_count()));
    for (int z = 0; z < od.zone_count(); ++z)
        shares[static_cast<std::size_t>(z)] = 100.0 * od.production(z) / total;
    return shares;
}

std::vector<std::optional<double>> destination_congestion_index(
    const assign::AssignmentResult& result, const OdMatrix& od, const netbuild::ZoneSet& zones,
    const netbuild::RoadNetwork& net, double connector_time_s) {
    const AssignGraph g(net, zones, connector_time_s);
    const int z = zones.zone_count();

    // Arc times at equilibrium; connectors keep their fixed crossing time.
    std::vector<double> times(static_cast<std::size_t>(g.arc_count()));
    for (int a = 0; a < g.arc_count(); ++a)
        times[static_cast<std::size_t>(a)] =
            g.is_connector(a) ? connector_time_s : result.times[static_cast<std::size_t>(a)];

    std::vector<double> weighted(static_cast<std::size_t>(z), 0.0);
    std::vector<double> weight(static_cast<std::size_t>(z), 0.0);
    for (int o = 0; o < z; ++o) {
        if (od.production(o) <= 0)
            continue;
        const assign::PathTree tree = shortest_path_tree(g, times, o);
        for (int d = 0; d < z; ++d) {
            const double trips = od.at(o, d);
            if (trips <= 0)
                continue;
            int node = g.zone_node(d);
            if (!std::isfinite(tree.dist[static_cast<std::size_t>(node)]))
                fail("unreachable", "no path for trips from zone '" +
                                        od.zone_ids()[static_cast<std::size_t>(o)] + "' to zone '" +
                                        od.zone_ids()[static_cast<std::size_t>(d)] + "'");
            while (true) {
                const int arc = tree.pred_arc[static_cast<std::size_t>(node)];
                if (arc < 0)
                    break;
                if (!g.is_connector(arc)) {
                    const double ci = times[static_cast<std::size_t>(arc)] / g.arc_fft(arc);
                    weighted[static_cast<std::size_t>(d)] += trips * ci;
                    weight[static_cast<std::size_t>(d)] += trips;
                }
                node = tree.pred_node[static_cast<std::size_t>(node)];
            }
        }
    }

    std::vector<std::optional<double>> index(static_cast<std::size_t>(z));
    for (int d = 0; d < z; ++d)
        if (weight[static_cast<std::size_t>(d)] > 0)
            index[static_cast<std::size_t>(d)] =
                weighted[static_cast<std::size_t>(d)] / weight[static_cast<std::size_t>(d)];
    return index;
}

nlohmann::json zonal_geojson(const netbuild::ZoneSet& zones, std::span<const double> shares,
                             std::span<const std::optional<double>> dest_ci) {
    using nlohmann::json;
    json features = json::array();
    for (int z = 0; z < zones.zone_count(); ++z) {
        const netbuild::Zone& zone = zones.zones[static_cast<std::size_t>(z)];
        const netbuild::BBox cell = zones.cell_bounds(zone);
        json ring = json::array({json::array({cell.min_lon, cell.min_lat}),
                                 json::array({cell.max_lon, cell.min_lat}),
                                 json::array({cell.max_lon, cell.max_lat}),
                                 json::array({cell.min_lon, cell.max_lat}),
                                 json::array({cell.min_lon, cell.min_lat})});
        json feature;
        feature["type"] = "Feature";
        feature["geometry"] = {{"type", "Polygon"}, {"coordinates", json::array({std::move(ring)})}};
        feature["properties"] = {{"zone_id", zone.id},
                                 {"production_share_pct", shares[static_cast<std::size_t>(z)]}};
        if (dest_ci[static_cast<std::size_t>(z)])
            feature["properties"]["dest_ci"] = *dest_ci[static_cast<std::size_t>(z)];
        features.push_back(std::move(feature));
    }
    json doc;
    doc["type"] = "FeatureCollection";
    doc["features"] = std::move(features);
    return doc;
}

} // namespace roadpulse::estimate
