#pragma once

#include "roadpulse/assign/ue.hpp"
#include "roadpulse/common/date.hpp"

#include <nlohmann/json_fwd.hpp>

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace roadpulse::estimate {

struct DayStats {
    Date date;
    assign::NetworkStats stats;
};

struct ComparisonRow {
    Date date;
    // percent deltas vs the base day; absent on the base row
    std::optional<double> d_trip_length;
    std::optional<double> d_travel_time;
    std::optional<double> d_demand;
};

struct ComparisonReport {
    std::string city_label;
    Date base_date;
    std::vector<ComparisonRow> rows; // base row first
};

// Percentage change of each day's statistics against the base day.
// Renders sign-explicit with two decimals; the base row renders "-".
ComparisonReport compare_days(const std::string& city_label, const DayStats& base,
                              std::span<const DayStats> others);

std::string render_delta(std::optional<double> delta); // "+3.90" / "-5.52" / "-"
std::string render_comparison_text(const ComparisonReport& report);
void save_comparison_csv(const ComparisonReport& report, const std::string& path);

// share(z) = 100 * production(z) / total demand
std::vector<double> zone_production_shares(const assign::OdMatrix& od);

// Flow-weighted mean congestion index over the links on assigned paths of
// trips destined to each zone, from an equilibrium-consistent path
// attribution at the final travel times. Zones without attraction get
// nullopt and are omitted from reports.
std::vector<std::optional<double>> destination_congestion_index(
    const assign::AssignmentResult& result, const assign::OdMatrix& od,
    const netbuild::ZoneSet& zones, const netbuild::RoadNetwork& net,
    double connector_time_s = 10.0);

nlohmann::json zonal_geojson(const netbuild::ZoneSet& zones, std::span<const double> shares,
                             std::span<const std::optional<double>> dest_ci);

} // namespace roadpulse::estimate
