#include "roadpulse/ingest/reliability.hpp"

#include "roadpulse/common/csv.hpp"
#include "roadpulse/common/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

namespace roadpulse::ingest {

int unique_update_count(const ObservationPanel& panel, const std::string& link_id, SlotFilter slot) {
    const auto idx = panel.link_observations(link_id);
    std::vector<std::int64_t> keys;
    keys.reserve(idx.size());
    for (int i : idx) {
        const Observation& o = panel.observations()[static_cast<std::size_t>(i)];
        if (slot && o.slot != *slot)
            continue;
        keys.push_back(std::llround(o.travel_time_s * 10.0));
    }
    if (keys.empty())
        fail("missing-link", "link '" + link_id + "' has no observations" +
                                 (slot ? std::string(" in slot ") + to_string(*slot) : std::string()));
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    return static_cast<int>(keys.size());
}

ReliabilityReport reliability_report(const ObservationPanel& panel,
                                     const netbuild::RoadNetwork& net, double min_length_m) {
    if (min_length_m <= 0)
        fail("config", "min_length must be positive");

    ReliabilityReport report;
    report.min_length_m = min_length_m;
    int max_count = 0;
    for (const netbuild::Link& lk : net.links()) {
        if (lk.length_m < min_length_m)
            continue;
        if (!panel.has_link(lk.id))
            continue;
        const int count = unique_update_count(panel, lk.id);
        report.links.push_back({lk.id, lk.length_m, count});
        max_count = std::max(max_count, count);
    }
    if (report.links.empty())
        fail("empty-report", "no links pass the " + std::to_string(min_length_m) + " m length filter");

    std::vector<int> bins(static_cast<std::size_t>(max_count) + 1, 0);
    for (const auto& row : report.links)
        ++bins[static_cast<std::size_t>(row.unique_count)];
    const double total = static_cast<double>(report.links.size());
    for (int c = 1; c <= max_count; ++c)
        report.histogram.push_back({c, bins[static_cast<std::size_t>(c)],
                                    static_cast<double>(bins[static_cast<std::size_t>(c)]) / total});
    return report;
}

void save_reliability(const ReliabilityReport& report, const std::string& links_path,
                      const std::string& hist_path) {
    csv::Writer lw(links_path);
    lw.row({"link_id", "length_m", "unique_count"});
    for (const auto& row : report.links)
        lw.row({row.link_id, csv::format_double(row.length_m), std::to_string(row.unique_count)});
    lw.close();

    csv::Writer hw(hist_path);
    hw.row({"count", "links", "probability"});
    for (const auto& bin : report.histogram)
        hw.row({std::to_string(bin.count), std::to_string(bin.links), csv::format_double(bin.probability)});
    hw.close();
}

} // namespace roadpulse::ingest
