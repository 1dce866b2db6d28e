#pragma once

#include "roadpulse/ingest/panel.hpp"
#include "roadpulse/netbuild/network.hpp"

#include <string>
#include <vector>

namespace roadpulse::ingest {

// Number of distinct travel-time values observed for a link over the study
// period; distinctness is judged after rounding to 0.1 s. Pooled across
// slots by default; pass a slot to count within one departure time only.
int unique_update_count(const ObservationPanel& panel, const std::string& link_id,
                        SlotFilter slot = std::nullopt);

struct ReliabilityReport {
    double min_length_m = 0;

    struct LinkRow {
        std::string link_id;
        double length_m;
        int unique_count;
    };
    std::vector<LinkRow> links; // network link order

    struct HistBin {
        int count;          // unique-update count (integer bin)
        int links;          // links in this bin
        double probability; // links / total
    };
    std::vector<HistBin> histogram; // bins 1..max observed count
};

// Unique-update histogram and empirical density over links with
// length >= min_length_m that carry at least one observation.
ReliabilityReport reliability_report(const ObservationPanel& panel,
                                     const netbuild::RoadNetwork& net, double min_length_m);

void save_reliability(const ReliabilityReport& report, const std::string& links_path,
                      const std::string& hist_path);

} // namespace roadpulse::ingest
