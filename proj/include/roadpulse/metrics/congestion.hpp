#pragma once

#include "roadpulse/ingest/panel.hpp"
#include "roadpulse/netbuild/network.hpp"

#include <string>

namespace roadpulse::metrics {

using ingest::Observation;
using ingest::ObservationPanel;
using ingest::Slot;
using ingest::SlotFilter;

// Congestion index of one observation: travel time over free-flow time.
// The provider-reported free-flow time wins when present, else the link's
// class-derived free-flow time. Sub-free-flow ratios are retained and
// flagged rather than clamped or dropped.
struct LinkCongestion {
    std::string link_id;
    Slot slot = Slot::Morning;
    Date date;
    double travel_time_s = 0;
    double free_flow_s = 0;
    double index = 0;
    bool sub_free_flow = false;
};

LinkCongestion link_ci(const Observation& obs, const netbuild::RoadNetwork& net);

// Network-average congestion index for one date. For a single slot each
// link contributes its observation's index; for the whole day a link
// contributes the mean of its slot indexes, so n stays a link count.
struct NetworkCongestion {
    SlotFilter slot;
    Date date;
    double value = 0;
    int n = 0;
    int sub_free_flow_links = 0;
};

NetworkCongestion network_ci(const ObservationPanel& panel, const netbuild::RoadNetwork& net,
                             SlotFilter slot, Date date, double min_length_m);

} // namespace roadpulse::metrics
