#pragma once

#include "roadpulse/ingest/panel.hpp"
#include "roadpulse/netbuild/network.hpp"

#include <optional>
#include <string>

namespace roadpulse::metrics {

using ingest::ObservationPanel;
using ingest::Slot;
using ingest::SlotFilter;

// Trailing moving window of whole calendar days ending at anchor.
struct WindowSpec {
    int width_days = 7;
    Date anchor;

    Date start() const { return anchor.plus_days(-(width_days - 1)); }
    bool contains(Date d) const { return d >= start() && d <= anchor; }
};

// Coefficient of variance of one link's travel times within a window:
// population standard deviation divided by the mean. Defined only when the
// window holds at least two matching observations.
struct LinkCov {
    std::string link_id;
    SlotFilter slot;
    WindowSpec window;
    double mean_s = 0;
    double std_s = 0;
    double cov = 0;
    int sample_size = 0;
};

std::optional<LinkCov> link_cov(const ObservationPanel& panel, const std::string& link_id,
                                SlotFilter slot, const WindowSpec& window);

// Network-average CoV: arithmetic mean over links with a defined LinkCov
// that pass the length filter; n is the count of contributing links.
struct NetworkCov {
    SlotFilter slot;
    WindowSpec window;
    double value = 0;
    int n = 0;
};

NetworkCov network_cov(const ObservationPanel& panel, const netbuild::RoadNetwork& net,
                       SlotFilter slot, const WindowSpec& window, double min_length_m);

} // namespace roadpulse::metrics
