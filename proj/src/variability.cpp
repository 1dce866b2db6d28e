#include "roadpulse/metrics/variability.hpp"

#include "roadpulse/common/error.hpp"

#include <cmath>
#include <vector>

namespace roadpulse::metrics {

std::optional<LinkCov> link_cov(const ObservationPanel& panel, const std::string& link_id,
                                SlotFilter slot, const WindowSpec& window) {
    std::vector<double> values;
    for (int i : panel.link_observations(link_id)) {
        const ingest::Observation& o = panel.observations()[static_cast<std::size_t>(i)];
        if (!window.contains(o.date))
            continue;
        if (slot && o.slot != *slot)
            continue;
        values.push_back(o.travel_time_s);
    }
    if (values.size() < 2)
        return std::nullopt;

    double sum = 0;
    for (double v : values)
        sum += v;
    const double mean = sum / static_cast<double>(values.size());
    double sq = 0;
    for (double v : values)
        sq += (v - mean) * (v - mean);
    const double stdev = std::sqrt(sq / static_cast<double>(values.size()));

    LinkCov out;
    out.link_id = link_id;
    out.slot = slot;
    out.window = window;
    out.mean_s = mean;
    out.std_s = stdev;
    out.cov = stdev / mean;
    out.sample_size = static_cast<int>(values.size());
    return out;
}

NetworkCov network_cov(const ObservationPanel& panel, const netbuild::RoadNetwork& net,
                       SlotFilter slot, const WindowSpec& window, double min_length_m) {
    double sum = 0;
    int n = 0;
    for (const netbuild::Link& lk : net.links()) {
        if (lk.length_m < min_length_m)
            continue;
        if (const auto lc = link_cov(panel, lk.id, slot, window)) {
            sum += lc->cov;
            ++n;
        }
    }
    if (n == 0)
        fail("undefined-window", "no link has a defined CoV in the window ending " +
                                     window.anchor.to_string());
    return NetworkCov{slot, window, sum / n, n};
}

} // namespace roadpulse::metrics
