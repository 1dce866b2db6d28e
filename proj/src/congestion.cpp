#include "roadpulse/metrics/congestion.hpp"

#include "roadpulse/common/error.hpp"

namespace roadpulse::metrics {

LinkCongestion link_ci(const Observation& obs, const netbuild::RoadNetwork& net) {
    double free_flow = 0;
    if (obs.free_flow_s) {
        free_flow = *obs.free_flow_s;
    } else {
        const int li = net.link_index(obs.link_id);
        if (li < 0)
            fail("missing-freeflow", "no free-flow time resolvable for link '" + obs.link_id + "'");
        free_flow = net.link(li).free_flow_s;
    }

    LinkCongestion ci;
    ci.link_id = obs.link_id;
    ci.slot = obs.slot;
    ci.date = obs.date;
    ci.travel_time_s = obs.travel_time_s;
    ci.free_flow_s = free_flow;
    ci.index = obs.travel_time_s / free_flow;
    ci.sub_free_flow = ci.index < 1.0;
    return ci;
}

NetworkCongestion network_ci(const ObservationPanel& panel, const netbuild::RoadNetwork& net,
                             SlotFilter slot, Date date, double min_length_m) {
    double sum = 0;
    int n = 0;
    int flagged = 0;
    for (const netbuild::Link& lk : net.links()) {
        if (lk.length_m < min_length_m)
            continue;
        double link_sum = 0;
        int link_n = 0;
        bool link_flagged = false;
        for (int i : panel.link_observations(lk.id)) {
            const Observation& o = panel.observations()[static_cast<std::size_t>(i)];
            if (o.date != date)
                continue;
            if (slot && o.slot != *slot)
                continue;
            const LinkCongestion ci = link_ci(o, net);
            link_sum += ci.index;
            ++link_n;
            link_flagged = link_flagged || ci.sub_free_flow;
        }
        if (link_n == 0)
            continue;
        sum += link_sum / link_n;
        ++n;
        if (link_flagged)
            ++flagged;
    }
    if (n == 0)
        fail("undefined-day", "no observations on " + date.to_string() + " for slot " +
                                  ingest::slot_filter_name(slot));
    return NetworkCongestion{slot, date, sum / n, n, flagged};
}

} // namespace roadpulse::metrics
