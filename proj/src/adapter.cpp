#include "roadpulse/ingest/adapter.hpp"

#include "roadpulse/common/error.hpp"

namespace roadpulse::ingest {

std::optional<Observation> adapt_provider_response(const ProviderRecord& record,
                                                   netbuild::SegmentMap& mapping, Date date,
                                                   Slot slot) {
    if (!record.current_travel_time_s)
        fail("adapter", "segment '" + record.segment_key + "' record is missing the current travel time");
    if (!record.free_flow_s)
        fail("adapter", "segment '" + record.segment_key + "' record is missing the free-flow time");

    const auto link = mapping.lookup(record.segment_key);
    if (!link)
        return std::nullopt;

    Observation obs;
    obs.link_id = *link;
    obs.date = date;
    obs.slot = slot;
    obs.travel_time_s = *record.current_travel_time_s;
    obs.free_flow_s = record.free_flow_s;
    if (obs.travel_time_s <= 0 || *obs.free_flow_s <= 0)
        fail("adapter", "segment '" + record.segment_key + "' record has nonpositive times");
    return obs;
}

} // namespace roadpulse::ingest
