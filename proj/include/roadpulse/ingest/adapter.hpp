#pragma once

#include "roadpulse/ingest/panel.hpp"
#include "roadpulse/netbuild/linkmap.hpp"

#include <optional>
#include <string>

namespace roadpulse::ingest {

// One provider-style segment flow record, as pulled from a traffic API.
struct ProviderRecord {
    std::string segment_key;
    std::optional<double> current_travel_time_s;
    std::optional<double> free_flow_s;
};

// Resolves the segment key through the mapping table and produces a panel
// observation. Returns nullopt when the key is unmatched (the map records
// it for the unmatched report); missing time fields are an adapter error.
std::optional<Observation> adapt_provider_response(const ProviderRecord& record,
                                                   netbuild::SegmentMap& mapping, Date date, Slot slot);

} // namespace roadpulse::ingest
