#pragma once

#include "roadpulse/netbuild/network.hpp"

#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace roadpulse::netbuild {

// Joins provider segment keys to network link ids. Unmatched keys are
// recorded (first-seen order, deduplicated) instead of silently dropped.
class SegmentMap {
public:
    // Loads a (segment_key,link_id) table. Duplicate rows with conflicting
    // targets are a load error; when a network is given, targets must exist.
    static SegmentMap load(const std::string& path, const RoadNetwork* net = nullptr);

    std::optional<std::string> lookup(const std::string& segment_key);

    std::size_t size() const { return map_.size(); }
    const std::vector<std::string>& unmatched() const { return unmatched_; }
    void write_unmatched_report(const std::string& path) const;

private:
    std::unordered_map<std::string, std::string> map_;
    std::vector<std::string> unmatched_;
    std::unordered_set<std::string> unmatched_seen_;
};

} // namespace roadpulse::netbuild
