#include "roadpulse/netbuild/linkmap.hpp"

#include "roadpulse/common/csv.hpp"
#include "roadpulse/common/error.hpp"

namespace roadpulse::netbuild {

SegmentMap SegmentMap::load(const std::string& path, const RoadNetwork* net) {
    const csv::Table t = csv::read_table(path);
    const auto ki = t.require("segment_key");
    const auto li = t.require("link_id");
    SegmentMap sm;
    for (const auto& r : t.rows) {
        const std::string& key = r.at(ki, "segment_key");
        const std::string& link = r.at(li, "link_id");
        auto [it, inserted] = sm.map_.emplace(key, link);
        if (!inserted && it->second != link)
            fail("mapping", path + ": segment key '" + key + "' maps to both '" + it->second +
                                "' and '" + link + "'");
        if (net && net->link_index(link) < 0)
            fail("mapping", path + ": link id '" + link + "' not in network");
    }
    return sm;
}

std::optional<std::string> SegmentMap::lookup(const std::string& segment_key) {
    auto it = map_.find(segment_key);
    if (it != map_.end())
        return it->second;
    if (unmatched_seen_.insert(segment_key).second)
        unmatched_.push_back(segment_key);
    return std::nullopt;
}

void SegmentMap::write_unmatched_report(const std::string& path) const {
    csv::Writer w(path);
    w.row({"segment_key"});
    for (const std::string& key : unmatched_)
        w.row({key});
    w.close();
}

} // namespace roadpulse::netbuild
