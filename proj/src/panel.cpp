#include "roadpulse/ingest/panel.hpp"

#include "roadpulse/common/csv.hpp"
#include "roadpulse/common/error.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace roadpulse::ingest {

const char* to_string(Slot s) {
    switch (s) {
    case Slot::Morning: return "morning";
    case Slot::Afternoon: return "afternoon";
    case Slot::Evening: return "evening";
    }
    return "morning";
}

Slot slot_from_string(const std::string& s) {
    if (s == "morning") return Slot::Morning;
    if (s == "afternoon") return Slot::Afternoon;
    if (s == "evening") return Slot::Evening;
    fail("schema", "unknown departure slot '" + s + "'");
}

int slot_clock_hour(Slot s) {
    switch (s) {
    case Slot::Morning: return 9;
    case Slot::Afternoon: return 13;
    case Slot::Evening: return 17;
    }
    return 9;
}

std::string slot_filter_name(SlotFilter f) {
    return f ? to_string(*f) : "whole_day";
}

SlotFilter slot_filter_from_string(const std::string& s) {
    if (s == "whole_day")
        return std::nullopt;
    return slot_from_string(s);
}

static auto obs_key(const Observation& o) {
    return std::tuple<const std::string&, std::int32_t, int>(o.link_id, o.date.serial(),
                                                             static_cast<int>(o.slot));
}

void ObservationPanel::Builder::add(Observation obs) {
    if (obs.travel_time_s <= 0)
        fail("schema", "nonpositive travel time for link '" + obs.link_id + "' on " +
                           obs.date.to_string());
    if (obs.free_flow_s && *obs.free_flow_s <= 0)
        fail("schema", "nonpositive free-flow time for link '" + obs.link_id + "' on " +
                           obs.date.to_string());
    obs_.push_back(std::move(obs));
}

ObservationPanel ObservationPanel::Builder::build() {
    std::stable_sort(obs_.begin(), obs_.end(),
                     [](const Observation& a, const Observation& b) { return obs_key(a) < obs_key(b); });

    ObservationPanel panel;
    for (auto& o : obs_) {
        if (!panel.obs_.empty() && obs_key(panel.obs_.back()) == obs_key(o)) {
            const Observation& prev = panel.obs_.back();
            if (prev.travel_time_s != o.travel_time_s || prev.free_flow_s != o.free_flow_s)
                fail("conflicting-duplicate", "link '" + o.link_id + "' " + o.date.to_string() + " " +
                                                  to_string(o.slot) +
                                                  " has conflicting duplicate observations");
            continue; // identical duplicate collapses
        }
        panel.obs_.push_back(std::move(o));
    }

    panel.identity_.resize(panel.obs_.size());
    for (std::size_t i = 0; i < panel.obs_.size(); ++i) {
        panel.identity_[i] = static_cast<int>(i);
        const std::string& link = panel.obs_[i].link_id;
        auto [it, inserted] = panel.link_ranges_.try_emplace(link, static_cast<int>(i), static_cast<int>(i + 1));
        if (!inserted)
            it->second.second = static_cast<int>(i + 1);
        panel.calendar_.push_back(panel.obs_[i].date);
    }
    std::sort(panel.calendar_.begin(), panel.calendar_.end());
    panel.calendar_.erase(std::unique(panel.calendar_.begin(), panel.calendar_.end()),
                          panel.calendar_.end());
    return panel;
}

bool ObservationPanel::has_link(const std::string& link_id) const {
    return link_ranges_.count(link_id) > 0;
}

std::span<const int> ObservationPanel::link_observations(const std::string& link_id) const {
    auto it = link_ranges_.find(link_id);
    if (it == link_ranges_.end())
        return {};
    return std::span<const int>(identity_.data() + it->second.first,
                                static_cast<std::size_t>(it->second.second - it->second.first));
}

const Observation* ObservationPanel::find(const std::string& link_id, Date date, Slot slot) const {
    for (int i : link_observations(link_id)) {
        const Observation& o = obs_[static_cast<std::size_t>(i)];
        if (o.date == date && o.slot == slot)
            return &o;
    }
    return nullptr;
}

std::vector<std::string> ObservationPanel::link_ids() const {
    std::vector<std::string> ids;
    ids.reserve(link_ranges_.size());
    for (const auto& [id, range] : link_ranges_)
        ids.push_back(id);
    std::sort(ids.begin(), ids.end());
    return ids;
}

ObservationPanel load_panel(const std::string& path) {
    const csv::Table t = csv::read_table(path);
    const auto li = t.require("link_id");
    const auto di = t.require("date");
    const auto si = t.require("slot");
    const auto ti = t.require("travel_time_s");
    const auto fi = t.find("free_flow_s");

    ObservationPanel::Builder b;
    for (const auto& r : t.rows) {
        Observation o;
        o.link_id = r.at(li, "link_id");
        o.date = Date::parse(r.at(di, "date"));
        o.slot = slot_from_string(r.at(si, "slot"));
        o.travel_time_s = csv::parse_double(r.at(ti, "travel_time_s"), path);
        if (fi && *fi < r.fields.size() && !r.fields[*fi].empty())
            o.free_flow_s = csv::parse_double(r.fields[*fi], path);
        b.add(std::move(o));
    }
    return b.build();
}

void save_panel(const ObservationPanel& panel, const std::string& path) {
    csv::Writer w(path);
    w.row({"link_id", "date", "slot", "travel_time_s", "free_flow_s"});
    for (const Observation& o : panel.observations())
        w.row({o.link_id, o.date.to_string(), to_string(o.slot), csv::format_double(o.travel_time_s),
               o.free_flow_s ? csv::format_double(*o.free_flow_s) : ""});
    w.close();
}

} // namespace roadpulse::ingest
