#pragma once

#include "roadpulse/common/date.hpp"

#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace roadpulse::ingest {

// The three daily collection departure times (nominally 09:00, 13:00 and
// 17:00 local).
enum class Slot { Morning, Afternoon, Evening };

const char* to_string(Slot s);
Slot slot_from_string(const std::string& s);
int slot_clock_hour(Slot s); // 9, 13, 17

// Metric queries take either one slot or the whole day (all slots pooled).
using SlotFilter = std::optional<Slot>;

std::string slot_filter_name(SlotFilter f); // morning|afternoon|evening|whole_day
SlotFilter slot_filter_from_string(const std::string& s);

struct Observation {
    std::string link_id;
    Date date;
    Slot slot = Slot::Morning;
    double travel_time_s = 0;
    std::optional<double> free_flow_s; // provider-reported, when available
};

// Per-link travel-time observations indexed by (link, date, slot). At most
// one observation per key; the calendar is the sorted set of dates present
// (collection gaps stay gaps, nothing is zero-filled or interpolated).
class ObservationPanel {
public:
    class Builder {
    public:
        // Identical duplicates collapse; conflicting duplicates are an error.
        void add(Observation obs);
        ObservationPanel build();

    private:
        std::vector<Observation> obs_;
    };

    const std::vector<Observation>& observations() const { return obs_; }
    std::size_t size() const { return obs_.size(); }
    bool empty() const { return obs_.empty(); }

    const std::vector<Date>& calendar() const { return calendar_; }

    bool has_link(const std::string& link_id) const;
    // Indices into observations() for one link, sorted by (date, slot).
    std::span<const int> link_observations(const std::string& link_id) const;
    const Observation* find(const std::string& link_id, Date date, Slot slot) const;

    std::vector<std::string> link_ids() const; // sorted

private:
    std::vector<Observation> obs_; // sorted by (link, date, slot)
    std::vector<int> identity_;    // 0..n-1, backing storage for index spans
    std::vector<Date> calendar_;
    std::unordered_map<std::string, std::pair<int, int>> link_ranges_;
};

ObservationPanel load_panel(const std::string& path);
void save_panel(const ObservationPanel& panel, const std::string& path);

} // namespace roadpulse::ingest
