#pragma once

#include "roadpulse/metrics/congestion.hpp"
#include "roadpulse/metrics/variability.hpp"

#include <string>
#include <vector>

namespace roadpulse::metrics {

enum class MetricKind { Cov, Ci };

const char* to_string(MetricKind k);
MetricKind metric_kind_from_string(const std::string& s);

struct SeriesPoint {
    Date date;
    double value = 0;
    int n = 0; // contributing links (cov) / contributing dailies (ci)
};

struct Annotation {
    Date date;
    int ref = 0;
};

struct MetricSeries {
    MetricKind kind = MetricKind::Cov;
    SlotFilter slot;
    std::vector<SeriesPoint> points;      // dates strictly increasing
    std::vector<Annotation> annotations;  // sorted by (date, ref)

    bool empty() const { return points.empty(); }
    Date first() const { return points.front().date; }
    Date last() const { return points.back().date; }
};

// One point per calendar date present in the panel. For cov the point is
// the network CoV over the trailing window; for ci it is the trailing mean
// of the daily network congestion indexes available inside the window.
// Calendar gaps stay gaps; nothing is interpolated.
MetricSeries moving_series(const ObservationPanel& panel, const netbuild::RoadNetwork& net,
                           MetricKind kind, SlotFilter slot, int window_days, double min_length_m);

struct TimelineEvent {
    std::string city;
    int ref = 0;
    std::string description;
    Date start;
    Date end;
};

struct EventTimeline {
    std::vector<TimelineEvent> entries;

    bool has_city(const std::string& city) const;
};

EventTimeline load_timeline(const std::string& path);

// Attaches (date, ref) annotations for every event of the city whose date
// range intersects the series span, at the series points inside the range.
MetricSeries annotate(MetricSeries series, const EventTimeline& timeline, const std::string& city);

void save_series(const MetricSeries& series, const std::string& path);

} // namespace roadpulse::metrics
