#include "roadpulse/metrics/series.hpp"

#include "roadpulse/common/csv.hpp"
#include "roadpulse/common/error.hpp"

#include <algorithm>

namespace roadpulse::metrics {

const char* to_string(MetricKind k) {
    return k == MetricKind::Cov ? "cov" : "ci";
}

MetricKind metric_kind_from_string(const std::string& s) {
    if (s == "cov") return MetricKind::Cov;
    if (s == "ci") return MetricKind::Ci;
    fail("config", "unknown metric kind '" + s + "', expected cov or ci");
}

MetricSeries moving_series(const ObservationPanel& panel, const netbuild::RoadNetwork& net,
                           MetricKind kind, SlotFilter slot, int window_days, double min_length_m) {
    if (window_days < 1)
        fail("config", "window width must be >= 1 day");

    MetricSeries series;
    series.kind = kind;
    series.slot = slot;

    // Daily CI values are shared by every anchor; compute them once.
    std::vector<std::pair<Date, double>> dailies;
    if (kind == MetricKind::Ci) {
        for (Date d : panel.calendar()) {
            try {
                const NetworkCongestion ci = network_ci(panel, net, slot, d, min_length_m);
                dailies.emplace_back(d, ci.value);
            } catch (const Error& e) {
                if (std::string(e.code()) != "undefined-day")
                    throw;
            }
        }
    }

    for (Date anchor : panel.calendar()) {
        const WindowSpec window{window_days, anchor};
        if (kind == MetricKind::Cov) {
            try {
                const NetworkCov nc = network_cov(panel, net, slot, window, min_length_m);
                series.points.push_back({anchor, nc.value, nc.n});
            } catch (const Error& e) {
                if (std::string(e.code()) != "undefined-window")
                    throw;
            }
        } else {
            double sum = 0;
            int n = 0;
            for (const auto& [d, v] : dailies) {
                if (window.contains(d)) {
                    sum += v;
                    ++n;
                }
            }
            if (n > 0)
                series.points.push_back({anchor, sum / n, n});
        }
    }
    return series;
}

bool EventTimeline::has_city(const std::string& city) const {
    for (const TimelineEvent& e : entries)
        if (e.city == city)
            return true;
    return false;
}

EventTimeline load_timeline(const std::string& path) {
    const csv::Table t = csv::read_table(path);
    const auto ci = t.require("city");
    const auto ri = t.require("ref");
    const auto di = t.require("description");
    const auto si = t.require("start_date");
    const auto ei = t.require("end_date");

    EventTimeline timeline;
    for (const auto& r : t.rows) {
        TimelineEvent e;
        e.city = r.at(ci, "city");
        e.ref = static_cast<int>(csv::parse_long(r.at(ri, "ref"), path));
        e.description = r.at(di, "description");
        e.start = Date::parse(r.at(si, "start_date"));
        e.end = Date::parse(r.at(ei, "end_date"));
        if (e.end < e.start)
            fail("schema", path + ": event ref " + std::to_string(e.ref) + " has end before start");
        timeline.entries.push_back(std::move(e));
    }
    return timeline;
}

MetricSeries annotate(MetricSeries series, const EventTimeline& timeline, const std::string& city) {
    if (!timeline.has_city(city))
        fail("unknown-city", "city '" + city + "' not present in the event timeline");
    if (series.empty())
        return series;

    const Date first = series.first();
    const Date last = series.last();
    series.annotations.clear();
    for (const TimelineEvent& e : timeline.entries) {
        if (e.city != city)
            continue;
        if (e.end < first || e.start > last)
            continue;
        for (const SeriesPoint& p : series.points)
            if (p.date >= e.start && p.date <= e.end)
                series.annotations.push_back({p.date, e.ref});
    }
    std::sort(series.annotations.begin(), series.annotations.end(),
              [](const Annotation& a, const Annotation& b) {
                  return a.date != b.date ? a.date < b.date : a.ref < b.ref;
              });
    series.annotations.erase(std::unique(series.annotations.begin(), series.annotations.end(),
                                         [](const Annotation& a, const Annotation& b) {
                                             return a.date == b.date && a.ref == b.ref;
                                         }),
                             series.annotations.end());
    return series;
}

void save_series(const MetricSeries& series, const std::string& path) {
    csv::Writer w(path);
    w.row({"date", "slot", "metric", "value", "n", "annotations"});
    for (const SeriesPoint& p : series.points) {
        std::string refs;
        for (const Annotation& a : series.annotations) {
            if (a.date == p.date) {
                if (!refs.empty())
                    refs += ';';
                refs += std::to_string(a.ref);
            }
        }
        w.row({p.date.to_string(), ingest::slot_filter_name(series.slot), to_string(series.kind),
               csv::format_double(p.value), std::to_string(p.n), refs});
    }
    w.close();
}

} // namespace roadpulse::metrics
