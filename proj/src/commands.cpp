#include "roadpulse/cli/commands.hpp"

#include "roadpulse/common/csv.hpp"
#include "roadpulse/common/error.hpp"
#include "roadpulse/common/util.hpp"
#include "roadpulse/estimate/reports.hpp"
#include "roadpulse/ingest/adapter.hpp"
#include "roadpulse/ingest/reliability.hpp"
#include "roadpulse/metrics/huemap.hpp"
#include "roadpulse/metrics/series.hpp"
#include "roadpulse/netbuild/osm.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace roadpulse::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

std::string out_path(const RunConfig& cfg, const std::string& name) {
    return (fs::path(cfg.out_dir) / name).string();
}

void require_artifact(const std::string& path, const std::string& hint) {
    if (path.empty() || !fs::exists(path))
        fail("missing-artifact", "required input '" + path + "' not found; " + hint);
}

struct Run {
    const RunConfig& cfg;
    std::string command;
    std::vector<std::string> outputs;
    std::chrono::steady_clock::time_point started = std::chrono::steady_clock::now();

    void produced(const std::string& path) { outputs.push_back(path); }

    void log(const std::string& message) const {
        if (cfg.verbose)
            std::cerr << command << ": " << message << '\n';
    }

    // Manifest: config echo, seed, output hashes, wall time. The wall-time
    // field makes manifests the one artifact exempt from byte-identity.
    void write_manifest() const {
        json m;
        m["command"] = command;
        m["version"] = kVersion;
        m["seed"] = cfg.seed;
        m["workers"] = cfg.workers;
        m["config"] = {{"out_dir", cfg.out_dir},
                       {"mode", netbuild::to_string(cfg.mode)},
                       {"window_days", cfg.window_days},
                       {"min_link_length_m", cfg.min_length_or_default()},
                       {"vdf_alpha", cfg.vdf.alpha},
                       {"vdf_beta", cfg.vdf.beta},
                       {"ue_tolerance", cfg.ue_tolerance},
                       {"ue_max_iterations", cfg.ue_max_iterations},
                       {"connector_time_s", cfg.connector_time_s},
                       {"ga_population", cfg.ga.population},
                       {"ga_generations", cfg.ga.generations}};
        json outs = json::array();
        for (const std::string& path : outputs)
            outs.push_back({{"path", path}, {"fnv1a64", to_hex(fnv1a64_file(path))}});
        m["outputs"] = std::move(outs);
        m["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

        std::ofstream out(out_path(cfg, "manifest_" + command + ".json"), std::ios::binary);
        out << m.dump(2) << '\n';
    }
};

netbuild::RoadNetwork load_built_network(const RunConfig& cfg) {
    const std::string nodes = out_path(cfg, "network_nodes.csv");
    const std::string links = out_path(cfg, "network_links.csv");
    require_artifact(nodes, "run build-network first");
    require_artifact(links, "run build-network first");
    return netbuild::load_network(cfg.mode, nodes, links);
}

netbuild::ZoneSet load_built_zones(const RunConfig& cfg, const netbuild::RoadNetwork& net) {
    const std::string zones = out_path(cfg, "zones.csv");
    require_artifact(zones, "run build-zones first");
    return netbuild::load_zones(net, zones);
}

ingest::ObservationPanel load_built_panel(const RunConfig& cfg) {
    const std::string panel = out_path(cfg, "panel.csv");
    require_artifact(panel, "run ingest first");
    return ingest::load_panel(panel);
}

std::string default_label(const RunConfig& cfg) {
    if (!cfg.label.empty())
        return cfg.label;
    if (!cfg.estimate_date.empty())
        return cfg.estimate_date + "_" + cfg.estimate_slot;
    return "run";
}

void cmd_build_network(Run& run) {
    const RunConfig& cfg = run.cfg;
    require_artifact(cfg.osm_path, "set osm_path in the config");
    if (!cfg.bbox)
        fail("config", "bbox is required for build-network");

    netbuild::ParseStats stats;
    const netbuild::RoadNetwork net =
        netbuild::parse_network(cfg.osm_path, *cfg.bbox, cfg.mode, cfg.class_table, &stats);
    run.log("ways " + std::to_string(stats.ways_total) + ", drivable " +
            std::to_string(stats.ways_drivable) + ", links " + std::to_string(stats.links_built) +
            ", dropped components " + std::to_string(stats.components_dropped) + " (" +
            std::to_string(stats.nodes_dropped) + " nodes)");

    const std::string nodes = out_path(cfg, "network_nodes.csv");
    const std::string links = out_path(cfg, "network_links.csv");
    save_network(net, nodes, links);
    run.produced(nodes);
    run.produced(links);
}

void cmd_build_zones(Run& run) {
    const RunConfig& cfg = run.cfg;
    if (cfg.zone_rows < 1 || cfg.zone_cols < 1)
        fail("config", "zone_rows and zone_cols are required for build-zones");
    const netbuild::RoadNetwork net = load_built_network(cfg);
    const netbuild::ZoneSet zones = netbuild::build_zones(net, cfg.zone_rows, cfg.zone_cols);
    run.log(std::to_string(zones.zone_count()) + " zones on a " + std::to_string(cfg.zone_rows) +
            "x" + std::to_string(cfg.zone_cols) + " grid");
    const std::string path = out_path(cfg, "zones.csv");
    save_zones(zones, path);
    run.produced(path);
}

void cmd_ingest(Run& run) {
    const RunConfig& cfg = run.cfg;
    ingest::ObservationPanel panel;

    if (!cfg.provider_records_path.empty()) {
        require_artifact(cfg.provider_records_path, "set provider_records_path");
        require_artifact(cfg.segment_map_path, "provider ingest needs segment_map_path");
        netbuild::SegmentMap mapping = netbuild::SegmentMap::load(cfg.segment_map_path);

        const csv::Table t = csv::read_table(cfg.provider_records_path);
        const auto ki = t.require("segment_key");
        const auto di = t.require("date");
        const auto si = t.require("slot");
        const auto ci = t.require("current_travel_time_s");
        const auto fi = t.require("free_flow_s");

        ingest::ObservationPanel::Builder builder;
        for (const auto& r : t.rows) {
            ingest::ProviderRecord rec;
            rec.segment_key = r.at(ki, "segment_key");
            if (!r.at(ci, "current_travel_time_s").empty())
                rec.current_travel_time_s =
                    csv::parse_double(r.at(ci, "current_travel_time_s"), cfg.provider_records_path);
            if (!r.at(fi, "free_flow_s").empty())
                rec.free_flow_s = csv::parse_double(r.at(fi, "free_flow_s"), cfg.provider_records_path);
            const auto obs = ingest::adapt_provider_response(
                rec, mapping, Date::parse(r.at(di, "date")), ingest::slot_from_string(r.at(si, "slot")));
            if (obs)
                builder.add(*obs);
        }
        panel = builder.build();

        const std::string unmatched = out_path(cfg, "unmatched_keys.csv");
        mapping.write_unmatched_report(unmatched);
        run.produced(unmatched);
        run.log(std::to_string(mapping.unmatched().size()) + " unmatched segment keys");
    } else {
        require_artifact(cfg.observations_path, "set observations_path or provider_records_path");
        panel = ingest::load_panel(cfg.observations_path);
    }

    run.log(std::to_string(panel.size()) + " observations over " +
            std::to_string(panel.calendar().size()) + " dates");
    const std::string path = out_path(cfg, "panel.csv");
    save_panel(panel, path);
    run.produced(path);
}

void cmd_reliability(Run& run) {
    const RunConfig& cfg = run.cfg;
    const netbuild::RoadNetwork net = load_built_network(cfg);
    const ingest::ObservationPanel panel = load_built_panel(cfg);
    const auto report = ingest::reliability_report(panel, net, cfg.min_length_or_default());
    const std::string links = out_path(cfg, "reliability_links.csv");
    const std::string hist = out_path(cfg, "reliability_hist.csv");
    save_reliability(report, links, hist);
    run.produced(links);
    run.produced(hist);
}

void cmd_metrics(Run& run) {
    const RunConfig& cfg = run.cfg;
    const netbuild::RoadNetwork net = load_built_network(cfg);
    const ingest::ObservationPanel panel = load_built_panel(cfg);
    if (panel.empty())
        fail("missing-artifact", "panel is empty, nothing to compute");
    const double min_len = cfg.min_length_or_default();

    std::optional<metrics::EventTimeline> timeline;
    if (!cfg.timeline_path.empty()) {
        require_artifact(cfg.timeline_path, "set timeline_path");
        timeline = metrics::load_timeline(cfg.timeline_path);
    }

    const std::vector<ingest::SlotFilter> slots = {
        ingest::SlotFilter{ingest::Slot::Morning}, ingest::SlotFilter{ingest::Slot::Afternoon},
        ingest::SlotFilter{ingest::Slot::Evening}, ingest::SlotFilter{}};
    for (metrics::MetricKind kind : {metrics::MetricKind::Cov, metrics::MetricKind::Ci}) {
        for (const auto& slot : slots) {
            metrics::MetricSeries series =
                metrics::moving_series(panel, net, kind, slot, cfg.window_days, min_len);
            if (timeline && !cfg.city.empty())
                series = metrics::annotate(std::move(series), *timeline, cfg.city);
            const std::string path = out_path(cfg, std::string("series_") + to_string(kind) + "_" +
                                                       ingest::slot_filter_name(slot) + ".csv");
            save_series(series, path);
            run.produced(path);
        }
    }

    // Hue map: per-link CoV over the whole study period for one slot.
    const ingest::SlotFilter hue_slot = ingest::slot_filter_from_string(cfg.huemap_slot);
    const Date first = panel.calendar().front();
    const Date last = panel.calendar().back();
    const metrics::WindowSpec whole{last.serial() - first.serial() + 1, last};
    std::unordered_map<std::string, double> values;
    for (const netbuild::Link& lk : net.links()) {
        if (lk.length_m < min_len)
            continue;
        if (const auto lc = metrics::link_cov(panel, lk.id, hue_slot, whole))
            values.emplace(lk.id, lc->cov);
    }
    if (!values.empty()) {
        const std::string path = out_path(cfg, "huemap_cov.geojson");
        metrics::save_geojson(metrics::hue_map(net, values), path);
        run.produced(path);
    } else {
        run.log("no link has a defined whole-period CoV, hue map skipped");
    }
}

void cmd_assign(Run& run) {
    const RunConfig& cfg = run.cfg;
    const netbuild::RoadNetwork net = load_built_network(cfg);
    const netbuild::ZoneSet zones = load_built_zones(cfg, net);
    require_artifact(cfg.od_path, "set od_path for assign");
    const assign::OdMatrix od = assign::load_od(zones, cfg.od_path);

    const assign::AssignmentResult result = assign::user_equilibrium(net, zones, od, cfg.ue_params());
    run.log("gap " + csv::format_double(result.relative_gap) + " after " +
            std::to_string(result.iterations) + " iterations" +
            (result.converged ? "" : " (not converged)"));

    const std::string label = default_label(cfg);
    const std::string apath = out_path(cfg, "assignment_" + label + ".csv");
    save_assignment(result, net, apath);
    run.produced(apath);

    const std::string spath = out_path(cfg, "stats_" + label + ".csv");
    save_stats(network_stats(result, od, net), spath);
    run.produced(spath);
}

void cmd_estimate(Run& run) {
    const RunConfig& cfg = run.cfg;
    const netbuild::RoadNetwork net = load_built_network(cfg);
    const netbuild::ZoneSet zones = load_built_zones(cfg, net);
    const ingest::ObservationPanel panel = load_built_panel(cfg);
    if (cfg.estimate_date.empty())
        fail("config", "estimate_date is required for estimate");

    const Date date = Date::parse(cfg.estimate_date);
    const ingest::Slot slot = ingest::slot_from_string(cfg.estimate_slot);
    std::vector<estimate::ObservedLinkTime> observed;
    for (int li = 0; li < net.link_count(); ++li) {
        if (const ingest::Observation* o = panel.find(net.link(li).id, date, slot))
            observed.push_back({li, o->travel_time_s});
    }
    if (observed.empty())
        fail("missing-artifact", "panel has no observations on " + cfg.estimate_date + " " +
                                     cfg.estimate_slot);
    run.log(std::to_string(observed.size()) + " observed links for " + cfg.estimate_date + " " +
            cfg.estimate_slot);

    const estimate::EstimateResult est =
        estimate::estimate_od(net, zones, observed, cfg.ga_config(), cfg.vdf);
    run.log("best rmse " + csv::format_double(est.best.rmse) + " after " +
            std::to_string(est.generations_run) + " generations");

    const std::string label = default_label(cfg);
    const std::string odp = out_path(cfg, "od_estimated_" + label + ".csv");
    save_od(est.od, odp);
    run.produced(odp);

    const std::string tracep = out_path(cfg, "ga_trace_" + label + ".csv");
    estimate::save_trace(est.trace, tracep);
    run.produced(tracep);

    // Assign the estimated matrix once more at reporting tolerance so the
    // stats and zonal reports come from a tight equilibrium.
    const assign::AssignmentResult result =
        assign::user_equilibrium(net, zones, est.od, cfg.ue_params());
    const std::string apath = out_path(cfg, "assignment_" + label + ".csv");
    save_assignment(result, net, apath);
    run.produced(apath);
    const std::string spath = out_path(cfg, "stats_" + label + ".csv");
    save_stats(network_stats(result, est.od, net), spath);
    run.produced(spath);
}

Date date_of_label(const std::string& label) {
    if (label.size() < 10)
        fail("config", "label '" + label + "' does not start with YYYY-MM-DD");
    return Date::parse(label.substr(0, 10));
}

void cmd_report(Run& run) {
    const RunConfig& cfg = run.cfg;
    const netbuild::RoadNetwork net = load_built_network(cfg);
    const netbuild::ZoneSet zones = load_built_zones(cfg, net);
    if (cfg.report_base_label.empty() || cfg.report_labels.empty())
        fail("config", "report needs report_base_label and report_labels");

    const std::string base_stats = out_path(cfg, "stats_" + cfg.report_base_label + ".csv");
    require_artifact(base_stats, "run assign/estimate for the base label first");
    const estimate::DayStats base{date_of_label(cfg.report_base_label),
                                  assign::load_stats(base_stats)};

    std::vector<estimate::DayStats> others;
    std::vector<std::string> labels;
    for (const std::string& raw : split(cfg.report_labels, ',')) {
        const std::string label = trim(raw);
        if (label.empty())
            continue;
        labels.push_back(label);
        const std::string spath = out_path(cfg, "stats_" + label + ".csv");
        require_artifact(spath, "run assign/estimate for label '" + label + "' first");
        others.push_back({date_of_label(label), assign::load_stats(spath)});
    }

    const auto report = estimate::compare_days(
        cfg.report_city_label.empty() ? "network" : cfg.report_city_label, base, others);
    const std::string cpath = out_path(cfg, "comparison.csv");
    save_comparison_csv(report, cpath);
    run.produced(cpath);
    const std::string tpath = out_path(cfg, "comparison.txt");
    {
        std::ofstream out(tpath, std::ios::binary);
        out << render_comparison_text(report);
    }
    run.produced(tpath);

    // Zonal outputs for every labelled day, base included.
    labels.insert(labels.begin(), cfg.report_base_label);
    for (const std::string& label : labels) {
        const std::string odp = out_path(cfg, "od_estimated_" + label + ".csv");
        const std::string apath = out_path(cfg, "assignment_" + label + ".csv");
        if (!fs::exists(odp) || !fs::exists(apath)) {
            run.log("label '" + label + "' has no od/assignment files, zonal report skipped");
            continue;
        }
        const assign::OdMatrix od = assign::load_od(zones, odp);
        const assign::AssignmentResult result = assign::load_assignment(net, apath);
        const auto shares = estimate::zone_production_shares(od);
        const auto dest_ci =
            estimate::destination_congestion_index(result, od, zones, net, cfg.connector_time_s);
        const std::string zpath = out_path(cfg, "zonal_" + label + ".geojson");
        metrics::save_geojson(estimate::zonal_geojson(zones, shares, dest_ci), zpath);
        run.produced(zpath);
    }
}

} // namespace

void run_command(const std::string& command, const RunConfig& cfg) {
    fs::create_directories(cfg.out_dir);
    Run run{cfg, command};

    if (command == "build-network") cmd_build_network(run);
    else if (command == "build-zones") cmd_build_zones(run);
    else if (command == "ingest") cmd_ingest(run);
    else if (command == "reliability") cmd_reliability(run);
    else if (command == "metrics") cmd_metrics(run);
    else if (command == "assign") cmd_assign(run);
    else if (command == "estimate") cmd_estimate(run);
    else if (command == "report") cmd_report(run);
    else
        fail("config", "unknown command '" + command + "'");

    run.write_manifest();
}

} // namespace roadpulse::cli
