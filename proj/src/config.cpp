#include "roadpulse/cli/config.hpp"

#include "roadpulse/common/csv.hpp"
#include "roadpulse/common/error.hpp"
#include "roadpulse/common/util.hpp"

#include <fstream>
#include <unordered_map>

namespace roadpulse::cli {

assign::UeParams RunConfig::ue_params() const {
    assign::UeParams p;
    p.vdf = vdf;
    p.tolerance = ue_tolerance;
    p.max_iterations = ue_max_iterations;
    p.connector_time_s = connector_time_s;
    p.workers = workers;
    return p;
}

estimate::GaConfig RunConfig::ga_config() const {
    estimate::GaConfig g = ga;
    g.seed = seed;
    g.workers = workers;
    return g;
}

namespace {

netbuild::BBox parse_bbox(const std::string& value) {
    const auto parts = split(value, ',');
    if (parts.size() != 4)
        fail("config", "bbox must be min_lon,min_lat,max_lon,max_lat");
    netbuild::BBox b;
    b.min_lon = csv::parse_double(trim(parts[0]), "bbox");
    b.min_lat = csv::parse_double(trim(parts[1]), "bbox");
    b.max_lon = csv::parse_double(trim(parts[2]), "bbox");
    b.max_lat = csv::parse_double(trim(parts[3]), "bbox");
    if (b.degenerate())
        fail("config", "bbox is degenerate");
    return b;
}

} // namespace

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        fail("config", "cannot open config file '" + path + "'");

    RunConfig cfg;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string text = trim(line);
        if (text.empty() || text[0] == '#')
            continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos)
            fail("config", path + ":" + std::to_string(line_no) + ": expected key = value");
        const std::string key = trim(text.substr(0, eq));
        const std::string value = trim(text.substr(eq + 1));
        const std::string ctx = path + ":" + std::to_string(line_no);

        auto num = [&] { return csv::parse_double(value, ctx); };
        auto integer = [&] { return static_cast<int>(csv::parse_long(value, ctx)); };

        if (key == "out_dir") cfg.out_dir = value;
        else if (key == "osm_path") cfg.osm_path = value;
        else if (key == "observations_path") cfg.observations_path = value;
        else if (key == "provider_records_path") cfg.provider_records_path = value;
        else if (key == "segment_map_path") cfg.segment_map_path = value;
        else if (key == "timeline_path") cfg.timeline_path = value;
        else if (key == "od_path") cfg.od_path = value;
        else if (key == "bbox") cfg.bbox = parse_bbox(value);
        else if (key == "mode") cfg.mode = netbuild::network_mode_from_string(value);
        else if (key == "zone_rows") cfg.zone_rows = integer();
        else if (key == "zone_cols") cfg.zone_cols = integer();
        else if (key == "speed_motorway_kmh") cfg.class_table.motorway.speed_kmh = num();
        else if (key == "speed_primary_kmh") cfg.class_table.primary.speed_kmh = num();
        else if (key == "speed_secondary_kmh") cfg.class_table.secondary.speed_kmh = num();
        else if (key == "speed_tertiary_kmh") cfg.class_table.tertiary.speed_kmh = num();
        else if (key == "speed_residential_kmh") cfg.class_table.residential.speed_kmh = num();
        else if (key == "capacity_motorway_vph") cfg.class_table.motorway.capacity_per_lane_vph = num();
        else if (key == "capacity_primary_vph") cfg.class_table.primary.capacity_per_lane_vph = num();
        else if (key == "capacity_secondary_vph") cfg.class_table.secondary.capacity_per_lane_vph = num();
        else if (key == "capacity_tertiary_vph") cfg.class_table.tertiary.capacity_per_lane_vph = num();
        else if (key == "capacity_residential_vph") cfg.class_table.residential.capacity_per_lane_vph = num();
        else if (key == "min_link_length_m") cfg.min_link_length_m = num();
        else if (key == "window_days") cfg.window_days = integer();
        else if (key == "city") cfg.city = value;
        else if (key == "huemap_slot") cfg.huemap_slot = value;
        else if (key == "vdf_alpha") cfg.vdf.alpha = num();
        else if (key == "vdf_beta") cfg.vdf.beta = num();
        else if (key == "ue_tolerance") cfg.ue_tolerance = num();
        else if (key == "ue_max_iterations") cfg.ue_max_iterations = integer();
        else if (key == "connector_time_s") cfg.connector_time_s = num();
        else if (key == "label") cfg.label = value;
        else if (key == "estimate_date") cfg.estimate_date = value;
        else if (key == "estimate_slot") cfg.estimate_slot = value;
        else if (key == "ga_population") cfg.ga.population = integer();
        else if (key == "ga_generations") cfg.ga.generations = integer();
        else if (key == "ga_elite") cfg.ga.elite = integer();
        else if (key == "ga_tournament") cfg.ga.tournament = integer();
        else if (key == "ga_crossover_rate") cfg.ga.crossover_rate = num();
        else if (key == "ga_mutation_rate") cfg.ga.mutation_rate = num();
        else if (key == "ga_mutation_scale") cfg.ga.mutation_scale = num();
        else if (key == "ga_stall_patience") cfg.ga.stall_patience = integer();
        else if (key == "ga_ue_tolerance") cfg.ga.ue_tolerance = num();
        else if (key == "ga_ue_max_iterations") cfg.ga.ue_max_iterations = integer();
        else if (key == "report_city_label") cfg.report_city_label = value;
        else if (key == "report_base_label") cfg.report_base_label = value;
        else if (key == "report_labels") cfg.report_labels = value;
        else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(csv::parse_long(value, ctx));
        else if (key == "workers") cfg.workers = integer();
        else
            fail("config", path + ":" + std::to_string(line_no) + ": unknown key '" + key + "'");
    }

    if (cfg.window_days < 1)
        fail("config", "window_days must be >= 1");
    if (cfg.min_link_length_m && *cfg.min_link_length_m <= 0)
        fail("config", "min_link_length_m must be positive");
    if (cfg.workers < 1)
        fail("config", "workers must be >= 1");
    if (cfg.ue_tolerance <= 0 || cfg.connector_time_s <= 0)
        fail("config", "ue_tolerance and connector_time_s must be positive");
    return cfg;
}

} // namespace roadpulse::cli
