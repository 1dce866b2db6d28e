#pragma once

#include "roadpulse/assign/ue.hpp"
#include "roadpulse/estimate/ga.hpp"
#include "roadpulse/netbuild/network.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace roadpulse::cli {

// One flat key=value config file drives every pipeline command; flags can
// override out_dir, seed and workers. Unknown keys are an error.
struct RunConfig {
    // paths
    std::string out_dir = "out";
    std::string osm_path;
    std::string observations_path;
    std::string provider_records_path;
    std::string segment_map_path;
    std::string timeline_path;
    std::string od_path;

    // network build
    std::optional<netbuild::BBox> bbox;
    netbuild::NetworkMode mode = netbuild::NetworkMode::City;
    netbuild::ClassTable class_table;
    int zone_rows = 0;
    int zone_cols = 0;

    // metrics
    std::optional<double> min_link_length_m; // default: by network mode
    int window_days = 7;
    std::string city;
    std::string huemap_slot = "morning";

    // assignment
    assign::VdfParams vdf;
    double ue_tolerance = 1e-4;
    int ue_max_iterations = 200;
    double connector_time_s = 10.0;
    std::string label;

    // estimation
    std::string estimate_date;
    std::string estimate_slot = "morning";
    estimate::GaConfig ga;

    // report
    std::string report_city_label;
    std::string report_base_label;
    std::string report_labels; // comma separated

    std::uint64_t seed = 1;
    int workers = 1;
    bool verbose = false;

    double min_length_or_default() const {
        return min_link_length_m ? *min_link_length_m
                                 : (mode == netbuild::NetworkMode::City ? 100.0 : 500.0);
    }

    assign::UeParams ue_params() const;
    estimate::GaConfig ga_config() const; // ga with seed/workers folded in
};

RunConfig load_config(const std::string& path);

} // namespace roadpulse::cli
