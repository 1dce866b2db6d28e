#pragma once

#include "roadpulse/assign/graph.hpp"
#include "roadpulse/assign/od.hpp"

#include <span>
#include <string>
#include <vector>

namespace roadpulse::assign {

struct UeParams {
    VdfParams vdf;
    double tolerance = 1e-4; // relative gap
    int max_iterations = 200;
    double connector_time_s = 10.0;
    int workers = 1;
};

// Loads every OD pair's demand on its current least-cost path. Returns
// flows for all arcs (connectors included); throws when a positive-demand
// pair is unreachable.
std::vector<double> all_or_nothing(const AssignGraph& g, const OdMatrix& od,
                                   std::span<const double> arc_times, int workers = 1);

struct GapPoint {
    int iteration;
    double gap; // best (smallest) relative gap seen so far
};

struct AssignmentResult {
    std::vector<double> flows; // per real link, vehicles/hour
    std::vector<double> times; // per real link, seconds
    double relative_gap = 0;
    int iterations = 0;
    bool converged = false;
    std::vector<GapPoint> checkpoints;
};

// Static user equilibrium via convex-combination descent: all-or-nothing
// direction plus exact bisection line search on the Beckmann objective.
// Terminates when the relative gap (total minus shortest-path system time,
// over total system time) drops to the tolerance or at max_iterations.
AssignmentResult user_equilibrium(const AssignGraph& g, const OdMatrix& od, const UeParams& p);
AssignmentResult user_equilibrium(const netbuild::RoadNetwork& net, const netbuild::ZoneSet& zones,
                                  const OdMatrix& od, const UeParams& p);

struct NetworkStats {
    double avg_trip_length_m = 0;
    double avg_travel_time_s = 0;
    double total_demand = 0;
};

NetworkStats network_stats(const AssignmentResult& result, const OdMatrix& od,
                           const netbuild::RoadNetwork& net);

void save_assignment(const AssignmentResult& result, const netbuild::RoadNetwork& net,
                     const std::string& path);
// Rehydrates flows/times from a saved assignment (gap metadata not kept).
AssignmentResult load_assignment(const netbuild::RoadNetwork& net, const std::string& path);
void save_stats(const NetworkStats& stats, const std::string& path);
NetworkStats load_stats(const std::string& path);

} // namespace roadpulse::assign
