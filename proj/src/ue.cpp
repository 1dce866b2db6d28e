#include "roadpulse/assign/ue.hpp"

#include "roadpulse/common/csv.hpp"
#include "roadpulse/common/error.hpp"
#include "roadpulse/common/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>

namespace roadpulse::assign {

namespace {

// Per-origin tree loading: demand enters at destination zone nodes and is
// pushed origin-ward along predecessor arcs in decreasing-distance order.
void load_origin(const AssignGraph& g, const OdMatrix& od, std::span<const double> arc_times,
                 int origin, std::vector<double>& flows, std::string* unreachable) {
    const PathTree tree = shortest_path_tree(g, arc_times, origin);

    std::vector<double> node_demand(static_cast<std::size_t>(g.node_count()), 0.0);
    for (int d = 0; d < od.zone_count(); ++d) {
        const double trips = od.at(origin, d);
        if (trips <= 0)
            continue;
        const int dest_node = g.zone_node(d);
        if (!std::isfinite(tree.dist[static_cast<std::size_t>(dest_node)])) {
            *unreachable = "zone '" + od.zone_ids()[static_cast<std::size_t>(origin)] +
                           "' cannot reach zone '" + od.zone_ids()[static_cast<std::size_t>(d)] + "'";
            return;
        }
        node_demand[static_cast<std::size_t>(dest_node)] += trips;
    }

    for (auto it = tree.order.rbegin(); it != tree.order.rend(); ++it) {
        const int v = *it;
        const double dem = node_demand[static_cast<std::size_t>(v)];
        if (dem <= 0)
            continue;
        const int arc = tree.pred_arc[static_cast<std::size_t>(v)];
        if (arc < 0)
            continue; // origin
        flows[static_cast<std::size_t>(arc)] += dem;
        node_demand[static_cast<std::size_t>(tree.pred_node[static_cast<std::size_t>(v)])] += dem;
    }
}

} // namespace

std::vector<double> all_or_nothing(const AssignGraph& g, const OdMatrix& od,
                                   std::span<const double> arc_times, int workers) {
    const int zones = od.zone_count();
    if (zones != g.zone_count())
        fail("od", "OD matrix zone count does not match the zone set");

    std::vector<int> active;
    for (int o = 0; o < zones; ++o)
        if (od.production(o) > 0)
            active.push_back(o);

    std::vector<std::vector<double>> per_origin(active.size());
    std::vector<std::string> errors(active.size());
    parallel_for(active.size(), workers, [&](std::size_t i) {
        per_origin[i].assign(static_cast<std::size_t>(g.arc_count()), 0.0);
        load_origin(g, od, arc_times, active[i], per_origin[i], &errors[i]);
    });

    for (const std::string& e : errors)
        if (!e.empty())
            fail("unreachable", e);

    // ordered reduction keeps results identical across worker counts
    std::vector<double> flows(static_cast<std::size_t>(g.arc_count()), 0.0);
    for (const auto& part : per_origin)
        for (std::size_t a = 0; a < flows.size(); ++a)
            flows[a] += part[a];
    return flows;
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

// Derivative of the Beckmann objective along direction d at step alpha.
double directional_derivative(const AssignGraph& g, const VdfParams& vdf,
                              std::span<const double> x, std::span<const double> d, double alpha) {
    double s = 0;
    for (int a = 0; a < g.arc_count(); ++a) {
        const auto i = static_cast<std::size_t>(a);
        if (d[i] == 0)
            continue;
        s += vdf_time(g.arc_fft(a), g.arc_capacity(a), x[i] + alpha * d[i], vdf) * d[i];
    }
    return s;
}

} // namespace

AssignmentResult user_equilibrium(const AssignGraph& g, const OdMatrix& od, const UeParams& p) {
    if (p.tolerance <= 0)
        fail("config", "relative-gap tolerance must be positive");
    if (p.max_iterations < 1)
        fail("config", "max iterations must be >= 1");

    const int arcs = g.arc_count();
    AssignmentResult result;

    std::vector<double> times = g.free_flow_times();
    std::vector<double> flows = all_or_nothing(g, od, times, p.workers);

    double best_gap = std::numeric_limits<double>::infinity();
    int iter = 0;
    double gap = 0;
    while (true) {
        ++iter;
        g.times_from_flows(flows, p.vdf, times);
        const std::vector<double> target = all_or_nothing(g, od, times, p.workers);

        const double tstt = dot(times, flows);
        const double sptt = dot(times, target);
        gap = tstt > 0 ? (tstt - sptt) / tstt : 0.0;
        best_gap = std::min(best_gap, gap);
        result.checkpoints.push_back({iter, best_gap});

        if (gap <= p.tolerance) {
            result.converged = true;
            break;
        }
        if (iter >= p.max_iterations)
            break;

        std::vector<double> direction(static_cast<std::size_t>(arcs));
        for (std::size_t a = 0; a < direction.size(); ++a)
            direction[a] = target[a] - flows[a];

        // g(0) = sptt - tstt < 0 here; bisect unless the full step descends.
        double alpha = 1.0;
        if (directional_derivative(g, p.vdf, flows, direction, 1.0) > 0) {
            double lo = 0.0, hi = 1.0;
            for (int i = 0; i < 48; ++i) {
                const double mid = 0.5 * (lo + hi);
                if (directional_derivative(g, p.vdf, flows, direction, mid) > 0)
                    hi = mid;
                else
                    lo = mid;
            }
            alpha = 0.5 * (lo + hi);
        }

        for (std::size_t a = 0; a < flows.size(); ++a)
            flows[a] = std::max(0.0, flows[a] + alpha * direction[a]);
    }

    g.times_from_flows(flows, p.vdf, times);
    const int real = g.real_link_count();
    result.flows.assign(flows.begin(), flows.begin() + real);
    result.times.assign(times.begin(), times.begin() + real);
    result.relative_gap = gap;
    result.iterations = iter;
    return result;
}

AssignmentResult user_equilibrium(const netbuild::RoadNetwork& net, const netbuild::ZoneSet& zones,
                                  const OdMatrix& od, const UeParams& p) {
    const AssignGraph g(net, zones, p.connector_time_s);
    return user_equilibrium(g, od, p);
}

NetworkStats network_stats(const AssignmentResult& result, const OdMatrix& od,
                           const netbuild::RoadNetwork& net) {
    const double total = od.total();
    if (total <= 0)
        fail("undefined-stats", "zero total demand, network statistics undefined");

    double len = 0, tt = 0;
    for (int li = 0; li < net.link_count(); ++li) {
        const auto i = static_cast<std::size_t>(li);
        len += result.flows[i] * net.link(li).length_m;
        tt += result.flows[i] * result.times[i];
    }
    return NetworkStats{len / total, tt / total, total};
}

void save_assignment(const AssignmentResult& result, const netbuild::RoadNetwork& net,
                     const std::string& path) {
    csv::Writer w(path);
    w.row({"link_id", "flow", "time_s"});
    for (int li = 0; li < net.link_count(); ++li) {
        const auto i = static_cast<std::size_t>(li);
        w.row({net.link(li).id, csv::format_double(result.flows[i]), csv::format_double(result.times[i])});
    }
    w.close();
}

AssignmentResult load_assignment(const netbuild::RoadNetwork& net, const std::string& path) {
    const csv::Table t = csv::read_table(path);
    const auto li = t.require("link_id");
    const auto fi = t.require("flow");
    const auto ti = t.require("time_s");

    AssignmentResult result;
    result.flows.assign(static_cast<std::size_t>(net.link_count()), 0.0);
    result.times.assign(static_cast<std::size_t>(net.link_count()), 0.0);
    for (const auto& r : t.rows) {
        const int idx = net.link_index(r.at(li, "link_id"));
        if (idx < 0)
            fail("schema", path + ": link '" + r.at(li, "link_id") + "' not in network");
        result.flows[static_cast<std::size_t>(idx)] = csv::parse_double(r.at(fi, "flow"), path);
        result.times[static_cast<std::size_t>(idx)] = csv::parse_double(r.at(ti, "time_s"), path);
    }
    for (int i = 0; i < net.link_count(); ++i)
        if (result.times[static_cast<std::size_t>(i)] <= 0)
            fail("schema", path + ": missing or nonpositive time for link '" + net.link(i).id + "'");
    result.converged = true;
    return result;
}

void save_stats(const NetworkStats& stats, const std::string& path) {
    csv::Writer w(path);
    w.row({"avg_trip_length_m", "avg_travel_time_s", "total_demand"});
    w.row({csv::format_double(stats.avg_trip_length_m), csv::format_double(stats.avg_travel_time_s),
           csv::format_double(stats.total_demand)});
    w.close();
}

NetworkStats load_stats(const std::string& path) {
    const csv::Table t = csv::read_table(path);
    const auto li = t.require("avg_trip_length_m");
    const auto ti = t.require("avg_travel_time_s");
    const auto di = t.require("total_demand");
    if (t.rows.size() != 1)
        fail("schema", path + ": expected exactly one stats row");
    const auto& r = t.rows[0];
    return NetworkStats{csv::parse_double(r.at(li, "avg_trip_length_m"), path),
                        csv::parse_double(r.at(ti, "avg_travel_time_s"), path),
                        csv::parse_double(r.at(di, "total_demand"), path)};
}

} // namespace roadpulse::assign
