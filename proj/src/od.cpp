#include "roadpulse/assign/od.hpp"

#include "roadpulse/common/csv.hpp"
#include "roadpulse/common/error.hpp"

#include <cmath>

namespace roadpulse::assign {

static std::vector<std::string> ids_of(const netbuild::ZoneSet& zones) {
    std::vector<std::string> ids;
    ids.reserve(zones.zones.size());
    for (const auto& z : zones.zones)
        ids.push_back(z.id);
    return ids;
}

OdMatrix::OdMatrix(const netbuild::ZoneSet& zones) : OdMatrix(ids_of(zones)) {}

OdMatrix::OdMatrix(std::vector<std::string> zone_ids) : zone_ids_(std::move(zone_ids)) {
    if (zone_ids_.size() < 2)
        fail("od", "an OD matrix needs at least 2 zones");
    demand_.assign(zone_ids_.size() * zone_ids_.size(), 0.0);
}

void OdMatrix::set(int origin, int dest, double trips) {
    if (trips < 0 || !std::isfinite(trips))
        fail("od", "demand must be finite and nonnegative");
    if (origin == dest) {
        if (trips > 0)
            fail("od", "diagonal demand must be zero (zone " + zone_ids_[static_cast<std::size_t>(origin)] + ")");
        return;
    }
    demand_[static_cast<std::size_t>(origin) * zone_ids_.size() + static_cast<std::size_t>(dest)] = trips;
}

double OdMatrix::total() const {
    double s = 0;
    for (double v : demand_)
        s += v;
    return s;
}

double OdMatrix::production(int origin) const {
    double s = 0;
    for (int d = 0; d < zone_count(); ++d)
        s += at(origin, d);
    return s;
}

double OdMatrix::attraction(int dest) const {
    double s = 0;
    for (int o = 0; o < zone_count(); ++o)
        s += at(o, dest);
    return s;
}

OdMatrix load_od(const netbuild::ZoneSet& zones, const std::string& path) {
    const csv::Table t = csv::read_table(path);
    const auto oi = t.require("origin_zone");
    const auto di = t.require("dest_zone");
    const auto ti = t.require("trips");

    OdMatrix od(zones);
    for (const auto& r : t.rows) {
        const int o = zones.zone_index(r.at(oi, "origin_zone"));
        const int d = zones.zone_index(r.at(di, "dest_zone"));
        if (o < 0 || d < 0)
            fail("od", path + ": unknown zone in row ('" + r.at(oi, "origin_zone") + "','" +
                           r.at(di, "dest_zone") + "')");
        od.set(o, d, csv::parse_double(r.at(ti, "trips"), path));
    }
    return od;
}

void save_od(const OdMatrix& od, const std::string& path) {
    csv::Writer w(path);
    w.row({"origin_zone", "dest_zone", "trips"});
    for (int o = 0; o < od.zone_count(); ++o)
        for (int d = 0; d < od.zone_count(); ++d)
            if (od.at(o, d) > 0)
                w.row({od.zone_ids()[static_cast<std::size_t>(o)],
                       od.zone_ids()[static_cast<std::size_t>(d)], csv::format_double(od.at(o, d))});
    w.close();
}

} // namespace roadpulse::assign
