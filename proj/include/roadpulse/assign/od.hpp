#pragma once

#include "roadpulse/netbuild/zones.hpp"

#include <string>
#include <vector>

namespace roadpulse::assign {

// Zone-to-zone demand in trips per analysis period. Entries are
// nonnegative, the diagonal is structurally zero.
class OdMatrix {
public:
    explicit OdMatrix(const netbuild::ZoneSet& zones);
    explicit OdMatrix(std::vector<std::string> zone_ids);

    int zone_count() const { return static_cast<int>(zone_ids_.size()); }
    const std::vector<std::string>& zone_ids() const { return zone_ids_; }

    double at(int origin, int dest) const {
        return demand_[static_cast<std::size_t>(origin) * zone_ids_.size() +
                       static_cast<std::size_t>(dest)];
    }
    void set(int origin, int dest, double trips);

    double total() const;
    double production(int origin) const; // row sum
    double attraction(int dest) const;   // column sum

private:
    std::vector<std::string> zone_ids_;
    std::vector<double> demand_;
};

OdMatrix load_od(const netbuild::ZoneSet& zones, const std::string& path);
void save_od(const OdMatrix& od, const std::string& path);

} // namespace roadpulse::assign
