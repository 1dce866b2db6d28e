#include "roadpulse/assign/vdf.hpp"

#include "roadpulse/common/error.hpp"

#include <cmath>

namespace roadpulse::assign {

double vdf_time(double free_flow_s, double capacity_vph, double flow_vph, const VdfParams& p) {
    if (capacity_vph <= 0)
        fail("numeric", "volume-delay function needs positive capacity");
    if (p.alpha == 0 || flow_vph == 0)
        return free_flow_s;
    return free_flow_s * (1.0 + p.alpha * std::pow(flow_vph / capacity_vph, p.beta));
}

double vdf_integral(double free_flow_s, double capacity_vph, double flow_vph, const VdfParams& p) {
    if (capacity_vph <= 0)
        fail("numeric", "volume-delay function needs positive capacity");
    if (p.alpha == 0 || flow_vph == 0)
        return free_flow_s * flow_vph;
    return free_flow_s *
           (flow_vph + p.alpha / (p.beta + 1.0) * flow_vph * std::pow(flow_vph / capacity_vph, p.beta));
}

} // namespace roadpulse::assign
