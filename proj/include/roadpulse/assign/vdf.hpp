#pragma once

#include "roadpulse/netbuild/network.hpp"

namespace roadpulse::assign {

// BPR-form volume-delay parameters.
struct VdfParams {
    double alpha = 0.15;
    double beta = 4.0;
};

// Congested travel time: fft * (1 + alpha * (flow/capacity)^beta).
double vdf_time(double free_flow_s, double capacity_vph, double flow_vph, const VdfParams& p);

inline double vdf_time(const netbuild::Link& link, double flow_vph, const VdfParams& p) {
    return vdf_time(link.free_flow_s, link.capacity_vph, flow_vph, p);
}

// Integral of vdf_time from 0 to flow (one term of the Beckmann objective).
double vdf_integral(double free_flow_s, double capacity_vph, double flow_vph, const VdfParams& p);

} // namespace roadpulse::assign
