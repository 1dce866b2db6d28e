#pragma once

#include "roadpulse/assign/ue.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace roadpulse::estimate {

struct GaConfig {
    int population = 64;
    int generations = 300;
    int elite = 2;
    int tournament = 4;
    double crossover_rate = 0.9;
    double mutation_rate = 0.2;
    double mutation_scale = 0.3; // std of the log-normal multiplicative step
    std::uint64_t seed = 1;
    int stall_patience = 40; // generations without >=1e-6 best improvement

    // effort spent on each embedded equilibrium run
    double ue_tolerance = 1e-3;
    int ue_max_iterations = 80;
    int workers = 1;

    void validate() const;
};

struct FitnessValue {
    double rmse = 0;
    double penalty = 0; // reserved for bound violations; decoding prevents them
    double total() const { return rmse + penalty; }
};

// One off-diagonal OD cell per gene, row-major with the diagonal skipped.
using Chromosome = std::vector<double>;

assign::OdMatrix decode(const Chromosome& chrom, const netbuild::ZoneSet& zones);
Chromosome encode(const assign::OdMatrix& od);

struct ObservedLinkTime {
    int link_index;
    double time_s;
};

// Root-mean-square of (assigned - observed) / free-flow over the observed
// links, after assigning the decoded matrix to equilibrium. Chromosomes
// whose demand cannot be routed get worst fitness instead of an error.
FitnessValue fitness(const Chromosome& chrom, const netbuild::RoadNetwork& net,
                     const netbuild::ZoneSet& zones, std::span<const ObservedLinkTime> observed,
                     const assign::UeParams& ue);

// Gravity-model matrix: productions and attractions proportional to zone
// connector capacity, deterrence inverse-square in zone-to-zone free-flow
// time, scaled to the given total demand.
assign::OdMatrix gravity_seed(const netbuild::RoadNetwork& net, const netbuild::ZoneSet& zones,
                              double total_demand, double connector_time_s = 10.0);

struct GaTraceRow {
    int generation;
    double best_total;
    double mean_total;
};

struct EstimateResult {
    assign::OdMatrix od;
    FitnessValue best;
    std::vector<GaTraceRow> trace;
    int generations_run = 0;
};

// Genetic search over demand matrices: tournament selection, arithmetic
// blend crossover, multiplicative log-normal mutation, elitism. The initial
// population is a scale-calibrated gravity seed perturbed per chromosome.
// Fully reproducible from the seed; fitness evaluation parallelizes across
// the generation without changing results.
EstimateResult estimate_od(const netbuild::RoadNetwork& net, const netbuild::ZoneSet& zones,
                           std::span<const ObservedLinkTime> observed, const GaConfig& config,
                           const assign::VdfParams& vdf = {});

void save_trace(std::span<const GaTraceRow> trace, const std::string& path);

} // namespace roadpulse::estimate
