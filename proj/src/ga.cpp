#include "roadpulse/estimate/ga.hpp"

#include "roadpulse/common/csv.hpp"
#include "roadpulse/common/error.hpp"
#include "roadpulse/common/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace roadpulse::estimate {

using assign::AssignGraph;
using assign::OdMatrix;
using assign::UeParams;

namespace {

constexpr double kWorstFitness = 1e30;

// Derived RNG streams: (seed, generation, purpose, index) -> independent
// engine, so parallel and serial evaluation orders agree exactly.
enum class Stream : std::uint64_t { Init = 1, Select = 2, Vary = 3 };

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
    h += 0x9e3779b97f4a7c15ULL + v;
    h ^= h >> 30;
    h *= 0xbf58476d1ce4e5b9ULL;
    h ^= h >> 27;
    h *= 0x94d049bb133111ebULL;
    h ^= h >> 31;
    return h;
}

std::mt19937_64 stream_rng(std::uint64_t seed, int generation, Stream purpose, int index) {
    std::uint64_t h = mix(seed, static_cast<std::uint64_t>(generation) + 1);
    h = mix(h, static_cast<std::uint64_t>(purpose));
    h = mix(h, static_cast<std::uint64_t>(index) + 1);
    return std::mt19937_64(h);
}

} // namespace

void GaConfig::validate() const {
    if (population < 4)
        fail("config", "GA population must be >= 4");
    if (elite < 0 || elite >= population)
        fail("config", "GA elite count must be in [0, population)");
    if (tournament < 1 || tournament > population)
        fail("config", "GA tournament size must be in [1, population]");
    if (crossover_rate < 0 || crossover_rate > 1 || mutation_rate < 0 || mutation_rate > 1)
        fail("config", "GA rates must be probabilities");
    if (mutation_scale <= 0)
        fail("config", "GA mutation scale must be positive");
    if (generations < 1 || stall_patience < 1)
        fail("config", "GA generations and stall patience must be >= 1");
    if (ue_tolerance <= 0 || ue_max_iterations < 1)
        fail("config", "GA equilibrium settings invalid");
}

OdMatrix decode(const Chromosome& chrom, const netbuild::ZoneSet& zones) {
    const int z = zones.zone_count();
    if (static_cast<int>(chrom.size()) != z * (z - 1))
        fail("od", "chromosome length does not match zone count");
    OdMatrix od(zones);
    std::size_t k = 0;
    for (int o = 0; o < z; ++o)
        for (int d = 0; d < z; ++d) {
            if (o == d)
                continue;
            od.set(o, d, chrom[k++]);
        }
    return od;
}

Chromosome encode(const OdMatrix& od) {
    const int z = od.zone_count();
    Chromosome chrom;
    chrom.reserve(static_cast<std::size_t>(z) * (z - 1));
    for (int o = 0; o < z; ++o)
        for (int d = 0; d < z; ++d)
            if (o != d)
                chrom.push_back(od.at(o, d));
    return chrom;
}

FitnessValue fitness(const Chromosome& chrom, const netbuild::RoadNetwork& net,
                     const netbuild::ZoneSet& zones, std::span<const ObservedLinkTime> observed,
                     const UeParams& ue) {
    if (observed.empty())
        fail("estimation", "no observed link times to fit");

    const OdMatrix od = decode(chrom, zones);
    assign::AssignmentResult result;
    try {
        result = user_equilibrium(net, zones, od, ue);
    } catch (const Error& e) {
        if (std::string(e.code()) == "unreachable")
            return FitnessValue{kWorstFitness, 0};
        throw;
    }

    double sq = 0;
    for (const ObservedLinkTime& o : observed) {
        const double fft = net.link(o.link_index).free_flow_s;
        const double r = (result.times[static_cast<std::size_t>(o.link_index)] - o.time_s) / fft;
        sq += r * r;
    }
    return FitnessValue{std::sqrt(sq / static_cast<double>(observed.size())), 0};
}

OdMatrix gravity_seed(const netbuild::RoadNetwork& net, const netbuild::ZoneSet& zones,
                      double total_demand, double connector_time_s) {
    const int z = zones.zone_count();
    const AssignGraph g(net, zones, connector_time_s);
    const std::vector<double> fft = g.free_flow_times();

    std::vector<double> weight(static_cast<std::size_t>(z), 0.0);
    for (int k = 0; k < z; ++k) {
        for (const std::string& link_id : zones.zones[static_cast<std::size_t>(k)].connectors)
            weight[static_cast<std::size_t>(k)] += net.link(net.link_index(link_id)).capacity_vph;
        if (weight[static_cast<std::size_t>(k)] <= 0)
            weight[static_cast<std::size_t>(k)] = 1.0;
    }

    OdMatrix od(zones);
    std::vector<std::vector<double>> impedance(static_cast<std::size_t>(z));
    for (int o = 0; o < z; ++o) {
        const assign::PathTree tree = shortest_path_tree(g, fft, o);
        impedance[static_cast<std::size_t>(o)].resize(static_cast<std::size_t>(z));
        for (int d = 0; d < z; ++d)
            impedance[static_cast<std::size_t>(o)][static_cast<std::size_t>(d)] =
                tree.dist[static_cast<std::size_t>(g.zone_node(d))];
    }

    double sum = 0;
    std::vector<double> cells(static_cast<std::size_t>(z) * static_cast<std::size_t>(z), 0.0);
    for (int o = 0; o < z; ++o)
        for (int d = 0; d < z; ++d) {
            if (o == d)
                continue;
            const double t = impedance[static_cast<std::size_t>(o)][static_cast<std::size_t>(d)];
            if (!std::isfinite(t) || t <= 0)
                continue;
            const double v = weight[static_cast<std::size_t>(o)] * weight[static_cast<std::size_t>(d)] / (t * t);
            cells[static_cast<std::size_t>(o) * static_cast<std::size_t>(z) + static_cast<std::size_t>(d)] = v;
            sum += v;
        }
    if (sum <= 0)
        fail("estimation", "gravity seed degenerate: no reachable zone pairs");

    for (int o = 0; o < z; ++o)
        for (int d = 0; d < z; ++d) {
            if (o == d)
                continue;
            const double v = cells[static_cast<std::size_t>(o) * static_cast<std::size_t>(z) +
                                   static_cast<std::size_t>(d)];
            od.set(o, d, total_demand * v / sum);
        }
    return od;
}

namespace {

struct Individual {
    Chromosome genes;
    FitnessValue fit;
    bool evaluated = false;
};

// Index of the tournament winner (lowest total, ties to lower index).
int tournament_pick(const std::vector<Individual>& pop, std::mt19937_64& rng, int k) {
    std::uniform_int_distribution<int> pick(0, static_cast<int>(pop.size()) - 1);
    int best = pick(rng);
    for (int i = 1; i < k; ++i) {
        const int c = pick(rng);
        if (pop[static_cast<std::size_t>(c)].fit.total() < pop[static_cast<std::size_t>(best)].fit.total() ||
            (pop[static_cast<std::size_t>(c)].fit.total() == pop[static_cast<std::size_t>(best)].fit.total() &&
             c < best))
            best = c;
    }
    return best;
}

} // namespace

EstimateResult estimate_od(const netbuild::RoadNetwork& net, const netbuild::ZoneSet& zones,
                           std::span<const ObservedLinkTime> observed, const GaConfig& config,
                           const assign::VdfParams& vdf) {
    config.validate();
    if (observed.empty())
        fail("estimation", "no observed link times to fit");

    UeParams ue;
    ue.vdf = vdf;
    ue.tolerance = config.ue_tolerance;
    ue.max_iterations = config.ue_max_iterations;
    ue.workers = 1; // parallelism lives at the chromosome level

    // Scale-calibrate the gravity seed: coarse log grid, then a golden-ratio
    // refinement between the best grid point's neighbours.
    const double unit = [&] {
        double cap = 0;
        for (const netbuild::Link& lk : net.links())
            cap += lk.capacity_vph;
        return cap / net.link_count();
    }();
    const OdMatrix shape = gravity_seed(net, zones, 1.0, ue.connector_time_s);
    const Chromosome shape_genes = encode(shape);

    auto rmse_at_total = [&](double total) {
        Chromosome c(shape_genes);
        for (double& v : c)
            v *= total;
        return fitness(c, net, zones, observed, ue).total();
    };

    double best_total_demand = unit;
    double best_rmse = std::numeric_limits<double>::infinity();
    std::vector<double> grid;
    for (int k = -4; k <= 10; ++k)
        grid.push_back(unit * std::pow(2.0, k));
    for (double t : grid) {
        const double r = rmse_at_total(t);
        if (r < best_rmse) {
            best_rmse = r;
            best_total_demand = t;
        }
    }
    {
        double lo = best_total_demand / 2.0, hi = best_total_demand * 2.0;
        for (int i = 0; i < 10; ++i) {
            const double m1 = lo + (hi - lo) / 3.0;
            const double m2 = hi - (hi - lo) / 3.0;
            if (rmse_at_total(m1) <= rmse_at_total(m2))
                hi = m2;
            else
                lo = m1;
        }
        const double mid = 0.5 * (lo + hi);
        if (rmse_at_total(mid) < best_rmse)
            best_total_demand = mid;
    }

    // Initial population: calibrated seed plus per-chromosome perturbations.
    const int P = config.population;
    std::vector<Individual> pop(static_cast<std::size_t>(P));
    for (int i = 0; i < P; ++i) {
        Chromosome c(shape_genes);
        if (i == 0) {
            for (double& v : c)
                v *= best_total_demand;
        } else {
            auto rng = stream_rng(config.seed, 0, Stream::Init, i);
            std::normal_distribution<double> gene_noise(0.0, config.mutation_scale);
            std::normal_distribution<double> scale_noise(0.0, 0.25);
            const double scale = best_total_demand * std::exp(scale_noise(rng));
            for (double& v : c)
                v *= scale * std::exp(gene_noise(rng));
        }
        pop[static_cast<std::size_t>(i)].genes = std::move(c);
    }

    EstimateResult result{OdMatrix(zones), FitnessValue{kWorstFitness, 0}, {}, 0};

    auto evaluate = [&](std::vector<Individual>& generation) {
        std::vector<int> todo;
        for (int i = 0; i < P; ++i)
            if (!generation[static_cast<std::size_t>(i)].evaluated)
                todo.push_back(i);
        parallel_for(todo.size(), config.workers, [&](std::size_t k) {
            Individual& ind = generation[static_cast<std::size_t>(todo[k])];
            ind.fit = fitness(ind.genes, net, zones, observed, ue);
            ind.evaluated = true;
        });
    };

    double last_best = std::numeric_limits<double>::infinity();
    int stall = 0;
    int generation = 0;
    for (;; ++generation) {
        evaluate(pop);

        std::vector<int> ranking(static_cast<std::size_t>(P));
        for (int i = 0; i < P; ++i)
            ranking[static_cast<std::size_t>(i)] = i;
        std::sort(ranking.begin(), ranking.end(), [&](int a, int b) {
            const double fa = pop[static_cast<std::size_t>(a)].fit.total();
            const double fb = pop[static_cast<std::size_t>(b)].fit.total();
            return fa != fb ? fa < fb : a < b;
        });

        const Individual& best = pop[static_cast<std::size_t>(ranking[0])];
        if (best.fit.total() >= kWorstFitness)
            fail("estimation", "no feasible chromosome: demand cannot be routed");

        double mean = 0;
        for (const Individual& ind : pop)
            mean += ind.fit.total();
        mean /= P;
        result.trace.push_back({generation, best.fit.total(), mean});
        result.generations_run = generation + 1;

        if (best.fit.total() < last_best - 1e-6) {
            last_best = best.fit.total();
            stall = 0;
        } else {
            ++stall;
        }

        const bool last = generation + 1 >= config.generations || stall >= config.stall_patience;
        if (last) {
            result.od = decode(best.genes, zones);
            result.best = best.fit;
            break;
        }

        // Next generation: elites survive unchanged, the rest is bred.
        std::vector<Individual> next(static_cast<std::size_t>(P));
        for (int e = 0; e < config.elite; ++e)
            next[static_cast<std::size_t>(e)] = pop[static_cast<std::size_t>(ranking[static_cast<std::size_t>(e)])];

        auto select_rng = stream_rng(config.seed, generation + 1, Stream::Select, 0);
        int filled = config.elite;
        int pair_index = 0;
        while (filled < P) {
            const int pa = tournament_pick(pop, select_rng, config.tournament);
            const int pb = tournament_pick(pop, select_rng, config.tournament);
            auto vary_rng = stream_rng(config.seed, generation + 1, Stream::Vary, pair_index++);

            Chromosome c1 = pop[static_cast<std::size_t>(pa)].genes;
            Chromosome c2 = pop[static_cast<std::size_t>(pb)].genes;
            std::uniform_real_distribution<double> blend(0.0, 1.0);
            if (blend(vary_rng) < config.crossover_rate) {
                for (std::size_t gidx = 0; gidx < c1.size(); ++gidx) {
                    const double lambda = blend(vary_rng);
                    const double a = c1[gidx], b = c2[gidx];
                    c1[gidx] = lambda * a + (1.0 - lambda) * b;
                    c2[gidx] = lambda * b + (1.0 - lambda) * a;
                }
            }
            std::normal_distribution<double> step(0.0, config.mutation_scale);
            for (Chromosome* c : {&c1, &c2}) {
                for (double& v : *c)
                    if (blend(vary_rng) < config.mutation_rate)
                        v *= std::exp(step(vary_rng));
            }
            next[static_cast<std::size_t>(filled)].genes = std::move(c1);
            next[static_cast<std::size_t>(filled)].evaluated = false;
            ++filled;
            if (filled < P) {
                next[static_cast<std::size_t>(filled)].genes = std::move(c2);
                next[static_cast<std::size_t>(filled)].evaluated = false;
                ++filled;
            }
        }
        pop = std::move(next);
    }

    return result;
}

void save_trace(std::span<const GaTraceRow> trace, const std::string& path) {
    csv::Writer w(path);
    w.row({"generation", "best_total", "mean_total"});
    for (const GaTraceRow& row : trace)
        w.row({std::to_string(row.generation), csv::format_double(row.best_total),
               csv::format_double(row.mean_total)});
    w.close();
}

} // namespace roadpulse::estimate
