#include "roadpulse/assign/ue.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

#include "oracles.hpp"
#include "testutil.hpp"

using namespace roadpulse;
using namespace roadpulse::assign;

TEST_CASE("vdf basics") {
    const VdfParams p{0.15, 4.0};
    CHECK(vdf_time(100.0, 1000.0, 0.0, p) == 100.0);
    CHECK(vdf_time(100.0, 1000.0, 1000.0, p) == doctest::Approx(115.0).epsilon(1e-12));
    CHECK(vdf_time(100.0, 1000.0, 5000.0, VdfParams{0.0, 4.0}) == 100.0);

    SUBCASE("monotone in flow") {
        double prev = 0;
        for (double f = 0; f <= 3000; f += 100) {
            const double t = vdf_time(100.0, 1000.0, f, p);
            CHECK(t >= prev);
            prev = t;
        }
    }

    SUBCASE("integral differentiates back to the time function") {
        // central differences on the Beckmann term
        for (double f : {100.0, 900.0, 2500.0}) {
            const double h = 1e-3;
            const double d = (vdf_integral(100.0, 1000.0, f + h, p) -
                              vdf_integral(100.0, 1000.0, f - h, p)) /
                             (2 * h);
            CHECK(d == doctest::Approx(vdf_time(100.0, 1000.0, f, p)).epsilon(1e-8));
        }
    }

    SUBCASE("zero capacity is a numeric error") {
        CHECK_THROWS_AS(vdf_time(100.0, 0.0, 10.0, p), Error);
    }
}

TEST_CASE("shortest path tree basics and tie-break") {
    // diamond: 1 -> {2,3} -> 4 with equal costs; predecessor of 4 must be
    // the smaller node id 2
    std::vector<testutil::Node> nodes{{"1", 50, 30}, {"2", 50.01, 30}, {"3", 50, 30.01}, {"4", 50.01, 30.01}};
    std::vector<testutil::Link> links{
        {"a", "1", "2", 100, 10, 600, testutil::RoadClass::Primary},
        {"b", "1", "3", 100, 10, 600, testutil::RoadClass::Primary},
        {"c", "2", "4", 100, 10, 600, testutil::RoadClass::Primary},
        {"d", "3", "4", 100, 10, 600, testutil::RoadClass::Primary},
        {"e", "4", "1", 100, 10, 600, testutil::RoadClass::Primary},
    };
    const testutil::RoadNetwork net(testutil::NetworkMode::City, nodes, links);
    netbuild::ZoneSet zs;
    zs.bbox = net.bbox();
    zs.rows = 1;
    zs.cols = 2;
    zs.zones = {{"Z0_0", "1", 0, 0, {"a", "b"}}, {"Z0_1", "4", 0, 1, {"e"}}};

    const AssignGraph g(net, zs, 10.0);
    const auto times = g.free_flow_times();
    const auto tree = shortest_path_tree(g, times, 0);

    const int n4 = net.node_index("4");
    CHECK(tree.dist[static_cast<std::size_t>(n4)] == doctest::Approx(30.0)); // 10 connector + 10 + 10
    CHECK(tree.pred_node[static_cast<std::size_t>(n4)] == net.node_index("2"));
    // zone 1 reachable through its connector
    CHECK(tree.dist[static_cast<std::size_t>(g.zone_node(1))] == doctest::Approx(40.0));
}

TEST_CASE("single-link path cost equals that link's time") {
    const auto net = testutil::parallel_network(600, 100, 600, 200);
    const auto zs = testutil::two_zone_set(net);
    const AssignGraph g(net, zs, 10.0);
    std::vector<double> times = g.free_flow_times();
    times[0] = 300; // make link a cheaper
    const auto tree = shortest_path_tree(g, times, 0);
    CHECK(tree.dist[static_cast<std::size_t>(g.zone_node(1))] == doctest::Approx(300 + 20));
}

TEST_CASE("all-or-nothing loads full demand on least-cost paths") {
    const auto net = testutil::parallel_network(600, 100, 650, 200);
    const auto zs = testutil::two_zone_set(net);
    const AssignGraph g(net, zs, 10.0);

    OdMatrix od(zs);
    od.set(0, 1, 100);

    const auto flows = all_or_nothing(g, od, g.free_flow_times());
    CHECK(flows[static_cast<std::size_t>(net.link_index("a"))] == 100.0); // cheaper link
    CHECK(flows[static_cast<std::size_t>(net.link_index("b"))] == 0.0);

    SUBCASE("zero matrix loads nothing") {
        const OdMatrix zero(zs);
        for (double f : all_or_nothing(g, zero, g.free_flow_times()))
            CHECK(f == 0.0);
    }
}

TEST_CASE("flows from two pairs superpose on shared links") {
    // chain 1 -> 2 -> 3; pairs (1->3) and (2->3) share link m2
    std::vector<testutil::Node> nodes{{"1", 50, 30}, {"2", 50, 30.01}, {"3", 50, 30.02}};
    std::vector<testutil::Link> links{
        {"m1", "1", "2", 500, 40, 600, testutil::RoadClass::Primary},
        {"m2", "2", "3", 500, 40, 600, testutil::RoadClass::Primary},
        {"r1", "2", "1", 500, 40, 600, testutil::RoadClass::Primary},
        {"r2", "3", "2", 500, 40, 600, testutil::RoadClass::Primary},
    };
    const testutil::RoadNetwork net(testutil::NetworkMode::City, nodes, links);
    netbuild::ZoneSet zs;
    zs.bbox = net.bbox();
    zs.rows = 1;
    zs.cols = 3;
    zs.zones = {{"Z0_0", "1", 0, 0, {"m1"}}, {"Z0_1", "2", 0, 1, {"m2"}}, {"Z0_2", "3", 0, 2, {"r2"}}};
    const AssignGraph g(net, zs, 10.0);

    OdMatrix od(zs);
    od.set(0, 2, 70);
    od.set(1, 2, 30);
    const auto flows = all_or_nothing(g, od, g.free_flow_times());
    CHECK(flows[static_cast<std::size_t>(net.link_index("m1"))] == 70.0);
    CHECK(flows[static_cast<std::size_t>(net.link_index("m2"))] == 100.0);

    SUBCASE("flow conservation holds at the pass-through node") {
        // node 2: inflow m1 (70) + connector from zone 1 (30) = outflow m2 (100)
        CHECK(flows[static_cast<std::size_t>(net.link_index("m1"))] + 30.0 ==
              flows[static_cast<std::size_t>(net.link_index("m2"))]);
    }
}

TEST_CASE("unreachable positive demand raises") {
    // one-way chain: 3 cannot reach 1
    std::vector<testutil::Node> nodes{{"1", 50, 30}, {"2", 50, 30.01}, {"3", 50, 30.02}};
    std::vector<testutil::Link> links{
        {"m1", "1", "2", 500, 40, 600, testutil::RoadClass::Primary},
        {"m2", "2", "3", 500, 40, 600, testutil::RoadClass::Primary},
    };
    const testutil::RoadNetwork net(testutil::NetworkMode::City, nodes, links);
    netbuild::ZoneSet zs;
    zs.bbox = net.bbox();
    zs.rows = 1;
    zs.cols = 2;
    zs.zones = {{"Z0_0", "1", 0, 0, {"m1"}}, {"Z0_1", "3", 0, 1, {"m2"}}};
    const AssignGraph g(net, zs, 10.0);

    OdMatrix od(zs);
    od.set(1, 0, 10);
    CHECK_THROWS_WITH_AS(all_or_nothing(g, od, g.free_flow_times()),
                         doctest::Contains("cannot reach"), Error);
}

TEST_CASE("user equilibrium splits two identical links evenly") {
    const auto net = testutil::parallel_network(600, 150, 600, 150);
    const auto zs = testutil::two_zone_set(net);
    OdMatrix od(zs);
    od.set(0, 1, 120);

    UeParams p;
    const auto result = user_equilibrium(net, zs, od, p);
    CHECK(result.converged);
    CHECK(result.flows[static_cast<std::size_t>(net.link_index("a"))] ==
          doctest::Approx(60.0).epsilon(0.005));
    CHECK(result.flows[static_cast<std::size_t>(net.link_index("b"))] ==
          doctest::Approx(60.0).epsilon(0.005));
}

TEST_CASE("user equilibrium matches the closed-form two-link instance") {
    const auto net = testutil::parallel_network(600, 100, 600, 200);
    const auto zs = testutil::two_zone_set(net);
    OdMatrix od(zs);
    od.set(0, 1, 150);

    UeParams p;
    p.tolerance = 1e-6;
    const auto result = user_equilibrium(net, zs, od, p);
    REQUIRE(result.converged);

    const double fa = result.flows[static_cast<std::size_t>(net.link_index("a"))];
    const double fb = result.flows[static_cast<std::size_t>(net.link_index("b"))];
    CHECK(fa == doctest::Approx(50.0).epsilon(0.005));
    CHECK(fb == doctest::Approx(100.0).epsilon(0.005));

    const double ta = result.times[static_cast<std::size_t>(net.link_index("a"))];
    const double tb = result.times[static_cast<std::size_t>(net.link_index("b"))];
    CHECK(ta == doctest::Approx(605.625).epsilon(1e-4));
    CHECK(std::abs(ta - tb) <= 1e-3 * ta);
}

TEST_CASE("single-path network converges immediately") {
    std::vector<testutil::Node> nodes{{"1", 50, 30}, {"2", 50, 30.01}};
    std::vector<testutil::Link> links{
        {"m", "1", "2", 500, 40, 600, testutil::RoadClass::Primary},
        {"r", "2", "1", 500, 40, 600, testutil::RoadClass::Primary},
    };
    const testutil::RoadNetwork net(testutil::NetworkMode::City, nodes, links);
    netbuild::ZoneSet zs;
    zs.bbox = net.bbox();
    zs.rows = 1;
    zs.cols = 2;
    zs.zones = {{"Z0_0", "1", 0, 0, {"m"}}, {"Z0_1", "2", 0, 1, {"r"}}};

    OdMatrix od(zs);
    od.set(0, 1, 300);
    const auto result = user_equilibrium(net, zs, od, UeParams{});
    CHECK(result.converged);
    CHECK(result.iterations == 1);
    CHECK(result.relative_gap == 0.0);
    CHECK(result.flows[static_cast<std::size_t>(net.link_index("m"))] == 300.0);
}

TEST_CASE("solver flows match the bisection oracle on random parallel instances") {
    std::mt19937_64 rng(23);
    std::uniform_int_distribution<int> n_links(2, 3);
    std::uniform_real_distribution<double> fft(300, 900);
    std::uniform_real_distribution<double> cap(80, 400);
    std::uniform_real_distribution<double> dem(50, 400);

    for (int trial = 0; trial < 20; ++trial) {
        const int k = n_links(rng);
        std::vector<testutil::Node> nodes{{"1", 50, 30}, {"2", 50, 30.01}};
        std::vector<testutil::Link> links;
        std::vector<oracles::ParallelLink> oracle_links;
        for (int i = 0; i < k; ++i) {
            const double f = fft(rng);
            const double c = cap(rng);
            links.push_back({"p" + std::to_string(i), "1", "2", 1000, f, c,
                             testutil::RoadClass::Primary});
            oracle_links.push_back({f, c});
        }
        links.push_back({"back", "2", "1", 1000, 600, 300, testutil::RoadClass::Primary});
        const testutil::RoadNetwork net(testutil::NetworkMode::City, nodes, links);
        netbuild::ZoneSet zs;
        zs.bbox = net.bbox();
        zs.rows = 1;
        zs.cols = 2;
        zs.zones = {{"Z0_0", "1", 0, 0, {"p0"}}, {"Z0_1", "2", 0, 1, {"back"}}};

        OdMatrix od(zs);
        const double demand = dem(rng);
        od.set(0, 1, demand);

        UeParams p;
        p.tolerance = 1e-6;
        p.max_iterations = 20000;
        const auto result = user_equilibrium(net, zs, od, p);
        REQUIRE(result.converged);

        const auto expect = oracles::parallel_ue_oracle(oracle_links, demand, p.vdf.alpha, p.vdf.beta);
        for (int i = 0; i < k; ++i) {
            const double got = result.flows[static_cast<std::size_t>(
                net.link_index("p" + std::to_string(i)))];
            CHECK(std::abs(got - expect[static_cast<std::size_t>(i)]) <= 0.005 * demand);
        }
    }
}

TEST_CASE("gap checkpoints are non-increasing") {
    const auto net = testutil::grid_network(5, 5, 300.0);
    const auto zones = netbuild::build_zones(net, 2, 2);
    OdMatrix od(zones);
    for (int o = 0; o < od.zone_count(); ++o)
        for (int d = 0; d < od.zone_count(); ++d)
            if (o != d)
                od.set(o, d, 150.0);

    UeParams p;
    p.tolerance = 1e-6;
    p.max_iterations = 300;
    const auto result = user_equilibrium(net, zones, od, p);
    REQUIRE(result.checkpoints.size() >= 2);
    for (std::size_t i = 1; i < result.checkpoints.size(); ++i)
        CHECK(result.checkpoints[i].gap <= result.checkpoints[i - 1].gap);
}

TEST_CASE("flow conservation at non-centroid nodes") {
    const auto net = testutil::grid_network(4, 4, 400.0);
    const auto zones = netbuild::build_zones(net, 2, 2);
    OdMatrix od(zones);
    od.set(0, 3, 500);
    od.set(3, 0, 200);
    od.set(1, 2, 100);

    const auto result = user_equilibrium(net, zones, od, UeParams{});

    std::set<std::string> centroids;
    for (const auto& z : zones.zones)
        centroids.insert(z.centroid_node);
    for (int ni = 0; ni < net.node_count(); ++ni) {
        if (centroids.count(net.node(ni).id))
            continue;
        double in = 0, out = 0;
        for (int li : net.links_in(ni))
            in += result.flows[static_cast<std::size_t>(li)];
        for (int li : net.links_out(ni))
            out += result.flows[static_cast<std::size_t>(li)];
        CHECK(in == doctest::Approx(out).epsilon(1e-6));
    }
}

TEST_CASE("determinism: identical runs produce identical flows") {
    const auto net = testutil::grid_network(4, 4, 350.0);
    const auto zones = netbuild::build_zones(net, 2, 2);
    OdMatrix od(zones);
    od.set(0, 3, 321.5);
    od.set(2, 1, 87.25);

    UeParams p1;
    p1.workers = 1;
    UeParams p4;
    p4.workers = 4;
    const auto r1 = user_equilibrium(net, zones, od, p1);
    const auto r2 = user_equilibrium(net, zones, od, p1);
    const auto r4 = user_equilibrium(net, zones, od, p4);
    CHECK(r1.flows == r2.flows);
    CHECK(r1.flows == r4.flows); // worker count must not change results
    CHECK(r1.times == r4.times);
}

TEST_CASE("network stats formulas") {
    // one pair, demand 10, single 2 km path taking 300 s
    std::vector<testutil::Node> nodes{{"1", 50, 30}, {"2", 50, 30.02}};
    std::vector<testutil::Link> links{
        {"m", "1", "2", 2000, 300, 10000, testutil::RoadClass::Primary},
        {"r", "2", "1", 2000, 300, 10000, testutil::RoadClass::Primary},
    };
    const testutil::RoadNetwork net(testutil::NetworkMode::City, nodes, links);
    netbuild::ZoneSet zs;
    zs.bbox = net.bbox();
    zs.rows = 1;
    zs.cols = 2;
    zs.zones = {{"Z0_0", "1", 0, 0, {"m"}}, {"Z0_1", "2", 0, 1, {"r"}}};
    OdMatrix od(zs);
    od.set(0, 1, 10);

    UeParams p;
    p.vdf.alpha = 0; // keep free-flow times exactly
    const auto result = user_equilibrium(net, zs, od, p);
    const auto stats = network_stats(result, od, net);
    CHECK(stats.avg_trip_length_m == doctest::Approx(2000.0));
    CHECK(stats.avg_travel_time_s == doctest::Approx(300.0));
    CHECK(stats.total_demand == 10.0);

    SUBCASE("doubling demand under alpha 0 doubles total, keeps averages") {
        OdMatrix od2(zs);
        od2.set(0, 1, 20);
        const auto r2 = user_equilibrium(net, zs, od2, p);
        const auto s2 = network_stats(r2, od2, net);
        CHECK(s2.total_demand == 20.0);
        CHECK(s2.avg_trip_length_m == doctest::Approx(stats.avg_trip_length_m));
        CHECK(s2.avg_travel_time_s == doctest::Approx(stats.avg_travel_time_s));
    }

    SUBCASE("zero matrix has undefined stats") {
        const OdMatrix zero(zs);
        const auto rz = user_equilibrium(net, zs, zero, p);
        CHECK_THROWS_AS(network_stats(rz, zero, net), Error);
    }
}

TEST_CASE("assignment and stats files round trip") {
    const auto net = testutil::parallel_network(600, 100, 600, 200);
    const auto zs = testutil::two_zone_set(net);
    OdMatrix od(zs);
    od.set(0, 1, 150);
    const auto result = user_equilibrium(net, zs, od, UeParams{});

    testutil::TempDir tmp("assign_io");
    save_assignment(result, net, tmp.file("a.csv"));
    const auto loaded = load_assignment(net, tmp.file("a.csv"));
    CHECK(loaded.flows == result.flows);
    CHECK(loaded.times == result.times);

    const auto stats = network_stats(result, od, net);
    save_stats(stats, tmp.file("s.csv"));
    const auto sl = load_stats(tmp.file("s.csv"));
    CHECK(sl.total_demand == stats.total_demand);
    CHECK(sl.avg_trip_length_m == stats.avg_trip_length_m);
}

TEST_CASE("od matrix io and validation") {
    const auto net = testutil::grid_network(2, 2);
    const auto zones = netbuild::build_zones(net, 2, 2);
    OdMatrix od(zones);
    od.set(0, 1, 12.5);
    od.set(1, 0, 3.25);

    testutil::TempDir tmp("od_io");
    save_od(od, tmp.file("od.csv"));
    const auto loaded = load_od(zones, tmp.file("od.csv"));
    CHECK(loaded.total() == od.total());
    CHECK(loaded.at(0, 1) == 12.5);

    SUBCASE("negative and diagonal demand rejected") {
        CHECK_THROWS_AS(od.set(0, 1, -1), Error);
        CHECK_THROWS_AS(od.set(1, 1, 5), Error);
        testutil::write_file(tmp.file("bad.csv"), "origin_zone,dest_zone,trips\nZ9_9,Z0_0,5\n");
        CHECK_THROWS_AS(load_od(zones, tmp.file("bad.csv")), Error);
    }
}
