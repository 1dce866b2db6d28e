#include "roadpulse/netbuild/linkmap.hpp"
#include "roadpulse/netbuild/osm.hpp"
#include "roadpulse/netbuild/zones.hpp"

#include <doctest.h>

#include "testutil.hpp"

using namespace roadpulse;
using namespace roadpulse::netbuild;

namespace {

std::string osm_doc(const std::string& body) {
    return "<?xml version='1.0' encoding='UTF-8'?>\n<osm version=\"0.6\">\n" + body + "</osm>\n";
}

const BBox kBox{29.9, 49.9, 30.3, 50.3};

// ~500 m apart at this latitude (0.00699 degrees of longitude).
const char* kTwoNodes = R"(
  <node id="1" lat="50.0" lon="30.0"/>
  <node id="2" lat="50.0" lon="30.006993"/>
)";

} // namespace

TEST_CASE("one-way primary way becomes a single directed link") {
    const std::string doc = osm_doc(std::string(kTwoNodes) + R"(
      <way id="10">
        <nd ref="1"/><nd ref="2"/>
        <tag k="highway" v="primary"/>
        <tag k="oneway" v="yes"/>
        <tag k="maxspeed" v="50"/>
      </way>
    )");
    const RoadNetwork net = parse_network_text(doc, kBox, NetworkMode::City);
    REQUIRE(net.link_count() == 1);
    const Link& lk = net.link(0);
    CHECK(lk.from == "1");
    CHECK(lk.to == "2");
    CHECK(lk.road_class == RoadClass::Primary);
    // 500 m at 50 km/h -> 36 s
    CHECK(lk.length_m == doctest::Approx(500.0).epsilon(0.001));
    CHECK(lk.free_flow_s == doctest::Approx(36.0).epsilon(0.001));
}

TEST_CASE("way without oneway tag becomes two directed links") {
    const std::string doc = osm_doc(std::string(kTwoNodes) + R"(
      <way id="10">
        <nd ref="1"/><nd ref="2"/>
        <tag k="highway" v="primary"/>
      </way>
    )");
    const RoadNetwork net = parse_network_text(doc, kBox, NetworkMode::City);
    CHECK(net.link_count() == 2);
    CHECK(net.link(0).from != net.link(1).from);
}

TEST_CASE("document with zero drivable ways in bbox is an empty-network error") {
    const std::string doc = osm_doc(std::string(kTwoNodes) + R"(
      <way id="10">
        <nd ref="1"/><nd ref="2"/>
        <tag k="highway" v="footway"/>
      </way>
    )");
    CHECK_THROWS_WITH_AS(parse_network_text(doc, kBox, NetworkMode::City),
                         doctest::Contains("no drivable ways"), Error);
}

TEST_CASE("malformed document raises a parse error") {
    CHECK_THROWS_AS(parse_network_text("<osm><node id=1/></osm>", kBox, NetworkMode::City), Error);
    CHECK_THROWS_AS(parse_network_text("<osm><node id=\"1\" lat=\"50\"", kBox, NetworkMode::City),
                    Error);
}

TEST_CASE("class defaults fill speed and capacity; lanes scale capacity") {
    const std::string doc = osm_doc(std::string(kTwoNodes) + R"(
      <way id="10">
        <nd ref="1"/><nd ref="2"/>
        <tag k="highway" v="secondary"/>
        <tag k="oneway" v="yes"/>
        <tag k="lanes" v="2"/>
      </way>
    )");
    const RoadNetwork net = parse_network_text(doc, kBox, NetworkMode::City);
    REQUIRE(net.link_count() == 1);
    // secondary default 50 km/h, 900 vph/lane x 2 lanes
    CHECK(net.link(0).free_flow_s == doctest::Approx(36.0).epsilon(0.001));
    CHECK(net.link(0).capacity_vph == doctest::Approx(1800.0));
}

TEST_CASE("ways split at junction nodes and largest component is kept") {
    // Two crossing ways sharing node 5, plus a detached two-node fragment.
    const std::string doc = osm_doc(R"(
      <node id="1" lat="50.00" lon="30.00"/>
      <node id="2" lat="50.00" lon="30.02"/>
      <node id="3" lat="50.01" lon="30.01"/>
      <node id="4" lat="49.99" lon="30.01"/>
      <node id="5" lat="50.00" lon="30.01"/>
      <node id="8" lat="50.2" lon="30.2"/>
      <node id="9" lat="50.2" lon="30.21"/>
      <way id="11">
        <nd ref="1"/><nd ref="5"/><nd ref="2"/>
        <tag k="highway" v="residential"/>
      </way>
      <way id="12">
        <nd ref="3"/><nd ref="5"/><nd ref="4"/>
        <tag k="highway" v="residential"/>
      </way>
      <way id="13">
        <nd ref="8"/><nd ref="9"/>
        <tag k="highway" v="residential"/>
      </way>
    )");
    ParseStats stats;
    const RoadNetwork net = parse_network_text(doc, kBox, NetworkMode::City, ClassTable{}, &stats);
    // each way splits at node 5 into 2 segments x 2 directions = 8 links
    CHECK(net.link_count() == 8);
    CHECK(net.node_count() == 5);
    CHECK(stats.components_dropped == 1);
    CHECK(stats.links_dropped == 2);
    CHECK(net.node_index("8") == -1);
}

TEST_CASE("highway mode keeps only major classes") {
    const std::string doc = osm_doc(std::string(kTwoNodes) + R"(
      <node id="3" lat="50.0" lon="30.014"/>
      <way id="10">
        <nd ref="1"/><nd ref="2"/>
        <tag k="highway" v="motorway"/>
        <tag k="oneway" v="yes"/>
      </way>
      <way id="11">
        <nd ref="2"/><nd ref="3"/>
        <tag k="highway" v="residential"/>
      </way>
      <way id="12">
        <nd ref="2"/><nd ref="1"/>
        <tag k="highway" v="trunk"/>
        <tag k="oneway" v="yes"/>
      </way>
    )");
    const RoadNetwork net = parse_network_text(doc, kBox, NetworkMode::Highway);
    CHECK(net.link_count() == 2);
    for (const Link& lk : net.links())
        CHECK(lk.road_class == RoadClass::Motorway);
}

TEST_CASE("re-parsing yields byte-identical serialized networks") {
    const std::string doc = osm_doc(R"(
      <node id="1" lat="50.00" lon="30.00"/>
      <node id="2" lat="50.00" lon="30.02"/>
      <node id="3" lat="50.01" lon="30.01"/>
      <node id="5" lat="50.00" lon="30.01"/>
      <way id="11"><nd ref="1"/><nd ref="5"/><nd ref="2"/><tag k="highway" v="primary"/></way>
      <way id="12"><nd ref="3"/><nd ref="5"/><tag k="highway" v="residential"/></way>
    )");
    testutil::TempDir tmp("reparse");
    for (int i = 0; i < 2; ++i) {
        const RoadNetwork net = parse_network_text(doc, kBox, NetworkMode::City);
        save_network(net, tmp.file("n" + std::to_string(i) + ".csv"),
                     tmp.file("l" + std::to_string(i) + ".csv"));
    }
    CHECK(testutil::read_file(tmp.file("n0.csv")) == testutil::read_file(tmp.file("n1.csv")));
    CHECK(testutil::read_file(tmp.file("l0.csv")) == testutil::read_file(tmp.file("l1.csv")));
}

TEST_CASE("network construction validates invariants") {
    std::vector<Node> nodes{{"1", 50, 30}, {"2", 50, 30.01}};
    SUBCASE("self loop") {
        std::vector<Link> links{{"a", "1", "1", 100, 10, 600, RoadClass::Primary}};
        CHECK_THROWS_AS(RoadNetwork(NetworkMode::City, nodes, links), Error);
    }
    SUBCASE("nonpositive length") {
        std::vector<Link> links{{"a", "1", "2", 0, 10, 600, RoadClass::Primary}};
        CHECK_THROWS_AS(RoadNetwork(NetworkMode::City, nodes, links), Error);
    }
    SUBCASE("unknown endpoint") {
        std::vector<Link> links{{"a", "1", "7", 100, 10, 600, RoadClass::Primary}};
        CHECK_THROWS_AS(RoadNetwork(NetworkMode::City, nodes, links), Error);
    }
    SUBCASE("duplicate ids") {
        std::vector<Link> links{{"a", "1", "2", 100, 10, 600, RoadClass::Primary},
                                {"a", "2", "1", 100, 10, 600, RoadClass::Primary}};
        CHECK_THROWS_AS(RoadNetwork(NetworkMode::City, nodes, links), Error);
    }
    SUBCASE("disconnected") {
        std::vector<Node> nodes4{{"1", 50, 30}, {"2", 50, 30.01}, {"3", 51, 30}, {"4", 51, 30.01}};
        std::vector<Link> links{{"a", "1", "2", 100, 10, 600, RoadClass::Primary},
                                {"b", "3", "4", 100, 10, 600, RoadClass::Primary}};
        CHECK_THROWS_AS(RoadNetwork(NetworkMode::City, nodes4, links), Error);
    }
}

TEST_CASE("network save/load round trip") {
    const RoadNetwork net = testutil::grid_network(3, 3);
    testutil::TempDir tmp("roundtrip");
    save_network(net, tmp.file("nodes.csv"), tmp.file("links.csv"));
    const RoadNetwork loaded = load_network(NetworkMode::City, tmp.file("nodes.csv"), tmp.file("links.csv"));
    CHECK(loaded.node_count() == net.node_count());
    CHECK(loaded.link_count() == net.link_count());
    CHECK(loaded.link(0).id == net.link(0).id);
    CHECK(loaded.link(0).free_flow_s == net.link(0).free_flow_s);
}

TEST_CASE("build_zones drops empty cells and centers centroids") {
    // 2x2 grid over 4 nodes near the 4 cell centers
    std::vector<Node> nodes{{"a", 50.025, 30.025}, {"b", 50.025, 30.075},
                            {"c", 50.075, 30.025}, {"d", 50.075, 30.075}};
    // extend the extent with links so the bbox is [50.0,50.1]x[30.0,30.1]
    nodes.push_back({"lo", 50.0, 30.0});
    nodes.push_back({"hi", 50.1, 30.1});
    std::vector<Link> links{
        {"1", "lo", "a", 100, 10, 600, RoadClass::Residential},
        {"2", "a", "lo", 100, 10, 600, RoadClass::Residential},
        {"3", "a", "b", 100, 10, 600, RoadClass::Residential},
        {"4", "b", "a", 100, 10, 600, RoadClass::Residential},
        {"5", "b", "c", 100, 10, 600, RoadClass::Residential},
        {"6", "c", "b", 100, 10, 600, RoadClass::Residential},
        {"7", "c", "d", 100, 10, 600, RoadClass::Residential},
        {"8", "d", "c", 100, 10, 600, RoadClass::Residential},
        {"9", "d", "hi", 100, 10, 600, RoadClass::Residential},
        {"10", "hi", "d", 100, 10, 600, RoadClass::Residential},
    };
    const RoadNetwork net(NetworkMode::City, nodes, links);

    const ZoneSet zs = build_zones(net, 2, 2);
    CHECK(zs.zone_count() == 4);
    for (const Zone& z : zs.zones) {
        CHECK(!z.connectors.empty());
        // centroid lies inside its own cell
        const BBox cell = zs.cell_bounds(z);
        const Node& c = net.node(net.node_index(z.centroid_node));
        CHECK(cell.contains(c.lat, c.lon));
    }

    SUBCASE("zone count bounded by grid size") {
        const ZoneSet z33 = build_zones(net, 3, 3);
        CHECK(z33.zone_count() <= 9);
        CHECK(z33.zone_count() >= 2);
    }

    SUBCASE("1x1 grid is a zoning error") {
        CHECK_THROWS_AS(build_zones(net, 1, 1), Error);
    }

    SUBCASE("zones save/load round trip") {
        testutil::TempDir tmp("zones");
        save_zones(zs, tmp.file("zones.csv"));
        const ZoneSet loaded = load_zones(net, tmp.file("zones.csv"));
        CHECK(loaded.zone_count() == zs.zone_count());
        CHECK(loaded.rows == zs.rows);
        CHECK(loaded.zones[0].connectors == zs.zones[0].connectors);
    }
}

TEST_CASE("build_zones with one empty quadrant keeps 3 zones") {
    std::vector<Node> nodes{{"a", 50.02, 30.02}, {"b", 50.02, 30.08}, {"c", 50.08, 30.02}};
    std::vector<Link> links{
        {"1", "a", "b", 100, 10, 600, RoadClass::Residential},
        {"2", "b", "a", 100, 10, 600, RoadClass::Residential},
        {"3", "a", "c", 100, 10, 600, RoadClass::Residential},
        {"4", "c", "a", 100, 10, 600, RoadClass::Residential},
    };
    const RoadNetwork net(NetworkMode::City, nodes, links);
    const ZoneSet zs = build_zones(net, 2, 2);
    CHECK(zs.zone_count() == 3);
}

TEST_CASE("segment map lookup and unmatched reporting") {
    testutil::TempDir tmp("segmap");
    testutil::write_file(tmp.file("map.csv"), "segment_key,link_id\nK1,a\nK2,b\nK1,a\n");
    SegmentMap sm = SegmentMap::load(tmp.file("map.csv"));
    CHECK(sm.lookup("K1") == std::string("a"));
    CHECK(!sm.lookup("nope"));
    CHECK(!sm.lookup("nope")); // deduplicated
    CHECK(sm.unmatched() == std::vector<std::string>{"nope"});

    sm.write_unmatched_report(tmp.file("unmatched.csv"));
    CHECK(testutil::read_file(tmp.file("unmatched.csv")) == "segment_key\nnope\n");

    SUBCASE("conflicting duplicate rows are a load error") {
        testutil::write_file(tmp.file("bad.csv"), "segment_key,link_id\nK1,a\nK1,b\n");
        CHECK_THROWS_AS(SegmentMap::load(tmp.file("bad.csv")), Error);
    }
}
