#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "urbanet/fixtures.hpp"
#include "urbanet/ingest.hpp"

using namespace urbanet;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::string kDataDir = URBANET_TEST_DATA;

void expect_same_network(const Network& a, const Network& b) {
  ASSERT_EQ(a.node_count(), b.node_count());
  for (std::uint32_t v = 0; v < a.node_count(); ++v) {
    EXPECT_EQ(a.position(NodeId(v)).lat, b.position(NodeId(v)).lat);
    EXPECT_EQ(a.position(NodeId(v)).lon, b.position(NodeId(v)).lon);
  }
  EXPECT_EQ(a.edges(), b.edges());
}

std::string way(const std::string& extra) {
  return R"(<osm><node id="1" lat="0" lon="0"/><node id="2" lat="0" lon="0.001"/>)"
         R"(<node id="3" lat="0" lon="0.002"/><way id="9"><nd ref="1"/><nd ref="2"/><nd ref="3"/>)"
         R"(<tag k="highway" v="residential"/>)" +
         extra + "</way></osm>";
}

}  // namespace

TEST(Netgeo, TwoNodeExample) {
  const auto parsed = parse_netgeo_text("N 0 0.0 0.0\nN 1 0.0 0.001\nE 0 1\nE 1 0\n");
  EXPECT_EQ(parsed.net.node_count(), 2u);
  EXPECT_EQ(parsed.net.edge_count(), 2u);
  // Haversine oracle, 0.001 degrees of longitude on the equator.
  EXPECT_NEAR(*parsed.net.edge_weight(NodeId(0), NodeId(1)), 111.31709969219834, 111.3 * 1e-3);
  EXPECT_FALSE(parsed.pois);
}

TEST(Netgeo, PoisAndExternalIds) {
  const auto parsed = parse_netgeo_text("# city\nN 40 1 1\nN 7 1 1.001  # trailing\nE 40 7 12.5\nP 7 hospital_a\n");
  ASSERT_TRUE(parsed.pois);
  ASSERT_EQ(parsed.pois->size(), 1u);
  EXPECT_EQ((*parsed.pois)[0].node, NodeId(1));
  EXPECT_EQ((*parsed.pois)[0].label, "hospital_a");
  EXPECT_EQ(parsed.net.node(NodeId(0)).external_ref, "40");
  EXPECT_EQ(*parsed.net.edge_weight(NodeId(0), NodeId(1)), 12.5);
}

TEST(Netgeo, ErrorsCarryLineNumbers) {
  auto line_of = [](const std::string& text) -> std::size_t {
    try {
      parse_netgeo_text(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 999;
  };
  EXPECT_EQ(line_of("N 0 0 0\nN 1 0 x\n"), 2u);
  EXPECT_EQ(line_of("N 0 0 0\nN 0 0 1\n"), 2u);            // duplicate id
  EXPECT_EQ(line_of("N 0 0 0\n\nE 0 5\n"), 3u);            // unknown node
  EXPECT_EQ(line_of("N 0 0 0\nQ 1 2\n"), 2u);              // unknown record
  EXPECT_EQ(line_of("N 0 0 0\nN 1 0 1\nE 0 1 -3\n"), 3u);  // negative weight
  EXPECT_EQ(line_of("N 0 0 0\nN 1 0 1\nP 0 a\nP 1 a\n"), 4u);  // duplicate label
  EXPECT_THROW(parse_netgeo_text("N 0 0 0\nP 0 a\nP 0 b\n"), DuplicatePoiError);
  EXPECT_EQ(line_of("N 0 95 0\n"), 1u);
  try {
    parse_netgeo_text("# nothing here\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("no nodes"), std::string::npos);
  }
}

TEST(Netgeo, RoundTripIsIdentical) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto inst = fixtures::random_instance(seed);
    std::stringstream ss;
    write_netgeo(ss, inst.net, &inst.pois);
    const auto back = parse_netgeo(ss);
    expect_same_network(inst.net, back.net);
    ASSERT_TRUE(back.pois);
    EXPECT_EQ(back.pois->nodes(), inst.pois.nodes());
  }
  const auto data = read_file(kDataDir + "/three_node.netgeo");
  const auto parsed = parse_netgeo_text(data);
  expect_same_network(parsed.net, fixtures::three_node().net);
}

TEST(Osm, ThreeNodeWay) {
  EXPECT_EQ(parse_osm_xml_text(way("")).net.edge_count(), 4u);
  const auto one_way = parse_osm_xml_text(way(R"(<tag k="oneway" v="yes"/>)")).net;
  EXPECT_EQ(one_way.edge_count(), 2u);
  EXPECT_TRUE(one_way.edge_weight(NodeId(0), NodeId(1)));
  const auto reversed = parse_osm_xml_text(way(R"(<tag k="oneway" v="-1"/>)")).net;
  EXPECT_EQ(reversed.edge_count(), 2u);
  EXPECT_TRUE(reversed.edge_weight(NodeId(1), NodeId(0)));
  EXPECT_EQ(parse_osm_xml_text(way(R"(<tag k="oneway" v="no"/>)")).net.edge_count(), 4u);
}

TEST(Osm, FiveWayFixtureMatchesHandCount) {
  const auto text = read_file(kDataDir + "/osm/five_ways.osm");
  const auto drive = parse_osm_xml_text(text);
  EXPECT_EQ(drive.net.node_count(), 6u);
  EXPECT_EQ(drive.net.edge_count(), 7u);
  ASSERT_EQ(drive.warnings.size(), 1u);
  EXPECT_NE(drive.warnings[0].find("14"), std::string::npos);
  EXPECT_EQ(drive.net.node(NodeId(5)).external_ref, "6");
  EXPECT_TRUE(drive.net.edge_weight(NodeId(5), NodeId(4)));   // 6 -> 5
  EXPECT_FALSE(drive.net.edge_weight(NodeId(4), NodeId(5)));
  EXPECT_FALSE(drive.net.edge_weight(NodeId(3), NodeId(2)));  // against oneway=yes

  const auto all = parse_osm_xml_text(text, HighwayProfile::by_name("all"));
  EXPECT_EQ(all.net.node_count(), 7u);
  EXPECT_EQ(all.net.edge_count(), 9u);

  // Same bytes, same numbering.
  const auto again = parse_osm_xml_text(text);
  expect_same_network(drive.net, again.net);
  for (std::uint32_t v = 0; v < 6; ++v) {
    EXPECT_EQ(drive.net.node(NodeId(v)).external_ref, again.net.node(NodeId(v)).external_ref);
  }

  std::stringstream ss;
  write_netgeo(ss, drive.net);
  expect_same_network(drive.net, parse_netgeo(ss).net);
}

TEST(Osm, MalformedXmlThrows) {
  EXPECT_THROW(parse_osm_xml_text("<osm><node id=\"1\""), ParseError);
  EXPECT_THROW(HighwayProfile::by_name("bicycle"), std::invalid_argument);
  EXPECT_TRUE(HighwayProfile::by_name("default").accepts("living_street"));
  EXPECT_FALSE(HighwayProfile::drive().accepts("service"));
  EXPECT_TRUE(HighwayProfile::drive_service().accepts("service"));
}

TEST(Snap, ExactCoordinateAndTieRule) {
  std::string text;
  for (int i = 0; i < 8; ++i) {
    const double lon = i == 3 ? -0.001 : i == 7 ? 0.001 : 1.0 + i;
    text += "N " + std::to_string(i) + " 0 " + std::to_string(lon) + "\n";
  }
  const Network net = parse_netgeo_text(text).net;
  EXPECT_EQ(nearest_node(net, GeoPoint::make(0, 0)), NodeId(3));
  EXPECT_EQ(nearest_node(net, GeoPoint::make(0, 5)), NodeId(4));
  EXPECT_EQ(nearest_node(net, GeoPoint::make(0, 0.001)), NodeId(7));
}

TEST(Snap, GridCellCenterMatchesLinearScan) {
  fixtures::GridOptions g;
  g.rows = 30;
  g.cols = 30;
  const Network net = fixtures::grid(g);
  for (std::size_t r = 0; r + 1 < 30; r += 7) {
    for (std::size_t c = 0; c + 1 < 30; c += 5) {
      const auto center = GeoPoint::make(g.origin.lat + (r + 0.5) * g.spacing_deg,
                                         g.origin.lon + (c + 0.5) * g.spacing_deg);
      std::uint32_t best = 0;
      double best_d = great_circle(center, net.position(NodeId(0)));
      for (std::uint32_t v = 1; v < net.node_count(); ++v) {
        const double d = great_circle(center, net.position(NodeId(v)));
        if (d < best_d) { best_d = d; best = v; }
      }
      EXPECT_EQ(nearest_node(net, center), NodeId(best));
    }
  }
}

TEST(Snap, DuplicateSnapNamesBothLabels) {
  const auto inst = fixtures::three_node();
  std::vector<PoiCoordinate> coords{{GeoPoint::make(0, 0.00001), "clinic"},
                                    {GeoPoint::make(0, -0.00001), "pharmacy"}};
  try {
    snap_pois(inst.net, coords);
    FAIL();
  } catch (const DuplicatePoiError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("clinic"), std::string::npos);
    EXPECT_NE(msg.find("pharmacy"), std::string::npos);
  }
  std::istringstream in("# lat lon label\n0 0 north\n0 0.002 south\n");
  const PoiSet pois = snap_pois(inst.net, parse_poi_coordinates(in));
  EXPECT_EQ(pois.nodes(), (std::vector<NodeId>{NodeId(0), NodeId(1)}));
}

TEST(Scc, KeepsLargestComponentAndRemapsPois) {
  // 0 <-> 1 <-> 2 form a cycle; 3 only feeds in.
  const Network net = parse_netgeo_text(
      "N 0 0 0\nN 1 0 0.001\nN 2 0 0.002\nN 3 0 0.003\n"
      "E 0 1\nE 1 0\nE 1 2\nE 2 1\nE 3 2\n").net;
  const auto sub = largest_strongly_connected(net);
  EXPECT_EQ(sub.net.node_count(), 3u);
  EXPECT_EQ(sub.net.edge_count(), 4u);
  EXPECT_FALSE(sub.mapping[3]);
  EXPECT_EQ(sub.remap(PoiSet({Poi{NodeId(2), "p"}}))[0].node, NodeId(2));
  EXPECT_THROW(sub.remap(PoiSet({Poi{NodeId(3), "q"}})), std::invalid_argument);

  const auto inst = fixtures::three_node();
  EXPECT_EQ(largest_strongly_connected(inst.net).net.node_count(), 3u);
}
