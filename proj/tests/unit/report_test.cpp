#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "urbanet/fixtures.hpp"
#include "urbanet/ingest.hpp"
#include "urbanet/report.hpp"

using namespace urbanet;

namespace {

// Report with the given per-POI counts; node ids are placeholders.
InconsistencyReport synthetic_report(const std::vector<std::size_t>& counts) {
  std::vector<Poi> list;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    list.push_back(Poi{NodeId(static_cast<std::uint32_t>(k)), "hospital_" + std::to_string(k + 1)});
  }
  InconsistencyReport r;
  r.pois = PoiSet(list);
  std::uint32_t next = 100;
  for (std::size_t c : counts) {
    std::vector<NodeId> set;
    for (std::size_t i = 0; i < c; ++i) set.emplace_back(next++);
    r.inconsistent.push_back(set);
    r.consistent.emplace_back();
    r.total += c;
  }
  return r;
}

}  // namespace

TEST(Report, PercentRendering) {
  EXPECT_EQ(format_percent(13, 559), "2.3%");
  EXPECT_EQ(format_percent(0, 0), "0.0%");
  EXPECT_EQ(format_percent(559, 559), "100.0%");
}

TEST(Report, TableRowsAndTotal) {
  const auto r = synthetic_report({13, 146, 400});
  const auto rows = table_rows(r);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].count, 13u);
  std::size_t sum = 0;
  double pct = 0;
  for (const auto& row : rows) {
    sum += row.count;
    pct += row.percent;
  }
  EXPECT_EQ(sum, r.total);
  EXPECT_NEAR(pct, 100.0, 1e-9);
  const std::string table = render_table(r);
  EXPECT_NE(table.find("hospital_1"), std::string::npos);
  EXPECT_NE(table.find("2.3%"), std::string::npos);
  EXPECT_NE(table.find("Total"), std::string::npos);
  EXPECT_NE(table.find("559"), std::string::npos);
}

TEST(Report, EmptyReportRendersZeros) {
  const auto r = synthetic_report({0, 0});
  const std::string table = render_table(r);
  EXPECT_EQ(table,
            "inconsistencies: inward (I)\n"
            "POI             #       %\n"
            "hospital_1      0    0.0%\n"
            "hospital_2      0    0.0%\n"
            "Total           0    0.0%\n");
}

TEST(Report, ComparisonMarksMissingRows) {
  auto before = synthetic_report({3, 2});
  auto after = synthetic_report({1});
  const std::string text = render_comparison(before, after);
  EXPECT_NE(text.find("Original City"), std::string::npos);
  EXPECT_NE(text.find("Enhanced City"), std::string::npos);
  EXPECT_NE(text.find("---"), std::string::npos);
}

TEST(Report, PlanSummaryLine) {
  RelocationPlan plan;
  plan.totals_before = 559;
  plan.totals_after = 399;
  EXPECT_EQ(render_plan(plan), "no moves\ntotal inconsistencies: 559 -> 399 (-160)\n");
}

TEST(GeoJson, TwoNodeNetwork) {
  const Network net = parse_netgeo_text("N 0 -22.01 -47.9\nN 1 -22.01 -47.899\nE 0 1\n").net;
  const auto doc = export_geojson(net);
  EXPECT_EQ(doc["type"], "FeatureCollection");
  ASSERT_EQ(doc["features"].size(), 3u);
  EXPECT_EQ(doc["features"][0]["geometry"]["type"], "Point");
  // Longitude first.
  EXPECT_EQ(doc["features"][0]["geometry"]["coordinates"][0], -47.9);
  EXPECT_EQ(doc["features"][0]["geometry"]["coordinates"][1], -22.01);
  EXPECT_EQ(doc["features"][2]["geometry"]["type"], "LineString");
}

TEST(GeoJson, InconsistentNodeCarriesItsPoi) {
  const auto inst = fixtures::three_node();
  const auto report = track(inst.net, inst.pois, Direction::inward);
  GeoJsonLayers layers;
  layers.pois = &inst.pois;
  layers.report = &report;
  const auto doc = export_geojson(inst.net, layers);
  EXPECT_EQ(doc["features"].size(), 3u + 4u + 2u);
  const auto& x = doc["features"][2]["properties"];
  EXPECT_EQ(x["inconsistent"], true);
  EXPECT_EQ(x["poi"], "A");
  EXPECT_EQ(doc["features"][0]["properties"]["role"], "poi");
  for (const auto& f : doc["features"]) {
    EXPECT_TRUE(f.contains("geometry"));
    EXPECT_TRUE(f["properties"].contains("kind"));
  }
}

TEST(GeoJson, CentralityIsScaledAndRawKept) {
  const auto inst = fixtures::random_instance(6);
  std::vector<NodeId> members;
  for (std::uint32_t v = 0; v < 20; ++v) members.emplace_back(v);
  const std::vector<CentralityField> fields{straightness(inst.net, members, Direction::inward)};
  GeoJsonLayers layers;
  layers.centrality = fields;
  const auto doc = export_geojson(inst.net, layers);
  double lo = 2, hi = -1;
  for (std::size_t v = 0; v < 20; ++v) {
    const double s = doc["features"][v]["properties"]["centrality"];
    lo = std::min(lo, s);
    hi = std::max(hi, s);
    EXPECT_EQ(doc["features"][v]["properties"]["centrality_raw"].get<double>(), fields[0].scores[v]);
  }
  EXPECT_EQ(lo, 0.0);
  EXPECT_EQ(hi, 1.0);
  EXPECT_TRUE(doc["features"][20]["properties"]["centrality"].is_null());
}

TEST(GeoJson, ParsedOsmFixtureCountsNodesPlusEdges) {
  std::ifstream in(std::string(URBANET_TEST_DATA) + "/osm/five_ways.osm");
  const auto parsed = parse_osm_xml(in);
  const auto doc = nlohmann::json::parse(export_geojson(parsed.net).dump());
  EXPECT_EQ(doc["features"].size(), 6u + 7u);
}

TEST(GeoJson, RelocationRoles) {
  const auto inst = *fixtures::by_name("grid-12");
  const auto plan = reduce(inst.net, inst.pois, Direction::inward);
  ASSERT_FALSE(plan.moves.empty());
  GeoJsonLayers layers;
  layers.pois = &plan.final_pois;
  layers.plan = &plan;
  const auto doc = export_geojson(inst.net, layers);
  const auto& m = plan.moves[0];
  EXPECT_EQ(doc["features"][m.from.index()]["properties"]["role"], "old_poi");
  EXPECT_EQ(doc["features"][m.to.index()]["properties"]["role"], "new_poi");
  EXPECT_EQ(doc["features"].back()["properties"]["kind"], "relocation");
}
