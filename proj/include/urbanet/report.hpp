// Text tables, JSON documents and GeoJSON layers for analysis results.
#pragma once

#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "urbanet/centrality.hpp"
#include "urbanet/inconsistency.hpp"
#include "urbanet/network.hpp"
#include "urbanet/partition.hpp"
#include "urbanet/reducer.hpp"

namespace urbanet {

struct TableRow {
  std::string label;
  std::size_t count = 0;
  double percent = 0.0;  // of the report total; 0 when the total is 0
};

std::vector<TableRow> table_rows(const InconsistencyReport& report);

/// "13 of 559" -> "2.3%"; one decimal, zero total gives "0.0%".
std::string format_percent(std::size_t count, std::size_t total);

/// One row per POI in set order, then a Total row.
std::string render_table(const InconsistencyReport& report);

/// Before/after columns side by side, rows matched by POI label.
std::string render_comparison(const InconsistencyReport& before, const InconsistencyReport& after);

/// Move list and the "total inconsistencies: before -> after" line.
std::string render_plan(const RelocationPlan& plan);

nlohmann::json to_json(const InconsistencyReport& report);
nlohmann::json to_json(const RelocationPlan& plan);
nlohmann::json to_json(const CentralityField& field);

struct GeoJsonLayers {
  const PoiSet* pois = nullptr;
  const Partition* partition = nullptr;
  const InconsistencyReport* report = nullptr;
  std::span<const CentralityField> centrality;
  const RelocationPlan* plan = nullptr;
};

/// RFC 7946 FeatureCollection: one Point per node, one LineString per edge,
/// plus one Point per POI and one LineString per planned move when those
/// layers are given. Every feature has a "kind" property.
nlohmann::json export_geojson(const Network& net, const GeoJsonLayers& layers = {});

}  // namespace urbanet
