#include "urbanet/report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace urbanet {

using nlohmann::json;

std::string format_percent(std::size_t count, std::size_t total) {
  const double pct = total == 0 ? 0.0 : 100.0 * static_cast<double>(count) / static_cast<double>(total);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f%%", pct);
  return buf;
}

std::vector<TableRow> table_rows(const InconsistencyReport& report) {
  std::vector<TableRow> rows;
  for (std::size_t slot = 0; slot < report.pois.size(); ++slot) {
    const std::size_t count = report.count(slot);
    rows.push_back(TableRow{
        report.pois[slot].label, count,
        report.total == 0 ? 0.0
                          : 100.0 * static_cast<double>(count) / static_cast<double>(report.total)});
  }
  return rows;
}

namespace {

std::string pad_right(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

std::string pad_left(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

std::size_t label_width(const InconsistencyReport& report) {
  std::size_t width = 5;  // "Total"
  for (const Poi& poi : report.pois) width = std::max(width, poi.label.size());
  return width;
}

}  // namespace

std::string render_table(const InconsistencyReport& report) {
  const std::size_t w = label_width(report);
  const std::size_t count_w = std::max<std::size_t>(5, std::to_string(report.total).size());
  std::ostringstream out;
  out << "inconsistencies: " << to_string(report.direction) << " (" << code(report.direction) << ")\n";
  out << pad_right("POI", w) << "  " << pad_left("#", count_w) << "  " << pad_left("%", 6) << '\n';
  for (std::size_t slot = 0; slot < report.pois.size(); ++slot) {
    out << pad_right(report.pois[slot].label, w) << "  "
        << pad_left(std::to_string(report.count(slot)), count_w) << "  "
        << pad_left(format_percent(report.count(slot), report.total), 6) << '\n';
  }
  out << pad_right("Total", w) << "  " << pad_left(std::to_string(report.total), count_w) << "  "
      << pad_left(format_percent(report.total, report.total), 6) << '\n';
  return out.str();
}

std::string render_comparison(const InconsistencyReport& before, const InconsistencyReport& after) {
  const std::size_t w = std::max(label_width(before), label_width(after));
  const std::size_t total_w =
      std::max<std::size_t>({5, std::to_string(before.total).size(), std::to_string(after.total).size()});
  const std::size_t half = total_w + 2 + 6;
  auto cell = [&](std::optional<std::size_t> count, std::size_t total) {
    if (!count) return pad_left("---", total_w) + "  " + pad_left("---", 6);
    return pad_left(std::to_string(*count), total_w) + "  " + pad_left(format_percent(*count, total), 6);
  };

  std::ostringstream out;
  out << "inconsistencies: " << to_string(before.direction) << " (" << code(before.direction) << ")\n";
  out << pad_right("", w) << " | " << pad_right("Original City", half) << " | "
      << pad_right("Enhanced City", half) << '\n';
  out << pad_right("POI", w) << " | " << pad_left("#", total_w) << "  " << pad_left("%", 6) << " | "
      << pad_left("#", total_w) << "  " << pad_left("%", 6) << '\n';

  std::vector<std::string> labels;
  for (const Poi& poi : before.pois) labels.push_back(poi.label);
  for (const Poi& poi : after.pois) {
    if (std::find(labels.begin(), labels.end(), poi.label) == labels.end()) labels.push_back(poi.label);
  }
  for (const std::string& label : labels) {
    std::optional<std::size_t> b;
    std::optional<std::size_t> a;
    if (auto slot = before.pois.slot_of(label)) b = before.count(*slot);
    if (auto slot = after.pois.slot_of(label)) a = after.count(*slot);
    out << pad_right(label, w) << " | " << cell(b, before.total) << " | " << cell(a, after.total) << '\n';
  }
  out << pad_right("Total", w) << " | " << cell(before.total, before.total) << " | "
      << cell(after.total, after.total) << '\n';
  return out.str();
}

std::string render_plan(const RelocationPlan& plan) {
  std::ostringstream out;
  if (plan.moves.empty()) {
    out << "no moves\n";
  } else {
    out << "moves: " << plan.moves.size() << '\n';
    for (const Move& m : plan.moves) {
      out << "  " << m.label << ": node " << m.from.value << " -> node " << m.to.value
          << " (total " << m.total_after << ")\n";
    }
  }
  if (plan.timed_out) out << "stopped early: time limit reached\n";
  const long long delta =
      static_cast<long long>(plan.totals_after) - static_cast<long long>(plan.totals_before);
  out << "total inconsistencies: " << plan.totals_before << " -> " << plan.totals_after << " ("
      << (delta > 0 ? "+" : "") << delta << ")\n";
  return out.str();
}

json to_json(const InconsistencyReport& report) {
  json rows = json::array();
  for (std::size_t slot = 0; slot < report.pois.size(); ++slot) {
    json nodes = json::array();
    for (NodeId v : report.inconsistent[slot]) nodes.push_back(v.value);
    rows.push_back({{"label", report.pois[slot].label},
                    {"node", report.pois[slot].node.value},
                    {"count", report.count(slot)},
                    {"percent", format_percent(report.count(slot), report.total)},
                    {"perimeter", report.count(slot) + report.consistent[slot].size()},
                    {"inconsistent", std::move(nodes)}});
  }
  return {{"direction", to_string(report.direction)},
          {"total", report.total},
          {"skipped", report.skipped},
          {"per_poi", std::move(rows)}};
}

json to_json(const RelocationPlan& plan) {
  json moves = json::array();
  for (const Move& m : plan.moves) {
    moves.push_back({{"slot", m.slot},
                     {"label", m.label},
                     {"from", m.from.value},
                     {"to", m.to.value},
                     {"total_after", m.total_after}});
  }
  json pois = json::array();
  for (std::size_t slot = 0; slot < plan.final_pois.size(); ++slot) {
    pois.push_back({{"label", plan.final_pois[slot].label},
                    {"node", plan.final_pois[slot].node.value},
                    {"before", plan.per_poi_before.at(slot)},
                    {"after", plan.per_poi_after.at(slot)}});
  }
  return {{"direction", to_string(plan.direction)},
          {"moves", std::move(moves)},
          {"totals_before", plan.totals_before},
          {"totals_after", plan.totals_after},
          {"iterations", plan.iterations.size()},
          {"timed_out", plan.timed_out},
          {"pois", std::move(pois)}};
}

json to_json(const CentralityField& field) {
  json scores = json::array();
  for (std::size_t i = 0; i < field.size(); ++i) {
    scores.push_back({{"node", field.members[i].value}, {"score", field.scores[i]}});
  }
  return {{"scores", std::move(scores)}};
}

namespace {

json point(const GeoPoint& p) { return {{"type", "Point"}, {"coordinates", {p.lon, p.lat}}}; }

json line(const GeoPoint& a, const GeoPoint& b) {
  return {{"type", "LineString"}, {"coordinates", {{a.lon, a.lat}, {b.lon, b.lat}}}};
}

json feature(json geometry, json properties) {
  return {{"type", "Feature"}, {"geometry", std::move(geometry)}, {"properties", std::move(properties)}};
}

}  // namespace

json export_geojson(const Network& net, const GeoJsonLayers& layers) {
  const std::size_t n = net.node_count();

  // Per-node POI label, from the partition if given, else the report's perimeters.
  std::vector<const std::string*> owner(n, nullptr);
  if (layers.partition) {
    const PoiSet* pois = layers.pois ? layers.pois : (layers.report ? &layers.report->pois : nullptr);
    for (std::size_t v = 0; v < n && pois; ++v) {
      if (const auto& a = layers.partition->assignment.at(v); a && a->slot < pois->size()) {
        owner[v] = &(*pois)[a->slot].label;
      }
    }
  } else if (layers.report) {
    for (std::size_t slot = 0; slot < layers.report->pois.size(); ++slot) {
      for (const auto* set : {&layers.report->inconsistent[slot], &layers.report->consistent[slot]}) {
        for (NodeId v : *set) owner[v.index()] = &layers.report->pois[slot].label;
      }
    }
  }

  std::vector<char> inconsistent(n, 0);
  if (layers.report) {
    for (const auto& set : layers.report->inconsistent) {
      for (NodeId v : set) inconsistent[v.index()] = 1;
    }
  }

  std::vector<std::optional<double>> raw(n);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const CentralityField& field : layers.centrality) {
    for (std::size_t i = 0; i < field.size(); ++i) {
      raw[field.members[i].index()] = field.scores[i];
      lo = std::min(lo, field.scores[i]);
      hi = std::max(hi, field.scores[i]);
    }
  }

  std::vector<const char*> role(n, nullptr);
  if (layers.pois) {
    for (const Poi& poi : *layers.pois) role[poi.node.index()] = "poi";
  }
  if (layers.plan) {
    for (const Move& m : layers.plan->moves) {
      role[m.from.index()] = "old_poi";
      role[m.to.index()] = "new_poi";
    }
  }

  json features = json::array();
  for (const Node& node : net.nodes()) {
    const std::size_t v = node.id.index();
    json props = {{"kind", "node"}, {"id", node.id.value}};
    props["ref"] = node.external_ref ? json(*node.external_ref) : json(nullptr);
    props["poi"] = owner[v] ? json(*owner[v]) : json(nullptr);
    props["inconsistent"] = inconsistent[v] != 0;
    if (raw[v]) {
      const double scaled = hi > lo ? (*raw[v] - lo) / (hi - lo) : (hi > 0.0 ? 1.0 : 0.0);
      props["centrality"] = scaled;
      props["centrality_raw"] = *raw[v];
    } else {
      props["centrality"] = nullptr;
      props["centrality_raw"] = nullptr;
    }
    props["role"] = role[v] ? json(role[v]) : json(nullptr);
    features.push_back(feature(point(node.pos), std::move(props)));
  }
  for (const Edge& e : net.edges()) {
    features.push_back(feature(line(net.position(e.source), net.position(e.target)),
                               {{"kind", "edge"},
                                {"source", e.source.value},
                                {"target", e.target.value},
                                {"weight", e.weight}}));
  }
  if (layers.pois) {
    for (std::size_t slot = 0; slot < layers.pois->size(); ++slot) {
      const Poi& poi = (*layers.pois)[slot];
      json props = {{"kind", "poi"}, {"label", poi.label}, {"node", poi.node.value}, {"slot", slot}};
      if (layers.report) {
        if (auto s = layers.report->pois.slot_of(poi.node)) props["count"] = layers.report->count(*s);
      }
      features.push_back(feature(point(net.position(poi.node)), std::move(props)));
    }
  }
  if (layers.plan) {
    for (const Move& m : layers.plan->moves) {
      features.push_back(feature(line(net.position(m.from), net.position(m.to)),
                                 {{"kind", "relocation"},
                                  {"label", m.label},
                                  {"from", m.from.value},
                                  {"to", m.to.value}}));
    }
  }
  return {{"type", "FeatureCollection"}, {"features", std::move(features)}};
}

}  // namespace urbanet
