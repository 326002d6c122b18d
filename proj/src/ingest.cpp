#include "urbanet/ingest.hpp"

#include <expat.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <istream>
#include <limits>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>
#include <unordered_map>

namespace urbanet {

ParseError::ParseError(std::size_t line, const std::string& reason)
    : std::runtime_error(line ? "line " + std::to_string(line) + ": " + reason : reason),
      line_(line) {}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

template <typename T>
std::optional<T> parse_number(std::string_view text) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

std::string format_double(double value) {
  char buf[32];
  const auto result = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, result.ptr);
}

}  // namespace

ParsedNetwork parse_netgeo(std::istream& in) {
  struct PendingEdge {
    std::size_t line;
    std::int64_t source;
    std::int64_t target;
    std::optional<double> weight;
  };
  struct PendingPoi {
    std::size_t line;
    std::int64_t node;
    std::string label;
  };

  std::vector<Node> nodes;
  std::unordered_map<std::int64_t, NodeId> ids;
  std::vector<PendingEdge> edges;
  std::vector<PendingPoi> pois;

  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto f = split_fields(line);
    if (f.empty()) continue;

    auto integer = [&](std::string_view text, const char* what) {
      const auto v = parse_number<std::int64_t>(text);
      if (!v) throw ParseError(line_no, std::string("bad ") + what + " '" + std::string(text) + "'");
      return *v;
    };
    auto real = [&](std::string_view text, const char* what) {
      const auto v = parse_number<double>(text);
      if (!v) throw ParseError(line_no, std::string("bad ") + what + " '" + std::string(text) + "'");
      return *v;
    };

    if (f[0] == "N") {
      if (f.size() != 4) throw ParseError(line_no, "node line needs: N <id> <lat> <lon>");
      const std::int64_t id = integer(f[1], "node id");
      GeoPoint pos;
      try {
        pos = GeoPoint::make(real(f[2], "latitude"), real(f[3], "longitude"));
      } catch (const std::invalid_argument& e) {
        throw ParseError(line_no, e.what());
      }
      const NodeId dense(static_cast<std::uint32_t>(nodes.size()));
      if (!ids.emplace(id, dense).second) {
        throw ParseError(line_no, "duplicate node id " + std::to_string(id));
      }
      nodes.push_back(Node{dense, pos, std::string(f[1])});
    } else if (f[0] == "E") {
      if (f.size() != 3 && f.size() != 4) {
        throw ParseError(line_no, "edge line needs: E <source> <target> [weight]");
      }
      std::optional<double> weight;
      if (f.size() == 4) weight = real(f[3], "weight");
      edges.push_back(PendingEdge{line_no, integer(f[1], "source"), integer(f[2], "target"), weight});
    } else if (f[0] == "P") {
      if (f.size() != 3) throw ParseError(line_no, "POI line needs: P <node> <label>");
      pois.push_back(PendingPoi{line_no, integer(f[1], "POI node"), std::string(f[2])});
    } else {
      throw ParseError(line_no, "unknown record type '" + std::string(f[0]) + "'");
    }
  }
  if (in.bad()) throw ParseError(0, "read error");
  if (nodes.empty()) throw ParseError(0, "no nodes");

  auto resolve = [&](std::int64_t id, std::size_t line) {
    auto it = ids.find(id);
    if (it == ids.end()) throw ParseError(line, "unknown node " + std::to_string(id));
    return it->second;
  };

  std::vector<EdgeSpec> specs;
  specs.reserve(edges.size());
  for (const PendingEdge& e : edges) {
    const NodeId s = resolve(e.source, e.line);
    const NodeId t = resolve(e.target, e.line);
    if (s == t) throw ParseError(e.line, "self-loop on node " + std::to_string(e.source));
    if (e.weight && (!std::isfinite(*e.weight) || *e.weight < 0.0)) {
      throw ParseError(e.line, "weight must be finite and non-negative");
    }
    specs.push_back(EdgeSpec{s, t, e.weight});
  }

  ParsedNetwork out{Network::build(std::move(nodes), std::move(specs)), std::nullopt};
  if (!pois.empty()) {
    std::vector<Poi> list;
    for (const PendingPoi& p : pois) {
      const NodeId v = resolve(p.node, p.line);
      for (const Poi& prior : list) {
        if (prior.node == v) {
          throw DuplicatePoiError("line " + std::to_string(p.line) + ": duplicate POI: node " +
                                  std::to_string(p.node) + " hosts " + prior.label + " and " + p.label);
        }
        if (prior.label == p.label) throw ParseError(p.line, "duplicate POI label " + p.label);
      }
      list.push_back(Poi{v, p.label});
    }
    try {
      out.pois = PoiSet(std::move(list));
    } catch (const DuplicatePoiError&) {
      throw;
    } catch (const std::invalid_argument& e) {
      throw ParseError(0, e.what());
    }
  }
  return out;
}

ParsedNetwork parse_netgeo_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_netgeo(in);
}

void write_netgeo(std::ostream& out, const Network& net, const PoiSet* pois) {
  out << "# nodes " << net.node_count() << ", edges " << net.edge_count() << '\n';
  for (const Node& node : net.nodes()) {
    out << "N " << node.id.value << ' ' << format_double(node.pos.lat) << ' '
        << format_double(node.pos.lon) << '\n';
  }
  for (const Edge& e : net.edges()) {
    out << "E " << e.source.value << ' ' << e.target.value << ' ' << format_double(e.weight) << '\n';
  }
  if (pois) {
    for (const Poi& poi : *pois) out << "P " << poi.node.value << ' ' << poi.label << '\n';
  }
}

bool HighwayProfile::accepts(std::string_view highway) const {
  return allowed.empty() || allowed.find(highway) != allowed.end();
}

HighwayProfile HighwayProfile::drive() {
  HighwayProfile p{"drive", {}};
  for (const char* base : {"motorway", "trunk", "primary", "secondary", "tertiary"}) {
    p.allowed.insert(base);
    p.allowed.insert(std::string(base) + "_link");
  }
  p.allowed.insert({"residential", "unclassified", "living_street"});
  return p;
}

HighwayProfile HighwayProfile::drive_service() {
  HighwayProfile p = drive();
  p.name = "drive_service";
  p.allowed.insert("service");
  return p;
}

HighwayProfile HighwayProfile::any() { return HighwayProfile{"all", {}}; }

HighwayProfile HighwayProfile::by_name(std::string_view name) {
  if (name == "default" || name == "drive") return drive();
  if (name == "drive_service") return drive_service();
  if (name == "all") return any();
  throw std::invalid_argument("unknown highway profile '" + std::string(name) + "'");
}

namespace {

struct OsmWay {
  std::int64_t id = 0;
  std::vector<std::int64_t> refs;
  std::string highway;
  std::string oneway;
  std::string junction;
};

struct OsmState {
  std::map<std::int64_t, GeoPoint> nodes;
  std::vector<OsmWay> ways;
  std::optional<OsmWay> open_way;
  std::string error;
  XML_Parser parser = nullptr;
};

const char* attribute(const XML_Char** attrs, std::string_view key) {
  for (std::size_t i = 0; attrs[i]; i += 2) {
    if (key == attrs[i]) return attrs[i + 1];
  }
  return nullptr;
}

void fail(OsmState& state, const std::string& message) {
  if (state.error.empty()) {
    state.error = "line " + std::to_string(XML_GetCurrentLineNumber(state.parser)) + ": " + message;
  }
  XML_StopParser(state.parser, XML_FALSE);
}

void XMLCALL on_start(void* user, const XML_Char* name, const XML_Char** attrs) {
  auto& state = *static_cast<OsmState*>(user);
  const std::string_view element = name;
  if (element == "node") {
    const char* id = attribute(attrs, "id");
    const char* lat = attribute(attrs, "lat");
    const char* lon = attribute(attrs, "lon");
    const auto parsed_id = id ? parse_number<std::int64_t>(id) : std::nullopt;
    const auto parsed_lat = lat ? parse_number<double>(lat) : std::nullopt;
    const auto parsed_lon = lon ? parse_number<double>(lon) : std::nullopt;
    if (!parsed_id || !parsed_lat || !parsed_lon) return fail(state, "node needs id, lat and lon");
    try {
      state.nodes[*parsed_id] = GeoPoint::make(*parsed_lat, *parsed_lon);
    } catch (const std::invalid_argument& e) {
      return fail(state, e.what());
    }
  } else if (element == "way") {
    const char* id = attribute(attrs, "id");
    const auto parsed = id ? parse_number<std::int64_t>(id) : std::nullopt;
    if (!parsed) return fail(state, "way needs an id");
    state.open_way = OsmWay{*parsed, {}, {}, {}, {}};
  } else if (element == "nd" && state.open_way) {
    const char* ref = attribute(attrs, "ref");
    const auto parsed = ref ? parse_number<std::int64_t>(ref) : std::nullopt;
    if (!parsed) return fail(state, "nd needs a ref");
    state.open_way->refs.push_back(*parsed);
  } else if (element == "tag" && state.open_way) {
    const char* k = attribute(attrs, "k");
    const char* v = attribute(attrs, "v");
    if (!k || !v) return;
    const std::string_view key = k;
    if (key == "highway") state.open_way->highway = v;
    else if (key == "oneway") state.open_way->oneway = v;
    else if (key == "junction") state.open_way->junction = v;
  }
}

void XMLCALL on_end(void* user, const XML_Char* name) {
  auto& state = *static_cast<OsmState*>(user);
  if (std::string_view(name) == "way" && state.open_way) {
    state.ways.push_back(std::move(*state.open_way));
    state.open_way.reset();
  }
}

OsmParseResult build_osm_network(const OsmState& state, const HighwayProfile& profile) {
  OsmParseResult result;
  std::vector<const OsmWay*> kept;
  std::map<std::int64_t, NodeId> used;
  for (const OsmWay& way : state.ways) {
    if (way.highway.empty() || !profile.accepts(way.highway)) continue;
    const auto missing = std::find_if(way.refs.begin(), way.refs.end(), [&](std::int64_t r) {
      return state.nodes.find(r) == state.nodes.end();
    });
    if (missing != way.refs.end()) {
      result.warnings.push_back("way " + std::to_string(way.id) + " skipped: node " +
                                std::to_string(*missing) + " is missing");
      continue;
    }
    kept.push_back(&way);
    for (std::int64_t r : way.refs) used.emplace(r, NodeId{});
  }

  std::vector<Node> nodes;
  nodes.reserve(used.size());
  for (auto& [osm_id, dense] : used) {
    dense = NodeId(static_cast<std::uint32_t>(nodes.size()));
    nodes.push_back(Node{dense, state.nodes.at(osm_id), std::to_string(osm_id)});
  }

  std::vector<EdgeSpec> edges;
  for (const OsmWay* way : kept) {
    const bool forward_only = way->oneway == "yes" || way->oneway == "true" ||
                              way->oneway == "1" ||
                              (way->junction == "roundabout" && way->oneway != "no");
    const bool reverse_only = way->oneway == "-1" || way->oneway == "reverse";
    for (std::size_t i = 0; i + 1 < way->refs.size(); ++i) {
      const NodeId a = used.at(way->refs[i]);
      const NodeId b = used.at(way->refs[i + 1]);
      if (a == b) continue;
      if (!reverse_only) edges.push_back(EdgeSpec{a, b, std::nullopt});
      if (!forward_only) edges.push_back(EdgeSpec{b, a, std::nullopt});
    }
  }
  if (nodes.empty()) result.warnings.push_back("no ways matched the highway profile");
  result.net = Network::build(std::move(nodes), std::move(edges));
  return result;
}

}  // namespace

OsmParseResult parse_osm_xml(std::istream& in, const HighwayProfile& profile) {
  OsmState state;
  std::unique_ptr<std::remove_pointer_t<XML_Parser>, decltype(&XML_ParserFree)> parser(
      XML_ParserCreate(nullptr), &XML_ParserFree);
  if (!parser) throw std::runtime_error("cannot create XML parser");
  state.parser = parser.get();
  XML_SetUserData(parser.get(), &state);
  XML_SetElementHandler(parser.get(), on_start, on_end);

  std::vector<char> buffer(1 << 16);
  bool done = false;
  while (!done) {
    in.read(buffer.data(), static_cast<std::streamsize>(buffer.size()));
    const auto got = in.gcount();
    done = got < static_cast<std::streamsize>(buffer.size());
    if (XML_Parse(parser.get(), buffer.data(), static_cast<int>(got), done) == XML_STATUS_ERROR) {
      if (!state.error.empty()) throw ParseError(0, state.error);
      throw ParseError(static_cast<std::size_t>(XML_GetCurrentLineNumber(parser.get())),
                       XML_ErrorString(XML_GetErrorCode(parser.get())));
    }
  }
  return build_osm_network(state, profile);
}

OsmParseResult parse_osm_xml_text(std::string_view text, const HighwayProfile& profile) {
  std::istringstream in{std::string(text)};
  return parse_osm_xml(in, profile);
}

std::vector<PoiCoordinate> parse_poi_coordinates(std::istream& in) {
  std::vector<PoiCoordinate> out;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto f = split_fields(line);
    if (f.empty()) continue;
    if (f.size() != 3) throw ParseError(line_no, "POI line needs: <lat> <lon> <label>");
    const auto lat = parse_number<double>(f[0]);
    const auto lon = parse_number<double>(f[1]);
    if (!lat || !lon) throw ParseError(line_no, "bad coordinate");
    try {
      out.push_back(PoiCoordinate{GeoPoint::make(*lat, *lon), std::string(f[2])});
    } catch (const std::invalid_argument& e) {
      throw ParseError(line_no, e.what());
    }
  }
  if (out.empty()) throw ParseError(0, "no POIs");
  return out;
}

NodeId nearest_node(const Network& net, const GeoPoint& pos) {
  if (net.node_count() == 0) throw std::invalid_argument("cannot snap to an empty network");
  const SphericalPoint target(pos);
  std::uint32_t best = 0;
  double best_dist = great_circle(target, net.spherical(NodeId(0)));
  for (std::uint32_t v = 1; v < net.node_count(); ++v) {
    const double d = great_circle(target, net.spherical(NodeId(v)));
    if (d < best_dist) {
      best = v;
      best_dist = d;
    }
  }
  return NodeId(best);
}

PoiSet snap_pois(const Network& net, const std::vector<PoiCoordinate>& coords) {
  std::vector<Poi> pois;
  std::unordered_map<NodeId, std::string> taken;
  for (const PoiCoordinate& c : coords) {
    const NodeId node = nearest_node(net, c.pos);
    if (auto it = taken.find(node); it != taken.end()) {
      throw DuplicatePoiError("POIs " + it->second + " and " + c.label + " both snap to node " +
                              std::to_string(node.value));
    }
    taken.emplace(node, c.label);
    pois.push_back(Poi{node, c.label});
  }
  return PoiSet(std::move(pois));
}

PoiSet Subnetwork::remap(const PoiSet& pois) const {
  std::vector<Poi> out;
  for (const Poi& poi : pois) {
    if (poi.node.index() >= mapping.size() || !mapping[poi.node.index()]) {
      throw std::invalid_argument("POI " + poi.label + " lies outside the kept component");
    }
    out.push_back(Poi{*mapping[poi.node.index()], poi.label});
  }
  return PoiSet(std::move(out));
}

Subnetwork largest_strongly_connected(const Network& net) {
  const std::size_t n = net.node_count();
  // Kosaraju: finishing order on the graph, then sweeps on the transpose.
  std::vector<char> seen(n, 0);
  std::vector<std::uint32_t> order;
  order.reserve(n);
  std::vector<std::pair<std::uint32_t, std::size_t>> stack;
  for (std::uint32_t root = 0; root < n; ++root) {
    if (seen[root]) continue;
    seen[root] = 1;
    stack.emplace_back(root, 0);
    while (!stack.empty()) {
      auto& [u, next] = stack.back();
      const auto arcs = net.out_arcs(NodeId(u));
      if (next < arcs.size()) {
        const std::uint32_t v = arcs[next++].head.value;
        if (!seen[v]) {
          seen[v] = 1;
          stack.emplace_back(v, 0);
        }
      } else {
        order.push_back(u);
        stack.pop_back();
      }
    }
  }

  constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> component(n, kNone);
  std::vector<std::size_t> sizes;
  std::vector<std::uint32_t> smallest;
  std::vector<std::uint32_t> work;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (component[*it] != kNone) continue;
    const auto label = static_cast<std::uint32_t>(sizes.size());
    sizes.push_back(0);
    smallest.push_back(*it);
    component[*it] = label;
    work.push_back(*it);
    while (!work.empty()) {
      const std::uint32_t u = work.back();
      work.pop_back();
      ++sizes[label];
      smallest[label] = std::min(smallest[label], u);
      for (const Arc& arc : net.in_arcs(NodeId(u))) {
        if (component[arc.head.index()] == kNone) {
          component[arc.head.index()] = label;
          work.push_back(arc.head.value);
        }
      }
    }
  }

  Subnetwork out;
  out.mapping.assign(n, std::nullopt);
  if (n == 0) return out;
  std::size_t best = 0;
  for (std::size_t c = 1; c < sizes.size(); ++c) {
    if (sizes[c] > sizes[best] || (sizes[c] == sizes[best] && smallest[c] < smallest[best])) best = c;
  }
  std::vector<Node> nodes;
  for (std::uint32_t v = 0; v < n; ++v) {
    if (component[v] != best) continue;
    const NodeId dense(static_cast<std::uint32_t>(nodes.size()));
    out.mapping[v] = dense;
    Node node = net.node(NodeId(v));
    node.id = dense;
    nodes.push_back(std::move(node));
  }
  std::vector<EdgeSpec> edges;
  for (const Edge& e : net.edges()) {
    if (out.mapping[e.source.index()] && out.mapping[e.target.index()]) {
      edges.push_back(EdgeSpec{*out.mapping[e.source.index()], *out.mapping[e.target.index()], e.weight});
    }
  }
  out.net = Network::build(std::move(nodes), std::move(edges));
  return out;
}

}  // namespace urbanet
