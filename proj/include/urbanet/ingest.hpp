// Loading networks and POIs from text formats.
//
// NETGEO is a line-oriented format; '#' starts a comment and fields are
// whitespace-separated:
//
//   N <id> <lat> <lon>           node, decimal degrees
//   E <source> <target> [meters] directed edge, weight optional
//   P <node> <label>             point of interest on an existing node
//
// Node ids may be any distinct integers; they are re-indexed densely in
// order of appearance and kept as Node::external_ref.
#pragma once

#include <iosfwd>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "urbanet/network.hpp"
#include "urbanet/poi_set.hpp"

namespace urbanet {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& reason);
  /// 0 when the error is not tied to a line.
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct ParsedNetwork {
  Network net;
  std::optional<PoiSet> pois;
};

ParsedNetwork parse_netgeo(std::istream& in);
ParsedNetwork parse_netgeo_text(std::string_view text);

/// Writes nodes with their dense ids and every edge with an explicit weight,
/// so parsing the output yields the same network.
void write_netgeo(std::ostream& out, const Network& net, const PoiSet* pois = nullptr);

/// Which OSM ways count as streets.
struct HighwayProfile {
  std::string name;
  std::set<std::string, std::less<>> allowed;  // empty means every highway value

  bool accepts(std::string_view highway) const;

  /// motorway, trunk, primary, secondary, tertiary (each with _link),
  /// residential, unclassified, living_street.
  static HighwayProfile drive();
  /// drive plus service roads.
  static HighwayProfile drive_service();
  /// Any way carrying a highway tag.
  static HighwayProfile any();
  /// "default"/"drive", "drive_service" or "all"; throws std::invalid_argument.
  static HighwayProfile by_name(std::string_view name);
};

struct OsmParseResult {
  Network net;
  std::vector<std::string> warnings;
};

/// Keeps ways accepted by `profile`, turning consecutive node references into
/// edges (both directions unless oneway=yes/true/1 or oneway=-1). Nodes not used
/// by a kept way are dropped; the rest are numbered by ascending OSM id with
/// the OSM id stored as external_ref. Ways referencing missing nodes are
/// skipped with a warning. Malformed XML throws ParseError.
OsmParseResult parse_osm_xml(std::istream& in, const HighwayProfile& profile = HighwayProfile::drive());
OsmParseResult parse_osm_xml_text(std::string_view text,
                                  const HighwayProfile& profile = HighwayProfile::drive());

struct PoiCoordinate {
  GeoPoint pos;
  std::string label;
};

/// Lines of `<lat> <lon> <label>`; '#' comments.
std::vector<PoiCoordinate> parse_poi_coordinates(std::istream& in);

/// Snaps each coordinate to the great-circle-nearest node (ties to the smaller
/// id). Two labels landing on one node throw DuplicatePoiError naming both.
PoiSet snap_pois(const Network& net, const std::vector<PoiCoordinate>& coords);

/// Nearest node to `pos` under the same rule as snap_pois.
NodeId nearest_node(const Network& net, const GeoPoint& pos);

struct Subnetwork {
  Network net;
  /// Old id -> new id, nothing for dropped nodes.
  std::vector<std::optional<NodeId>> mapping;

  /// Re-targets POIs; throws std::invalid_argument if one was dropped.
  PoiSet remap(const PoiSet& pois) const;
};

/// The largest strongly connected component (ties: the one holding the
/// smallest node id), re-indexed in ascending old-id order.
Subnetwork largest_strongly_connected(const Network& net);

}  // namespace urbanet
