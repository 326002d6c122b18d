// Local HTTP API over the engine: sessions hold a network and an evolving POI
// set; queries track, preview edits, suggest relocations and commit edits.
//
// Every handler is a plain member function returning a status and a JSON
// body, so it can be exercised without a socket. HttpServer routes them.
#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "urbanet/centrality.hpp"
#include "urbanet/inconsistency.hpp"
#include "urbanet/reducer.hpp"

namespace urbanet::service {

struct Response {
  int status = 200;
  nlohmann::json body;
};

struct ServiceOptions {
  std::chrono::milliseconds reduce_timeout{120'000};
  /// When set, each session's POI set and edit history is written to
  /// <dir>/<session id>.json after creation and every commit.
  std::optional<std::filesystem::path> snapshot_dir;
  /// Value of Access-Control-Allow-Origin.
  std::string cors_origin = "*";
  std::size_t threads = 0;
};

/// Longitude/latitude box, inclusive.
struct BBox {
  double min_lon = 0;
  double min_lat = 0;
  double max_lon = 0;
  double max_lat = 0;
  bool contains(const GeoPoint& p) const {
    return p.lon >= min_lon && p.lon <= max_lon && p.lat >= min_lat && p.lat <= max_lat;
  }
};

/// "minLon,minLat,maxLon,maxLat"; throws std::invalid_argument.
BBox parse_bbox(const std::string& text);

/// {"add": [{"node", "label"?}], "move": [{"from", "to"}], "remove": [node]};
/// throws InvalidEditError on a malformed document.
PoiEdit edit_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const PoiEdit& edit);
nlohmann::json to_json(const PoiSet& pois);

class Service {
 public:
  explicit Service(ServiceOptions options = {});
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  const ServiceOptions& options() const { return options_; }

  /// POST /sessions. Body is one of
  ///   {"fixture": name, "seed"?}
  ///   {"netgeo": text}
  ///   {"osm": text, "profile"?, "largest_scc"?}
  /// plus optional "pois" ([{"node", "label"}] or [{"lat", "lon", "label"}]),
  /// "direction" and "strict_unreachable".
  Response create_session(const nlohmann::json& body);
  /// GET /sessions/{id}/layers: nodes, edges and POIs, with inconsistency
  /// flags and straightness over each POI's consistent set.
  Response layers(const std::string& id, std::optional<BBox> bbox = std::nullopt,
                  std::optional<Direction> direction = std::nullopt, bool centrality = true);
  /// POST /sessions/{id}/track, body {"direction"?}.
  Response track(const std::string& id, const nlohmann::json& body);
  /// POST /sessions/{id}/whatif, body {"edit", "direction"?}; leaves the session as is.
  Response whatif(const std::string& id, const nlohmann::json& body);
  /// POST /sessions/{id}/reduce, body {"direction"?, "timeout_ms"?}; leaves the session as is.
  Response reduce(const std::string& id, const nlohmann::json& body);
  /// POST /sessions/{id}/commit, body {"edit", "direction"?}.
  Response commit(const std::string& id, const nlohmann::json& body);
  /// POST /sessions/{id}/snap, body {"lat", "lon"}: the nearest node.
  Response snap(const std::string& id, const nlohmann::json& body);
  /// GET /health.
  Response health() const;

  std::size_t session_count() const;

 private:
  struct Session;
  struct State;

  std::shared_ptr<Session> find(const std::string& id) const;
  std::string next_id();
  void write_snapshot(const std::string& id, const State& state) const;

  ServiceOptions options_;
  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::uint64_t counter_ = 0;
  std::uint64_t salt_ = 0;
};

/// cpp-httplib server routing the Service endpoints, with CORS headers and
/// preflight answers.
class HttpServer {
 public:
  explicit HttpServer(Service& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds host:port; port 0 picks a free one. Returns the bound port or -1.
  int bind(const std::string& host, int port);
  /// Serves on the bound socket until stop(); blocks.
  bool listen();
  /// listen() on a background thread.
  void start();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace urbanet::service
