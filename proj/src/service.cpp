#include "urbanet/service.hpp"

#include <cstdio>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <thread>

#include "httplib.h"
#include "urbanet/fixtures.hpp"
#include "urbanet/ingest.hpp"
#include "urbanet/report.hpp"

namespace urbanet::service {

using nlohmann::json;

namespace {

// Error kinds that map onto status codes.
struct UnknownSession : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct MalformedUpload : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BadRequest : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

Response error(int status, const std::string& message) { return {status, json{{"error", message}}}; }

template <typename Fn>
Response guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const UnknownSession& e) {
    return error(404, e.what());
  } catch (const DuplicatePoiError& e) {
    return error(409, e.what());
  } catch (const MalformedUpload& e) {
    return error(422, e.what());
  } catch (const ParseError& e) {
    return error(422, e.what());
  } catch (const InvalidEditError& e) {
    return error(400, e.what());
  } catch (const json::exception& e) {
    return error(400, std::string("bad request body: ") + e.what());
  } catch (const std::invalid_argument& e) {
    return error(400, e.what());
  } catch (const std::out_of_range& e) {
    return error(400, e.what());
  } catch (const std::exception& e) {
    return error(500, e.what());
  }
}

bool is_count(const json& value) { return value.is_number_integer() && value.get<std::int64_t>() >= 0; }

bool is_node_id(const json& value) {
  return is_count(value) && value.get<std::int64_t>() <= std::numeric_limits<std::uint32_t>::max();
}

std::uint32_t node_field(const json& doc, const char* key) {
  const auto it = doc.find(key);
  if (it == doc.end() || !is_node_id(*it)) {
    throw InvalidEditError(std::string("expected a node id in \"") + key + "\"");
  }
  return it->get<std::uint32_t>();
}

const json& array_field(const json& doc, const char* key) {
  static const json empty = json::array();
  const auto it = doc.find(key);
  if (it == doc.end()) return empty;
  if (!it->is_array()) throw InvalidEditError(std::string("\"") + key + "\" must be an array");
  return *it;
}

std::optional<Direction> direction_field(const json& body) {
  const auto it = body.find("direction");
  if (it == body.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw BadRequest("direction must be a string");
  const auto c = parse_direction(it->get<std::string>());
  if (!c) throw BadRequest("unknown direction: " + it->get<std::string>());
  return c;
}

const json& object_body(const json& body) {
  if (!body.is_object()) throw BadRequest("request body must be a JSON object");
  return body;
}

// Per-POI before/after rows matched by label, in before order then new labels.
json diff(const InconsistencyReport& before, const InconsistencyReport& after) {
  json rows = json::array();
  auto row = [&](const std::string& label) {
    const auto b = before.pois.slot_of(label);
    const auto a = after.pois.slot_of(label);
    const long long nb = b ? static_cast<long long>(before.count(*b)) : 0;
    const long long na = a ? static_cast<long long>(after.count(*a)) : 0;
    rows.push_back({{"label", label},
                    {"before", b ? json(before.count(*b)) : json(nullptr)},
                    {"after", a ? json(after.count(*a)) : json(nullptr)},
                    {"delta", na - nb}});
  };
  for (const Poi& poi : before.pois) row(poi.label);
  for (const Poi& poi : after.pois) {
    if (!before.pois.slot_of(poi.label)) row(poi.label);
  }
  return {{"total", static_cast<long long>(after.total) - static_cast<long long>(before.total)},
          {"per_poi", std::move(rows)}};
}

bool feature_within(const json& feature, const BBox& box) {
  const json& coords = feature.at("geometry").at("coordinates");
  auto inside = [&](const json& c) {
    return box.contains(GeoPoint{c.at(1).get<double>(), c.at(0).get<double>()});
  };
  if (feature.at("geometry").at("type") == "Point") return inside(coords);
  for (const json& c : coords) {
    if (inside(c)) return true;
  }
  return false;
}

}  // namespace

BBox parse_bbox(const std::string& text) {
  BBox box;
  char tail = 0;
  if (std::sscanf(text.c_str(), "%lf,%lf,%lf,%lf%c", &box.min_lon, &box.min_lat, &box.max_lon, &box.max_lat,
                  &tail) != 4) {
    throw std::invalid_argument("bbox must be minLon,minLat,maxLon,maxLat");
  }
  if (box.min_lon > box.max_lon || box.min_lat > box.max_lat) throw std::invalid_argument("empty bbox");
  return box;
}

PoiEdit edit_from_json(const json& doc) {
  if (!doc.is_object()) throw InvalidEditError("edit must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (key != "add" && key != "move" && key != "remove") throw InvalidEditError("unknown edit field " + key);
  }
  PoiEdit edit;
  for (const json& item : array_field(doc, "add")) {
    if (!item.is_object()) throw InvalidEditError("add entries are objects");
    std::string label;
    if (const auto it = item.find("label"); it != item.end() && !it->is_null()) {
      if (!it->is_string()) throw InvalidEditError("label must be a string");
      label = it->get<std::string>();
    }
    edit.add.push_back(Poi{NodeId(node_field(item, "node")), std::move(label)});
  }
  for (const json& item : array_field(doc, "move")) {
    if (!item.is_object()) throw InvalidEditError("move entries are objects");
    edit.moves.emplace_back(NodeId(node_field(item, "from")), NodeId(node_field(item, "to")));
  }
  for (const json& item : array_field(doc, "remove")) {
    if (!is_node_id(item)) throw InvalidEditError("remove entries are node ids");
    edit.remove.emplace_back(item.get<std::uint32_t>());
  }
  return edit;
}

json to_json(const PoiEdit& edit) {
  json add = json::array();
  for (const Poi& poi : edit.add) add.push_back({{"node", poi.node.value}, {"label", poi.label}});
  json move = json::array();
  for (const auto& [from, to] : edit.moves) move.push_back({{"from", from.value}, {"to", to.value}});
  json remove = json::array();
  for (NodeId v : edit.remove) remove.push_back(v.value);
  return {{"add", std::move(add)}, {"move", std::move(move)}, {"remove", std::move(remove)}};
}

json to_json(const PoiSet& pois) {
  json out = json::array();
  for (std::size_t slot = 0; slot < pois.size(); ++slot) {
    out.push_back({{"slot", slot}, {"label", pois[slot].label}, {"node", pois[slot].node.value}});
  }
  return out;
}

// One committed configuration. Immutable apart from the lazily filled caches,
// so readers keep working on it while a commit builds the next one.
struct Service::State {
  std::uint64_t version = 1;
  PoiSet pois;
  Direction direction = Direction::inward;
  std::vector<PoiEdit> history;

  mutable std::mutex cache_mutex;
  mutable std::map<Direction, std::shared_ptr<const InconsistencyReport>> reports;
  mutable std::map<Direction, std::shared_ptr<const std::vector<CentralityField>>> centrality;

  std::shared_ptr<const InconsistencyReport> report(const Tracker& tracker, Direction c) const {
    std::lock_guard lock(cache_mutex);
    auto& slot = reports[c];
    if (!slot) slot = std::make_shared<const InconsistencyReport>(tracker.track(pois, c));
    return slot;
  }
};

struct Service::Session {
  std::shared_ptr<const Tracker> tracker;
  std::vector<std::string> warnings;
  std::mutex commit_mutex;
  mutable std::mutex state_mutex;
  std::shared_ptr<const State> state;

  std::shared_ptr<const State> current() const {
    std::lock_guard lock(state_mutex);
    return state;
  }
  void replace(std::shared_ptr<const State> next) {
    std::lock_guard lock(state_mutex);
    state = std::move(next);
  }
};

Service::Service(ServiceOptions options) : options_(std::move(options)), salt_(std::random_device{}()) {
  if (options_.snapshot_dir) std::filesystem::create_directories(*options_.snapshot_dir);
}

Service::~Service() = default;

std::string Service::next_id() {
  // Unguessable enough for a local tool, and never reused within a process.
  std::mt19937_64 rng(salt_ ^ (++counter_ * 0x9e3779b97f4a7c15ULL));
  char buf[24];
  std::snprintf(buf, sizeof buf, "%llx%llx", static_cast<unsigned long long>(counter_),
                static_cast<unsigned long long>(rng() >> 16));
  return buf;
}

std::shared_ptr<Service::Session> Service::find(const std::string& id) const {
  std::lock_guard lock(mutex_);
  const auto it = sessions_.find(id);
  if (it == sessions_.end()) throw UnknownSession("unknown session: " + id);
  return it->second;
}

std::size_t Service::session_count() const {
  std::lock_guard lock(mutex_);
  return sessions_.size();
}

void Service::write_snapshot(const std::string& id, const State& state) const {
  if (!options_.snapshot_dir) return;
  json history = json::array();
  for (const PoiEdit& edit : state.history) history.push_back(to_json(edit));
  const json doc = {{"id", id},
                    {"version", state.version},
                    {"direction", to_string(state.direction)},
                    {"pois", to_json(state.pois)},
                    {"history", std::move(history)}};
  const auto path = *options_.snapshot_dir / (id + ".json");
  const auto temp = path.string() + ".tmp";
  {
    std::ofstream out(temp, std::ios::trunc);
    out << doc.dump(2) << '\n';
    if (!out) throw std::runtime_error("cannot write snapshot " + temp);
  }
  std::filesystem::rename(temp, path);
}

Response Service::create_session(const json& body) {
  return guarded([&]() -> Response {
    if (!body.is_object()) throw MalformedUpload("session body must be a JSON object");
    Network net;
    std::optional<PoiSet> pois;
    std::vector<std::string> warnings;
    try {
      if (const auto it = body.find("fixture"); it != body.end()) {
        const auto inst = fixtures::by_name(it->get<std::string>(), body.value("seed", std::uint64_t{1}));
        if (!inst) throw MalformedUpload("unknown fixture: " + it->get<std::string>());
        net = inst->net;
        pois = inst->pois;
      } else if (const auto it = body.find("netgeo"); it != body.end()) {
        auto parsed = parse_netgeo_text(it->get<std::string>());
        net = std::move(parsed.net);
        pois = std::move(parsed.pois);
      } else if (const auto it = body.find("osm"); it != body.end()) {
        auto parsed = parse_osm_xml_text(it->get<std::string>(),
                                         HighwayProfile::by_name(body.value("profile", std::string("default"))));
        net = std::move(parsed.net);
        warnings = std::move(parsed.warnings);
      } else {
        throw MalformedUpload("expected one of fixture, netgeo or osm");
      }
      if (net.node_count() == 0) throw MalformedUpload("network has no nodes");
      if (body.value("largest_scc", false)) {
        const Subnetwork sub = largest_strongly_connected(net);
        if (pois) pois = sub.remap(*pois);
        net = sub.net;
      }

      // Explicit POIs refer to the final network.
      if (const auto it = body.find("pois"); it != body.end()) {
        if (!it->is_array()) throw MalformedUpload("pois must be an array");
        std::vector<Poi> list;
        for (const json& item : *it) {
          const std::string label = item.at("label").get<std::string>();
          const NodeId node = item.contains("node")
                                  ? NodeId(item.at("node").get<std::uint32_t>())
                                  : nearest_node(net, GeoPoint::make(item.at("lat").get<double>(),
                                                                     item.at("lon").get<double>()));
          if (!net.contains(node)) throw MalformedUpload("POI " + label + " is not on the network");
          for (const Poi& other : list) {
            if (other.node == node) {
              throw DuplicatePoiError("duplicate POI: " + other.label + " and " + label + " share node " +
                                      std::to_string(node.value));
            }
          }
          list.push_back(Poi{node, label});
        }
        pois = PoiSet(std::move(list));
      }
    } catch (const json::exception& e) {
      throw MalformedUpload(std::string("malformed upload: ") + e.what());
    } catch (const DuplicatePoiError&) {
      throw;
    } catch (const std::invalid_argument& e) {
      throw MalformedUpload(e.what());
    } catch (const std::out_of_range& e) {
      throw MalformedUpload(e.what());
    }
    if (!pois || pois->empty()) throw MalformedUpload("no POIs given");

    const Direction c = direction_field(body).value_or(Direction::inward);
    TrackOptions track_options;
    track_options.strict_unreachable = body.value("strict_unreachable", false);
    track_options.threads = options_.threads;

    auto session = std::make_shared<Session>();
    session->tracker = std::make_shared<const Tracker>(std::move(net), track_options);
    session->warnings = warnings;
    auto state = std::make_shared<State>();
    state->pois = *pois;
    state->direction = c;
    session->state = state;

    std::string id;
    {
      std::lock_guard lock(mutex_);
      do {
        id = next_id();
      } while (sessions_.count(id));
      sessions_[id] = session;
    }
    write_snapshot(id, *state);
    const Network& loaded = session->tracker->network();
    return {201,
            {{"id", id},
             {"version", state->version},
             {"direction", to_string(c)},
             {"nodes", loaded.node_count()},
             {"edges", loaded.edge_count()},
             {"pois", to_json(state->pois)},
             {"warnings", warnings}}};
  });
}

Response Service::layers(const std::string& id, std::optional<BBox> bbox, std::optional<Direction> direction,
                         bool centrality) {
  return guarded([&]() -> Response {
    const auto session = find(id);
    const auto state = session->current();
    const Tracker& tracker = *session->tracker;
    const Direction c = direction.value_or(state->direction);
    const auto report = state->report(tracker, c);

    std::shared_ptr<const std::vector<CentralityField>> fields;
    if (centrality) {
      std::lock_guard lock(state->cache_mutex);
      auto& slot = state->centrality[c];
      if (!slot) {
        std::vector<CentralityField> computed;
        for (const auto& members : report->consistent) {
          if (!members.empty()) {
            computed.push_back(straightness(tracker.network(), members, c, options_.threads));
          }
        }
        slot = std::make_shared<const std::vector<CentralityField>>(std::move(computed));
      }
      fields = slot;
    }

    GeoJsonLayers layers;
    layers.pois = &state->pois;
    layers.report = report.get();
    if (fields) layers.centrality = *fields;
    json doc = export_geojson(tracker.network(), layers);
    if (bbox) {
      json kept = json::array();
      for (json& feature : doc["features"]) {
        if (feature_within(feature, *bbox)) kept.push_back(std::move(feature));
      }
      doc["features"] = std::move(kept);
    }
    doc["session"] = {{"id", id},
                      {"version", state->version},
                      {"direction", to_string(c)},
                      {"total", report->total}};
    return {200, std::move(doc)};
  });
}

Response Service::track(const std::string& id, const json& body) {
  return guarded([&]() -> Response {
    const auto session = find(id);
    const auto state = session->current();
    const Direction c = direction_field(object_body(body)).value_or(state->direction);
    json doc = to_json(*state->report(*session->tracker, c));
    doc["version"] = state->version;
    doc["table"] = render_table(*state->report(*session->tracker, c));
    return {200, std::move(doc)};
  });
}

Response Service::whatif(const std::string& id, const json& body) {
  return guarded([&]() -> Response {
    const auto session = find(id);
    const auto state = session->current();
    const Direction c = direction_field(object_body(body)).value_or(state->direction);
    const PoiEdit edit = edit_from_json(body.contains("edit") ? body.at("edit") : json::object());
    const Tracker& tracker = *session->tracker;
    const PoiSet edited = apply_edit(tracker.network(), state->pois, edit);
    const auto baseline = state->report(tracker, c);
    const InconsistencyReport after = tracker.track(edited, c);
    return {200,
            {{"version", state->version},
             {"direction", to_string(c)},
             {"pois", to_json(edited)},
             {"baseline", to_json(*baseline)},
             {"report", to_json(after)},
             {"diff", diff(*baseline, after)},
             {"table", render_comparison(*baseline, after)}}};
  });
}

Response Service::reduce(const std::string& id, const json& body) {
  return guarded([&]() -> Response {
    const auto session = find(id);
    const auto state = session->current();
    const Direction c = direction_field(object_body(body)).value_or(state->direction);
    ReduceOptions options;
    options.track = session->tracker->options();
    options.time_limit = options_.reduce_timeout;
    if (const auto it = body.find("timeout_ms"); it != body.end()) {
      if (!is_count(*it)) throw BadRequest("timeout_ms must be a non-negative integer");
      options.time_limit = std::min(*options.time_limit, std::chrono::milliseconds(it->get<std::int64_t>()));
    }
    const RelocationPlan plan = urbanet::reduce(*session->tracker, state->pois, c, options);
    PoiEdit edit;
    for (const Move& m : plan.moves) edit.moves.emplace_back(m.from, m.to);
    json doc = to_json(plan);
    doc["version"] = state->version;
    doc["edit"] = to_json(edit);
    doc["summary"] = render_plan(plan);
    return {200, std::move(doc)};
  });
}

Response Service::commit(const std::string& id, const json& body) {
  return guarded([&]() -> Response {
    const auto session = find(id);
    object_body(body);
    if (!body.contains("edit")) throw InvalidEditError("commit needs an edit");
    const PoiEdit edit = edit_from_json(body.at("edit"));
    const auto requested = direction_field(body);

    std::lock_guard serial(session->commit_mutex);
    const auto state = session->current();
    auto next = std::make_shared<State>();
    next->version = state->version + 1;
    next->pois = apply_edit(session->tracker->network(), state->pois, edit);
    next->direction = requested.value_or(state->direction);
    next->history = state->history;
    next->history.push_back(edit);
    const auto report = next->report(*session->tracker, next->direction);
    write_snapshot(id, *next);
    session->replace(next);
    return {200,
            {{"version", next->version},
             {"direction", to_string(next->direction)},
             {"pois", to_json(next->pois)},
             {"report", to_json(*report)}}};
  });
}

Response Service::snap(const std::string& id, const json& body) {
  return guarded([&]() -> Response {
    const auto session = find(id);
    object_body(body);
    const GeoPoint at = GeoPoint::make(body.at("lat").get<double>(), body.at("lon").get<double>());
    const Network& net = session->tracker->network();
    const NodeId node = nearest_node(net, at);
    const auto state = session->current();
    const auto slot = state->pois.slot_of(node);
    return {200,
            {{"node", node.value},
             {"lat", net.position(node).lat},
             {"lon", net.position(node).lon},
             {"distance_m", great_circle(at, net.position(node))},
             {"poi", slot ? json(state->pois[*slot].label) : json(nullptr)}}};
  });
}

Response Service::health() const { return {200, {{"status", "ok"}, {"sessions", session_count()}}}; }

// ---- HTTP ----

struct HttpServer::Impl {
  Service& service;
  httplib::Server server;
  std::thread thread;

  explicit Impl(Service& s) : service(s) {}

  static void reply(httplib::Response& res, const Response& r) {
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
  }

  // Empty bodies read as {}; unparsable ones are answered with `status`.
  static std::optional<json> parse_body(const httplib::Request& req, httplib::Response& res, int status) {
    if (req.body.empty()) return json::object();
    try {
      return json::parse(req.body);
    } catch (const json::parse_error& e) {
      reply(res, error(status, std::string("malformed JSON: ") + e.what()));
      return std::nullopt;
    }
  }

  void routes() {
    const std::string origin = service.options().cors_origin;
    server.set_post_routing_handler([origin](const httplib::Request&, httplib::Response& res) {
      res.set_header("Access-Control-Allow-Origin", origin);
      res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
      res.set_header("Access-Control-Allow-Headers", "Content-Type");
    });
    server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
      if (res.body.empty()) reply(res, error(res.status, "no such endpoint"));
    });
    server.Options(".*", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
    server.Get("/health", [this](const httplib::Request&, httplib::Response& res) { reply(res, service.health()); });
    server.Post("/sessions", [this](const httplib::Request& req, httplib::Response& res) {
      if (auto body = parse_body(req, res, 422)) reply(res, service.create_session(*body));
    });
    server.Get(R"(/sessions/([^/]+)/layers)", [this](const httplib::Request& req, httplib::Response& res) {
      const Response r = guarded([&]() -> Response {
        std::optional<BBox> bbox;
        if (req.has_param("bbox")) bbox = parse_bbox(req.get_param_value("bbox"));
        std::optional<Direction> c;
        if (req.has_param("direction")) {
          c = parse_direction(req.get_param_value("direction"));
          if (!c) throw BadRequest("unknown direction: " + req.get_param_value("direction"));
        }
        const std::string flag = req.has_param("centrality") ? req.get_param_value("centrality") : "1";
        return service.layers(req.matches[1], bbox, c, flag != "0" && flag != "false");
      });
      reply(res, r);
    });
    server.Post(R"(/sessions/([^/]+)/(track|whatif|reduce|commit|snap))",
                [this](const httplib::Request& req, httplib::Response& res) {
                  const auto body = parse_body(req, res, 400);
                  if (!body) return;
                  const std::string id = req.matches[1];
                  const std::string action = req.matches[2];
                  if (action == "track") reply(res, service.track(id, *body));
                  if (action == "whatif") reply(res, service.whatif(id, *body));
                  if (action == "reduce") reply(res, service.reduce(id, *body));
                  if (action == "commit") reply(res, service.commit(id, *body));
                  if (action == "snap") reply(res, service.snap(id, *body));
                });
  }
};

HttpServer::HttpServer(Service& service) : impl_(std::make_unique<Impl>(service)) { impl_->routes(); }

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool HttpServer::listen() { return impl_->server.listen_after_bind(); }

void HttpServer::start() {
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
}

void HttpServer::stop() {
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace urbanet::service
