#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <pthread.h>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "CLI11.hpp"
#include "urbanet/centrality.hpp"
#include "urbanet/fixtures.hpp"
#include "urbanet/ingest.hpp"
#include "urbanet/reducer.hpp"
#include "urbanet/report.hpp"
#include "urbanet/service.hpp"

namespace urbanet::cli {
namespace {

// Missing or unreadable files; exit 1 like parse errors.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// POIs that cannot be used; exit 2.
class PoiError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Config {
  std::string net_path;
  std::string osm_path;
  std::string fixture;
  std::uint64_t seed = 1;
  std::string pois_path;
  std::string direction = "inward";
  std::string geojson_path;
  bool strict_unreachable = false;
  bool largest_scc = false;
  std::string profile = "default";
  bool json = false;
  std::size_t threads = 0;

  // reduce
  double timeout_s = 0;
  // centrality
  std::string poi_label;
  // whatif
  std::vector<std::string> add;
  std::vector<std::string> move;
  std::vector<std::string> remove;
  // serve
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string snapshot_dir;
  // convert
  std::string output_path;
};

struct Inputs {
  Network net;
  std::optional<PoiSet> pois;
};

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path);
  return in;
}

// Names the file in a parse error, keeping its line number.
ParseError in_file(const std::string& path, const ParseError& e) {
  return ParseError(0, path + ": " + e.what());
}

Inputs load(const Config& cfg, std::ostream& err) {
  Inputs in;
  if (!cfg.net_path.empty()) {
    std::ifstream file = open_input(cfg.net_path);
    try {
      ParsedNetwork parsed = parse_netgeo(file);
      in.net = std::move(parsed.net);
      in.pois = std::move(parsed.pois);
    } catch (const ParseError& e) {
      throw in_file(cfg.net_path, e);
    }
  } else if (!cfg.osm_path.empty()) {
    const HighwayProfile profile = HighwayProfile::by_name(cfg.profile);
    std::ifstream file = open_input(cfg.osm_path);
    try {
      OsmParseResult parsed = parse_osm_xml(file, profile);
      for (const std::string& w : parsed.warnings) err << "warning: " << w << '\n';
      in.net = std::move(parsed.net);
    } catch (const ParseError& e) {
      throw in_file(cfg.osm_path, e);
    }
  } else {
    auto inst = fixtures::by_name(cfg.fixture, cfg.seed);
    if (!inst) throw InputError("unknown fixture " + cfg.fixture);
    in.net = std::move(inst->net);
    in.pois = std::move(inst->pois);
  }

  if (cfg.largest_scc) {
    Subnetwork sub = largest_strongly_connected(in.net);
    if (in.pois) {
      try {
        in.pois = sub.remap(*in.pois);
      } catch (const std::invalid_argument& e) {
        throw PoiError(e.what());
      }
    }
    in.net = std::move(sub.net);
  }

  if (!cfg.pois_path.empty()) {
    std::ifstream file = open_input(cfg.pois_path);
    std::vector<PoiCoordinate> coords;
    try {
      coords = parse_poi_coordinates(file);
    } catch (const ParseError& e) {
      throw in_file(cfg.pois_path, e);
    }
    if (in.net.node_count() == 0) throw PoiError("cannot snap POIs to an empty network");
    in.pois = snap_pois(in.net, coords);
  }
  return in;
}

const PoiSet& require_pois(const Inputs& in) {
  if (!in.pois || in.pois->empty()) throw PoiError("no POIs: use --pois or P lines");
  in.pois->check_within(in.net);
  return *in.pois;
}

Direction direction_of(const Config& cfg) {
  const auto c = parse_direction(cfg.direction);
  if (!c) throw std::invalid_argument("unknown direction " + cfg.direction);
  return *c;
}

TrackOptions track_options(const Config& cfg) {
  return TrackOptions{cfg.strict_unreachable, cfg.threads};
}

void write_json(const std::string& path, const nlohmann::json& doc) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << doc.dump() << '\n';
}

std::uint32_t parse_node(const std::string& text) {
  std::uint32_t v = 0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) throw InvalidEditError("bad node id '" + text + "'");
  return v;
}

PoiEdit edit_of(const Config& cfg) {
  PoiEdit edit;
  for (const std::string& a : cfg.add) {
    const auto colon = a.find(':');
    Poi p;
    p.node = NodeId(parse_node(a.substr(0, colon)));
    if (colon != std::string::npos) p.label = a.substr(colon + 1);
    edit.add.push_back(std::move(p));
  }
  for (const std::string& m : cfg.move) {
    const auto colon = m.find(':');
    if (colon == std::string::npos) throw InvalidEditError("--move needs FROM:TO, got '" + m + "'");
    edit.moves.emplace_back(NodeId(parse_node(m.substr(0, colon))),
                            NodeId(parse_node(m.substr(colon + 1))));
  }
  for (const std::string& r : cfg.remove) edit.remove.push_back(NodeId(parse_node(r)));
  return edit;
}

int cmd_track(const Config& cfg, std::ostream& out, std::ostream& err) {
  const Direction c = direction_of(cfg);
  const Inputs in = load(cfg, err);
  const PoiSet& pois = require_pois(in);
  const InconsistencyReport report = track(in.net, pois, c, track_options(cfg));
  if (cfg.json) {
    out << to_json(report).dump(2) << '\n';
  } else {
    out << render_table(report);
    if (report.skipped > 0) out << "skipped (no POI reachable): " << report.skipped << '\n';
  }
  if (!cfg.geojson_path.empty()) {
    GeoJsonLayers layers;
    layers.pois = &pois;
    layers.report = &report;
    write_json(cfg.geojson_path, export_geojson(in.net, layers));
  }
  return kExitOk;
}

int cmd_reduce(const Config& cfg, std::ostream& out, std::ostream& err) {
  const Direction c = direction_of(cfg);
  const Inputs in = load(cfg, err);
  const PoiSet& pois = require_pois(in);
  if (cfg.timeout_s < 0) throw std::invalid_argument("--timeout must not be negative");
  ReduceOptions options;
  options.track = track_options(cfg);
  if (cfg.timeout_s > 0) {
    options.time_limit = std::chrono::milliseconds(static_cast<long long>(cfg.timeout_s * 1000));
  }
  const Tracker tracker(in.net, options.track);
  const RelocationPlan plan = reduce(tracker, pois, c, options);
  if (cfg.json) {
    out << to_json(plan).dump(2) << '\n';
  } else {
    const InconsistencyReport before = tracker.track(plan.initial_pois, c);
    const InconsistencyReport after = tracker.track(plan.final_pois, c);
    out << render_plan(plan) << '\n'
        << render_comparison(before, after);
  }
  if (!cfg.geojson_path.empty()) {
    const InconsistencyReport after = tracker.track(plan.final_pois, c);
    GeoJsonLayers layers;
    layers.pois = &plan.final_pois;
    layers.report = &after;
    layers.plan = &plan;
    write_json(cfg.geojson_path, export_geojson(in.net, layers));
  }
  return kExitOk;
}

int cmd_centrality(const Config& cfg, std::ostream& out, std::ostream& err) {
  const Direction c = direction_of(cfg);
  const Inputs in = load(cfg, err);
  std::vector<NodeId> members;
  if (cfg.poi_label.empty()) {
    members.reserve(in.net.node_count());
    for (const Node& n : in.net.nodes()) members.push_back(n.id);
  } else {
    const PoiSet& pois = require_pois(in);
    const auto slot = pois.slot_of(cfg.poi_label);
    if (!slot) throw PoiError("no POI labelled " + cfg.poi_label);
    members = perimeter_partition(in.net, pois).members[*slot];
  }
  if (members.empty()) throw InputError("nothing to score: the network is empty");
  const CentralityField field = straightness(in.net, members, c, cfg.threads);
  if (cfg.json) {
    out << to_json(field).dump(2) << '\n';
  } else {
    out << "direction: " << to_string(c) << '\n';
    out << "members: " << field.size() << '\n';
    out << "most central: node " << extract_central(field).value << '\n';
    out << "node score\n";
    std::ostringstream line;
    line << std::fixed << std::setprecision(6);
    for (std::size_t k = 0; k < field.size(); ++k) {
      line << field.members[k].value << ' ' << field.scores[k] << '\n';
    }
    out << line.str();
  }
  if (!cfg.geojson_path.empty()) {
    GeoJsonLayers layers;
    layers.pois = in.pois ? &*in.pois : nullptr;
    layers.centrality = std::span<const CentralityField>(&field, 1);
    write_json(cfg.geojson_path, export_geojson(in.net, layers));
  }
  return kExitOk;
}

int cmd_whatif(const Config& cfg, std::ostream& out, std::ostream& err) {
  const Direction c = direction_of(cfg);
  const Inputs in = load(cfg, err);
  const PoiSet& pois = require_pois(in);
  const PoiEdit edit = edit_of(cfg);
  const PoiSet edited = apply_edit(in.net, pois, edit);
  const Tracker tracker(in.net, track_options(cfg));
  const InconsistencyReport before = tracker.track(pois, c);
  const InconsistencyReport after = tracker.track(edited, c);
  if (cfg.json) {
    out << nlohmann::json{{"before", to_json(before)}, {"after", to_json(after)}}.dump(2) << '\n';
  } else {
    const long long delta =
        static_cast<long long>(after.total) - static_cast<long long>(before.total);
    out << render_comparison(before, after)
        << "total inconsistencies: " << before.total << " -> " << after.total << " ("
        << (delta > 0 ? "+" : "") << delta << ")\n";
  }
  if (!cfg.geojson_path.empty()) {
    GeoJsonLayers layers;
    layers.pois = &edited;
    layers.report = &after;
    write_json(cfg.geojson_path, export_geojson(in.net, layers));
  }
  return kExitOk;
}

int cmd_convert(const Config& cfg, std::ostream& out, std::ostream& err) {
  const Inputs in = load(cfg, err);
  const PoiSet* pois = in.pois ? &*in.pois : nullptr;
  if (cfg.output_path.empty()) {
    write_netgeo(out, in.net, pois);
  } else {
    std::ofstream file(cfg.output_path);
    if (!file) throw InputError("cannot write " + cfg.output_path);
    write_netgeo(file, in.net, pois);
  }
  err << "nodes: " << in.net.node_count() << ", edges: " << in.net.edge_count() << '\n';
  return kExitOk;
}

int cmd_serve(const Config& cfg, std::ostream& out, std::ostream& err) {
  service::ServiceOptions options;
  options.threads = cfg.threads;
  if (!cfg.snapshot_dir.empty()) options.snapshot_dir = cfg.snapshot_dir;
  service::Service svc(options);
  service::HttpServer server(svc);

  // Route SIGINT and SIGTERM to a watcher thread that stops the server.
  sigset_t stop_signals;
  sigemptyset(&stop_signals);
  sigaddset(&stop_signals, SIGINT);
  sigaddset(&stop_signals, SIGTERM);
  sigset_t previous;
  pthread_sigmask(SIG_BLOCK, &stop_signals, &previous);

  const int port = server.bind(cfg.host, cfg.port);
  if (port < 0) {
    pthread_sigmask(SIG_SETMASK, &previous, nullptr);
    err << "error: cannot listen on " << cfg.host << ':' << cfg.port << '\n';
    return kExitInput;
  }
  out << "listening on http://" << cfg.host << ':' << port << std::endl;

  std::thread watcher([&] {
    int sig = 0;
    sigwait(&stop_signals, &sig);
    server.stop();
  });
  const bool ok = server.listen();
  // Wake the watcher if listen() ended for another reason.
  pthread_kill(watcher.native_handle(), SIGTERM);
  watcher.join();
  pthread_sigmask(SIG_SETMASK, &previous, nullptr);
  return ok ? kExitOk : kExitInput;
}

void add_source(CLI::App* cmd, Config& cfg) {
  auto* net = cmd->add_option("--net", cfg.net_path, "NETGEO network file");
  auto* osm = cmd->add_option("--osm", cfg.osm_path, "OSM XML extract");
  auto* fixture = cmd->add_option("--fixture", cfg.fixture, "built-in synthetic fixture")
                      ->check(CLI::IsMember(fixtures::names()));
  net->excludes(osm, fixture);
  osm->excludes(fixture);
  cmd->add_option("--seed", cfg.seed, "seed for the random fixture");
  cmd->add_option("--profile", cfg.profile, "OSM highway profile: default, drive_service, all");
  cmd->add_flag("--largest-scc", cfg.largest_scc, "keep only the largest strongly connected component");
  cmd->add_option("--pois", cfg.pois_path, "POI file of <lat> <lon> <label> lines");
  cmd->add_option("--threads", cfg.threads, "worker threads, 0 for all cores");
}

void add_analysis(CLI::App* cmd, Config& cfg, bool direction_required) {
  add_source(cmd, cfg);
  auto* dir = cmd->add_option("--direction", cfg.direction, "inward, outward or absolute")
                  ->check(CLI::IsMember({"inward", "outward", "absolute", "I", "O", "A"}));
  if (direction_required) dir->required();
  cmd->add_option("--geojson", cfg.geojson_path, "write GeoJSON layers to this path");
  cmd->add_flag("--strict-unreachable", cfg.strict_unreachable,
                "count nodes that reach no POI as inconsistent");
  cmd->add_flag("--json", cfg.json, "print JSON instead of a table");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config cfg;
  CLI::App app{"Street network inconsistency analysis"};
  app.require_subcommand(1, 1);

  auto* track_cmd = app.add_subcommand("track", "count inconsistent nodes per POI");
  add_analysis(track_cmd, cfg, true);

  auto* reduce_cmd = app.add_subcommand("reduce", "suggest POI moves that lower the total");
  add_analysis(reduce_cmd, cfg, true);
  reduce_cmd->add_option("--timeout", cfg.timeout_s, "stop after this many seconds, 0 for none");

  auto* centrality_cmd = app.add_subcommand("centrality", "straightness scores");
  add_analysis(centrality_cmd, cfg, false);
  centrality_cmd->add_option("--poi", cfg.poi_label, "score this POI's perimeter instead of the whole network");

  auto* whatif_cmd = app.add_subcommand("whatif", "compare totals before and after an edit");
  add_analysis(whatif_cmd, cfg, true);
  whatif_cmd->add_option("--add", cfg.add, "NODE[:LABEL]");
  whatif_cmd->add_option("--move", cfg.move, "FROM:TO");
  whatif_cmd->add_option("--remove", cfg.remove, "NODE");

  auto* serve_cmd = app.add_subcommand("serve", "run the HTTP service");
  serve_cmd->add_option("--host", cfg.host, "address to bind");
  serve_cmd->add_option("--port", cfg.port, "port, 0 picks a free one")->check(CLI::Range(0, 65535));
  serve_cmd->add_option("--snapshot-dir", cfg.snapshot_dir, "write session snapshots here");
  serve_cmd->add_option("--threads", cfg.threads, "worker threads, 0 for all cores");

  auto* convert_cmd = app.add_subcommand("convert", "write a network as NETGEO");
  add_source(convert_cmd, cfg);
  convert_cmd->add_option("-o,--output", cfg.output_path, "output file, standard output if omitted");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  const auto needs_source = [&](CLI::App* cmd) {
    return cmd->parsed() && cfg.net_path.empty() && cfg.osm_path.empty() && cfg.fixture.empty();
  };
  for (CLI::App* cmd : {track_cmd, reduce_cmd, centrality_cmd, whatif_cmd, convert_cmd}) {
    if (needs_source(cmd)) {
      err << "error: one of --net, --osm or --fixture is required\n";
      return kExitInput;
    }
  }

  try {
    if (track_cmd->parsed()) return cmd_track(cfg, out, err);
    if (reduce_cmd->parsed()) return cmd_reduce(cfg, out, err);
    if (centrality_cmd->parsed()) return cmd_centrality(cfg, out, err);
    if (whatif_cmd->parsed()) return cmd_whatif(cfg, out, err);
    if (convert_cmd->parsed()) return cmd_convert(cfg, out, err);
    return cmd_serve(cfg, out, err);
  } catch (const DuplicatePoiError& e) {
    err << "error: " << e.what() << '\n';
    return kExitPois;
  } catch (const InvalidEditError& e) {
    err << "error: invalid edit: " << e.what() << '\n';
    return kExitPois;
  } catch (const PoiError& e) {
    err << "error: " << e.what() << '\n';
    return kExitPois;
  } catch (const std::out_of_range& e) {
    err << "error: invalid POI: " << e.what() << '\n';
    return kExitPois;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
}

}  // namespace urbanet::cli
