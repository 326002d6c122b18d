#include "urbanet/fixtures.hpp"

#include <algorithm>
#include <stdexcept>

namespace urbanet::fixtures {

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint64_t below(std::mt19937_64& rng, std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("empty range");
  return rng() % bound;
}

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

std::vector<Node> grid_nodes(const GridOptions& o, std::mt19937_64& rng) {
  std::vector<Node> nodes;
  nodes.reserve(o.rows * o.cols);
  for (std::size_t r = 0; r < o.rows; ++r) {
    for (std::size_t c = 0; c < o.cols; ++c) {
      const double dlat = o.jitter > 0 ? uniform(rng, -o.jitter, o.jitter) * o.spacing_deg : 0.0;
      const double dlon = o.jitter > 0 ? uniform(rng, -o.jitter, o.jitter) * o.spacing_deg : 0.0;
      const auto id = NodeId(static_cast<std::uint32_t>(nodes.size()));
      nodes.push_back(Node{id,
                           GeoPoint::make(o.origin.lat + static_cast<double>(r) * o.spacing_deg + dlat,
                                          o.origin.lon + static_cast<double>(c) * o.spacing_deg + dlon),
                           std::nullopt});
    }
  }
  return nodes;
}

void add_street(std::vector<EdgeSpec>& edges, NodeId a, NodeId b, double one_way,
                std::mt19937_64& rng) {
  if (one_way > 0 && uniform01(rng) < one_way) {
    if (uniform01(rng) < 0.5) std::swap(a, b);
    edges.push_back(EdgeSpec{a, b, std::nullopt});
  } else {
    edges.push_back(EdgeSpec{a, b, std::nullopt});
    edges.push_back(EdgeSpec{b, a, std::nullopt});
  }
}

PoiSet labelled(const std::vector<NodeId>& nodes, std::string_view prefix) {
  std::vector<Poi> pois;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    pois.push_back(Poi{nodes[i], std::string(prefix) + "_" + std::to_string(i)});
  }
  return PoiSet(std::move(pois));
}

}  // namespace

Network grid(const GridOptions& o) {
  if (o.rows == 0 || o.cols == 0) throw std::invalid_argument("grid needs rows and cols");
  std::mt19937_64 rng(o.seed);
  std::vector<Node> nodes = grid_nodes(o, rng);
  std::vector<EdgeSpec> edges;
  for (std::size_t r = 0; r < o.rows; ++r) {
    for (std::size_t c = 0; c < o.cols; ++c) {
      if (c + 1 < o.cols) add_street(edges, grid_node(o, r, c), grid_node(o, r, c + 1), o.one_way_fraction, rng);
      if (r + 1 < o.rows) add_street(edges, grid_node(o, r, c), grid_node(o, r + 1, c), o.one_way_fraction, rng);
    }
  }
  return Network::build(std::move(nodes), std::move(edges));
}

PoiSet random_pois(const Network& net, std::size_t count, std::mt19937_64& rng) {
  if (count > net.node_count()) throw std::invalid_argument("more POIs than nodes");
  std::vector<NodeId> chosen;
  while (chosen.size() < count) {
    const NodeId v(static_cast<std::uint32_t>(below(rng, net.node_count())));
    if (std::find(chosen.begin(), chosen.end(), v) == chosen.end()) chosen.push_back(v);
  }
  return labelled(chosen, "poi");
}

Instance random_instance(std::uint64_t seed, const RandomInstanceOptions& options) {
  std::mt19937_64 rng(seed);
  const auto side = [&] {
    return options.min_side + below(rng, options.max_side - options.min_side + 1);
  };
  GridOptions g;
  g.rows = side();
  g.cols = side();
  g.jitter = 0.2;
  g.one_way_fraction = uniform(rng, options.min_one_way, options.max_one_way);
  g.seed = rng();
  Network net = grid(g);
  const std::size_t count = options.min_pois + below(rng, options.max_pois - options.min_pois + 1);
  PoiSet pois = random_pois(net, count, rng);
  return Instance{"random-" + std::to_string(seed), std::move(net), std::move(pois)};
}

Instance random_digraph(std::uint64_t seed, std::size_t n, double edge_probability,
                        std::size_t poi_count) {
  std::mt19937_64 rng(seed);
  std::vector<Node> nodes;
  for (std::size_t i = 0; i < n; ++i) {
    nodes.push_back(Node{NodeId(static_cast<std::uint32_t>(i)),
                         GeoPoint::make(-22.0 + uniform(rng, 0.0, 0.01), -47.9 + uniform(rng, 0.0, 0.01)),
                         std::nullopt});
  }
  std::vector<EdgeSpec> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && uniform01(rng) < edge_probability) {
        edges.push_back(EdgeSpec{NodeId(static_cast<std::uint32_t>(i)),
                                 NodeId(static_cast<std::uint32_t>(j)), std::nullopt});
      }
    }
  }
  Network net = Network::build(std::move(nodes), std::move(edges));
  PoiSet pois = random_pois(net, poi_count, rng);
  return Instance{"digraph-" + std::to_string(seed), std::move(net), std::move(pois)};
}

Instance three_node() {
  std::vector<Node> nodes{
      Node{NodeId(0), GeoPoint::make(0.0, 0.0), std::string("A")},
      Node{NodeId(1), GeoPoint::make(0.0, 0.002), std::string("B")},
      Node{NodeId(2), GeoPoint::make(0.0, 0.0009), std::string("X")},
  };
  std::vector<EdgeSpec> edges{
      {NodeId(2), NodeId(1), std::nullopt},
      {NodeId(1), NodeId(0), std::nullopt},
      {NodeId(0), NodeId(2), std::nullopt},
      {NodeId(1), NodeId(2), std::nullopt},
  };
  return Instance{"three-node", Network::build(std::move(nodes), std::move(edges)),
                  PoiSet({Poi{NodeId(0), "A"}, Poi{NodeId(1), "B"}})};
}

Instance oversized_perimeter(std::uint64_t seed) {
  GridOptions g;
  g.rows = 16;
  g.cols = 16;
  g.jitter = 0.2;
  g.one_way_fraction = 0.3;
  g.seed = seed;
  Network net = grid(g);
  PoiSet pois = labelled({grid_node(g, 1, 1), grid_node(g, 1, 4), grid_node(g, 4, 1),
                          grid_node(g, 7, 7)},
                         "hospital");
  return Instance{"oversized-perimeter", std::move(net), std::move(pois)};
}

Instance adjacent_pois(std::uint64_t seed) {
  GridOptions g;
  g.rows = 14;
  g.cols = 14;
  g.jitter = 0.2;
  g.one_way_fraction = 0.3;
  g.seed = seed;
  Network net = grid(g);
  PoiSet pois = labelled({grid_node(g, 5, 5), grid_node(g, 5, 6), grid_node(g, 11, 11),
                          grid_node(g, 2, 11), grid_node(g, 11, 2)},
                         "school");
  return Instance{"adjacent-pois", std::move(net), std::move(pois)};
}

Instance synthetic_city(std::size_t rows, std::size_t cols, double two_way_fraction,
                        std::size_t poi_rows, std::size_t poi_cols, std::uint64_t seed) {
  GridOptions g;
  g.rows = rows;
  g.cols = cols;
  g.jitter = 0.25;
  g.one_way_fraction = 1.0 - two_way_fraction;
  g.seed = seed;
  Network net = grid(g);
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<NodeId> sites;
  for (std::size_t i = 0; i < poi_rows; ++i) {
    for (std::size_t j = 0; j < poi_cols; ++j) {
      // Near the centre of each block, nudged by up to a quarter block.
      const double br = static_cast<double>(rows) / static_cast<double>(poi_rows);
      const double bc = static_cast<double>(cols) / static_cast<double>(poi_cols);
      const double r = (static_cast<double>(i) + 0.5 + uniform(rng, -0.25, 0.25)) * br;
      const double c = (static_cast<double>(j) + 0.5 + uniform(rng, -0.25, 0.25)) * bc;
      sites.push_back(grid_node(g, std::min(rows - 1, static_cast<std::size_t>(r)),
                                std::min(cols - 1, static_cast<std::size_t>(c))));
    }
  }
  return Instance{"synthetic-city", std::move(net), labelled(sites, "poi")};
}

std::vector<std::string> names() {
  return {"three-node", "grid-12", "oversized-perimeter", "adjacent-pois", "random"};
}

std::optional<Instance> by_name(std::string_view name, std::uint64_t seed) {
  if (name == "three-node") return three_node();
  if (name == "oversized-perimeter") return oversized_perimeter();
  if (name == "adjacent-pois") return adjacent_pois();
  if (name == "random") return random_instance(seed);
  if (name == "grid-12") {
    GridOptions g;
    g.rows = 12;
    g.cols = 12;
    g.jitter = 0.2;
    g.one_way_fraction = 0.0;
    g.seed = 4;  // fixed layout; this jitter leaves room for improvement in every direction
    Network net = grid(g);
    PoiSet pois = labelled({grid_node(g, 1, 1), grid_node(g, 1, 3), grid_node(g, 3, 1),
                            grid_node(g, 3, 3)},
                           "poi");
    return Instance{"grid-12", std::move(net), std::move(pois)};
  }
  return std::nullopt;
}

}  // namespace urbanet::fixtures
