// Deterministic synthetic street networks for tests, demos and benchmarks.
#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "urbanet/network.hpp"
#include "urbanet/poi_set.hpp"

namespace urbanet::fixtures {

struct Instance {
  std::string name;
  Network net;
  PoiSet pois;
};

/// Portable draws from mt19937_64 (the standard distributions are not
/// reproducible across standard libraries).
double uniform01(std::mt19937_64& rng);
std::uint64_t below(std::mt19937_64& rng, std::uint64_t bound);

struct GridOptions {
  std::size_t rows = 10;
  std::size_t cols = 10;
  GeoPoint origin{-22.02, -47.90};
  double spacing_deg = 0.001;
  /// Uniform node displacement as a fraction of spacing, per axis.
  double jitter = 0.0;
  /// Share of street segments that become one-way, orientation chosen at random.
  double one_way_fraction = 0.0;
  std::uint64_t seed = 1;
};

/// Row-major grid; node id = row * cols + col. Every segment between
/// neighbours is a street, two-way unless selected as one-way.
Network grid(const GridOptions& options);

/// Node id of a grid cell.
inline NodeId grid_node(const GridOptions& options, std::size_t row, std::size_t col) {
  return NodeId(static_cast<std::uint32_t>(row * options.cols + col));
}

/// `count` distinct random nodes labelled poi_0..poi_{count-1}.
PoiSet random_pois(const Network& net, std::size_t count, std::mt19937_64& rng);

struct RandomInstanceOptions {
  std::size_t min_side = 5;
  std::size_t max_side = 20;
  double min_one_way = 0.10;
  double max_one_way = 0.40;
  std::size_t min_pois = 2;
  std::size_t max_pois = 8;
};

/// Jittered grid with random one-way streets and random POIs.
Instance random_instance(std::uint64_t seed, const RandomInstanceOptions& options = {});

/// Random weighted digraph on `nodes` nodes with scattered coordinates.
Instance random_digraph(std::uint64_t seed, std::size_t nodes, double edge_probability,
                        std::size_t poi_count);

/// Three nodes on the equator: A(0, 0), X(0, 0.0009), B(0, 0.002) with edges
/// X->B, B->A, A->X, B->X. X is inline-closest to A but can reach A only via B.
Instance three_node();

/// One POI owns most of the map while three others crowd a corner; the
/// lone POI's area has one-way streets.
Instance oversized_perimeter(std::uint64_t seed = 7);

/// Two POIs on neighbouring nodes sharing a small area, among others.
Instance adjacent_pois(std::uint64_t seed = 11);

/// Large jittered grid (rows x cols) with a spread-out POI layout, used for
/// timing the reducer.
Instance synthetic_city(std::size_t rows, std::size_t cols, double two_way_fraction,
                        std::size_t poi_rows, std::size_t poi_cols, std::uint64_t seed);

/// Fixtures reachable by name from the CLI and the service.
std::vector<std::string> names();
std::optional<Instance> by_name(std::string_view name, std::uint64_t seed = 1);

}  // namespace urbanet::fixtures
