#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "support/oracles.hpp"
#include "urbanet/centrality.hpp"
#include "urbanet/fixtures.hpp"
#include "urbanet/inconsistency.hpp"

using namespace urbanet;

TEST(Straightness, SingleMemberScoresZero) {
  const auto inst = fixtures::three_node();
  const std::vector<NodeId> one{NodeId(1)};
  const auto f = straightness(inst.net, one, Direction::inward);
  EXPECT_EQ(f.scores, std::vector<double>{0.0});
  EXPECT_EQ(extract_central(f), NodeId(1));
}

TEST(Straightness, OneWayPairDependsOnDirection) {
  const Network net = Network::build(
      {Node{NodeId(0), GeoPoint::make(0, 0), {}}, Node{NodeId(1), GeoPoint::make(0, 0.001), {}}},
      {{NodeId(0), NodeId(1), {}}});
  const std::vector<NodeId> both{NodeId(0), NodeId(1)};
  // Inward measures trips arriving at the member: only node 1 is reached.
  EXPECT_EQ(straightness(net, both, Direction::inward).scores, (std::vector<double>{0.0, 1.0}));
  EXPECT_EQ(straightness(net, both, Direction::outward).scores, (std::vector<double>{1.0, 0.0}));
  EXPECT_EQ(straightness(net, both, Direction::absolute).scores, (std::vector<double>{0.5, 0.5}));
  EXPECT_EQ(extract_central(straightness(net, both, Direction::absolute)), NodeId(0));
}

TEST(Straightness, LShapeFavoursTheCorner) {
  // A(0,0) - B(0,0.001) - C(0.001,0.001), bidirectional. Diagonal A-C is about
  // 0.707 of the two-leg route, so A and C score about 0.854 and B scores 1.
  const Network net = Network::build({Node{NodeId(0), GeoPoint::make(0, 0), {}},
                                      Node{NodeId(1), GeoPoint::make(0, 0.001), {}},
                                      Node{NodeId(2), GeoPoint::make(0.001, 0.001), {}}},
                                     {{NodeId(0), NodeId(1), {}}, {NodeId(1), NodeId(0), {}},
                                      {NodeId(1), NodeId(2), {}}, {NodeId(2), NodeId(1), {}}});
  const std::vector<NodeId> all{NodeId(0), NodeId(1), NodeId(2)};
  const auto f = straightness(net, all, Direction::inward);
  EXPECT_NEAR(f.scores[0], 0.853553, 1e-4);
  EXPECT_NEAR(f.scores[1], 1.0, 1e-9);
  EXPECT_NEAR(f.scores[2], 0.853553, 1e-4);
  EXPECT_EQ(extract_central(f), NodeId(1));
  const auto ref = oracle::straightness(net, all, Direction::inward);
  for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(f.scores[k], ref[k], 1e-6);
}

TEST(Straightness, MatchesReferenceAndStaysInUnitInterval) {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const auto inst = fixtures::random_instance(seed);
    std::mt19937_64 rng(seed);
    std::vector<NodeId> members;
    const std::size_t want = std::min<std::size_t>(30, inst.net.node_count());
    while (members.size() < want) {
      const NodeId v(static_cast<std::uint32_t>(fixtures::below(rng, inst.net.node_count())));
      if (std::find(members.begin(), members.end(), v) == members.end()) members.push_back(v);
    }
    for (Direction c : {Direction::inward, Direction::outward, Direction::absolute}) {
      const auto f = straightness(inst.net, members, c);
      const auto ref = oracle::straightness(inst.net, members, c);
      ASSERT_EQ(f.members, members);
      for (std::size_t k = 0; k < members.size(); ++k) {
        EXPECT_GE(f.scores[k], 0.0);
        EXPECT_LE(f.scores[k], 1.0 + 1e-9);
        EXPECT_NEAR(f.scores[k], ref[k], 1e-6) << "seed " << seed;
      }
    }
  }
}

TEST(Straightness, MemberOrderDoesNotMatter) {
  const auto inst = fixtures::random_instance(8);
  std::vector<NodeId> members;
  for (std::uint32_t v = 0; v < std::min<std::uint32_t>(40, inst.net.node_count()); ++v) members.emplace_back(v);
  const auto base = straightness(inst.net, members, Direction::absolute);
  std::mt19937_64 rng(1);
  for (int round = 0; round < 5; ++round) {
    auto shuffled = members;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const auto f = straightness(inst.net, shuffled, Direction::absolute);
    for (std::size_t k = 0; k < shuffled.size(); ++k) EXPECT_EQ(*f.score(shuffled[k]), *base.score(shuffled[k]));
    EXPECT_EQ(extract_central(f), extract_central(base));
  }
}

TEST(Straightness, RejectsEmptyAndDuplicateMembers) {
  const auto inst = fixtures::three_node();
  EXPECT_THROW(straightness(inst.net, {}, Direction::inward), std::invalid_argument);
  const std::vector<NodeId> dup{NodeId(0), NodeId(0)};
  EXPECT_THROW(straightness(inst.net, dup, Direction::inward), std::invalid_argument);
  EXPECT_THROW(extract_central(CentralityField{}), std::invalid_argument);
}

namespace {

void expect_same_central(const Network& net, std::span<const NodeId> members, const std::string& what) {
  for (Direction c : {Direction::inward, Direction::outward, Direction::absolute}) {
    const NodeId full = extract_central(straightness(net, members, c, 1));
    EXPECT_EQ(most_central(net, members, c, 1), full) << what << " " << code(c);
    EXPECT_EQ(most_central(net, members, c, 3), full) << what << " " << code(c) << " threaded";
  }
}

// Same coordinates as `net` with every weight scaled by a per-edge factor.
Network reweighted(const Network& net, std::mt19937_64& rng, double lo, double hi) {
  std::vector<EdgeSpec> specs;
  for (const Edge& e : net.edges()) {
    specs.push_back({e.source, e.target, e.weight * (lo + (hi - lo) * fixtures::uniform01(rng))});
  }
  return Network::build(std::vector<Node>(net.nodes().begin(), net.nodes().end()), specs);
}

}  // namespace

TEST(MostCentral, MatchesFullScoringOnConsistentSets) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const auto inst = fixtures::random_instance(seed);
    for (Direction c : {Direction::inward, Direction::outward, Direction::absolute}) {
      const auto report = track(inst.net, inst.pois, c);
      for (const auto& set : report.consistent) {
        if (set.empty()) continue;
        expect_same_central(inst.net, set, "seed " + std::to_string(seed));
      }
    }
  }
}

TEST(MostCentral, MatchesFullScoringOnSparseDigraphs) {
  // Many members unreachable from each other.
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto inst = fixtures::random_digraph(seed, 40, 0.04, 2);
    std::vector<NodeId> all;
    for (const Node& node : inst.net.nodes()) all.push_back(node.id);
    expect_same_central(inst.net, all, "digraph " + std::to_string(seed));
  }
}

TEST(MostCentral, MatchesFullScoringWithExplicitWeights) {
  std::mt19937_64 rng(5);
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    const auto inst = fixtures::random_instance(seed);
    std::vector<NodeId> all;
    for (const Node& node : inst.net.nodes()) all.push_back(node.id);
    // Shorter than the crow flies as well as longer.
    expect_same_central(reweighted(inst.net, rng, 0.3, 3.0), all, "weights " + std::to_string(seed));
  }
}

TEST(MostCentral, TiesGoToSmallestId) {
  // Unjittered two-way grid: mirror-image nodes score alike up to rounding.
  fixtures::GridOptions g;
  g.rows = 4;
  g.cols = 4;
  g.origin = GeoPoint::make(0.0, 0.0);
  const Network net = fixtures::grid(g);
  std::vector<NodeId> all;
  for (const Node& node : net.nodes()) all.push_back(node.id);
  expect_same_central(net, all, "grid");
  std::reverse(all.begin(), all.end());
  EXPECT_EQ(most_central(net, all, Direction::inward), extract_central(straightness(net, all, Direction::inward)));
}

TEST(MostCentral, HandlesTrivialSets) {
  const auto inst = fixtures::three_node();
  const std::vector<NodeId> one{NodeId(2)};
  EXPECT_EQ(most_central(inst.net, one, Direction::inward), NodeId(2));
  const std::vector<NodeId> all{NodeId(2), NodeId(0), NodeId(1)};
  expect_same_central(inst.net, all, "three-node");
  EXPECT_THROW(most_central(inst.net, {}, Direction::inward), std::invalid_argument);
}
