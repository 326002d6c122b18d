// Greedy POI relocation guided by straightness centrality, and what-if edits.
#pragma once

#include <chrono>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "urbanet/inconsistency.hpp"
#include "urbanet/network.hpp"
#include "urbanet/poi_set.hpp"

namespace urbanet {

struct Move {
  std::size_t slot = 0;  // position in the input PoiSet
  std::string label;
  NodeId from;
  NodeId to;
  std::size_t total_after = 0;  // total inconsistencies once this move is applied
};

/// One unmoved POI's proposal in one pass of the greedy loop.
struct CandidateEvaluation {
  std::size_t slot = 0;
  std::optional<NodeId> candidate;  // none when the POI has no consistent node
  std::optional<std::size_t> total;  // none when the candidate was not tracked
};

struct IterationTrace {
  std::size_t total_before = 0;
  std::vector<CandidateEvaluation> candidates;
  std::optional<std::size_t> committed_slot;
};

struct RelocationPlan {
  Direction direction = Direction::inward;
  std::vector<Move> moves;
  std::size_t totals_before = 0;
  std::size_t totals_after = 0;
  std::vector<std::size_t> per_poi_before;
  std::vector<std::size_t> per_poi_after;
  PoiSet initial_pois;
  PoiSet final_pois;
  std::vector<IterationTrace> iterations;
  bool timed_out = false;
};

struct ReduceOptions {
  TrackOptions track;
  /// Stop between evaluations once exceeded; moves committed so far are kept.
  std::optional<std::chrono::milliseconds> time_limit;
};

/// Repeatedly proposes, for every POI not yet moved, the most straightness-
/// central consistent node of its perimeter, tracks the configuration with
/// that single replacement, and commits the proposal with the lowest total if
/// it is strictly below the current total. Each POI moves at most once; the
/// loop ends when no proposal improves. The total never increases.
RelocationPlan reduce(const Tracker& tracker, const PoiSet& pois, Direction c,
                      const ReduceOptions& options = {});
RelocationPlan reduce(const Network& net, const PoiSet& pois, Direction c,
                      const ReduceOptions& options = {});

class InvalidEditError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Changes to a PoiSet, applied as: additions, then moves, then removals.
struct PoiEdit {
  std::vector<Poi> add;  // an empty label becomes "poi_<node>"
  std::vector<std::pair<NodeId, NodeId>> moves;  // (current node, new node)
  std::vector<NodeId> remove;

  bool empty() const { return add.empty() && moves.empty() && remove.empty(); }
};

/// Throws DuplicatePoiError when two POIs would share a node and
/// InvalidEditError for unknown nodes, missing POIs or an empty result.
PoiSet apply_edit(const Network& net, const PoiSet& pois, const PoiEdit& edit);

/// Tracks the edited POI set; `pois` itself is untouched.
InconsistencyReport what_if(const Tracker& tracker, const PoiSet& pois, const PoiEdit& edit,
                            Direction c);
InconsistencyReport what_if(const Network& net, const PoiSet& pois, const PoiEdit& edit,
                            Direction c, TrackOptions options = {});

}  // namespace urbanet
