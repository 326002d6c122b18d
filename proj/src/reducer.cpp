#include "urbanet/reducer.hpp"

#include <algorithm>
#include <map>

#include "urbanet/centrality.hpp"
#include "urbanet/parallel.hpp"

namespace urbanet {

namespace {

using Clock = std::chrono::steady_clock;

// Memoizes the straightness argmax per consistent set; sets of POIs far from
// the last move are unchanged between passes.
class CentralCache {
 public:
  CentralCache(const Network& net, Direction c, std::size_t threads)
      : net_(net), c_(c), threads_(threads) {}

  NodeId central(const std::vector<NodeId>& members) {
    auto it = memo_.find(members);
    if (it != memo_.end()) return it->second;
    const NodeId best = most_central(net_, members, c_, threads_);
    memo_.emplace(members, best);
    return best;
  }

 private:
  const Network& net_;
  Direction c_;
  std::size_t threads_;
  std::map<std::vector<NodeId>, NodeId> memo_;
};

}  // namespace

RelocationPlan reduce(const Tracker& tracker, const PoiSet& pois, Direction c,
                      const ReduceOptions& options) {
  const auto started = Clock::now();
  auto out_of_time = [&] {
    return options.time_limit && Clock::now() - started > *options.time_limit;
  };

  RelocationPlan plan;
  plan.direction = c;
  plan.initial_pois = pois;

  PoiSet current = pois;
  InconsistencyReport best = tracker.track(current, c);
  plan.totals_before = best.total;
  plan.per_poi_before = best.counts();

  CentralCache centrals(tracker.network(), c, options.track.threads);
  std::vector<char> moved(pois.size(), 0);

  while (std::count(moved.begin(), moved.end(), 0) > 0) {
    if (out_of_time()) {
      plan.timed_out = true;
      break;
    }
    IterationTrace trace;
    trace.total_before = best.total;

    for (std::size_t slot = 0; slot < current.size(); ++slot) {
      if (moved[slot]) continue;
      CandidateEvaluation eval{slot, std::nullopt, std::nullopt};
      if (!best.consistent[slot].empty()) eval.candidate = centrals.central(best.consistent[slot]);
      trace.candidates.push_back(eval);
    }

    // Candidates are independent; only the commit below is ordered.
    std::vector<std::optional<InconsistencyReport>> reports(trace.candidates.size());
    parallel_for(trace.candidates.size(), options.track.threads, [&](std::size_t, std::size_t k) {
      const CandidateEvaluation& eval = trace.candidates[k];
      if (!eval.candidate || out_of_time()) return;
      // Staying put changes nothing; landing on another POI would merge two.
      if (*eval.candidate == current[eval.slot].node || current.contains(*eval.candidate)) return;
      reports[k] = tracker.track(current.with_moved(eval.slot, *eval.candidate), c);
    });
    if (out_of_time()) plan.timed_out = true;

    std::optional<std::size_t> chosen;
    std::size_t lowest = best.total;
    for (std::size_t k = 0; k < trace.candidates.size(); ++k) {
      if (!reports[k]) continue;
      trace.candidates[k].total = reports[k]->total;
      if (reports[k]->total < lowest) {
        lowest = reports[k]->total;
        chosen = k;
      }
    }

    if (!chosen) {
      plan.iterations.push_back(std::move(trace));
      break;
    }
    const CandidateEvaluation& win = trace.candidates[*chosen];
    plan.moves.push_back(Move{win.slot, current[win.slot].label, current[win.slot].node,
                              *win.candidate, lowest});
    moved[win.slot] = 1;
    current = current.with_moved(win.slot, *win.candidate);
    best = std::move(*reports[*chosen]);
    trace.committed_slot = win.slot;
    plan.iterations.push_back(std::move(trace));

    std::vector<NodeId> keep = current.nodes();
    for (const auto& eval : plan.iterations.back().candidates) {
      if (eval.candidate) keep.push_back(*eval.candidate);
    }
    tracker.retain(keep);
    if (plan.timed_out) break;
  }

  plan.totals_after = best.total;
  plan.per_poi_after = best.counts();
  plan.final_pois = current;
  return plan;
}

RelocationPlan reduce(const Network& net, const PoiSet& pois, Direction c,
                      const ReduceOptions& options) {
  return reduce(Tracker(net, options.track), pois, c, options);
}

PoiSet apply_edit(const Network& net, const PoiSet& pois, const PoiEdit& edit) {
  auto check_node = [&](NodeId v) {
    if (!net.contains(v)) throw InvalidEditError("node " + std::to_string(v.value) + " does not exist");
  };
  PoiSet next = pois;
  for (const Poi& poi : edit.add) {
    check_node(poi.node);
    if (next.contains(poi.node)) {
      throw DuplicatePoiError("duplicate POI: node " + std::to_string(poi.node.value) +
                              " already hosts " + next[*next.slot_of(poi.node)].label);
    }
    std::string label = poi.label.empty() ? "poi_" + std::to_string(poi.node.value) : poi.label;
    if (next.slot_of(label)) throw InvalidEditError("duplicate POI label " + label);
    next = next.with_added(poi.node, std::move(label));
  }
  for (const auto& [from, to] : edit.moves) {
    check_node(from);
    check_node(to);
    const auto slot = next.slot_of(from);
    if (!slot) throw InvalidEditError("node " + std::to_string(from.value) + " is not a POI");
    if (from == to) continue;
    if (next.contains(to)) {
      throw DuplicatePoiError("duplicate POI: node " + std::to_string(to.value) + " already hosts " +
                              next[*next.slot_of(to)].label);
    }
    next = next.with_moved(*slot, to);
  }
  for (NodeId v : edit.remove) {
    check_node(v);
    if (!next.contains(v)) throw InvalidEditError("node " + std::to_string(v.value) + " is not a POI");
    next = next.without(v);
  }
  if (next.empty()) throw InvalidEditError("edit leaves no POIs");
  return next;
}

InconsistencyReport what_if(const Tracker& tracker, const PoiSet& pois, const PoiEdit& edit,
                            Direction c) {
  return tracker.track(apply_edit(tracker.network(), pois, edit), c);
}

InconsistencyReport what_if(const Network& net, const PoiSet& pois, const PoiEdit& edit,
                            Direction c, TrackOptions options) {
  return what_if(Tracker(net, options), pois, edit, c);
}

}  // namespace urbanet
