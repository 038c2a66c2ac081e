#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstddef>
#include <optional>
#include <vector>

#include "wm/model.hpp"

namespace wm {

/* Hypothesis counts are exact; untrackable models grow them exponentially,
 * so counts use arbitrary precision. */
using Count = boost::multiprecision::cpp_int;

/* One observation step. nodes holds the model nodes that can explain the
 * observed color at this step and are reachable from the previous layer
 * (ascending); counts[i] is the number of consistent node sequences ending
 * at nodes[i]; preds[i] holds positions into the previous layer. */
struct TrellisLayer {
  std::vector<int> nodes;
  std::vector<Count> counts;
  std::vector<std::vector<int>> preds;
};

/* Exact tracker over the hypothesis set: after feeding observations
 * y_1..y_t, count() is the number of node sequences x_1..x_t with
 * x_i -> x_{i+1} an edge and y_i a color of x_i (and x_1 == start when one
 * was given). Layers can be popped again, which makes the tracker usable as
 * the shared state of a depth-first search over observation sequences. The
 * model must outlive the tracker. */
struct Trellis {
  const WeakModel* model = nullptr;
  std::optional<int> start;
  std::vector<TrellisLayer> layers;

  void advance(int color); /* throws Error on an out-of-range color */
  void pop_layer();
  /* Empty layers stay empty, so a dead tracker never revives. */
  bool dead() const { return !layers.empty() && layers.back().nodes.empty(); }
  /* 1 before any observation (the empty sequence). */
  Count count() const;
};

Trellis init_tracker(const WeakModel& m, std::optional<int> start = std::nullopt);

/* Convenience wrapper: hypothesis count for a full color sequence. */
Count hypothesis_count(const WeakModel& m, const std::vector<int>& colors,
                       std::optional<int> start = std::nullopt);

/* Explicit hypothesis listing, lexicographic by node index sequence. total
 * is always the exact count; sequences is cut off at cap (truncated set
 * accordingly). */
struct Enumeration {
  std::vector<std::vector<int>> sequences;
  Count total;
  bool truncated;
};

Enumeration enumerate_hypotheses(const WeakModel& m, const std::vector<int>& colors,
                                 std::size_t cap = 10000,
                                 std::optional<int> start = std::nullopt);

/* Worst-case hypothesis counts with unknown start: n[t-1] is the maximum of
 * hypothesis_count over all color sequences of length t, witnesses[t-1] the
 * lexicographically first sequence attaining it (empty when the maximum is
 * zero). Found by depth-first search over color sequences sharing one
 * tracker; branches with no surviving hypothesis are pruned. Guarded: throws
 * Error when color_count^t_max exceeds 1e7. */
struct GrowthProfile {
  std::vector<Count> n;
  std::vector<std::vector<int>> witnesses;
};

GrowthProfile worst_case_growth(const WeakModel& m, int t_max);

}  // namespace wm
