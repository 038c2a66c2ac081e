#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "wm/model.hpp"

namespace wm {

/* Recurrent classes are the strongly connected components with no outgoing
 * edges; a single node without a self-loop is always transient. Classes are
 * ordered by their smallest member, members in declaration order. periods[i]
 * is the gcd of cycle lengths inside class i. */
struct NodeClassification {
  std::vector<std::vector<int>> recurrent_classes;
  std::vector<int> periods; /* aligned with recurrent_classes */
  std::vector<int> transient;
  bool strongly_connected;
};

NodeClassification classify_nodes(const WeakModel& m);

/* All strongly connected components (including trivial ones), same ordering
 * conventions as NodeClassification. Used by the classifier internals and by
 * property tests. */
std::vector<std::vector<int>> strongly_connected_components(const WeakModel& m);

/* Product graph on ordered same-colored node pairs (diagonal included):
 * (u,v) -> (u',v') when both component edges exist and u',v' share a color.
 * Requires a single-colored model. */
struct PairGraph {
  std::vector<std::pair<int, int>> nodes; /* lexicographic by node index */
  std::vector<std::vector<int>> adj;
  std::vector<int> index; /* u*n+v -> position in nodes, or -1 */
  int n;
  int pair_index(int u, int v) const { return index[u * n + v]; }
};

PairGraph pair_graph(const WeakModel& m);

enum class Regime { Untrackable, TrackableBounded, TrackableUnboundedPoly };
const char* to_string(Regime r);

/* Two distinct closed walks of equal length that agree somewhere, differ
 * somewhere, and permit a common color sequence. Node sequences include the
 * closing node (first == last). Indices refer to the model handed to
 * classify_trackability (witnesses are mapped back through the transform). */
struct IntersectingCyclePair {
  std::vector<int> cycle_a;
  std::vector<int> cycle_b;
};

/* Fork structure certifying unbounded polynomial growth: a closed walk of
 * period T at a, a path of length T from a to b, and a closed walk of period
 * T at b (a != b), all permitting one common color sequence. All three node
 * sequences have T+1 entries. */
struct ForkWitness {
  std::vector<int> cycle_a;
  std::vector<int> path;
  std::vector<int> cycle_b;
};

struct TrackabilityReport {
  Regime regime;
  std::optional<IntersectingCyclePair> intersecting; /* set when Untrackable */
  std::optional<ForkWitness> fork; /* set when TrackableUnboundedPoly */
};

/* Multi-colored inputs are transformed internally and witnesses mapped back.
 * Untrackable: some pair-graph component contains both a diagonal and an
 * off-diagonal node. Otherwise unbounded-polynomial growth is detected by a
 * triple-product search: same-colored a != b with a path (a,a,b) ~> (a,b,b)
 * under componentwise edges and equal colors, which projects directly onto
 * the fork witness. Everything else is bounded. */
TrackabilityReport classify_trackability(const WeakModel& m);

/* Direct-definition checks used to validate extracted witnesses. Both accept
 * multi-colored models ("same color" then means a shared color). */
bool verify_intersecting_cycle_pair(const WeakModel& m, const IntersectingCyclePair& w);
bool verify_fork_witness(const WeakModel& m, const ForkWitness& w);

/* Worst-case hypothesis bounds. M[v] is the largest number of out-neighbors
 * of v that can all emit one color; K is the largest number of nodes sharing
 * a color. Known start: 1 + sum(M[v]-1). Unknown start: K times that. The
 * bounds are meaningful when the model is strongly connected and the regime
 * is TrackableBounded; `valid` records whether both hold. */
struct BoundReport {
  std::uint64_t K;
  std::vector<std::uint64_t> M; /* per node, declaration order */
  std::uint64_t bound_known_start;
  std::uint64_t bound_unknown_start;
  bool strongly_connected;
  bool trackable_bounded;
  bool valid;
};

BoundReport hypothesis_bound(const WeakModel& m);
std::uint64_t bound_from_counts(std::uint64_t K, std::uint64_t sum_M_minus_1, bool known_start);

/* Color-preserving graph automorphisms, counted exactly by backtracking over
 * color-class-respecting assignments. Guarded to |V| <= 12. `generators`
 * holds the non-identity automorphisms (a generating set), truncated at 1024
 * if the group is enormous; `count` includes the identity and stays exact. */
struct AutomorphismReport {
  std::uint64_t count;
  std::vector<std::vector<int>> generators;
  bool generators_truncated;
};

AutomorphismReport automorphism_count(const WeakModel& m);

}  // namespace wm
