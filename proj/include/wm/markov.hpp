#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "wm/model.hpp"

namespace wm {

/* splitmix64 finalizer; also the seed scrambler for Rng. */
std::uint64_t mix64(std::uint64_t x);
/* Seed for the i-th independent stream of a base seed. Streams are used one
 * per sampled traversal, so results do not depend on thread scheduling. */
std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t index);

/* mt19937_64 behind a fixed-contract uniform: the top 53 bits of one draw,
 * scaled into [0,1). Identical sequences on every platform. */
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(mix64(seed)) {}
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  std::uint64_t next() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

/* Attach per-edge probabilities (aligned with declaration order). Values are
 * validated by finalize: present for every edge, each in (0,1]. */
void attach_probabilities(WeakModel& m, const std::vector<double>& probs);
/* Uniform over each node's out-edges; every node needs at least one. */
void attach_uniform_probabilities(WeakModel& m);

/* A weak model whose edges carry probabilities. Each node's outgoing mass
 * must sum to 1 within 1e-9. */
class MarkovChain {
 public:
  explicit MarkovChain(WeakModel model);
  const WeakModel& model() const { return model_; }
  int n() const { return model_.node_count(); }
  double prob(int u, int v) const; /* 0 when (u,v) is not an edge */
  /* (target, probability) in edge declaration order. */
  const std::vector<std::pair<int, double>>& out(int u) const { return out_[u]; }
  /* (source, probability) ascending by source, the canonical tie-break
   * order for decoding. */
  const std::vector<std::pair<int, double>>& in_sorted(int u) const { return in_[u]; }

 private:
  WeakModel model_;
  std::vector<std::vector<std::pair<int, double>>> out_;
  std::vector<std::vector<std::pair<int, double>>> in_;
};

struct Distribution {
  std::vector<double> p;  /* per node, declaration order */
  double residual;        /* max abs defect of the defining equations */
};

/* Stationary distribution: zero on transient nodes, solved on the recurrent
 * class. Requires exactly one recurrent class. */
Distribution stationary_distribution(const MarkovChain& c);

struct TimingVector {
  std::vector<double> values; /* per node, declaration order */
  double residual;            /* max abs defect of the linear system */
};

/* Expected steps until the walk enters a recurrent class; zero there. */
TimingVector mean_absorption_times(const MarkovChain& c);
/* Expected steps until the walk first hits target; zero at target. Every
 * node must be able to reach the target. */
TimingVector mean_first_passage(const MarkovChain& c, int target);
/* Expected return time 1 + sum_j P(v,j) * t_j, t = first passage to v. */
double mean_recurrence_time(const MarkovChain& c, int v);

/* Random walk observed through node colors; single-colored models only. */
struct Traversal {
  std::vector<int> nodes;  /* length steps, starts at start */
  std::vector<int> colors; /* palette indices, aligned with nodes */
};

Traversal sample_traversal(const MarkovChain& c, int start, int steps, Rng& rng);

/* Most probable node sequence for an observed color sequence (single-colored
 * models). Without a start the first node carries a uniform prior over the
 * nodes showing the first color, so log2_prob includes -log2 of their
 * number. Ties prefer the smaller node index at every step. */
struct ViterbiResult {
  std::vector<int> nodes;
  double log2_prob; /* -inf when no consistent sequence exists */
  bool feasible;
};

ViterbiResult viterbi(const MarkovChain& c, const std::vector<int>& colors,
                      std::optional<int> start = std::nullopt);

/* log2 of the probability of observing the color sequence (same start
 * convention as viterbi); -inf when inconsistent. */
double forward_log_prob(const MarkovChain& c, const std::vector<int>& colors,
                        std::optional<int> start = std::nullopt);

/* Entropy (bits) of the hidden node sequence given the observations,
 * H(X_1|y) plus the expected entropies of the posterior transition kernels,
 * via forward-backward in the log2 domain. Throws when the sequence has
 * zero probability. */
double posterior_path_entropy(const MarkovChain& c, const std::vector<int>& colors,
                              std::optional<int> start = std::nullopt);

/* Exact entropy (bits) of the random node sequence of the given length from
 * a fixed start, by propagating the step marginals. */
double path_entropy_exact(const MarkovChain& c, int steps, int start);

/* Stationary entropy rate -sum_i pi_i sum_j P_ij log2 P_ij. */
double markov_entropy_rate(const MarkovChain& c);

}  // namespace wm
