#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wm/markov.hpp"

namespace wm {

/* Reconstruction accuracy: sample random walks, decode each color sequence
 * with unknown-start viterbi, and score correctness at a fixed distance beta
 * from the end of the walk (position steps-1-beta). Traversal i draws from
 * derive_stream(seed, i), so the result is identical for any thread count. */
struct ReconstructionConfig {
  int traversals = 10000;
  int steps = 200;
  int start = 0; /* node index the walks start from */
  std::uint64_t seed = 0;
  int beta_max = 100;
  int threads = 1;
};

struct AccuracyCurve {
  std::vector<int> beta;           /* 0..beta_max */
  std::vector<double> alpha;       /* fraction decoded correctly */
  std::vector<std::uint64_t> n;    /* samples per row */
};

AccuracyCurve run_reconstruction_experiment(const MarkovChain& c, const ReconstructionConfig& cfg);

/* Least squares for 1 - alpha(beta) = A * exp(-beta / tau) on the log of the
 * miss rate. Rows enter the fit only while the miss rate is resolvable,
 * 1 - alpha >= 10 / n. Throws Error when fewer than two rows qualify or the
 * fitted slope does not decay. */
struct ExpFit {
  double A;
  double tau;
  int rows_used;
};

ExpFit fit_exponential_decay(const AccuracyCurve& curve);

/* Conditional entropy of the hidden walk given its color trace, estimated
 * over sampled traversals of length T from a fixed start. All entropies are
 * bits. identity_mean collects D_i = (H(X|y_i) - H(X) - log2 p(y_i)) / T,
 * whose expectation is exactly zero when emissions are deterministic; its
 * standard error gives the acceptance band. x_rate_stationary and
 * cross_check are NaN when the chain lacks a unique recurrent class. */
struct EntropyEstimate {
  int T;
  int n_samples;
  double bits_per_step;     /* mean of H(X|y_i) / T */
  double stderr_;
  double y_rate;            /* mean of -(1/T) log2 p(y_i) */
  double y_rate_stderr;
  double x_rate_exact;      /* path_entropy_exact(c, T, start) / T */
  double x_rate_stationary; /* markov_entropy_rate(c) */
  double cross_check;       /* x_rate_stationary - y_rate */
  double identity_mean;
  double identity_stderr;
};

EntropyEstimate estimate_conditional_entropy_rate(const MarkovChain& c, int T, int n_samples,
                                                  int start, std::uint64_t seed, int threads = 1);

/* CSV writers; throw Error when the file cannot be opened. Headers are
 * "beta,alpha,n" and "T,n_samples,bits_per_step,stderr". */
void write_accuracy_csv(const AccuracyCurve& curve, const std::string& path);
void write_entropy_csv(const EntropyEstimate& est, const std::string& path);

}  // namespace wm
