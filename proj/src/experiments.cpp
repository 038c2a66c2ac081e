#include "wm/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <thread>

namespace wm {

namespace {

/* Runs fn(i) for i in [0, count) split across `threads` workers; exceptions
 * are rethrown on the calling thread. fn must only touch slot i of shared
 * output. */
template <typename Fn>
void parallel_for(int count, int threads, Fn&& fn) {
  threads = std::max(1, std::min(threads, count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  int chunk = (count + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    int lo = t * chunk;
    int hi = std::min(count, lo + chunk);
    pool.emplace_back([&, t, lo, hi]() {
      try {
        for (int i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

struct MeanStderr {
  double mean;
  double se;
};

/* Two-pass, reduced in index order, so the result does not depend on how
 * samples were distributed over threads. */
MeanStderr mean_stderr(const std::vector<double>& xs) {
  const size_t n = xs.size();
  double sum = 0.0;
  for (double x : xs) sum += x;
  double mean = sum / static_cast<double>(n);
  if (n < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  double var = ss / static_cast<double>(n - 1);
  return {mean, std::sqrt(var / static_cast<double>(n))};
}

}  // namespace

AccuracyCurve run_reconstruction_experiment(const MarkovChain& c, const ReconstructionConfig& cfg) {
  if (cfg.traversals < 1) throw Error("traversals must be at least 1");
  if (cfg.steps < 1) throw Error("steps must be at least 1");
  if (cfg.beta_max < 0 || cfg.beta_max >= cfg.steps)
    throw Error("beta_max must lie in [0, steps-1]");
  if (cfg.threads < 1) throw Error("threads must be at least 1");

  const int rows = cfg.beta_max + 1;
  const int threads = std::max(1, std::min(cfg.threads, cfg.traversals));
  std::vector<std::vector<std::uint64_t>> correct(threads,
                                                  std::vector<std::uint64_t>(rows, 0));
  int chunk = (cfg.traversals + threads - 1) / threads;
  parallel_for(cfg.traversals, threads, [&](int i) {
    Rng rng(derive_stream(cfg.seed, static_cast<std::uint64_t>(i)));
    Traversal tr = sample_traversal(c, cfg.start, cfg.steps, rng);
    ViterbiResult vit = viterbi(c, tr.colors);
    auto& mine = correct[std::min(i / chunk, threads - 1)];
    for (int beta = 0; beta < rows; ++beta) {
      int pos = cfg.steps - 1 - beta;
      if (vit.nodes[pos] == tr.nodes[pos]) ++mine[beta];
    }
  });

  AccuracyCurve curve;
  curve.beta.resize(rows);
  curve.alpha.resize(rows);
  curve.n.assign(rows, static_cast<std::uint64_t>(cfg.traversals));
  for (int beta = 0; beta < rows; ++beta) {
    std::uint64_t total = 0;
    for (int t = 0; t < threads; ++t) total += correct[t][beta];
    curve.beta[beta] = beta;
    curve.alpha[beta] = static_cast<double>(total) / static_cast<double>(cfg.traversals);
  }
  return curve;
}

ExpFit fit_exponential_decay(const AccuracyCurve& curve) {
  std::vector<double> xs;
  std::vector<double> zs;
  for (size_t i = 0; i < curve.beta.size(); ++i) {
    double miss = 1.0 - curve.alpha[i];
    double floor = 10.0 / static_cast<double>(curve.n[i]);
    if (miss < floor) continue;
    xs.push_back(static_cast<double>(curve.beta[i]));
    zs.push_back(std::log(miss));
  }
  if (xs.size() < 3)
    throw Error("too few resolvable rows for a decay fit (" + std::to_string(xs.size()) + ")");
  const double n = static_cast<double>(xs.size());
  double sx = 0.0, sz = 0.0, sxx = 0.0, sxz = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sz += zs[i];
    sxx += xs[i] * xs[i];
    sxz += xs[i] * zs[i];
  }
  double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw Error("degenerate abscissa in decay fit");
  double slope = (n * sxz - sx * sz) / denom;
  double intercept = (sz - slope * sx) / n;
  if (slope >= 0.0) throw Error("accuracy curve shows no decay");
  ExpFit fit;
  fit.A = std::exp(intercept);
  fit.tau = -1.0 / slope;
  fit.rows_used = static_cast<int>(xs.size());
  return fit;
}

EntropyEstimate estimate_conditional_entropy_rate(const MarkovChain& c, int T, int n_samples,
                                                  int start, std::uint64_t seed, int threads) {
  if (T < 1) throw Error("T must be at least 1");
  if (n_samples < 1) throw Error("n_samples must be at least 1");
  if (threads < 1) throw Error("threads must be at least 1");

  const double h_exact = path_entropy_exact(c, T, start);
  std::vector<double> h_per_step(n_samples);
  std::vector<double> y_per_step(n_samples);
  std::vector<double> d_per_step(n_samples);
  parallel_for(n_samples, threads, [&](int i) {
    Rng rng(derive_stream(seed, static_cast<std::uint64_t>(i)));
    Traversal tr = sample_traversal(c, start, T, rng);
    double h = posterior_path_entropy(c, tr.colors, start);
    double lp = forward_log_prob(c, tr.colors, start);
    h_per_step[i] = h / T;
    y_per_step[i] = -lp / T;
    d_per_step[i] = (h - h_exact - lp) / T;
  });

  EntropyEstimate est;
  est.T = T;
  est.n_samples = n_samples;
  auto hs = mean_stderr(h_per_step);
  auto ys = mean_stderr(y_per_step);
  auto ds = mean_stderr(d_per_step);
  est.bits_per_step = hs.mean;
  est.stderr_ = hs.se;
  est.y_rate = ys.mean;
  est.y_rate_stderr = ys.se;
  est.x_rate_exact = h_exact / T;
  try {
    est.x_rate_stationary = markov_entropy_rate(c);
    est.cross_check = est.x_rate_stationary - est.y_rate;
  } catch (const Error&) {
    est.x_rate_stationary = std::numeric_limits<double>::quiet_NaN();
    est.cross_check = std::numeric_limits<double>::quiet_NaN();
  }
  est.identity_mean = ds.mean;
  est.identity_stderr = ds.se;
  return est;
}

void write_accuracy_csv(const AccuracyCurve& curve, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw Error("cannot open " + path + " for writing");
  f << "beta,alpha,n\n";
  for (size_t i = 0; i < curve.beta.size(); ++i)
    f << curve.beta[i] << "," << format_double(curve.alpha[i]) << "," << curve.n[i] << "\n";
  if (!f.good()) throw Error("write to " + path + " failed");
}

void write_entropy_csv(const EntropyEstimate& est, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw Error("cannot open " + path + " for writing");
  f << "T,n_samples,bits_per_step,stderr\n";
  f << est.T << "," << est.n_samples << "," << format_double(est.bits_per_step) << ","
    << format_double(est.stderr_) << "\n";
  if (!f.good()) throw Error("write to " + path + " failed");
}

}  // namespace wm
