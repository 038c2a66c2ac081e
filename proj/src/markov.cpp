#include "wm/markov.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <string>

#include "wm/structure.hpp"

namespace wm {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

}  // namespace

std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ull;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBull;
  x ^= x >> 31;
  return x;
}

std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t index) {
  return mix64(seed + index * 0x9E3779B97F4A7C15ull);
}

void attach_probabilities(WeakModel& m, const std::vector<double>& probs) {
  m.probs = probs;
  m.finalize();
}

void attach_uniform_probabilities(WeakModel& m) {
  std::vector<double> probs(m.edge_count(), 0.0);
  for (int v = 0; v < m.node_count(); ++v) {
    if (m.out[v].empty()) throw Error("node " + m.nodes[v] + " has no out-edges");
    double p = 1.0 / static_cast<double>(m.out[v].size());
    for (int e : m.out[v]) probs[e] = p;
  }
  m.probs = std::move(probs);
  m.finalize();
}

MarkovChain::MarkovChain(WeakModel model) : model_(std::move(model)) {
  if (!model_.probs) throw Error("model has no edge probabilities");
  const int n = model_.node_count();
  out_.resize(n);
  in_.resize(n);
  for (int v = 0; v < n; ++v) {
    double sum = 0.0;
    for (int e : model_.out[v]) {
      double p = (*model_.probs)[e];
      out_[v].push_back({model_.edges[e].to, p});
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw Error("outgoing probabilities of node " + model_.nodes[v] + " sum to " +
                  format_double(sum));
    for (int e : model_.in[v]) in_[v].push_back({model_.edges[e].from, (*model_.probs)[e]});
    std::sort(in_[v].begin(), in_[v].end());
  }
}

double MarkovChain::prob(int u, int v) const {
  for (const auto& [w, p] : out_[u])
    if (w == v) return p;
  return 0.0;
}

Distribution stationary_distribution(const MarkovChain& c) {
  NodeClassification cls = classify_nodes(c.model());
  if (cls.recurrent_classes.size() != 1)
    throw Error("stationary distribution requires exactly one recurrent class");
  const auto& rc = cls.recurrent_classes[0];
  const int k = static_cast<int>(rc.size());
  std::vector<int> pos(c.n(), -1);
  for (int i = 0; i < k; ++i) pos[rc[i]] = i;

  /* pi P = pi on the class, with the last row replaced by normalization. */
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(k, k);
  for (int i = 0; i < k; ++i) {
    for (const auto& [w, p] : c.out(rc[i])) A(pos[w], i) += p;
    A(i, i) -= 1.0;
  }
  for (int j = 0; j < k; ++j) A(k - 1, j) = 1.0;
  Eigen::VectorXd b = Eigen::VectorXd::Zero(k);
  b(k - 1) = 1.0;
  Eigen::VectorXd pi = A.partialPivLu().solve(b);

  Distribution d;
  d.p.assign(c.n(), 0.0);
  for (int i = 0; i < k; ++i) d.p[rc[i]] = pi(i);
  double res = std::abs(pi.sum() - 1.0);
  for (int j = 0; j < k; ++j) {
    double acc = 0.0;
    for (int i = 0; i < k; ++i) acc += pi(i) * c.prob(rc[i], rc[j]);
    res = std::max(res, std::abs(acc - pi(j)));
  }
  d.residual = res;
  return d;
}

TimingVector mean_absorption_times(const MarkovChain& c) {
  NodeClassification cls = classify_nodes(c.model());
  std::vector<char> recurrent(c.n(), 0);
  for (const auto& rc : cls.recurrent_classes)
    for (int v : rc) recurrent[v] = 1;
  const auto& tr = cls.transient;
  const int k = static_cast<int>(tr.size());
  TimingVector t;
  t.values.assign(c.n(), 0.0);
  t.residual = 0.0;
  if (k == 0) return t;
  std::vector<int> pos(c.n(), -1);
  for (int i = 0; i < k; ++i) pos[tr[i]] = i;
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(k, k);
  for (int i = 0; i < k; ++i)
    for (const auto& [w, p] : c.out(tr[i]))
      if (!recurrent[w]) A(i, pos[w]) -= p;
  Eigen::VectorXd b = Eigen::VectorXd::Ones(k);
  Eigen::VectorXd x = A.partialPivLu().solve(b);
  t.residual = (A * x - b).cwiseAbs().maxCoeff();
  for (int i = 0; i < k; ++i) t.values[tr[i]] = x(i);
  return t;
}

TimingVector mean_first_passage(const MarkovChain& c, int target) {
  if (target < 0 || target >= c.n()) throw Error("target node index out of range");
  std::vector<char> can(c.n(), 0);
  can[target] = 1;
  std::deque<int> queue{target};
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (const auto& [u, p] : c.in_sorted(v))
      if (!can[u]) {
        can[u] = 1;
        queue.push_back(u);
      }
  }
  for (int v = 0; v < c.n(); ++v)
    if (!can[v])
      throw Error("target " + c.model().nodes[target] + " is not reachable from " +
                  c.model().nodes[v]);

  std::vector<int> others;
  for (int v = 0; v < c.n(); ++v)
    if (v != target) others.push_back(v);
  const int k = static_cast<int>(others.size());
  TimingVector t;
  t.values.assign(c.n(), 0.0);
  t.residual = 0.0;
  if (k == 0) return t;
  std::vector<int> pos(c.n(), -1);
  for (int i = 0; i < k; ++i) pos[others[i]] = i;
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(k, k);
  for (int i = 0; i < k; ++i)
    for (const auto& [w, p] : c.out(others[i]))
      if (w != target) A(i, pos[w]) -= p;
  Eigen::VectorXd b = Eigen::VectorXd::Ones(k);
  Eigen::VectorXd x = A.partialPivLu().solve(b);
  t.residual = (A * x - b).cwiseAbs().maxCoeff();
  for (int i = 0; i < k; ++i) t.values[others[i]] = x(i);
  return t;
}

double mean_recurrence_time(const MarkovChain& c, int v) {
  TimingVector fp = mean_first_passage(c, v);
  double t = 1.0;
  for (const auto& [w, p] : c.out(v)) t += p * fp.values[w];
  return t;
}

Traversal sample_traversal(const MarkovChain& c, int start, int steps, Rng& rng) {
  if (!c.model().is_single_colored())
    throw Error("traversal sampling requires a single-colored model");
  if (start < 0 || start >= c.n()) throw Error("start node index out of range");
  if (steps < 1) throw Error("steps must be at least 1");
  Traversal t;
  t.nodes.reserve(steps);
  t.colors.reserve(steps);
  int cur = start;
  t.nodes.push_back(cur);
  t.colors.push_back(c.model().color_of(cur));
  for (int s = 1; s < steps; ++s) {
    double r = rng.uniform01();
    const auto& outs = c.out(cur);
    double cum = 0.0;
    int next = outs.back().first;
    for (const auto& [w, p] : outs) {
      cum += p;
      if (r < cum) {
        next = w;
        break;
      }
    }
    cur = next;
    t.nodes.push_back(cur);
    t.colors.push_back(c.model().color_of(cur));
  }
  return t;
}

namespace {

void require_single_colored(const MarkovChain& c, const char* what) {
  if (!c.model().is_single_colored())
    throw Error(std::string(what) + " requires a single-colored model");
}

void check_observations(const MarkovChain& c, const std::vector<int>& colors) {
  if (colors.empty()) throw Error("observation sequence is empty");
  for (int y : colors)
    if (y < 0 || y >= c.model().color_count()) throw Error("color index out of range");
}

std::vector<double> initial_scores(const MarkovChain& c, int y0, std::optional<int> start) {
  const WeakModel& m = c.model();
  std::vector<double> s(c.n(), kNegInf);
  if (start) {
    if (*start < 0 || *start >= c.n()) throw Error("start node index out of range");
    if (m.color_of(*start) == y0) s[*start] = 0.0;
    return s;
  }
  auto nodes = m.nodes_with_color(y0);
  if (nodes.empty()) return s;
  double prior = -std::log2(static_cast<double>(nodes.size()));
  for (int v : nodes) s[v] = prior;
  return s;
}

double logsumexp2(const std::vector<double>& xs) {
  double mx = kNegInf;
  for (double x : xs) mx = std::max(mx, x);
  if (mx == kNegInf) return kNegInf;
  double acc = 0.0;
  for (double x : xs)
    if (x != kNegInf) acc += std::exp2(x - mx);
  return mx + std::log2(acc);
}

/* Forward log2 scores for every step; a[t][v] = log2 P(y_1..y_t, X_t = v). */
std::vector<std::vector<double>> forward_table(const MarkovChain& c,
                                               const std::vector<int>& colors,
                                               std::optional<int> start) {
  const WeakModel& m = c.model();
  const int n = c.n();
  const int T = static_cast<int>(colors.size());
  std::vector<std::vector<double>> a(T);
  a[0] = initial_scores(c, colors[0], start);
  for (int t = 1; t < T; ++t) {
    a[t].assign(n, kNegInf);
    for (int v = 0; v < n; ++v) {
      if (m.color_of(v) != colors[t]) continue;
      double mx = kNegInf;
      for (const auto& [u, p] : c.in_sorted(v))
        if (a[t - 1][u] != kNegInf) mx = std::max(mx, a[t - 1][u] + std::log2(p));
      if (mx == kNegInf) continue;
      double acc = 0.0;
      for (const auto& [u, p] : c.in_sorted(v))
        if (a[t - 1][u] != kNegInf) acc += std::exp2(a[t - 1][u] + std::log2(p) - mx);
      a[t][v] = mx + std::log2(acc);
    }
  }
  return a;
}

}  // namespace

ViterbiResult viterbi(const MarkovChain& c, const std::vector<int>& colors,
                      std::optional<int> start) {
  require_single_colored(c, "viterbi decoding");
  check_observations(c, colors);
  const WeakModel& m = c.model();
  const int n = c.n();
  const int T = static_cast<int>(colors.size());
  std::vector<double> cur = initial_scores(c, colors[0], start);
  std::vector<std::vector<int>> parent(T, std::vector<int>(n, -1));
  std::vector<double> next(n);
  for (int t = 1; t < T; ++t) {
    std::fill(next.begin(), next.end(), kNegInf);
    for (int v = 0; v < n; ++v) {
      if (m.color_of(v) != colors[t]) continue;
      double best = kNegInf;
      int arg = -1;
      for (const auto& [u, p] : c.in_sorted(v)) {
        if (cur[u] == kNegInf) continue;
        double cand = cur[u] + std::log2(p);
        if (cand > best) {
          best = cand;
          arg = u;
        }
      }
      next[v] = best;
      parent[t][v] = arg;
    }
    cur.swap(next);
  }
  int best = -1;
  double score = kNegInf;
  for (int v = 0; v < n; ++v)
    if (cur[v] > score) {
      score = cur[v];
      best = v;
    }
  ViterbiResult r;
  if (best == -1) {
    r.log2_prob = kNegInf;
    r.feasible = false;
    return r;
  }
  r.feasible = true;
  r.log2_prob = score;
  r.nodes.assign(T, -1);
  r.nodes[T - 1] = best;
  for (int t = T - 1; t > 0; --t) r.nodes[t - 1] = parent[t][r.nodes[t]];
  return r;
}

double forward_log_prob(const MarkovChain& c, const std::vector<int>& colors,
                        std::optional<int> start) {
  require_single_colored(c, "forward probability");
  check_observations(c, colors);
  auto a = forward_table(c, colors, start);
  return logsumexp2(a.back());
}

double posterior_path_entropy(const MarkovChain& c, const std::vector<int>& colors,
                              std::optional<int> start) {
  require_single_colored(c, "posterior path entropy");
  check_observations(c, colors);
  const WeakModel& m = c.model();
  const int n = c.n();
  const int T = static_cast<int>(colors.size());
  auto a = forward_table(c, colors, start);
  double log_z = logsumexp2(a.back());
  if (log_z == kNegInf) throw Error("observation sequence has zero probability");

  /* b[t][v] = log2 P(y_{t+1}..y_T | X_t = v); the posterior transition out
   * of v at time t is p(v,w) * 2^{b[t+1][w] - b[t][v]}. */
  std::vector<std::vector<double>> b(T);
  b[T - 1].assign(n, kNegInf);
  for (int v = 0; v < n; ++v)
    if (m.color_of(v) == colors[T - 1]) b[T - 1][v] = 0.0;
  for (int t = T - 2; t >= 0; --t) {
    b[t].assign(n, kNegInf);
    for (int v = 0; v < n; ++v) {
      if (m.color_of(v) != colors[t]) continue;
      double mx = kNegInf;
      for (const auto& [w, p] : c.out(v))
        if (m.color_of(w) == colors[t + 1] && b[t + 1][w] != kNegInf)
          mx = std::max(mx, std::log2(p) + b[t + 1][w]);
      if (mx == kNegInf) continue;
      double acc = 0.0;
      for (const auto& [w, p] : c.out(v))
        if (m.color_of(w) == colors[t + 1] && b[t + 1][w] != kNegInf)
          acc += std::exp2(std::log2(p) + b[t + 1][w] - mx);
      b[t][v] = mx + std::log2(acc);
    }
  }

  double entropy = 0.0;
  for (int v = 0; v < n; ++v) {
    if (a[0][v] == kNegInf || b[0][v] == kNegInf) continue;
    double p1 = std::exp2(a[0][v] + b[0][v] - log_z);
    if (p1 > 0.0) entropy -= p1 * std::log2(p1);
  }
  for (int t = 0; t + 1 < T; ++t) {
    for (int v = 0; v < n; ++v) {
      if (a[t][v] == kNegInf || b[t][v] == kNegInf) continue;
      double gamma = std::exp2(a[t][v] + b[t][v] - log_z);
      if (gamma == 0.0) continue;
      double h = 0.0;
      for (const auto& [w, p] : c.out(v)) {
        if (m.color_of(w) != colors[t + 1] || b[t + 1][w] == kNegInf) continue;
        double q = std::exp2(std::log2(p) + b[t + 1][w] - b[t][v]);
        if (q > 0.0) h -= q * std::log2(q);
      }
      entropy += gamma * h;
    }
  }
  return entropy;
}

double path_entropy_exact(const MarkovChain& c, int steps, int start) {
  if (start < 0 || start >= c.n()) throw Error("start node index out of range");
  if (steps < 1) throw Error("steps must be at least 1");
  std::vector<double> d(c.n(), 0.0);
  d[start] = 1.0;
  std::vector<double> nd(c.n());
  double entropy = 0.0;
  for (int s = 1; s < steps; ++s) {
    std::fill(nd.begin(), nd.end(), 0.0);
    for (int v = 0; v < c.n(); ++v) {
      if (d[v] == 0.0) continue;
      double h = 0.0;
      for (const auto& [w, p] : c.out(v)) {
        nd[w] += d[v] * p;
        h -= p * std::log2(p);
      }
      entropy += d[v] * h;
    }
    d.swap(nd);
  }
  return entropy;
}

double markov_entropy_rate(const MarkovChain& c) {
  Distribution pi = stationary_distribution(c);
  double rate = 0.0;
  for (int v = 0; v < c.n(); ++v) {
    if (pi.p[v] == 0.0) continue;
    double h = 0.0;
    for (const auto& [w, p] : c.out(v)) {
      (void)w;
      h -= p * std::log2(p);
    }
    rate += pi.p[v] * h;
  }
  return rate;
}

}  // namespace wm
