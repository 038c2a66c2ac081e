#pragma once

/* Brute-force reference implementations used to cross-check the library.
 * Everything here works from the raw node and edge lists and stays away
 * from the library's trellis, pair-graph and linear-solver code paths. */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <queue>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "wm/model.hpp"

namespace oracle {

/* Per-step node counts for one color sequence, by direct dynamic
 * programming over the edge list. rows[t][v] = number of consistent node
 * sequences of length t+1 ending at v. */
inline std::vector<std::vector<std::uint64_t>> count_rows(const wm::WeakModel& m,
                                                          const std::vector<int>& colors,
                                                          std::optional<int> start = std::nullopt) {
  std::vector<std::vector<std::uint64_t>> rows;
  std::vector<std::uint64_t> cur(m.node_count(), 0);
  for (int v = 0; v < m.node_count(); ++v)
    if (!colors.empty() && m.node_has_color(v, colors[0]) && (!start || *start == v)) cur[v] = 1;
  if (!colors.empty()) rows.push_back(cur);
  for (std::size_t t = 1; t < colors.size(); ++t) {
    std::vector<std::uint64_t> next(m.node_count(), 0);
    for (const auto& e : m.edges)
      if (m.node_has_color(e.to, colors[t])) next[e.to] += cur[e.from];
    cur = std::move(next);
    rows.push_back(cur);
  }
  return rows;
}

inline std::uint64_t count(const wm::WeakModel& m, const std::vector<int>& colors,
                           std::optional<int> start = std::nullopt) {
  if (colors.empty()) return 1;
  auto rows = count_rows(m, colors, start);
  std::uint64_t total = 0;
  for (auto c : rows.back()) total += c;
  return total;
}

/* All consistent node sequences, ascending lexicographic by node index,
 * found by plain depth-first search. */
inline std::vector<std::vector<int>> enumerate(const wm::WeakModel& m,
                                               const std::vector<int>& colors,
                                               std::optional<int> start = std::nullopt) {
  if (colors.empty()) return {{}};
  std::vector<std::vector<int>> out;
  std::vector<int> seq;
  auto dfs = [&](auto&& self, int v, std::size_t t) -> void {
    seq.push_back(v);
    if (t + 1 == colors.size()) {
      out.push_back(seq);
    } else {
      for (int w = 0; w < m.node_count(); ++w)
        if (m.has_edge(v, w) && m.node_has_color(w, colors[t + 1])) self(self, w, t + 1);
    }
    seq.pop_back();
  };
  for (int v = 0; v < m.node_count(); ++v)
    if (m.node_has_color(v, colors[0]) && (!start || *start == v)) dfs(dfs, v, 0);
  std::sort(out.begin(), out.end());
  return out;
}

/* Worst-case counts by exhaustive recursion over color sequences, the
 * count recomputed from scratch for every sequence. Sequences that no
 * longer match any node sequence are pruned. */
inline std::vector<std::uint64_t> growth(const wm::WeakModel& m, int t_max,
                                         std::optional<int> start = std::nullopt) {
  std::vector<std::uint64_t> best(t_max, 0);
  std::vector<int> colors;
  auto dfs = [&](auto&& self) -> void {
    if (static_cast<int>(colors.size()) == t_max) return;
    for (int c = 0; c < m.color_count(); ++c) {
      colors.push_back(c);
      std::uint64_t n = count(m, colors, start);
      if (n > 0) {
        best[colors.size() - 1] = std::max(best[colors.size() - 1], n);
        self(self);
      }
      colors.pop_back();
    }
  };
  dfs(dfs);
  return best;
}

/* Growth-trend statistic on a worst-case profile: true when the tail
 * window reaches a new maximum, so bounded profiles (including
 * oscillating ones) read false once their maximum has recurred. The
 * window must cover at least one pumping cycle of a growing model. */
template <typename C>
inline bool grew(const C& n, std::size_t window = 3) {
  if (n.size() < window + 1) return false;
  auto last = n[n.size() - 1];
  for (std::size_t i = n.size() - window; i + 1 < n.size(); ++i) last = std::max(last, n[i]);
  auto before = n[0];
  for (std::size_t i = 1; i + window < n.size(); ++i) before = std::max(before, n[i]);
  return last > before;
}

/* Mutual reachability between a diagonal and an off-diagonal state of the
 * color-synchronized product walk, by Floyd-Warshall over the n^2 states.
 * True exactly when two distinct node sequences with the same color trace
 * can split and rejoin, i.e. when the model is untrackable. Single-colored
 * models only. */
inline bool pair_mixing(const wm::WeakModel& m) {
  const int n = m.node_count();
  const int N = n * n;
  auto id = [n](int a, int b) { return a * n + b; };
  std::vector<std::vector<bool>> reach(N, std::vector<bool>(N, false));
  for (const auto& ea : m.edges)
    for (const auto& eb : m.edges)
      if (m.color_of(ea.from) == m.color_of(eb.from) && m.color_of(ea.to) == m.color_of(eb.to))
        reach[id(ea.from, eb.from)][id(ea.to, eb.to)] = true;
  for (int k = 0; k < N; ++k)
    for (int i = 0; i < N; ++i)
      if (reach[i][k])
        for (int j = 0; j < N; ++j)
          if (reach[k][j]) reach[i][j] = true;
  for (int a = 0; a < n; ++a)
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v)
        if (u != v && reach[id(a, a)][id(u, v)] && reach[id(u, v)][id(a, a)]) return true;
  return false;
}

/* Existence of a color-synchronized triple walk from some (a,a,b) to
 * (a,b,b), a != b: the fork structure behind unbounded polynomial growth.
 * Breadth-first search over the n^3 product states. Single-colored only. */
inline bool triple_fork(const wm::WeakModel& m) {
  const int n = m.node_count();
  auto id = [n](int x, int y, int z) { return (x * n + y) * n + z; };
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (a == b || m.color_of(a) != m.color_of(b)) continue;
      std::vector<bool> seen(n * n * n, false);
      std::queue<int> q;
      seen[id(a, a, b)] = true;
      q.push(id(a, a, b));
      while (!q.empty()) {
        int s = q.front();
        q.pop();
        int x = s / (n * n), y = s / n % n, z = s % n;
        for (int ex : m.out[x])
          for (int ey : m.out[y])
            for (int ez : m.out[z]) {
              int x2 = m.edges[ex].to, y2 = m.edges[ey].to, z2 = m.edges[ez].to;
              if (m.color_of(x2) != m.color_of(y2) || m.color_of(y2) != m.color_of(z2)) continue;
              int s2 = id(x2, y2, z2);
              if (!seen[s2]) {
                seen[s2] = true;
                q.push(s2);
              }
            }
      }
      if (seen[id(a, b, b)]) return true;
    }
  }
  return false;
}

/* Seeded single-colored model with 4..8 nodes, 2..3 colors and out-degrees
 * 1..2 plus an occasional extra edge, emitted as model text. */
inline std::string random_model_text(std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  auto pick = [&](int n) { return static_cast<int>(gen() % n); };
  const int n = 4 + pick(5);
  const int k = 2 + pick(2);
  std::ostringstream ss;
  ss << "weakmodel v1\ncolors";
  for (int c = 0; c < k; ++c) ss << " c" << c;
  ss << "\n";
  for (int v = 0; v < n; ++v) ss << "node v" << v << " c" << pick(k) << "\n";
  std::vector<std::vector<bool>> has(n, std::vector<bool>(n, false));
  for (int v = 0; v < n; ++v) {
    const int deg = 1 + pick(2);
    for (int d = 0; d < deg; ++d) has[v][pick(n)] = true;
    if (pick(10) < 3) has[v][pick(n)] = true;
  }
  for (int v = 0; v < n; ++v)
    for (int w = 0; w < n; ++w)
      if (has[v][w]) ss << "edge v" << v << " v" << w << "\n";
  return ss.str();
}

inline double edge_prob(const wm::WeakModel& m, int u, int v) {
  for (int e = 0; e < m.edge_count(); ++e)
    if (m.edges[e].from == u && m.edges[e].to == v) return (*m.probs)[e];
  return 0.0;
}

/* log2 probability of one node sequence, including the uniform prior over
 * the nodes of the first color when the start is unknown. */
inline double path_log2_prob(const wm::WeakModel& m, const std::vector<int>& seq,
                             bool known_start) {
  double lp = 0.0;
  if (!known_start) {
    std::size_t opts = 0;
    for (int v = 0; v < m.node_count(); ++v)
      if (m.node_has_color(v, m.color_of(seq[0]))) ++opts;
    lp -= std::log2(static_cast<double>(opts));
  }
  for (std::size_t i = 0; i + 1 < seq.size(); ++i)
    lp += std::log2(edge_prob(m, seq[i], seq[i + 1]));
  return lp;
}

/* All color sequences of exactly length t over k colors. */
inline std::vector<std::vector<int>> all_color_sequences(int k, int t) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(t, 0);
  std::size_t total = 1;
  for (int i = 0; i < t; ++i) total *= k;
  for (std::size_t x = 0; x < total; ++x) {
    std::size_t r = x;
    for (int i = 0; i < t; ++i) {
      cur[i] = static_cast<int>(r % k);
      r /= k;
    }
    out.push_back(cur);
  }
  return out;
}

inline std::string fixture_path(const std::string& name) {
  return std::string(FIXTURES_DIR) + "/" + name + ".wm";
}

}  // namespace oracle
