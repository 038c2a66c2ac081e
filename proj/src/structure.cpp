#include "wm/structure.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <numeric>
#include <utility>

namespace wm {

namespace {

std::vector<std::vector<int>> neighbor_lists(const WeakModel& m) {
  std::vector<std::vector<int>> adj(m.node_count());
  for (int u = 0; u < m.node_count(); ++u)
    for (int e : m.out[u]) adj[u].push_back(m.edges[e].to);
  return adj;
}

struct SccResult {
  std::vector<std::vector<int>> comps; /* members ascending, comps by smallest member */
  std::vector<int> comp;               /* node -> position in comps */
};

SccResult scc_of(const std::vector<std::vector<int>>& adj) {
  const int n = static_cast<int>(adj.size());
  std::vector<int> order;
  order.reserve(n);
  std::vector<char> seen(n, 0);
  std::vector<std::pair<int, int>> stack; /* node, next child slot */
  for (int s = 0; s < n; ++s) {
    if (seen[s]) continue;
    seen[s] = 1;
    stack.push_back({s, 0});
    while (!stack.empty()) {
      auto [u, i] = stack.back();
      if (i < static_cast<int>(adj[u].size())) {
        ++stack.back().second;
        int v = adj[u][i];
        if (!seen[v]) {
          seen[v] = 1;
          stack.push_back({v, 0});
        }
      } else {
        order.push_back(u);
        stack.pop_back();
      }
    }
  }

  std::vector<std::vector<int>> radj(n);
  for (int u = 0; u < n; ++u)
    for (int v : adj[u]) radj[v].push_back(u);

  SccResult r;
  r.comp.assign(n, -1);
  for (int k = n - 1; k >= 0; --k) {
    int s = order[k];
    if (r.comp[s] != -1) continue;
    int id = static_cast<int>(r.comps.size());
    r.comps.emplace_back();
    r.comp[s] = id;
    std::vector<int> work{s};
    while (!work.empty()) {
      int u = work.back();
      work.pop_back();
      r.comps[id].push_back(u);
      for (int v : radj[u])
        if (r.comp[v] == -1) {
          r.comp[v] = id;
          work.push_back(v);
        }
    }
  }

  for (auto& c : r.comps) std::sort(c.begin(), c.end());
  std::vector<int> old_of_new(r.comps.size());
  std::iota(old_of_new.begin(), old_of_new.end(), 0);
  std::sort(old_of_new.begin(), old_of_new.end(),
            [&](int a, int b) { return r.comps[a][0] < r.comps[b][0]; });
  std::vector<std::vector<int>> comps;
  comps.reserve(r.comps.size());
  std::vector<int> new_of_old(r.comps.size());
  for (size_t i = 0; i < old_of_new.size(); ++i) {
    new_of_old[old_of_new[i]] = static_cast<int>(i);
    comps.push_back(std::move(r.comps[old_of_new[i]]));
  }
  r.comps = std::move(comps);
  for (int u = 0; u < n; ++u) r.comp[u] = new_of_old[r.comp[u]];
  return r;
}

/* gcd of cycle lengths inside one strongly connected component, via BFS
 * levels from the smallest member: every internal edge u->v contributes
 * level[u]+1-level[v]. Zero when the component has no cycle. */
int component_period(const std::vector<std::vector<int>>& adj, const std::vector<int>& comp,
                     int id, int root, std::vector<int>& level) {
  for (size_t u = 0; u < adj.size(); ++u) level[u] = -1;
  std::deque<int> queue{root};
  level[root] = 0;
  int g = 0;
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    for (int v : adj[u]) {
      if (comp[v] != id) continue;
      if (level[v] == -1) {
        level[v] = level[u] + 1;
        queue.push_back(v);
      }
      g = std::gcd(g, std::abs(level[u] + 1 - level[v]));
    }
  }
  return g;
}

}  // namespace

std::vector<std::vector<int>> strongly_connected_components(const WeakModel& m) {
  return scc_of(neighbor_lists(m)).comps;
}

NodeClassification classify_nodes(const WeakModel& m) {
  auto adj = neighbor_lists(m);
  SccResult s = scc_of(adj);
  NodeClassification r;
  r.strongly_connected = s.comps.size() <= 1;
  std::vector<int> level(m.node_count());
  for (size_t c = 0; c < s.comps.size(); ++c) {
    bool leaves = false;
    for (int u : s.comps[c]) {
      for (int v : adj[u])
        if (s.comp[v] != static_cast<int>(c)) {
          leaves = true;
          break;
        }
      if (leaves) break;
    }
    int root = s.comps[c][0];
    bool cyclic = s.comps[c].size() > 1 || m.has_edge(root, root);
    if (!leaves && cyclic) {
      r.recurrent_classes.push_back(s.comps[c]);
      r.periods.push_back(component_period(adj, s.comp, static_cast<int>(c), root, level));
    } else {
      r.transient.insert(r.transient.end(), s.comps[c].begin(), s.comps[c].end());
    }
  }
  std::sort(r.transient.begin(), r.transient.end());
  return r;
}

PairGraph pair_graph(const WeakModel& m) {
  if (!m.is_single_colored()) throw Error("pair_graph requires a single-colored model");
  const int n = m.node_count();
  PairGraph g;
  g.n = n;
  g.index.assign(static_cast<size_t>(n) * n, -1);
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      if (m.color_of(u) == m.color_of(v)) {
        g.index[u * n + v] = static_cast<int>(g.nodes.size());
        g.nodes.push_back({u, v});
      }
  g.adj.resize(g.nodes.size());
  for (size_t i = 0; i < g.nodes.size(); ++i) {
    auto [u, v] = g.nodes[i];
    for (int eu : m.out[u])
      for (int ev : m.out[v]) {
        int up = m.edges[eu].to;
        int vp = m.edges[ev].to;
        if (m.color_of(up) == m.color_of(vp)) g.adj[i].push_back(g.pair_index(up, vp));
      }
  }
  return g;
}

const char* to_string(Regime r) {
  switch (r) {
    case Regime::Untrackable:
      return "untrackable";
    case Regime::TrackableBounded:
      return "trackable_bounded";
    case Regime::TrackableUnboundedPoly:
      return "trackable_unbounded_poly";
  }
  return "unknown";
}

namespace {

/* Shortest path src -> dst inside one pair-graph component; returns the node
 * sequence including both endpoints. BFS expands neighbors in adjacency
 * order, so the result is canonical. */
std::vector<int> component_path(const PairGraph& g, const std::vector<int>& comp, int id, int src,
                                int dst) {
  std::vector<int> parent(g.nodes.size(), -2);
  parent[src] = -1;
  std::deque<int> queue{src};
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    if (u == dst) break;
    for (int v : g.adj[u]) {
      if (comp[v] != id || parent[v] != -2) continue;
      parent[v] = u;
      queue.push_back(v);
    }
  }
  std::vector<int> path;
  for (int v = dst; v != -1; v = parent[v]) path.push_back(v);
  std::reverse(path.begin(), path.end());
  return path;
}

int map_back(const NodeMapping* mapping, int derived) {
  return mapping ? mapping->backward[derived].first : derived;
}

/* m must be single-colored; witnesses are translated through `mapping` when
 * the caller transformed a multi-colored input. */
TrackabilityReport classify_single(const WeakModel& m, const NodeMapping* mapping) {
  TrackabilityReport report;
  const int n = m.node_count();
  PairGraph pg = pair_graph(m);
  SccResult scc = scc_of(pg.adj);

  for (size_t c = 0; c < scc.comps.size(); ++c) {
    int diag = -1;
    int off = -1;
    for (int i : scc.comps[c]) {
      auto [u, v] = pg.nodes[i];
      if (u == v) {
        if (diag == -1) diag = i;
      } else if (off == -1) {
        off = i;
      }
      if (diag != -1 && off != -1) break;
    }
    if (diag == -1 || off == -1) continue;

    auto forward = component_path(pg, scc.comp, static_cast<int>(c), diag, off);
    auto back = component_path(pg, scc.comp, static_cast<int>(c), off, diag);
    forward.insert(forward.end(), back.begin() + 1, back.end());
    IntersectingCyclePair w;
    for (int i : forward) {
      w.cycle_a.push_back(map_back(mapping, pg.nodes[i].first));
      w.cycle_b.push_back(map_back(mapping, pg.nodes[i].second));
    }
    report.regime = Regime::Untrackable;
    report.intersecting = std::move(w);
    return report;
  }

  /* Reachability over the pair graph, used to prune the triple search. */
  const int p = static_cast<int>(pg.nodes.size());
  std::vector<std::vector<char>> reach(p, std::vector<char>(p, 0));
  for (int s = 0; s < p; ++s) {
    std::deque<int> queue{s};
    reach[s][s] = 1;
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop_front();
      for (int v : pg.adj[u])
        if (!reach[s][v]) {
          reach[s][v] = 1;
          queue.push_back(v);
        }
    }
  }
  std::vector<char> cyclic(scc.comps.size(), 0);
  for (size_t c = 0; c < scc.comps.size(); ++c) {
    if (scc.comps[c].size() > 1) {
      cyclic[c] = 1;
    } else {
      int u = scc.comps[c][0];
      cyclic[c] = std::find(pg.adj[u].begin(), pg.adj[u].end(), u) != pg.adj[u].end();
    }
  }

  /* Unbounded polynomial growth: a path (a,a,b) ~> (a,b,b) in the triple
   * product. Its three projections are the fork parts, so the witness falls
   * out of the BFS parents. Necessary pair-level conditions filter (a,b)
   * before each triple BFS: (a,b) reachable from (a,a), (b,b) reachable from
   * (a,b), and (a,b) on a pair cycle. */
  std::vector<int> parent(static_cast<size_t>(n) * n * n);
  auto encode = [n](int x, int y, int z) { return (x * n + y) * n + z; };
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (a == b || m.color_of(a) != m.color_of(b)) continue;
      int iaa = pg.pair_index(a, a);
      int iab = pg.pair_index(a, b);
      int ibb = pg.pair_index(b, b);
      if (!reach[iaa][iab] || !reach[iab][ibb] || !cyclic[scc.comp[iab]]) continue;

      std::fill(parent.begin(), parent.end(), -2);
      const int src = encode(a, a, b);
      const int dst = encode(a, b, b);
      parent[src] = -1;
      std::deque<int> queue{src};
      bool found = false;
      while (!queue.empty() && !found) {
        int cur = queue.front();
        queue.pop_front();
        int z = cur % n;
        int y = (cur / n) % n;
        int x = cur / (n * n);
        for (int ex : m.out[x]) {
          int xp = m.edges[ex].to;
          for (int ey : m.out[y]) {
            int yp = m.edges[ey].to;
            if (m.color_of(xp) != m.color_of(yp)) continue;
            for (int ez : m.out[z]) {
              int zp = m.edges[ez].to;
              if (m.color_of(xp) != m.color_of(zp)) continue;
              int next = encode(xp, yp, zp);
              if (parent[next] != -2) continue;
              parent[next] = cur;
              if (next == dst) {
                found = true;
                break;
              }
              queue.push_back(next);
            }
            if (found) break;
          }
          if (found) break;
        }
      }
      if (!found) continue;

      std::vector<int> triples;
      for (int v = dst; v != -1; v = parent[v]) triples.push_back(v);
      std::reverse(triples.begin(), triples.end());
      ForkWitness w;
      for (int t : triples) {
        w.cycle_a.push_back(map_back(mapping, t / (n * n)));
        w.path.push_back(map_back(mapping, (t / n) % n));
        w.cycle_b.push_back(map_back(mapping, t % n));
      }
      report.regime = Regime::TrackableUnboundedPoly;
      report.fork = std::move(w);
      return report;
    }
  }

  report.regime = Regime::TrackableBounded;
  return report;
}

}  // namespace

TrackabilityReport classify_trackability(const WeakModel& m) {
  if (m.is_single_colored()) return classify_single(m, nullptr);
  auto [derived, mapping] = to_single_colored(m);
  return classify_single(derived, &mapping);
}

namespace {

bool nodes_in_range(const WeakModel& m, const std::vector<int>& seq) {
  for (int v : seq)
    if (v < 0 || v >= m.node_count()) return false;
  return true;
}

bool is_walk(const WeakModel& m, const std::vector<int>& seq) {
  for (size_t i = 0; i + 1 < seq.size(); ++i)
    if (!m.has_edge(seq[i], seq[i + 1])) return false;
  return true;
}

bool share_color(const WeakModel& m, int u, int v) {
  for (int c : m.coloring[u])
    if (m.node_has_color(v, c)) return true;
  return false;
}

bool share_color3(const WeakModel& m, int u, int v, int w) {
  for (int c : m.coloring[u])
    if (m.node_has_color(v, c) && m.node_has_color(w, c)) return true;
  return false;
}

}  // namespace

bool verify_intersecting_cycle_pair(const WeakModel& m, const IntersectingCyclePair& w) {
  const auto& a = w.cycle_a;
  const auto& b = w.cycle_b;
  if (a.size() != b.size() || a.size() < 2) return false;
  if (!nodes_in_range(m, a) || !nodes_in_range(m, b)) return false;
  if (a.front() != a.back() || b.front() != b.back()) return false;
  if (!is_walk(m, a) || !is_walk(m, b)) return false;
  bool agree = false;
  bool differ = false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == b[i])
      agree = true;
    else
      differ = true;
    if (!share_color(m, a[i], b[i])) return false;
  }
  return agree && differ;
}

bool verify_fork_witness(const WeakModel& m, const ForkWitness& w) {
  const auto& a = w.cycle_a;
  const auto& p = w.path;
  const auto& b = w.cycle_b;
  if (a.size() != p.size() || a.size() != b.size() || a.size() < 2) return false;
  if (!nodes_in_range(m, a) || !nodes_in_range(m, p) || !nodes_in_range(m, b)) return false;
  if (a.front() != a.back() || b.front() != b.back()) return false;
  if (p.front() != a.front() || p.back() != b.front()) return false;
  if (a.front() == b.front()) return false;
  if (!is_walk(m, a) || !is_walk(m, p) || !is_walk(m, b)) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (!share_color3(m, a[i], p[i], b[i])) return false;
  return true;
}

BoundReport hypothesis_bound(const WeakModel& m) {
  BoundReport r;
  const int n = m.node_count();
  r.M.assign(n, 1);
  for (int v = 0; v < n; ++v) {
    for (int c = 0; c < m.color_count(); ++c) {
      std::uint64_t cnt = 0;
      for (int e : m.out[v])
        if (m.node_has_color(m.edges[e].to, c)) ++cnt;
      r.M[v] = std::max(r.M[v], cnt);
    }
  }
  r.K = 1;
  for (int c = 0; c < m.color_count(); ++c)
    r.K = std::max<std::uint64_t>(r.K, m.nodes_with_color(c).size());
  std::uint64_t slack = 0;
  for (std::uint64_t mv : r.M) slack += mv - 1;
  r.bound_known_start = bound_from_counts(r.K, slack, true);
  r.bound_unknown_start = bound_from_counts(r.K, slack, false);
  r.strongly_connected = classify_nodes(m).strongly_connected;
  r.trackable_bounded = classify_trackability(m).regime == Regime::TrackableBounded;
  r.valid = r.strongly_connected && r.trackable_bounded;
  return r;
}

std::uint64_t bound_from_counts(std::uint64_t K, std::uint64_t sum_M_minus_1, bool known_start) {
  std::uint64_t base = 1 + sum_M_minus_1;
  return known_start ? base : K * base;
}

AutomorphismReport automorphism_count(const WeakModel& m) {
  const int n = m.node_count();
  if (n > 12) throw Error("automorphism search is limited to 12 nodes");
  AutomorphismReport r;
  r.count = 0;
  r.generators_truncated = false;

  std::vector<int> perm(n, -1);
  std::vector<char> used(n, 0);
  std::vector<std::vector<int>> color_sets(n);
  for (int v = 0; v < n; ++v) {
    color_sets[v] = m.coloring[v];
    std::sort(color_sets[v].begin(), color_sets[v].end());
  }

  auto consistent = [&](int i, int img) {
    if (color_sets[i] != color_sets[img]) return false;
    for (int j = 0; j < i; ++j) {
      if (m.has_edge(i, j) != m.has_edge(img, perm[j])) return false;
      if (m.has_edge(j, i) != m.has_edge(perm[j], img)) return false;
    }
    return m.has_edge(i, i) == m.has_edge(img, img);
  };

  auto record = [&](const std::vector<int>& p) {
    ++r.count;
    bool identity = true;
    for (int i = 0; i < n; ++i)
      if (p[i] != i) {
        identity = false;
        break;
      }
    if (identity) return;
    if (r.generators.size() < 1024)
      r.generators.push_back(p);
    else
      r.generators_truncated = true;
  };

  auto search = [&](auto&& self, int i) -> void {
    if (i == n) {
      record(perm);
      return;
    }
    for (int img = 0; img < n; ++img) {
      if (used[img] || !consistent(i, img)) continue;
      perm[i] = img;
      used[img] = 1;
      self(self, i + 1);
      used[img] = 0;
      perm[i] = -1;
    }
  };
  search(search, 0);
  return r;
}

}  // namespace wm
