#include "wm/tracking.hpp"

#include <algorithm>
#include <cmath>

namespace wm {

namespace {

void check_color(const WeakModel& m, int color) {
  if (color < 0 || color >= m.color_count()) throw Error("color index out of range");
}

}  // namespace

void Trellis::advance(int color) {
  check_color(*model, color);
  TrellisLayer layer;
  if (layers.empty()) {
    if (start) {
      if (model->node_has_color(*start, color)) {
        layer.nodes.push_back(*start);
        layer.counts.push_back(1);
        layer.preds.emplace_back();
      }
    } else {
      for (int v = 0; v < model->node_count(); ++v)
        if (model->node_has_color(v, color)) {
          layer.nodes.push_back(v);
          layer.counts.push_back(1);
          layer.preds.emplace_back();
        }
    }
    layers.push_back(std::move(layer));
    return;
  }

  const TrellisLayer& prev = layers.back();
  for (int v = 0; v < model->node_count(); ++v) {
    if (!model->node_has_color(v, color)) continue;
    std::vector<int> preds;
    for (int e : model->in[v]) {
      int u = model->edges[e].from;
      auto it = std::lower_bound(prev.nodes.begin(), prev.nodes.end(), u);
      if (it != prev.nodes.end() && *it == u)
        preds.push_back(static_cast<int>(it - prev.nodes.begin()));
    }
    if (preds.empty()) continue;
    std::sort(preds.begin(), preds.end());
    Count c = 0;
    for (int p : preds) c += prev.counts[p];
    layer.nodes.push_back(v);
    layer.counts.push_back(std::move(c));
    layer.preds.push_back(std::move(preds));
  }
  layers.push_back(std::move(layer));
}

void Trellis::pop_layer() {
  if (layers.empty()) throw Error("pop_layer on an empty tracker");
  layers.pop_back();
}

Count Trellis::count() const {
  if (layers.empty()) return 1;
  Count total = 0;
  for (const Count& c : layers.back().counts) total += c;
  return total;
}

Trellis init_tracker(const WeakModel& m, std::optional<int> start) {
  if (start && (*start < 0 || *start >= m.node_count()))
    throw Error("start node index out of range");
  Trellis t;
  t.model = &m;
  t.start = start;
  return t;
}

Count hypothesis_count(const WeakModel& m, const std::vector<int>& colors,
                       std::optional<int> start) {
  Trellis t = init_tracker(m, start);
  for (int c : colors) {
    t.advance(c);
    if (t.dead()) return 0;
  }
  return t.count();
}

Enumeration enumerate_hypotheses(const WeakModel& m, const std::vector<int>& colors,
                                 std::size_t cap, std::optional<int> start) {
  Enumeration result;
  result.truncated = false;
  if (colors.empty()) {
    result.sequences.push_back({});
    result.total = 1;
    return result;
  }

  Trellis t = init_tracker(m, start);
  for (int c : colors) t.advance(c);
  result.total = t.count();
  if (result.total == 0) return result;

  /* Backward viability plus per-position successor lists, so the forward
   * walk below only ever takes steps that complete. */
  const size_t T = t.layers.size();
  std::vector<std::vector<char>> viable(T);
  std::vector<std::vector<std::vector<int>>> succ(T);
  viable[T - 1].assign(t.layers[T - 1].nodes.size(), 1);
  for (size_t i = T - 1; i > 0; --i) {
    const TrellisLayer& layer = t.layers[i];
    viable[i - 1].assign(t.layers[i - 1].nodes.size(), 0);
    succ[i - 1].resize(t.layers[i - 1].nodes.size());
    for (size_t j = 0; j < layer.nodes.size(); ++j) {
      if (!viable[i][j]) continue;
      for (int p : layer.preds[j]) {
        viable[i - 1][p] = 1;
        succ[i - 1][p].push_back(static_cast<int>(j));
      }
    }
  }

  std::vector<int> positions;
  std::vector<int> seq(T);
  auto emit = [&](const std::vector<int>& pos) {
    for (size_t i = 0; i < T; ++i) seq[i] = t.layers[i].nodes[pos[i]];
    result.sequences.push_back(seq);
  };
  /* Depth-first in ascending node order at every layer, which yields the
   * sequences in lexicographic order. */
  auto walk = [&](auto&& self, size_t depth) -> bool {
    if (result.sequences.size() >= cap) return false;
    if (depth == T) {
      emit(positions);
      return true;
    }
    if (depth == 0) {
      for (size_t i = 0; i < t.layers[0].nodes.size(); ++i) {
        if (!viable[0][i]) continue;
        positions.push_back(static_cast<int>(i));
        bool go = self(self, 1);
        positions.pop_back();
        if (!go) return false;
      }
      return true;
    }
    for (int j : succ[depth - 1][positions.back()]) {
      positions.push_back(j);
      bool go = self(self, depth + 1);
      positions.pop_back();
      if (!go) return false;
    }
    return true;
  };
  walk(walk, 0);
  result.truncated = Count(result.sequences.size()) < result.total;
  return result;
}

GrowthProfile worst_case_growth(const WeakModel& m, int t_max) {
  if (t_max < 1) throw Error("t_max must be at least 1");
  double space = std::pow(static_cast<double>(m.color_count()), t_max);
  if (space > 1e7) throw Error("growth search space exceeds 1e7 color sequences");

  GrowthProfile profile;
  profile.n.assign(t_max, 0);
  profile.witnesses.assign(t_max, {});

  Trellis t = init_tracker(m);
  std::vector<int> colors;
  auto dfs = [&](auto&& self) -> void {
    const int depth = static_cast<int>(colors.size());
    if (depth == t_max) return;
    for (int c = 0; c < m.color_count(); ++c) {
      colors.push_back(c);
      t.advance(c);
      Count n = t.count();
      if (n > profile.n[depth]) {
        profile.n[depth] = n;
        profile.witnesses[depth] = colors;
      }
      if (!t.dead()) self(self);
      t.pop_layer();
      colors.pop_back();
    }
  };
  dfs(dfs);
  return profile;
}

}  // namespace wm
