#include "wm/model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <set>
#include <sstream>

namespace wm {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int WeakModel::node_index(const std::string& id) const {
  auto it = node_idx_.find(id);
  if (it == node_idx_.end()) throw Error("unknown node id: " + id);
  return it->second;
}

int WeakModel::color_index(const std::string& name) const {
  auto it = color_idx_.find(name);
  if (it == color_idx_.end()) throw Error("unknown color: " + name);
  return it->second;
}

bool WeakModel::is_single_colored() const {
  for (const auto& cs : coloring)
    if (cs.size() != 1) return false;
  return true;
}

int WeakModel::color_of(int node) const {
  if (coloring[node].size() != 1)
    throw Error("node " + nodes[node] + " is multi-colored");
  return coloring[node][0];
}

bool WeakModel::node_has_color(int node, int color) const {
  const auto& cs = coloring[node];
  return std::find(cs.begin(), cs.end(), color) != cs.end();
}

bool WeakModel::has_edge(int from, int to) const {
  for (int e : out[from])
    if (edges[e].to == to) return true;
  return false;
}

std::vector<int> WeakModel::nodes_with_color(int color) const {
  std::vector<int> r;
  for (int v = 0; v < node_count(); ++v)
    if (node_has_color(v, color)) r.push_back(v);
  return r;
}

namespace {

bool valid_name(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

}  // namespace

void WeakModel::finalize() {
  color_idx_.clear();
  node_idx_.clear();
  for (int c = 0; c < color_count(); ++c) {
    if (!valid_name(colors[c])) throw Error("invalid color name: '" + colors[c] + "'");
    if (!color_idx_.emplace(colors[c], c).second)
      throw Error("duplicate color: " + colors[c]);
  }
  for (int v = 0; v < node_count(); ++v) {
    if (!valid_name(nodes[v])) throw Error("invalid node id: '" + nodes[v] + "'");
    if (!node_idx_.emplace(nodes[v], v).second)
      throw Error("duplicate node id: " + nodes[v]);
  }
  if (coloring.size() != nodes.size()) throw Error("coloring does not cover all nodes");
  for (int v = 0; v < node_count(); ++v) {
    if (coloring[v].empty()) throw Error("node " + nodes[v] + " has no colors");
    std::set<int> seen;
    for (int c : coloring[v]) {
      if (c < 0 || c >= color_count()) throw Error("color index out of range");
      if (!seen.insert(c).second)
        throw Error("node " + nodes[v] + " repeats color " + colors[c]);
    }
  }
  std::set<std::pair<int, int>> edge_set;
  for (const Edge& e : edges) {
    if (e.from < 0 || e.from >= node_count() || e.to < 0 || e.to >= node_count())
      throw Error("edge endpoint out of range");
    if (!edge_set.emplace(e.from, e.to).second)
      throw Error("duplicate edge " + nodes[e.from] + " -> " + nodes[e.to]);
  }
  if (probs) {
    if (probs->size() != edges.size())
      throw Error("probability list does not cover all edges");
    for (double p : *probs)
      if (!(p > 0.0 && p <= 1.0)) throw Error("edge probability outside (0, 1]");
  }
  if (start && (*start < 0 || *start >= node_count()))
    throw Error("start node out of range");
  out.assign(nodes.size(), {});
  in.assign(nodes.size(), {});
  for (int e = 0; e < edge_count(); ++e) {
    out[edges[e].from].push_back(e);
    in[edges[e].to].push_back(e);
  }
}

namespace {

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> toks;
  std::string cur;
  for (char ch : line) {
    if (ch == ' ' || ch == '\t' || ch == '\r') {
      if (!cur.empty()) toks.push_back(std::move(cur)), cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) toks.push_back(std::move(cur));
  return toks;
}

double parse_prob(const std::string& tok, int line) {
  const char* s = tok.c_str();
  char* end = nullptr;
  double v = std::strtod(s, &end);
  if (end != s + tok.size() || !std::isfinite(v))
    throw ParseError(line, "bad probability literal '" + tok + "'");
  if (!(v > 0.0 && v <= 1.0))
    throw ParseError(line, "probability " + tok + " outside (0, 1]");
  return v;
}

}  // namespace

WeakModel parse_model(const std::string& text) {
  WeakModel m;
  std::unordered_map<std::string, int> node_ids;
  std::unordered_map<std::string, int> color_ids;
  std::set<std::pair<int, int>> edge_set;
  bool have_probs = false;
  bool prob_choice_made = false;

  enum Section { HEADER, COLORS, NODES, EDGES, START, DONE };
  Section section = HEADER;

  std::istringstream is(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(is, raw)) {
    ++lineno;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    auto toks = tokenize(raw);
    if (toks.empty()) continue;
    const std::string& kw = toks[0];

    if (section == HEADER) {
      if (kw != "weakmodel" || toks.size() != 2 || toks[1] != "v1")
        throw ParseError(lineno, "expected header 'weakmodel v1'");
      section = COLORS;
      continue;
    }
    if (kw == "colors") {
      if (section != COLORS) throw ParseError(lineno, "misplaced or repeated colors line");
      if (toks.size() < 2) throw ParseError(lineno, "colors line needs at least one color");
      for (size_t i = 1; i < toks.size(); ++i) {
        if (!valid_name(toks[i]))
          throw ParseError(lineno, "invalid color name '" + toks[i] + "'");
        if (!color_ids.emplace(toks[i], static_cast<int>(m.colors.size())).second)
          throw ParseError(lineno, "duplicate color " + toks[i]);
        m.colors.push_back(toks[i]);
      }
      section = NODES;
    } else if (kw == "node") {
      if (section != NODES)
        throw ParseError(lineno, "node line out of order");
      if (toks.size() != 3) throw ParseError(lineno, "expected: node <id> <color>[,<color>...]");
      const std::string& id = toks[1];
      if (!valid_name(id)) throw ParseError(lineno, "invalid node id '" + id + "'");
      if (id.find("__") != std::string::npos)
        throw ParseError(lineno, "node id '" + id + "' contains reserved separator '__'");
      if (!node_ids.emplace(id, static_cast<int>(m.nodes.size())).second)
        throw ParseError(lineno, "duplicate node id " + id);
      std::vector<int> cs;
      std::string item;
      std::istringstream cl(toks[2]);
      while (std::getline(cl, item, ',')) {
        auto it = color_ids.find(item);
        if (it == color_ids.end())
          throw ParseError(lineno, "unknown color '" + item + "' on node " + id);
        if (std::find(cs.begin(), cs.end(), it->second) != cs.end())
          throw ParseError(lineno, "node " + id + " repeats color " + item);
        cs.push_back(it->second);
      }
      if (cs.empty() || toks[2].back() == ',')
        throw ParseError(lineno, "bad color list '" + toks[2] + "'");
      m.nodes.push_back(id);
      m.coloring.push_back(std::move(cs));
    } else if (kw == "edge") {
      if (section == NODES) section = EDGES;
      if (section != EDGES) throw ParseError(lineno, "edge line out of order");
      if (toks.size() != 3 && toks.size() != 4)
        throw ParseError(lineno, "expected: edge <from> <to> [<prob>]");
      auto look = [&](const std::string& id) {
        auto it = node_ids.find(id);
        if (it == node_ids.end())
          throw ParseError(lineno, "edge references undeclared node '" + id + "'");
        return it->second;
      };
      int from = look(toks[1]);
      int to = look(toks[2]);
      if (!edge_set.emplace(from, to).second)
        throw ParseError(lineno, "duplicate edge " + toks[1] + " " + toks[2]);
      bool this_has_prob = toks.size() == 4;
      if (prob_choice_made && this_has_prob != have_probs)
        throw ParseError(lineno, "probabilities must appear on all edges or on none");
      if (!prob_choice_made) {
        have_probs = this_has_prob;
        prob_choice_made = true;
        if (have_probs) m.probs.emplace();
      }
      m.edges.push_back({from, to});
      if (this_has_prob) m.probs->push_back(parse_prob(toks[3], lineno));
    } else if (kw == "start") {
      if (section != NODES && section != EDGES)
        throw ParseError(lineno, "start line out of order");
      if (section == START || m.start)
        throw ParseError(lineno, "repeated start line");
      if (toks.size() != 2) throw ParseError(lineno, "expected: start <id>");
      auto it = node_ids.find(toks[1]);
      if (it == node_ids.end())
        throw ParseError(lineno, "start references undeclared node '" + toks[1] + "'");
      m.start = it->second;
      section = DONE;
    } else {
      throw ParseError(lineno, "unrecognized line '" + kw + "'");
    }
  }
  if (section == HEADER) throw ParseError(lineno, "missing header 'weakmodel v1'");
  if (section == COLORS) throw ParseError(lineno, "missing colors line");
  m.finalize();
  return m;
}

std::string serialize_model(const WeakModel& m) {
  std::string s = "weakmodel v1\n";
  s += "colors";
  for (const auto& c : m.colors) s += " " + c;
  s += "\n";
  for (int v = 0; v < m.node_count(); ++v) {
    s += "node " + m.nodes[v] + " ";
    for (size_t i = 0; i < m.coloring[v].size(); ++i) {
      if (i) s += ",";
      s += m.colors[m.coloring[v][i]];
    }
    s += "\n";
  }
  for (int e = 0; e < m.edge_count(); ++e) {
    s += "edge " + m.nodes[m.edges[e].from] + " " + m.nodes[m.edges[e].to];
    if (m.probs) s += " " + format_double((*m.probs)[e]);
    s += "\n";
  }
  if (m.start) s += "start " + m.nodes[*m.start] + "\n";
  return s;
}

std::pair<WeakModel, NodeMapping> to_single_colored(const WeakModel& m) {
  WeakModel d;
  NodeMapping map;
  d.colors = m.colors;
  map.forward.resize(m.node_count());
  for (int v = 0; v < m.node_count(); ++v) {
    for (int c : m.coloring[v]) {
      map.forward[v].push_back(d.node_count());
      map.backward.emplace_back(v, c);
      d.nodes.push_back(m.nodes[v] + "__" + m.colors[c]);
      d.coloring.push_back({c});
    }
  }
  for (const auto& e : m.edges)
    for (int df : map.forward[e.from])
      for (int dt : map.forward[e.to]) d.edges.push_back({df, dt});
  if (m.start) {
    if (map.forward[*m.start].size() == 1)
      d.start = map.forward[*m.start][0];
    else
      map.start_derived = map.forward[*m.start];
  }
  d.finalize();
  return {std::move(d), std::move(map)};
}

}  // namespace wm
