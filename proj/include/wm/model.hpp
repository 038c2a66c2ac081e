#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace wm {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : Error {
  int line;
  ParseError(int line_, const std::string& msg)
      : Error("line " + std::to_string(line_) + ": " + msg), line(line_) {}
};

/* Node-colored directed graph ("weak model"). A hidden walker moves along
 * edges; an observer sees only node colors. Nodes, palette colors and edges
 * keep their declaration order, and declaration order is the canonical order
 * everywhere: iteration, tie-breaking, serialization, witness extraction. */
struct WeakModel {
  struct Edge {
    int from;
    int to;
    bool operator==(const Edge&) const = default;
  };

  std::vector<std::string> colors;         /* palette, declared order */
  std::vector<std::string> nodes;          /* node ids, declared order */
  std::vector<std::vector<int>> coloring;  /* per node: palette indices, declared order */
  std::vector<Edge> edges;                 /* declared order */
  std::optional<std::vector<double>> probs; /* aligned with edges; all edges or none */
  std::optional<int> start;

  /* built by finalize() */
  std::vector<std::vector<int>> out; /* node -> edge indices, declared order */
  std::vector<std::vector<int>> in;  /* node -> edge indices, declared order */

  int node_count() const { return static_cast<int>(nodes.size()); }
  int color_count() const { return static_cast<int>(colors.size()); }
  int edge_count() const { return static_cast<int>(edges.size()); }

  bool has_node(const std::string& id) const { return node_idx_.count(id) != 0; }
  bool has_color(const std::string& name) const { return color_idx_.count(name) != 0; }
  int node_index(const std::string& id) const;    /* throws Error on unknown id */
  int color_index(const std::string& name) const; /* throws Error on unknown color */

  bool is_single_colored() const;
  /* The single color of a node; only valid on single-colored models. */
  int color_of(int node) const;
  bool node_has_color(int node, int color) const;
  bool has_edge(int from, int to) const;
  std::vector<int> nodes_with_color(int color) const;

  /* Validates structural invariants and rebuilds the indexes and adjacency
   * lists. Throws Error. Must be called after direct field construction;
   * parse_model and to_single_colored return finalized models. */
  void finalize();

  bool operator==(const WeakModel& o) const {
    return colors == o.colors && nodes == o.nodes && coloring == o.coloring &&
           edges == o.edges && probs == o.probs && start == o.start;
  }

 private:
  std::unordered_map<std::string, int> node_idx_;
  std::unordered_map<std::string, int> color_idx_;
};

/* Mapping produced by to_single_colored(). "orig" indices refer to the input
 * model, "derived" indices to the transformed one. */
struct NodeMapping {
  std::vector<std::vector<int>> forward;        /* orig node -> derived nodes, color order */
  std::vector<std::pair<int, int>> backward;    /* derived node -> (orig node, color) */
  std::vector<int> start_derived;               /* derived start set when the input start
                                                 * was multi-colored (output start unset) */
};

/* Text format, one declaration per line:
 *   weakmodel v1
 *   colors <c1> <c2> ...
 *   node <id> <color>[,<color>...]
 *   edge <from> <to> [<prob>]
 *   start <id>
 * '#' starts a comment to end of line; blank lines are ignored; declarations
 * must appear in the order above. Probabilities are attached to all edges or
 * to none. Node ids containing "__" are rejected (reserved for derived-node
 * names). Errors are reported with the offending line number. */
WeakModel parse_model(const std::string& text);
std::string serialize_model(const WeakModel& m);

/* Splits every node into one derived node per color, named <orig>__<color>;
 * an edge (u,v) becomes one derived edge per color pair, so the output has
 * sum |L(v)| nodes and sum |L(u)|*|L(v)| edges. A single-colored input comes
 * back as an isomorphic copy under the same naming. A single-colored start
 * maps to its derived node; a multi-colored start is recorded in
 * NodeMapping::start_derived and the output start is unset. Edge
 * probabilities, if present, are dropped: there is no defined split of a
 * node's outgoing mass across derived copies. */
std::pair<WeakModel, NodeMapping> to_single_colored(const WeakModel& m);

/* %.17g rendering used for probabilities and CSV payloads (round-trip exact). */
std::string format_double(double v);

}  // namespace wm
