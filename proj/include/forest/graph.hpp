#pragma once

/* Colored graphs: connected, based, oriented multigraphs whose edges are
 * partitioned into n nonempty color classes, subject to
 *   - every nontrivial cycle contains some color class entirely
 *     (equivalently: the complement of every edge basis is a spanning tree),
 *   - within each color class, edges are coherently directed along the basic
 *     cycle the class spans,
 *   - every non-basepoint vertex has valence >= 3, the basepoint >= 2.
 *
 * Vertices are 0..V-1 with basepoint 0.  A loop's two directions are the same
 * combinatorial datum, so loops are stored with init == term and never
 * distinguish an orientation; non-loop direction is honest data and
 * equivalences must preserve it.
 *
 * The canonical form relabels vertices and edges by a deterministic traversal
 * from the basepoint (half-edges at a vertex visited in (color, out-before-in)
 * order; a tie between two same-key half-edges branches and the
 * lexicographically least serialization wins).  Two graphs are equivalent iff
 * their canonical keys are equal.
 */

#include <optional>
#include <string>
#include <vector>

#include "forest/free_group.hpp"

namespace forest {

struct Edge {
    int init, term, color;
    friend bool operator==(const Edge&, const Edge&) = default;
};

struct Diagnostic {
    std::string check;   // "connected", "rank", "colors", "partition", ...
    std::string detail;
};

class ColoredGraph {
public:
    ColoredGraph(int rank, int vertices, std::vector<Edge> edges);

    int rank() const { return rank_; }
    int vertex_count() const { return vertices_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    const Edge& edge(int e) const { return edges_[e]; }
    const std::vector<Edge>& edges() const { return edges_; }
    int dimension() const { return vertices_ - 1; }

    /* Edge ids of one color, in storage order. */
    std::vector<int> color_class(int color) const;
    /* (edge id, is-init-end) pairs; loops contribute both ends. */
    std::vector<std::pair<int, bool>> half_edges(int vertex) const;
    int valence(int vertex) const;

    std::string str() const;  // "n=N;V=K;E=c:i:t,..."
    static ColoredGraph parse(const std::string& text);

    friend bool operator==(const ColoredGraph&, const ColoredGraph&) = default;

private:
    int rank_, vertices_;
    std::vector<Edge> edges_;
};

/* All structural diagnostics; empty result means the graph is valid. */
std::vector<Diagnostic> validate(const ColoredGraph& g);
bool is_valid(const ColoredGraph& g);

/* One edge id per color, indexed by color-1. */
using EdgeBasis = std::vector<int>;

/* Every choice of one edge per color, in mixed-radix order over the storage
 * order of each class. */
std::vector<EdgeBasis> edge_bases(const ColoredGraph& g);

/* The unique cycle in (complement of basis) + basis edge of `color`, returned
 * as (edge id, traversed-forward) pairs starting with that basis edge; empty
 * optional when the complement is not a spanning tree. */
std::optional<std::vector<std::pair<int, bool>>> basic_cycle(const ColoredGraph& g,
                                                             const EdgeBasis& basis, int color);

/* Every edge of the class lies on the basic cycle and is traversed forward. */
bool coherent_for_basis(const ColoredGraph& g, const EdgeBasis& basis);

/* Collapse a non-singleton, non-loop edge; endpoints merge (basepoint wins),
 * higher vertex ids shift down, remaining edges keep their relative order. */
ColoredGraph blowdown(const ColoredGraph& g, int edge_id);

struct CanonicalForm {
    ColoredGraph graph;          // relabeled copy, edges sorted by (color, discovery)
    std::string key;             // graph.str()
    std::vector<int> vertex_map; // old vertex id -> new id
    std::vector<int> edge_map;   // old edge id -> position in graph.edges()
};

/* Requires a connected graph reachable from the basepoint; throws otherwise. */
CanonicalForm canonicalize(const ColoredGraph& g);
std::string canonical_key(const ColoredGraph& g);

/* Color-preserving, orientation-preserving, based bijections g -> h
 * (vertex maps; the induced edge bijection of a valid graph is unique). */
int count_equivalences(const ColoredGraph& g, const ColoredGraph& h);
bool equivalent(const ColoredGraph& g, const ColoredGraph& h);

/* Pairs (b, r): some basic cycle of color b passes through an edge of color r.
 * Sorted, deduplicated. */
std::vector<std::pair<int, int>> color_order(const ColoredGraph& g);
bool order_antisymmetric(const std::vector<std::pair<int, int>>& order);
bool order_transitive(const std::vector<std::pair<int, int>>& order);

}  // namespace forest
