#pragma once

/* The cell complex whose k-cells are equivalence classes of colored graphs
 * with k+1 vertices.  A cell of a graph with classes h_1..h_n is a product of
 * simplices, one simplex per color, with vertices the edges of the class; the
 * cell's orientation is its canonical edge ordering.  Collapsing the j-th
 * edge of the i-th class is a face, signed (-1)^{k_1+...+k_{i-1}} (-1)^j and
 * multiplied by the parity of the relabeling into the face's own canonical
 * edge order.
 *
 * Marked cells attach an automorphism to the designated 0-face (collapse of
 * everything outside the canonical edge basis); faces transport the marking
 * along single-color basis changes, each labeled by a Whitehead move read off
 * the corresponding two-vertex quotient.
 */

#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "forest/free_group.hpp"
#include "forest/graph.hpp"
#include "forest/snf.hpp"

namespace forest {

struct Cell {
    ColoredGraph graph;  // canonical form
    std::string key;
    explicit Cell(const ColoredGraph& canonical) : graph(canonical), key(canonical.str()) {}
    int dim() const { return graph.dimension(); }
};

struct BudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EnumerationOptions {
    int threads = 1;
    double budget_seconds = 0.0;                          // <= 0 means unbounded
    std::function<void(int, std::size_t)> progress = {};  // (dimension, cells found)
};

/* Every cell of dimension 0..max_dim, grouped by dimension and sorted by
 * canonical key.  Level k+1 is produced by splitting each vertex of each
 * level-k cell in all ways (every half-edge bipartition, every new-edge color
 * and direction), validating, and deduplicating canonically.  Throws
 * BudgetExceeded when the time budget runs out. */
std::vector<std::vector<Cell>> enumerate_cells(int rank, int max_dim,
                                               const EnumerationOptions& opts = {});

/* One enumeration step: the sorted level of cells one dimension above `prev`
 * (which must be a complete level).  Same budget/thread semantics. */
std::vector<Cell> expand_level(const std::vector<Cell>& prev, const EnumerationOptions& opts = {});

/* Signed formal sum of canonical keys, all of one dimension. */
using Chain = std::map<std::string, long long>;

/* One face per (color, position); sign includes the canonical-reorder parity. */
struct Face {
    int color;
    int position;
    int sign;
    ColoredGraph graph;         // canonical face
    std::vector<int> edge_map;  // parent edge id -> face edge id (collapsed edge -> -1)
};
std::vector<Face> faces(const ColoredGraph& canonical_cell);

Chain boundary_chain(const ColoredGraph& canonical_cell);

/* Matrix of the boundary map: rows follow `lower`, columns follow `upper`.
 * Throws if some face is missing from `lower` (enumeration gap). */
SparseIntMatrix boundary_matrix(const std::vector<Cell>& lower, const std::vector<Cell>& upper,
                                int threads = 1);

/* Collapse every edge outside `kept` (which must meet every color class).
 * Returns the quotient and the edge map (old id -> new id, collapsed -> -1). */
std::pair<ColoredGraph, std::vector<int>> collapse_except(const ColoredGraph& g,
                                                          const std::vector<int>& kept);

/* First edge of each color in storage order; for a canonical graph this is
 * the canonical edge basis. */
EdgeBasis designated_basis(const ColoredGraph& g);

/* The Whitehead move labeling the edge between the 0-faces of two bases that
 * differ in exactly one color: collapse to the two-vertex quotient keeping
 * both chosen edges of that color; letters enter the move's set by whether
 * the surviving singleton edges point at the non-basepoint vertex.  The
 * marking of the target 0-face is marking-of-source followed by this move. */
WhiteheadMove edge_whitehead_label(const ColoredGraph& g, const EdgeBasis& from,
                                   const EdgeBasis& to);

/* Transport a marking between 0-faces, switching one color at a time in
 * ascending color order, or in the explicit order given (a permutation of
 * the differing colors). */
Automorphism transport_marking(const ColoredGraph& g, const EdgeBasis& from, const EdgeBasis& to,
                               const Automorphism& marking,
                               const std::vector<int>* color_switch_order = nullptr);

struct MarkedCell {
    ColoredGraph graph;    // canonical
    Automorphism marking;  // attached to the designated 0-face
    friend bool operator==(const MarkedCell&, const MarkedCell&) = default;
};

/* Left action: the new marking is f followed by the old marking. */
MarkedCell act(const Automorphism& f, const MarkedCell& m);

struct SignedMarkedCell {
    int sign;
    MarkedCell cell;
};
std::vector<SignedMarkedCell> marked_boundary(const MarkedCell& m);

/* One marked face per choice of a nonempty kept-subset of each color class,
 * the cell itself included: prod_i (2^{|h_i|} - 1) faces, pairwise distinct. */
std::vector<MarkedCell> closed_cell_faces(const MarkedCell& m);

}  // namespace forest
