#pragma once

/* The counting homomorphism on 2-chains: a 2-cell whose non-singleton edges
 * form a theta graph (basepoint joined to the two vertices of an anti-parallel
 * monochromatic 2-cycle) contributes the basis vector of the 2-cycle's color,
 * signed by the parity of its edge order against the reference orientation,
 * which is fixed as the canonical form of the pure theta graph. */

#include <vector>

#include "forest/complex.hpp"
#include "forest/snf.hpp"

namespace forest {

struct CoreShape {
    bool is_theta = false;
    int base_color = 0;  // pair joining the basepoint to the 2-cycle
    int loop_color = 0;  // pair forming the 2-cycle
    int sign = 0;        // +-1: storage-order parity against the reference

    friend bool operator==(const CoreShape&, const CoreShape&) = default;
};

/* Requires a 2-cell (three vertices); throws std::invalid_argument otherwise.
 * The classification only depends on the underlying colored graph, not on the
 * vertex labeling; the sign compares the given edge storage order with the
 * canonical one, so canonical cells always get +1. */
CoreShape classify_core(const ColoredGraph& cell);

/* Integer vector of length `rank` over the basis e_1..e_n. */
using ThetaVector = std::vector<long long>;

/* Sum of coeff * sign * e_loop over the theta-cored terms of a 2-chain whose
 * keys are canonical cell serializations. */
ThetaVector theta_of_chain(const Chain& z, int rank);

/* Column per representative cycle; throws std::invalid_argument when some
 * representative is not a cycle. */
SparseIntMatrix theta_on_homology(const std::vector<Chain>& reps, int rank);

/* The same pairing in a basis-free form that avoids materializing cycle
 * representatives: the value lattice of the counting homomorphism on the
 * degree-2 cycle lattice, as its canonical column basis padded with zero
 * columns to `betti2`.  The homomorphism vanishes on boundaries and torsion,
 * so this agrees with its matrix on any free homology basis up to a
 * unimodular change of basis; in particular the absolute determinant matches.
 * Requires levels 0..2; `betti2` must come from the degree-2 homology. */
SparseIntMatrix theta_on_homology_lean(const std::vector<std::vector<Cell>>& levels, int rank,
                                       long long betti2, int threads = 1);

}  // namespace forest
