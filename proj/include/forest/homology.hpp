#pragma once

/* Homology of the cell complex, tying enumeration, boundary assembly, and
 * exact linear algebra together. */

#include <vector>

#include "forest/complex.hpp"
#include "forest/snf.hpp"

namespace forest {

/* H_degree computed from levels 0..max_dim; requires max_dim >= degree + 1 so
 * the incoming boundary is present (the top level may legitimately be empty). */
HomologyResult complex_homology(const std::vector<std::vector<Cell>>& levels, int degree,
                                int threads = 1);

/* Integer cycles spanning the free part of H_degree, as signed cell sums. */
std::vector<Chain> homology_representatives(const std::vector<std::vector<Cell>>& levels,
                                            int degree, int threads = 1);

/* Same invariants as complex_homology, but the incoming boundary is streamed
 * cell by cell into checked 64-bit columns and eliminated without an
 * operation log, so levels with millions of cells fit in memory.  d(d(x)) = 0
 * is verified during assembly.  Throws std::overflow_error if elimination
 * ever leaves the checked 64-bit range. */
HomologyResult complex_homology_lean(const std::vector<std::vector<Cell>>& levels, int degree,
                                     int threads = 1);

}  // namespace forest
