#pragma once

/* Re-verification of the structural facts the complex is built on, run as
 * explicit checks over enumerated cells: spanning-tree complements, connected
 * cycle intersections, the cycle/edgeset exclusion, basis-independent
 * orientations, a well-founded color order, closed-cell face counts, trivial
 * self-equivalences, and the two-half-edge bound. */

#include <map>
#include <string>
#include <vector>

#include "forest/complex.hpp"

namespace forest {

struct LemmaCounts {
    long long checked = 0;                // atomic checks performed
    std::vector<std::string> violations;  // "cell key: detail", deterministic order
};

/* Keys: maxtree, conn, lemma1, or, order, faces-count, trivial-automorphisms,
 * notthree. */
using LemmaReport = std::map<std::string, LemmaCounts>;

LemmaReport verify_lemmas(const std::vector<std::vector<Cell>>& levels, int threads = 1);

/* Checks for a single graph; violations keyed as above. */
LemmaReport verify_cell_lemmas(const ColoredGraph& cell);

}  // namespace forest
