#pragma once

/* Group presentations realized inside Aut(F_n).
 *
 * StN words are products of generators <<x, x_j>> (x a letter, j a positive
 * basis index, index(x) != j).  The identification <<x, x_j^-1>> =
 * <<x, x_j>>^-1 is representational: a factor carries an exponent +-1 and a
 * negative second letter is stored as the inverse factor.  Words are never
 * rewritten; equality of the elements they denote is decided through their
 * automorphism images (the evaluation map phi, whose kernel has order two,
 * faithfully detects every identity checked here both ways).
 *
 * W words are products of the swap-realizing generators W_ij^L / W_ij^R; the
 * map i_map sends them to StN words w_ij^L = R_ij^-1 L_ji^-1 L_ij and
 * w_ij^R = L_ij R_ji R_ij^-1 where L_ij = <<x_i^-1, x_j^-1>> and
 * R_ij = <<x_i, x_j^-1>>.
 */

#include <string>
#include <vector>

#include "forest/free_group.hpp"

namespace forest {

struct StnGenerator {
    Letter x;  // first component, any sign
    int j;     // second component: the basis index of a positive letter

    StnGenerator(Letter x_, int j_);
    friend bool operator==(const StnGenerator&, const StnGenerator&) = default;
};

struct StnFactor {
    StnGenerator gen;
    int exp;  // +1 or -1

    StnFactor inverse() const { return {gen, -exp}; }
};

/* The factor denoting <<x, y>> for an arbitrary letter y. */
StnFactor stn_factor(Letter x, Letter y);

using StnWord = std::vector<StnFactor>;

StnWord operator*(const StnWord& a, const StnWord& b);
StnWord inverse(const StnWord& w);

/* Evaluation in Aut(F_n): each factor acts as the Whitehead move
 * <{x}, x_j^exp>, composed left to right. */
Automorphism phi(const StnWord& w, int rank);

/* A defining relation, stated as lhs = rhs; rhs empty means lhs = 1. */
struct Relator {
    std::string family;
    std::string instance;
    StnWord lhs, rhs;

    StnWord word() const { return lhs * inverse(rhs); }
};

/* All defining relation instances at the given rank (n >= 2):
 *   commute:    [<<x,y>>, <<x2,y2>>] = 1   when x2 != y^{+-1}, x2 != x,
 *               x != y2^{+-1}
 *   compose:    [<<x,y>>, <<y,z>>] = <<x,z>>  when x != z^{+-1}
 *   braid:      <<y,x>> <<x^-1,y>> <<y^-1,x^-1>> = <<y^-1,x^-1>> <<x,y^-1>> <<y,x>>
 * Commutators expand as a b a^-1 b^-1. */
std::vector<Relator> stn_relators(int rank);

/* ---- the swap group ---------------------------------------------------- */

struct WGenerator {
    int i, j;   // distinct basis indices
    bool left;  // L or R family

    friend bool operator==(const WGenerator&, const WGenerator&) = default;
};

struct WFactor {
    WGenerator gen;
    int exp;
};

using WWord = std::vector<WFactor>;

struct WRelator {
    std::string family;
    std::string instance;
    WWord lhs, rhs;  // rhs empty means lhs = 1
};

/* All defining relation instances whose index tuples exist at this rank
 * (full presentation regime is rank >= 5; rank >= 2 required). */
std::vector<WRelator> w_relators(int rank);

StnWord w_left(int i, int j);
StnWord w_right(int i, int j);
StnWord i_map(const WWord& w);

/* ---- triangular subgroups ---------------------------------------------- */

enum class TriKind {
    StrictPos,    // <x_i, x_j>
    StrictNeg,    // <x_i^-1, x_j>
    Conjugating,  // <{x_i, x_i^-1}, x_j>
};

struct TriangularGenerator {
    TriKind kind;
    int i, j;  // distinct
};

/* Injective on generators:
 *   <x_i,x_j>            -> <<x_i,x_j>>
 *   <x_i^-1,x_j>         -> <<x_i^-1,x_j>>
 *   <{x_i,x_i^-1},x_j>   -> <<x_i^-1,x_j>> <<x_i,x_j>>        */
StnWord triangular_embed(const TriangularGenerator& g);
Automorphism triangular_automorphism(const TriangularGenerator& g, int rank);

/* Generating sets: strict generators for every pair i,j with i after j in
 * `order` (a permutation of 1..n listing indices from least to greatest);
 * conjugating generators for every ordered pair of distinct indices. */
std::vector<TriangularGenerator> strict_triangular_generators(const std::vector<int>& order);
std::vector<TriangularGenerator> conjugating_generators(int rank);

/* ---- verification ------------------------------------------------------ */

struct RelatorFailure {
    std::string family;
    std::string instance;
    std::string image;  // offending automorphism, serialized
};

struct PresentationReport {
    int rank = 0;
    long relators_checked = 0;
    std::vector<RelatorFailure> failures;
    bool ok() const { return failures.empty(); }
};

/* phi(lhs) == phi(rhs) for every defining relation instance. */
PresentationReport verify_stn_presentation(int rank);
/* phi(i_map(lhs)) == phi(i_map(rhs)) for every relation instance. */
PresentationReport verify_w_presentation(int rank);
/* phi(w_ij^L) == phi(w_ij^R) for all ordered pairs of distinct indices. */
PresentationReport verify_w_realizations(int rank);

}  // namespace forest
