#pragma once

/* Exact integer linear algebra for chain complexes: Smith normal form,
 * ranks, Betti numbers, torsion, and representative cycles.  Entries are
 * arbitrary-precision (GMP) so no computation ever overflows silently.
 */

#include <gmpxx.h>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

namespace forest {

struct SparseIntMatrix {
    int rows = 0, cols = 0;
    struct Entry {
        int row, col;
        mpz_class value;
        friend bool operator==(const Entry&, const Entry&) = default;
    };
    std::vector<Entry> entries;  // normalized: no zeros, unique (row, col)

    SparseIntMatrix() = default;
    SparseIntMatrix(int r, int c) : rows(r), cols(c) {}
    void add(int r, int c, mpz_class v);  // accumulates; call normalize() after bulk adds
    void normalize();                     // merge duplicates, drop zeros, sort by (col, row)
};

struct SmithDecomposition {
    std::vector<mpz_class> divisors;  // positive, d1 | d2 | ... (nonzero ones only)
    int rank() const { return static_cast<int>(divisors.size()); }
};

SmithDecomposition smith_normal_form(const SparseIntMatrix& m);

/* Rank over Z (= rank over Q). */
int integer_rank(const SparseIntMatrix& m);

/* Rank over F_p for a word-size prime.  Always <= the integer rank, with
 * equality unless p divides an invariant factor; used as a cheap cross-check
 * on the exact elimination, never as the answer. */
int modular_rank(const SparseIntMatrix& m, std::int64_t p = 2147483647);

/* |det| of a square matrix: the product of its invariant factors (0 when rank
 * deficient).  Throws std::invalid_argument on non-square input. */
mpz_class abs_determinant(const SparseIntMatrix& m);

/* Column-major 64-bit matrix for boundary maps too large for the
 * arbitrary-precision engine: one (row, value) vector per column, sorted by
 * row, no explicit zeros. */
struct PackedColumns {
    int rows = 0;
    std::vector<std::vector<std::pair<int, long long>>> cols;
};

struct LeanSmith {
    long long rank = 0;
    std::vector<mpz_class> divisors;  // positive, d1 | d2 | ..., one per pivot
};

/* Rank and invariant factors of a packed matrix, consuming it: unimodular
 * column echelon, unit-pivot clearing, then a dense exact residual.  Machine
 * integers throughout; throws std::overflow_error if any coefficient leaves
 * the checked 64-bit range (the caller should fall back or report). */
LeanSmith lean_smith(PackedColumns m);

/* The column echelon of `m` replayed on the columns of the functional matrix
 * `f` (same column count): returns f times the echelon transform, plus the
 * indices of m's kernel columns.  The transformed kernel columns are the
 * values of f on a lattice basis of ker(m) — computed without ever
 * materializing a kernel vector. */
struct KernelImage {
    SparseIntMatrix transformed;
    std::vector<int> kernel_columns;
};
KernelImage kernel_functional_image(const SparseIntMatrix& m, const SparseIntMatrix& f);

/* Canonical basis of the column lattice, as the column-style Hermite form:
 * one column per pivot row in increasing row order, positive pivots, entries
 * in each pivot row reduced to [0, pivot) in the columns before it.  Two
 * matrices span the same column lattice iff their forms are equal. */
SparseIntMatrix column_lattice_basis(const SparseIntMatrix& m);

struct HomologyResult {
    int degree = 0;
    long long betti = 0;
    std::vector<mpz_class> torsion;  // nontrivial elementary divisors of the incoming boundary
};

/* H_k of ... -> C_{k+1} --d_up--> C_k --d_down--> C_{k-1} -> ...
 * betti = dim C_k - rank d_down - rank d_up; torsion from SNF(d_up).
 * Throws if the matrices do not compose or d_down * d_up != 0. */
HomologyResult homology(int degree, long long dim_ck, const SparseIntMatrix& d_down,
                        const SparseIntMatrix& d_up);

/* Integer cycles projecting to a basis of the free part of H_k, as dense
 * columns of length dim C_k. */
std::vector<std::vector<mpz_class>> cycle_representatives(int dim_ck,
                                                          const SparseIntMatrix& d_down,
                                                          const SparseIntMatrix& d_up);

bool composes_to_zero(const SparseIntMatrix& d_down, const SparseIntMatrix& d_up);

/* (row of d_down, column of d_up) locating a nonzero entry of the product,
 * or nullopt when the composition vanishes. */
std::optional<std::pair<int, int>> nonzero_composition(const SparseIntMatrix& d_down,
                                                       const SparseIntMatrix& d_up);

/* Coordinate text format: header "% rank=<n> degree=<k> rows=<r> cols=<c>",
 * then one "row col value" line per entry. */
void write_matrix(std::ostream& out, const SparseIntMatrix& m, int rank, int degree);
SparseIntMatrix read_matrix(std::istream& in, int* rank = nullptr, int* degree = nullptr);

}  // namespace forest
