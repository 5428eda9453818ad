#include "forest/snf.hpp"

#include <algorithm>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace forest {

void SparseIntMatrix::add(int r, int c, mpz_class v) {
    if (r < 0 || r >= rows || c < 0 || c >= cols)
        throw std::out_of_range("matrix index out of range");
    if (v != 0)
        entries.push_back({r, c, std::move(v)});
}

void SparseIntMatrix::normalize() {
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        return a.col != b.col ? a.col < b.col : a.row < b.row;
    });
    std::vector<Entry> merged;
    for (Entry& e : entries) {
        if (!merged.empty() && merged.back().col == e.col && merged.back().row == e.row)
            merged.back().value += e.value;
        else
            merged.push_back(std::move(e));
        if (!merged.empty() && merged.back().value == 0)
            merged.pop_back();
    }
    entries = std::move(merged);
}

namespace {

using SparseCol = std::map<int, mpz_class>;  // row -> value, no zeros

std::vector<SparseCol> to_columns(const SparseIntMatrix& m) {
    std::vector<SparseCol> cols(m.cols);
    for (const auto& e : m.entries) {
        auto [it, fresh] = cols[e.col].emplace(e.row, e.value);
        if (!fresh && (it->second += e.value) == 0)
            cols[e.col].erase(it);
    }
    return cols;
}

struct ColumnOp {  // col[target] -= q * col[source]
    int source, target;
    mpz_class q;
};

/* Column echelon form by unimodular column operations.  Columns are combined
 * within the bucket of their current leading row until one pivot per row
 * remains.  Returns pivot (row, column-id, value) triples sorted by row; ops
 * are appended to *log when given. */
struct Echelon {
    struct Pivot {
        int row;
        int col;
        mpz_class value;
    };
    std::vector<Pivot> pivots;
    std::vector<int> zero_columns;  // ids of columns eliminated to zero
};

Echelon column_echelon(std::vector<SparseCol>& cols, int rows, std::vector<ColumnOp>* log) {
    std::vector<std::vector<int>> bucket(rows);
    Echelon ech;
    auto enqueue = [&](int c) {
        if (cols[c].empty())
            ech.zero_columns.push_back(c);
        else
            bucket[cols[c].begin()->first].push_back(c);
    };
    for (int c = 0; c < static_cast<int>(cols.size()); ++c)
        enqueue(c);
    for (int r = 0; r < rows; ++r) {
        auto& queue = bucket[r];
        while (queue.size() > 1) {
            // combine the two columns whose leading values are largest by
            // magnitude into the smaller one; Euclid shrinks them to one pivot
            std::sort(queue.begin(), queue.end(), [&](int a, int b) {
                const mpz_class &va = cols[a].begin()->second, &vb = cols[b].begin()->second;
                int cmpv = cmp(abs(va), abs(vb));
                return cmpv != 0 ? cmpv < 0 : a < b;
            });
            int pivot = queue.front();
            const mpz_class& pval = cols[pivot].begin()->second;
            std::vector<int> rest(queue.begin() + 1, queue.end());
            queue.resize(1);
            for (int c : rest) {
                mpz_class q;
                mpz_fdiv_q(q.get_mpz_t(), cols[c].begin()->second.get_mpz_t(),
                           pval.get_mpz_t());
                if (q != 0) {
                    if (log)
                        log->push_back({pivot, c, q});
                    for (const auto& [row, val] : cols[pivot]) {
                        auto [it, fresh] = cols[c].emplace(row, -q * val);
                        if (!fresh && (it->second -= q * val) == 0)
                            cols[c].erase(it);
                    }
                }
                if (cols[c].empty() || cols[c].begin()->first != r)
                    enqueue(c);
                else
                    queue.push_back(c);  // leading value shrank; keep reducing
            }
        }
        if (!queue.empty())
            ech.pivots.push_back({r, queue.front(), cols[queue.front()].begin()->second});
    }
    std::sort(ech.zero_columns.begin(), ech.zero_columns.end());
    return ech;
}

/* Dense Smith normal form of a small residual matrix. */
std::vector<mpz_class> dense_snf(std::vector<std::vector<mpz_class>> a) {
    std::vector<mpz_class> divisors;
    std::size_t top = 0;
    std::size_t nrows = a.size(), ncols = nrows ? a[0].size() : 0;
    while (top < nrows && top < ncols) {
        // find the nonzero entry of least magnitude in the remaining block
        std::size_t pr = top, pc = top;
        bool found = false;
        for (std::size_t i = top; i < nrows; ++i)
            for (std::size_t j = top; j < ncols; ++j)
                if (a[i][j] != 0 &&
                    (!found || cmp(abs(a[i][j]), abs(a[pr][pc])) < 0)) {
                    pr = i;
                    pc = j;
                    found = true;
                }
        if (!found)
            break;
        std::swap(a[top], a[pr]);
        for (std::size_t i = 0; i < nrows; ++i)
            std::swap(a[i][top], a[i][pc]);
        bool clean = false;
        while (!clean) {
            clean = true;
            for (std::size_t i = top + 1; i < nrows; ++i) {
                if (a[i][top] == 0)
                    continue;
                mpz_class q = a[i][top] / a[top][top];
                for (std::size_t j = top; j < ncols; ++j)
                    a[i][j] -= q * a[top][j];
                if (a[i][top] != 0) {  // remainder smaller than pivot: swap up
                    std::swap(a[top], a[i]);
                    clean = false;
                }
            }
            for (std::size_t j = top + 1; j < ncols; ++j) {
                if (a[top][j] == 0)
                    continue;
                mpz_class q = a[top][j] / a[top][top];
                for (std::size_t i = top; i < nrows; ++i)
                    a[i][j] -= q * a[i][top];
                if (a[top][j] != 0) {
                    for (std::size_t i = 0; i < nrows; ++i)
                        std::swap(a[i][top], a[i][j]);
                    clean = false;
                }
            }
            if (clean) {  // enforce divisibility of the rest by the pivot
                for (std::size_t i = top + 1; i < nrows && clean; ++i)
                    for (std::size_t j = top + 1; j < ncols && clean; ++j)
                        if (a[i][j] % a[top][top] != 0) {
                            for (std::size_t jj = top; jj < ncols; ++jj)
                                a[top][jj] += a[i][jj];
                            clean = false;
                        }
            }
        }
        divisors.push_back(abs(a[top][top]));
        ++top;
    }
    return divisors;
}

}  // namespace

SmithDecomposition smith_normal_form(const SparseIntMatrix& m) {
    // Unimodular column echelon, then split off the unit pivots: processing
    // them by descending lead row, clearing the lead row across the active
    // columns leaves the pivot alone in its row and column (columns set aside
    // earlier have deeper leads, so they are untouched), so each contributes
    // an invariant factor 1.  Whatever remains goes to a dense textbook SNF.
    std::vector<SparseCol> cols = to_columns(m);
    Echelon ech = column_echelon(cols, m.rows, nullptr);

    std::vector<std::vector<int>> row_cols(m.rows);  // lazily maintained index
    std::vector<bool> active(cols.size(), false);
    for (const auto& p : ech.pivots) {
        active[p.col] = true;
        for (const auto& [row, val] : cols[p.col])
            row_cols[row].push_back(p.col);
    }

    SmithDecomposition result;
    std::vector<int> hard_cols;
    std::vector<bool> row_deleted(m.rows, false);
    std::vector<Echelon::Pivot> order = ech.pivots;
    std::sort(order.begin(), order.end(),
              [](const Echelon::Pivot& a, const Echelon::Pivot& b) { return a.row > b.row; });
    for (const auto& p : order) {
        if (!(p.value == 1 || p.value == -1)) {
            hard_cols.push_back(p.col);
            continue;
        }
        const mpz_class& pval = cols[p.col].begin()->second;
        std::vector<int> targets;
        for (int c : row_cols[p.row])
            if (c != p.col && active[c] && cols[c].count(p.row))
                targets.push_back(c);
        for (int c : targets) {
            mpz_class q = cols[c][p.row] / pval;
            for (const auto& [row, val] : cols[p.col]) {
                auto [it, fresh] = cols[c].emplace(row, -q * val);
                if (!fresh && (it->second -= q * val) == 0)
                    cols[c].erase(it);
                else if (fresh)
                    row_cols[row].push_back(c);
            }
        }
        active[p.col] = false;
        row_deleted[p.row] = true;
        result.divisors.emplace_back(1);
    }

    if (!hard_cols.empty()) {
        std::sort(hard_cols.begin(), hard_cols.end());
        std::vector<int> row_index(m.rows, -1);
        int nres = 0;
        for (std::size_t j = 0; j < hard_cols.size(); ++j)
            for (const auto& [row, val] : cols[hard_cols[j]]) {
                if (row_deleted[row])
                    throw std::logic_error("deleted row resurfaced");
                if (row_index[row] < 0)
                    row_index[row] = nres++;
            }
        std::vector<std::vector<mpz_class>> dense(nres,
                                                  std::vector<mpz_class>(hard_cols.size()));
        for (std::size_t j = 0; j < hard_cols.size(); ++j)
            for (const auto& [row, val] : cols[hard_cols[j]])
                dense[row_index[row]][j] = val;
        for (mpz_class& d : dense_snf(std::move(dense)))
            result.divisors.push_back(std::move(d));
    }
    std::sort(result.divisors.begin(), result.divisors.end());
    for (std::size_t i = 0; i + 1 < result.divisors.size(); ++i)
        if (result.divisors[i + 1] % result.divisors[i] != 0)
            throw std::logic_error("divisibility chain violated");
    return result;
}

int integer_rank(const SparseIntMatrix& m) {
    std::vector<SparseCol> cols = to_columns(m);
    return static_cast<int>(column_echelon(cols, m.rows, nullptr).pivots.size());
}

int modular_rank(const SparseIntMatrix& m, std::int64_t p) {
    std::vector<std::map<int, std::int64_t>> cols(m.cols);
    for (const auto& e : m.entries) {
        std::int64_t v = static_cast<std::int64_t>(mpz_fdiv_ui(e.value.get_mpz_t(),
                                                               static_cast<unsigned long>(p)));
        if (v != 0)
            cols[e.col][e.row] = v;
    }
    auto inv_mod = [p](std::int64_t a) {  // p prime
        std::int64_t r0 = p, r1 = a % p, s0 = 0, s1 = 1;
        while (r1 != 0) {
            std::int64_t q = r0 / r1;
            r0 -= q * r1;
            std::swap(r0, r1);
            s0 -= q * s1;
            std::swap(s0, s1);
        }
        return ((s0 % p) + p) % p;
    };
    auto mulmod = [p](std::int64_t a, std::int64_t b) {
        return static_cast<std::int64_t>(static_cast<__int128>(a) * b % p);
    };
    int rank = 0;
    std::vector<std::vector<int>> bucket(m.rows);
    auto enqueue = [&](int c) {
        if (!cols[c].empty())
            bucket[cols[c].begin()->first].push_back(c);
    };
    for (int c = 0; c < m.cols; ++c)
        enqueue(c);
    for (int r = 0; r < m.rows; ++r) {
        auto& queue = bucket[r];
        if (queue.empty())
            continue;
        int pivot = queue.front();
        std::int64_t pinv = inv_mod(cols[pivot].begin()->second);
        for (std::size_t i = 1; i < queue.size(); ++i) {
            int c = queue[i];
            std::int64_t factor = mulmod(cols[c].begin()->second, pinv);
            for (const auto& [row, val] : cols[pivot]) {
                auto [it, fresh] = cols[c].emplace(row, 0);
                it->second = ((it->second - mulmod(factor, val)) % p + p) % p;
                if (it->second == 0)
                    cols[c].erase(it);
            }
            enqueue(c);
        }
        ++rank;
    }
    return rank;
}

mpz_class abs_determinant(const SparseIntMatrix& m) {
    if (m.rows != m.cols)
        throw std::invalid_argument("determinant of a non-square matrix");
    SmithDecomposition snf = smith_normal_form(m);
    if (snf.rank() < m.rows)
        return 0;
    mpz_class det = 1;
    for (const auto& d : snf.divisors)
        det *= d;
    return det;
}

std::optional<std::pair<int, int>> nonzero_composition(const SparseIntMatrix& d_down,
                                                       const SparseIntMatrix& d_up) {
    if (d_down.cols != d_up.rows)
        throw std::invalid_argument("matrices do not compose");
    std::vector<SparseCol> rows_of_down(d_down.cols);  // transposed view
    for (const auto& e : d_down.entries)
        rows_of_down[e.col].emplace(e.row, e.value);
    std::vector<SparseCol> up = to_columns(d_up);
    for (std::size_t c = 0; c < up.size(); ++c) {
        SparseCol product;
        for (const auto& [mid, vup] : up[c])
            for (const auto& [row, vdown] : rows_of_down[mid]) {
                auto [it, fresh] = product.emplace(row, vdown * vup);
                if (!fresh && (it->second += vdown * vup) == 0)
                    product.erase(it);
            }
        if (!product.empty())
            return std::make_pair(product.begin()->first, static_cast<int>(c));
    }
    return std::nullopt;
}

bool composes_to_zero(const SparseIntMatrix& d_down, const SparseIntMatrix& d_up) {
    return !nonzero_composition(d_down, d_up).has_value();
}

HomologyResult homology(int degree, long long dim_ck, const SparseIntMatrix& d_down,
                        const SparseIntMatrix& d_up) {
    if (d_down.cols != dim_ck || d_up.rows != dim_ck)
        throw std::invalid_argument("chain group dimension mismatch");
    if (!composes_to_zero(d_down, d_up))
        throw std::invalid_argument("boundary maps do not compose to zero");
    HomologyResult res;
    res.degree = degree;
    SmithDecomposition up = smith_normal_form(d_up);
    int rank_down = integer_rank(d_down);
    if (modular_rank(d_down) > rank_down || modular_rank(d_up) > up.rank())
        throw std::logic_error("modular rank exceeds the exact rank");
    res.betti = dim_ck - rank_down - up.rank();
    if (res.betti < 0)
        throw std::logic_error("negative betti number");
    for (const mpz_class& d : up.divisors)
        if (d != 1)
            res.torsion.push_back(d);
    return res;
}

std::vector<std::vector<mpz_class>> cycle_representatives(int dim_ck,
                                                          const SparseIntMatrix& d_down,
                                                          const SparseIntMatrix& d_up) {
    if (d_down.cols != dim_ck || d_up.rows != dim_ck)
        throw std::invalid_argument("chain group dimension mismatch");
    // Unimodular column elimination of d_down with the operations logged:
    // the columns that vanish give a lattice basis of the kernel.
    std::vector<SparseCol> cols = to_columns(d_down);
    std::vector<ColumnOp> ops;
    Echelon ech = column_echelon(cols, d_down.rows, &ops);
    const std::vector<int>& kernel_cols = ech.zero_columns;
    std::vector<int> kernel_index(dim_ck, -1);
    for (std::size_t i = 0; i < kernel_cols.size(); ++i)
        kernel_index[kernel_cols[i]] = static_cast<int>(i);

    // Express the image of d_up in kernel coordinates: u = T^{-1} w must be
    // supported on the kernel columns (T is the recorded transform).
    std::vector<SparseCol> up = to_columns(d_up);
    std::vector<SparseCol> y(up.size());
    for (std::size_t c = 0; c < up.size(); ++c) {
        SparseCol u = up[c];
        for (const ColumnOp& op : ops) {  // forward order applies T^{-1}
            auto itb = u.find(op.target);
            if (itb == u.end())
                continue;
            auto [ita, fresh] = u.emplace(op.source, op.q * itb->second);
            if (!fresh && (ita->second += op.q * itb->second) == 0)
                u.erase(ita);
        }
        for (const auto& [pos, val] : u) {
            if (kernel_index[pos] < 0)
                throw std::logic_error("boundary image is not a cycle");
            y[c].emplace(kernel_index[pos], val);
        }
    }

    // Echelonize the TRANSPOSE of the image matrix: its column operations are
    // unimodular basis changes of the kernel lattice itself.  In the changed
    // basis the image is supported away from the zeroed coordinates, so those
    // coordinate vectors descend to a free-part basis — torsion or not.
    std::vector<SparseCol> yt(kernel_cols.size());
    for (std::size_t c = 0; c < y.size(); ++c)
        for (const auto& [row, val] : y[c])
            yt[row].emplace(static_cast<int>(c), val);
    std::vector<ColumnOp> basis_ops;
    Echelon img = column_echelon(yt, static_cast<int>(y.size()), &basis_ops);

    std::vector<std::vector<mpz_class>> reps;
    for (int free_pos : img.zero_columns) {
        SparseCol v;  // coordinates over the kernel basis
        v.emplace(free_pos, 1);
        for (auto it = basis_ops.rbegin(); it != basis_ops.rend(); ++it) {
            auto its = v.find(it->source);
            if (its == v.end())
                continue;
            auto [itt, fresh] = v.emplace(it->target, it->q * its->second);
            if (!fresh && (itt->second += it->q * its->second) == 0)
                v.erase(itt);
        }
        SparseCol w;  // back to chain coordinates through the kernel columns
        for (const auto& [pos, val] : v)
            w.emplace(kernel_cols[pos], val);
        for (auto it = ops.rbegin(); it != ops.rend(); ++it) {  // reverse applies T
            auto itb = w.find(it->target);
            if (itb == w.end())
                continue;
            auto [ita, fresh] = w.emplace(it->source, -it->q * itb->second);
            if (!fresh && (ita->second -= it->q * itb->second) == 0)
                w.erase(ita);
        }
        std::vector<mpz_class> dense(dim_ck);
        for (const auto& [row, val] : w)
            dense[row] = val;
        reps.push_back(std::move(dense));
    }
    return reps;
}

namespace {

using PackedCol = std::vector<std::pair<int, long long>>;

constexpr long long kLeanLimit = 1LL << 62;

long long checked_narrow(__int128 v) {
    if (v > kLeanLimit || v < -kLeanLimit)
        throw std::overflow_error("coefficient left the checked 64-bit range");
    return static_cast<long long>(v);
}

long long floor_div(long long a, long long b) {
    long long q = a / b, r = a % b;
    if (r != 0 && ((r < 0) != (b < 0)))
        --q;
    return q;
}

/* target -= q * source, both sorted by row.  The result's capacity is kept
 * tight: millions of columns are live at once and reserve() overshoot was
 * measured to cost hundreds of megabytes on boundary-map eliminations. */
PackedCol combine_packed(const PackedCol& target, const PackedCol& source, long long q) {
    PackedCol out;
    out.reserve(target.size() + source.size());
    auto it = target.begin();
    auto is = source.begin();
    while (it != target.end() || is != source.end()) {
        if (is == source.end() || (it != target.end() && it->first < is->first)) {
            out.push_back(*it++);
        } else if (it == target.end() || is->first < it->first) {
            out.emplace_back(is->first,
                             checked_narrow(-static_cast<__int128>(q) * is->second));
            ++is;
        } else {
            long long v = checked_narrow(static_cast<__int128>(it->second) -
                                         static_cast<__int128>(q) * is->second);
            if (v != 0)
                out.emplace_back(it->first, v);
            ++it;
            ++is;
        }
    }
    if (out.capacity() > out.size() + 8)
        out.shrink_to_fit();
    return out;
}

bool packed_contains(const PackedCol& col, int row, long long* value) {
    auto it = std::lower_bound(col.begin(), col.end(), row,
                               [](const std::pair<int, long long>& e, int r) {
                                   return e.first < r;
                               });
    if (it == col.end() || it->first != row)
        return false;
    *value = it->second;
    return true;
}

}  // namespace

LeanSmith lean_smith(PackedColumns m) {
    auto& cols = m.cols;
    const int rows = m.rows;
    for (auto& col : cols) {
        if (!std::is_sorted(col.begin(), col.end()))
            std::sort(col.begin(), col.end());
        if (!col.empty() && (col.front().first < 0 || col.back().first >= rows))
            throw std::out_of_range("matrix index out of range");
        for (std::size_t i = 0; i < col.size(); ++i) {
            if (col[i].second == 0)
                throw std::invalid_argument("packed column stores an explicit zero");
            if (i > 0 && col[i].first == col[i - 1].first)
                throw std::invalid_argument("packed column repeats a row");
        }
    }

    // Phase 1: column echelon.  Same scheme as the arbitrary-precision
    // engine: bucket columns by leading row, Euclid within the bucket until
    // one pivot per row survives.  Pivot preference: smallest lead magnitude,
    // then shortest column (less fill), then id (determinism).
    std::vector<std::vector<int>> bucket(rows);
    auto enqueue = [&](int c) {
        if (!cols[c].empty())
            bucket[cols[c].front().first].push_back(c);
    };
    for (int c = 0; c < static_cast<int>(cols.size()); ++c)
        enqueue(c);
    std::vector<std::pair<int, int>> pivots;  // (row, column)
    for (int r = 0; r < rows; ++r) {
        auto& queue = bucket[r];
        while (queue.size() > 1) {
            std::sort(queue.begin(), queue.end(), [&](int a, int b) {
                long long va = std::abs(cols[a].front().second);
                long long vb = std::abs(cols[b].front().second);
                if (va != vb)
                    return va < vb;
                if (cols[a].size() != cols[b].size())
                    return cols[a].size() < cols[b].size();
                return a < b;
            });
            int pivot = queue.front();
            long long pval = cols[pivot].front().second;
            std::vector<int> rest(queue.begin() + 1, queue.end());
            queue.resize(1);
            for (int c : rest) {
                long long q = floor_div(cols[c].front().second, pval);
                if (q != 0)
                    cols[c] = combine_packed(cols[c], cols[pivot], q);
                if (cols[c].empty()) {
                    PackedCol().swap(cols[c]);  // release the dead capacity
                } else if (cols[c].front().first != r) {
                    enqueue(c);
                } else {
                    queue.push_back(c);  // lead shrank; keep reducing
                }
            }
        }
        if (!queue.empty())
            pivots.emplace_back(r, queue.front());
    }

    // Phase 2: unit pivots, deepest row first, clear their row everywhere
    // else; processed pivots are never touched again because active columns
    // have no entries left in deleted rows.
    std::vector<bool> active(cols.size(), false);
    std::vector<std::vector<int>> row_cols(rows);
    for (const auto& [row, col] : pivots) {
        active[col] = true;
        for (const auto& [r, v] : cols[col])
            row_cols[r].push_back(col);
    }
    LeanSmith result;
    result.rank = static_cast<long long>(pivots.size());
    std::vector<int> hard_cols;
    std::vector<bool> row_deleted(rows, false);
    std::vector<std::pair<int, int>> order = pivots;
    std::sort(order.begin(), order.end(),
              [](const std::pair<int, int>& a, const std::pair<int, int>& b) {
                  return a.first > b.first;
              });
    for (const auto& [prow, pcol] : order) {
        long long pval = cols[pcol].front().second;
        if (pval != 1 && pval != -1) {
            hard_cols.push_back(pcol);
            continue;
        }
        std::vector<int> targets;
        for (int c : row_cols[prow]) {
            long long v;
            if (c != pcol && active[c] && packed_contains(cols[c], prow, &v))
                targets.push_back(c);
        }
        std::sort(targets.begin(), targets.end());
        targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
        for (int c : targets) {
            long long v = 0;
            packed_contains(cols[c], prow, &v);
            long long q = v * pval;  // v / pval with pval = ±1
            cols[c] = combine_packed(cols[c], cols[pcol], q);
            for (const auto& [r, unused] : cols[pcol])
                row_cols[r].push_back(c);
        }
        active[pcol] = false;
        row_deleted[prow] = true;
        result.divisors.emplace_back(1);
    }

    // Phase 3: dense exact Smith form of whatever resisted.
    if (!hard_cols.empty()) {
        std::sort(hard_cols.begin(), hard_cols.end());
        std::vector<int> row_index(rows, -1);
        int nres = 0;
        for (int c : hard_cols)
            for (const auto& [r, v] : cols[c]) {
                if (row_deleted[r])
                    throw std::logic_error("deleted row resurfaced");
                if (row_index[r] < 0)
                    row_index[r] = nres++;
            }
        std::vector<std::vector<mpz_class>> dense(
            nres, std::vector<mpz_class>(hard_cols.size()));
        for (std::size_t j = 0; j < hard_cols.size(); ++j)
            for (const auto& [r, v] : cols[hard_cols[j]])
                dense[row_index[r]][j] = static_cast<long>(v);  // long is 64-bit here
        for (mpz_class& d : dense_snf(std::move(dense)))
            result.divisors.push_back(std::move(d));
    }
    std::sort(result.divisors.begin(), result.divisors.end());
    if (static_cast<long long>(result.divisors.size()) != result.rank)
        throw std::logic_error("rank and invariant factor count disagree");
    for (std::size_t i = 0; i + 1 < result.divisors.size(); ++i)
        if (result.divisors[i + 1] % result.divisors[i] != 0)
            throw std::logic_error("divisibility chain violated");
    return result;
}

KernelImage kernel_functional_image(const SparseIntMatrix& m, const SparseIntMatrix& f) {
    if (f.cols != m.cols)
        throw std::invalid_argument("functional width must match the matrix column count");
    std::vector<SparseCol> cols = to_columns(m);
    std::vector<ColumnOp> ops;
    Echelon ech = column_echelon(cols, m.rows, &ops);

    std::vector<SparseCol> fcols = to_columns(f);
    for (const ColumnOp& op : ops) {  // same order reproduces the transform
        const SparseCol& src = fcols[op.source];
        if (src.empty())
            continue;
        SparseCol& tgt = fcols[op.target];
        for (const auto& [row, val] : src) {
            auto [it, fresh] = tgt.emplace(row, -op.q * val);
            if (!fresh && (it->second -= op.q * val) == 0)
                tgt.erase(it);
        }
    }

    KernelImage out;
    out.kernel_columns = ech.zero_columns;
    SparseIntMatrix t(f.rows, f.cols);
    for (int c = 0; c < f.cols; ++c)
        for (const auto& [r, v] : fcols[c])
            t.add(r, c, v);
    t.normalize();
    out.transformed = std::move(t);
    return out;
}

SparseIntMatrix column_lattice_basis(const SparseIntMatrix& m) {
    std::vector<SparseCol> cols = to_columns(m);
    Echelon ech = column_echelon(cols, m.rows, nullptr);
    // Hermite normalization: positive pivots, then entries in each pivot row
    // reduced to [0, pivot) in the columns whose own pivot sits higher up.
    // Later pivots never disturb earlier pivot rows (their support is deeper).
    for (const auto& p : ech.pivots)
        if (cols[p.col].begin()->second < 0)
            for (auto& [r, v] : cols[p.col])
                v = -v;
    for (std::size_t j = 0; j < ech.pivots.size(); ++j) {
        const auto& p = ech.pivots[j];
        const mpz_class& pval = cols[p.col].begin()->second;
        for (std::size_t k = 0; k < j; ++k) {
            SparseCol& earlier = cols[ech.pivots[k].col];
            auto it = earlier.find(p.row);
            if (it == earlier.end())
                continue;
            mpz_class q;
            mpz_fdiv_q(q.get_mpz_t(), it->second.get_mpz_t(), pval.get_mpz_t());
            if (q == 0)
                continue;
            for (const auto& [row, val] : cols[p.col]) {
                auto [jt, fresh] = earlier.emplace(row, -q * val);
                if (!fresh && (jt->second -= q * val) == 0)
                    earlier.erase(jt);
            }
        }
    }
    SparseIntMatrix basis(m.rows, static_cast<int>(ech.pivots.size()));
    for (std::size_t j = 0; j < ech.pivots.size(); ++j)
        for (const auto& [r, v] : cols[ech.pivots[j].col])
            basis.add(r, static_cast<int>(j), v);
    basis.normalize();
    return basis;
}

void write_matrix(std::ostream& out, const SparseIntMatrix& m, int rank, int degree) {
    out << "% rank=" << rank << " degree=" << degree << " rows=" << m.rows
        << " cols=" << m.cols << "\n";
    for (const auto& e : m.entries)
        out << e.row << ' ' << e.col << ' ' << e.value << "\n";
}

SparseIntMatrix read_matrix(std::istream& in, int* rank, int* degree) {
    std::string header;
    if (!std::getline(in, header) || header.rfind("% ", 0) != 0)
        throw std::invalid_argument("missing matrix header");
    int n = 0, k = 0, rows = -1, cols = -1;
    {
        std::istringstream hs(header.substr(2));
        std::string field;
        while (hs >> field) {
            auto eq = field.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument("malformed header field: " + field);
            std::string key = field.substr(0, eq);
            int value = std::stoi(field.substr(eq + 1));
            if (key == "rank")
                n = value;
            else if (key == "degree")
                k = value;
            else if (key == "rows")
                rows = value;
            else if (key == "cols")
                cols = value;
            else
                throw std::invalid_argument("unknown header field: " + key);
        }
    }
    if (rows < 0 || cols < 0)
        throw std::invalid_argument("header must give rows and cols");
    if (rank)
        *rank = n;
    if (degree)
        *degree = k;
    SparseIntMatrix m(rows, cols);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::istringstream ls(line);
        int r, c;
        std::string value;
        if (!(ls >> r >> c >> value))
            throw std::invalid_argument("malformed entry line: " + line);
        m.add(r, c, mpz_class(value));
    }
    m.normalize();
    return m;
}

}  // namespace forest
