#include "forest/homology.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>

namespace forest {

namespace {

void check_levels(const std::vector<std::vector<Cell>>& levels, int degree) {
    if (degree < 0)
        throw std::invalid_argument("degree must be nonnegative");
    if (static_cast<int>(levels.size()) < degree + 2)
        throw std::invalid_argument("levels must reach dimension " + std::to_string(degree + 1));
}

SparseIntMatrix down_matrix(const std::vector<std::vector<Cell>>& levels, int degree,
                            int threads) {
    if (degree == 0)
        return SparseIntMatrix(0, static_cast<int>(levels[0].size()));
    return boundary_matrix(levels[degree - 1], levels[degree], threads);
}

}  // namespace

HomologyResult complex_homology(const std::vector<std::vector<Cell>>& levels, int degree,
                                int threads) {
    check_levels(levels, degree);
    SparseIntMatrix d_down = down_matrix(levels, degree, threads);
    SparseIntMatrix d_up = boundary_matrix(levels[degree], levels[degree + 1], threads);
    return homology(degree, static_cast<long long>(levels[degree].size()), d_down, d_up);
}

HomologyResult complex_homology_lean(const std::vector<std::vector<Cell>>& levels, int degree,
                                     int threads) {
    check_levels(levels, degree);
    const auto& cells = levels[degree];
    const auto& upper = levels[degree + 1];

    int rank_down = 0;
    std::vector<std::vector<std::pair<int, long long>>> down_cols;
    {
        SparseIntMatrix d_down = down_matrix(levels, degree, threads);
        rank_down = integer_rank(d_down);
        if (modular_rank(d_down) > rank_down)
            throw std::logic_error("modular rank exceeds the exact rank");
        // packed view of the outgoing boundary's columns, for the composition check
        down_cols.resize(d_down.cols);
        for (const auto& e : d_down.entries)
            down_cols[e.col].emplace_back(e.row, e.value.get_si());
    }

    PackedColumns up;
    {
        std::unordered_map<std::string, int> row_of;
        row_of.reserve(cells.size() * 2);
        for (std::size_t r = 0; r < cells.size(); ++r)
            row_of.emplace(cells[r].key, static_cast<int>(r));

        up.rows = static_cast<int>(cells.size());
        up.cols.resize(upper.size());
        std::map<int, long long> acc;
        for (std::size_t c = 0; c < upper.size(); ++c) {
            Chain chain = boundary_chain(upper[c].graph);
            auto& col = up.cols[c];
            col.reserve(chain.size());
            acc.clear();
            for (const auto& [key, coeff] : chain) {
                auto it = row_of.find(key);
                if (it == row_of.end())
                    throw std::logic_error("boundary face missing from the lower level: " + key);
                col.emplace_back(it->second, coeff);
                for (const auto& [row, val] : down_cols[it->second]) {
                    auto [jt, fresh] = acc.emplace(row, coeff * val);
                    if (!fresh && (jt->second += coeff * val) == 0)
                        acc.erase(jt);
                }
            }
            if (!acc.empty())
                throw std::logic_error("d(d(" + upper[c].key + ")) is nonzero on " +
                                       levels[degree - 1][acc.begin()->first].key);
        }
        down_cols.clear();
        down_cols.shrink_to_fit();
    }  // the key-to-row index is released before elimination fill-in peaks

    LeanSmith up_smith = lean_smith(std::move(up));
    HomologyResult res;
    res.degree = degree;
    res.betti = static_cast<long long>(cells.size()) - rank_down - up_smith.rank;
    if (res.betti < 0)
        throw std::logic_error("negative betti number");
    for (const mpz_class& d : up_smith.divisors)
        if (d != 1)
            res.torsion.push_back(d);
    return res;
}

std::vector<Chain> homology_representatives(const std::vector<std::vector<Cell>>& levels,
                                            int degree, int threads) {
    check_levels(levels, degree);
    SparseIntMatrix d_down = down_matrix(levels, degree, threads);
    SparseIntMatrix d_up = boundary_matrix(levels[degree], levels[degree + 1], threads);
    auto columns = cycle_representatives(static_cast<int>(levels[degree].size()), d_down, d_up);
    std::vector<Chain> chains;
    for (const auto& col : columns) {
        Chain chain;
        for (std::size_t i = 0; i < col.size(); ++i)
            if (col[i] != 0) {
                if (!col[i].fits_slong_p())
                    throw std::overflow_error("representative coefficient exceeds long long");
                chain[levels[degree][i].key] = col[i].get_si();
            }
        chains.push_back(std::move(chain));
    }
    return chains;
}

}  // namespace forest
