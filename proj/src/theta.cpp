#include "forest/theta.hpp"

#include <stdexcept>
#include <string>

namespace forest {

CoreShape classify_core(const ColoredGraph& cell) {
    if (cell.vertex_count() != 3)
        throw std::invalid_argument("core classification needs a 2-cell (three vertices)");

    // exactly two colors of size two; any third non-singleton class means the
    // dimension bookkeeping is broken and no theta can be present anyway
    std::vector<int> doubled;
    for (int c = 1; c <= cell.rank(); ++c) {
        std::size_t size = cell.color_class(c).size();
        if (size == 2)
            doubled.push_back(c);
        else if (size != 1)
            return {};
    }
    if (doubled.size() != 2)
        return {};

    auto touches_basepoint = [&](int color) {
        for (int e : cell.color_class(color))
            if (cell.edge(e).init == 0 || cell.edge(e).term == 0)
                return true;
        return false;
    };
    int base = 0, loop = 0;
    for (int c : doubled)
        (touches_basepoint(c) ? base : loop) = c;
    if (base == 0 || loop == 0)
        return {};

    // the loop pair: an anti-parallel 2-cycle on the two non-basepoint vertices
    auto loop_edges = cell.color_class(loop);
    const Edge& c0 = cell.edge(loop_edges[0]);
    const Edge& c1 = cell.edge(loop_edges[1]);
    if (c0.init == c0.term || c0.init != c1.term || c0.term != c1.init)
        return {};

    // the base pair: one edge out of the basepoint, one into it, landing on
    // the two distinct 2-cycle vertices
    auto base_edges = cell.color_class(base);
    const Edge& a0 = cell.edge(base_edges[0]);
    const Edge& a1 = cell.edge(base_edges[1]);
    const Edge* out = nullptr;
    const Edge* in = nullptr;
    for (const Edge* e : {&a0, &a1}) {
        if (e->init == 0 && e->term != 0)
            out = e;
        else if (e->term == 0 && e->init != 0)
            in = e;
    }
    if (!out || !in || out->term == in->init)
        return {};

    // One reference picture for every color pair: base axis before loop axis,
    // the basepoint-leaving edge first on the base axis, the 2-cycle edge
    // leaving its head first on the loop axis.  The cell's own orientation
    // orders axes by color and edges by storage, so the comparison picks up a
    // parity factor from each axis and one from the axis order; boundary
    // cancellation across color pairs sharing a loop color needs all three.
    int sign = (base < loop ? 1 : -1) * (out == &a0 ? 1 : -1) *
               (c0.init == out->term ? 1 : -1);
    return {true, base, loop, sign};
}

ThetaVector theta_of_chain(const Chain& z, int rank) {
    ThetaVector out(rank, 0);
    for (const auto& [key, coeff] : z) {
        if (coeff == 0)
            continue;
        CoreShape shape = classify_core(ColoredGraph::parse(key));
        if (shape.is_theta)
            out[shape.loop_color - 1] += coeff * shape.sign;
    }
    return out;
}

SparseIntMatrix theta_on_homology_lean(const std::vector<std::vector<Cell>>& levels, int rank,
                                       long long betti2, int threads) {
    if (levels.size() < 3)
        throw std::invalid_argument("levels must reach dimension 2");
    if (betti2 < 0)
        throw std::invalid_argument("negative homology rank");
    const auto& cells = levels[2];

    SparseIntMatrix f(rank, static_cast<int>(cells.size()));
    for (std::size_t c = 0; c < cells.size(); ++c) {
        CoreShape shape = classify_core(cells[c].graph);
        if (shape.is_theta)
            f.add(shape.loop_color - 1, static_cast<int>(c), mpz_class(shape.sign));
    }
    f.normalize();

    SparseIntMatrix d2 = boundary_matrix(levels[1], levels[2], threads);
    KernelImage image = kernel_functional_image(d2, f);
    SparseIntMatrix values(rank, static_cast<int>(image.kernel_columns.size()));
    {
        std::vector<int> slot(image.transformed.cols, -1);
        for (std::size_t j = 0; j < image.kernel_columns.size(); ++j)
            slot[image.kernel_columns[j]] = static_cast<int>(j);
        for (const auto& e : image.transformed.entries)
            if (slot[e.col] >= 0)
                values.add(e.row, slot[e.col], e.value);
    }
    values.normalize();

    SparseIntMatrix basis = column_lattice_basis(values);
    if (basis.cols > betti2)
        throw std::logic_error("value lattice rank exceeds the homology rank");
    SparseIntMatrix padded(rank, static_cast<int>(betti2));
    for (const auto& e : basis.entries)
        padded.add(e.row, e.col, e.value);
    padded.normalize();
    return padded;
}

SparseIntMatrix theta_on_homology(const std::vector<Chain>& reps, int rank) {
    SparseIntMatrix m(rank, static_cast<int>(reps.size()));
    for (std::size_t r = 0; r < reps.size(); ++r) {
        Chain boundary;
        for (const auto& [key, coeff] : reps[r])
            for (const auto& [face, sign] : boundary_chain(ColoredGraph::parse(key))) {
                boundary[face] += sign * coeff;
                if (boundary[face] == 0)
                    boundary.erase(face);
            }
        if (!boundary.empty())
            throw std::invalid_argument("representative " + std::to_string(r) +
                                        " is not a cycle");
        ThetaVector column = theta_of_chain(reps[r], rank);
        for (int row = 0; row < rank; ++row)
            if (column[row] != 0)
                m.add(row, static_cast<int>(r), mpz_class(static_cast<long>(column[row])));
    }
    m.normalize();
    return m;
}

}  // namespace forest
