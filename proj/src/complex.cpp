#include "forest/complex.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <mutex>
#include <thread>
#include <unordered_map>

namespace forest {

namespace {

/* Parity of the permutation given by the relative order of distinct ints:
 * +1 if sorting needs an even number of swaps, -1 otherwise. */
int relative_order_parity(const std::vector<int>& seq) {
    int inversions = 0;
    for (std::size_t i = 0; i < seq.size(); ++i)
        for (std::size_t j = i + 1; j < seq.size(); ++j)
            if (seq[i] > seq[j])
                ++inversions;
    return inversions % 2 == 0 ? 1 : -1;
}

std::vector<std::vector<int>> color_classes(const ColoredGraph& g) {
    std::vector<std::vector<int>> classes(g.rank());
    for (int e = 0; e < g.edge_count(); ++e)
        classes[g.edge(e).color - 1].push_back(e);
    return classes;
}

}  // namespace

std::vector<Face> faces(const ColoredGraph& cell) {
    std::vector<Face> out;
    auto classes = color_classes(cell);
    int prefix = 0;  // k_1 + ... + k_{i-1}
    for (int color = 1; color <= cell.rank(); ++color) {
        const auto& cls = classes[color - 1];
        int k = static_cast<int>(cls.size()) - 1;
        if (k == 0)
            continue;
        for (int j = 0; j <= k; ++j) {
            int collapsed = cls[j];
            CanonicalForm cf = canonicalize(blowdown(cell, collapsed));
            std::vector<int> edge_map(cell.edge_count(), -1);
            for (int e = 0; e < cell.edge_count(); ++e)
                if (e != collapsed)
                    edge_map[e] = cf.edge_map[e < collapsed ? e : e - 1];
            int sign = (prefix + j) % 2 == 0 ? 1 : -1;
            for (int m = 1; m <= cell.rank(); ++m) {
                std::vector<int> inherited;
                for (int e : classes[m - 1])
                    if (e != collapsed)
                        inherited.push_back(edge_map[e]);
                sign *= relative_order_parity(inherited);
            }
            out.push_back({color, j, sign, cf.graph, std::move(edge_map)});
        }
        prefix += k;
    }
    return out;
}

Chain boundary_chain(const ColoredGraph& cell) {
    Chain chain;
    for (const Face& f : faces(cell)) {
        auto it = chain.find(f.graph.str());
        if (it == chain.end())
            chain.emplace(f.graph.str(), f.sign);
        else if ((it->second += f.sign) == 0)
            chain.erase(it);
    }
    return chain;
}

SparseIntMatrix boundary_matrix(const std::vector<Cell>& lower, const std::vector<Cell>& upper,
                                int threads) {
    std::unordered_map<std::string, int> row_of;
    for (std::size_t r = 0; r < lower.size(); ++r)
        row_of.emplace(lower[r].key, static_cast<int>(r));

    std::vector<Chain> columns(upper.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t c; (c = next.fetch_add(1)) < upper.size();)
            columns[c] = boundary_chain(upper[c].graph);
    };
    int nthreads = std::max(1, threads);
    if (nthreads == 1 || upper.size() < 2) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < nthreads; ++t)
            pool.emplace_back(worker);
        for (auto& t : pool)
            t.join();
    }

    SparseIntMatrix m(static_cast<int>(lower.size()), static_cast<int>(upper.size()));
    for (std::size_t c = 0; c < columns.size(); ++c)
        for (const auto& [key, coeff] : columns[c]) {
            auto it = row_of.find(key);
            if (it == row_of.end())
                throw std::logic_error("boundary face missing from the lower level: " + key);
            m.add(it->second, static_cast<int>(c), mpz_class(static_cast<long>(coeff)));
        }
    m.normalize();
    return m;
}

std::pair<ColoredGraph, std::vector<int>> collapse_except(const ColoredGraph& g,
                                                          const std::vector<int>& kept) {
    std::vector<bool> keep(g.edge_count(), false);
    for (int e : kept) {
        if (e < 0 || e >= g.edge_count())
            throw std::invalid_argument("kept edge id out of range");
        keep[e] = true;
    }
    ColoredGraph cur = g;
    std::vector<int> ids(g.edge_count());
    for (int e = 0; e < g.edge_count(); ++e)
        ids[e] = e;
    for (int e = g.edge_count() - 1; e >= 0; --e) {
        if (keep[e])
            continue;
        int ce = ids[e];
        cur = blowdown(cur, ce);
        for (int& id : ids)
            if (id > ce)
                --id;
        ids[e] = -1;
    }
    return {std::move(cur), std::move(ids)};
}

EdgeBasis designated_basis(const ColoredGraph& g) {
    EdgeBasis basis(g.rank(), -1);
    for (int e = 0; e < g.edge_count(); ++e) {
        int c = g.edge(e).color - 1;
        if (basis[c] < 0)
            basis[c] = e;
    }
    return basis;
}

WhiteheadMove edge_whitehead_label(const ColoredGraph& g, const EdgeBasis& from,
                                   const EdgeBasis& to) {
    if (static_cast<int>(from.size()) != g.rank() || static_cast<int>(to.size()) != g.rank())
        throw std::invalid_argument("basis size must equal the rank");
    int color = 0;
    for (int c = 1; c <= g.rank(); ++c)
        if (from[c - 1] != to[c - 1]) {
            if (color != 0)
                throw std::invalid_argument("bases differ in more than one color");
            color = c;
        }
    if (color == 0)
        throw std::invalid_argument("bases are equal");
    if (g.edge(from[color - 1]).color != color || g.edge(to[color - 1]).color != color)
        throw std::invalid_argument("basis edge has the wrong color");

    std::vector<int> kept = {from[color - 1], to[color - 1]};
    for (int c = 1; c <= g.rank(); ++c)
        if (c != color)
            kept.push_back(from[c - 1]);
    auto [sub, edge_map] = collapse_except(g, kept);
    if (sub.vertex_count() != 2)
        throw std::logic_error("two-vertex quotient expected");

    std::vector<Letter> letters;
    for (int c = 1; c <= g.rank(); ++c) {
        if (c == color)
            continue;
        const Edge& e = sub.edge(edge_map[from[c - 1]]);
        if (e.term == 1)
            letters.push_back(Letter(c));
        if (e.init == 1)
            letters.push_back(Letter(-c));
    }
    const Edge& source = sub.edge(edge_map[from[color - 1]]);
    return WhiteheadMove(letters, source.term == 0 ? Letter(-color) : Letter(color));
}

Automorphism transport_marking(const ColoredGraph& g, const EdgeBasis& from, const EdgeBasis& to,
                               const Automorphism& marking,
                               const std::vector<int>* color_switch_order) {
    std::vector<int> order;
    if (color_switch_order) {
        order = *color_switch_order;
        std::vector<int> sorted = order;
        std::sort(sorted.begin(), sorted.end());
        std::vector<int> expected;
        for (int c = 1; c <= g.rank(); ++c)
            if (from[c - 1] != to[c - 1])
                expected.push_back(c);
        if (sorted != expected)
            throw std::invalid_argument("switch order must list exactly the differing colors");
    } else {
        for (int c = 1; c <= g.rank(); ++c)
            if (from[c - 1] != to[c - 1])
                order.push_back(c);
    }
    EdgeBasis current = from;
    Automorphism result = marking;
    for (int c : order) {
        EdgeBasis next = current;
        next[c - 1] = to[c - 1];
        WhiteheadMove label = edge_whitehead_label(g, current, next);
        result = result.then(Automorphism::whitehead(label, g.rank()));
        current = next;
    }
    return result;
}

MarkedCell act(const Automorphism& f, const MarkedCell& m) {
    if (f.rank() != m.marking.rank())
        throw std::invalid_argument("rank mismatch");
    return {m.graph, compose(f, m.marking)};
}

namespace {

/* Pull the face's designated basis back through the parent->face edge map. */
EdgeBasis pulled_back_basis(const ColoredGraph& parent, const ColoredGraph& face,
                            const std::vector<int>& edge_map) {
    std::vector<int> inverse(face.edge_count(), -1);
    for (int e = 0; e < parent.edge_count(); ++e)
        if (edge_map[e] >= 0)
            inverse[edge_map[e]] = e;
    EdgeBasis face_basis = designated_basis(face);
    EdgeBasis parent_basis(face_basis.size());
    for (std::size_t c = 0; c < face_basis.size(); ++c)
        parent_basis[c] = inverse[face_basis[c]];
    return parent_basis;
}

}  // namespace

std::vector<SignedMarkedCell> marked_boundary(const MarkedCell& m) {
    EdgeBasis designated = designated_basis(m.graph);
    std::vector<SignedMarkedCell> out;
    for (const Face& f : faces(m.graph)) {
        EdgeBasis target = pulled_back_basis(m.graph, f.graph, f.edge_map);
        Automorphism mu = transport_marking(m.graph, designated, target, m.marking);
        out.push_back({f.sign, {f.graph, std::move(mu)}});
    }
    return out;
}

std::vector<MarkedCell> closed_cell_faces(const MarkedCell& m) {
    auto classes = color_classes(m.graph);
    EdgeBasis designated = designated_basis(m.graph);
    std::vector<std::uint32_t> masks(classes.size(), 1);
    std::vector<MarkedCell> out;
    while (true) {
        std::vector<int> kept;
        for (std::size_t c = 0; c < classes.size(); ++c)
            for (std::size_t j = 0; j < classes[c].size(); ++j)
                if (masks[c] >> j & 1)
                    kept.push_back(classes[c][j]);
        std::sort(kept.begin(), kept.end());
        auto [raw, edge_map] = collapse_except(m.graph, kept);
        CanonicalForm cf = canonicalize(raw);
        std::vector<int> composite(m.graph.edge_count(), -1);
        for (int e = 0; e < m.graph.edge_count(); ++e)
            if (edge_map[e] >= 0)
                composite[e] = cf.edge_map[edge_map[e]];
        EdgeBasis target = pulled_back_basis(m.graph, cf.graph, composite);
        Automorphism mu = transport_marking(m.graph, designated, target, m.marking);
        out.push_back({cf.graph, std::move(mu)});

        std::size_t c = 0;
        while (c < classes.size()) {
            if (++masks[c] < (1u << classes[c].size()))
                break;
            masks[c] = 1;
            ++c;
        }
        if (c == classes.size())
            break;
    }
    return out;
}

namespace {

struct Deadline {
    std::chrono::steady_clock::time_point at;
    bool bounded = false;
    bool passed() const { return bounded && std::chrono::steady_clock::now() > at; }
};

/* All valid one-vertex-split refinements of g, canonicalized into `found`. */
void blowups_of(const ColoredGraph& g, std::map<std::string, ColoredGraph>& found,
                const Deadline& deadline, std::atomic<bool>& out_of_time) {
    int rank = g.rank();
    int new_vertex = g.vertex_count();
    long long candidates = 0;
    for (int v = 0; v < g.vertex_count(); ++v) {
        auto hes = g.half_edges(v);
        int deg = static_cast<int>(hes.size());
        std::vector<int> stay_count(rank), move_count(rank);
        for (std::uint32_t mask = 1; mask + 1 < (1u << deg); ++mask) {
            int moved = __builtin_popcount(mask);
            if (moved < 2)
                continue;  // split-off vertex would have valence < 3
            int stayed = deg - moved;
            if (v == 0 ? stayed < 1 : stayed < 2)
                continue;
            if (v != 0 && (mask & 1))
                continue;  // for a non-basepoint vertex the two sides are symmetric
            std::fill(stay_count.begin(), stay_count.end(), 0);
            std::fill(move_count.begin(), move_count.end(), 0);
            for (int i = 0; i < deg; ++i) {
                int c = g.edge(hes[i].first).color - 1;
                ++(mask >> i & 1 ? move_count[c] : stay_count[c]);
            }
            std::vector<Edge> moved_edges = g.edges();
            for (int i = 0; i < deg; ++i) {
                if (!(mask >> i & 1))
                    continue;
                Edge& e = moved_edges[hes[i].first];
                (hes[i].second ? e.init : e.term) = new_vertex;
            }
            for (int color = 1; color <= rank; ++color) {
                if (stay_count[color - 1] > 1 || move_count[color - 1] > 1)
                    continue;  // the joining edge would give three same-color half-edges
                for (int dir = 0; dir < 2; ++dir) {
                    if ((++candidates & 1023) == 0 && deadline.passed()) {
                        out_of_time.store(true);
                        return;
                    }
                    std::vector<Edge> edges = moved_edges;
                    edges.push_back(dir ? Edge{v, new_vertex, color}
                                        : Edge{new_vertex, v, color});
                    ColoredGraph candidate(rank, new_vertex + 1, std::move(edges));
                    if (!is_valid(candidate))
                        continue;
                    CanonicalForm cf = canonicalize(candidate);
                    found.emplace(std::move(cf.key), std::move(cf.graph));
                }
            }
        }
    }
}

}  // namespace

namespace {

Deadline make_deadline(double budget_seconds) {
    Deadline deadline;
    if (budget_seconds > 0) {
        deadline.bounded = true;
        deadline.at = std::chrono::steady_clock::now() +
                      std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                          std::chrono::duration<double>(budget_seconds));
    }
    return deadline;
}

std::vector<Cell> expand_level(const std::vector<Cell>& prev, int threads,
                               const Deadline& deadline, int dim_label) {
    std::atomic<bool> out_of_time{false};
    std::atomic<std::size_t> next{0};
    int nthreads = std::max(1, threads);
    std::vector<std::map<std::string, ColoredGraph>> partial(nthreads);
    auto worker = [&](int t) {
        for (std::size_t i; (i = next.fetch_add(1)) < prev.size();) {
            if (out_of_time.load())
                return;
            blowups_of(prev[i].graph, partial[t], deadline, out_of_time);
        }
    };
    if (nthreads == 1 || prev.size() < 2) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < nthreads; ++t)
            pool.emplace_back(worker, t);
        for (auto& t : pool)
            t.join();
    }
    if (out_of_time.load() || deadline.passed())
        throw BudgetExceeded("enumeration exceeded the time budget at dimension " +
                             std::to_string(dim_label));
    std::map<std::string, ColoredGraph> merged;
    for (auto& p : partial)
        merged.merge(p);
    std::vector<Cell> level;
    level.reserve(merged.size());
    for (auto& [key, graph] : merged)
        level.push_back(Cell(graph));
    return level;
}

}  // namespace

std::vector<std::vector<Cell>> enumerate_cells(int rank, int max_dim,
                                               const EnumerationOptions& opts) {
    if (rank < 1 || max_dim < 0)
        throw std::invalid_argument("rank must be >= 1 and max_dim >= 0");
    Deadline deadline = make_deadline(opts.budget_seconds);

    std::vector<Edge> rose_edges;
    for (int c = 1; c <= rank; ++c)
        rose_edges.push_back({0, 0, c});
    ColoredGraph rose = canonicalize(ColoredGraph(rank, 1, std::move(rose_edges))).graph;

    std::vector<std::vector<Cell>> levels;
    levels.push_back({Cell(rose)});
    if (opts.progress)
        opts.progress(0, 1);

    for (int dim = 1; dim <= max_dim; ++dim) {
        levels.push_back(expand_level(levels.back(), opts.threads, deadline, dim));
        if (opts.progress)
            opts.progress(dim, levels.back().size());
    }
    return levels;
}

std::vector<Cell> expand_level(const std::vector<Cell>& prev, const EnumerationOptions& opts) {
    if (prev.empty())
        return {};
    int dim = prev.front().dim() + 1;
    std::vector<Cell> level = expand_level(prev, opts.threads, make_deadline(opts.budget_seconds),
                                           dim);
    if (opts.progress)
        opts.progress(dim, level.size());
    return level;
}

}  // namespace forest
