#include "forest/verify.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <map>
#include <numeric>
#include <set>
#include <thread>

#include "forest/free_group.hpp"

namespace forest {

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x)
            x = parent[x] = parent[parent[x]];
        return x;
    }
    /* returns false if already joined */
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b)
            return false;
        parent[a] = b;
        return true;
    }
};

void note(LemmaReport& report, const std::string& check, bool ok, const std::string& key,
          const std::string& detail) {
    LemmaCounts& c = report[check];
    ++c.checked;
    if (!ok)
        c.violations.push_back(key + ": " + detail);
}

void check_graph(const ColoredGraph& g, LemmaReport& report) {
    const std::string key = g.str();
    int rank = g.rank();
    int vertices = g.vertex_count();

    for (const EdgeBasis& basis : edge_bases(g)) {
        std::string basis_tag;
        for (int e : basis)
            basis_tag += (basis_tag.empty() ? "basis " : ",") + std::to_string(e);

        // complement of the basis is a spanning tree
        {
            std::vector<bool> in_basis(g.edge_count(), false);
            for (int e : basis)
                in_basis[e] = true;
            UnionFind uf(vertices);
            bool acyclic = true;
            int count = 0;
            for (int e = 0; e < g.edge_count(); ++e) {
                if (in_basis[e])
                    continue;
                ++count;
                if (!uf.unite(g.edge(e).init, g.edge(e).term))
                    acyclic = false;
            }
            bool spanning = true;
            for (int v = 1; v < vertices; ++v)
                if (uf.find(v) != uf.find(0))
                    spanning = false;
            note(report, "maxtree", acyclic && spanning && count == vertices - 1, key,
                 basis_tag + " complement is not a spanning tree");
        }

        // basic cycles: intersections connected, exclusion, orientation
        std::vector<std::set<int>> cycle_edges(rank);
        std::vector<std::set<int>> cycle_vertices(rank);
        bool cycles_ok = true;
        for (int c = 1; c <= rank; ++c) {
            auto cycle = basic_cycle(g, basis, c);
            if (!cycle) {
                cycles_ok = false;
                continue;
            }
            for (const auto& [e, forward] : *cycle) {
                cycle_edges[c - 1].insert(e);
                cycle_vertices[c - 1].insert(g.edge(e).init);
                cycle_vertices[c - 1].insert(g.edge(e).term);
            }
        }
        for (int j = 1; j <= rank && cycles_ok; ++j)
            for (int k = j + 1; k <= rank; ++k) {
                std::vector<int> shared_v;
                std::set_intersection(cycle_vertices[j - 1].begin(), cycle_vertices[j - 1].end(),
                                      cycle_vertices[k - 1].begin(), cycle_vertices[k - 1].end(),
                                      std::back_inserter(shared_v));
                std::vector<int> shared_e;
                std::set_intersection(cycle_edges[j - 1].begin(), cycle_edges[j - 1].end(),
                                      cycle_edges[k - 1].begin(), cycle_edges[k - 1].end(),
                                      std::back_inserter(shared_e));
                bool connected = true;
                if (shared_v.size() > 1) {
                    std::map<int, int> index;
                    for (std::size_t i = 0; i < shared_v.size(); ++i)
                        index[shared_v[i]] = static_cast<int>(i);
                    UnionFind uf(static_cast<int>(shared_v.size()));
                    for (int e : shared_e)
                        uf.unite(index.at(g.edge(e).init), index.at(g.edge(e).term));
                    for (std::size_t i = 1; i < shared_v.size(); ++i)
                        if (uf.find(static_cast<int>(i)) != uf.find(0))
                            connected = false;
                }
                note(report, "conn", connected, key,
                     basis_tag + " cycles " + std::to_string(j) + "," + std::to_string(k) +
                         " meet disconnectedly");
            }
        for (int i = 1; i <= rank && cycles_ok; ++i)
            for (int j = i + 1; j <= rank; ++j) {
                bool ci_meets_hj = false;
                for (int e : g.color_class(j))
                    if (cycle_edges[i - 1].count(e))
                        ci_meets_hj = true;
                bool cj_meets_hi = false;
                for (int e : g.color_class(i))
                    if (cycle_edges[j - 1].count(e))
                        cj_meets_hi = true;
                note(report, "lemma1", !ci_meets_hj || !cj_meets_hi, key,
                     basis_tag + " colors " + std::to_string(i) + "," + std::to_string(j) +
                         " both invade");
            }

        note(report, "or", cycles_ok && coherent_for_basis(g, basis), key,
             basis_tag + " incoherent orientation");
    }

    {
        auto order = color_order(g);
        note(report, "order", order_antisymmetric(order) && order_transitive(order), key,
             "color order is not a strict partial order");
    }

    try {
        auto fs = closed_cell_faces({g, Automorphism::identity(rank)});
        std::size_t expected = 1;
        for (int c = 1; c <= rank; ++c)
            expected *= (std::size_t{1} << g.color_class(c).size()) - 1;
        bool distinct = true;
        for (std::size_t i = 0; i < fs.size() && distinct; ++i)
            for (std::size_t j = i + 1; j < fs.size() && distinct; ++j)
                if (fs[i] == fs[j])
                    distinct = false;
        note(report, "faces-count", fs.size() == expected && distinct, key,
             "closed cell has " + std::to_string(fs.size()) + " faces, expected " +
                 std::to_string(expected) + (distinct ? "" : " (collision)"));
    } catch (const std::exception& e) {
        note(report, "faces-count", false, key, std::string("face computation failed: ") + e.what());
    }

    note(report, "trivial-automorphisms", count_equivalences(g, g) == 1, key,
         "nontrivial self-equivalence");

    {
        bool ok = true;
        for (int v = 0; v < vertices && ok; ++v) {
            std::vector<int> per_color(rank, 0);
            for (const auto& [e, at_init] : g.half_edges(v))
                if (++per_color[g.edge(e).color - 1] > 2)
                    ok = false;
        }
        note(report, "notthree", ok, key, "three same-color half-edges at a vertex");
    }
}

}  // namespace

LemmaReport verify_cell_lemmas(const ColoredGraph& cell) {
    LemmaReport report;
    check_graph(cell, report);
    return report;
}

LemmaReport verify_lemmas(const std::vector<std::vector<Cell>>& levels, int threads) {
    std::vector<const Cell*> cells;
    for (const auto& level : levels)
        for (const Cell& c : level)
            cells.push_back(&c);

    int nthreads = std::max(1, threads);
    std::vector<LemmaReport> partial(nthreads);
    std::atomic<std::size_t> next{0};
    auto worker = [&](int t) {
        for (std::size_t i; (i = next.fetch_add(1)) < cells.size();)
            check_graph(cells[i]->graph, partial[t]);
    };
    if (nthreads == 1 || cells.size() < 2) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < nthreads; ++t)
            pool.emplace_back(worker, t);
        for (auto& th : pool)
            th.join();
    }

    LemmaReport merged;
    for (const LemmaReport& p : partial)
        for (const auto& [check, counts] : p) {
            merged[check].checked += counts.checked;
            merged[check].violations.insert(merged[check].violations.end(),
                                            counts.violations.begin(), counts.violations.end());
        }
    for (auto& [check, counts] : merged)
        std::sort(counts.violations.begin(), counts.violations.end());
    return merged;
}

}  // namespace forest
