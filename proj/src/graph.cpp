#include "forest/graph.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace forest {

ColoredGraph::ColoredGraph(int rank, int vertices, std::vector<Edge> edges)
    : rank_(rank), vertices_(vertices), edges_(std::move(edges)) {
    if (rank_ < 1)
        throw std::invalid_argument("ColoredGraph: rank must be positive");
    if (vertices_ < 1)
        throw std::invalid_argument("ColoredGraph: need at least the basepoint");
    for (const Edge& e : edges_) {
        if (e.init < 0 || e.init >= vertices_ || e.term < 0 || e.term >= vertices_)
            throw std::invalid_argument("ColoredGraph: edge endpoint out of range");
        if (e.color < 1 || e.color > rank_)
            throw std::invalid_argument("ColoredGraph: edge color out of range");
    }
}

std::vector<int> ColoredGraph::color_class(int color) const {
    std::vector<int> ids;
    for (int e = 0; e < edge_count(); ++e)
        if (edges_[e].color == color)
            ids.push_back(e);
    return ids;
}

std::vector<std::pair<int, bool>> ColoredGraph::half_edges(int vertex) const {
    std::vector<std::pair<int, bool>> hs;
    for (int e = 0; e < edge_count(); ++e) {
        if (edges_[e].init == vertex)
            hs.emplace_back(e, true);
        if (edges_[e].term == vertex)
            hs.emplace_back(e, false);
    }
    return hs;
}

int ColoredGraph::valence(int vertex) const {
    return static_cast<int>(half_edges(vertex).size());
}

std::string ColoredGraph::str() const {
    std::string s = "n=" + std::to_string(rank_) + ";V=" + std::to_string(vertices_) + ";E=";
    for (int e = 0; e < edge_count(); ++e) {
        if (e) s += ',';
        s += std::to_string(edges_[e].color) + ':' + std::to_string(edges_[e].init) + ':' +
             std::to_string(edges_[e].term);
    }
    return s;
}

ColoredGraph ColoredGraph::parse(const std::string& text) {
    auto fail = [&](const std::string& why) {
        throw std::invalid_argument("ColoredGraph::parse: " + why + " in '" + text + "'");
    };
    int rank = -1, vertices = -1;
    std::vector<Edge> edges;
    std::istringstream in(text);
    std::string field;
    bool saw_edges = false;
    while (std::getline(in, field, ';')) {
        if (field.rfind("n=", 0) == 0)
            rank = std::stoi(field.substr(2));
        else if (field.rfind("V=", 0) == 0)
            vertices = std::stoi(field.substr(2));
        else if (field.rfind("E=", 0) == 0) {
            saw_edges = true;
            std::istringstream es(field.substr(2));
            std::string tok;
            while (std::getline(es, tok, ',')) {
                int c, i, t;
                char s1, s2;
                std::istringstream ts(tok);
                if (!(ts >> c >> s1 >> i >> s2 >> t) || s1 != ':' || s2 != ':')
                    fail("bad edge token '" + tok + "'");
                edges.push_back({i, t, c});
            }
        } else
            fail("unknown field '" + field + "'");
    }
    if (rank < 0 || vertices < 0 || !saw_edges)
        fail("missing n=, V= or E= field");
    return ColoredGraph(rank, vertices, std::move(edges));
}

/* ---- validation ---------------------------------------------------------- */

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x)
            x = parent[x] = parent[parent[x]];
        return x;
    }
    /* false if already joined (i.e. this edge closes a cycle) */
    bool join(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b)
            return false;
        parent[a] = b;
        return true;
    }
};

}  // namespace

std::vector<EdgeBasis> edge_bases(const ColoredGraph& g) {
    std::vector<std::vector<int>> classes(g.rank());
    for (int c = 1; c <= g.rank(); ++c) {
        classes[c - 1] = g.color_class(c);
        if (classes[c - 1].empty())
            return {};
    }
    std::vector<EdgeBasis> out;
    EdgeBasis cur(g.rank());
    std::vector<size_t> pos(g.rank(), 0);
    for (;;) {
        for (int c = 0; c < g.rank(); ++c)
            cur[c] = classes[c][pos[c]];
        out.push_back(cur);
        int c = g.rank() - 1;
        while (c >= 0 && ++pos[c] == classes[c].size())
            pos[c--] = 0;
        if (c < 0)
            break;
    }
    return out;
}

std::optional<std::vector<std::pair<int, bool>>> basic_cycle(const ColoredGraph& g,
                                                             const EdgeBasis& basis, int color) {
    if (static_cast<int>(basis.size()) != g.rank() || color < 1 || color > g.rank())
        return std::nullopt;
    std::vector<char> in_basis(g.edge_count(), 0);
    for (int e : basis) {
        if (e < 0 || e >= g.edge_count() || in_basis[e])
            return std::nullopt;
        in_basis[e] = 1;
    }
    /* complement must be a spanning tree */
    UnionFind uf(g.vertex_count());
    int tree_edges = 0;
    for (int e = 0; e < g.edge_count(); ++e) {
        if (in_basis[e])
            continue;
        ++tree_edges;
        if (!uf.join(g.edge(e).init, g.edge(e).term))
            return std::nullopt;
    }
    if (tree_edges != g.vertex_count() - 1)
        return std::nullopt;

    const int ec = basis[color - 1];
    std::vector<std::pair<int, bool>> cycle{{ec, true}};
    const int from = g.edge(ec).term, to = g.edge(ec).init;
    if (from == to)
        return cycle;  // singleton loop
    /* BFS through tree edges from `from` to `to` */
    std::vector<int> prev_edge(g.vertex_count(), -1), prev_vertex(g.vertex_count(), -1);
    std::vector<char> seen(g.vertex_count(), 0);
    std::queue<int> q;
    q.push(from);
    seen[from] = 1;
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        if (v == to)
            break;
        for (int e = 0; e < g.edge_count(); ++e) {
            if (in_basis[e])
                continue;
            int w = -1;
            if (g.edge(e).init == v)
                w = g.edge(e).term;
            else if (g.edge(e).term == v)
                w = g.edge(e).init;
            else
                continue;
            if (!seen[w]) {
                seen[w] = 1;
                prev_edge[w] = e;
                prev_vertex[w] = v;
                q.push(w);
            }
        }
    }
    if (!seen[to])
        return std::nullopt;
    std::vector<std::pair<int, bool>> path;
    for (int v = to; v != from; v = prev_vertex[v]) {
        int e = prev_edge[v];
        path.emplace_back(e, g.edge(e).term == v);  // forward if traversal matches storage
    }
    std::reverse(path.begin(), path.end());
    cycle.insert(cycle.end(), path.begin(), path.end());
    return cycle;
}

bool coherent_for_basis(const ColoredGraph& g, const EdgeBasis& basis) {
    for (int c = 1; c <= g.rank(); ++c) {
        auto cyc = basic_cycle(g, basis, c);
        if (!cyc)
            return false;
        size_t fwd = 0;
        for (auto [e, forward] : *cyc)
            if (g.edge(e).color == c) {
                if (!forward)
                    return false;
                ++fwd;
            }
        if (fwd != g.color_class(c).size())
            return false;  // some class edge misses its basic cycle
    }
    return true;
}

std::vector<Diagnostic> validate(const ColoredGraph& g) {
    std::vector<Diagnostic> out;

    bool colors_ok = true;
    for (int c = 1; c <= g.rank(); ++c)
        if (g.color_class(c).empty()) {
            out.push_back({"colors", "color " + std::to_string(c) + " has no edges"});
            colors_ok = false;
        }

    if (g.edge_count() != g.rank() + g.vertex_count() - 1)
        out.push_back({"rank", "edge count " + std::to_string(g.edge_count()) + " != rank + V - 1"});

    {
        UnionFind uf(g.vertex_count());
        int comps = g.vertex_count();
        for (const Edge& e : g.edges())
            if (uf.join(e.init, e.term))
                --comps;
        if (comps != 1)
            out.push_back({"connected", std::to_string(comps) + " components"});
    }

    for (int v = 0; v < g.vertex_count(); ++v) {
        int val = g.valence(v);
        int need = (v == 0) ? 2 : 3;
        if (val < need)
            out.push_back({"valence", "vertex " + std::to_string(v) + " has valence " +
                                          std::to_string(val)});
    }

    for (int v = 0; v < g.vertex_count(); ++v) {
        std::vector<int> per_color(g.rank() + 1, 0);
        for (auto [e, out_end] : g.half_edges(v))
            ++per_color[g.edge(e).color];
        for (int c = 1; c <= g.rank(); ++c)
            if (per_color[c] > 2)
                out.push_back({"half-edges", "vertex " + std::to_string(v) + " meets " +
                                                 std::to_string(per_color[c]) +
                                                 " half-edges of color " + std::to_string(c)});
    }

    if (colors_ok) {
        bool partition_ok = true;
        for (const EdgeBasis& basis : edge_bases(g)) {
            /* complement of the basis must be acyclic (a spanning tree, given
             * the rank equation and connectivity checked above) */
            std::vector<char> in_basis(g.edge_count(), 0);
            for (int e : basis)
                in_basis[e] = 1;
            UnionFind uf(g.vertex_count());
            for (int e = 0; e < g.edge_count(); ++e)
                if (!in_basis[e] && !uf.join(g.edge(e).init, g.edge(e).term)) {
                    partition_ok = false;
                    std::string b;
                    for (int x : basis)
                        b += (b.empty() ? "" : ",") + std::to_string(x);
                    out.push_back({"partition", "complement of basis {" + b + "} has a cycle"});
                    break;
                }
        }
        if (partition_ok)
            for (const EdgeBasis& basis : edge_bases(g))
                if (!coherent_for_basis(g, basis)) {
                    std::string b;
                    for (int x : basis)
                        b += (b.empty() ? "" : ",") + std::to_string(x);
                    out.push_back({"orientation", "incoherent along basis {" + b + "}"});
                    break;
                }
    }
    return out;
}

bool is_valid(const ColoredGraph& g) { return validate(g).empty(); }

/* ---- blowdown ------------------------------------------------------------ */

ColoredGraph blowdown(const ColoredGraph& g, int edge_id) {
    if (edge_id < 0 || edge_id >= g.edge_count())
        throw std::invalid_argument("blowdown: no such edge");
    const Edge& e = g.edge(edge_id);
    if (e.init == e.term)
        throw std::invalid_argument("blowdown: cannot collapse a loop");
    if (g.color_class(e.color).size() < 2)
        throw std::invalid_argument("blowdown: cannot collapse a singleton edge");
    const int keep = std::min(e.init, e.term), gone = std::max(e.init, e.term);
    auto relabel = [&](int v) {
        if (v == gone)
            v = keep;
        return v > gone ? v - 1 : v;
    };
    std::vector<Edge> edges;
    edges.reserve(g.edge_count() - 1);
    for (int i = 0; i < g.edge_count(); ++i) {
        if (i == edge_id)
            continue;
        edges.push_back({relabel(g.edge(i).init), relabel(g.edge(i).term), g.edge(i).color});
    }
    return ColoredGraph(g.rank(), g.vertex_count() - 1, std::move(edges));
}

/* ---- canonical form ------------------------------------------------------ */

namespace {

struct TraversalOut {
    std::vector<int> vmap, emap;  // old -> new
    bool needs_more = false;      // hit a tie beyond the decision vector
};

/* One deterministic traversal; `decisions` resolves same-key half-edge ties
 * in encounter order (0 keeps storage order, 1 swaps the pair). */
TraversalOut traverse(const ColoredGraph& g, const std::vector<int>& decisions) {
    TraversalOut r;
    r.vmap.assign(g.vertex_count(), -1);
    r.emap.assign(g.edge_count(), -1);
    std::vector<int> vorder{0};
    r.vmap[0] = 0;
    int vnext = 1, enext = 0;
    size_t tie_at = 0;

    /* incidence lists once */
    std::vector<std::vector<std::pair<int, bool>>> inc(g.vertex_count());
    for (int v = 0; v < g.vertex_count(); ++v)
        inc[v] = g.half_edges(v);

    for (size_t qi = 0; qi < vorder.size(); ++qi) {
        const int v = vorder[qi];
        auto items = inc[v];  // (edge, out)
        std::stable_sort(items.begin(), items.end(), [&](const auto& a, const auto& b) {
            int ca = g.edge(a.first).color, cb = g.edge(b.first).color;
            if (ca != cb)
                return ca < cb;
            return a.second > b.second;  // outgoing before incoming
        });
        /* resolve ties between same-(color, direction) pairs */
        for (size_t i = 0; i + 1 < items.size(); ++i) {
            const auto &a = items[i], &b = items[i + 1];
            if (g.edge(a.first).color != g.edge(b.first).color || a.second != b.second)
                continue;
            if (i + 2 < items.size() && g.edge(items[i + 2].first).color == g.edge(a.first).color &&
                items[i + 2].second == a.second)
                throw std::invalid_argument("canonicalize: three half-edges share a key");
            if (tie_at >= decisions.size()) {
                r.needs_more = true;
                return r;
            }
            if (decisions[tie_at++])
                std::swap(items[i], items[i + 1]);
            ++i;
        }
        for (auto [e, out_end] : items) {
            if (r.emap[e] != -1)
                continue;
            r.emap[e] = enext++;
            const int w = out_end ? g.edge(e).term : g.edge(e).init;
            if (r.vmap[w] == -1) {
                r.vmap[w] = vnext++;
                vorder.push_back(w);
            }
        }
    }
    for (int v = 0; v < g.vertex_count(); ++v)
        if (r.vmap[v] == -1)
            throw std::invalid_argument("canonicalize: graph not connected");
    return r;
}

CanonicalForm assemble(const ColoredGraph& g, const TraversalOut& t) {
    struct Item {
        int color, disc, init, term, old;
    };
    std::vector<Item> items;
    items.reserve(g.edge_count());
    for (int e = 0; e < g.edge_count(); ++e) {
        const Edge& ed = g.edge(e);
        items.push_back({ed.color, t.emap[e], t.vmap[ed.init], t.vmap[ed.term], e});
    }
    std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
        if (a.color != b.color)
            return a.color < b.color;
        return a.disc < b.disc;
    });
    std::vector<Edge> edges;
    std::vector<int> edge_map(g.edge_count());
    for (size_t i = 0; i < items.size(); ++i) {
        edges.push_back({items[i].init, items[i].term, items[i].color});
        edge_map[items[i].old] = static_cast<int>(i);
    }
    ColoredGraph cg(g.rank(), g.vertex_count(), std::move(edges));
    std::string key = cg.str();
    return {std::move(cg), std::move(key), t.vmap, std::move(edge_map)};
}

}  // namespace

CanonicalForm canonicalize(const ColoredGraph& g) {
    std::optional<CanonicalForm> best;
    std::vector<std::vector<int>> pending{{}};
    while (!pending.empty()) {
        std::vector<int> dec = std::move(pending.back());
        pending.pop_back();
        TraversalOut t = traverse(g, dec);
        if (t.needs_more) {
            auto d0 = dec, d1 = dec;
            d0.push_back(0);
            d1.push_back(1);
            pending.push_back(std::move(d0));
            pending.push_back(std::move(d1));
            continue;
        }
        CanonicalForm cf = assemble(g, t);
        if (!best || cf.key < best->key)
            best = std::move(cf);
    }
    return *best;
}

std::string canonical_key(const ColoredGraph& g) { return canonicalize(g).key; }

/* ---- equivalences -------------------------------------------------------- */

int count_equivalences(const ColoredGraph& g, const ColoredGraph& h) {
    if (g.rank() != h.rank() || g.vertex_count() != h.vertex_count() ||
        g.edge_count() != h.edge_count())
        return 0;
    auto tuples = [](const ColoredGraph& x, const std::vector<int>& vmap) {
        std::vector<std::tuple<int, int, int>> t;
        for (const Edge& e : x.edges()) {
            int a = vmap[e.init], b = vmap[e.term];
            if (e.init == e.term)
                t.emplace_back(e.color, a, a);  // loop: direction is not a datum
            else
                t.emplace_back(e.color, a, b);
        }
        std::sort(t.begin(), t.end());
        return t;
    };
    std::vector<int> idmap(h.vertex_count());
    std::iota(idmap.begin(), idmap.end(), 0);
    const auto target = tuples(h, idmap);

    std::vector<int> perm(g.vertex_count());
    std::iota(perm.begin(), perm.end(), 0);
    int count = 0;
    /* permute non-basepoint vertices only */
    std::vector<int> rest(perm.begin() + 1, perm.end());
    std::sort(rest.begin(), rest.end());
    do {
        std::vector<int> vmap(g.vertex_count());
        vmap[0] = 0;
        for (size_t i = 0; i < rest.size(); ++i)
            vmap[i + 1] = rest[i];
        if (tuples(g, vmap) == target) {
            /* edge bijection count: product of factorials of duplicate tuples */
            auto tt = tuples(g, vmap);
            long long ways = 1;
            for (size_t i = 0; i < tt.size();) {
                size_t j = i;
                while (j < tt.size() && tt[j] == tt[i])
                    ++j;
                for (size_t m = 2; m <= j - i; ++m)
                    ways *= static_cast<long long>(m);
                i = j;
            }
            count += static_cast<int>(ways);
        }
    } while (std::next_permutation(rest.begin(), rest.end()));
    return count;
}

bool equivalent(const ColoredGraph& g, const ColoredGraph& h) {
    return count_equivalences(g, h) > 0;
}

/* ---- color order ---------------------------------------------------------- */

std::vector<std::pair<int, int>> color_order(const ColoredGraph& g) {
    std::vector<std::pair<int, int>> out;
    for (const EdgeBasis& basis : edge_bases(g))
        for (int b = 1; b <= g.rank(); ++b) {
            auto cyc = basic_cycle(g, basis, b);
            if (!cyc)
                continue;
            for (auto [e, fwd] : *cyc) {
                int r = g.edge(e).color;
                if (r != b)
                    out.emplace_back(b, r);
            }
        }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool order_antisymmetric(const std::vector<std::pair<int, int>>& order) {
    for (auto [a, b] : order)
        if (std::binary_search(order.begin(), order.end(), std::make_pair(b, a)))
            return false;
    return true;
}

bool order_transitive(const std::vector<std::pair<int, int>>& order) {
    std::vector<std::pair<int, int>> sorted = order;
    std::sort(sorted.begin(), sorted.end());
    for (auto [a, b] : sorted)
        for (auto [c, d] : sorted)
            if (b == c && !std::binary_search(sorted.begin(), sorted.end(), std::make_pair(a, d)))
                return false;
    return true;
}

}  // namespace forest
