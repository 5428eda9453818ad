#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "forest/graph.hpp"

using namespace forest;

static ColoredGraph rose(int n) {
    std::vector<Edge> es;
    for (int c = 1; c <= n; ++c)
        es.push_back({0, 0, c});
    return ColoredGraph(n, 1, std::move(es));
}

/* basepoint *, cycle vertices 1 and 2; handles color 1, two-cycle color 2 */
static ColoredGraph theta12() {
    return ColoredGraph(2, 3,
                        {{0, 1, 1},    // a: * -> v
                         {2, 0, 1},    // b: w -> *
                         {1, 2, 2},    // c: v -> w
                         {2, 1, 2}});  // d: w -> v
}

static ColoredGraph relabeled(const ColoredGraph& g, std::mt19937& rng) {
    std::vector<int> vmap(g.vertex_count());
    std::iota(vmap.begin(), vmap.end(), 0);
    std::shuffle(vmap.begin() + 1, vmap.end(), rng);
    std::vector<Edge> es;
    for (const Edge& e : g.edges())
        es.push_back({vmap[e.init], vmap[e.term], e.color});
    std::shuffle(es.begin(), es.end(), rng);
    return ColoredGraph(g.rank(), g.vertex_count(), std::move(es));
}

TEST_CASE("construction rejects malformed data") {
    CHECK_THROWS_AS(ColoredGraph(0, 1, {}), std::invalid_argument);
    CHECK_THROWS_AS(ColoredGraph(1, 0, {}), std::invalid_argument);
    CHECK_THROWS_AS(ColoredGraph(1, 1, {{0, 1, 1}}), std::invalid_argument);
    CHECK_THROWS_AS(ColoredGraph(1, 1, {{0, 0, 2}}), std::invalid_argument);
    CHECK_THROWS_AS(ColoredGraph(1, 1, {{0, 0, 0}}), std::invalid_argument);
}

TEST_CASE("roses and the theta graph are valid") {
    for (int n = 1; n <= 4; ++n)
        CHECK(validate(rose(n)).empty());
    CHECK(validate(theta12()).empty());
}

TEST_CASE("validation diagnostics fire per check") {
    // color 2 empty, rank equation off
    ColoredGraph g1(2, 1, {{0, 0, 1}});
    auto d1 = validate(g1);
    CHECK(!d1.empty());
    bool saw_colors = false;
    for (auto& d : d1)
        if (d.check == "colors")
            saw_colors = true;
    CHECK(saw_colors);

    // loop in a two-edge class: basis through the non-loop leaves a one-edge cycle
    ColoredGraph g2(2, 2, {{0, 0, 1}, {0, 1, 1}, {1, 1, 2}});
    bool saw_partition = false;
    for (auto& d : validate(g2))
        if (d.check == "partition")
            saw_partition = true;
    CHECK(saw_partition);

    // rank-1 two-vertex cycle: non-basepoint valence 2
    ColoredGraph g3(1, 2, {{0, 1, 1}, {1, 0, 1}});
    bool saw_valence = false;
    for (auto& d : validate(g3))
        if (d.check == "valence")
            saw_valence = true;
    CHECK(saw_valence);

    // incoherent orientation: both two-cycle edges point the same way
    ColoredGraph g4(2, 3, {{0, 1, 1}, {2, 0, 1}, {1, 2, 2}, {1, 2, 2}});
    bool saw_orientation = false;
    for (auto& d : validate(g4))
        if (d.check == "orientation")
            saw_orientation = true;
    CHECK(saw_orientation);

    // disconnected: two components
    ColoredGraph g5(2, 2, {{0, 0, 1}, {1, 1, 2}});
    bool saw_conn = false;
    for (auto& d : validate(g5))
        if (d.check == "connected")
            saw_conn = true;
    CHECK(saw_conn);
}

TEST_CASE("edge bases enumerate one edge per color") {
    CHECK(edge_bases(rose(3)).size() == 1);
    auto bs = edge_bases(theta12());
    CHECK(bs.size() == 4);  // 2 x 2
    for (auto& b : bs) {
        CHECK(b.size() == 2);
        CHECK(theta12().edge(b[0]).color == 1);
        CHECK(theta12().edge(b[1]).color == 2);
    }
}

TEST_CASE("basic cycles traverse the spanning-tree path") {
    auto g = theta12();
    // basis {a, c}: tree {b, d}
    auto c1 = basic_cycle(g, {0, 2}, 1);
    REQUIRE(c1.has_value());
    // a forward, then d backward (1 -> 2), then b forward (2 -> 0)
    CHECK(*c1 == std::vector<std::pair<int, bool>>{{0, true}, {3, false}, {1, true}});
    auto c2 = basic_cycle(g, {0, 2}, 2);
    REQUIRE(c2.has_value());
    CHECK(*c2 == std::vector<std::pair<int, bool>>{{2, true}, {3, true}});
    // rose: every basic cycle is its own loop
    auto rc = basic_cycle(rose(2), {0, 1}, 2);
    REQUIRE(rc.has_value());
    CHECK(*rc == std::vector<std::pair<int, bool>>{{1, true}});
    // a non-basis: complement contains a cycle
    ColoredGraph g2(2, 2, {{0, 0, 1}, {0, 1, 1}, {1, 1, 2}});
    CHECK(!basic_cycle(g2, {1, 2}, 1).has_value());
    for (auto& b : edge_bases(g))
        CHECK(coherent_for_basis(g, b));
}

TEST_CASE("blowdown collapses an edge and shifts labels") {
    auto g = theta12();
    auto h = blowdown(g, 2);  // collapse c: vertices 1,2 merge
    CHECK(h.vertex_count() == 2);
    CHECK(h.edge_count() == 3);
    CHECK(validate(h).empty());
    CHECK(h.edges() == std::vector<Edge>{{0, 1, 1}, {1, 0, 1}, {1, 1, 2}});
    CHECK_THROWS_AS(blowdown(h, 2), std::invalid_argument);  // singleton loop
    CHECK_THROWS_AS(blowdown(rose(2), 0), std::invalid_argument);
    // collapsing either handle keeps validity too
    CHECK(validate(blowdown(g, 0)).empty());
    CHECK(validate(blowdown(g, 1)).empty());
}

TEST_CASE("canonical form is relabel-invariant and idempotent") {
    std::mt19937 rng(2026);
    for (int n = 1; n <= 3; ++n) {
        auto key = canonical_key(rose(n));
        for (int trial = 0; trial < 5; ++trial)
            CHECK(canonical_key(relabeled(rose(n), rng)) == key);
    }
    auto g = theta12();
    auto cf = canonicalize(g);
    CHECK(cf.key == "n=2;V=3;E=1:0:1,1:2:0,2:1:2,2:2:1");
    for (int trial = 0; trial < 30; ++trial)
        CHECK(canonical_key(relabeled(g, rng)) == cf.key);
    // idempotent: the canonical graph canonicalizes to itself with identity maps
    auto cf2 = canonicalize(cf.graph);
    CHECK(cf2.key == cf.key);
    for (size_t i = 0; i < cf2.vertex_map.size(); ++i)
        CHECK(cf2.vertex_map[i] == static_cast<int>(i));
    for (size_t i = 0; i < cf2.edge_map.size(); ++i)
        CHECK(cf2.edge_map[i] == static_cast<int>(i));
    // maps really relabel the input onto the canonical graph
    for (int e = 0; e < g.edge_count(); ++e) {
        const Edge& old_e = g.edge(e);
        const Edge& new_e = cf.graph.edge(cf.edge_map[e]);
        CHECK(new_e.color == old_e.color);
        CHECK(new_e.init == cf.vertex_map[old_e.init]);
        CHECK(new_e.term == cf.vertex_map[old_e.term]);
    }
    CHECK_THROWS_AS(canonicalize(ColoredGraph(2, 2, {{0, 0, 1}, {1, 1, 2}})),
                    std::invalid_argument);
}

TEST_CASE("equivalence counting distinguishes colors and orientations") {
    std::mt19937 rng(7);
    auto g = theta12();
    CHECK(count_equivalences(g, g) == 1);
    CHECK(equivalent(g, relabeled(g, rng)));
    // flipping the two-cycle merely swaps the parallel pair
    ColoredGraph flipped(2, 3, {{0, 1, 1}, {2, 0, 1}, {2, 1, 2}, {1, 2, 2}});
    CHECK(equivalent(g, flipped));
    CHECK(canonical_key(flipped) == canonical_key(g));
    // swapping the colors is a different colored graph
    ColoredGraph mirror(2, 3, {{0, 1, 2}, {2, 0, 2}, {1, 2, 1}, {2, 1, 1}});
    CHECK(!equivalent(g, mirror));
    CHECK(canonical_key(mirror) != canonical_key(g));
    // reversing one handle breaks orientation preservation
    ColoredGraph rev(2, 3, {{1, 0, 1}, {2, 0, 1}, {1, 2, 2}, {2, 1, 2}});
    CHECK(!equivalent(g, rev));
    // roses: unique self-equivalence, loop direction is no datum
    CHECK(count_equivalences(rose(3), rose(3)) == 1);
}

TEST_CASE("color order reflects basic-cycle containment") {
    CHECK(color_order(rose(3)).empty());
    auto ord = color_order(theta12());
    CHECK(ord == std::vector<std::pair<int, int>>{{1, 2}});
    CHECK(order_antisymmetric(ord));
    CHECK(order_transitive(ord));
    CHECK(!order_antisymmetric({{1, 2}, {2, 1}}));
    CHECK(!order_transitive({{1, 2}, {2, 3}}));
    CHECK(order_transitive({{1, 2}, {2, 3}, {1, 3}}));
}

TEST_CASE("serialization round-trips") {
    auto g = theta12();
    CHECK(ColoredGraph::parse(g.str()) == g);
    CHECK(g.str() == "n=2;V=3;E=1:0:1,1:2:0,2:1:2,2:2:1");
    CHECK_THROWS_AS(ColoredGraph::parse("V=1;E="), std::invalid_argument);
    CHECK_THROWS_AS(ColoredGraph::parse("n=1;V=1;E=1:0"), std::invalid_argument);
    CHECK_THROWS_AS(ColoredGraph::parse("n=1;V=1;E=1:0:0;X=2"), std::invalid_argument);
}

TEST_CASE("three same-key half-edges at a vertex are rejected") {
    ColoredGraph g(1, 1, {{0, 0, 1}, {0, 0, 1}, {0, 0, 1}});
    bool saw = false;
    for (auto& d : validate(g))
        if (d.check == "half-edges")
            saw = true;
    CHECK(saw);
    CHECK_THROWS_AS(canonicalize(g), std::invalid_argument);
}
