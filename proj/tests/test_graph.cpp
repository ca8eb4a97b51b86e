#include "doctest.h"

#include "mixlab/generators.hpp"
#include "mixlab/graph.hpp"
#include "mixlab/rng.hpp"
#include "oracles.hpp"

using namespace mixlab;

namespace {

Graph cycle(std::size_t n) {
    std::vector<Edge> edges;
    for (Vertex i = 0; i < n; ++i) edges.push_back({i, static_cast<Vertex>((i + 1) % n)});
    return build_graph(n, edges, false);
}

Graph complete(std::size_t n) {
    std::vector<Edge> edges;
    for (Vertex i = 0; i < n; ++i)
        for (Vertex j = i + 1; j < n; ++j) edges.push_back({i, j});
    return build_graph(n, edges, false);
}

} // namespace

TEST_CASE("build_graph: triangle, empty graph, loop conventions") {
    Graph k3 = build_graph(3, {{0, 1}, {1, 2}, {0, 2}}, false);
    CHECK(k3.edge_count() == 3);
    for (Vertex v = 0; v < 3; ++v) CHECK(k3.degree(v) == 2);

    Graph empty = build_graph(2, {}, false);
    CHECK(empty.edge_count() == 0);
    CHECK(empty.degree(0) == 0);

    Graph loop = build_graph(1, {{0, 0}}, true);
    CHECK(loop.edge_count() == 1);
    CHECK(loop.degree(0) == 2); // sum d = 2e* forces the loop convention
}

TEST_CASE("build_graph rejections") {
    CHECK_THROWS_AS(build_graph(3, {{0, 3}}, false), GraphError);
    CHECK_THROWS_AS(build_graph(3, {{0, 0}}, false), GraphError);
    CHECK_THROWS_AS(build_graph(3, {{0, 1}, {1, 0}}, false), GraphError);
    CHECK_THROWS_WITH(build_graph(3, {{1, 1}}, false),
                      doctest::Contains("loop (1,1)"));
}

TEST_CASE("degree sum equals 2 e* on random multigraphs") {
    Rng rng(7, 0);
    for (int trial = 0; trial < 50; ++trial) {
        std::size_t n = 2 + rng.next_below(30);
        std::vector<Edge> edges;
        std::size_t m = rng.next_below(60);
        for (std::size_t i = 0; i < m; ++i)
            edges.push_back({static_cast<Vertex>(rng.next_below(n)),
                             static_cast<Vertex>(rng.next_below(n))});
        Graph g = build_graph(n, edges, true);
        std::uint64_t dsum = 0;
        for (Vertex v = 0; v < n; ++v) dsum += g.degree(v);
        CHECK(dsum == 2 * g.edge_count());
    }
}

TEST_CASE("subset_stats: K4 pair, full set, C8 arc") {
    Graph k4 = complete(4);
    VertexSubset s = subset_stats(k4, VertexSet(4, {0, 1}));
    CHECK(s.e_in == 1);
    CHECK(s.e_out == 4);
    CHECK(s.total_degree == 6);

    VertexSubset full = subset_stats(k4, VertexSet(4, {0, 1, 2, 3}));
    CHECK(full.e_out == 0);
    CHECK(full.e_in == k4.edge_count());
    CHECK(full.total_degree == 2 * k4.edge_count());

    Graph c8 = cycle(8);
    VertexSubset arc = subset_stats(c8, VertexSet(8, {0, 1, 2, 3}));
    CHECK(arc.e_in == 3);
    CHECK(arc.e_out == 2);
    CHECK(arc.total_degree == 8);

    VertexSubset none = subset_stats(c8, VertexSet(8));
    CHECK(none.e_in == 0);
    CHECK(none.e_out == 0);
    CHECK(none.total_degree == 0);
}

TEST_CASE("subset_stats agrees with brute-force recount on 1000 random subsets") {
    Rng rng(11, 0);
    int done = 0;
    while (done < 1000) {
        std::size_t n = 2 + rng.next_below(63);
        Graph g = sample_gnp(n, 3.0 / static_cast<double>(n), RngSeed{rng.next_u64(), 1});
        for (int s = 0; s < 10 && done < 1000; ++s, ++done) {
            std::vector<bool> in(n, false);
            VertexSet set(n);
            for (Vertex v = 0; v < n; ++v)
                if (rng.next_u64() & 1) {
                    in[v] = true;
                    set.insert(v);
                }
            VertexSubset st = subset_stats(g, set);
            auto brute = oracle::subset_counts(g, in);
            CHECK(st.e_in == brute.e_in);
            CHECK(st.e_out == brute.e_out);
            CHECK(st.total_degree == brute.total_degree);
            // the two identities
            CHECK(st.total_degree == 2 * st.e_in + st.e_out);
            std::vector<bool> out(n);
            VertexSet comp_set(n);
            for (Vertex v = 0; v < n; ++v)
                if (!in[v]) {
                    out[v] = true;
                    comp_set.insert(v);
                }
            CHECK(subset_stats(g, comp_set).e_out == st.e_out);
        }
    }
}

TEST_CASE("subset_stats with loops and multi-edges") {
    // two vertices, double edge plus a loop at 0
    Graph g = build_graph(2, {{0, 1}, {0, 1}, {0, 0}}, true);
    CHECK(g.degree(0) == 4);
    CHECK(g.degree(1) == 2);
    VertexSubset s = subset_stats(g, VertexSet(2, {0}));
    CHECK(s.e_in == 1);  // the loop
    CHECK(s.e_out == 2); // double edge with multiplicity
    CHECK(s.total_degree == 4);
}

TEST_CASE("is_bipartite: even cycle, triangle, loop") {
    Graph c8 = cycle(8);
    std::vector<Vertex> comp{0, 1, 2, 3, 4, 5, 6, 7};
    CHECK(is_bipartite(c8, comp).bipartite);

    Graph k3 = complete(3);
    auto r = is_bipartite(k3, {0, 1, 2});
    CHECK_FALSE(r.bipartite);
    REQUIRE(r.odd_walk.size() >= 2);
    CHECK(r.odd_walk.front() == r.odd_walk.back());
    CHECK((r.odd_walk.size() - 1) % 2 == 1); // odd number of edges
    CHECK(r.odd_walk.size() - 1 == 3);
    for (std::size_t i = 0; i + 1 < r.odd_walk.size(); ++i)
        CHECK(k3.multiplicity(r.odd_walk[i], r.odd_walk[i + 1]) > 0);

    Graph loop = build_graph(1, {{0, 0}}, true);
    auto rl = is_bipartite(loop, {0});
    CHECK_FALSE(rl.bipartite);
    CHECK(rl.odd_walk.size() - 1 == 1);
}

TEST_CASE("is_bipartite rejects non-component input") {
    Graph g = build_graph(4, {{0, 1}, {2, 3}}, false);
    CHECK_THROWS_AS(is_bipartite(g, {0, 1, 2, 3}), GraphError);  // not connected
    CHECK_THROWS_AS(is_bipartite(g, {0}), GraphError);           // not closed
}

TEST_CASE("odd-walk witnesses are valid closed odd walks on random graphs") {
    Rng rng(13, 0);
    int nonbip = 0;
    for (int trial = 0; trial < 200 || nonbip < 40; ++trial) {
        std::size_t n = 3 + rng.next_below(20);
        Graph g = sample_gnp(n, 2.5 / static_cast<double>(n), RngSeed{rng.next_u64(), 2});
        // take the component of vertex with, say, smallest id having edges
        std::vector<Vertex> comp;
        {
            std::vector<bool> seen(n, false);
            Vertex s = 0;
            while (s < n && g.degree(s) == 0) ++s;
            if (s == n) continue;
            comp.push_back(s);
            seen[s] = true;
            for (std::size_t h = 0; h < comp.size(); ++h)
                for (const Neighbor& nb : g.neighbors(comp[h]))
                    if (!seen[nb.to]) {
                        seen[nb.to] = true;
                        comp.push_back(nb.to);
                    }
            std::sort(comp.begin(), comp.end());
        }
        auto r = is_bipartite(g, comp);
        if (r.bipartite) continue;
        ++nonbip;
        CHECK(r.odd_walk.front() == r.odd_walk.back());
        CHECK((r.odd_walk.size() - 1) % 2 == 1);
        for (std::size_t i = 0; i + 1 < r.odd_walk.size(); ++i)
            CHECK(g.multiplicity(r.odd_walk[i], r.odd_walk[i + 1]) > 0);
        if (trial > 5000) break;
    }
    CHECK(nonbip >= 40);
}

TEST_CASE("edge-list round trip is byte stable") {
    Graph g = build_graph(5, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {1, 1}}, true);
    std::string text = store_edge_list(g);
    Graph back = parse_edge_list(text, true);
    CHECK(store_edge_list(back) == text);
    CHECK(back.edge_count() == g.edge_count());
    for (Vertex v = 0; v < 5; ++v) CHECK(back.degree(v) == g.degree(v));

    Graph c8 = cycle(8);
    std::string t8 = store_edge_list(c8);
    CHECK(t8.substr(0, 4) == "8 8\n");
    CHECK(store_edge_list(parse_edge_list(t8, false)) == t8);
}
