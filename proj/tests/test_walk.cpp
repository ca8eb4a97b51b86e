#include "doctest.h"

#include "mixlab/generators.hpp"
#include "mixlab/walk.hpp"
#include "oracles.hpp"

#include <cmath>
#include <numeric>

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

std::vector<Vertex> iota_vec(std::size_t n) {
    std::vector<Vertex> v(n);
    std::iota(v.begin(), v.end(), 0);
    return v;
}

// connected non-bipartite random graph with n <= cap vertices
Graph random_walkable(Rng& rng, std::size_t lo, std::size_t hi, std::vector<Vertex>& comp) {
    while (true) {
        std::size_t n = lo + rng.next_below(hi - lo + 1);
        Graph g = sample_gnp(n, 0.45 + 0.3 * rng.next_double(), RngSeed{rng.next_u64(), 5});
        std::vector<bool> seen(n, false);
        comp.assign(1, 0);
        if (g.degree(0) == 0) continue;
        seen[0] = true;
        for (std::size_t h = 0; h < comp.size(); ++h)
            for (const Neighbor& nb : g.neighbors(comp[h]))
                if (!seen[nb.to]) {
                    seen[nb.to] = true;
                    comp.push_back(nb.to);
                }
        if (comp.size() != n) continue;
        std::sort(comp.begin(), comp.end());
        if (is_bipartite(g, comp).bipartite) continue;
        return g;
    }
}

} // namespace

TEST_CASE("stationary: path, regular, K4") {
    Graph p3 = build_graph(3, {{0, 1}, {1, 2}}, false);
    Distribution pi = stationary(p3, {0, 1, 2});
    CHECK(pi.mass[0] == doctest::Approx(0.25));
    CHECK(pi.mass[1] == doctest::Approx(0.5));
    CHECK(pi.mass[2] == doctest::Approx(0.25));

    Graph c6 = cycle(6);
    Distribution pic = stationary(c6, iota_vec(6));
    for (double m : pic.mass) CHECK(m == doctest::Approx(1.0 / 6));

    Graph k4 = complete(4);
    for (double m : stationary(k4, iota_vec(4)).mass) CHECK(m == doctest::Approx(0.25));

    auto exact = stationary_exact(p3, {0, 1, 2});
    CHECK(exact[0] == Rational(1, 4));
    CHECK(exact[1] == Rational(1, 2));
    Rational total(0);
    for (const auto& r : exact) total += r;
    CHECK(total == Rational(1));
}

TEST_CASE("stationary rejects disconnected and isolated input") {
    Graph g = build_graph(4, {{0, 1}, {2, 3}}, false);
    CHECK_THROWS_AS(stationary(g, {0, 1, 2, 3}), WalkError);
    Graph iso = build_graph(1, {}, false);
    CHECK_THROWS_AS(stationary(iso, {0}), WalkError);
}

TEST_CASE("reversibility: pi_i p_ij == pi_j p_ji exactly, including loops") {
    Rng rng(29, 0);
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t n = 2 + rng.next_below(10);
        std::vector<Edge> edges;
        for (std::size_t i = 0; i < n + 3; ++i)
            edges.push_back({static_cast<Vertex>(rng.next_below(n)),
                             static_cast<Vertex>(rng.next_below(n))});
        Graph g = build_graph(n, edges, true);
        auto comps = components(g);
        const auto& comp = comps.front();
        if (comp.size() < 2) continue;
        bool walkable = true;
        for (Vertex v : comp) walkable &= g.degree(v) > 0;
        if (!walkable) continue;
        auto pi = stationary_exact(g, comp);
        for (std::size_t i = 0; i < comp.size(); ++i) {
            for (std::size_t j = 0; j < comp.size(); ++j) {
                Vertex u = comp[i], v = comp[j];
                std::uint32_t m_uv = g.multiplicity(u, v);
                auto slots = [&](Vertex a) {
                    return u == v ? Rational(2 * static_cast<std::int64_t>(m_uv),
                                             static_cast<std::int64_t>(g.degree(a)))
                                  : Rational(static_cast<std::int64_t>(m_uv),
                                             static_cast<std::int64_t>(g.degree(a)));
                };
                CHECK(pi[i] * slots(u) == pi[j] * slots(v));
            }
        }
    }
}

TEST_CASE("step: stationarity, K2 swap, laziness") {
    Graph k2 = build_graph(2, {{0, 1}}, false);
    Distribution x = Distribution::point_mass({0, 1}, 0);

    Distribution y0 = step(k2, x, 0.0);
    CHECK(y0.mass[0] == doctest::Approx(0.0));
    CHECK(y0.mass[1] == doctest::Approx(1.0));

    Distribution yl = step(k2, x, 0.5);
    CHECK(yl.mass[0] == doctest::Approx(0.5));
    CHECK(yl.mass[1] == doctest::Approx(0.5));

    // pi is a fixed point for any laziness
    Graph g = sample_gnp(40, 0.2, {4, 6});
    auto comps = components(g);
    const auto& comp = comps.front();
    Distribution pi = stationary(g, comp);
    for (double laz : {0.0, 0.3, 0.9}) {
        Distribution next = step(g, pi, laz);
        for (std::size_t i = 0; i < pi.mass.size(); ++i)
            CHECK(next.mass[i] == doctest::Approx(pi.mass[i]).epsilon(1e-12));
    }
}

TEST_CASE("step: loops route mass back with weight 2/d") {
    // vertex 0: loop plus edge to 1, so d(0)=3, p_00 = 2/3
    Graph g = build_graph(2, {{0, 0}, {0, 1}}, true);
    Distribution x = Distribution::point_mass({0, 1}, 0);
    Distribution y = step(g, x, 0.0);
    CHECK(y.mass[0] == doctest::Approx(2.0 / 3));
    CHECK(y.mass[1] == doctest::Approx(1.0 / 3));
}

TEST_CASE("step preserves mass to 1e-12") {
    Rng rng(31, 0);
    for (int trial = 0; trial < 20; ++trial) {
        std::size_t n = 5 + rng.next_below(60);
        Graph g = sample_gnp(n, 3.0 / static_cast<double>(n), RngSeed{rng.next_u64(), 7});
        auto comps = components(g);
        const auto& comp = comps.front();
        if (comp.size() < 2) continue;
        Distribution x = Distribution::point_mass(comp, comp[0]);
        for (int s = 0; s < 50; ++s) {
            x = step(g, x, 0.25);
            double mass = 0.0;
            for (double m : x.mass) mass += m;
            CHECK(std::abs(mass - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("tv_distance basics and brute-force subset equivalence") {
    Distribution a{{0, 1}, {1.0, 0.0}};
    Distribution b{{0, 1}, {0.0, 1.0}};
    CHECK(tv_distance(a, a) == 0.0);
    CHECK(tv_distance(a, b) == 1.0);

    Distribution c{{0, 1}, {0.5, 0.5}};
    Distribution d{{0, 1}, {0.75, 0.25}};
    CHECK(tv_distance(c, d) == doctest::Approx(0.25));
    CHECK(oracle::tv_subset_max(c.mass, d.mass) == doctest::Approx(0.25));

    Distribution e{{0, 1, 2}, {0.2, 0.3, 0.5}};
    CHECK_THROWS_AS(tv_distance(a, e), WalkError);

    Rng rng(37, 0);
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t n = 2 + rng.next_below(9);
        std::vector<double> pa(n), pb(n);
        double sa = 0, sb = 0;
        for (std::size_t i = 0; i < n; ++i) {
            pa[i] = rng.next_double();
            pb[i] = rng.next_double();
            sa += pa[i];
            sb += pb[i];
        }
        for (std::size_t i = 0; i < n; ++i) {
            pa[i] /= sa;
            pb[i] /= sb;
        }
        std::vector<Vertex> supp = iota_vec(n);
        double half_l1 = tv_distance({supp, pa}, {supp, pb});
        CHECK(half_l1 == doctest::Approx(oracle::tv_subset_max(pa, pb)).epsilon(1e-12));
    }
}

TEST_CASE("mixing_time: K2 lazy in one step") {
    Graph k2 = build_graph(2, {{0, 1}}, false);
    WalkConfig cfg;
    cfg.laziness = 0.5;
    CHECK(mixing_time(k2, {0, 1}, cfg).t == 1);
}

TEST_CASE("mixing_time rejects bipartite components without laziness") {
    Graph c4 = cycle(4);
    WalkConfig cfg;
    CHECK_THROWS_WITH(mixing_time(c4, iota_vec(4), cfg), doctest::Contains("bipartite"));
    cfg.laziness = 0.5;
    CHECK(mixing_time(c4, iota_vec(4), cfg).t > 0);
}

TEST_CASE("mixing and cesaro times equal the dense oracle on small graphs") {
    Rng rng(41, 0);
    WalkConfig cfg;
    for (int trial = 0; trial < 60; ++trial) {
        std::vector<Vertex> comp;
        Graph g = random_walkable(rng, 2, 7, comp);
        auto [t_oracle, t_cesaro_oracle] = oracle::dense_mixing_times(g, comp, 0.0, cfg.epsilon);
        MixingResult mine = mixing_time(g, comp, cfg);
        MixingResult cesaro = cesaro_mixing_time(g, comp, cfg);
        CHECK(mine.t == t_oracle);
        CHECK(cesaro.t == t_cesaro_oracle);
    }
}

TEST_CASE("mixing_time on the triangle equals the dense oracle") {
    Graph k3 = complete(3);
    WalkConfig cfg;
    auto [t_oracle, t_cesaro_oracle] = oracle::dense_mixing_times(k3, {0, 1, 2}, 0.0, cfg.epsilon);
    CHECK(mixing_time(k3, {0, 1, 2}, cfg).t == t_oracle);
    CHECK(cesaro_mixing_time(k3, {0, 1, 2}, cfg).t == t_cesaro_oracle);
}

TEST_CASE("walk refuses instead of approximating beyond its budgets") {
    Graph c512 = cycle(512);
    std::vector<Vertex> comp = iota_vec(512);
    WalkConfig tiny;
    tiny.laziness = 0.5;
    tiny.max_steps = 10; // nowhere near the ~n^2 steps a lazy cycle needs
    CHECK_THROWS_AS(mixing_time(c512, comp, tiny), BudgetExceeded);
    CHECK_THROWS_AS(cesaro_mixing_time(c512, comp, tiny), BudgetExceeded);

    WalkConfig small_n;
    small_n.laziness = 0.5;
    small_n.max_vertices = 100;
    CHECK_THROWS_AS(mixing_time(c512, comp, small_n), BudgetExceeded);
}

TEST_CASE("cesaro works on bipartite components without laziness") {
    Graph c4 = cycle(4);
    WalkConfig cfg;
    MixingResult r = cesaro_mixing_time(c4, iota_vec(4), cfg);
    CHECK(r.t >= 2);
    CHECK(r.t <= 16);
}

TEST_CASE("multigraph chains (loops, parallel edges) match the dense oracle") {
    Rng rng(83, 0);
    WalkConfig cfg;
    int done = 0;
    while (done < 40) {
        std::size_t n = 2 + rng.next_below(5);
        std::vector<Edge> edges;
        std::size_t m = 2 + rng.next_below(9);
        for (std::size_t i = 0; i < m; ++i)
            edges.push_back({static_cast<Vertex>(rng.next_below(n)),
                             static_cast<Vertex>(rng.next_below(n))});
        Graph g = build_graph(n, edges, true);
        auto comps = components(g);
        const auto& comp = comps.front();
        if (comp.size() < 2) continue;
        bool ok = true;
        for (Vertex v : comp) ok &= g.degree(v) > 0;
        if (!ok || is_bipartite(g, comp).bipartite) continue;
        auto [t_oracle, t_ces_oracle] = oracle::dense_mixing_times(g, comp, 0.0, cfg.epsilon);
        CHECK(mixing_time(g, comp, cfg).t == t_oracle);
        CHECK(cesaro_mixing_time(g, comp, cfg).t == t_ces_oracle);
        ++done;
    }
}

TEST_CASE("cesaro_mixing_time: K2 with and without laziness is 2") {
    Graph k2 = build_graph(2, {{0, 1}}, false);
    WalkConfig cfg;
    CHECK(cesaro_mixing_time(k2, {0, 1}, cfg).t == 2);
    cfg.laziness = 0.5;
    CHECK(cesaro_mixing_time(k2, {0, 1}, cfg).t == 2);
}

TEST_CASE("cesaro from the stationary start is 1") {
    Graph g = complete(4);
    WalkConfig cfg;
    Distribution pi = stationary(g, iota_vec(4));
    CHECK(cesaro_time_from(g, iota_vec(4), pi, cfg) == 1);
}

TEST_CASE("threshold amplification: t(2/e)^l <= l T_mix") {
    Rng rng(43, 0);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<Vertex> comp;
        Graph g = random_walkable(rng, 4, 7, comp);
        WalkConfig cfg;
        cfg.laziness = 0.5;
        std::uint64_t t_mix = mixing_time(g, comp, cfg).t;
        for (int l : {2, 3}) {
            WalkConfig amp = cfg;
            amp.epsilon = std::pow(2.0 / std::exp(1.0), l);
            for (Vertex s : comp) {
                Distribution x0 = Distribution::point_mass(comp, s);
                CHECK(mixing_time_from(g, comp, x0, amp) <= static_cast<std::uint64_t>(l) * t_mix);
            }
        }
    }
}

TEST_CASE("d_TV against pi is non-increasing along an evolution") {
    Graph c8 = cycle(8);
    WalkConfig cfg;
    cfg.laziness = 0.5;
    Distribution pi = stationary(c8, iota_vec(8));
    Distribution x = Distribution::point_mass(iota_vec(8), 0);
    double last = tv_distance(x, pi);
    for (int t = 0; t < 300; ++t) {
        x = step(c8, x, 0.5);
        double cur = tv_distance(x, pi);
        CHECK(cur <= last + 1e-12);
        last = cur;
    }
    CHECK(last < 1e-6);
}

TEST_CASE("lazy cycle mixing scales like n^2 (ratio window)") {
    WalkConfig cfg;
    cfg.laziness = 0.5;
    std::vector<std::uint64_t> tprime;
    for (std::size_t n : {16, 32, 64}) {
        Graph g = cycle(n);
        tprime.push_back(cesaro_mixing_time(g, iota_vec(n), cfg).t);
    }
    for (std::size_t i = 0; i + 1 < tprime.size(); ++i) {
        double ratio = static_cast<double>(tprime[i + 1]) / static_cast<double>(tprime[i]);
        CHECK(ratio >= 3.3);
        CHECK(ratio <= 4.7);
    }
}

TEST_CASE("trajectory escape: zero steps, immediate absorption and 1-D agreement") {
    // 3-vertex path glued between two K4 blobs: a=0, m=8, b=4
    Graph g = build_graph(9, {{0, 1}, {1, 2}, {2, 3}, {0, 2}, {1, 3}, {0, 3},
                              {4, 5}, {5, 6}, {6, 7}, {4, 6}, {5, 7}, {4, 7},
                              {0, 8}, {8, 4}},
                          false);
    auto comps = components(g);
    auto census = degree2_paths(g, comps.front());
    // 12 empty-interior junction-junction edges inside the blobs plus the path
    REQUIRE(census.paths.size() == 13);
    const Degree2Path& p = census.paths.front();
    REQUIRE(p.interior.size() == 1);

    CHECK(trajectory_escape_probability(g, p, 0, 1000, {9, 0}) == 1.0);
    CHECK(trajectory_escape_probability(g, p, 1, 1000, {9, 0}) == 0.0);

    // longer path: stay-probability roughly matches the 1-D reduction
    const std::size_t l = 10;
    std::vector<Edge> edges;
    for (Vertex i = 0; i < 3; ++i)
        for (Vertex j = i + 1; j < 3; ++j) { /* K3 */ }
    // build K4 blobs on 0..3 and 4..7, path of 2l+1 interior vertices between 0 and 4
    edges = {{0, 1}, {1, 2}, {2, 3}, {0, 2}, {1, 3}, {0, 3},
             {4, 5}, {5, 6}, {6, 7}, {4, 6}, {5, 7}, {4, 7}};
    Vertex q0 = 8;
    const std::size_t interior = 2 * l + 1;
    edges.push_back({0, q0});
    for (std::size_t i = 0; i + 1 < interior; ++i)
        edges.push_back({static_cast<Vertex>(q0 + i), static_cast<Vertex>(q0 + i + 1)});
    edges.push_back({static_cast<Vertex>(q0 + interior - 1), 4});
    Graph glued = build_graph(8 + interior, edges, false);
    auto census2 = degree2_paths(glued, components(glued).front());
    REQUIRE(census2.paths.front().interior.size() == interior);

    std::uint64_t t = l * l / 2;
    double est = trajectory_escape_probability(glued, census2.paths.front(), t, 20000, {10, 0});
    Rng rng(10, 99);
    double oned = oracle::one_d_stay_probability(static_cast<std::int64_t>(l) + 1, t, 20000, rng);
    CHECK(std::abs(est - oned) < 0.03);
}

TEST_CASE("heuristic_worst_starts: path midpoints first, fallbacks sane") {
    // long degree-2 path between two K4 corners
    std::vector<Edge> edges = {{0, 1}, {1, 2}, {2, 3}, {0, 2}, {1, 3}, {0, 3},
                               {4, 5}, {5, 6}, {6, 7}, {4, 6}, {5, 7}, {4, 7}};
    const std::size_t interior = 9;
    Vertex q0 = 8;
    edges.push_back({0, q0});
    for (std::size_t i = 0; i + 1 < interior; ++i)
        edges.push_back({static_cast<Vertex>(q0 + i), static_cast<Vertex>(q0 + i + 1)});
    edges.push_back({static_cast<Vertex>(q0 + interior - 1), 4});
    Graph g = build_graph(8 + interior, edges, false);
    DecompositionReport rep = decompose(g);
    auto comps = components(g);
    auto starts = heuristic_worst_starts(g, comps.front(), rep, 4, {11, 0});
    REQUIRE(!starts.empty());
    CHECK(starts[0] == rep.path_census.paths.front().midpoint());

    // k >= n returns everything
    auto all = heuristic_worst_starts(g, comps.front(), rep, 100, {11, 0});
    CHECK(all.size() == comps.front().size());

    // C8: no paths, no decorations -> uniform samples
    Graph c8 = cycle(8);
    DecompositionReport r8 = decompose(c8);
    auto s8 = heuristic_worst_starts(c8, components(c8).front(), r8, 3, {11, 0});
    CHECK(s8.size() == 3);
}

TEST_CASE("walk report JSON carries the per-start records") {
    Graph k2 = build_graph(2, {{0, 1}}, false);
    WalkConfig cfg;
    cfg.laziness = 0.5;
    MixingResult mix = mixing_time(k2, {0, 1}, cfg);
    MixingResult ces = cesaro_mixing_time(k2, {0, 1}, cfg);
    std::string json = walk_report_json(mix, ces, cfg, "{\"laziness\":0.5}");
    for (const char* key : {"t_mix", "t_mix_cesaro", "per_start", "final_tv", "step_budget"})
        CHECK(json.find(key) != std::string::npos);
}

TEST_CASE("per-start parallelism does not change the result") {
    Graph g = sample_gnp(60, 0.1, {12, 0});
    auto comps = components(g);
    const auto& comp = comps.front();
    if (comp.size() >= 3 && !is_bipartite(g, comp).bipartite) {
        WalkConfig one;
        one.workers = 1;
        WalkConfig four;
        four.workers = 4;
        MixingResult a = mixing_time(g, comp, one);
        MixingResult b = mixing_time(g, comp, four);
        CHECK(a.t == b.t);
        CHECK(a.worst_start == b.worst_start);
        REQUIRE(a.per_start.size() == b.per_start.size());
        for (std::size_t i = 0; i < a.per_start.size(); ++i) {
            CHECK(a.per_start[i].t == b.per_start[i].t);
            CHECK(a.per_start[i].final_tv == b.per_start[i].final_tv);
        }
    }
}
