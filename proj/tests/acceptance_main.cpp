// Acceptance suite: runs every criterion at its stated tolerance and prints
// one PASS/FAIL line per criterion. Exit code is the number of failures.
#include "mixlab/conductance.hpp"
#include "mixlab/decompose.hpp"
#include "mixlab/experiments.hpp"
#include "mixlab/generators.hpp"
#include "mixlab/graph.hpp"
#include "mixlab/walk.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

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

// fixed pool of random small graphs: connected, and non-bipartite when asked
struct SmallGraph {
    Graph g;
    std::vector<Vertex> comp;
};

SmallGraph random_connected(Rng& rng, std::size_t lo, std::size_t hi, bool require_nonbip) {
    while (true) {
        std::size_t n = lo + rng.next_below(hi - lo + 1);
        double p = std::min(0.9, (1.0 + 2.5 * rng.next_double()) * 2.0 / static_cast<double>(n));
        Graph g = sample_gnp(n, p, RngSeed{rng.next_u64(), 1000});
        auto comps = components(g);
        if (comps.front().size() != n) continue;
        if (require_nonbip && is_bipartite(g, comps.front()).bipartite) continue;
        SmallGraph sg{std::move(g), comps.front()};
        return sg;
    }
}

struct CriterionResult {
    bool pass;
    std::string detail;
};

// shared state for criterion 9
std::vector<SmallGraph> g_pool_c1;                       // criterion-1 graphs
std::vector<std::uint64_t> g_tmix_c1;                    // their measured T_mix
std::vector<SmallGraph> g_pool_c3;                       // criterion-3 graphs

CriterionResult criterion1() {
    Rng rng(20250801, 1);
    WalkConfig cfg;
    std::size_t checked = 0;
    for (int trial = 0; trial < 200; ++trial) {
        SmallGraph sg = random_connected(rng, 2, 7, /*require_nonbip=*/true);
        auto [t_oracle, t_cesaro_oracle] =
            oracle::dense_mixing_times(sg.g, sg.comp, 0.0, cfg.epsilon);
        MixingResult mix = mixing_time(sg.g, sg.comp, cfg);
        MixingResult ces = cesaro_mixing_time(sg.g, sg.comp, cfg);
        if (mix.t != t_oracle || ces.t != t_cesaro_oracle) {
            std::ostringstream os;
            os << "graph " << trial << " (n=" << sg.comp.size() << "): mixing " << mix.t << " vs "
               << t_oracle << ", cesaro " << ces.t << " vs " << t_cesaro_oracle;
            return {false, os.str()};
        }
        g_pool_c1.push_back(std::move(sg));
        g_tmix_c1.push_back(mix.t);
        ++checked;
    }
    return {true, "200/200 graphs equal to the dense matrix-power oracle"};
}

CriterionResult criterion2() {
    Rng rng(20250802, 1);
    double worst = 0.0;
    for (int trial = 0; trial < 500; ++trial) {
        std::size_t n = 2 + rng.next_below(9);
        std::vector<double> a(n), b(n);
        double sa = 0, sb = 0;
        for (std::size_t i = 0; i < n; ++i) {
            a[i] = rng.next_double() + 1e-12;
            b[i] = rng.next_double() + 1e-12;
            sa += a[i];
            sb += b[i];
        }
        for (std::size_t i = 0; i < n; ++i) {
            a[i] /= sa;
            b[i] /= sb;
        }
        std::vector<Vertex> supp = iota_vec(n);
        double mine = tv_distance({supp, a}, {supp, b});
        double brute = oracle::tv_subset_max(a, b);
        worst = std::max(worst, std::abs(mine - brute));
        if (std::abs(mine - brute) > 1e-12) {
            std::ostringstream os;
            os << "pair " << trial << ": half-L1 " << mine << " vs subset max " << brute;
            return {false, os.str()};
        }
    }
    std::ostringstream os;
    os << "500/500 pairs agree; worst deviation " << worst;
    return {true, os.str()};
}

CriterionResult criterion3() {
    Graph c8 = cycle(8);
    MinConductance m8 = exact_min_conductance(c8, iota_vec(8));
    if (std::abs(m8.phi - 0.5) > 1e-12 || m8.witness != std::vector<Vertex>{0, 1, 2, 3})
        return {false, "C8 minimum is not 1/2 with the arc-of-4 witness"};
    Graph k4 = complete(4);
    MinConductance m4 = exact_min_conductance(k4, iota_vec(4));
    if (std::abs(m4.phi - 4.0 / 3) > 1e-12) return {false, "K4 minimum is not 4/3"};

    Rng rng(20250803, 1);
    double worst_ratio = 1.0;
    for (int trial = 0; trial < 200; ++trial) {
        SmallGraph sg = random_connected(rng, 4, 18, /*require_nonbip=*/false);
        DecompositionReport rep = decompose(sg.g);
        MinConductance exact = exact_min_conductance(sg.g, sg.comp, 18);
        MinConductance heur =
            heuristic_min_conductance(sg.g, sg.comp, rep, {rng.next_u64(), 2000});
        if (heur.phi < exact.phi - 1e-12) {
            std::ostringstream os;
            os << "graph " << trial << ": heuristic " << heur.phi << " below exact " << exact.phi;
            return {false, os.str()};
        }
        double ratio = heur.phi / exact.phi;
        worst_ratio = std::max(worst_ratio, ratio);
        if (ratio > 2.0 + 1e-12) {
            std::ostringstream os;
            os << "graph " << trial << ": heuristic/exact = " << ratio << " > 2";
            return {false, os.str()};
        }
        g_pool_c3.push_back(std::move(sg));
    }
    std::ostringstream os;
    os << "C8 and K4 exact; 200-graph suite worst heuristic/exact = " << worst_ratio;
    return {true, os.str()};
}

CriterionResult criterion4() {
    Rng rng(20250804, 1);
    const int samples = 100000;
    double worst_z = 0.0;
    for (int c = 0; c < 10; ++c) {
        // random valid degree sequence with N <= 12 and a random even-degree S
        std::size_t n = 4 + rng.next_below(9);
        DegreeSequence ds;
        for (std::size_t i = 0; i < n; ++i)
            ds.degrees.push_back(static_cast<std::uint32_t>(1 + rng.next_below(4)));
        if (!ds.even_sum()) ds.degrees[0] += 1;
        std::vector<Vertex> s_members;
        std::uint64_t dS = 0;
        for (int attempt = 0; attempt < 1000; ++attempt) {
            s_members.clear();
            dS = 0;
            for (Vertex v = 0; v < n; ++v)
                if (rng.next_u64() & 1) {
                    s_members.push_back(v);
                    dS += ds.degrees[v];
                }
            if (!s_members.empty() && s_members.size() < n && dS % 2 == 0 && dS <= ds.sum() - 2)
                break;
        }
        double p_exact = pairing_isolation_probability(ds.sum() / 2, dS);
        VertexSet sset(n, s_members);
        int isolated = 0;
        for (int i = 0; i < samples; ++i) {
            Graph g = sample_configuration(ds, RngSeed{20250804, 2}.derived("mc", c * samples + i));
            if (subset_stats(g, sset).e_out == 0) ++isolated;
        }
        double freq = static_cast<double>(isolated) / samples;
        double se = std::sqrt(std::max(p_exact * (1 - p_exact), 1e-12) / samples);
        double z = std::abs(freq - p_exact) / se;
        worst_z = std::max(worst_z, z);
        if (z > 3.0) {
            std::ostringstream os;
            os << "case " << c << ": |freq - exact| = " << std::abs(freq - p_exact) << " is " << z
               << " standard errors";
            return {false, os.str()};
        }
    }
    std::ostringstream os;
    os << "10/10 cases within 3 standard errors at 1e5 samples; worst z = " << worst_z;
    return {true, os.str()};
}

CriterionResult criterion5() {
    WalkConfig cfg;
    cfg.laziness = 0.5;
    std::vector<std::uint64_t> ts;
    for (std::size_t n : {16, 32, 64, 128}) {
        Graph g = cycle(n);
        ts.push_back(cesaro_mixing_time(g, iota_vec(n), cfg).t);
    }
    std::ostringstream os;
    os << "T'_mix = ";
    for (auto t : ts) os << t << " ";
    for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
        double ratio = static_cast<double>(ts[i + 1]) / static_cast<double>(ts[i]);
        os << (i ? ", " : "; ratios ") << ratio;
        if (ratio < 3.3 || ratio > 4.7) return {false, os.str() + " (outside [3.3, 4.7])"};
    }
    return {true, os.str()};
}

CriterionResult criterion6() {
    ObstructionReport rep = run_obstruction_demo(50, 100, 10000, {20250806, 0}, 2);
    std::ostringstream os;
    os << "stay probability " << rep.escape_stay_probability << " at t=" << rep.t_checkpoint
       << "; bound " << rep.bound_lower_half << " vs measured T_mix " << rep.t_mix;
    if (rep.escape_stay_probability <= 0.5) return {false, os.str() + " (stay <= 1/2)"};
    if (rep.bound_lower_half > static_cast<double>(rep.t_mix))
        return {false, os.str() + " (bound above measured T_mix)"};
    return {true, os.str()};
}

CriterionResult criterion7() {
    PathCensusStudy study = run_path_census(200000, 1.5, 30, {20250807, 0}, 2);
    int ge = 0, le = 0;
    for (std::size_t r = 0; r < 30; ++r) {
        ge += study.ge_lower[r] ? 1 : 0;
        le += study.le_upper[r] ? 1 : 0;
    }
    std::ostringstream os;
    os << ge << "/30 above ln n/4d = " << study.lower_threshold << ", " << le
       << "/30 below 10 ln n/d = " << study.upper_threshold;
    if (ge < 27) return {false, os.str() + " (lower frequency below 27/30)"};
    if (le < 30) return {false, os.str() + " (upper frequency below 30/30)"};
    return {true, os.str()};
}

CriterionResult criterion8() {
    const std::size_t n = 8192;
    const double ln_n = std::log(static_cast<double>(n));
    const double d = 2.0 * ln_n;
    const double target = ln_n / std::log(d);
    int within = 0;
    std::ostringstream ts;
    for (std::uint32_t r = 0; r < 10; ++r) {
        RngSeed stream = RngSeed{20250808, 0}.derived("dense", r);
        Graph g = sample_gnp(n, d / static_cast<double>(n), stream);
        DecompositionReport rep = decompose(g);
        const auto& giant = rep.giant();
        WalkConfig cfg;
        cfg.start_policy = StartPolicy::Designated;
        cfg.starts = heuristic_worst_starts(g, giant, rep, 32, stream);
        cfg.workers = 2;
        std::uint64_t t = mixing_time(g, giant, cfg).t;
        ts << t << " ";
        if (std::abs(static_cast<double>(t) - target) <= 3.0) ++within;
    }
    std::ostringstream os;
    os << within << "/10 replicates within +-3 of ln n/ln d = " << target << " (measured: "
       << ts.str() << ")";
    if (within < 9) return {false, os.str()};
    return {true, os.str()};
}

CriterionResult criterion9() {
    if (g_pool_c1.empty() || g_pool_c3.empty())
        return {false, "criteria 1 and 3 must run first to provide their graph pools"};
    std::size_t graphs = 0;
    for (std::size_t i = 0; i < g_pool_c1.size(); ++i) {
        const SmallGraph& sg = g_pool_c1[i];
        DecompositionReport rep = decompose(sg.g);
        ConductanceProfile prof =
            conductance_profile(sg.g, sg.comp, rep, 18, {20250809, i});
        std::vector<std::vector<Vertex>> cands;
        for (const ProfileScale& s : prof.scales)
            if (!s.witness.empty()) cands.push_back(s.witness);
        double lower = bound_lower(sg.g, sg.comp, cands);
        if (lower > static_cast<double>(g_tmix_c1[i])) {
            std::ostringstream os;
            os << "criterion-1 graph " << i << ": bound_lower " << lower << " exceeds T_mix "
               << g_tmix_c1[i];
            return {false, os.str()};
        }
        double phi_g = prof.phi_global();
        double dyadic = bound_dyadic_sum(prof).sum;
        if (dyadic > static_cast<double>(prof.scales.size()) / (phi_g * phi_g) + 1e-9) {
            std::ostringstream os;
            os << "criterion-1 graph " << i << ": dyadic sum " << dyadic
               << " exceeds scales x Phi^-2";
            return {false, os.str()};
        }
        ++graphs;
    }
    for (std::size_t i = 0; i < g_pool_c3.size(); ++i) {
        const SmallGraph& sg = g_pool_c3[i];
        DecompositionReport rep = decompose(sg.g);
        ConductanceProfile prof =
            conductance_profile(sg.g, sg.comp, rep, 18, {20250810, i});
        std::vector<std::vector<Vertex>> cands;
        for (const ProfileScale& s : prof.scales)
            if (!s.witness.empty()) cands.push_back(s.witness);
        double lower = bound_lower(sg.g, sg.comp, cands);

        WalkConfig cfg;
        bool bip = is_bipartite(sg.g, sg.comp).bipartite;
        if (bip) cfg.laziness = 0.5; // lazy chain mixes; its own bound dominates ours
        std::uint64_t t = mixing_time(sg.g, sg.comp, cfg).t;
        if (lower > static_cast<double>(t)) {
            std::ostringstream os;
            os << "criterion-3 graph " << i << ": bound_lower " << lower << " exceeds T_mix " << t;
            return {false, os.str()};
        }
        double phi_g = prof.phi_global();
        double dyadic = bound_dyadic_sum(prof).sum;
        if (dyadic > static_cast<double>(prof.scales.size()) / (phi_g * phi_g) + 1e-9) {
            std::ostringstream os;
            os << "criterion-3 graph " << i << ": dyadic sum exceeds scales x Phi^-2";
            return {false, os.str()};
        }
        ++graphs;
    }
    std::ostringstream os;
    os << "bound_lower <= measured T_mix and dyadic dominance on all " << graphs << " graphs";
    return {true, os.str()};
}

CriterionResult criterion10() {
    ScalingOptions opt;
    opt.regime = Regime::ConstantD;
    opt.constant_d = 3.0;
    opt.n_grid = {1024, 2048};
    opt.replicates = 3;
    opt.start_candidates = 8;

    ExperimentRecord a = run_scaling_cell(opt, 2048, 1, {20250810, 0});
    ExperimentRecord b = run_scaling_cell(opt, 2048, 1, {20250810, 0});
    if (csv_row(a) != csv_row(b)) return {false, "cell replay changed its CSV row"};

    opt.workers = 1;
    ScalingStudy one = run_scaling_study(opt, {20250810, 0});
    opt.workers = 2;
    ScalingStudy two = run_scaling_study(opt, {20250810, 0});
    std::string doc1 = csv_document(one.records, "{}");
    std::string doc2 = csv_document(two.records, "{}");
    if (doc1 != doc2) return {false, "CSV differs between worker counts"};

    bool found = false;
    for (const auto& rec : one.records)
        if (rec.n == 2048 && rec.replicate == 1 && csv_row(rec) == csv_row(a)) found = true;
    if (!found) return {false, "replayed cell row not found byte-exact inside the study CSV"};
    return {true, "cell replay and 1-vs-2-worker study CSVs are byte-identical"};
}

} // namespace

int main() {
    struct Entry {
        int id;
        const char* name;
        std::function<CriterionResult()> run;
    };
    std::vector<Entry> entries = {
        {1, "small-chain oracle equivalence (n<=7, 200 graphs)", criterion1},
        {2, "TV definition equivalence (500 pairs, tol 1e-12)", criterion2},
        {3, "conductance exactness + heuristic/exact <= 2 (200 graphs)", criterion3},
        {4, "pairing-model isolation probability (10 cases, 1e5 samples)", criterion4},
        {5, "lazy cycle T'_mix doubling ratios in [3.3, 4.7]", criterion5},
        {6, "local-obstruction demo (l=50, stay > 1/2, bound <= T_mix)", criterion6},
        {7, "degree-2 path length frequencies (n=2e5, d=1.5, 30 reps)", criterion7},
        {8, "dense regime |T_mix - ln n/ln d| <= 3 (n=2^13, 10 reps)", criterion8},
        {9, "bound consistency on criteria 1 and 3 graphs", criterion9},
        {10, "byte-exact determinism incl. worker counts", criterion10},
    };
    int failures = 0;
    for (const auto& e : entries) {
        auto start = std::chrono::steady_clock::now();
        CriterionResult r;
        try {
            r = e.run();
        } catch (const std::exception& ex) {
            r = {false, std::string("exception: ") + ex.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%s criterion %2d: %s — %s (%.1fs)\n", r.pass ? "PASS" : "FAIL", e.id, e.name,
                    r.detail.c_str(), secs);
        std::fflush(stdout);
        if (!r.pass) ++failures;
    }
    if (failures == 0)
        std::printf("acceptance: all %zu criteria passed\n", entries.size());
    else
        std::printf("acceptance: %d criteria FAILED\n", failures);
    return failures;
}
