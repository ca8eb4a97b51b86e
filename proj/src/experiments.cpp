#include "mixlab/experiments.hpp"

#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <mutex>
#include <sstream>
#include <thread>

namespace mixlab {

namespace {

// Indexed parallel map with deterministic output slots.
template <typename Fn>
void parallel_for(std::size_t count, unsigned workers, Fn&& fn) {
    if (workers <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto work = [&] {
        while (true) {
            std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    unsigned c = std::min<unsigned>(workers, static_cast<unsigned>(count));
    for (unsigned w = 0; w < c; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

double log_binomial(std::size_t n, std::size_t k) {
    return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
           std::lgamma(static_cast<double>(n - k) + 1.0);
}

} // namespace

PredictorSet predictors(std::size_t n, double d) {
    if (n < 3) throw GraphError("predictors: n must be at least 3");
    if (!(d > 1.0)) throw GraphError("predictors: d must exceed 1 (supercritical)");
    const double ln_n = std::log(static_cast<double>(n));
    PredictorSet ps;
    ps.local_obstruction = (ln_n / d) * (ln_n / d);
    ps.diameter_term = ln_n / std::log(d);
    ps.threshold_p = std::sqrt(ln_n * std::log(ln_n)) / static_cast<double>(n);
    ps.path_lower = ln_n / (4.0 * d);
    ps.path_upper = 10.0 * ln_n / d;
    return ps;
}

TreeCountEstimate expected_tree_count(std::size_t n, std::size_t k, double p) {
    if (k < 1 || k > n) throw GraphError("expected_tree_count: need 1 <= k <= n");
    TreeCountEstimate e;
    const double kd = static_cast<double>(k);
    // k^(k-2) is 1 at k = 1 and k = 2
    e.log_expected = log_binomial(n, k) + (kd - 2.0) * std::log(kd) +
                     (kd - 1.0) * std::log(p);
    if (p == 0.0) e.log_expected = k == 1 ? log_binomial(n, 1) : -INFINITY;
    const double d = p * static_cast<double>(n);
    e.log_upper = std::log(static_cast<double>(n)) + kd * (1.0 + std::log(d));
    e.expected = std::exp(e.log_expected);
    e.upper = std::exp(e.log_upper);
    return e;
}

std::string format_double(double x) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, ptr);
}

std::string csv_header() {
    return "experiment_id,n,d,p,seed,replicate,giant_size,core_size,longest_path,t_mix,"
           "t_mix_cesaro,phi_global,bound_lower,bound_js,bound_dyadic,censored";
}

std::string csv_row(const ExperimentRecord& r) {
    std::ostringstream out;
    out << r.experiment_id << ',' << r.n << ',' << format_double(r.d) << ','
        << format_double(r.p) << ',' << r.seed << ',' << r.replicate << ',' << r.giant_size
        << ',' << r.core_size << ',' << r.longest_path << ',' << r.t_mix << ','
        << r.t_mix_cesaro << ',' << format_double(r.phi_global) << ','
        << format_double(r.bound_lower) << ',' << format_double(r.bound_js) << ','
        << format_double(r.bound_dyadic) << ',' << (r.censored ? 1 : 0);
    return out.str();
}

std::string csv_document(std::vector<ExperimentRecord> records, const std::string& config_json) {
    std::sort(records.begin(), records.end(),
              [](const ExperimentRecord& a, const ExperimentRecord& b) {
                  if (a.experiment_id != b.experiment_id) return a.experiment_id < b.experiment_id;
                  if (a.n != b.n) return a.n < b.n;
                  if (a.d != b.d) return a.d < b.d;
                  return a.replicate < b.replicate;
              });
    std::ostringstream out;
    if (!config_json.empty()) out << "# config: " << config_json << '\n';
    out << csv_header() << '\n';
    for (const ExperimentRecord& r : records) out << csv_row(r) << '\n';
    return out.str();
}

PathCensusStudy run_path_census(std::size_t n, double d, std::uint32_t replicates, RngSeed seed,
                                unsigned workers) {
    PathCensusStudy study;
    const double ln_n = std::log(static_cast<double>(n));
    study.lower_threshold = ln_n / (4.0 * d);
    study.upper_threshold = 10.0 * ln_n / d;
    study.outside_hypothesis = !(d < ln_n / 5.0);
    study.records.resize(replicates);
    study.longest.assign(replicates, 0);
    // vector<bool> packs bits, so threads stage flags in byte arrays
    std::vector<char> ge(replicates, 0), le(replicates, 0);

    const double p = d / static_cast<double>(n);
    parallel_for(replicates, workers, [&](std::size_t r) {
        RngSeed stream = seed.derived("path-census").derived("n", n).derived("rep", r);
        Graph g = sample_gnp(n, p, stream);
        auto comps = components(g);
        const auto& giant = comps.front();
        Degree2PathCensus census = degree2_paths(g, giant);

        ExperimentRecord rec;
        rec.experiment_id = "path-census";
        rec.n = n;
        rec.d = d;
        rec.p = p;
        rec.seed = seed.seed;
        rec.replicate = static_cast<std::uint32_t>(r);
        rec.giant_size = static_cast<std::int64_t>(giant.size());
        rec.core_size = static_cast<std::int64_t>(two_core(g, giant).count());
        rec.longest_path = static_cast<std::int64_t>(census.longest_interior);
        study.records[r] = std::move(rec);
        study.longest[r] = static_cast<std::int64_t>(census.longest_interior);
        ge[r] = static_cast<double>(census.longest_interior) >= study.lower_threshold ? 1 : 0;
        le[r] = static_cast<double>(census.longest_interior) <= study.upper_threshold ? 1 : 0;
    });
    study.ge_lower.assign(replicates, false);
    study.le_upper.assign(replicates, false);
    std::size_t ge_count = 0, le_count = 0;
    for (std::uint32_t r = 0; r < replicates; ++r) {
        study.ge_lower[r] = ge[r] != 0;
        study.le_upper[r] = le[r] != 0;
        ge_count += ge[r] ? 1 : 0;
        le_count += le[r] ? 1 : 0;
    }
    study.fraction_ge_lower = static_cast<double>(ge_count) / replicates;
    study.fraction_le_upper = static_cast<double>(le_count) / replicates;
    return study;
}

ExpansionStudy run_expansion_check(std::size_t n, double d, std::uint32_t replicates,
                                   std::uint32_t samples_per_graph, RngSeed seed,
                                   unsigned workers) {
    ExpansionStudy study;
    study.records.resize(replicates);
    const double p = d / static_cast<double>(n);
    const double min_size_req = std::log(static_cast<double>(n)) / d; // c = 1

    std::vector<double> min_ed(replicates, -1.0), min_e(replicates, -1.0),
        min_core(replicates, -1.0), max_ds(replicates, -1.0);
    std::vector<std::uint64_t> evaluated(replicates, 0), skipped(replicates, 0),
        violations(replicates, 0);

    parallel_for(replicates, workers, [&](std::size_t r) {
        RngSeed stream = seed.derived("expansion").derived("n", n).derived("rep", r);
        Graph g = sample_gnp(n, p, stream);
        auto comps = components(g);
        const auto& giant = comps.front();
        VertexSet core = two_core(g, giant);
        VertexSet in_giant(g.vertex_count(), giant);
        std::uint64_t giant_degree = 0;
        for (Vertex v : giant) giant_degree += g.degree(v);

        Rng rng(stream.derived("samples"));
        for (std::uint32_t sidx = 0; sidx < samples_per_graph; ++sidx) {
            // alternate BFS balls and random connected growth
            Vertex root = giant[rng.next_below(giant.size())];
            std::vector<Vertex> set;
            if (sidx % 2 == 0) {
                std::size_t radius = 1 + rng.next_below(6);
                std::vector<std::pair<Vertex, std::size_t>> queue{{root, 0}};
                VertexSet seen(g.vertex_count());
                seen.insert(root);
                for (std::size_t head = 0; head < queue.size(); ++head) {
                    auto [u, dist] = queue[head];
                    set.push_back(u);
                    if (dist == radius) continue;
                    for (const Neighbor& nb : g.neighbors(u))
                        if (nb.to != u && !seen.contains(nb.to)) {
                            seen.insert(nb.to);
                            queue.push_back({nb.to, dist + 1});
                        }
                }
            } else {
                std::size_t target = 2 + rng.next_below(4 * static_cast<std::uint64_t>(
                                                                std::max(1.0, min_size_req)) +
                                                        8);
                VertexSet seen(g.vertex_count());
                seen.insert(root);
                std::vector<Vertex> frontier{root};
                set.push_back(root);
                while (set.size() < target && !frontier.empty()) {
                    std::size_t pick = rng.next_below(frontier.size());
                    Vertex u = frontier[pick];
                    std::vector<Vertex> fresh;
                    for (const Neighbor& nb : g.neighbors(u))
                        if (nb.to != u && !seen.contains(nb.to)) fresh.push_back(nb.to);
                    if (fresh.empty()) {
                        frontier[pick] = frontier.back();
                        frontier.pop_back();
                        continue;
                    }
                    Vertex v = fresh[rng.next_below(fresh.size())];
                    seen.insert(v);
                    set.push_back(v);
                    frontier.push_back(v);
                }
            }
            VertexSet sset(g.vertex_count(), set);
            VertexSubset st = subset_stats(g, sset);
            if (static_cast<double>(set.size()) < min_size_req ||
                2 * st.total_degree > giant_degree) {
                ++skipped[r];
                continue;
            }
            ++evaluated[r];
            // small connected sets should never carry more than 2|S| edges
            if (set.size() <= 100 && st.e_in > 2 * set.size()) ++violations[r];
            double size = static_cast<double>(set.size());
            double ed = static_cast<double>(st.e_out) / (d * size);
            double e1 = static_cast<double>(st.e_out) / size;
            double ds = static_cast<double>(st.total_degree) / size;
            if (min_ed[r] < 0 || ed < min_ed[r]) min_ed[r] = ed;
            if (min_e[r] < 0 || e1 < min_e[r]) min_e[r] = e1;
            if (ds > max_ds[r]) max_ds[r] = ds;
            // the core-coverage statistic needs order-ln(n) sets
            if (size >= std::log(static_cast<double>(n))) {
                std::size_t in_core = 0;
                for (Vertex v : set)
                    if (core.contains(v)) ++in_core;
                double cf = static_cast<double>(in_core) / size;
                if (min_core[r] < 0 || cf < min_core[r]) min_core[r] = cf;
            }
        }

        ExperimentRecord rec;
        rec.experiment_id = "expansion";
        rec.n = n;
        rec.d = d;
        rec.p = p;
        rec.seed = seed.seed;
        rec.replicate = static_cast<std::uint32_t>(r);
        rec.giant_size = static_cast<std::int64_t>(giant.size());
        rec.core_size = static_cast<std::int64_t>(core.count());
        rec.violations = violations[r];
        study.records[r] = std::move(rec);
    });

    for (std::uint32_t r = 0; r < replicates; ++r) {
        study.samples_evaluated += evaluated[r];
        study.samples_skipped += skipped[r];
        auto fold_min = [](double& acc, double v) {
            if (v >= 0 && (acc < 0 || v < acc)) acc = v;
        };
        fold_min(study.min_eout_over_d_size, min_ed[r]);
        fold_min(study.min_eout_over_size, min_e[r]);
        fold_min(study.min_core_fraction, min_core[r]);
        study.max_degree_over_size = std::max(study.max_degree_over_size, max_ds[r]);
    }
    return study;
}

std::string regime_name(Regime r) {
    switch (r) {
        case Regime::ConstantD: return "constant-d";
        case Regime::Threshold: return "threshold";
        case Regime::Dense: return "dense";
    }
    return "?";
}

double regime_degree(Regime r, std::size_t n, double constant_d) {
    const double ln_n = std::log(static_cast<double>(n));
    switch (r) {
        case Regime::ConstantD: return constant_d;
        case Regime::Threshold: return std::sqrt(ln_n * std::log(ln_n));
        case Regime::Dense: return 2.0 * ln_n;
    }
    return constant_d;
}

ExperimentRecord run_scaling_cell(const ScalingOptions& opt, std::size_t n,
                                  std::uint32_t replicate, RngSeed seed) {
    const std::string exp_id = "scaling-" + regime_name(opt.regime);
    const double d = regime_degree(opt.regime, n, opt.constant_d);
    const double p = d / static_cast<double>(n);

    ExperimentRecord rec;
    rec.experiment_id = exp_id;
    rec.n = n;
    rec.d = d;
    rec.p = p;
    rec.seed = seed.seed;
    rec.replicate = replicate;

    RngSeed stream = seed.derived(exp_id).derived("n", n).derived("rep", replicate);
    Graph g = sample_gnp(n, p, stream);
    DecompositionReport report = decompose(g);
    if (report.components.empty()) return rec;
    const auto& giant = report.giant();
    rec.giant_size = static_cast<std::int64_t>(giant.size());
    rec.core_size = static_cast<std::int64_t>(report.core.count());
    rec.longest_path = static_cast<std::int64_t>(report.path_census.longest_interior);
    if (giant.size() < 2) return rec;

    WalkConfig wcfg;
    wcfg.laziness = opt.laziness;
    wcfg.start_policy = StartPolicy::Designated;
    wcfg.starts = heuristic_worst_starts(g, giant, report, opt.start_candidates, stream);
    wcfg.seed = stream;
    wcfg.max_steps = opt.max_steps;
    wcfg.workers = 1; // cell-level parallelism happens across replicates

    try {
        rec.t_mix_cesaro = static_cast<std::int64_t>(cesaro_mixing_time(g, giant, wcfg).t);
    } catch (const BudgetExceeded&) {
        rec.censored = true;
    }
    try {
        bool plain_ok = opt.laziness > 0.0 || !is_bipartite(g, giant).bipartite;
        if (plain_ok) rec.t_mix = static_cast<std::int64_t>(mixing_time(g, giant, wcfg).t);
    } catch (const BudgetExceeded&) {
        rec.censored = true;
    }

    try {
        ConductanceProfile profile =
            conductance_profile(g, giant, report, opt.exact_profile_budget, stream);
        rec.phi_global = profile.phi_global();
        for (const ProfileScale& s : profile.scales) rec.phi_scales.push_back(s.phi);
        rec.bound_js = bound_jerrum_sinclair(rec.phi_global, profile.pi_min, opt.C);
        rec.bound_dyadic = bound_dyadic_sum(profile, opt.C).sum;
        std::vector<std::vector<Vertex>> cands;
        for (const ProfileScale& s : profile.scales)
            if (!s.witness.empty()) cands.push_back(s.witness);
        if (!cands.empty()) rec.bound_lower = bound_lower(g, giant, cands);
    } catch (const BudgetExceeded&) {
        rec.censored = true;
    }
    return rec;
}

ScalingStudy run_scaling_study(const ScalingOptions& opt, RngSeed seed) {
    ScalingStudy study;
    const std::size_t cells = opt.n_grid.size();
    const std::size_t total = cells * opt.replicates;
    study.records.resize(total);
    parallel_for(total, opt.workers, [&](std::size_t i) {
        std::size_t cell = i / opt.replicates;
        auto replicate = static_cast<std::uint32_t>(i % opt.replicates);
        study.records[i] = run_scaling_cell(opt, opt.n_grid[cell], replicate, seed);
    });

    study.fit.predictor =
        opt.regime == Regime::Dense ? "ln n / ln d" : "(ln n / d)^2";
    bool first = true;
    for (std::size_t cell = 0; cell < cells; ++cell) {
        double acc = 0.0;
        double mean_t = 0.0;
        std::size_t counted = 0;
        PredictorSet ps{};
        for (std::uint32_t r = 0; r < opt.replicates; ++r) {
            const ExperimentRecord& rec = study.records[cell * opt.replicates + r];
            if (rec.t_mix_cesaro < 0) continue;
            ps = predictors(rec.n, rec.d);
            double pred = opt.regime == Regime::Dense ? ps.diameter_term : ps.local_obstruction;
            acc += static_cast<double>(rec.t_mix_cesaro) / pred;
            mean_t += static_cast<double>(rec.t_mix_cesaro);
            ++counted;
        }
        if (counted == 0) continue;
        ScalingCellSummary summary;
        summary.n = opt.n_grid[cell];
        summary.d = regime_degree(opt.regime, opt.n_grid[cell], opt.constant_d);
        summary.mean_t_cesaro = mean_t / static_cast<double>(counted);
        summary.local_obstruction = ps.local_obstruction;
        summary.diameter_term = ps.diameter_term;
        study.cells.push_back(summary);
        double ratio = acc / static_cast<double>(counted);
        if (first) {
            study.fit.min_ratio = study.fit.max_ratio = ratio;
            first = false;
        } else {
            study.fit.min_ratio = std::min(study.fit.min_ratio, ratio);
            study.fit.max_ratio = std::max(study.fit.max_ratio, ratio);
        }
    }
    study.fit.spread =
        study.fit.min_ratio > 0 ? study.fit.max_ratio / study.fit.min_ratio : 0.0;
    return study;
}

namespace {

// Random 3-regular-ish blob via the configuration model; resampled until
// connected and non-bipartite.
Graph sample_blob(std::size_t m, RngSeed stream) {
    if (m % 2 == 1) ++m;
    if (m < 4) m = 4;
    DegreeSequence ds;
    ds.degrees.assign(m, 3);
    for (std::uint64_t attempt = 0; attempt < 100; ++attempt) {
        Graph g = sample_configuration(ds, stream.derived("blob", attempt));
        auto comps = components(g);
        if (comps.size() != 1) continue;
        if (is_bipartite(g, comps.front()).bipartite) continue;
        return g;
    }
    throw GraphError("run_obstruction_demo: could not sample a usable expander blob");
}

} // namespace

ObstructionReport run_obstruction_demo(std::size_t l, std::size_t expander_n, std::size_t walks,
                                       RngSeed seed, unsigned workers) {
    if (l < 2) throw GraphError("run_obstruction_demo: l must be at least 2");
    RngSeed stream = seed.derived("obstruction");
    Graph blob_a = sample_blob(expander_n, stream.derived("a"));
    Graph blob_b = sample_blob(expander_n, stream.derived("b"));

    const std::size_t na = blob_a.vertex_count();
    const std::size_t nb = blob_b.vertex_count();
    const std::size_t interior = 2 * l + 1;
    const std::size_t n = na + nb + interior;

    std::vector<Edge> edges;
    for (const Edge& e : blob_a.edge_list()) edges.push_back(e);
    for (const Edge& e : blob_b.edge_list())
        edges.push_back({static_cast<Vertex>(e.u + na), static_cast<Vertex>(e.v + na)});
    // path: blob_a vertex 0 -- q_0 -- ... -- q_{2l} -- blob_b vertex 0
    Vertex a_end = 0;
    Vertex b_end = static_cast<Vertex>(na);
    Vertex q0 = static_cast<Vertex>(na + nb);
    edges.push_back({a_end, q0});
    for (std::size_t i = 0; i + 1 < interior; ++i)
        edges.push_back({static_cast<Vertex>(q0 + i), static_cast<Vertex>(q0 + i + 1)});
    edges.push_back({static_cast<Vertex>(q0 + interior - 1), b_end});
    Graph g = build_graph(n, edges, /*allow_multi=*/true);

    DecompositionReport report = decompose(g);
    const Degree2Path& path = report.path_census.paths.front();

    ObstructionReport out;
    out.l = l;
    out.path_interior = path.interior.size();
    out.t_checkpoint = static_cast<std::uint64_t>(l) * l / 10;
    out.n = n;
    out.e_star = g.edge_count();
    out.escape_stay_probability =
        trajectory_escape_probability(g, path, out.t_checkpoint, walks, stream);

    const auto& giant = report.giant();
    WalkConfig wcfg;
    wcfg.laziness = 0.0;
    wcfg.start_policy = StartPolicy::Designated;
    wcfg.starts = heuristic_worst_starts(g, giant, report, 8, stream);
    wcfg.seed = stream;
    wcfg.max_steps = 50000000ULL;
    wcfg.workers = workers;
    out.t_mix = static_cast<std::int64_t>(mixing_time(g, giant, wcfg).t);
    out.t_mix_cesaro = static_cast<std::int64_t>(cesaro_mixing_time(g, giant, wcfg).t);

    // midpoint-cut halves as lower-bound candidates
    std::size_t c = (path.interior.size() - 1) / 2;
    Vertex cut_a = path.interior[c];
    Vertex cut_b = c + 1 < path.interior.size() ? path.interior[c + 1] : path.endpoint_b;
    auto side_from = [&](Vertex start) {
        VertexSet seen(g.vertex_count());
        std::vector<Vertex> side{start};
        seen.insert(start);
        for (std::size_t head = 0; head < side.size(); ++head) {
            Vertex u = side[head];
            for (const Neighbor& nb : g.neighbors(u)) {
                if ((u == cut_a && nb.to == cut_b) || (u == cut_b && nb.to == cut_a)) continue;
                if (!seen.contains(nb.to)) {
                    seen.insert(nb.to);
                    side.push_back(nb.to);
                }
            }
        }
        std::sort(side.begin(), side.end());
        return side;
    };
    std::vector<std::vector<Vertex>> halves;
    std::uint64_t giant_degree = 0;
    for (Vertex v : giant) giant_degree += g.degree(v);
    for (Vertex s : {cut_a, cut_b}) {
        auto side = side_from(s);
        VertexSubset st = subset_stats(g, VertexSet(g.vertex_count(), side));
        if (2 * st.total_degree <= giant_degree) halves.push_back(std::move(side));
    }
    out.bound_lower_half = bound_lower(g, giant, halves);
    return out;
}

std::string obstruction_report_json(const ObstructionReport& r, const std::string& config_json) {
    nlohmann::json j;
    if (!config_json.empty()) j["config"] = nlohmann::json::parse(config_json);
    j["l"] = r.l;
    j["path_interior"] = r.path_interior;
    j["t_checkpoint"] = r.t_checkpoint;
    j["escape_stay_probability"] = r.escape_stay_probability;
    j["t_mix"] = r.t_mix;
    j["t_mix_cesaro"] = r.t_mix_cesaro;
    j["bound_lower_half"] = r.bound_lower_half;
    j["n"] = r.n;
    j["e_star"] = r.e_star;
    return j.dump(2);
}

std::string plot_series(const std::vector<std::pair<double, double>>& points) {
    std::ostringstream out;
    for (const auto& [x, y] : points) out << format_double(x) << ' ' << format_double(y) << '\n';
    return out.str();
}

std::string svg_line_chart(
    const std::string& title,
    const std::vector<std::pair<std::string, std::vector<std::pair<double, double>>>>& series) {
    const double W = 640, H = 420, ml = 60, mr = 20, mt = 40, mb = 40;
    double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
    for (const auto& [name, pts] : series)
        for (const auto& [x, y] : pts) {
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    if (!(xmax > xmin)) xmax = xmin + 1;
    if (!(ymax > ymin)) ymax = ymin + 1;
    auto sx = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (W - ml - mr); };
    auto sy = [&](double y) { return H - mb - (y - ymin) / (ymax - ymin) * (H - mt - mb); };
    const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\" viewBox=\"0 0 " << W << ' ' << H << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\""
        << " font-size=\"15\">" << title << "</text>\n";
    out << "<line x1=\"" << ml << "\" y1=\"" << H - mb << "\" x2=\"" << W - mr << "\" y2=\""
        << H - mb << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << H - mb
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << ml << "\" y=\"" << H - mb + 16 << "\" font-family=\"sans-serif\""
        << " font-size=\"11\">" << format_double(xmin) << "</text>\n";
    out << "<text x=\"" << W - mr << "\" y=\"" << H - mb + 16 << "\" text-anchor=\"end\""
        << " font-family=\"sans-serif\" font-size=\"11\">" << format_double(xmax) << "</text>\n";
    out << "<text x=\"" << ml - 6 << "\" y=\"" << H - mb << "\" text-anchor=\"end\""
        << " font-family=\"sans-serif\" font-size=\"11\">" << format_double(ymin) << "</text>\n";
    out << "<text x=\"" << ml - 6 << "\" y=\"" << mt + 4 << "\" text-anchor=\"end\""
        << " font-family=\"sans-serif\" font-size=\"11\">" << format_double(ymax) << "</text>\n";
    std::size_t ci = 0;
    for (const auto& [name, pts] : series) {
        const char* color = colors[ci % 5];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (const auto& [x, y] : pts) out << sx(x) << ',' << sy(y) << ' ';
        out << "\"/>\n";
        out << "<text x=\"" << W - mr - 8 << "\" y=\"" << mt + 16 * (ci + 1)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" fill=\""
            << color << "\">" << name << "</text>\n";
        ++ci;
    }
    out << "</svg>\n";
    return out.str();
}

} // namespace mixlab
