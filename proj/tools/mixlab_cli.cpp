// mixlab command line: gen / decompose / walk / conductance / experiment / demo.
// Every artifact embeds (or side-cars) the resolved configuration and seed so
// any published number can be replayed.
#include "CLI11.hpp"
#include "json.hpp"

#include "mixlab/conductance.hpp"
#include "mixlab/decompose.hpp"
#include "mixlab/experiments.hpp"
#include "mixlab/generators.hpp"
#include "mixlab/graph.hpp"
#include "mixlab/walk.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

using namespace mixlab;
namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitCensoredOnly = 3;

void write_file(const std::string& path, const std::string& content) {
    if (auto dir = fs::path(path).parent_path(); !dir.empty()) fs::create_directories(dir);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
}

std::uint64_t resolve_seed(std::optional<std::uint64_t> given) {
    if (given) return *given;
    std::random_device rd;
    std::uint64_t s = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    std::cout << "seed: " << s << " (generated; pass --seed to replay)\n";
    return s;
}

double resolve_p(std::optional<double> p, std::optional<double> d, std::size_t n) {
    if (p && d) throw CLI::ValidationError("--p and --d are mutually exclusive");
    if (d) return *d / static_cast<double>(n);
    if (p) return *p;
    throw CLI::ValidationError("one of --p or --d is required");
}

nlohmann::json base_config(const std::string& subcommand, std::uint64_t seed) {
    return {{"tool", "mixlab"}, {"subcommand", subcommand}, {"seed", seed}};
}

int cmd_gen(std::size_t n, std::optional<double> p_opt, std::optional<double> d_opt,
            const std::string& degrees_file, std::optional<std::uint64_t> seed_opt,
            const std::string& out) {
    std::uint64_t seed = resolve_seed(seed_opt);
    nlohmann::json cfg = base_config("gen", seed);
    Graph g;
    if (!degrees_file.empty()) {
        DegreeSequence ds = load_degree_sequence_file(degrees_file);
        g = sample_configuration(ds, {seed, 0});
        cfg["degrees_file"] = degrees_file;
        cfg["model"] = "configuration";
    } else {
        double p = resolve_p(p_opt, d_opt, n);
        g = sample_gnp(n, p, {seed, 0});
        cfg["n"] = n;
        cfg["p"] = p;
        cfg["model"] = "gnp";
    }
    write_file(out, store_edge_list(g));
    cfg["vertices"] = g.vertex_count();
    cfg["edges"] = g.edge_count();
    write_file(out + ".meta.json", cfg.dump(2) + "\n");
    std::cout << "wrote " << out << " (" << g.vertex_count() << " vertices, " << g.edge_count()
              << " edges)\n";
    return kExitOk;
}

int cmd_decompose(const std::string& input, bool multigraph, const std::string& out) {
    Graph g = load_edge_list_file(input, multigraph);
    DecompositionReport rep = decompose(g);
    nlohmann::json j = nlohmann::json::parse(decomposition_report_json(rep));
    j["config"] = {{"tool", "mixlab"},
                   {"subcommand", "decompose"},
                   {"input", input},
                   {"multigraph", multigraph}};
    write_file(out, j.dump(2) + "\n");
    std::cout << "wrote " << out << "\n";
    return kExitOk;
}

int cmd_walk(const std::string& input, bool multigraph, double laziness, double epsilon,
             const std::string& starts, std::size_t sample_count,
             std::optional<std::uint64_t> seed_opt, std::uint64_t budget, unsigned workers,
             const std::string& out) {
    std::uint64_t seed = resolve_seed(seed_opt);
    Graph g = load_edge_list_file(input, multigraph);
    auto comps = components(g);
    if (comps.empty()) throw std::runtime_error("walk: the input graph has no vertices");
    const auto& giant = comps.front();

    WalkConfig cfg;
    cfg.laziness = laziness;
    cfg.epsilon = epsilon;
    cfg.seed = {seed, 0};
    cfg.max_steps = budget;
    cfg.workers = workers;
    if (starts == "all") {
        cfg.start_policy = StartPolicy::AllVertices;
    } else if (starts == "sampled") {
        cfg.start_policy = StartPolicy::Sampled;
        cfg.sample_count = sample_count;
    } else {
        cfg.start_policy = StartPolicy::Designated;
        for (const auto& tok : CLI::detail::split(starts, ','))
            cfg.starts.push_back(static_cast<Vertex>(std::stoull(tok)));
    }

    nlohmann::json config = base_config("walk", seed);
    config["input"] = input;
    config["laziness"] = laziness;
    config["epsilon"] = epsilon;
    config["starts"] = starts;
    config["budget"] = budget;

    bool censored = false;
    MixingResult cesaro{0, 0, {}};
    bool cesaro_ok = false;
    try {
        cesaro = cesaro_mixing_time(g, giant, cfg);
        cesaro_ok = true;
    } catch (const BudgetExceeded&) {
        censored = true;
    }
    MixingResult mix{0, 0, {}};
    bool mix_ok = false;
    try {
        if (cfg.laziness > 0.0 || !is_bipartite(g, giant).bipartite) {
            mix = mixing_time(g, giant, cfg);
            mix_ok = true;
        }
    } catch (const BudgetExceeded&) {
        censored = true;
    }

    nlohmann::json j = nlohmann::json::parse(walk_report_json(mix, cesaro, cfg, config.dump()));
    j["t_mix_measured"] = mix_ok;
    j["censored"] = censored;
    write_file(out, j.dump(2) + "\n");
    std::cout << "wrote " << out << "\n";
    if (censored && !mix_ok && !cesaro_ok) return kExitCensoredOnly;
    return kExitOk;
}

int cmd_conductance(const std::string& input, bool multigraph, std::size_t budget,
                    std::optional<std::uint64_t> seed_opt, double C, const std::string& out) {
    std::uint64_t seed = resolve_seed(seed_opt);
    Graph g = load_edge_list_file(input, multigraph);
    DecompositionReport rep = decompose(g);
    if (rep.components.empty())
        throw std::runtime_error("conductance: the input graph has no vertices");
    const auto& giant = rep.giant();

    nlohmann::json config = base_config("conductance", seed);
    config["input"] = input;
    config["budget"] = budget;
    config["C"] = C;

    ConductanceProfile profile = conductance_profile(g, giant, rep, budget, {seed, 0});
    MinConductance best;
    try {
        best = exact_min_conductance(g, giant, budget);
    } catch (const BudgetExceeded&) {
        best = heuristic_min_conductance(g, giant, rep, {seed, 0});
    }
    DyadicBound db = bound_dyadic_sum(profile, C);
    double js = bound_jerrum_sinclair(profile.phi_global(), profile.pi_min, C);
    write_file(out, conductance_report_json(profile, best, js, db, C, config.dump()) + "\n");
    std::cout << "wrote " << out << "\n";
    return kExitOk;
}

int cmd_experiment(const std::string& kind, const std::string& regime, double d,
                   std::vector<std::size_t> n_grid, std::uint32_t replicates,
                   std::uint32_t samples, std::optional<std::uint64_t> seed_opt, unsigned workers,
                   const std::string& out_dir, bool svg) {
    std::uint64_t seed = resolve_seed(seed_opt);
    RngSeed root{seed, 0};
    nlohmann::json config = base_config("experiment", seed);
    config["kind"] = kind;

    std::vector<ExperimentRecord> records;
    std::vector<std::pair<double, double>> curve_measured, curve_predicted;
    bool any_uncensored = false;

    if (kind == "path-census") {
        if (n_grid.empty()) throw CLI::ValidationError("--n is required");
        config["d"] = d;
        config["replicates"] = replicates;
        for (std::size_t n : n_grid) {
            PathCensusStudy study = run_path_census(n, d, replicates, root, workers);
            records.insert(records.end(), study.records.begin(), study.records.end());
            double mean = 0;
            for (auto v : study.longest) mean += static_cast<double>(v);
            if (!study.longest.empty()) mean /= static_cast<double>(study.longest.size());
            curve_measured.push_back({static_cast<double>(n), mean});
            curve_predicted.push_back(
                {static_cast<double>(n), predictors(n, d).path_upper});
            nlohmann::json summary;
            summary["config"] = config;
            summary["n"] = n;
            summary["fraction_ge_lower"] = study.fraction_ge_lower;
            summary["fraction_le_upper"] = study.fraction_le_upper;
            summary["lower_threshold"] = study.lower_threshold;
            summary["upper_threshold"] = study.upper_threshold;
            summary["outside_hypothesis"] = study.outside_hypothesis;
            summary["per_replicate_longest"] = study.longest;
            write_file(out_dir + "/path_census_" + std::to_string(n) + ".json",
                       summary.dump(2) + "\n");
            any_uncensored = true;
        }
    } else if (kind == "expansion") {
        if (n_grid.empty()) throw CLI::ValidationError("--n is required");
        config["d"] = d;
        config["replicates"] = replicates;
        config["samples"] = samples;
        for (std::size_t n : n_grid) {
            ExpansionStudy study = run_expansion_check(n, d, replicates, samples, root, workers);
            records.insert(records.end(), study.records.begin(), study.records.end());
            nlohmann::json summary;
            summary["config"] = config;
            summary["n"] = n;
            summary["samples_evaluated"] = study.samples_evaluated;
            summary["samples_skipped"] = study.samples_skipped;
            summary["fitted"] = {{"epsilon_hat_d", study.min_eout_over_d_size},
                                 {"epsilon_hat", study.min_eout_over_size},
                                 {"core_fraction_min", study.min_core_fraction},
                                 {"L_hat", study.max_degree_over_size}};
            write_file(out_dir + "/expansion_" + std::to_string(n) + ".json",
                       summary.dump(2) + "\n");
            any_uncensored = true;
        }
    } else if (kind == "scaling") {
        if (n_grid.empty()) throw CLI::ValidationError("--n is required");
        ScalingOptions opt;
        if (regime == "constant-d")
            opt.regime = Regime::ConstantD;
        else if (regime == "threshold")
            opt.regime = Regime::Threshold;
        else if (regime == "dense")
            opt.regime = Regime::Dense;
        else
            throw CLI::ValidationError("--regime must be constant-d, threshold or dense");
        opt.constant_d = d;
        opt.n_grid = n_grid;
        opt.replicates = replicates;
        opt.workers = workers;
        config["regime"] = regime;
        config["d"] = d;
        config["replicates"] = replicates;
        ScalingStudy study = run_scaling_study(opt, root);
        records = study.records;
        for (const auto& rec : records)
            if (!rec.censored && rec.t_mix_cesaro >= 0) any_uncensored = true;
        nlohmann::json fit;
        fit["config"] = config;
        fit["predictor"] = study.fit.predictor;
        fit["min_ratio"] = study.fit.min_ratio;
        fit["max_ratio"] = study.fit.max_ratio;
        fit["spread"] = study.fit.spread;
        auto cells = nlohmann::json::array();
        for (const auto& c : study.cells)
            cells.push_back({{"n", c.n},
                             {"d", c.d},
                             {"mean_t_cesaro", c.mean_t_cesaro},
                             {"local_obstruction", c.local_obstruction},
                             {"diameter_term", c.diameter_term},
                             {"ratio_local", c.mean_t_cesaro / c.local_obstruction},
                             {"ratio_diameter", c.mean_t_cesaro / c.diameter_term}});
        fit["cells"] = cells;
        write_file(out_dir + "/scaling_fit.json", fit.dump(2) + "\n");

        for (std::size_t n : n_grid) {
            double acc = 0;
            int cnt = 0;
            for (const auto& rec : records)
                if (rec.n == n && rec.t_mix_cesaro >= 0) {
                    acc += static_cast<double>(rec.t_mix_cesaro);
                    ++cnt;
                }
            if (cnt == 0) continue;
            double dd = regime_degree(opt.regime, n, d);
            PredictorSet ps = predictors(n, dd);
            curve_measured.push_back({static_cast<double>(n), acc / cnt});
            curve_predicted.push_back({static_cast<double>(n),
                                       opt.regime == Regime::Dense ? ps.diameter_term
                                                                   : ps.local_obstruction});
        }
    } else {
        throw CLI::ValidationError("unknown experiment kind: " + kind);
    }

    write_file(out_dir + "/records.csv", csv_document(records, config.dump()));
    if (!curve_measured.empty()) {
        write_file(out_dir + "/measured.xy", plot_series(curve_measured));
        if (!curve_predicted.empty())
            write_file(out_dir + "/predictor.xy", plot_series(curve_predicted));
        if (svg)
            write_file(out_dir + "/curves.svg",
                       svg_line_chart(kind, {{"measured", curve_measured},
                                             {"predictor", curve_predicted}}));
    }
    std::cout << "wrote " << out_dir << "/records.csv (" << records.size() << " records)\n";
    if (!records.empty() && !any_uncensored) return kExitCensoredOnly;
    return kExitOk;
}

int cmd_demo(std::size_t l, std::size_t expander_n, std::size_t walks,
             std::optional<std::uint64_t> seed_opt, unsigned workers, const std::string& out) {
    std::uint64_t seed = resolve_seed(seed_opt);
    nlohmann::json config = base_config("demo", seed);
    config["l"] = l;
    config["expander_n"] = expander_n;
    config["walks"] = walks;
    ObstructionReport rep = run_obstruction_demo(l, expander_n, walks, {seed, 0}, workers);
    write_file(out, obstruction_report_json(rep, config.dump()) + "\n");
    std::cout << "wrote " << out << "\n";
    std::cout << "stay probability at t=" << rep.t_checkpoint << ": "
              << rep.escape_stay_probability << ", measured T_mix " << rep.t_mix
              << ", path-half lower bound " << rep.bound_lower_half << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"random-walk mixing laboratory for sparse random graphs"};
    app.require_subcommand(1);

    auto* gen = app.add_subcommand("gen", "sample a graph and write an edge list");
    std::size_t gen_n = 0;
    std::optional<double> gen_p, gen_d;
    std::string gen_degrees;
    std::optional<std::uint64_t> gen_seed;
    std::string gen_out = "graph.txt";
    gen->add_option("--n", gen_n, "vertex count (G(n,p) model)");
    gen->add_option("--p", gen_p, "edge probability");
    gen->add_option("--d", gen_d, "average degree, converted via p = d/n");
    gen->add_option("--degrees", gen_degrees,
                    "degree sequence file (configuration model; output is a multigraph)");
    gen->add_option("--seed", gen_seed, "root seed (generated and printed if omitted)");
    gen->add_option("--out", gen_out, "output edge-list path");

    auto* dec = app.add_subcommand("decompose", "structural decomposition report (JSON)");
    std::string dec_in, dec_out = "decomposition.json";
    bool dec_multi = false;
    dec->add_option("--input", dec_in, "edge-list file")->required();
    dec->add_flag("--multigraph", dec_multi, "parse the input as a multigraph");
    dec->add_option("--out", dec_out, "output JSON path");

    auto* wlk = app.add_subcommand("walk", "mixing times on the largest component (JSON)");
    std::string wlk_in, wlk_starts = "all", wlk_out = "walk.json";
    bool wlk_multi = false;
    double wlk_laziness = 0.0, wlk_epsilon = 0.36787944117144233;
    std::size_t wlk_samples = 16;
    std::optional<std::uint64_t> wlk_seed;
    std::uint64_t wlk_budget = 1000000;
    unsigned wlk_workers = 1;
    wlk->add_option("--input", wlk_in, "edge-list file")->required();
    wlk->add_flag("--multigraph", wlk_multi, "parse the input as a multigraph");
    wlk->add_option("--laziness", wlk_laziness, "stay-put probability in [0,1)");
    wlk->add_option("--epsilon", wlk_epsilon, "mixing threshold (default 1/e)");
    wlk->add_option("--starts", wlk_starts, "all | sampled | comma-separated vertex ids");
    wlk->add_option("--samples", wlk_samples, "start count for --starts sampled");
    wlk->add_option("--seed", wlk_seed, "root seed");
    wlk->add_option("--budget", wlk_budget, "sparse passes per start before censoring");
    wlk->add_option("--workers", wlk_workers, "concurrent start evolutions");
    wlk->add_option("--out", wlk_out, "output JSON path");

    auto* cond = app.add_subcommand("conductance", "dyadic conductance profile and bounds (JSON)");
    std::string cond_in, cond_out = "conductance.json";
    bool cond_multi = false;
    std::size_t cond_budget = 18;
    std::optional<std::uint64_t> cond_seed;
    double cond_C = 1.0;
    cond->add_option("--input", cond_in, "edge-list file")->required();
    cond->add_flag("--multigraph", cond_multi, "parse the input as a multigraph");
    cond->add_option("--budget", cond_budget, "max component size for exact enumeration");
    cond->add_option("--seed", cond_seed, "root seed (heuristic sweeps)");
    cond->add_option("--C", cond_C, "unquantified bound constant, reported symbolically");
    cond->add_option("--out", cond_out, "output JSON path");

    auto* exp = app.add_subcommand("experiment", "reproducible experiment batches (CSV + plots)");
    std::string exp_kind, exp_regime = "constant-d", exp_out = "experiment-out";
    double exp_d = 3.0;
    std::vector<std::size_t> exp_n;
    std::uint32_t exp_replicates = 5, exp_samples = 1000;
    std::optional<std::uint64_t> exp_seed;
    unsigned exp_workers = 1;
    bool exp_svg = false;
    exp->add_option("kind", exp_kind, "path-census | expansion | scaling")->required();
    exp->add_option("--regime", exp_regime, "scaling regime: constant-d | threshold | dense");
    exp->add_option("--d", exp_d, "average degree (constant-d and census/expansion)");
    exp->add_option("--n", exp_n, "n grid (comma separated)")->delimiter(',');
    exp->add_option("--replicates", exp_replicates, "replicates per cell");
    exp->add_option("--samples", exp_samples, "sampled sets per graph (expansion)");
    exp->add_option("--seed", exp_seed, "root seed");
    exp->add_option("--workers", exp_workers, "worker threads (never changes results)");
    exp->add_option("--out", exp_out, "output directory");
    exp->add_flag("--svg", exp_svg, "also write an SVG line chart");

    auto* demo = app.add_subcommand("demo", "local-obstruction demo: path between two expanders");
    std::size_t demo_l = 50, demo_expander = 100, demo_walks = 10000;
    std::optional<std::uint64_t> demo_seed;
    unsigned demo_workers = 1;
    std::string demo_out = "demo.json";
    demo->add_option("--l", demo_l, "half-length of the glued path");
    demo->add_option("--expander-n", demo_expander, "size of each 3-regular blob");
    demo->add_option("--walks", demo_walks, "Monte-Carlo trajectories");
    demo->add_option("--seed", demo_seed, "root seed");
    demo->add_option("--workers", demo_workers, "concurrent start evolutions");
    demo->add_option("--out", demo_out, "output JSON path");

    try {
        app.parse(argc, argv);
        if (gen->parsed())
            return cmd_gen(gen_n, gen_p, gen_d, gen_degrees, gen_seed, gen_out);
        if (dec->parsed()) return cmd_decompose(dec_in, dec_multi, dec_out);
        if (wlk->parsed())
            return cmd_walk(wlk_in, wlk_multi, wlk_laziness, wlk_epsilon, wlk_starts, wlk_samples,
                            wlk_seed, wlk_budget, wlk_workers, wlk_out);
        if (cond->parsed())
            return cmd_conductance(cond_in, cond_multi, cond_budget, cond_seed, cond_C, cond_out);
        if (exp->parsed())
            return cmd_experiment(exp_kind, exp_regime, exp_d, exp_n, exp_replicates, exp_samples,
                                  exp_seed, exp_workers, exp_out, exp_svg);
        if (demo->parsed())
            return cmd_demo(demo_l, demo_expander, demo_walks, demo_seed, demo_workers, demo_out);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
