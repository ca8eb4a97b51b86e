// experiments.hpp — reproducible experiment harness: theoretical predictors,
// frequency checks for the structural laws of sparse random graphs,
// mixing-time scaling studies, and the local-obstruction demo. All records are replay-exact from
// (experiment_id, seed, replicate).
#pragma once

#include "mixlab/conductance.hpp"
#include "mixlab/decompose.hpp"
#include "mixlab/generators.hpp"
#include "mixlab/graph.hpp"
#include "mixlab/rng.hpp"
#include "mixlab/walk.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace mixlab {

struct PredictorSet {
    double local_obstruction; // (ln n / d)^2
    double diameter_term;     // ln n / ln d
    double threshold_p;       // sqrt(ln n * ln ln n) / n
    double path_lower;        // ln n / (4d)
    double path_upper;        // 10 ln n / d
};

// Requires n >= 3 and d > 1 (supercritical).
PredictorSet predictors(std::size_t n, double d);

struct TreeCountEstimate {
    double expected;     // C(n,k) k^(k-2) p^(k-1)
    double upper;        // n (e d)^k
    double log_expected; // natural logs, stable for large n
    double log_upper;
};

TreeCountEstimate expected_tree_count(std::size_t n, std::size_t k, double p);

struct ExperimentRecord {
    std::string experiment_id;
    std::size_t n = 0;
    double d = 0.0;
    double p = 0.0;
    std::uint64_t seed = 0;
    std::uint32_t replicate = 0;
    std::int64_t giant_size = -1;
    std::int64_t core_size = -1;
    std::int64_t longest_path = -1;
    std::int64_t t_mix = -1;        // -1: not measured (bipartite or censored)
    std::int64_t t_mix_cesaro = -1; // -1: censored
    double phi_global = -1.0;       // -1: not computed
    std::vector<double> phi_scales; // dyadic profile values when computed
    double bound_lower = -1.0;
    double bound_js = -1.0;
    double bound_dyadic = -1.0;
    std::uint64_t violations = 0;   // property violations observed in this replicate
    bool censored = false;
};

// Shortest round-trip decimal form; identical doubles format identically.
std::string format_double(double x);

std::string csv_header();
std::string csv_row(const ExperimentRecord& r);

// Full CSV artifact: "# config: {...}" line, header, rows sorted by
// (experiment_id, n, d, replicate).
std::string csv_document(std::vector<ExperimentRecord> records, const std::string& config_json);

// ---- census of long induced degree-2 paths ----------------------------------

struct PathCensusStudy {
    std::vector<ExperimentRecord> records;
    std::vector<std::int64_t> longest;   // per replicate
    std::vector<bool> ge_lower;          // longest >= ln n / 4d
    std::vector<bool> le_upper;          // longest <= 10 ln n / d
    double lower_threshold = 0.0;
    double upper_threshold = 0.0;
    double fraction_ge_lower = 0.0;
    double fraction_le_upper = 0.0;
    bool outside_hypothesis = false;     // d >= ln n / 5
};

PathCensusStudy run_path_census(std::size_t n, double d, std::uint32_t replicates, RngSeed seed,
                                unsigned workers = 1);

// ---- expansion / total-degree / core-coverage checks ------------------------

struct ExpansionStudy {
    std::vector<ExperimentRecord> records;
    std::uint64_t samples_evaluated = 0;
    std::uint64_t samples_skipped = 0;   // predicate failures
    double min_eout_over_d_size = -1.0;  // fitted floor for e_out(S) / d|S|
    double min_eout_over_size = -1.0;    // fitted floor for e_out(S) / |S|
    double min_core_fraction = -1.0;     // fitted floor for |S ∩ core| / |S|
    double max_degree_over_size = -1.0;  // fitted ceiling for d(S) / |S|
};

ExpansionStudy run_expansion_check(std::size_t n, double d, std::uint32_t replicates,
                                   std::uint32_t samples_per_graph, RngSeed seed,
                                   unsigned workers = 1);

// ---- mixing-time scaling study ----------------------------------------------

enum class Regime { ConstantD, Threshold, Dense };

std::string regime_name(Regime r);
double regime_degree(Regime r, std::size_t n, double constant_d);

struct ScalingOptions {
    Regime regime = Regime::ConstantD;
    std::vector<std::size_t> n_grid;
    double constant_d = 3.0;       // ConstantD only
    std::uint32_t replicates = 5;
    std::size_t start_candidates = 16;
    double laziness = 0.0;
    std::uint64_t max_steps = 1000000;
    std::size_t exact_profile_budget = 18;
    double C = 1.0;
    unsigned workers = 1;
};

struct ScalingFit {
    std::string predictor; // name of the regime predictor
    double min_ratio = 0.0;
    double max_ratio = 0.0; // over cell means of T'_mix / predictor
    double spread = 0.0;    // max/min
};

struct ScalingCellSummary {
    std::size_t n = 0;
    double d = 0.0;
    double mean_t_cesaro = -1.0;
    double local_obstruction = 0.0; // (ln n / d)^2
    double diameter_term = 0.0;     // ln n / ln d
};

struct ScalingStudy {
    std::vector<ExperimentRecord> records;
    ScalingFit fit;
    std::vector<ScalingCellSummary> cells;
};

ScalingStudy run_scaling_study(const ScalingOptions& opt, RngSeed seed);

// One cell replicate, replayable in isolation.
ExperimentRecord run_scaling_cell(const ScalingOptions& opt, std::size_t n,
                                  std::uint32_t replicate, RngSeed seed);

// ---- local obstruction demo ---------------------------------------------------

struct ObstructionReport {
    std::size_t l = 0;
    std::size_t path_interior = 0; // 2l+1
    std::uint64_t t_checkpoint = 0; // floor(l^2/10)
    double escape_stay_probability = 0.0;
    std::int64_t t_mix = -1;
    std::int64_t t_mix_cesaro = -1;
    double bound_lower_half = 0.0; // pi/10Q on the midpoint-cut half
    std::size_t n = 0;
    std::uint64_t e_star = 0;
};

ObstructionReport run_obstruction_demo(std::size_t l, std::size_t expander_n, std::size_t walks,
                                       RngSeed seed, unsigned workers = 1);

std::string obstruction_report_json(const ObstructionReport& r, const std::string& config_json);

// Two-column plot data, one "x y" line per point.
std::string plot_series(const std::vector<std::pair<double, double>>& points);

// Minimal standalone SVG line chart; one polyline per series.
std::string svg_line_chart(const std::string& title,
                           const std::vector<std::pair<std::string, std::vector<std::pair<double, double>>>>& series);

} // namespace mixlab
