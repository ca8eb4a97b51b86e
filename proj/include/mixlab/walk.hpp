// walk.hpp — simple random walk engine: transition operator, stationary
// distribution, total-variation distance, T_mix and the Cesaro-averaged
// mixing time, both by exact distribution powering.
//
// The supremum over start distributions is taken over point masses only:
// d_TV(x P^t, pi) is a convex function of x, so it attains its maximum over
// the simplex at a vertex (see README, "Point-mass starts suffice").
#pragma once

#include "mixlab/decompose.hpp"
#include "mixlab/graph.hpp"
#include "mixlab/rational.hpp"
#include "mixlab/rng.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mixlab {

struct WalkError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct BudgetExceeded : WalkError {
    using WalkError::WalkError;
};

// Probability vector over a component's vertices (sorted support).
struct Distribution {
    std::vector<Vertex> support;
    std::vector<double> mass;

    static Distribution point_mass(const std::vector<Vertex>& support, Vertex at);
};

enum class StartPolicy { AllVertices, Sampled, Designated };

struct WalkConfig {
    double laziness = 0.0;  // stay-put probability per step, in [0,1)
    double epsilon = 0.36787944117144233; // 1/e
    StartPolicy start_policy = StartPolicy::AllVertices;
    std::size_t sample_count = 16;     // for StartPolicy::Sampled
    std::vector<Vertex> starts;        // for StartPolicy::Designated
    RngSeed seed;                      // start sampling only
    std::uint64_t max_steps = 1000000; // sparse passes per start before BudgetExceeded
    std::size_t max_vertices = 200000; // exact powering size budget; larger components
                                       // are refused, never silently approximated
    unsigned workers = 1;              // concurrent start evolutions
};

// pi_i = d(i) / (2 e*), with e* the edge count inside the component.
Distribution stationary(const Graph& g, const std::vector<Vertex>& component);

// Exact stationary distribution for the rational test mode (small components).
std::vector<Rational> stationary_exact(const Graph& g, const std::vector<Vertex>& component);

// One transition: y_j = laziness*x_j + (1-laziness) * sum_{i~j} x_i m(i,j)/d(i).
// A loop routes mass back with weight 2*mult/d(i). One sparse pass.
Distribution step(const Graph& g, const Distribution& x, double laziness);

// Half-L1: (1/2) sum |a_i - b_i|; equals max_A |a(A) - b(A)|.
double tv_distance(const Distribution& a, const Distribution& b);

struct StartRecord {
    Vertex start;
    std::uint64_t t;
    double final_tv;
};

struct MixingResult {
    std::uint64_t t;     // max over evaluated starts
    Vertex worst_start;
    std::vector<StartRecord> per_start;
};

// min{t : d_TV(x0 P^t, pi) < epsilon}, maximized over starts. Found by
// doubling to bracket then binary search; valid because d_TV against pi is
// non-increasing in t under a fixed kernel (this is asserted along the way).
// Requires a connected component that is non-bipartite or laziness > 0.
MixingResult mixing_time(const Graph& g, const std::vector<Vertex>& component,
                         const WalkConfig& cfg);

// Cesaro variant: the time-averaged distribution (1/t) sum_{s<t} x0 P^s is
// maintained as a running average; returns min{t >= 1 : d_TV(avg_t, pi) < eps}
// per start (the average is not monotone in t, so this is a forward scan).
// Valid for bipartite components with laziness 0.
MixingResult cesaro_mixing_time(const Graph& g, const std::vector<Vertex>& component,
                                const WalkConfig& cfg);

// Same searches from an arbitrary initial distribution (the sup in the
// definitions is over point masses; these exist for identity checks such as
// the stationary start and the (2/e)^l threshold amplification).
std::uint64_t mixing_time_from(const Graph& g, const std::vector<Vertex>& component,
                               const Distribution& x0, const WalkConfig& cfg);
std::uint64_t cesaro_time_from(const Graph& g, const std::vector<Vertex>& component,
                               const Distribution& x0, const WalkConfig& cfg);

// Monte-Carlo estimate of P[walk from the path midpoint has not touched an
// endpoint of the path within t steps]. Even interiors take the lower-index
// centre as midpoint.
double trajectory_escape_probability(const Graph& g, const Degree2Path& path, std::uint64_t t,
                                     std::size_t walks, RngSeed seed);

// k candidate slow-mixing starts: longest degree-2 path midpoints, deepest
// decoration leaves, then uniform samples. Deterministic given seed.
std::vector<Vertex> heuristic_worst_starts(const Graph& g, const std::vector<Vertex>& component,
                                           const DecompositionReport& report, std::size_t k,
                                           RngSeed seed);

std::string walk_report_json(const MixingResult& mix, const MixingResult& cesaro,
                             const WalkConfig& cfg, const std::string& config_json);

} // namespace mixlab
