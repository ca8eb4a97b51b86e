// conductance.hpp — Q(S), Phi(S), exact minimum conductance by connected-set
// enumeration, heuristic minimisation, the dyadic profile Phi(p), and the
// mixing-time bounds built from them.
//
// All quantities are relative to the given component: e* counts the edges
// inside it and pi(S) = d(S)/2e*. Conductance is the *minimum* over sets:
// both the lower bound pi(S)/10Q(S) and the bounds below are only coherent
// for the minimum.
#pragma once

#include "mixlab/decompose.hpp"
#include "mixlab/graph.hpp"
#include "mixlab/rational.hpp"
#include "mixlab/rng.hpp"
#include "mixlab/walk.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace mixlab {

// Q(S) = e_out(S) / 2e*: stationary escape flow out of S.
double q_of(const Graph& g, const std::vector<Vertex>& component, const VertexSet& s);
Rational q_of_exact(const Graph& g, const std::vector<Vertex>& component, const VertexSet& s);

struct PhiReport {
    double phi;       // Q(S) / (pi(S) pi(comp\S))
    double surrogate; // e_out / (2e(S) + e_out); within a factor 2 of phi's role
};

// Requires 0 < pi(S) < 1.
PhiReport phi_of(const Graph& g, const std::vector<Vertex>& component, const VertexSet& s);
Rational phi_of_exact(const Graph& g, const std::vector<Vertex>& component, const VertexSet& s);

struct MinConductance {
    double phi;
    std::vector<Vertex> witness; // sorted vertex ids
    std::string method;          // "exact" or the winning heuristic family
};

// Exact minimum of Phi(S) over connected S with 0 < pi(S) <= 1/2, by canonical
// ordered growth (each connected set generated once from its least vertex)
// with the pi <= 1/2 monotone prune. Witness is the lexicographically least
// minimizer. Components larger than size_budget are rejected with
// BudgetExceeded; callers should fall back to heuristic_min_conductance.
MinConductance exact_min_conductance(const Graph& g, const std::vector<Vertex>& component,
                                     std::size_t size_budget = 18);

// Upper bound on the minimum from three candidate families:
//   (a) BFS-order prefix sweeps from sampled roots and path midpoints,
//   (b) prefix sweeps of an approximate second eigenvector of the lazy walk
//       operator (orthogonal power iteration, top eigenvector deflated),
//   (c) degree-2 path segments and the two graph halves at the midpoint cut.
// The returned method names the family that won.
MinConductance heuristic_min_conductance(const Graph& g, const std::vector<Vertex>& component,
                                         const DecompositionReport& report, RngSeed seed);

struct ProfileScale {
    unsigned j;                  // dyadic level
    double pi_low, pi_high;      // [2^-j-1, 2^-j]
    double phi;                  // 1 when no qualifying set is known
    std::string method;          // "exact", "heuristic" or "default-1"
    std::vector<Vertex> witness; // empty for default scales
};

struct ConductanceProfile {
    std::vector<ProfileScale> scales; // j = 1 .. ceil(log2 1/pi_min)
    double pi_min = 0.0;

    // Global conductance as realized over the profile (defaults included);
    // this is the Phi that turns the dyadic sum into the single-Phi bound.
    double phi_global() const;
};

// Per dyadic scale, the minimum (exact when the component fits exact_budget,
// else the best heuristic candidate) of Phi over connected S with
// 2^-j-1 <= pi(S) <= 2^-j. Witnesses are re-verified against the definition
// before the profile is returned.
ConductanceProfile conductance_profile(const Graph& g, const std::vector<Vertex>& component,
                                       const DecompositionReport& report,
                                       std::size_t exact_budget, RngSeed seed);

// max over candidates of pi(S) / (10 Q(S)) = d(S) / (10 e_out(S)).
// Candidates must be non-empty subsets with pi(S) <= 1/2.
double bound_lower(const Graph& g, const std::vector<Vertex>& component,
                   const std::vector<std::vector<Vertex>>& candidates);

// C * Phi^-2 * ln(1/pi_min). C is reported symbolically in outputs.
double bound_jerrum_sinclair(double phi, double pi_min, double C = 1.0);

struct DyadicBound {
    double sum;      // C * sum_j Phi^-2(2^-j)
    double integral; // trapezoid of 1/(x Phi^2(x)) over the dyadic grid
};

DyadicBound bound_dyadic_sum(const ConductanceProfile& profile, double C = 1.0);

// 4 exp(-gamma t^2 / (expectation + t)); the binomial tail shape. gamma is a
// configuration parameter, not a verified constant.
double talagrand_tail(double expectation, double t, double gamma);

std::string conductance_report_json(const ConductanceProfile& profile,
                                    const MinConductance& best, double bound_js,
                                    const DyadicBound& dyadic, double C,
                                    const std::string& config_json);

} // namespace mixlab
