// generators.hpp — random graph sources: G(n,p) and the configuration model.
#pragma once

#include "mixlab/graph.hpp"
#include "mixlab/rational.hpp"
#include "mixlab/rng.hpp"

#include <cstdint>
#include <vector>

namespace mixlab {

struct DegreeSequence {
    std::vector<std::uint32_t> degrees;

    std::uint64_t sum() const {
        std::uint64_t s = 0;
        for (auto d : degrees) s += d;
        return s;
    }
    bool even_sum() const { return sum() % 2 == 0; }
    // Condition for the core model: every entry at least 2.
    bool min_degree_two() const {
        for (auto d : degrees)
            if (d < 2) return false;
        return !degrees.empty();
    }
};

DegreeSequence load_degree_sequence_file(const std::string& path);

// Erdos-Renyi G(n,p): each of the C(n,2) pairs present independently with
// probability p. Geometric gap-skipping over the lexicographic pair order,
// O(n + e*) expected time at sparse densities.
Graph sample_gnp(std::size_t n, double p, RngSeed seed);

// Configuration model: project a uniformly random perfect matching on the
// degree points onto a multigraph. No erasure, no simple-graph rejection;
// output degree sequence equals the input exactly (loops counted twice).
Graph sample_configuration(const DegreeSequence& ds, RngSeed seed);

// P[no edges between S and its complement] in the pairing model, for a set S
// of total degree d_S inside a pairing with M edges:
//     (d_S-1)/(2M-1) * (d_S-3)/(2M-3) * ... * 1/(2M-d_S+1)
//   = C(M, d_S/2) / C(2M, d_S).
// Evaluated as the closed product in log space. d_S must be even.
double pairing_isolation_probability(std::uint64_t M, std::uint64_t dS);

// Same value as an exact fraction; small inputs only (throws on overflow).
Rational pairing_isolation_probability_exact(std::uint64_t M, std::uint64_t dS);

} // namespace mixlab
