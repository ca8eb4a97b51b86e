#include "mixlab/generators.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace mixlab {

DegreeSequence load_degree_sequence_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw GraphError("cannot open degree sequence file: " + path);
    DegreeSequence ds;
    long long d = 0;
    while (in >> d) {
        if (d < 0) throw GraphError("negative degree in sequence file");
        ds.degrees.push_back(static_cast<std::uint32_t>(d));
    }
    return ds;
}

Graph sample_gnp(std::size_t n, double p, RngSeed seed) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("sample_gnp: p must be in [0,1]");
    std::vector<Edge> edges;
    if (n >= 2 && p > 0.0) {
        const std::uint64_t total_pairs = static_cast<std::uint64_t>(n) * (n - 1) / 2;
        if (p >= 1.0) {
            edges.reserve(total_pairs);
            for (Vertex u = 0; u + 1 < n; ++u)
                for (Vertex v = u + 1; v < n; ++v) edges.push_back({u, v});
        } else {
            Rng rng(seed.derived("gnp"));
            const double log_q = std::log1p(-p);
            // Walk the pair sequence (0,1),(0,2),...,(n-2,n-1) by geometric gaps.
            std::uint64_t idx = 0;        // next candidate pair index
            Vertex row = 0;               // row of the pair at row_start
            std::uint64_t row_start = 0;  // index of pair (row, row+1)
            edges.reserve(static_cast<std::size_t>(p * static_cast<double>(total_pairs) * 1.1) + 16);
            while (idx < total_pairs) {
                double gap = std::floor(std::log1p(-rng.next_double()) / log_q);
                if (gap >= static_cast<double>(total_pairs - idx)) break;
                idx += static_cast<std::uint64_t>(gap);
                while (idx - row_start >= n - 1 - row) {
                    row_start += n - 1 - row;
                    ++row;
                }
                edges.push_back({row, static_cast<Vertex>(row + 1 + (idx - row_start))});
                ++idx;
            }
        }
    }
    return build_graph(n, edges, /*allow_multi=*/false);
}

Graph sample_configuration(const DegreeSequence& ds, RngSeed seed) {
    if (!ds.even_sum())
        throw std::invalid_argument("sample_configuration: degree sum must be even");
    std::vector<Vertex> points;
    points.reserve(ds.sum());
    for (Vertex v = 0; v < ds.degrees.size(); ++v)
        for (std::uint32_t k = 0; k < ds.degrees[v]; ++k) points.push_back(v);

    // A uniform shuffle paired off consecutively is a uniform perfect matching.
    Rng rng(seed.derived("configuration"));
    rng.shuffle(points);

    std::vector<Edge> edges;
    edges.reserve(points.size() / 2);
    for (std::size_t i = 0; i + 1 < points.size(); i += 2)
        edges.push_back({points[i], points[i + 1]});
    return build_graph(ds.degrees.size(), edges, /*allow_multi=*/true);
}

double pairing_isolation_probability(std::uint64_t M, std::uint64_t dS) {
    if (dS % 2 != 0)
        throw std::invalid_argument("pairing_isolation_probability: d(S) must be even");
    if (dS > 2 * M)
        throw std::invalid_argument("pairing_isolation_probability: d(S) exceeds 2M");
    double log_p = 0.0;
    for (std::uint64_t k = 1; k < dS; k += 2)
        log_p += std::log(static_cast<double>(dS - k)) - std::log(static_cast<double>(2 * M - k));
    return std::exp(log_p);
}

Rational pairing_isolation_probability_exact(std::uint64_t M, std::uint64_t dS) {
    if (dS % 2 != 0)
        throw std::invalid_argument("pairing_isolation_probability: d(S) must be even");
    if (dS > 2 * M)
        throw std::invalid_argument("pairing_isolation_probability: d(S) exceeds 2M");
    Rational p(1);
    for (std::uint64_t k = 1; k < dS; k += 2)
        p *= Rational(static_cast<std::int64_t>(dS - k), static_cast<std::int64_t>(2 * M - k));
    return p;
}

} // namespace mixlab
