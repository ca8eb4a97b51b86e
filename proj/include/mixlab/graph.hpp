// graph.hpp — immutable sparse undirected (multi)graph and subset statistics.
//
// Conventions, used consistently everywhere downstream:
//   * a loop counts once in the edge total e* and contributes 2 to its
//     endpoint's degree, so sum(degree) == 2*e* holds exactly;
//   * parallel edges carry a multiplicity and are counted with weight in
//     e(S), e_out(S) and d(S);
//   * d(S) = 2*e(S) + e_out(S) for every vertex set S.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mixlab {

using Vertex = std::uint32_t;

struct GraphError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Dense bit-set over vertex ids [0, n).
class VertexSet {
  public:
    VertexSet() = default;
    explicit VertexSet(std::size_t n) : n_(n), words_((n + 63) / 64, 0) {}
    VertexSet(std::size_t n, const std::vector<Vertex>& members) : VertexSet(n) {
        for (Vertex v : members) insert(v);
    }

    std::size_t universe_size() const { return n_; }
    std::size_t count() const { return count_; }
    bool empty() const { return count_ == 0; }

    bool contains(Vertex v) const {
        return (words_[v >> 6] >> (v & 63)) & 1ULL;
    }
    void insert(Vertex v) {
        std::uint64_t bit = 1ULL << (v & 63);
        if (!(words_[v >> 6] & bit)) {
            words_[v >> 6] |= bit;
            ++count_;
        }
    }
    void erase(Vertex v) {
        std::uint64_t bit = 1ULL << (v & 63);
        if (words_[v >> 6] & bit) {
            words_[v >> 6] &= ~bit;
            --count_;
        }
    }

    std::vector<Vertex> to_sorted_vector() const {
        std::vector<Vertex> out;
        out.reserve(count_);
        for (std::size_t w = 0; w < words_.size(); ++w) {
            std::uint64_t bits = words_[w];
            while (bits) {
                out.push_back(static_cast<Vertex>((w << 6) + __builtin_ctzll(bits)));
                bits &= bits - 1;
            }
        }
        return out;
    }

    friend bool operator==(const VertexSet& a, const VertexSet& b) {
        return a.n_ == b.n_ && a.words_ == b.words_;
    }

  private:
    std::size_t n_ = 0;
    std::size_t count_ = 0;
    std::vector<std::uint64_t> words_;
};

struct Neighbor {
    Vertex to;
    std::uint32_t multiplicity;
};

struct Edge {
    Vertex u;
    Vertex v;
};

class Graph {
  public:
    Graph() = default;

    std::size_t vertex_count() const { return degree_.size(); }
    std::uint64_t edge_count() const { return edge_count_; }
    bool is_multigraph() const { return is_multigraph_; }

    std::uint64_t degree(Vertex v) const { return degree_[v]; }

    std::span<const Neighbor> neighbors(Vertex v) const {
        return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
    }

    // Multiplicity of edge {u,v}; loops when u == v. O(log deg).
    std::uint32_t multiplicity(Vertex u, Vertex v) const;

    // Edges as a canonical sorted list (u <= v, each parallel edge repeated).
    std::vector<Edge> edge_list() const;

  private:
    std::vector<std::size_t> offsets_;
    std::vector<Neighbor> adjacency_;
    std::vector<std::uint64_t> degree_;
    std::uint64_t edge_count_ = 0;
    bool is_multigraph_ = false;

    friend Graph build_graph(std::size_t n, const std::vector<Edge>& edges, bool allow_multi);
};

// Validates endpoints, rejects loops/duplicates unless allow_multi, and builds
// sorted adjacency. Construction is the only mutation path a Graph ever sees.
Graph build_graph(std::size_t n, const std::vector<Edge>& edges, bool allow_multi);

// Subset S with its cached statistics e(S), e_out(S), d(S).
struct VertexSubset {
    VertexSet members;
    std::uint64_t e_in = 0;
    std::uint64_t e_out = 0;
    std::uint64_t total_degree = 0;
};

VertexSubset subset_stats(const Graph& g, const VertexSet& members);

struct BipartiteResult {
    bool bipartite;
    // Odd closed walk (v0, v1, ..., v0) when non-bipartite; empty otherwise.
    std::vector<Vertex> odd_walk;
};

// `component` must be exactly one connected component of g.
BipartiteResult is_bipartite(const Graph& g, const std::vector<Vertex>& component);

// Edge-list text format: "n m" header, then one "u v" line per edge (u <= v,
// sorted; parallel edges repeated). Round-trips byte-stable.
std::string store_edge_list(const Graph& g);
Graph parse_edge_list(const std::string& text, bool allow_multi);
void write_edge_list_file(const Graph& g, const std::string& path);
Graph load_edge_list_file(const std::string& path, bool allow_multi);

} // namespace mixlab
