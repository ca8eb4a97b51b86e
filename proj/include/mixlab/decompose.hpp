// decompose.hpp — structural decomposition: components, giant, 2-core,
// decorations, dangling trees, induced degree-2 paths.
#pragma once

#include "mixlab/graph.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace mixlab {

// Connected components, sorted by decreasing size, ties by smallest contained
// vertex id. Each component is sorted ascending.
std::vector<std::vector<Vertex>> components(const Graph& g);

// Maximal subset of `within` whose induced subgraph has min degree >= 2,
// by queue-based peeling. The result is independent of peeling order.
// Loops count 2 towards the induced degree.
VertexSet two_core(const Graph& g, const std::vector<Vertex>& within);

// A tree component of giant - core. `root` is the unique tree vertex adjacent
// to the core, `attachment` its unique core neighbour.
struct Decoration {
    Vertex root;
    Vertex attachment;
    std::vector<Vertex> vertices; // sorted, includes root
    Vertex deepest_leaf;
    std::uint32_t depth; // edges from root to deepest_leaf
};

// Requires core == two_core(g, giant) and a non-empty core. Components of
// giant - core adjacent to the core at != 1 tree vertex are an internal
// inconsistency and raise GraphError.
std::vector<Decoration> decorations(const Graph& g, const std::vector<Vertex>& giant,
                                    const VertexSet& core);

// Maximal rooted tree all of whose non-root vertices touch only tree edges.
// Anchored trees are rooted at the surviving (2-core side) vertex and collect
// every tree component hanging from it; tree components of g disjoint from
// any core are rooted at their max-degree vertex (ties: smallest id).
struct DanglingTree {
    Vertex root;
    std::vector<Vertex> vertices; // sorted, excludes root
    bool anchored;
    std::size_t size() const { return vertices.size() + 1; }
};

std::vector<DanglingTree> dangling_trees(const Graph& g);

// Sum of size(T) over dangling trees with size(T) >= i.
std::uint64_t vertices_in_dangling_trees_of_size_at_least(
    const std::vector<DanglingTree>& forest, std::size_t i);

// Maximal path whose interior vertices have degree exactly 2 in g and whose
// endpoints have degree >= 3. Edges between two degree->=3 vertices appear as
// empty-interior paths (with multiplicity in multigraphs). Endpoints may
// coincide when a degree-2 run closes back on a single junction. Loops are
// not part of the census.
struct Degree2Path {
    Vertex endpoint_a;
    Vertex endpoint_b;
    std::vector<Vertex> interior; // in path order from endpoint_a
    Vertex midpoint() const {
        // lower-index centre for even interiors
        return interior[(interior.size() - 1) / 2];
    }
};

struct Degree2PathCensus {
    std::vector<Degree2Path> paths;
    std::vector<std::vector<Vertex>> pure_cycles; // all-degree-2 cycle components
    std::size_t longest_interior = 0;
};

Degree2PathCensus degree2_paths(const Graph& g, const std::vector<Vertex>& within);

struct DecompositionReport {
    std::vector<std::vector<Vertex>> components;
    std::size_t giant_index = 0;
    VertexSet core; // 2-core of the giant; may be empty when the giant is a tree
    std::vector<Decoration> decorations; // empty when core is empty
    std::vector<DanglingTree> dangling_trees; // whole graph
    Degree2PathCensus path_census; // within the giant

    const std::vector<Vertex>& giant() const { return components[giant_index]; }
};

DecompositionReport decompose(const Graph& g);

// JSON with component sizes, core size, decoration / dangling-tree size
// histograms, path interior-length histogram and the longest path.
std::string decomposition_report_json(const DecompositionReport& report);

} // namespace mixlab
