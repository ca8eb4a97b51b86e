#include "mixlab/graph.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace mixlab {

std::uint32_t Graph::multiplicity(Vertex u, Vertex v) const {
    auto nbrs = neighbors(u);
    auto it = std::lower_bound(nbrs.begin(), nbrs.end(), v,
                               [](const Neighbor& a, Vertex b) { return a.to < b; });
    if (it != nbrs.end() && it->to == v) return it->multiplicity;
    return 0;
}

std::vector<Edge> Graph::edge_list() const {
    std::vector<Edge> out;
    out.reserve(edge_count_);
    for (Vertex u = 0; u < vertex_count(); ++u) {
        for (const Neighbor& nb : neighbors(u)) {
            if (nb.to < u) continue;
            for (std::uint32_t k = 0; k < nb.multiplicity; ++k) out.push_back({u, nb.to});
        }
    }
    return out;
}

Graph build_graph(std::size_t n, const std::vector<Edge>& edges, bool allow_multi) {
    for (const Edge& e : edges) {
        if (e.u >= n || e.v >= n)
            throw GraphError("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                             ") has an endpoint outside [0," + std::to_string(n) + ")");
        if (!allow_multi && e.u == e.v)
            throw GraphError("loop (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                             ") rejected: graph is not a multigraph");
    }

    // Canonicalize to (min,max), sort, aggregate multiplicities.
    std::vector<Edge> sorted = edges;
    for (Edge& e : sorted)
        if (e.u > e.v) std::swap(e.u, e.v);
    std::sort(sorted.begin(), sorted.end(), [](const Edge& a, const Edge& b) {
        return a.u != b.u ? a.u < b.u : a.v < b.v;
    });
    if (!allow_multi) {
        for (std::size_t i = 1; i < sorted.size(); ++i) {
            if (sorted[i].u == sorted[i - 1].u && sorted[i].v == sorted[i - 1].v)
                throw GraphError("duplicate edge (" + std::to_string(sorted[i].u) + "," +
                                 std::to_string(sorted[i].v) +
                                 ") rejected: graph is not a multigraph");
        }
    }

    Graph g;
    g.is_multigraph_ = allow_multi;
    g.edge_count_ = sorted.size();
    g.degree_.assign(n, 0);

    // Count half-edges per vertex for the CSR offsets (loops make one slot).
    std::vector<std::size_t> slots(n, 0);
    std::size_t i = 0;
    while (i < sorted.size()) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j].u == sorted[i].u && sorted[j].v == sorted[i].v) ++j;
        const Edge& e = sorted[i];
        ++slots[e.u];
        if (e.v != e.u) ++slots[e.v];
        i = j;
    }
    g.offsets_.assign(n + 1, 0);
    for (std::size_t v = 0; v < n; ++v) g.offsets_[v + 1] = g.offsets_[v] + slots[v];
    g.adjacency_.resize(g.offsets_[n]);

    std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
    i = 0;
    while (i < sorted.size()) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j].u == sorted[i].u && sorted[j].v == sorted[i].v) ++j;
        const Edge& e = sorted[i];
        auto mult = static_cast<std::uint32_t>(j - i);
        g.adjacency_[cursor[e.u]++] = {e.v, mult};
        g.degree_[e.u] += mult;
        if (e.v != e.u) {
            g.adjacency_[cursor[e.v]++] = {e.u, mult};
            g.degree_[e.v] += mult;
        } else {
            g.degree_[e.u] += mult; // loop: both endpoints at u
        }
        i = j;
    }
    // Row u is filled with v >= u in order, then retro-filled with v < u out of
    // order by later rows; restore per-row order.
    for (Vertex v = 0; v < n; ++v) {
        auto* begin = g.adjacency_.data() + g.offsets_[v];
        auto* end = g.adjacency_.data() + g.offsets_[v + 1];
        std::sort(begin, end, [](const Neighbor& a, const Neighbor& b) { return a.to < b.to; });
    }
    return g;
}

VertexSubset subset_stats(const Graph& g, const VertexSet& members) {
    VertexSubset s;
    s.members = members;
    std::uint64_t internal_halves = 0;
    for (Vertex u : members.to_sorted_vector()) {
        for (const Neighbor& nb : g.neighbors(u)) {
            if (nb.to == u) {
                // loop: inside S, degree 2 per unit
                s.e_in += nb.multiplicity;
                s.total_degree += 2ULL * nb.multiplicity;
            } else if (members.contains(nb.to)) {
                internal_halves += nb.multiplicity;
                s.total_degree += nb.multiplicity;
            } else {
                s.e_out += nb.multiplicity;
                s.total_degree += nb.multiplicity;
            }
        }
    }
    s.e_in += internal_halves / 2;
    return s;
}

BipartiteResult is_bipartite(const Graph& g, const std::vector<Vertex>& component) {
    if (component.empty()) throw GraphError("is_bipartite: empty component");
    const std::size_t n = g.vertex_count();
    VertexSet in_comp(n, component);

    std::vector<std::int8_t> color(n, -1);
    std::vector<Vertex> parent(n, 0);
    std::vector<Vertex> queue;
    queue.reserve(component.size());

    Vertex root = component[0];
    color[root] = 0;
    parent[root] = root;
    queue.push_back(root);
    std::size_t reached = 1;

    auto walk_to_root = [&](Vertex v) {
        std::vector<Vertex> path{v};
        while (v != parent[v]) {
            v = parent[v];
            path.push_back(v);
        }
        return path;
    };

    for (std::size_t head = 0; head < queue.size(); ++head) {
        Vertex u = queue[head];
        for (const Neighbor& nb : g.neighbors(u)) {
            Vertex v = nb.to;
            if (!in_comp.contains(v))
                throw GraphError("is_bipartite: input set is not closed under adjacency");
            if (v == u) {
                // loop: odd closed walk of length 1
                return {false, {u, u}};
            }
            if (color[v] == -1) {
                color[v] = static_cast<std::int8_t>(1 - color[u]);
                parent[v] = u;
                queue.push_back(v);
                ++reached;
            } else if (color[v] == color[u]) {
                // Odd closed walk: u -> root along parents, reversed, then
                // root -> v along parents, then edge v-u.
                std::vector<Vertex> up = walk_to_root(u);
                std::vector<Vertex> vp = walk_to_root(v);
                // Trim to the lowest common ancestor to keep the walk tidy.
                while (up.size() >= 2 && vp.size() >= 2 &&
                       up[up.size() - 1] == vp[vp.size() - 1] &&
                       up[up.size() - 2] == vp[vp.size() - 2]) {
                    up.pop_back();
                    vp.pop_back();
                }
                std::vector<Vertex> walk(up.begin(), up.end());
                for (auto it = vp.rbegin() + 1; it != vp.rend(); ++it) walk.push_back(*it);
                walk.push_back(u);
                return {false, walk};
            }
        }
    }
    if (reached != component.size())
        throw GraphError("is_bipartite: input set is not connected");
    return {true, {}};
}

std::string store_edge_list(const Graph& g) {
    std::ostringstream out;
    out << g.vertex_count() << ' ' << g.edge_count() << '\n';
    for (const Edge& e : g.edge_list()) out << e.u << ' ' << e.v << '\n';
    return out.str();
}

Graph parse_edge_list(const std::string& text, bool allow_multi) {
    std::istringstream in(text);
    std::size_t n = 0;
    std::uint64_t m = 0;
    if (!(in >> n >> m)) throw GraphError("edge list: missing 'n m' header");
    std::vector<Edge> edges;
    edges.reserve(m);
    for (std::uint64_t i = 0; i < m; ++i) {
        std::uint64_t u = 0, v = 0;
        if (!(in >> u >> v))
            throw GraphError("edge list: expected " + std::to_string(m) + " edges, got " +
                             std::to_string(i));
        edges.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v)});
    }
    return build_graph(n, edges, allow_multi);
}

void write_edge_list_file(const Graph& g, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw GraphError("cannot open for writing: " + path);
    out << store_edge_list(g);
}

Graph load_edge_list_file(const std::string& path, bool allow_multi) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw GraphError("cannot open for reading: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_edge_list(buf.str(), allow_multi);
}

} // namespace mixlab
