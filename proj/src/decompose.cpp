#include "mixlab/decompose.hpp"

#include "json.hpp"

#include <algorithm>
#include <map>
#include <queue>

namespace mixlab {

std::vector<std::vector<Vertex>> components(const Graph& g) {
    const std::size_t n = g.vertex_count();
    std::vector<std::vector<Vertex>> comps;
    std::vector<bool> seen(n, false);
    std::vector<Vertex> queue;
    for (Vertex s = 0; s < n; ++s) {
        if (seen[s]) continue;
        queue.clear();
        queue.push_back(s);
        seen[s] = true;
        for (std::size_t head = 0; head < queue.size(); ++head) {
            Vertex u = queue[head];
            for (const Neighbor& nb : g.neighbors(u)) {
                if (!seen[nb.to]) {
                    seen[nb.to] = true;
                    queue.push_back(nb.to);
                }
            }
        }
        std::sort(queue.begin(), queue.end());
        comps.push_back(queue);
    }
    // Discovery order is by smallest vertex id, so a stable sort on size keeps
    // the required tie-break.
    std::stable_sort(comps.begin(), comps.end(),
                     [](const auto& a, const auto& b) { return a.size() > b.size(); });
    return comps;
}

VertexSet two_core(const Graph& g, const std::vector<Vertex>& within) {
    VertexSet alive(g.vertex_count(), within);
    std::vector<std::uint64_t> deg(g.vertex_count(), 0);
    for (Vertex v : within) {
        std::uint64_t d = 0;
        for (const Neighbor& nb : g.neighbors(v)) {
            if (nb.to == v)
                d += 2ULL * nb.multiplicity;
            else if (alive.contains(nb.to))
                d += nb.multiplicity;
        }
        deg[v] = d;
    }
    std::queue<Vertex> peel;
    for (Vertex v : within)
        if (deg[v] < 2) peel.push(v);
    while (!peel.empty()) {
        Vertex u = peel.front();
        peel.pop();
        if (!alive.contains(u)) continue;
        alive.erase(u);
        for (const Neighbor& nb : g.neighbors(u)) {
            if (nb.to == u || !alive.contains(nb.to)) continue;
            std::uint64_t before = deg[nb.to];
            deg[nb.to] -= nb.multiplicity;
            if (before >= 2 && deg[nb.to] < 2) peel.push(nb.to);
        }
    }
    return alive;
}

namespace {

// BFS inside `eligible`, collecting the component of `start`.
std::vector<Vertex> collect_component(const Graph& g, const VertexSet& eligible, Vertex start,
                                      std::vector<bool>& seen) {
    std::vector<Vertex> comp{start};
    seen[start] = true;
    for (std::size_t head = 0; head < comp.size(); ++head) {
        for (const Neighbor& nb : g.neighbors(comp[head])) {
            if (nb.to != comp[head] && eligible.contains(nb.to) && !seen[nb.to]) {
                seen[nb.to] = true;
                comp.push_back(nb.to);
            }
        }
    }
    return comp;
}

// Farthest vertex and its distance from root, within the tree's vertex set.
std::pair<Vertex, std::uint32_t> deepest_from(const Graph& g, const VertexSet& tree, Vertex root) {
    std::vector<std::pair<Vertex, std::uint32_t>> queue{{root, 0}};
    VertexSet seen(g.vertex_count());
    seen.insert(root);
    std::pair<Vertex, std::uint32_t> best{root, 0};
    for (std::size_t head = 0; head < queue.size(); ++head) {
        auto [u, dist] = queue[head];
        if (dist > best.second || (dist == best.second && u < best.first))
            best = {u, dist};
        for (const Neighbor& nb : g.neighbors(u)) {
            if (nb.to != u && tree.contains(nb.to) && !seen.contains(nb.to)) {
                seen.insert(nb.to);
                queue.push_back({nb.to, dist + 1});
            }
        }
    }
    return best;
}

} // namespace

std::vector<Decoration> decorations(const Graph& g, const std::vector<Vertex>& giant,
                                    const VertexSet& core) {
    std::vector<Decoration> out;
    if (core.empty()) {
        if (!giant.empty())
            throw GraphError("decorations: core is empty (the giant is a forest)");
        return out;
    }
    VertexSet tree_side(g.vertex_count());
    for (Vertex v : giant)
        if (!core.contains(v)) tree_side.insert(v);

    std::vector<bool> seen(g.vertex_count(), false);
    for (Vertex v : giant) {
        if (!tree_side.contains(v) || seen[v]) continue;
        std::vector<Vertex> comp = collect_component(g, tree_side, v, seen);

        Decoration d{};
        bool have_root = false;
        for (Vertex t : comp) {
            std::uint32_t core_links = 0;
            Vertex attach = 0;
            for (const Neighbor& nb : g.neighbors(t)) {
                if (nb.to != t && core.contains(nb.to)) {
                    core_links += nb.multiplicity;
                    attach = nb.to;
                }
            }
            if (core_links == 0) continue;
            if (have_root || core_links > 1)
                throw GraphError("decorations: tree component attaches to the core more than once");
            have_root = true;
            d.root = t;
            d.attachment = attach;
        }
        if (!have_root)
            throw GraphError("decorations: tree component has no edge to the core");
        std::sort(comp.begin(), comp.end());
        d.vertices = std::move(comp);
        VertexSet tset(g.vertex_count(), d.vertices);
        auto [leaf, depth] = deepest_from(g, tset, d.root);
        d.deepest_leaf = leaf;
        d.depth = depth;
        out.push_back(std::move(d));
    }
    std::sort(out.begin(), out.end(),
              [](const Decoration& a, const Decoration& b) { return a.root < b.root; });
    return out;
}

std::vector<DanglingTree> dangling_trees(const Graph& g) {
    const std::size_t n = g.vertex_count();
    std::vector<Vertex> all(n);
    for (Vertex v = 0; v < n; ++v) all[v] = v;
    VertexSet kept = two_core(g, all);

    VertexSet peeled(n);
    for (Vertex v = 0; v < n; ++v)
        if (!kept.contains(v)) peeled.insert(v);

    // anchor -> non-root vertices of the tree hanging from it
    std::map<Vertex, std::vector<Vertex>> anchored;
    std::vector<DanglingTree> out;

    std::vector<bool> seen(n, false);
    for (Vertex v = 0; v < n; ++v) {
        if (!peeled.contains(v) || seen[v]) continue;
        std::vector<Vertex> comp = collect_component(g, peeled, v, seen);

        bool have_anchor = false;
        Vertex anchor = 0;
        for (Vertex t : comp) {
            for (const Neighbor& nb : g.neighbors(t)) {
                if (nb.to != t && kept.contains(nb.to)) {
                    if (have_anchor && nb.to != anchor)
                        throw GraphError("dangling_trees: peeled component touches the core twice");
                    have_anchor = true;
                    anchor = nb.to;
                }
            }
        }
        if (have_anchor) {
            auto& bucket = anchored[anchor];
            bucket.insert(bucket.end(), comp.begin(), comp.end());
        } else {
            // whole component peeled: a free tree, rooted at its max-degree
            // vertex, smallest id on ties
            Vertex root = comp[0];
            for (Vertex t : comp)
                if (g.degree(t) > g.degree(root) || (g.degree(t) == g.degree(root) && t < root))
                    root = t;
            std::vector<Vertex> rest;
            rest.reserve(comp.size() - 1);
            for (Vertex t : comp)
                if (t != root) rest.push_back(t);
            std::sort(rest.begin(), rest.end());
            out.push_back({root, std::move(rest), /*anchored=*/false});
        }
    }
    for (auto& [anchor, verts] : anchored) {
        std::sort(verts.begin(), verts.end());
        out.push_back({anchor, std::move(verts), /*anchored=*/true});
    }
    std::sort(out.begin(), out.end(),
              [](const DanglingTree& a, const DanglingTree& b) { return a.root < b.root; });
    return out;
}

std::uint64_t vertices_in_dangling_trees_of_size_at_least(const std::vector<DanglingTree>& forest,
                                                          std::size_t i) {
    std::uint64_t total = 0;
    for (const DanglingTree& t : forest)
        if (t.size() >= i) total += t.size();
    return total;
}

Degree2PathCensus degree2_paths(const Graph& g, const std::vector<Vertex>& within) {
    Degree2PathCensus census;
    const std::size_t n = g.vertex_count();
    VertexSet in(n, within);
    VertexSet visited(n); // interior / cycle vertices already consumed

    auto continue_from = [&](Vertex cur, Vertex prev) -> Vertex {
        // cur has degree exactly 2 and no loop; pick the edge that is not the
        // one we arrived by (a double edge goes straight back).
        const auto nbrs = g.neighbors(cur);
        if (nbrs.size() == 1) return nbrs[0].to; // multiplicity 2 back to prev
        return nbrs[0].to == prev ? nbrs[1].to : nbrs[0].to;
    };

    for (Vertex u : within) {
        if (g.degree(u) < 3) continue;
        for (const Neighbor& nb : g.neighbors(u)) {
            if (nb.to == u) continue; // loops are outside the census
            if (!in.contains(nb.to)) continue;
            if (g.degree(nb.to) >= 3) {
                if (u < nb.to)
                    for (std::uint32_t k = 0; k < nb.multiplicity; ++k)
                        census.paths.push_back({u, nb.to, {}});
                continue;
            }
            if (g.degree(nb.to) != 2 || visited.contains(nb.to)) continue;
            // trace through the degree-2 run
            std::vector<Vertex> interior;
            Vertex prev = u;
            Vertex cur = nb.to;
            while (in.contains(cur) && g.degree(cur) == 2 && !visited.contains(cur)) {
                visited.insert(cur);
                interior.push_back(cur);
                Vertex next = continue_from(cur, prev);
                prev = cur;
                cur = next;
            }
            if (in.contains(cur) && g.degree(cur) >= 3)
                census.paths.push_back({u, cur, std::move(interior)});
            // otherwise the run ends at a degree-<=1 vertex (or leaves
            // `within`): not a census path, interiors stay marked
        }
    }

    // untouched degree-2 runs with no junction anywhere: pure cycles or
    // pendant chains; only full cycles are reported
    for (Vertex v : within) {
        if (g.degree(v) != 2 || visited.contains(v)) continue;
        if (g.multiplicity(v, v) > 0) { // isolated loop vertex: a 1-cycle
            visited.insert(v);
            census.pure_cycles.push_back({v});
            continue;
        }
        std::vector<Vertex> run{v};
        visited.insert(v);
        Vertex prev = v;
        Vertex cur = g.neighbors(v)[0].to;
        bool cycle = false;
        while (true) {
            if (cur == v) {
                cycle = true;
                break;
            }
            if (!in.contains(cur) || g.degree(cur) != 2 || visited.contains(cur)) break;
            visited.insert(cur);
            run.push_back(cur);
            Vertex next = continue_from(cur, prev);
            prev = cur;
            cur = next;
        }
        if (cycle) census.pure_cycles.push_back(std::move(run));
    }

    for (const Degree2Path& p : census.paths)
        census.longest_interior = std::max(census.longest_interior, p.interior.size());

    std::sort(census.paths.begin(), census.paths.end(),
              [](const Degree2Path& a, const Degree2Path& b) {
                  if (a.interior.size() != b.interior.size())
                      return a.interior.size() > b.interior.size();
                  if (a.endpoint_a != b.endpoint_a) return a.endpoint_a < b.endpoint_a;
                  if (a.endpoint_b != b.endpoint_b) return a.endpoint_b < b.endpoint_b;
                  return a.interior < b.interior;
              });
    return census;
}

DecompositionReport decompose(const Graph& g) {
    DecompositionReport report;
    report.components = components(g);
    report.giant_index = 0;
    if (!report.components.empty()) {
        const auto& giant = report.giant();
        report.core = two_core(g, giant);
        if (!report.core.empty()) report.decorations = decorations(g, giant, report.core);
        report.path_census = degree2_paths(g, giant);
    } else {
        report.core = VertexSet(g.vertex_count());
    }
    report.dangling_trees = dangling_trees(g);
    return report;
}

std::string decomposition_report_json(const DecompositionReport& report) {
    nlohmann::json j;
    std::vector<std::size_t> sizes;
    for (const auto& c : report.components) sizes.push_back(c.size());
    j["component_sizes"] = sizes;
    j["component_count"] = report.components.size();
    j["giant_size"] = report.components.empty() ? 0 : report.giant().size();
    j["core_size"] = report.core.count();

    auto histogram = [](const auto& items, auto&& size_of) {
        std::map<std::size_t, std::size_t> h;
        for (const auto& item : items) ++h[size_of(item)];
        nlohmann::json out = nlohmann::json::object();
        for (auto [k, v] : h) out[std::to_string(k)] = v;
        return out;
    };
    j["decoration_size_histogram"] =
        histogram(report.decorations, [](const Decoration& d) { return d.vertices.size(); });
    j["dangling_tree_size_histogram"] =
        histogram(report.dangling_trees, [](const DanglingTree& t) { return t.size(); });
    j["path_interior_length_histogram"] = histogram(
        report.path_census.paths, [](const Degree2Path& p) { return p.interior.size(); });
    j["path_count"] = report.path_census.paths.size();
    j["pure_cycle_count"] = report.path_census.pure_cycles.size();
    j["longest_path_interior"] = report.path_census.longest_interior;
    if (!report.path_census.paths.empty()) {
        const Degree2Path& longest = report.path_census.paths.front();
        j["longest_path"] = {{"endpoints", {longest.endpoint_a, longest.endpoint_b}},
                             {"interior", longest.interior}};
    }
    return j.dump(2);
}

} // namespace mixlab
