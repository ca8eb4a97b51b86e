#include "mixlab/conductance.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace mixlab {

namespace {

constexpr std::uint32_t kOutside = UINT32_MAX;

struct Ctx {
    const Graph* g = nullptr;
    std::vector<Vertex> verts; // sorted
    std::vector<std::uint32_t> local_of;
    std::vector<std::size_t> off;
    struct Arc {
        std::uint32_t to;
        std::uint32_t mult;
    };
    std::vector<Arc> arcs;
    std::vector<std::uint64_t> deg;
    std::uint64_t two_e = 0;

    std::size_t size() const { return verts.size(); }
};

Ctx make_ctx(const Graph& g, const std::vector<Vertex>& component) {
    if (component.empty()) throw GraphError("conductance: empty component");
    Ctx c;
    c.g = &g;
    c.verts = component;
    std::sort(c.verts.begin(), c.verts.end());
    c.local_of.assign(g.vertex_count(), kOutside);
    for (std::uint32_t i = 0; i < c.verts.size(); ++i) c.local_of[c.verts[i]] = i;

    c.off.assign(c.verts.size() + 1, 0);
    c.deg.resize(c.verts.size());
    for (std::uint32_t i = 0; i < c.verts.size(); ++i) {
        Vertex v = c.verts[i];
        c.deg[i] = g.degree(v);
        c.two_e += c.deg[i];
        c.off[i + 1] = c.off[i] + g.neighbors(v).size();
    }
    if (c.two_e >= (1ULL << 31))
        throw GraphError("conductance: component too large for exact fraction comparisons");
    c.arcs.resize(c.off.back());
    for (std::uint32_t i = 0; i < c.verts.size(); ++i) {
        std::size_t k = c.off[i];
        for (const Neighbor& nb : g.neighbors(c.verts[i])) {
            std::uint32_t j = c.local_of[nb.to];
            if (j == kOutside)
                throw GraphError("conductance: the given set is not closed under adjacency");
            c.arcs[k++] = {j, nb.multiplicity};
        }
    }
    std::vector<char> seen(c.size(), 0);
    std::vector<std::uint32_t> queue{0};
    seen[0] = 1;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        std::uint32_t u = queue[head];
        for (std::size_t k = c.off[u]; k < c.off[u + 1]; ++k)
            if (!seen[c.arcs[k].to]) {
                seen[c.arcs[k].to] = 1;
                queue.push_back(c.arcs[k].to);
            }
    }
    if (queue.size() != c.size()) throw GraphError("conductance: component is not connected");
    return c;
}

// Phi(S) as the exact fraction e_out * 2e* / (d(S) * (2e* - d(S))).
struct PhiFrac {
    std::uint64_t num = 1;
    std::uint64_t den = 0; // den 0 encodes "no value yet" (= +infinity)

    static PhiFrac of(std::uint64_t two_e, std::uint64_t d, std::uint64_t e_out) {
        return {e_out * two_e, d * (two_e - d)};
    }
    bool empty() const { return den == 0; }
    double value() const {
        return static_cast<double>(num) / static_cast<double>(den);
    }
    friend bool operator<(const PhiFrac& a, const PhiFrac& b) {
        if (b.empty()) return !a.empty();
        if (a.empty()) return false;
        return static_cast<unsigned __int128>(a.num) * b.den <
               static_cast<unsigned __int128>(b.num) * a.den;
    }
    friend bool operator==(const PhiFrac& a, const PhiFrac& b) {
        if (a.empty() || b.empty()) return a.empty() && b.empty();
        return static_cast<unsigned __int128>(a.num) * b.den ==
               static_cast<unsigned __int128>(b.num) * a.den;
    }
};

// pi(S) in [2^-j-1, 2^-j]  <=>  d*2^(j+1) >= 2e*  and  d*2^j <= 2e*.
bool in_scale(std::uint64_t two_e, std::uint64_t d, unsigned j) {
    const auto d128 = static_cast<unsigned __int128>(d);
    return (d128 << (j + 1)) >= two_e && (d128 << j) <= two_e;
}

unsigned scale_count(std::uint64_t two_e, std::uint64_t min_deg) {
    // ceil(log2(1/pi_min)) with pi_min = min_deg / two_e
    unsigned j = 0;
    while ((static_cast<unsigned __int128>(min_deg) << j) < two_e) ++j;
    return j;
}

std::uint64_t min_degree(const Ctx& ctx) {
    std::uint64_t m = UINT64_MAX;
    for (auto d : ctx.deg) m = std::min(m, d);
    return m;
}

// ---- exact enumeration -----------------------------------------------------
//
// Canonical ordered growth: every connected set is generated exactly once
// from its least vertex; extension candidates are exclusive neighbours with
// id above the root (the ESU scheme). Supersets only gain stationary mass,
// so branches with d(S) > e* are pruned whole.

template <typename Sink>
void enumerate_connected(const Ctx& ctx, std::uint64_t visit_cap, Sink&& sink) {
    const auto m = static_cast<std::uint32_t>(ctx.size());
    std::vector<char> in_sub(m, 0), blocked(m, 0);
    std::vector<std::uint32_t> sub;
    std::uint64_t d = 0, e_in = 0, visits = 0;

    auto link_stats = [&](std::uint32_t w, std::uint64_t& links, std::uint64_t& loops) {
        links = loops = 0;
        for (std::size_t k = ctx.off[w]; k < ctx.off[w + 1]; ++k) {
            const auto& a = ctx.arcs[k];
            if (a.to == w)
                loops += a.mult;
            else if (in_sub[a.to])
                links += a.mult;
        }
    };

    std::function<void(const std::vector<std::uint32_t>&, std::uint32_t)> extend =
        [&](const std::vector<std::uint32_t>& ext, std::uint32_t root) {
            if (++visits > visit_cap)
                throw BudgetExceeded("exact enumeration visit cap exceeded");
            sink(sub, d, d - 2 * e_in);
            for (std::size_t i = 0; i < ext.size(); ++i) {
                std::uint32_t w = ext[i];
                if (2 * (d + ctx.deg[w]) > ctx.two_e) continue; // prune subtree
                std::uint64_t links = 0, loops = 0;
                link_stats(w, links, loops);

                std::vector<std::uint32_t> next(ext.begin() + static_cast<long>(i) + 1,
                                                ext.end());
                std::vector<std::uint32_t> added;
                for (std::size_t k = ctx.off[w]; k < ctx.off[w + 1]; ++k) {
                    std::uint32_t u = ctx.arcs[k].to;
                    if (u > root && !blocked[u] && !in_sub[u]) {
                        blocked[u] = 1;
                        added.push_back(u);
                        next.push_back(u);
                    }
                }
                in_sub[w] = 1;
                sub.push_back(w);
                d += ctx.deg[w];
                e_in += links + loops;
                extend(next, root);
                e_in -= links + loops;
                d -= ctx.deg[w];
                sub.pop_back();
                in_sub[w] = 0;
                for (std::uint32_t u : added) blocked[u] = 0;
            }
        };

    for (std::uint32_t root = 0; root < m; ++root) {
        if (2 * ctx.deg[root] > ctx.two_e) continue; // no qualifying superset either
        std::uint64_t links = 0, loops = 0;
        link_stats(root, links, loops);
        in_sub[root] = 1;
        blocked[root] = 1;
        sub.assign(1, root);
        d = ctx.deg[root];
        e_in = loops;
        std::vector<std::uint32_t> ext;
        for (std::size_t k = ctx.off[root]; k < ctx.off[root + 1]; ++k) {
            std::uint32_t u = ctx.arcs[k].to;
            if (u > root && !blocked[u]) {
                blocked[u] = 1;
                ext.push_back(u);
            }
        }
        extend(ext, root);
        for (std::uint32_t u : ext) blocked[u] = 0;
        blocked[root] = 0;
        in_sub[root] = 0;
        sub.clear();
        d = e_in = 0;
    }
}

std::vector<Vertex> to_global(const Ctx& ctx, std::vector<std::uint32_t> local) {
    std::sort(local.begin(), local.end());
    std::vector<Vertex> out;
    out.reserve(local.size());
    for (auto i : local) out.push_back(ctx.verts[i]);
    return out;
}

// ---- heuristic candidate machinery ------------------------------------------

struct CandidateSet {
    std::vector<std::uint32_t> members; // local ids, sorted
    std::uint64_t d = 0;
    std::uint64_t e_out = 0;
    PhiFrac frac;
    std::string family;
};

// Stats of an arbitrary local vertex set, O(sum deg).
void local_stats(const Ctx& ctx, const std::vector<std::uint32_t>& members,
                 std::vector<char>& scratch, std::uint64_t& d, std::uint64_t& e_out) {
    for (auto v : members) scratch[v] = 1;
    d = e_out = 0;
    for (auto v : members) {
        d += ctx.deg[v];
        for (std::size_t k = ctx.off[v]; k < ctx.off[v + 1]; ++k) {
            const auto& a = ctx.arcs[k];
            if (a.to != v && !scratch[a.to]) e_out += a.mult;
        }
    }
    for (auto v : members) scratch[v] = 0;
}

// Connected pieces of a local vertex set.
std::vector<std::vector<std::uint32_t>> split_pieces(const Ctx& ctx,
                                                     const std::vector<std::uint32_t>& members) {
    std::vector<char> in(ctx.size(), 0), seen(ctx.size(), 0);
    for (auto v : members) in[v] = 1;
    std::vector<std::vector<std::uint32_t>> pieces;
    for (auto v : members) {
        if (seen[v]) continue;
        std::vector<std::uint32_t> piece{v};
        seen[v] = 1;
        for (std::size_t head = 0; head < piece.size(); ++head) {
            std::uint32_t u = piece[head];
            for (std::size_t k = ctx.off[u]; k < ctx.off[u + 1]; ++k) {
                std::uint32_t t = ctx.arcs[k].to;
                if (t != u && in[t] && !seen[t]) {
                    seen[t] = 1;
                    piece.push_back(t);
                }
            }
        }
        std::sort(piece.begin(), piece.end());
        pieces.push_back(std::move(piece));
    }
    return pieces;
}

class CandidatePool {
  public:
    CandidatePool(const Ctx& ctx, unsigned scales)
        : ctx_(ctx), scratch_(ctx.size(), 0), per_scale_(scales + 1) {}

    // members need not qualify; non-qualifying or improper sets are dropped.
    void feed(std::vector<std::uint32_t> members, const char* family) {
        if (members.empty() || members.size() >= ctx_.size()) return;
        std::uint64_t d = 0, e_out = 0;
        local_stats(ctx_, members, scratch_, d, e_out);
        if (2 * d > ctx_.two_e) return;
        PhiFrac f = PhiFrac::of(ctx_.two_e, d, e_out);
        std::sort(members.begin(), members.end());
        CandidateSet cand{std::move(members), d, e_out, f, family};
        if (best_.frac.empty() || f < best_.frac) best_ = cand;
        for (unsigned j = 1; j < per_scale_.size(); ++j) {
            if (!in_scale(ctx_.two_e, d, j)) continue;
            if (per_scale_[j].frac.empty() || f < per_scale_[j].frac) per_scale_[j] = cand;
        }
    }

    const CandidateSet& best() const { return best_; }
    const CandidateSet& scale_best(unsigned j) const { return per_scale_[j]; }

  private:
    const Ctx& ctx_;
    std::vector<char> scratch_;
    CandidateSet best_;
    std::vector<CandidateSet> per_scale_;
};

// Raw incremental prefix sweep along `order`; reports the best prefix length
// per scale and globally (by raw Phi, connectivity not yet enforced).
struct SweepResult {
    std::size_t best_len = 0;
    PhiFrac best_frac;
    std::vector<std::size_t> scale_len; // 0 = none
    std::vector<PhiFrac> scale_frac;
};

SweepResult sweep_prefixes(const Ctx& ctx, const std::vector<std::uint32_t>& order,
                           unsigned scales) {
    SweepResult res;
    res.scale_len.assign(scales + 1, 0);
    res.scale_frac.assign(scales + 1, PhiFrac{});
    std::vector<char> in(ctx.size(), 0);
    std::uint64_t d = 0, e_in = 0;
    for (std::size_t len = 1; len < order.size(); ++len) {
        std::uint32_t w = order[len - 1];
        for (std::size_t k = ctx.off[w]; k < ctx.off[w + 1]; ++k) {
            const auto& a = ctx.arcs[k];
            if (a.to == w)
                e_in += a.mult;
            else if (in[a.to])
                e_in += a.mult;
        }
        in[w] = 1;
        d += ctx.deg[w];
        if (2 * d > ctx.two_e) break; // prefixes only grow
        PhiFrac f = PhiFrac::of(ctx.two_e, d, d - 2 * e_in);
        if (res.best_frac.empty() || f < res.best_frac) {
            res.best_frac = f;
            res.best_len = len;
        }
        for (unsigned j = 1; j <= scales; ++j) {
            if (!in_scale(ctx.two_e, d, j)) continue;
            if (res.scale_frac[j].empty() || f < res.scale_frac[j]) {
                res.scale_frac[j] = f;
                res.scale_len[j] = len;
            }
        }
    }
    return res;
}

std::vector<std::uint32_t> bfs_order(const Ctx& ctx, std::uint32_t root) {
    std::vector<char> seen(ctx.size(), 0);
    std::vector<std::uint32_t> order{root};
    seen[root] = 1;
    for (std::size_t head = 0; head < order.size(); ++head) {
        std::uint32_t u = order[head];
        for (std::size_t k = ctx.off[u]; k < ctx.off[u + 1]; ++k) {
            std::uint32_t t = ctx.arcs[k].to;
            if (!seen[t]) {
                seen[t] = 1;
                order.push_back(t);
            }
        }
    }
    return order;
}

// Approximate second eigenvector of the lazy walk operator by power iteration
// with the top eigenvector (constant function) deflated in the pi inner
// product. Deterministic start from the seed; 500 iterations or residual
// below 1e-8.
std::vector<double> lazy_second_eigenvector(const Ctx& ctx, RngSeed seed) {
    const std::size_t m = ctx.size();
    std::vector<double> pi(m);
    for (std::size_t i = 0; i < m; ++i)
        pi[i] = static_cast<double>(ctx.deg[i]) / static_cast<double>(ctx.two_e);

    Rng rng(seed.derived("eig"));
    std::vector<double> f(m), g(m);
    for (double& x : f) x = 2.0 * rng.next_double() - 1.0;

    auto deflate_normalize = [&](std::vector<double>& v) {
        double proj = 0.0;
        for (std::size_t i = 0; i < m; ++i) proj += pi[i] * v[i];
        for (double& x : v) x -= proj;
        double norm = 0.0;
        for (double x : v) norm += x * x;
        norm = std::sqrt(norm);
        if (norm < 1e-300) return false;
        for (double& x : v) x /= norm;
        return true;
    };
    if (!deflate_normalize(f)) f[0] = 1.0;

    for (int iter = 0; iter < 500; ++iter) {
        for (std::size_t i = 0; i < m; ++i) {
            double acc = 0.0;
            const double inv_deg = 1.0 / static_cast<double>(ctx.deg[i]);
            for (std::size_t k = ctx.off[i]; k < ctx.off[i + 1]; ++k) {
                const auto& a = ctx.arcs[k];
                double slots = a.to == i ? 2.0 * a.mult : 1.0 * a.mult;
                acc += slots * inv_deg * f[a.to];
            }
            g[i] = 0.5 * f[i] + 0.5 * acc;
        }
        if (!deflate_normalize(g)) break;
        double align = 0.0;
        for (std::size_t i = 0; i < m; ++i) align += f[i] * g[i];
        double sign = align < 0 ? -1.0 : 1.0;
        double diff = 0.0;
        for (std::size_t i = 0; i < m; ++i) diff = std::max(diff, std::abs(sign * g[i] - f[i]));
        f.swap(g);
        if (diff < 1e-8) break;
    }
    return f;
}

CandidatePool collect_heuristic_candidates(const Ctx& ctx, const DecompositionReport& report,
                                           RngSeed seed, unsigned scales) {
    CandidatePool pool(ctx, scales);
    const auto m = static_cast<std::uint32_t>(ctx.size());
    Rng rng(seed.derived("cond-heur"));

    auto local_id = [&](Vertex v) -> std::uint32_t {
        return v < ctx.local_of.size() ? ctx.local_of[v] : kOutside;
    };

    // singletons (cover the deepest scales exactly)
    {
        PhiFrac best;
        std::uint32_t best_v = 0;
        std::vector<PhiFrac> sbest(scales + 1);
        std::vector<std::uint32_t> sv(scales + 1, kOutside);
        for (std::uint32_t v = 0; v < m; ++v) {
            std::uint64_t loops = 0;
            for (std::size_t k = ctx.off[v]; k < ctx.off[v + 1]; ++k)
                if (ctx.arcs[k].to == v) loops += ctx.arcs[k].mult;
            std::uint64_t d = ctx.deg[v];
            if (2 * d > ctx.two_e) continue;
            PhiFrac f = PhiFrac::of(ctx.two_e, d, d - 2 * loops);
            if (best.empty() || f < best) {
                best = f;
                best_v = v;
            }
            for (unsigned j = 1; j <= scales; ++j)
                if (in_scale(ctx.two_e, d, j) && (sbest[j].empty() || f < sbest[j])) {
                    sbest[j] = f;
                    sv[j] = v;
                }
        }
        if (!best.empty()) pool.feed({best_v}, "bfs");
        for (unsigned j = 1; j <= scales; ++j)
            if (sv[j] != kOutside) pool.feed({sv[j]}, "bfs");
    }

    // (c) degree-2 path segments: interiors, interior halves, and the two
    // graph sides of the midpoint cut
    {
        std::size_t taken = 0;
        for (const Degree2Path& p : report.path_census.paths) {
            if (taken >= 8) break;
            if (p.interior.empty()) continue;
            ++taken;
            std::vector<std::uint32_t> interior;
            bool ok = true;
            for (Vertex v : p.interior) {
                std::uint32_t lid = local_id(v);
                if (lid == kOutside) {
                    ok = false;
                    break;
                }
                interior.push_back(lid);
            }
            if (!ok) continue;
            pool.feed(interior, "path");
            std::size_t half = interior.size() / 2;
            if (half > 0) {
                pool.feed({interior.begin(), interior.begin() + static_cast<long>(half)}, "path");
                pool.feed({interior.begin() + static_cast<long>(half), interior.end()}, "path");
            }
            // midpoint cut: remove the edge after the centre, keep each side
            std::size_t c = (interior.size() - 1) / 2;
            std::uint32_t cut_a = interior[c];
            std::uint32_t cut_b = c + 1 < interior.size() ? interior[c + 1]
                                                          : local_id(p.endpoint_b);
            if (cut_b == kOutside) continue;
            auto side_from = [&](std::uint32_t start) {
                std::vector<char> seen(ctx.size(), 0);
                std::vector<std::uint32_t> side{start};
                seen[start] = 1;
                for (std::size_t head = 0; head < side.size(); ++head) {
                    std::uint32_t u = side[head];
                    for (std::size_t k = ctx.off[u]; k < ctx.off[u + 1]; ++k) {
                        std::uint32_t t = ctx.arcs[k].to;
                        if ((u == cut_a && t == cut_b) || (u == cut_b && t == cut_a)) continue;
                        if (!seen[t]) {
                            seen[t] = 1;
                            side.push_back(t);
                        }
                    }
                }
                return side;
            };
            pool.feed(side_from(cut_a), "path");
            pool.feed(side_from(cut_b), "path");
        }
    }


    // (a) BFS prefix sweeps from sampled roots, min-degree vertex and path
    // midpoints
    {
        std::vector<std::uint32_t> roots;
        std::uint32_t mindeg_v = 0;
        for (std::uint32_t v = 1; v < m; ++v)
            if (ctx.deg[v] < ctx.deg[mindeg_v]) mindeg_v = v;
        roots.push_back(mindeg_v);
        std::size_t path_roots = 0;
        for (const Degree2Path& p : report.path_census.paths) {
            if (path_roots >= 8 || p.interior.empty()) break;
            std::uint32_t mid = local_id(p.midpoint());
            if (mid != kOutside) {
                roots.push_back(mid);
                ++path_roots;
            }
        }
        for (int s = 0; s < 16 && roots.size() < 24; ++s)
            roots.push_back(static_cast<std::uint32_t>(rng.next_below(m)));
        std::sort(roots.begin(), roots.end());
        roots.erase(std::unique(roots.begin(), roots.end()), roots.end());

        for (std::uint32_t root : roots) {
            std::vector<std::uint32_t> order = bfs_order(ctx, root);
            SweepResult res = sweep_prefixes(ctx, order, scales);
            auto feed_prefix = [&](std::size_t len) {
                if (len == 0) return;
                pool.feed({order.begin(), order.begin() + static_cast<long>(len)}, "bfs");
            };
            feed_prefix(res.best_len);
            for (unsigned j = 1; j <= scales; ++j) feed_prefix(res.scale_len[j]);
        }
    }

    // (b) eigenvector sweep, both directions, pieces of the best prefixes
    {
        std::vector<double> f = lazy_second_eigenvector(ctx, seed);
        std::vector<std::uint32_t> order(m);
        for (std::uint32_t i = 0; i < m; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
            return f[a] != f[b] ? f[a] < f[b] : a < b;
        });
        for (int dir = 0; dir < 2; ++dir) {
            SweepResult res = sweep_prefixes(ctx, order, scales);
            auto feed_pieces = [&](std::size_t len) {
                if (len == 0) return;
                std::vector<std::uint32_t> prefix(order.begin(),
                                                  order.begin() + static_cast<long>(len));
                for (auto& piece : split_pieces(ctx, prefix))
                    pool.feed(std::move(piece), "eig");
            };
            feed_pieces(res.best_len);
            for (unsigned j = 1; j <= scales; ++j) feed_pieces(res.scale_len[j]);
            std::reverse(order.begin(), order.end());
        }
    }    return pool;
}

void verify_witness(const Ctx& ctx, const std::vector<Vertex>& witness, unsigned j, double phi) {
    VertexSet set(ctx.g->vertex_count(), witness);
    VertexSubset stats = subset_stats(*ctx.g, set);
    if (!in_scale(ctx.two_e, stats.total_degree, j))
        throw GraphError("profile witness fails its scale predicate on recheck");
    PhiFrac f = PhiFrac::of(ctx.two_e, stats.total_degree, stats.e_out);
    if (std::abs(f.value() - phi) > 1e-9 * std::max(1.0, phi))
        throw GraphError("profile witness value mismatch on recheck");
    // connectivity
    std::vector<std::uint32_t> local;
    for (Vertex v : witness) local.push_back(ctx.local_of[v]);
    if (split_pieces(ctx, local).size() != 1)
        throw GraphError("profile witness is not connected on recheck");
}

} // namespace

double q_of(const Graph& g, const std::vector<Vertex>& component, const VertexSet& s) {
    Ctx ctx = make_ctx(g, component);
    VertexSubset st = subset_stats(g, s);
    return static_cast<double>(st.e_out) / static_cast<double>(ctx.two_e);
}

Rational q_of_exact(const Graph& g, const std::vector<Vertex>& component, const VertexSet& s) {
    Ctx ctx = make_ctx(g, component);
    VertexSubset st = subset_stats(g, s);
    return Rational(static_cast<std::int64_t>(st.e_out), static_cast<std::int64_t>(ctx.two_e));
}

PhiReport phi_of(const Graph& g, const std::vector<Vertex>& component, const VertexSet& s) {
    Ctx ctx = make_ctx(g, component);
    VertexSubset st = subset_stats(g, s);
    if (st.total_degree == 0 || st.total_degree == ctx.two_e)
        throw GraphError("phi_of: pi(S) must lie strictly between 0 and 1");
    double phi = PhiFrac::of(ctx.two_e, st.total_degree, st.e_out).value();
    double surrogate = static_cast<double>(st.e_out) /
                       static_cast<double>(2 * st.e_in + st.e_out);
    return {phi, surrogate};
}

Rational phi_of_exact(const Graph& g, const std::vector<Vertex>& component, const VertexSet& s) {
    Ctx ctx = make_ctx(g, component);
    VertexSubset st = subset_stats(g, s);
    if (st.total_degree == 0 || st.total_degree == ctx.two_e)
        throw GraphError("phi_of: pi(S) must lie strictly between 0 and 1");
    return Rational(static_cast<std::int64_t>(st.e_out) * static_cast<std::int64_t>(ctx.two_e),
                    static_cast<std::int64_t>(st.total_degree) *
                        static_cast<std::int64_t>(ctx.two_e - st.total_degree));
}

MinConductance exact_min_conductance(const Graph& g, const std::vector<Vertex>& component,
                                     std::size_t size_budget) {
    Ctx ctx = make_ctx(g, component);
    if (ctx.size() > size_budget)
        throw BudgetExceeded("exact_min_conductance: component has " +
                             std::to_string(ctx.size()) + " vertices, budget is " +
                             std::to_string(size_budget) +
                             "; use heuristic_min_conductance");
    PhiFrac best;
    std::vector<std::uint32_t> witness;
    enumerate_connected(ctx, 200'000'000ULL,
                        [&](const std::vector<std::uint32_t>& sub, std::uint64_t d,
                            std::uint64_t e_out) {
                            PhiFrac f = PhiFrac::of(ctx.two_e, d, e_out);
                            if (best.empty() || f < best) {
                                best = f;
                                witness = sub;
                                std::sort(witness.begin(), witness.end());
                            } else if (f == best) {
                                std::vector<std::uint32_t> cand = sub;
                                std::sort(cand.begin(), cand.end());
                                if (cand < witness) witness = cand;
                            }
                        });
    if (best.empty())
        throw GraphError("exact_min_conductance: no connected subset with 0 < pi <= 1/2");
    return {best.value(), to_global(ctx, witness), "exact"};
}

MinConductance heuristic_min_conductance(const Graph& g, const std::vector<Vertex>& component,
                                         const DecompositionReport& report, RngSeed seed) {
    Ctx ctx = make_ctx(g, component);
    unsigned scales = scale_count(ctx.two_e, min_degree(ctx));
    CandidatePool pool = collect_heuristic_candidates(ctx, report, seed, scales);
    const CandidateSet& best = pool.best();
    if (best.frac.empty())
        throw GraphError("heuristic_min_conductance: no qualifying candidate found");
    return {best.frac.value(), to_global(ctx, best.members), best.family};
}

double ConductanceProfile::phi_global() const {
    double m = std::numeric_limits<double>::infinity();
    for (const ProfileScale& s : scales) m = std::min(m, s.phi);
    return m;
}

ConductanceProfile conductance_profile(const Graph& g, const std::vector<Vertex>& component,
                                       const DecompositionReport& report,
                                       std::size_t exact_budget, RngSeed seed) {
    Ctx ctx = make_ctx(g, component);
    const unsigned scales = scale_count(ctx.two_e, min_degree(ctx));
    ConductanceProfile profile;
    profile.pi_min =
        static_cast<double>(min_degree(ctx)) / static_cast<double>(ctx.two_e);

    std::vector<PhiFrac> best(scales + 1);
    std::vector<std::vector<Vertex>> witness(scales + 1);
    bool exact = ctx.size() <= exact_budget;

    if (exact) {
        enumerate_connected(ctx, 200'000'000ULL,
                            [&](const std::vector<std::uint32_t>& sub, std::uint64_t d,
                                std::uint64_t e_out) {
                                PhiFrac f = PhiFrac::of(ctx.two_e, d, e_out);
                                for (unsigned j = 1; j <= scales; ++j) {
                                    if (!in_scale(ctx.two_e, d, j)) continue;
                                    if (best[j].empty() || f < best[j]) {
                                        best[j] = f;
                                        witness[j] = to_global(ctx, sub);
                                    }
                                }
                            });
    } else {
        CandidatePool pool = collect_heuristic_candidates(ctx, report, seed, scales);
        for (unsigned j = 1; j <= scales; ++j) {
            const CandidateSet& c = pool.scale_best(j);
            if (!c.frac.empty()) {
                best[j] = c.frac;
                witness[j] = to_global(ctx, c.members);
            }
        }
    }

    for (unsigned j = 1; j <= scales; ++j) {
        ProfileScale s;
        s.j = j;
        s.pi_low = std::ldexp(1.0, -static_cast<int>(j) - 1);
        s.pi_high = std::ldexp(1.0, -static_cast<int>(j));
        if (best[j].empty()) {
            s.phi = 1.0;
            s.method = "default-1";
        } else {
            s.phi = best[j].value();
            s.method = exact ? "exact" : "heuristic";
            s.witness = witness[j];
            verify_witness(ctx, s.witness, j, s.phi);
        }
        profile.scales.push_back(std::move(s));
    }
    return profile;
}

double bound_lower(const Graph& g, const std::vector<Vertex>& component,
                   const std::vector<std::vector<Vertex>>& candidates) {
    if (candidates.empty()) throw GraphError("bound_lower: empty candidate list");
    Ctx ctx = make_ctx(g, component);
    double best = 0.0;
    for (const auto& cand : candidates) {
        if (cand.empty()) throw GraphError("bound_lower: empty candidate set");
        VertexSet set(g.vertex_count(), cand);
        VertexSubset st = subset_stats(g, set);
        if (2 * st.total_degree > ctx.two_e)
            throw GraphError("bound_lower: candidate has pi(S) > 1/2");
        if (st.e_out == 0) throw GraphError("bound_lower: candidate with no outgoing edges");
        best = std::max(best,
                        static_cast<double>(st.total_degree) / (10.0 * static_cast<double>(st.e_out)));
    }
    return best;
}

double bound_jerrum_sinclair(double phi, double pi_min, double C) {
    if (!(phi > 0.0)) throw GraphError("bound_jerrum_sinclair: Phi must be positive");
    return C / (phi * phi) * std::log(1.0 / pi_min);
}

DyadicBound bound_dyadic_sum(const ConductanceProfile& profile, double C) {
    if (profile.scales.empty()) throw GraphError("bound_dyadic_sum: empty profile");
    for (std::size_t i = 0; i < profile.scales.size(); ++i)
        if (profile.scales[i].j != i + 1)
            throw GraphError("bound_dyadic_sum: profile is missing scales");
    double sum = 0.0;
    for (const ProfileScale& s : profile.scales) sum += 1.0 / (s.phi * s.phi);

    // trapezoid of 1/(x Phi^2(x)) on the dyadic grid x_j = 2^-j
    double integral = 0.0;
    for (std::size_t i = 0; i + 1 < profile.scales.size(); ++i) {
        double x0 = profile.scales[i].pi_high;     // 2^-j
        double x1 = profile.scales[i + 1].pi_high; // 2^-(j+1)
        double g0 = 1.0 / (x0 * profile.scales[i].phi * profile.scales[i].phi);
        double g1 = 1.0 / (x1 * profile.scales[i + 1].phi * profile.scales[i + 1].phi);
        integral += (x0 - x1) * 0.5 * (g0 + g1);
    }
    return {C * sum, C * integral};
}

double talagrand_tail(double expectation, double t, double gamma) {
    if (!(t > 0.0)) throw GraphError("talagrand_tail: t must be positive");
    if (!(gamma > 0.0)) throw GraphError("talagrand_tail: gamma must be positive");
    if (!(expectation >= 0.0)) throw GraphError("talagrand_tail: expectation must be >= 0");
    return 4.0 * std::exp(-gamma * t * t / (expectation + t));
}

std::string conductance_report_json(const ConductanceProfile& profile,
                                    const MinConductance& best, double bound_js,
                                    const DyadicBound& dyadic, double C,
                                    const std::string& config_json) {
    nlohmann::json j;
    if (!config_json.empty()) j["config"] = nlohmann::json::parse(config_json);
    j["pi_min"] = profile.pi_min;
    j["phi_global"] = profile.phi_global();
    j["min_conductance"] = {{"phi", best.phi},
                            {"witness_size", best.witness.size()},
                            {"witness", best.witness},
                            {"method", best.method}};
    auto scales = nlohmann::json::array();
    for (const ProfileScale& s : profile.scales)
        scales.push_back({{"j", s.j},
                          {"pi_low", s.pi_low},
                          {"pi_high", s.pi_high},
                          {"phi", s.phi},
                          {"method", s.method},
                          {"witness_size", s.witness.size()}});
    j["scales"] = scales;
    j["bounds"] = {{"jerrum_sinclair", bound_js},
                   {"dyadic_sum", dyadic.sum},
                   {"dyadic_integral_surrogate", dyadic.integral},
                   {"constant_note", "assuming C=" + std::to_string(C) +
                                         "; bounds scale linearly in C"}};
    return j.dump(2);
}

} // namespace mixlab
