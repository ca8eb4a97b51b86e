#include "mixlab/walk.hpp"

#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

namespace mixlab {

namespace {

constexpr std::uint32_t kOutside = UINT32_MAX;

// Component-local CSR of the transition kernel (laziness applied at use).
struct ChainView {
    const Graph* g = nullptr;
    std::vector<Vertex> verts;
    std::vector<std::uint32_t> local_of;
    std::vector<std::size_t> off;
    struct Arc {
        std::uint32_t to;
        double w; // p_{i,j} without laziness
    };
    std::vector<Arc> arcs;
    std::vector<double> pi;
    std::uint64_t two_e_star = 0;

    std::size_t size() const { return verts.size(); }
};

ChainView make_view(const Graph& g, const std::vector<Vertex>& component) {
    if (component.empty()) throw WalkError("walk: empty component");
    ChainView cv;
    cv.g = &g;
    cv.verts = component;
    std::sort(cv.verts.begin(), cv.verts.end());
    cv.local_of.assign(g.vertex_count(), kOutside);
    for (std::uint32_t i = 0; i < cv.verts.size(); ++i) cv.local_of[cv.verts[i]] = i;

    cv.off.assign(cv.verts.size() + 1, 0);
    std::uint64_t degree_sum = 0;
    for (std::uint32_t i = 0; i < cv.verts.size(); ++i) {
        Vertex v = cv.verts[i];
        if (g.degree(v) == 0)
            throw WalkError("walk: vertex " + std::to_string(v) + " is isolated");
        degree_sum += g.degree(v);
        cv.off[i + 1] = cv.off[i] + g.neighbors(v).size();
    }
    cv.two_e_star = degree_sum;

    cv.arcs.resize(cv.off.back());
    for (std::uint32_t i = 0; i < cv.verts.size(); ++i) {
        Vertex v = cv.verts[i];
        double inv_deg = 1.0 / static_cast<double>(g.degree(v));
        std::size_t k = cv.off[i];
        for (const Neighbor& nb : g.neighbors(v)) {
            std::uint32_t j = cv.local_of[nb.to];
            if (j == kOutside)
                throw WalkError("walk: the given set is not closed under adjacency");
            double slots = nb.to == v ? 2.0 * nb.multiplicity : 1.0 * nb.multiplicity;
            cv.arcs[k++] = {j, slots * inv_deg};
        }
    }

    // connectivity
    std::vector<bool> seen(cv.size(), false);
    std::vector<std::uint32_t> queue{0};
    seen[0] = true;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        std::uint32_t i = queue[head];
        for (std::size_t k = cv.off[i]; k < cv.off[i + 1]; ++k) {
            if (!seen[cv.arcs[k].to]) {
                seen[cv.arcs[k].to] = true;
                queue.push_back(cv.arcs[k].to);
            }
        }
    }
    if (queue.size() != cv.size()) throw WalkError("walk: component is not connected");

    cv.pi.resize(cv.size());
    for (std::uint32_t i = 0; i < cv.verts.size(); ++i)
        cv.pi[i] = static_cast<double>(g.degree(cv.verts[i])) / static_cast<double>(cv.two_e_star);
    return cv;
}

void apply_kernel(const ChainView& cv, double laziness, const std::vector<double>& x,
                  std::vector<double>& y) {
    y.assign(x.size(), 0.0);
    const double move = 1.0 - laziness;
    for (std::uint32_t i = 0; i < x.size(); ++i) {
        const double xi = x[i];
        if (xi == 0.0) continue;
        if (laziness != 0.0) y[i] += laziness * xi;
        const double share = move * xi;
        for (std::size_t k = cv.off[i]; k < cv.off[i + 1]; ++k) y[cv.arcs[k].to] += share * cv.arcs[k].w;
    }
}

double tv_against_pi(const ChainView& cv, const std::vector<double>& x) {
    double s = 0.0;
    for (std::uint32_t i = 0; i < x.size(); ++i) s += std::abs(x[i] - cv.pi[i]);
    return 0.5 * s;
}

// One evolving distribution with a step budget and a mass sanity check.
struct Evolver {
    const ChainView& cv;
    double laziness;
    std::uint64_t budget;
    std::uint64_t used = 0;
    std::vector<double> scratch;

    Evolver(const ChainView& cv_, double laz, std::uint64_t budget_)
        : cv(cv_), laziness(laz), budget(budget_) {}

    void advance(std::vector<double>& x, std::uint64_t steps) {
        for (std::uint64_t s = 0; s < steps; ++s) {
            if (++used > budget)
                throw BudgetExceeded("walk: step budget of " + std::to_string(budget) +
                                     " sparse passes exceeded");
            apply_kernel(cv, laziness, x, scratch);
            x.swap(scratch);
            if ((used & 63) == 0) {
                double mass = 0.0;
                for (double m : x) mass += m;
                if (std::abs(mass - 1.0) > 1e-9)
                    throw WalkError("walk: mass drifted beyond 1e-9");
                double inv = 1.0 / mass;
                for (double& m : x) m *= inv;
            }
        }
    }
};

std::vector<Vertex> resolve_starts(const ChainView& cv, const WalkConfig& cfg) {
    switch (cfg.start_policy) {
        case StartPolicy::AllVertices:
            return cv.verts;
        case StartPolicy::Designated: {
            if (cfg.starts.empty()) throw WalkError("walk: designated start list is empty");
            for (Vertex v : cfg.starts)
                if (v >= cv.local_of.size() || cv.local_of[v] == kOutside)
                    throw WalkError("walk: start " + std::to_string(v) +
                                    " is outside the component");
            return cfg.starts;
        }
        case StartPolicy::Sampled: {
            if (cfg.sample_count >= cv.size()) return cv.verts;
            Rng rng(cfg.seed.derived("walk-starts"));
            std::vector<Vertex> picked;
            VertexSet chosen(cv.local_of.size());
            while (picked.size() < cfg.sample_count) {
                Vertex v = cv.verts[rng.next_below(cv.size())];
                if (!chosen.contains(v)) {
                    chosen.insert(v);
                    picked.push_back(v);
                }
            }
            return picked;
        }
    }
    throw WalkError("walk: bad start policy");
}

// Per-start searches run independently; results land in indexed slots so the
// reduction is order-independent.
template <typename PerStart>
std::vector<StartRecord> run_starts(const std::vector<Vertex>& starts, unsigned workers,
                                    PerStart&& per_start) {
    std::vector<StartRecord> records(starts.size());
    if (workers <= 1 || starts.size() <= 1) {
        for (std::size_t i = 0; i < starts.size(); ++i) records[i] = per_start(starts[i]);
        return records;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        while (true) {
            std::size_t i = next.fetch_add(1);
            if (i >= starts.size()) return;
            try {
                records[i] = per_start(starts[i]);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    unsigned count = std::min<unsigned>(workers, static_cast<unsigned>(starts.size()));
    pool.reserve(count);
    for (unsigned w = 0; w < count; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
    return records;
}

MixingResult reduce_records(std::vector<StartRecord> records) {
    MixingResult out;
    out.t = 0;
    out.worst_start = records.front().start;
    for (const StartRecord& r : records) {
        if (r.t > out.t || (r.t == out.t && r.start < out.worst_start)) {
            out.t = r.t;
            out.worst_start = r.start;
        }
    }
    out.per_start = std::move(records);
    return out;
}

void validate_config(const WalkConfig& cfg, std::size_t component_size) {
    if (!(cfg.laziness >= 0.0 && cfg.laziness < 1.0))
        throw WalkError("walk: laziness must lie in [0,1)");
    if (!(cfg.epsilon > 0.0 && cfg.epsilon < 1.0))
        throw WalkError("walk: epsilon must lie in (0,1)");
    if (component_size > cfg.max_vertices)
        throw BudgetExceeded("walk: component has " + std::to_string(component_size) +
                             " vertices, above the exact powering budget of " +
                             std::to_string(cfg.max_vertices));
}

struct SearchOut {
    std::uint64_t t;
    double final_tv;
};

SearchOut search_mixing(const ChainView& cv, const WalkConfig& cfg, std::vector<double> x) {
    Evolver ev(cv, cfg.laziness, cfg.max_steps);
    double d_here = tv_against_pi(cv, x);
    if (d_here < cfg.epsilon) return {0, d_here};

    // Double until below epsilon; keep the last at-or-above snapshot.
    std::vector<double> base = x; // distribution at t = t_lo
    std::uint64_t t_lo = 0;
    std::uint64_t t_hi = 1;
    double last_checked = d_here;
    ev.advance(x, 1);
    d_here = tv_against_pi(cv, x);
    while (d_here >= cfg.epsilon) {
        if (d_here > last_checked + 1e-12)
            throw WalkError("mixing_time: d_TV increased along the evolution");
        last_checked = d_here;
        base = x;
        t_lo = t_hi;
        ev.advance(x, t_hi); // to 2*t_hi
        t_hi *= 2;
        d_here = tv_against_pi(cv, x);
    }
    // Invariant: tv at t_lo >= eps > tv at t_hi; answer in (t_lo, t_hi].
    std::vector<double> probe;
    while (t_hi - t_lo > 1) {
        std::uint64_t mid = t_lo + (t_hi - t_lo) / 2;
        probe = base;
        ev.advance(probe, mid - t_lo);
        if (tv_against_pi(cv, probe) < cfg.epsilon) {
            t_hi = mid;
        } else {
            t_lo = mid;
            base.swap(probe);
        }
    }
    probe = base;
    ev.advance(probe, t_hi - t_lo);
    return {t_hi, tv_against_pi(cv, probe)};
}

SearchOut search_cesaro(const ChainView& cv, const WalkConfig& cfg, std::vector<double> x) {
    Evolver ev(cv, cfg.laziness, cfg.max_steps);
    std::vector<double> sum = x;
    std::uint64_t t = 1;
    while (true) {
        double d = 0.0;
        const double inv_t = 1.0 / static_cast<double>(t);
        for (std::uint32_t i = 0; i < sum.size(); ++i) d += std::abs(sum[i] * inv_t - cv.pi[i]);
        d *= 0.5;
        if (d < cfg.epsilon) return {t, d};
        ev.advance(x, 1);
        for (std::uint32_t i = 0; i < sum.size(); ++i) sum[i] += x[i];
        ++t;
    }
}

std::vector<double> aligned_mass(const ChainView& cv, const Distribution& x0) {
    if (x0.support != cv.verts)
        throw WalkError("walk: initial distribution support does not match the component");
    double mass = 0.0;
    for (double m : x0.mass) {
        if (m < 0.0) throw WalkError("walk: negative mass in initial distribution");
        mass += m;
    }
    if (std::abs(mass - 1.0) > 1e-9)
        throw WalkError("walk: initial distribution mass is not 1");
    return x0.mass;
}

} // namespace

Distribution Distribution::point_mass(const std::vector<Vertex>& support, Vertex at) {
    Distribution d;
    d.support = support;
    std::sort(d.support.begin(), d.support.end());
    d.mass.assign(d.support.size(), 0.0);
    auto it = std::lower_bound(d.support.begin(), d.support.end(), at);
    if (it == d.support.end() || *it != at)
        throw WalkError("point_mass: vertex not in support");
    d.mass[static_cast<std::size_t>(it - d.support.begin())] = 1.0;
    return d;
}

Distribution stationary(const Graph& g, const std::vector<Vertex>& component) {
    ChainView cv = make_view(g, component);
    Distribution d;
    d.support = cv.verts;
    d.mass = cv.pi;
    return d;
}

std::vector<Rational> stationary_exact(const Graph& g, const std::vector<Vertex>& component) {
    ChainView cv = make_view(g, component);
    std::vector<Rational> pi;
    pi.reserve(cv.size());
    for (Vertex v : cv.verts)
        pi.emplace_back(static_cast<std::int64_t>(g.degree(v)),
                        static_cast<std::int64_t>(cv.two_e_star));
    return pi;
}

Distribution step(const Graph& g, const Distribution& x, double laziness) {
    if (!(laziness >= 0.0 && laziness < 1.0)) throw WalkError("step: laziness must lie in [0,1)");
    ChainView cv = make_view(g, x.support);
    if (x.mass.size() != x.support.size()) throw WalkError("step: malformed distribution");
    Distribution y;
    y.support = cv.verts;
    apply_kernel(cv, laziness, x.mass, y.mass);
    return y;
}

double tv_distance(const Distribution& a, const Distribution& b) {
    if (a.support != b.support) throw WalkError("tv_distance: mismatched supports");
    double s = 0.0;
    for (std::size_t i = 0; i < a.mass.size(); ++i) s += std::abs(a.mass[i] - b.mass[i]);
    return 0.5 * s;
}

MixingResult mixing_time(const Graph& g, const std::vector<Vertex>& component,
                         const WalkConfig& cfg) {
    validate_config(cfg, component.size());
    ChainView cv = make_view(g, component);
    if (cfg.laziness == 0.0) {
        BipartiteResult b = is_bipartite(g, cv.verts);
        if (b.bipartite)
            throw WalkError(
                "mixing_time: component is bipartite (no odd closed walk exists), so the "
                "non-lazy chain is periodic; use laziness > 0 or cesaro_mixing_time");
    }

    std::vector<Vertex> starts = resolve_starts(cv, cfg);
    auto per_start = [&](Vertex s) -> StartRecord {
        std::vector<double> x(cv.size(), 0.0);
        x[cv.local_of[s]] = 1.0;
        SearchOut out = search_mixing(cv, cfg, std::move(x));
        return {s, out.t, out.final_tv};
    };
    return reduce_records(run_starts(starts, cfg.workers, per_start));
}

std::uint64_t mixing_time_from(const Graph& g, const std::vector<Vertex>& component,
                               const Distribution& x0, const WalkConfig& cfg) {
    validate_config(cfg, component.size());
    ChainView cv = make_view(g, component);
    if (cfg.laziness == 0.0 && is_bipartite(g, cv.verts).bipartite)
        throw WalkError("mixing_time_from: bipartite component with laziness 0");
    return search_mixing(cv, cfg, aligned_mass(cv, x0)).t;
}

std::uint64_t cesaro_time_from(const Graph& g, const std::vector<Vertex>& component,
                               const Distribution& x0, const WalkConfig& cfg) {
    validate_config(cfg, component.size());
    ChainView cv = make_view(g, component);
    return search_cesaro(cv, cfg, aligned_mass(cv, x0)).t;
}

MixingResult cesaro_mixing_time(const Graph& g, const std::vector<Vertex>& component,
                                const WalkConfig& cfg) {
    validate_config(cfg, component.size());
    ChainView cv = make_view(g, component);
    std::vector<Vertex> starts = resolve_starts(cv, cfg);

    auto per_start = [&](Vertex s) -> StartRecord {
        std::vector<double> x(cv.size(), 0.0);
        x[cv.local_of[s]] = 1.0;
        SearchOut out = search_cesaro(cv, cfg, std::move(x));
        return {s, out.t, out.final_tv};
    };
    return reduce_records(run_starts(starts, cfg.workers, per_start));
}

double trajectory_escape_probability(const Graph& g, const Degree2Path& path, std::uint64_t t,
                                     std::size_t walks, RngSeed seed) {
    if (path.interior.empty())
        throw WalkError("trajectory_escape_probability: path has an empty interior");
    if (walks == 0) throw WalkError("trajectory_escape_probability: walks must be positive");
    const Vertex start = path.midpoint();
    const Vertex end_a = path.endpoint_a;
    const Vertex end_b = path.endpoint_b;

    Rng rng(seed.derived("escape"));
    std::size_t stayed = 0;
    for (std::size_t w = 0; w < walks; ++w) {
        Vertex pos = start;
        bool touched = false;
        for (std::uint64_t s = 0; s < t; ++s) {
            std::uint64_t r = rng.next_below(g.degree(pos));
            for (const Neighbor& nb : g.neighbors(pos)) {
                std::uint64_t slots = nb.to == pos ? 2ULL * nb.multiplicity : nb.multiplicity;
                if (r < slots) {
                    pos = nb.to;
                    break;
                }
                r -= slots;
            }
            if (pos == end_a || pos == end_b) {
                touched = true;
                break;
            }
        }
        if (!touched) ++stayed;
    }
    return static_cast<double>(stayed) / static_cast<double>(walks);
}

std::vector<Vertex> heuristic_worst_starts(const Graph& g, const std::vector<Vertex>& component,
                                           const DecompositionReport& report, std::size_t k,
                                           RngSeed seed) {
    if (k >= component.size()) return component;
    VertexSet in(g.vertex_count(), component);
    std::vector<Vertex> out;
    VertexSet chosen(g.vertex_count());
    auto push = [&](Vertex v) {
        if (out.size() < k && in.contains(v) && !chosen.contains(v)) {
            chosen.insert(v);
            out.push_back(v);
        }
    };

    // census is sorted by interior length, longest first
    for (const Degree2Path& p : report.path_census.paths)
        if (!p.interior.empty()) push(p.midpoint());

    std::vector<const Decoration*> decos;
    for (const Decoration& d : report.decorations) decos.push_back(&d);
    std::sort(decos.begin(), decos.end(), [](const Decoration* a, const Decoration* b) {
        return a->depth != b->depth ? a->depth > b->depth : a->root < b->root;
    });
    for (const Decoration* d : decos) push(d->deepest_leaf);

    Rng rng(seed.derived("worst-starts"));
    std::size_t attempts = 0;
    while (out.size() < k && attempts < 64 * k) {
        push(component[rng.next_below(component.size())]);
        ++attempts;
    }
    for (Vertex v : component) {
        if (out.size() >= k) break;
        push(v);
    }
    return out;
}

std::string walk_report_json(const MixingResult& mix, const MixingResult& cesaro,
                             const WalkConfig& cfg, const std::string& config_json) {
    nlohmann::json j;
    if (!config_json.empty()) j["config"] = nlohmann::json::parse(config_json);
    j["laziness"] = cfg.laziness;
    j["epsilon"] = cfg.epsilon;
    j["step_budget"] = cfg.max_steps;
    j["t_mix"] = mix.t;
    j["t_mix_worst_start"] = mix.worst_start;
    j["t_mix_cesaro"] = cesaro.t;
    j["t_mix_cesaro_worst_start"] = cesaro.worst_start;
    auto starts = nlohmann::json::array();
    for (const StartRecord& r : mix.per_start)
        starts.push_back({{"start", r.start}, {"t", r.t}, {"final_tv", r.final_tv}});
    j["per_start"] = starts;
    auto cstarts = nlohmann::json::array();
    for (const StartRecord& r : cesaro.per_start)
        cstarts.push_back({{"start", r.start}, {"t", r.t}, {"final_tv", r.final_tv}});
    j["per_start_cesaro"] = cstarts;
    return j.dump(2);
}

} // namespace mixlab
