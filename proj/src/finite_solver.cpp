#include "ufp/finite_solver.hpp"

#include <bit>
#include <cstdint>

#include "ufp/errors.hpp"

namespace ufp {

namespace {

std::optional<Vertex> least_unhappy(const FiniteGraph& g, const Partition& pi, const VertexSet& among) {
    for (const auto& v : among) {
        const Side own = pi.at(v);
        std::size_t opponents = 0;
        const auto& nbrs = g.neighbours(v);
        for (const auto& w : nbrs)
            if (pi.at(w) != own) ++opponents;
        if (2 * opponents < nbrs.size()) return v;
    }
    return std::nullopt;
}

// Flips the least unhappy movable vertex until none is left, appending to the
// trace. Each flip raises the number of cut edges at the flipped vertex and
// leaves all other edges alone, so the potential strictly increases.
void improve(const FiniteGraph& g, Partition& pi, const VertexSet& movable, SolveTrace& trace,
             std::optional<std::size_t> flip_budget = std::nullopt) {
    std::size_t potential = cut_edges_incident(g, pi, movable);
    std::size_t flips = 0;
    while (auto v = least_unhappy(g, pi, movable)) {
        if (flip_budget && flips == *flip_budget)
            throw InvariantViolation("flip cascade exceeded its bound of " + std::to_string(*flip_budget) +
                                     " single flips");
        pi.set(*v, opposite(pi.at(*v)));
        const std::size_t next = cut_edges_incident(g, pi, movable);
        if (next <= potential)
            throw InvariantViolation("potential did not increase when flipping '" + *v + "'");
        potential = next;
        trace.steps.push_back(TraceStep{{*v}, potential});
        ++flips;
    }
}

void require_subset(const FiniteGraph& g, const VertexSet& s, const char* what) {
    for (const auto& v : s)
        if (!g.has_vertex(v)) throw InputError(std::string(what) + " contains unknown vertex '" + v + "'");
}

} // namespace

SolveResult unfriendly_partition(const FiniteGraph& g, const std::optional<Partition>& seed) {
    Partition pi = seed ? *seed : Partition::uniform(g.vertices(), Side::zero);
    if (seed) {
        for (const auto& v : pi.domain())
            if (!g.has_vertex(v)) throw InputError("seed partition assigns unknown vertex '" + v + "'");
        if (!pi.total_on(g)) throw InputError("seed partition must assign every vertex");
    }
    SolveResult result;
    result.trace.initial = pi;
    result.trace.initial_potential = cut_size(g, pi);
    improve(g, pi, g.vertices(), result.trace);
    result.partition = std::move(pi);
    return result;
}

SolveResult extend_pre_partition(const FiniteGraph& g, const Partition& fixed) {
    Partition pi = fixed;
    VertexSet free_vertices;
    for (const auto& v : fixed.domain())
        if (!g.has_vertex(v)) throw InputError("fixed partition assigns unknown vertex '" + v + "'");
    for (const auto& v : g.vertices()) {
        if (!fixed.contains(v)) {
            free_vertices.insert(v);
            pi.set(v, Side::zero);
        }
    }
    SolveResult result;
    result.trace.initial = pi;
    result.trace.initial_potential = cut_edges_incident(g, pi, free_vertices);
    improve(g, pi, free_vertices, result.trace);
    result.partition = std::move(pi);
    return result;
}

Partition exact_max_cut_extension(const FiniteGraph& g, const Partition& fixed, const MaxCutOptions& options) {
    for (const auto& v : fixed.domain())
        if (!g.has_vertex(v)) throw InputError("fixed partition assigns unknown vertex '" + v + "'");

    std::vector<Vertex> free_vertices;
    for (const auto& v : g.vertices())
        if (!fixed.contains(v)) free_vertices.push_back(v);
    const std::size_t f = free_vertices.size();
    if (f > options.max_free_vertices || f >= 63)
        throw CapacityError("exact max-cut search over " + std::to_string(f) + " free vertices exceeds the bound of " +
                            std::to_string(options.max_free_vertices));

    Partition pi = fixed;
    for (const auto& v : free_vertices) pi.set(v, Side::zero);

    // Free vertex i: neighbours as (free index or -1, fixed side).
    struct Nbr {
        int free_index;
        Side fixed_side;
    };
    std::map<Vertex, int> index;
    for (std::size_t i = 0; i < f; ++i) index[free_vertices[i]] = static_cast<int>(i);
    std::vector<std::vector<Nbr>> nbrs(f);
    for (std::size_t i = 0; i < f; ++i)
        for (const auto& w : g.neighbours(free_vertices[i])) {
            auto it = index.find(w);
            if (it != index.end())
                nbrs[i].push_back({it->second, Side::zero});
            else
                nbrs[i].push_back({-1, fixed.at(w)});
        }

    std::vector<Side> side(f, Side::zero);
    long long cut = static_cast<long long>(cut_size(g, pi));
    long long best_cut = cut;
    std::uint64_t best_code = 0;
    const std::uint64_t limit = std::uint64_t{1} << f;
    for (std::uint64_t step = 1; step < limit; ++step) {
        const auto i = static_cast<std::size_t>(std::countr_zero(step));
        long long delta = 0;
        for (const auto& n : nbrs[i]) {
            const Side other = n.free_index >= 0 ? side[static_cast<std::size_t>(n.free_index)] : n.fixed_side;
            delta += other == side[i] ? 1 : -1;
        }
        side[i] = opposite(side[i]);
        cut += delta;
        if (cut > best_cut) {
            best_cut = cut;
            best_code = step ^ (step >> 1);
        }
    }
    for (std::size_t i = 0; i < f; ++i)
        pi.set(free_vertices[i], (best_code >> i) & 1U ? Side::one : Side::zero);
    return pi;
}

CascadeResult flip_cascade(const FiniteGraph& g, const Partition& pi, const VertexSet& flipped,
                           const VertexSet& free_vertices) {
    require_subset(g, flipped, "flip set");
    require_subset(g, free_vertices, "free set");
    if (!pi.total_on(g)) throw InputError("flip_cascade needs a total partition");
    for (const auto& v : flipped)
        if (free_vertices.count(v)) throw InputError("vertex '" + v + "' is both flipped and free");

    CascadeResult result;
    result.k = cut_edges_incident(g, pi, flipped);
    result.trace.initial = pi;
    result.trace.initial_potential = cut_edges_incident(g, pi, free_vertices);

    Partition current = flip(pi, flipped);
    result.trace.steps.push_back(TraceStep{flipped, cut_edges_incident(g, current, free_vertices)});
    improve(g, current, free_vertices, result.trace, 2 * result.k);
    result.cascade_flips = result.trace.steps.size() - 1;

    for (const auto& v : happiness(g, current, flipped).unhappy) result.unhappy_flipped.insert(v);
    result.partition = std::move(current);
    return result;
}

RoundRobinResult round_robin_opponents(const FiniteGraph& g, const VertexSet& targets,
                                       const std::vector<Vertex>& schedule) {
    require_subset(g, targets, "target set");
    for (const auto& v : schedule)
        if (!targets.count(v)) throw InputError("schedule references non-target vertex '" + v + "'");

    RoundRobinResult result;
    for (const auto& v : targets) result.credits[v] = 0;
    auto& pi = result.partition;
    for (const auto& v : schedule) {
        auto own = pi.get(v);
        if (!own) {
            pi.set(v, Side::zero);
            continue;
        }
        for (const auto& w : g.neighbours(v)) {
            if (targets.count(w) && !pi.contains(w)) {
                pi.set(w, opposite(*own));
                ++result.credits[v];
                break;
            }
        }
    }

    for (const auto& [v, credit] : result.credits) {
        auto own = pi.get(v);
        std::size_t opponents = 0;
        if (own)
            for (const auto& w : g.neighbours(v)) {
                auto other = pi.get(w);
                if (other && *other != *own) ++opponents;
            }
        if (opponents < credit)
            throw InvariantViolation("vertex '" + v + "' has fewer opponents than credits");
    }
    return result;
}

} // namespace ufp
