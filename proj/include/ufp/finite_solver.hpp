#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "ufp/graph.hpp"

namespace ufp {

struct TraceStep {
    VertexSet flipped;
    /// Value of the solver's potential after this step.
    std::size_t potential = 0;

    friend bool operator==(const TraceStep&, const TraceStep&) = default;
};

/// Record of a local-search run: where it started and every flip it made.
struct SolveTrace {
    Partition initial;
    std::size_t initial_potential = 0;
    std::vector<TraceStep> steps;

    std::size_t flip_count() const noexcept { return steps.size(); }
};

struct SolveResult {
    Partition partition;
    SolveTrace trace;
};

/// Repeatedly flips the lexicographically least unhappy vertex. The potential
/// is the cut size, which each such flip raises by degree - 2 * opponents > 0.
/// The seed, when given, must be total; the default seed puts everything on
/// side 0.
SolveResult unfriendly_partition(const FiniteGraph& g, const std::optional<Partition>& seed = std::nullopt);

/// Extends a partial partition so that every unassigned vertex is happy.
/// Only unassigned vertices are ever flipped; the potential is the number of
/// cut edges incident with them.
SolveResult extend_pre_partition(const FiniteGraph& g, const Partition& fixed);

struct MaxCutOptions {
    std::size_t max_free_vertices = 20;
};

/// Exhaustive search for an extension of `fixed` with the largest cut.
/// Ties go to the first maximum in binary-reflected Gray code order over
/// the free vertices (lexicographic, least significant first).
/// Throws CapacityError when there are more free vertices than allowed.
Partition exact_max_cut_extension(const FiniteGraph& g, const Partition& fixed, const MaxCutOptions& options = {});

struct CascadeResult {
    Partition partition;
    SolveTrace trace;
    /// Cut edges of the starting partition incident with the flipped set.
    std::size_t k = 0;
    /// Single-vertex flips made after the initial flip of the set.
    std::size_t cascade_flips = 0;
    /// Members of the flipped set that end up unhappy. They are not part of
    /// the contract and are reported only.
    VertexSet unhappy_flipped;
};

/// Flips `flipped` once, then flips the least unhappy vertex of `free_vertices`
/// until all of them are happy. If the start is strongly maximal with respect
/// to `free_vertices` this needs at most 2k single flips; exceeding that
/// raises InvariantViolation.
CascadeResult flip_cascade(const FiniteGraph& g, const Partition& pi, const VertexSet& flipped,
                           const VertexSet& free_vertices);

struct RoundRobinResult {
    Partition partition;
    /// Number of schedule occurrences at which the vertex was already coloured
    /// and still had an uncoloured target neighbour.
    std::map<Vertex, std::size_t> credits;
};

/// Scans `schedule`: an uncoloured occurrence is put on side 0; a coloured one
/// gives its least uncoloured target neighbour the opposite side. Every
/// target ends with at least as many opponents as credits.
RoundRobinResult round_robin_opponents(const FiniteGraph& g, const VertexSet& targets,
                                       const std::vector<Vertex>& schedule);

} // namespace ufp
