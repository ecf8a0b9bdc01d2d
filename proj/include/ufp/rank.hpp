#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ufp/graph.hpp"

namespace ufp {

/// Membership predicate for the rank-0 class.
///
/// Built-ins:
///   - "edgeless": graphs without edges. Closed under disjoint unions but not
///     under adding joined vertices, so not finitely closed.
///   - "order<=p": at most p vertices. Not closed under disjoint unions.
///   - "maxdeg<=d": maximum degree at most d. Closed under disjoint unions only.
///   - "all-finite": every finite graph. Finitely closed.
struct BaseFamily {
    std::string name;
    std::function<bool(const FiniteGraph&)> contains;

    static BaseFamily edgeless();
    static BaseFamily order_at_most(std::size_t p);
    static BaseFamily max_degree_at_most(std::size_t d);
    static BaseFamily all_finite();

    /// Accepts the names above; "≤" may be used for "<=". Throws InputError.
    static BaseFamily parse(std::string_view spec);
};

/// One node of a rank witness: the subgraph it covers, its rank, and for
/// rank > 0 the separator together with one child per component left after
/// deleting it.
struct WitnessNode {
    VertexSet vertices;
    std::size_t rank = 0;
    VertexSet separator;
    std::vector<WitnessNode> children;

    friend bool operator==(const WitnessNode&, const WitnessNode&) = default;
};

struct RankResult {
    std::size_t rank = 0;
    WitnessNode witness;
};

struct RankOptions {
    /// Largest graph the memoised search accepts.
    std::size_t vertex_ceiling = 16;
};

/// Least rank of g relative to `base` when every separator has at most
/// `max_separator` vertices, or nullopt when no rank exists under that bound.
///
/// Separators are tried by increasing size, then lexicographically; the first
/// separator reaching the minimum becomes the witness. Results for induced
/// subgraphs are memoised. Throws CapacityError above the vertex ceiling.
std::optional<RankResult> bounded_rank(const FiniteGraph& g, const BaseFamily& base, std::size_t max_separator,
                                       const RankOptions& options = {});

/// The same recursion evaluated directly on graph values, without memoisation.
/// Exponential; used as an oracle and behind `rank --naive`.
std::optional<RankResult> naive_rank(const FiniteGraph& g, const BaseFamily& base, std::size_t max_separator);

/// Replays a witness: every separator within the bound, children matching the
/// components after deletion, child ranks below the parent rank, and every
/// rank-0 node inside the base family.
bool witness_is_valid(const FiniteGraph& g, const BaseFamily& base, std::size_t max_separator,
                      const WitnessNode& witness);

/// Bounded analogue of closing a separator over some of its components:
/// checks rank(G[S + C_1 + ... + C_m]) <= max_i rank(C_i), where the left
/// side may use separators of size k * (1 + m).
///
/// Vacuously true when g itself has rank 0. Each component must be an exact
/// component of g - S; otherwise InputError.
bool rank_union_check(const FiniteGraph& g, const BaseFamily& base, std::size_t max_separator,
                      const VertexSet& separator, const std::vector<VertexSet>& components,
                      const RankOptions& options = {});

} // namespace ufp
