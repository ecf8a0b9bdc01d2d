#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace ufp {

using Vertex = std::string;
using VertexSet = std::set<Vertex>;
using Edge = std::pair<Vertex, Vertex>;

enum class Side : std::uint8_t { zero = 0, one = 1 };

constexpr Side opposite(Side s) noexcept { return s == Side::zero ? Side::one : Side::zero; }
constexpr int to_int(Side s) noexcept { return static_cast<int>(s); }
Side side_from_int(long long value);

/// Simple undirected loopless graph over string identifiers.
///
/// Iteration is always in lexicographic vertex order; edges are stored with
/// the smaller endpoint first. Instances are immutable once built.
class FiniteGraph {
public:
    FiniteGraph() = default;

    /// Throws InputError on self-loops, unknown endpoints or repeated edges
    /// (including the same edge given in both orientations).
    FiniteGraph(const std::vector<Vertex>& vertices, const std::vector<Edge>& edges);

    const VertexSet& vertices() const noexcept { return vertices_; }
    std::vector<Edge> edges() const;
    std::size_t order() const noexcept { return vertices_.size(); }
    std::size_t size() const noexcept { return edge_count_; }
    bool empty() const noexcept { return vertices_.empty(); }

    bool has_vertex(const Vertex& v) const { return vertices_.count(v) != 0; }
    bool has_edge(const Vertex& u, const Vertex& v) const;

    /// Throws InputError for an unknown vertex.
    const VertexSet& neighbours(const Vertex& v) const;
    std::size_t degree(const Vertex& v) const { return neighbours(v).size(); }

    FiniteGraph induced(const VertexSet& keep) const;
    FiniteGraph without(const VertexSet& drop) const;

    /// Connected components, each sorted, ordered by least vertex.
    std::vector<VertexSet> components() const;
    bool connected() const { return components().size() <= 1; }

    friend bool operator==(const FiniteGraph& a, const FiniteGraph& b) {
        return a.adjacency_ == b.adjacency_;
    }

private:
    VertexSet vertices_;
    std::map<Vertex, VertexSet> adjacency_;
    std::size_t edge_count_ = 0;
};

/// Possibly partial two-colouring of vertex identifiers.
class Partition {
public:
    Partition() = default;
    explicit Partition(std::map<Vertex, Side> assignments) : sides_(std::move(assignments)) {}

    static Partition uniform(const VertexSet& vertices, Side side);

    std::optional<Side> get(const Vertex& v) const;
    /// Throws InputError when v is unassigned.
    Side at(const Vertex& v) const;
    void set(const Vertex& v, Side s) { sides_[v] = s; }
    bool contains(const Vertex& v) const { return sides_.count(v) != 0; }

    VertexSet domain() const;
    std::size_t size() const noexcept { return sides_.size(); }
    bool empty() const noexcept { return sides_.empty(); }
    const std::map<Vertex, Side>& assignments() const noexcept { return sides_; }

    bool total_on(const FiniteGraph& g) const;
    bool extends(const Partition& other) const;
    Partition restricted(const VertexSet& keep) const;
    /// Global 0 <-> 1 exchange.
    Partition swapped() const;

    friend bool operator==(const Partition&, const Partition&) = default;

private:
    std::map<Vertex, Side> sides_;
};

struct VertexHappiness {
    std::size_t degree = 0;
    std::size_t opponents = 0;
    std::size_t friends = 0;
    bool happy = true;
};

struct HappinessReport {
    std::map<Vertex, VertexHappiness> vertices;
    std::vector<Vertex> unhappy;

    bool all_happy() const noexcept { return unhappy.empty(); }
};

/// Number of neighbours of v that lie in u.
std::size_t degree_in(const FiniteGraph& g, const Vertex& v, const VertexSet& u);

/// Happiness of every target: happy iff 2 * opponents >= degree.
/// The partition must be defined on each target and its neighbours.
HappinessReport happiness(const FiniteGraph& g, const Partition& pi, const VertexSet& targets);

bool is_unfriendly_for(const FiniteGraph& g, const Partition& pi, const VertexSet& targets);
bool is_unfriendly(const FiniteGraph& g, const Partition& pi);

/// Exchanges the side of every vertex in w; w must lie in the domain.
Partition flip(const Partition& pi, const VertexSet& w);

/// Edges whose endpoints are both assigned and on different sides.
std::size_t cut_size(const FiniteGraph& g, const Partition& pi);
/// Cut edges with at least one endpoint in w.
std::size_t cut_edges_incident(const FiniteGraph& g, const Partition& pi, const VertexSet& w);

} // namespace ufp
