#include "ufp/graph.hpp"

#include <deque>

#include "ufp/errors.hpp"

namespace ufp {

Side side_from_int(long long value) {
    if (value == 0) return Side::zero;
    if (value == 1) return Side::one;
    throw InputError("side must be 0 or 1, got " + std::to_string(value));
}

FiniteGraph::FiniteGraph(const std::vector<Vertex>& vertices, const std::vector<Edge>& edges) {
    for (const auto& v : vertices) {
        if (!vertices_.insert(v).second) throw InputError("duplicate vertex '" + v + "'");
        adjacency_[v];
    }
    for (const auto& [u, v] : edges) {
        if (u == v) throw InputError("self-loop at '" + u + "'");
        if (!has_vertex(u)) throw InputError("edge endpoint '" + u + "' is not a vertex");
        if (!has_vertex(v)) throw InputError("edge endpoint '" + v + "' is not a vertex");
        if (!adjacency_[u].insert(v).second)
            throw InputError("repeated edge {" + u + ", " + v + "}");
        adjacency_[v].insert(u);
        ++edge_count_;
    }
}

std::vector<Edge> FiniteGraph::edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count_);
    for (const auto& [u, nbrs] : adjacency_)
        for (const auto& v : nbrs)
            if (u < v) out.emplace_back(u, v);
    return out;
}

bool FiniteGraph::has_edge(const Vertex& u, const Vertex& v) const {
    auto it = adjacency_.find(u);
    return it != adjacency_.end() && it->second.count(v) != 0;
}

const VertexSet& FiniteGraph::neighbours(const Vertex& v) const {
    auto it = adjacency_.find(v);
    if (it == adjacency_.end()) throw InputError("unknown vertex '" + v + "'");
    return it->second;
}

FiniteGraph FiniteGraph::induced(const VertexSet& keep) const {
    FiniteGraph out;
    for (const auto& v : keep) {
        auto it = adjacency_.find(v);
        if (it == adjacency_.end()) throw InputError("unknown vertex '" + v + "'");
        out.vertices_.insert(v);
        auto& row = out.adjacency_[v];
        for (const auto& w : it->second)
            if (keep.count(w)) row.insert(w);
        out.edge_count_ += row.size();
    }
    out.edge_count_ /= 2;
    return out;
}

FiniteGraph FiniteGraph::without(const VertexSet& drop) const {
    VertexSet keep;
    for (const auto& v : vertices_)
        if (!drop.count(v)) keep.insert(v);
    return induced(keep);
}

std::vector<VertexSet> FiniteGraph::components() const {
    std::vector<VertexSet> out;
    VertexSet seen;
    for (const auto& root : vertices_) {
        if (seen.count(root)) continue;
        VertexSet comp;
        std::deque<Vertex> queue{root};
        seen.insert(root);
        while (!queue.empty()) {
            Vertex v = std::move(queue.front());
            queue.pop_front();
            for (const auto& w : adjacency_.at(v))
                if (seen.insert(w).second) queue.push_back(w);
            comp.insert(std::move(v));
        }
        out.push_back(std::move(comp));
    }
    return out;
}

Partition Partition::uniform(const VertexSet& vertices, Side side) {
    Partition p;
    for (const auto& v : vertices) p.sides_.emplace(v, side);
    return p;
}

std::optional<Side> Partition::get(const Vertex& v) const {
    auto it = sides_.find(v);
    if (it == sides_.end()) return std::nullopt;
    return it->second;
}

Side Partition::at(const Vertex& v) const {
    auto it = sides_.find(v);
    if (it == sides_.end()) throw InputError("partition undefined on vertex '" + v + "'");
    return it->second;
}

VertexSet Partition::domain() const {
    VertexSet out;
    for (const auto& [v, s] : sides_) out.insert(out.end(), v);
    return out;
}

bool Partition::total_on(const FiniteGraph& g) const {
    for (const auto& v : g.vertices())
        if (!contains(v)) return false;
    return true;
}

bool Partition::extends(const Partition& other) const {
    for (const auto& [v, s] : other.sides_) {
        auto mine = get(v);
        if (!mine || *mine != s) return false;
    }
    return true;
}

Partition Partition::restricted(const VertexSet& keep) const {
    Partition out;
    for (const auto& [v, s] : sides_)
        if (keep.count(v)) out.sides_.emplace(v, s);
    return out;
}

Partition Partition::swapped() const {
    Partition out;
    for (const auto& [v, s] : sides_) out.sides_.emplace(v, opposite(s));
    return out;
}

std::size_t degree_in(const FiniteGraph& g, const Vertex& v, const VertexSet& u) {
    std::size_t count = 0;
    for (const auto& w : g.neighbours(v))
        if (u.count(w)) ++count;
    return count;
}

HappinessReport happiness(const FiniteGraph& g, const Partition& pi, const VertexSet& targets) {
    HappinessReport report;
    for (const auto& v : targets) {
        const auto& nbrs = g.neighbours(v);
        const Side own = pi.at(v);
        VertexHappiness h;
        h.degree = nbrs.size();
        for (const auto& w : nbrs) {
            if (pi.at(w) != own)
                ++h.opponents;
            else
                ++h.friends;
        }
        h.happy = 2 * h.opponents >= h.degree;
        if (!h.happy) report.unhappy.push_back(v);
        report.vertices.emplace(v, h);
    }
    return report;
}

bool is_unfriendly_for(const FiniteGraph& g, const Partition& pi, const VertexSet& targets) {
    return happiness(g, pi, targets).all_happy();
}

bool is_unfriendly(const FiniteGraph& g, const Partition& pi) {
    return is_unfriendly_for(g, pi, g.vertices());
}

Partition flip(const Partition& pi, const VertexSet& w) {
    Partition out = pi;
    for (const auto& v : w) out.set(v, opposite(pi.at(v)));
    return out;
}

std::size_t cut_size(const FiniteGraph& g, const Partition& pi) {
    std::size_t cut = 0;
    for (const auto& [u, v] : g.edges()) {
        auto a = pi.get(u);
        auto b = pi.get(v);
        if (a && b && *a != *b) ++cut;
    }
    return cut;
}

std::size_t cut_edges_incident(const FiniteGraph& g, const Partition& pi, const VertexSet& w) {
    std::size_t cut = 0;
    for (const auto& [u, v] : g.edges()) {
        if (!w.count(u) && !w.count(v)) continue;
        auto a = pi.get(u);
        auto b = pi.get(v);
        if (a && b && *a != *b) ++cut;
    }
    return cut;
}

} // namespace ufp
