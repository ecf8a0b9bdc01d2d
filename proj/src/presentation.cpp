#include "ufp/presentation.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <numeric>

#include "ufp/errors.hpp"

namespace ufp {

PresentationPtr Presentation::leaf(FiniteGraph graph) {
    return PresentationPtr(new Presentation(true, std::move(graph), {}));
}

PresentationPtr Presentation::glue(FiniteGraph separator, std::vector<CopyFamily> families) {
    return PresentationPtr(new Presentation(false, std::move(separator), std::move(families)));
}

std::string terminal_name(const Presentation& node, const Vertex& v) {
    return node.is_glue() ? "S:" + v : v;
}

namespace {

std::string path_prefix(const std::vector<std::size_t>& path) {
    std::string out;
    for (auto f : path) out += std::to_string(f) + "[*]/";
    return out;
}

} // namespace

std::string Position::to_string() const {
    return path_prefix(path) + (separator ? "S:" + vertex : vertex);
}

VertexAddress VertexAddress::parse(std::string_view text) {
    VertexAddress out;
    std::size_t start = 0;
    while (true) {
        const std::size_t slash = text.find('/', start);
        const std::string_view token = text.substr(start, slash == std::string_view::npos ? text.npos : slash - start);
        if (slash == std::string_view::npos) {
            if (token.substr(0, 2) == "S:") {
                out.separator = true;
                out.vertex = std::string(token.substr(2));
            } else {
                out.vertex = std::string(token);
            }
            if (out.vertex.empty()) throw InputError("address '" + std::string(text) + "' has an empty terminal");
            return out;
        }
        const std::size_t open = token.find('[');
        if (open == std::string_view::npos || open == 0 || token.back() != ']')
            throw InputError("malformed address step '" + std::string(token) + "' in '" + std::string(text) + "'");
        CopyStep step;
        auto parse_index = [&](std::string_view digits, std::size_t& value) {
            auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
            if (ec != std::errc() || ptr != digits.data() + digits.size() || digits.empty())
                throw InputError("malformed index in address step '" + std::string(token) + "'");
        };
        parse_index(token.substr(0, open), step.family);
        parse_index(token.substr(open + 1, token.size() - open - 2), step.copy);
        out.steps.push_back(step);
        start = slash + 1;
    }
}

std::string VertexAddress::to_string() const {
    std::string out;
    for (const auto& s : steps) out += std::to_string(s.family) + "[" + std::to_string(s.copy) + "]/";
    return out + (separator ? "S:" + vertex : vertex);
}

Position VertexAddress::position() const {
    Position p;
    for (const auto& s : steps) p.path.push_back(s.family);
    p.vertex = vertex;
    p.separator = separator;
    return p;
}

namespace {

void check_names(const FiniteGraph& g, const std::string& path, std::vector<Diagnostic>& out) {
    for (const auto& v : g.vertices()) {
        if (v.empty())
            out.push_back({path, "empty vertex name"});
        else if (v.find('/') != Vertex::npos)
            out.push_back({path, "vertex name '" + v + "' contains '/'"});
        else if (v.rfind("S:", 0) == 0)
            out.push_back({path, "vertex name '" + v + "' starts with 'S:'"});
    }
}

void validate_node(const Presentation& p, const std::string& path, std::vector<Diagnostic>& out) {
    check_names(p.local(), path, out);
    if (p.is_leaf()) {
        if (p.local().empty()) out.push_back({path, "leaf graph is empty"});
        return;
    }
    if (p.local().empty()) out.push_back({path, "separator is empty"});
    for (std::size_t i = 0; i < p.families().size(); ++i) {
        const auto& fam = p.families()[i];
        const std::string fpath = path + ".families[" + std::to_string(i) + "]";
        if (!fam.child) {
            out.push_back({fpath, "family has no child"});
            continue;
        }
        for (const auto& [s, b] : fam.attachment) {
            if (!p.local().has_vertex(s))
                out.push_back({fpath, "attachment source '" + s + "' is not a separator vertex"});
            if (!fam.child->boundary().count(b))
                out.push_back({fpath, "attachment target '" + b + "' is not on the child's boundary"});
        }
        validate_node(*fam.child, fpath + ".child", out);
    }
}

} // namespace

std::vector<Diagnostic> validate(const Presentation& p) {
    std::vector<Diagnostic> out;
    validate_node(p, "$", out);
    return out;
}

void require_valid(const Presentation& p) {
    const auto diags = validate(p);
    if (diags.empty()) return;
    std::string msg = "invalid presentation:";
    for (const auto& d : diags) msg += "\n  " + d.path + ": " + d.message;
    throw InputError(msg);
}

const Presentation& node_at(const Presentation& root, const std::vector<std::size_t>& path) {
    const Presentation* node = &root;
    for (auto f : path) {
        if (f >= node->families().size())
            throw InputError("family index " + std::to_string(f) + " out of range");
        node = node->families()[f].child.get();
    }
    return *node;
}

namespace {

void require_terminal(const Presentation& node, const Vertex& v, bool separator, const std::string& text) {
    if (separator != node.is_glue())
        throw InputError("address '" + text + "' names a " + (separator ? "separator" : "leaf") +
                         " vertex but the node is a " + (node.is_glue() ? "glue node" : "leaf"));
    if (!node.local().has_vertex(v)) throw InputError("address '" + text + "' names unknown vertex '" + v + "'");
}

} // namespace

void require_address(const Presentation& root, const VertexAddress& address) {
    const Presentation* node = &root;
    const std::string text = address.to_string();
    for (const auto& step : address.steps) {
        if (step.family >= node->families().size())
            throw InputError("address '" + text + "': family index " + std::to_string(step.family) + " out of range");
        const auto& fam = node->families()[step.family];
        if (fam.multiplicity.is_finite() && step.copy >= fam.multiplicity.value())
            throw InputError("address '" + text + "': copy index " + std::to_string(step.copy) +
                             " not below multiplicity " + fam.multiplicity.to_string());
        node = fam.child.get();
    }
    require_terminal(*node, address.vertex, address.separator, text);
}

namespace {

// Positions as a weighted graph: count(x -> y) is the number of neighbours at
// position y of a single vertex at position x.
struct PositionGraph {
    std::vector<Position> positions;
    std::vector<SymbolicCardinal> multiplicity;
    std::vector<std::vector<std::pair<std::size_t, SymbolicCardinal>>> nbrs;

    std::size_t add(Position p, SymbolicCardinal mult) {
        positions.push_back(std::move(p));
        multiplicity.push_back(mult);
        nbrs.emplace_back();
        return positions.size() - 1;
    }

    void build(const Presentation& node, std::vector<std::size_t>& path, SymbolicCardinal mult,
               const std::map<Vertex, std::size_t>* parent, const CopyFamily* via) {
        std::map<Vertex, std::size_t> local;
        for (const auto& v : node.local().vertices()) local[v] = add(Position{path, v, node.is_glue()}, mult);
        for (const auto& [u, v] : node.local().edges()) {
            nbrs[local[u]].emplace_back(local[v], SymbolicCardinal(1));
            nbrs[local[v]].emplace_back(local[u], SymbolicCardinal(1));
        }
        if (parent)
            for (const auto& [s, b] : via->attachment) {
                nbrs[local[b]].emplace_back(parent->at(s), SymbolicCardinal(1));
                nbrs[parent->at(s)].emplace_back(local[b], via->multiplicity);
            }
        for (std::size_t i = 0; i < node.families().size(); ++i) {
            const auto& fam = node.families()[i];
            path.push_back(i);
            build(*fam.child, path, mult * fam.multiplicity, &local, &fam);
            path.pop_back();
        }
    }

    SymbolicCardinal degree(std::size_t i) const {
        SymbolicCardinal d;
        for (const auto& [j, c] : nbrs[i]) d += c;
        return d;
    }
};

PositionGraph position_graph(const Presentation& p) {
    PositionGraph pg;
    std::vector<std::size_t> path;
    pg.build(p, path, SymbolicCardinal(1), nullptr, nullptr);
    return pg;
}

} // namespace

SymbolicCardinal position_degree(const Presentation& root, const Position& position) {
    const Presentation& node = node_at(root, position.path);
    require_terminal(node, position.vertex, position.separator, position.to_string());

    SymbolicCardinal d(node.local().degree(position.vertex));
    if (node.is_glue())
        for (const auto& fam : node.families()) {
            std::uint64_t per_copy = 0;
            for (const auto& [s, b] : fam.attachment)
                if (s == position.vertex) ++per_copy;
            d += fam.multiplicity * SymbolicCardinal(per_copy);
        }
    if (!position.path.empty()) {
        std::vector<std::size_t> parent_path(position.path.begin(), position.path.end() - 1);
        const auto& fam = node_at(root, parent_path).families()[position.path.back()];
        std::uint64_t upward = 0;
        for (const auto& [s, b] : fam.attachment)
            if (b == position.vertex) ++upward;
        d += SymbolicCardinal(upward);
    }
    return d;
}

SymbolicCardinal symbolic_degree(const Presentation& root, const VertexAddress& address) {
    require_address(root, address);
    return position_degree(root, address.position());
}

const AtlasEntry& DegreeAtlas::at(const Position& position) const {
    for (const auto& e : entries)
        if (e.position == position) return e;
    throw InputError("no atlas entry for position '" + position.to_string() + "'");
}

DegreeAtlas degree_atlas(const Presentation& p) {
    require_valid(p);
    const PositionGraph pg = position_graph(p);
    const std::size_t n = pg.positions.size();
    DegreeAtlas atlas;
    atlas.entries.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto& e = atlas.entries[i];
        e.position = pg.positions[i];
        e.multiplicity = pg.multiplicity[i];
        e.degree = pg.degree(i);
        e.in_v_infinity = e.degree.is_omega();
    }
    for (std::size_t i = 0; i < n; ++i) {
        auto& e = atlas.entries[i];
        for (const auto& [j, c] : pg.nbrs[i])
            if (atlas.entries[j].in_v_infinity) e.infinite_neighbours += c;
        e.in_v_star = e.in_v_infinity && e.infinite_neighbours.is_finite();
        if (e.in_v_infinity) atlas.v_infinity_size += e.multiplicity;
        if (e.in_v_star) atlas.v_star_size += e.multiplicity;
    }
    return atlas;
}

bool is_in_W(const Presentation& p) { return degree_atlas(p).v_star_size.is_finite(); }

bool is_finite(const Presentation& p) {
    for (const auto& fam : p.families()) {
        if (fam.multiplicity.is_zero()) continue;
        if (fam.multiplicity.is_omega() || !is_finite(*fam.child)) return false;
    }
    return true;
}

std::size_t structural_rank(const Presentation& p) {
    if (is_finite(p)) return 0;
    std::size_t r = 0;
    for (const auto& fam : p.families()) {
        if (fam.multiplicity.is_zero()) continue;
        const std::size_t child = structural_rank(*fam.child);
        r = std::max(r, fam.multiplicity.is_omega() ? child + 1 : child);
    }
    return r;
}

namespace {

// Whether every component of p - separator has structural rank below `bound`.
// Components: each non-separator S-vertex group (joined by S-edges and by
// families attached to several of them) with all families attached to it, and
// standalone copies of families attached only to the separator.
bool separates_below(const Presentation& p, const VertexSet& separator, std::size_t bound) {
    std::vector<Vertex> rest;
    for (const auto& v : p.local().vertices())
        if (!separator.count(v)) rest.push_back(v);
    std::map<Vertex, std::size_t> index;
    for (std::size_t i = 0; i < rest.size(); ++i) index[rest[i]] = i;
    std::vector<std::size_t> parent(rest.size());
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
        return parent[x] == x ? x : parent[x] = find(parent[x]);
    };
    auto unite = [&](std::size_t a, std::size_t b) { parent[find(a)] = find(b); };

    for (const auto& [u, v] : p.local().edges())
        if (index.count(u) && index.count(v)) unite(index[u], index[v]);

    std::vector<std::optional<std::size_t>> anchor(p.families().size());
    for (std::size_t f = 0; f < p.families().size(); ++f) {
        const auto& fam = p.families()[f];
        if (fam.multiplicity.is_zero()) continue;
        for (const auto& [s, b] : fam.attachment) {
            auto it = index.find(s);
            if (it == index.end()) continue;
            if (anchor[f])
                unite(*anchor[f], it->second);
            else
                anchor[f] = it->second;
        }
    }

    std::map<std::size_t, std::size_t> component_rank;
    for (std::size_t i = 0; i < rest.size(); ++i) component_rank[find(i)];
    for (std::size_t f = 0; f < p.families().size(); ++f) {
        const auto& fam = p.families()[f];
        if (fam.multiplicity.is_zero()) continue;
        const std::size_t child = structural_rank(*fam.child);
        if (!anchor[f]) {
            if (child >= bound) return false;
            continue;
        }
        auto& r = component_rank[find(*anchor[f])];
        r = std::max(r, fam.multiplicity.is_omega() ? child + 1 : child);
    }
    for (const auto& [root, r] : component_rank)
        if (r >= bound) return false;
    return true;
}

} // namespace

VertexSet minimal_separator(const Presentation& p) {
    if (p.is_leaf()) throw InputError("minimal_separator needs a glue node");
    const std::size_t r = structural_rank(p);
    if (r == 0) throw InputError("minimal_separator needs structural rank at least 1");
    VertexSet sep = p.local().vertices();
    if (!separates_below(p, sep, r))
        throw InputError("the root separator does not lower the structural rank of every component");
    for (const auto& x : p.local().vertices()) {
        VertexSet trial = sep;
        trial.erase(x);
        if (separates_below(p, trial, r)) sep = std::move(trial);
    }
    return sep;
}

namespace {

void emit(const Presentation& node, std::size_t n, std::vector<CopyStep>& steps, const std::string& prefix,
          std::vector<Vertex>& vertices, std::vector<Edge>& edges, std::map<Vertex, VertexAddress>& addresses) {
    auto name = [&](const Vertex& v) { return prefix + terminal_name(node, v); };
    for (const auto& v : node.local().vertices()) {
        vertices.push_back(name(v));
        addresses.emplace(name(v), VertexAddress{steps, v, node.is_glue()});
    }
    for (const auto& [u, v] : node.local().edges()) edges.emplace_back(name(u), name(v));
    for (std::size_t f = 0; f < node.families().size(); ++f) {
        const auto& fam = node.families()[f];
        const std::size_t copies = fam.multiplicity.is_omega() ? n : fam.multiplicity.value();
        for (std::size_t c = 0; c < copies; ++c) {
            const std::string child_prefix = prefix + std::to_string(f) + "[" + std::to_string(c) + "]/";
            steps.push_back({f, c});
            emit(*fam.child, n, steps, child_prefix, vertices, edges, addresses);
            steps.pop_back();
            for (const auto& [s, b] : fam.attachment)
                edges.emplace_back(name(s), child_prefix + terminal_name(*fam.child, b));
        }
    }
}

} // namespace

Instantiation instantiate(const Presentation& p, std::size_t n) {
    require_valid(p);
    std::vector<Vertex> vertices;
    std::vector<Edge> edges;
    std::vector<CopyStep> steps;
    Instantiation out;
    emit(p, n, steps, "", vertices, edges, out.addresses);
    out.graph = FiniteGraph(vertices, edges);
    return out;
}

} // namespace ufp
