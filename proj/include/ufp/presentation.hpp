#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ufp/cardinal.hpp"
#include "ufp/graph.hpp"

namespace ufp {

class Presentation;
using PresentationPtr = std::shared_ptr<const Presentation>;

/// Pairs (parent separator vertex, child boundary vertex); the same pattern
/// is used for every copy of the family.
using Attachment = std::set<std::pair<Vertex, Vertex>>;

struct CopyFamily {
    PresentationPtr child;
    SymbolicCardinal multiplicity;
    Attachment attachment;
};

/// Finite description of a countable rayless graph.
///
/// A leaf is a finite graph. A glue node is a finite separator graph S plus
/// families of child copies; each copy is joined to S through the family's
/// attachment pattern. The boundary of a node (what a parent may attach to)
/// is its leaf vertex set or its separator. Nodes are immutable and shared.
class Presentation {
public:
    static PresentationPtr leaf(FiniteGraph graph);
    static PresentationPtr glue(FiniteGraph separator, std::vector<CopyFamily> families);

    bool is_leaf() const noexcept { return leaf_; }
    bool is_glue() const noexcept { return !leaf_; }
    /// The leaf graph, or the separator graph of a glue node.
    const FiniteGraph& local() const noexcept { return local_; }
    const std::vector<CopyFamily>& families() const noexcept { return families_; }
    const VertexSet& boundary() const noexcept { return local_.vertices(); }

private:
    Presentation(bool leaf, FiniteGraph local, std::vector<CopyFamily> families)
        : leaf_(leaf), local_(std::move(local)), families_(std::move(families)) {}

    bool leaf_;
    FiniteGraph local_;
    std::vector<CopyFamily> families_;
};

/// A vertex position up to the choice of copies: the family indices leading
/// to its node plus the vertex there. Rendered like "0[*]/1[*]/S:c".
struct Position {
    std::vector<std::size_t> path;
    Vertex vertex;
    bool separator = false;

    std::string to_string() const;
    friend auto operator<=>(const Position&, const Position&) = default;
};

struct CopyStep {
    std::size_t family = 0;
    std::size_t copy = 0;
    friend auto operator<=>(const CopyStep&, const CopyStep&) = default;
};

/// A concrete vertex: (family, copy) steps and a terminal, e.g. "0[3]/1[0]/S:c"
/// for a separator vertex or "0[2]/x" for a leaf vertex.
struct VertexAddress {
    std::vector<CopyStep> steps;
    Vertex vertex;
    bool separator = false;

    /// Syntax only; throws InputError.
    static VertexAddress parse(std::string_view text);
    std::string to_string() const;
    Position position() const;
    friend auto operator<=>(const VertexAddress&, const VertexAddress&) = default;
};

struct Diagnostic {
    /// Node path such as "$.families[1].child".
    std::string path;
    std::string message;
};

std::vector<Diagnostic> validate(const Presentation& p);
/// Throws InputError listing every diagnostic.
void require_valid(const Presentation& p);

/// Node reached by following family indices from the root. Throws InputError.
const Presentation& node_at(const Presentation& root, const std::vector<std::size_t>& path);
/// Checks family and copy indices and the terminal. Throws InputError.
void require_address(const Presentation& root, const VertexAddress& address);

SymbolicCardinal position_degree(const Presentation& root, const Position& position);
/// Local degree + sum over families of multiplicity * attachment degree
/// + attachment degree toward the parent.
SymbolicCardinal symbolic_degree(const Presentation& root, const VertexAddress& address);

struct AtlasEntry {
    Position position;
    /// Number of vertices at this position: product of multiplicities on the path.
    SymbolicCardinal multiplicity;
    SymbolicCardinal degree;
    /// Neighbours of one vertex at this position that have infinite degree.
    SymbolicCardinal infinite_neighbours;
    bool in_v_infinity = false;
    bool in_v_star = false;
};

struct DegreeAtlas {
    std::vector<AtlasEntry> entries;
    SymbolicCardinal v_infinity_size;
    SymbolicCardinal v_star_size;

    const AtlasEntry& at(const Position& position) const;
};

/// Infinite-degree positions, and those among them with finitely many
/// infinite-degree neighbours.
DegreeAtlas degree_atlas(const Presentation& p);
/// Whether the atlas puts only finitely many vertices in V*.
bool is_in_W(const Presentation& p);

/// True when no omega family occurs with nonzero multiplicity along its path.
bool is_finite(const Presentation& p);

/// 0 for finite presentations; otherwise the maximum of child ranks over
/// finite families and 1 + child rank over omega families. An upper bound on
/// the rank of the described graph; exact when every child is connected.
std::size_t structural_rank(const Presentation& p);

/// Subset-minimal part of the root separator after whose deletion every
/// component has smaller structural rank. Finite-degree separator vertices
/// are merged into their adjacent components, lexicographically. Throws
/// InputError on rank-0 input, or when the root separator itself does not
/// witness the structural rank (a finite family carrying a child of full rank).
VertexSet minimal_separator(const Presentation& p);

struct Instantiation {
    FiniteGraph graph;
    std::map<Vertex, VertexAddress> addresses;
};

/// Replaces every omega multiplicity by n. Vertex names are address strings.
Instantiation instantiate(const Presentation& p, std::size_t n);

/// Local name of a boundary vertex as it appears in an address terminal.
std::string terminal_name(const Presentation& node, const Vertex& v);

} // namespace ufp
