#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "ufp/cardinal.hpp"
#include "ufp/graph.hpp"
#include "ufp/presentation.hpp"

namespace ufp {

struct SymbolicPartition;
using SymbolicPartitionPtr = std::shared_ptr<const SymbolicPartition>;

/// Colouring of the copies of one family: a default used for every copy not
/// listed among the exceptions.
struct FamilyColouring {
    SymbolicPartitionPtr default_colouring;
    std::map<std::size_t, SymbolicPartitionPtr> exceptions;
};

/// Two-colouring of a presentation, shaped like it: leaf colours at a leaf;
/// separator colours plus one FamilyColouring per family at a glue node.
struct SymbolicPartition {
    bool leaf = true;
    Partition colours;
    std::vector<FamilyColouring> families;

    static SymbolicPartitionPtr make_leaf(Partition colours);
    static SymbolicPartitionPtr make_glue(Partition colours, std::vector<FamilyColouring> families);

    /// Global 0 <-> 1 exchange, at every level.
    SymbolicPartition swapped() const;
    bool uses_exceptions() const;

    friend bool operator==(const SymbolicPartition& a, const SymbolicPartition& b);
};

struct SolverOptions {
    /// Leaves up to this order are enumerated exhaustively; larger leaves get
    /// one colouring from local search.
    std::size_t max_leaf = 6;
    /// Exceptions allowed per family.
    std::size_t max_exceptions = 8;
    /// Separators up to this order are enumerated exhaustively.
    std::size_t max_separator = 16;
};

/// Fixed colours for a pre-partition problem, keyed by concrete address.
using FixedColours = std::map<VertexAddress, Side>;

struct SeparatorClasses {
    /// Root separator vertices of finite symbolic degree.
    VertexSet finite_degree;
    /// Root separator vertices of degree omega.
    VertexSet omega_degree;
};

/// Splits the root separator by degree. With countably many components and
/// finitely many attachments per copy, a vertex collects its full degree
/// inside finitely many components exactly when its degree is finite.
/// Throws InputError for a leaf.
SeparatorClasses classify_S(const Presentation& p);

/// Opponents one copy of a family gives each root separator vertex.
struct OpponentSignature {
    std::map<Vertex, std::size_t> opponents;
    /// Every vertex inside the copy is happy.
    bool child_happy = true;

    friend auto operator<=>(const OpponentSignature&, const OpponentSignature&) = default;
};

/// Signatures achievable by a copy of `family` whose vertices are all happy,
/// given a total colouring of the root separator. Sorted; no duplicates.
std::vector<OpponentSignature> family_signatures(const Presentation& p, std::size_t family,
                                                 const Partition& separator_colours,
                                                 const SolverOptions& options = {});

struct CheckEntry {
    /// Address pattern; "[*]" marks the default copy of a family.
    std::string address;
    SymbolicCardinal degree;
    SymbolicCardinal opponents;
    SymbolicCardinal friends;
    bool happy = true;
    bool fixed = false;
};

struct CheckReport {
    std::vector<CheckEntry> entries;
    /// Addresses of entries that are unhappy and not fixed.
    std::vector<std::string> unhappy;

    bool ok() const noexcept { return unhappy.empty(); }
};

/// Counts opponents and friends exactly for every vertex pattern: defaults
/// count once per copy they cover, exceptions individually. Finite degree:
/// happy iff 2 * opponents >= degree. Degree omega: happy iff opponents are
/// omega. Throws InputError when `sigma` does not fit the shape of `p`.
CheckReport check_symbolic(const Presentation& p, const SymbolicPartition& sigma, const FixedColours& fixed = {});

struct SolverState {
    SeparatorClasses classes;
    /// Signatures available to each root family under the chosen root colouring.
    std::vector<std::vector<OpponentSignature>> signatures;
    /// Signature of each root family's default colouring.
    std::vector<OpponentSignature> chosen_defaults;
    /// Exception copy indices per root family.
    std::vector<std::vector<std::size_t>> exceptions;
    /// Vertex patterns left unhappy; empty after every successful solve.
    std::vector<std::string> unhappy;
    bool used_exceptions = false;
};

struct SymbolicSolution {
    SymbolicPartition sigma;
    SolverState state;
};

/// Searches root separator colourings in binary order (first vertex fixed to
/// side 0 by colour symmetry) and, per family, default signatures in
/// lexicographic order, adding exceptions to finite families only when exact
/// counting at a finite-degree separator vertex needs them. Omega-degree
/// vertices are satisfied by an omega family whose default copy gives them an
/// opponent. A leaf root, or a glue root without families, goes to the finite
/// solver. Throws UnsatError if nothing fits the search bounds, and
/// InvariantViolation if the result fails the symbolic check.
SymbolicSolution solve_unfriendly(const Presentation& p, const SolverOptions& options = {});

/// As solve_unfriendly, keeping `fixed` and requiring happiness only outside
/// it. Every copy containing a fixed address becomes an exception.
SymbolicSolution solve_pre_partition(const Presentation& p, const FixedColours& fixed,
                                     const SolverOptions& options = {});

/// Side of a concrete vertex under sigma.
Side colour_at(const Presentation& p, const SymbolicPartition& sigma, const VertexAddress& address);

struct KapomWitness {
    std::size_t family = 0;
    std::vector<std::size_t> copies;
    /// Edges from the separator vertex into the chosen copies.
    std::size_t group_degree = 0;
    /// Degree inside the separator plus degree into all finite families.
    std::size_t bound = 0;
    /// Opponents the chosen copies give the vertex under sigma.
    std::size_t opponents = 0;
};

/// A finite group of copies from one omega family into which s has strictly
/// more edges than into the separator and all finite families together.
/// Prefers the first omega family whose default copy gives s an opponent and
/// skips exception copies. Throws InputError unless s has degree omega.
KapomWitness witness_kapom(const Presentation& p, const SymbolicPartition& sigma, const Vertex& s);

/// Colouring of instantiate(p, n): defaults replicated, exceptions placed at
/// their copy indices. Exceptions at indices >= n are dropped and reported in
/// `dropped`.
Partition instantiate_partition(const Presentation& p, const SymbolicPartition& sigma, std::size_t n,
                                std::vector<std::string>* dropped = nullptr);

} // namespace ufp
