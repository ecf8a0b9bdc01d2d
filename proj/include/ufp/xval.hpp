#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ufp/presentation.hpp"
#include "ufp/symbolic_solver.hpp"

namespace ufp {

struct AddressSample {
    std::size_t degree = 0;
    std::size_t opponents = 0;
    bool happy = true;
};

struct CrossValRow {
    std::size_t n = 0;
    std::size_t vertices = 0;
    std::size_t edges = 0;
    /// Keyed by address string; addresses absent at this n are missing.
    std::map<std::string, AddressSample> samples;
};

struct CrossValVerdict {
    std::string address;
    bool omega = false;
    /// Finite degree: first n from which the address is happy whenever present.
    std::optional<std::size_t> n0;
    /// Degree omega: omega families whose default copy gives an opponent.
    std::size_t c = 0;
    /// Degree omega: most exceptions among those families.
    std::size_t e = 0;
    bool pass = true;
    std::string detail;
};

struct CrossValReport {
    std::vector<CrossValRow> rows;
    std::vector<CrossValVerdict> verdicts;
    std::vector<std::string> warnings;
    bool pass = true;
    /// First offending (address, n).
    std::optional<std::pair<std::string, std::size_t>> failure;
};

/// Instantiates p and sigma for every n in [n_min, n_max] and checks the
/// finite graphs against the symbolic verdict. Finite-degree addresses must
/// have their symbolic degree and be happy at n_max. Omega-degree addresses
/// need c >= 1 and opponents(n) >= c * (n - e), nondecreasing in n.
CrossValReport cross_validate(const Presentation& p, const SymbolicPartition& sigma, std::size_t n_min,
                              std::size_t n_max);

} // namespace ufp
