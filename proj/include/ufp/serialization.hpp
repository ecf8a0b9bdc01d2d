#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "ufp/finite_solver.hpp"
#include "ufp/graph.hpp"
#include "ufp/presentation.hpp"
#include "ufp/rank.hpp"
#include "ufp/symbolic_solver.hpp"
#include "ufp/xval.hpp"

namespace ufp {

using Json = nlohmann::json;

// Readers throw InputError naming the offending JSON path.

Json to_json(const FiniteGraph& g);
FiniteGraph graph_from_json(const Json& j);

Json to_json(const Partition& pi);
Partition partition_from_json(const Json& j);

Json to_json(const SolveTrace& trace);
Json to_json(const WitnessNode& node);
Json to_json(const RankResult& result);

Json to_json(const Presentation& p);
PresentationPtr presentation_from_json(const Json& j);

Json to_json(const SymbolicPartition& sigma);
SymbolicPartitionPtr symbolic_partition_from_json(const Json& j);

Json to_json(const DegreeAtlas& atlas);
Json to_json(const CheckReport& report);
Json to_json(const SolverState& state);
Json to_json(const KapomWitness& witness);
Json to_json(const CrossValReport& report);

/// Sorted keys, two-space indent, trailing newline.
std::string dump_canonical(const Json& j);
Json parse_json_text(const std::string& text, const std::string& origin = "input");
Json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& j);

} // namespace ufp
