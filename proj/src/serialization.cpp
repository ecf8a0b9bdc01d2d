#include "ufp/serialization.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "ufp/errors.hpp"

namespace ufp {

namespace {

[[noreturn]] void bad(const std::string& where, const std::string& what) { throw InputError(where + ": " + what); }

const Json& member(const Json& j, const char* key, const std::string& where) {
    if (!j.is_object()) bad(where, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) bad(where, std::string("missing key \"") + key + "\"");
    return *it;
}

std::string string_at(const Json& j, const std::string& where) {
    if (!j.is_string()) bad(where, "expected a string");
    return j.get<std::string>();
}

std::uint64_t natural_at(const Json& j, const std::string& where) {
    if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
        bad(where, "expected a non-negative integer");
    return j.get<std::uint64_t>();
}

Json cardinal(SymbolicCardinal c) { return c.is_omega() ? Json("omega") : Json(c.value()); }

Json vertex_list(const VertexSet& vs) { return Json(std::vector<Vertex>(vs.begin(), vs.end())); }

Partition colours_from_json(const Json& j, const std::string& where) {
    if (!j.is_object()) bad(where, "expected an object of 0/1 sides");
    Partition out;
    for (const auto& [v, side] : j.items()) {
        const std::string at = where + "." + v;
        if (!side.is_number_integer()) bad(at, "side must be 0 or 1");
        try {
            out.set(v, side_from_int(side.get<long long>()));
        } catch (const InputError&) {
            bad(at, "side must be 0 or 1");
        }
    }
    return out;
}

Json colours_to_json(const Partition& pi) {
    Json out = Json::object();
    for (const auto& [v, s] : pi.assignments()) out[v] = to_int(s);
    return out;
}

FiniteGraph graph_at(const Json& j, const std::string& where) {
    const Json& vs = member(j, "vertices", where);
    if (!vs.is_array()) bad(where + ".vertices", "expected an array");
    std::vector<Vertex> vertices;
    for (std::size_t i = 0; i < vs.size(); ++i)
        vertices.push_back(string_at(vs[i], where + ".vertices[" + std::to_string(i) + "]"));
    std::vector<Edge> edges;
    if (auto it = j.find("edges"); it != j.end()) {
        if (!it->is_array()) bad(where + ".edges", "expected an array");
        for (std::size_t i = 0; i < it->size(); ++i) {
            const std::string at = where + ".edges[" + std::to_string(i) + "]";
            const Json& e = (*it)[i];
            if (!e.is_array() || e.size() != 2) bad(at, "expected a pair of vertices");
            edges.emplace_back(string_at(e[0], at + "[0]"), string_at(e[1], at + "[1]"));
        }
    }
    try {
        return FiniteGraph(vertices, edges);
    } catch (const InputError& err) {
        bad(where, err.what());
    }
}

PresentationPtr presentation_at(const Json& j, const std::string& where) {
    const std::string type = string_at(member(j, "type", where), where + ".type");
    if (type == "leaf") return Presentation::leaf(graph_at(member(j, "graph", where), where + ".graph"));
    if (type != "glue") bad(where + ".type", "expected \"leaf\" or \"glue\"");
    FiniteGraph s = graph_at(member(j, "s", where), where + ".s");
    std::vector<CopyFamily> families;
    if (auto it = j.find("families"); it != j.end()) {
        if (!it->is_array()) bad(where + ".families", "expected an array");
        for (std::size_t i = 0; i < it->size(); ++i) {
            const std::string at = where + ".families[" + std::to_string(i) + "]";
            const Json& f = (*it)[i];
            CopyFamily fam;
            const Json& m = member(f, "multiplicity", at);
            if (m.is_string()) {
                const std::string text = m.get<std::string>();
                if (text != "omega" && text != "Omega" && text != "ω")
                    bad(at + ".multiplicity", "expected \"omega\" or a non-negative integer");
                fam.multiplicity = SymbolicCardinal::omega();
            } else {
                fam.multiplicity = SymbolicCardinal(natural_at(m, at + ".multiplicity"));
            }
            fam.child = presentation_at(member(f, "child", at), at + ".child");
            const Json& att = member(f, "attachment", at);
            if (!att.is_array()) bad(at + ".attachment", "expected an array");
            for (std::size_t k = 0; k < att.size(); ++k) {
                const std::string ak = at + ".attachment[" + std::to_string(k) + "]";
                if (!att[k].is_array() || att[k].size() != 2) bad(ak, "expected a pair [s, b]");
                if (!fam.attachment.emplace(string_at(att[k][0], ak), string_at(att[k][1], ak)).second)
                    bad(ak, "repeated attachment pair");
            }
            families.push_back(std::move(fam));
        }
    }
    return Presentation::glue(std::move(s), std::move(families));
}

SymbolicPartitionPtr symbolic_at(const Json& j, const std::string& where) {
    if (!j.is_object()) bad(where, "expected an object");
    if (j.contains("leaf_colours"))
        return SymbolicPartition::make_leaf(colours_from_json(j["leaf_colours"], where + ".leaf_colours"));
    Partition colours = colours_from_json(member(j, "s_colours", where), where + ".s_colours");
    std::vector<FamilyColouring> fams;
    if (auto it = j.find("families"); it != j.end()) {
        if (!it->is_array()) bad(where + ".families", "expected an array");
        for (std::size_t i = 0; i < it->size(); ++i) {
            const std::string at = where + ".families[" + std::to_string(i) + "]";
            const Json& f = (*it)[i];
            FamilyColouring fc;
            fc.default_colouring = symbolic_at(member(f, "default", at), at + ".default");
            if (auto ex = f.find("exceptions"); ex != f.end()) {
                if (!ex->is_object()) bad(at + ".exceptions", "expected an object keyed by copy index");
                for (const auto& [key, value] : ex->items()) {
                    std::size_t idx = 0;
                    auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), idx);
                    if (key.empty() || ec != std::errc() || ptr != key.data() + key.size())
                        bad(at + ".exceptions", "copy index \"" + key + "\" is not a natural number");
                    fc.exceptions[idx] = symbolic_at(value, at + ".exceptions." + key);
                }
            }
            fams.push_back(std::move(fc));
        }
    }
    return SymbolicPartition::make_glue(std::move(colours), std::move(fams));
}

} // namespace

Json to_json(const FiniteGraph& g) {
    Json edges = Json::array();
    for (const auto& [u, v] : g.edges()) edges.push_back({u, v});
    return {{"vertices", vertex_list(g.vertices())}, {"edges", edges}};
}

FiniteGraph graph_from_json(const Json& j) { return graph_at(j, "$"); }

Json to_json(const Partition& pi) { return {{"assignments", colours_to_json(pi)}}; }

Partition partition_from_json(const Json& j) {
    return colours_from_json(member(j, "assignments", "$"), "$.assignments");
}

Json to_json(const SolveTrace& trace) {
    Json steps = Json::array();
    for (const auto& s : trace.steps) steps.push_back({{"flipped", vertex_list(s.flipped)}, {"potential", s.potential}});
    return {{"steps", steps}};
}

Json to_json(const WitnessNode& node) {
    Json children = Json::array();
    for (const auto& c : node.children) children.push_back(to_json(c));
    return {{"vertices", vertex_list(node.vertices)},
            {"rank", node.rank},
            {"separator", vertex_list(node.separator)},
            {"children", children}};
}

Json to_json(const RankResult& result) { return {{"rank", result.rank}, {"witness", to_json(result.witness)}}; }

Json to_json(const Presentation& p) {
    if (p.is_leaf()) return {{"type", "leaf"}, {"graph", to_json(p.local())}};
    Json families = Json::array();
    for (const auto& fam : p.families()) {
        Json att = Json::array();
        for (const auto& [s, b] : fam.attachment) att.push_back({s, b});
        families.push_back({{"multiplicity", cardinal(fam.multiplicity)}, {"child", to_json(*fam.child)}, {"attachment", att}});
    }
    return {{"type", "glue"}, {"s", to_json(p.local())}, {"families", families}};
}

PresentationPtr presentation_from_json(const Json& j) { return presentation_at(j, "$"); }

Json to_json(const SymbolicPartition& sigma) {
    if (sigma.leaf) return {{"leaf_colours", colours_to_json(sigma.colours)}};
    Json families = Json::array();
    for (const auto& fc : sigma.families) {
        Json exceptions = Json::object();
        for (const auto& [idx, exc] : fc.exceptions) exceptions[std::to_string(idx)] = to_json(*exc);
        families.push_back({{"default", to_json(*fc.default_colouring)}, {"exceptions", exceptions}});
    }
    return {{"s_colours", colours_to_json(sigma.colours)}, {"families", families}};
}

SymbolicPartitionPtr symbolic_partition_from_json(const Json& j) { return symbolic_at(j, "$"); }

Json to_json(const DegreeAtlas& atlas) {
    Json entries = Json::array();
    for (const auto& e : atlas.entries)
        entries.push_back({{"position", e.position.to_string()},
                           {"multiplicity", cardinal(e.multiplicity)},
                           {"degree", cardinal(e.degree)},
                           {"infinite_neighbours", cardinal(e.infinite_neighbours)},
                           {"in_v_infinity", e.in_v_infinity},
                           {"in_v_star", e.in_v_star}});
    return {{"entries", entries},
            {"v_infinity", cardinal(atlas.v_infinity_size)},
            {"v_star", cardinal(atlas.v_star_size)},
            {"in_w", atlas.v_star_size.is_finite()}};
}

Json to_json(const CheckReport& report) {
    Json entries = Json::array();
    for (const auto& e : report.entries)
        entries.push_back({{"address", e.address},
                           {"degree", cardinal(e.degree)},
                           {"opponents", cardinal(e.opponents)},
                           {"friends", cardinal(e.friends)},
                           {"happy", e.happy},
                           {"fixed", e.fixed}});
    return {{"entries", entries}, {"unhappy", report.unhappy}, {"ok", report.ok()}};
}

namespace {

Json signature_json(const OpponentSignature& sig) {
    Json opp = Json::object();
    for (const auto& [v, n] : sig.opponents) opp[v] = n;
    return {{"opponents", opp}, {"child_happy", sig.child_happy}};
}

} // namespace

Json to_json(const SolverState& state) {
    Json signatures = Json::array();
    for (const auto& fam : state.signatures) {
        Json list = Json::array();
        for (const auto& sig : fam) list.push_back(signature_json(sig));
        signatures.push_back(list);
    }
    Json defaults = Json::array();
    for (const auto& sig : state.chosen_defaults) defaults.push_back(signature_json(sig));
    return {{"s0", vertex_list(state.classes.finite_degree)},
            {"s1", vertex_list(state.classes.omega_degree)},
            {"signatures", signatures},
            {"chosen_defaults", defaults},
            {"exceptions", state.exceptions},
            {"unhappy", state.unhappy},
            {"used_exceptions", state.used_exceptions}};
}

Json to_json(const KapomWitness& witness) {
    return {{"family", witness.family},
            {"copies", witness.copies},
            {"group_degree", witness.group_degree},
            {"bound", witness.bound},
            {"opponents", witness.opponents}};
}

Json to_json(const CrossValReport& report) {
    Json rows = Json::array();
    for (const auto& row : report.rows) {
        Json samples = Json::object();
        for (const auto& [address, s] : row.samples)
            samples[address] = {{"degree", s.degree}, {"opponents", s.opponents}, {"happy", s.happy}};
        rows.push_back({{"n", row.n}, {"vertices", row.vertices}, {"edges", row.edges}, {"addresses", samples}});
    }
    Json verdicts = Json::array();
    for (const auto& v : report.verdicts) {
        Json j = {{"address", v.address}, {"omega", v.omega}, {"pass", v.pass}};
        if (v.omega) {
            j["c"] = v.c;
            j["e"] = v.e;
        } else {
            j["n0"] = v.n0 ? Json(*v.n0) : Json(nullptr);
        }
        if (!v.detail.empty()) j["detail"] = v.detail;
        verdicts.push_back(std::move(j));
    }
    Json out = {{"rows", rows}, {"verdicts", verdicts}, {"warnings", report.warnings}, {"pass", report.pass}};
    if (report.failure) out["failure"] = {{"address", report.failure->first}, {"n", report.failure->second}};
    return out;
}

std::string dump_canonical(const Json& j) { return j.dump(2) + "\n"; }

Json parse_json_text(const std::string& text, const std::string& origin) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& err) {
        throw InputError(origin + ": malformed JSON: " + err.what());
    }
}

Json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_json_text(buffer.str(), path.string());
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path.string());
    out << dump_canonical(j);
}

} // namespace ufp
