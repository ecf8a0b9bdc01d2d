#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <memory>
#include <optional>

#include <CLI11.hpp>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include "ufp/errors.hpp"
#include "ufp/finite_solver.hpp"
#include "ufp/presentation.hpp"
#include "ufp/rank.hpp"
#include "ufp/serialization.hpp"
#include "ufp/symbolic_solver.hpp"
#include "ufp/xval.hpp"

namespace ufp {

namespace {

struct Settings {
    std::string seed_partition;
    std::size_t max_leaf = 6;
    std::size_t max_exceptions = 8;
    bool json = false;

    std::string input;
    std::string second;
    std::string output;
    std::string trace_output;
    std::string fixed;
    std::string sigma;
    std::string base = "edgeless";
    std::size_t k = 1;
    bool naive = false;
    std::size_t n = 3;
    std::size_t n_min = 1;
    std::size_t n_max = 8;

    SolverOptions solver() const {
        SolverOptions o;
        o.max_leaf = max_leaf;
        o.max_exceptions = max_exceptions;
        return o;
    }
};

std::shared_ptr<spdlog::logger> make_logger(std::ostream& err) {
    auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
    auto logger = std::make_shared<spdlog::logger>("workbench", sink);
    logger->set_pattern("[%l] %v");
    logger->set_level(spdlog::level::warn);
    if (const char* env = std::getenv("WORKBENCH_LOG")) {
        const std::string level(env);
        if (level == "quiet")
            logger->set_level(spdlog::level::off);
        else if (level == "info")
            logger->set_level(spdlog::level::info);
        else if (level == "trace")
            logger->set_level(spdlog::level::trace);
    }
    return logger;
}

void print_partition(std::ostream& out, const Partition& pi) {
    for (const auto& [v, s] : pi.assignments()) out << v << ' ' << to_int(s) << '\n';
}

FixedColours read_fixed(const std::string& path) {
    FixedColours fixed;
    if (path.empty()) return fixed;
    const Json j = read_json_file(path);
    if (!j.is_object()) throw InputError(path + ": expected an object mapping addresses to sides");
    for (const auto& [address, side] : j.items()) {
        if (!side.is_number_integer()) throw InputError(path + ": side of '" + address + "' must be 0 or 1");
        fixed[VertexAddress::parse(address)] = side_from_int(side.get<long long>());
    }
    return fixed;
}

class Commands {
public:
    Commands(const Settings& s, std::ostream& out, spdlog::logger& log) : s_(s), out_(out), log_(log) {}

    int solve_finite() {
        const FiniteGraph g = graph_from_json(read_json_file(s_.input));
        std::optional<Partition> seed;
        if (!s_.seed_partition.empty()) seed = partition_from_json(read_json_file(s_.seed_partition));
        const SolveResult r = unfriendly_partition(g, seed);
        log_.info("local search made {} flips, cut size {}", r.trace.flip_count(), cut_size(g, r.partition));
        if (!s_.output.empty()) write_json_file(s_.output, to_json(r.partition));
        if (!s_.trace_output.empty()) write_json_file(s_.trace_output, to_json(r.trace));
        if (s_.json)
            out_ << dump_canonical({{"partition", to_json(r.partition)}, {"trace", to_json(r.trace)}});
        else if (s_.output.empty())
            print_partition(out_, r.partition);
        return 0;
    }

    int extend() {
        const FiniteGraph g = graph_from_json(read_json_file(s_.input));
        const Partition fixed = partition_from_json(read_json_file(s_.second));
        const SolveResult r = extend_pre_partition(g, fixed);
        log_.info("extension made {} flips", r.trace.flip_count());
        if (!s_.output.empty()) write_json_file(s_.output, to_json(r.partition));
        if (!s_.trace_output.empty()) write_json_file(s_.trace_output, to_json(r.trace));
        if (s_.json)
            out_ << dump_canonical({{"partition", to_json(r.partition)}, {"trace", to_json(r.trace)}});
        else if (s_.output.empty())
            print_partition(out_, r.partition);
        return 0;
    }

    int rank() {
        const FiniteGraph g = graph_from_json(read_json_file(s_.input));
        const BaseFamily base = BaseFamily::parse(s_.base);
        const auto r = s_.naive ? naive_rank(g, base, s_.k) : bounded_rank(g, base, s_.k);
        if (!r) {
            if (s_.json)
                out_ << dump_canonical({{"rank", nullptr}});
            else
                out_ << "no rank with separators of size <= " << s_.k << '\n';
            return 1;
        }
        if (s_.json)
            out_ << dump_canonical(to_json(*r));
        else
            out_ << r->rank << '\n';
        return 0;
    }

    int srank() {
        const PresentationPtr p = load_presentation(s_.input);
        const std::size_t r = structural_rank(*p);
        if (s_.json)
            out_ << dump_canonical({{"structural_rank", r}});
        else
            out_ << r << '\n';
        return 0;
    }

    int atlas() {
        const PresentationPtr p = load_presentation(s_.input);
        const DegreeAtlas a = degree_atlas(*p);
        if (s_.json) {
            out_ << dump_canonical(to_json(a));
            return 0;
        }
        for (const auto& e : a.entries)
            out_ << e.position.to_string() << "  x" << e.multiplicity.to_string() << "  degree "
                 << e.degree.to_string() << (e.in_v_star ? "  V*" : e.in_v_infinity ? "  V-inf" : "") << '\n';
        out_ << "V-inf = " << a.v_infinity_size.to_string() << '\n';
        out_ << "V* = " << a.v_star_size.to_string() << '\n';
        out_ << "in-W = " << (a.v_star_size.is_finite() ? "true" : "false") << '\n';
        return 0;
    }

    int solve() {
        const PresentationPtr p = load_presentation(s_.input);
        const FixedColours fixed = read_fixed(s_.fixed);
        const SymbolicSolution sol =
            fixed.empty() ? solve_unfriendly(*p, s_.solver()) : solve_pre_partition(*p, fixed, s_.solver());
        log_.info("solved; exceptions used: {}", sol.state.used_exceptions);
        const Json sigma = to_json(sol.sigma);
        if (!s_.output.empty()) write_json_file(s_.output, sigma);
        if (s_.json)
            out_ << dump_canonical({{"sigma", sigma}, {"state", to_json(sol.state)}});
        else if (s_.output.empty())
            out_ << dump_canonical(sigma);
        else
            out_ << "ok: every position happy\n";
        return 0;
    }

    int check() {
        const PresentationPtr p = load_presentation(s_.input);
        const SymbolicPartitionPtr sigma = symbolic_partition_from_json(read_json_file(s_.second));
        const CheckReport report = check_symbolic(*p, *sigma, read_fixed(s_.fixed));
        if (s_.json) {
            out_ << dump_canonical(to_json(report));
        } else if (report.ok()) {
            out_ << "ok: " << report.entries.size() << " positions happy\n";
        } else {
            for (const auto& a : report.unhappy) out_ << "unhappy " << a << '\n';
        }
        return report.ok() ? 0 : 1;
    }

    int instantiate_cmd() {
        const PresentationPtr p = load_presentation(s_.input);
        const Instantiation inst = instantiate(*p, s_.n);
        Json result = {{"graph", to_json(inst.graph)}};
        if (!s_.sigma.empty()) {
            const SymbolicPartitionPtr sigma = symbolic_partition_from_json(read_json_file(s_.sigma));
            std::vector<std::string> dropped;
            result["partition"] = to_json(instantiate_partition(*p, *sigma, s_.n, &dropped));
            for (const auto& w : dropped) log_.warn("{}", w);
        }
        if (!s_.output.empty()) write_json_file(s_.output, result);
        if (s_.json || s_.output.empty())
            out_ << dump_canonical(result);
        else
            out_ << inst.graph.order() << " vertices, " << inst.graph.size() << " edges\n";
        return 0;
    }

    int xval() {
        const PresentationPtr p = load_presentation(s_.input);
        const SymbolicPartitionPtr sigma = symbolic_partition_from_json(read_json_file(s_.second));
        const CheckReport check = check_symbolic(*p, *sigma);
        if (!check.ok()) throw InputError("sigma does not pass the symbolic check; first unhappy " + check.unhappy.front());
        const CrossValReport report = cross_validate(*p, *sigma, s_.n_min, s_.n_max);
        for (const auto& w : report.warnings) log_.warn("{}", w);
        if (s_.json) {
            out_ << dump_canonical(to_json(report));
        } else {
            for (const auto& row : report.rows)
                out_ << "n=" << row.n << "  " << row.vertices << " vertices, " << row.edges << " edges\n";
            std::size_t n0 = s_.n_min;
            for (const auto& v : report.verdicts)
                if (!v.omega && v.n0) n0 = std::max(n0, *v.n0);
            out_ << "finite-degree addresses happy from n0=" << n0 << '\n';
            for (const auto& v : report.verdicts)
                if (v.omega) out_ << v.address << "  opponents >= " << v.c << "*(n-" << v.e << ")\n";
            if (report.failure)
                out_ << "FAIL " << report.failure->first << " at n=" << report.failure->second << '\n';
            else
                out_ << "pass\n";
        }
        return report.pass ? 0 : 1;
    }

private:
    static PresentationPtr load_presentation(const std::string& path) {
        PresentationPtr p = presentation_from_json(read_json_file(path));
        require_valid(*p);
        return p;
    }

    const Settings& s_;
    std::ostream& out_;
    spdlog::logger& log_;
};

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Settings s;
    CLI::App app{"Unfriendly partition workbench", "ufp-workbench"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--seed-partition", s.seed_partition, "Starting partition for solve-finite");
    app.add_option("--max-leaf", s.max_leaf, "Largest leaf enumerated exhaustively")->capture_default_str();
    app.add_option("--max-exceptions", s.max_exceptions, "Exceptions allowed per family")->capture_default_str();
    app.add_flag("--json", s.json, "Machine-readable output");

    auto* solve_finite = app.add_subcommand("solve-finite", "Unfriendly partition of a finite graph");
    solve_finite->add_option("graph", s.input)->required();
    solve_finite->add_option("-o,--output", s.output, "Write the partition here");
    solve_finite->add_option("--trace", s.trace_output, "Write the flip trace here");

    auto* extend = app.add_subcommand("extend", "Extend a partial partition so every free vertex is happy");
    extend->add_option("graph", s.input)->required();
    extend->add_option("fixed", s.second, "Partition JSON of the fixed vertices")->required();
    extend->add_option("-o,--output", s.output);
    extend->add_option("--trace", s.trace_output);

    auto* rank = app.add_subcommand("rank", "Bounded separator rank of a finite graph");
    rank->add_option("graph", s.input)->required();
    rank->add_option("--base", s.base, "edgeless, order<=p, maxdeg<=d or all-finite")->capture_default_str();
    rank->add_option("--k", s.k, "Largest separator")->capture_default_str();
    rank->add_flag("--naive", s.naive, "Use the unmemoised recursion");

    auto* srank = app.add_subcommand("srank", "Structural rank of a presentation");
    srank->add_option("presentation", s.input)->required();

    auto* atlas = app.add_subcommand("atlas", "Degree atlas of a presentation");
    atlas->add_option("presentation", s.input)->required();

    auto* solve = app.add_subcommand("solve", "Symbolic unfriendly partition of a presentation");
    solve->add_option("presentation", s.input)->required();
    solve->add_option("-o,--output", s.output, "Write sigma here");
    solve->add_option("--fixed", s.fixed, "JSON object mapping addresses to fixed sides");

    auto* check = app.add_subcommand("check", "Check a symbolic partition");
    check->add_option("presentation", s.input)->required();
    check->add_option("sigma", s.second)->required();
    check->add_option("--fixed", s.fixed, "Addresses exempt from the happiness requirement");

    auto* inst = app.add_subcommand("instantiate", "Finite graph with every omega replaced by n");
    inst->add_option("presentation", s.input)->required();
    inst->add_option("--n", s.n)->capture_default_str();
    inst->add_option("--sigma", s.sigma, "Also instantiate this symbolic partition");
    inst->add_option("-o,--output", s.output);

    auto* xval = app.add_subcommand("xval", "Cross-validate sigma on instantiations");
    xval->add_option("presentation", s.input)->required();
    xval->add_option("sigma", s.second)->required();
    xval->add_option("--n-min", s.n_min)->capture_default_str();
    xval->add_option("--n-max", s.n_max)->capture_default_str();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    auto logger = make_logger(err);
    Commands cmd(s, out, *logger);
    try {
        if (*solve_finite) return cmd.solve_finite();
        if (*extend) return cmd.extend();
        if (*rank) return cmd.rank();
        if (*srank) return cmd.srank();
        if (*atlas) return cmd.atlas();
        if (*solve) return cmd.solve();
        if (*check) return cmd.check();
        if (*inst) return cmd.instantiate_cmd();
        if (*xval) return cmd.xval();
    } catch (const InputError& e) {
        logger->error("{}", e.what());
        return 2;
    } catch (const CapacityError& e) {
        logger->error("{}", e.what());
        return 3;
    } catch (const UnsatError& e) {
        logger->error("{}", e.what());
        return 1;
    } catch (const std::exception& e) {
        logger->critical("internal error: {}", e.what());
        return 4;
    }
    return 2;
}

} // namespace ufp
