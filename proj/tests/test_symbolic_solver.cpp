#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "ufp/errors.hpp"
#include "ufp/finite_solver.hpp"
#include "ufp/symbolic_solver.hpp"

using namespace ufp;

namespace {

const SymbolicCardinal omega = SymbolicCardinal::omega();

PresentationPtr single_leaf() { return Presentation::leaf(FiniteGraph({"l"}, {})); }

PresentationPtr omega_star() {
    return Presentation::glue(FiniteGraph({"c"}, {}), {{single_leaf(), omega, {{"c", "l"}}}});
}

PresentationPtr t2() { return Presentation::glue(FiniteGraph({"s"}, {}), {{omega_star(), omega, {{"s", "c"}}}}); }

Partition make(std::initializer_list<std::pair<const Vertex, Side>> items) { return Partition(std::map<Vertex, Side>(items)); }

SymbolicPartitionPtr leaf_colour(Side side) { return SymbolicPartition::make_leaf(make({{"l", side}})); }

SymbolicPartitionPtr random_sigma(const Presentation& node, std::mt19937& rng) {
    Partition colours;
    for (const auto& v : node.local().vertices()) colours.set(v, rng() % 2 ? Side::one : Side::zero);
    if (node.is_leaf()) return SymbolicPartition::make_leaf(colours);
    std::vector<FamilyColouring> fams;
    for (const auto& f : node.families()) {
        FamilyColouring fc;
        fc.default_colouring = random_sigma(*f.child, rng);
        const std::uint64_t room = f.multiplicity.is_omega() ? 4 : std::min<std::uint64_t>(f.multiplicity.value(), 4);
        for (std::uint64_t i = 0; i < room; ++i)
            if (rng() % 4 == 0) fc.exceptions[i] = random_sigma(*f.child, rng);
        fams.push_back(std::move(fc));
    }
    return SymbolicPartition::make_glue(colours, std::move(fams));
}

// Pattern of a concrete address under sigma: exception copies keep their
// index, default copies become "[*]".
std::string pattern_of(const Presentation& p, const SymbolicPartition& sigma, const VertexAddress& a) {
    std::string out;
    const SymbolicPartition* s = &sigma;
    const Presentation* node = &p;
    for (const auto& step : a.steps) {
        const auto& fc = s->families[step.family];
        auto it = fc.exceptions.find(step.copy);
        out += std::to_string(step.family) + (it == fc.exceptions.end() ? "[*]/" : "[" + std::to_string(step.copy) + "]/");
        s = it == fc.exceptions.end() ? fc.default_colouring.get() : it->second.get();
        node = node->families()[step.family].child.get();
    }
    return out + terminal_name(*node, a.vertex);
}

// Compares every check_symbolic verdict with the instantiated graphs.
void compare_with_instances(const Presentation& p, const SymbolicPartition& sigma) {
    const CheckReport report = check_symbolic(p, sigma);
    std::map<std::string, const CheckEntry*> by_pattern;
    for (const auto& e : report.entries) by_pattern[e.address] = &e;

    const auto small = instantiate(p, 8);
    const auto big = instantiate(p, 12);
    const auto small_pi = instantiate_partition(p, sigma, 8);
    const auto big_pi = instantiate_partition(p, sigma, 12);
    const auto small_h = happiness(small.graph, small_pi, small.graph.vertices());
    const auto big_h = happiness(big.graph, big_pi, big.graph.vertices());
    for (const auto& [name, address] : small.addresses) {
        const std::string pattern = pattern_of(p, sigma, address);
        CAPTURE(pattern);
        REQUIRE(by_pattern.count(pattern));
        const CheckEntry& e = *by_pattern.at(pattern);
        const auto& hs = small_h.vertices.at(name);
        const auto& hb = big_h.vertices.at(name);
        if (e.degree.is_finite()) {
            CHECK(hs.degree == e.degree.value());
            CHECK(hs.opponents == e.opponents.value());
            CHECK(hs.happy == e.happy);
        } else {
            CHECK(hb.degree > hs.degree);
            CHECK(e.opponents.is_omega() == (hb.opponents > hs.opponents));
            CHECK(e.friends.is_omega() == (hb.friends > hs.friends));
        }
    }
}

} // namespace

TEST_SUITE("symbolic-solver") {

TEST_CASE("classify_S") {
    const auto star = classify_S(*omega_star());
    CHECK(star.omega_degree == VertexSet{"c"});
    CHECK(star.finite_degree.empty());

    const auto mixed = Presentation::glue(FiniteGraph({"s", "t"}, {{"s", "t"}}), {{single_leaf(), omega, {{"s", "l"}}}});
    CHECK(classify_S(*mixed).omega_degree == VertexSet{"s"});
    CHECK(classify_S(*mixed).finite_degree == VertexSet{"t"});

    const auto finite = Presentation::glue(FiniteGraph({"a", "b"}, {}), {{single_leaf(), SymbolicCardinal(3), {{"a", "l"}, {"b", "l"}}}});
    CHECK(classify_S(*finite).finite_degree == VertexSet{"a", "b"});
    CHECK_THROWS_AS(classify_S(*single_leaf()), InputError);
}

TEST_CASE("family_signatures") {
    const auto star = family_signatures(*omega_star(), 0, make({{"c", Side::zero}}));
    REQUIRE(star.size() == 1);
    CHECK(star[0].opponents.at("c") == 1);

    // Edge child attached at x; brute force over its four colourings.
    const auto edge = Presentation::leaf(FiniteGraph({"x", "y"}, {{"x", "y"}}));
    const auto p = Presentation::glue(FiniteGraph({"s"}, {}), {{edge, SymbolicCardinal(2), {{"s", "x"}}}});
    std::set<std::size_t> expected;
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            const int x_opp = (x != y) + (x != 0);
            const int y_opp = (x != y);
            if (2 * x_opp >= 2 && 2 * y_opp >= 1) expected.insert(static_cast<std::size_t>(x != 0));
        }
    std::set<std::size_t> got;
    for (const auto& sig : family_signatures(*p, 0, make({{"s", Side::zero}}))) got.insert(sig.opponents.at("s"));
    CHECK(got == expected);

    const auto loose = Presentation::glue(FiniteGraph({"s", "t"}, {}), {{edge, omega, {{"t", "x"}}}});
    for (const auto& sig : family_signatures(*loose, 0, make({{"s", Side::zero}, {"t", Side::one}})))
        CHECK(sig.opponents.at("s") == 0);

    CHECK_THROWS_AS(family_signatures(*omega_star(), 1, make({{"c", Side::zero}})), InputError);
    CHECK_THROWS_AS(family_signatures(*omega_star(), 0, Partition()), InputError);
}

TEST_CASE("solve_unfriendly on the omega-star and T2") {
    const auto star = solve_unfriendly(*omega_star());
    CHECK(star.sigma.colours.at("c") == Side::zero);
    CHECK(star.sigma.families[0].default_colouring->colours.at("l") == Side::one);
    CHECK(star.state.unhappy.empty());
    const auto star_check = check_symbolic(*omega_star(), star.sigma);
    CHECK(star_check.entries.front().opponents.is_omega());

    const auto tree = solve_unfriendly(*t2());
    CHECK(tree.sigma.colours.at("s") == Side::zero);
    const auto& child = *tree.sigma.families[0].default_colouring;
    CHECK(child.colours.at("c") == Side::one);
    CHECK(child.families[0].default_colouring->colours.at("l") == Side::zero);
    CHECK(tree.state.unhappy.empty());
    CHECK(tree.state.classes.omega_degree == VertexSet{"s"});
}

TEST_CASE("leaf presentations delegate to the finite solver") {
    const FiniteGraph tri = oracle::to_graph(oracle::complete(3));
    const auto sol = solve_unfriendly(*Presentation::leaf(tri));
    CHECK(sol.sigma.leaf);
    CHECK(sol.sigma.colours == unfriendly_partition(tri).partition);
    const auto bare = Presentation::glue(tri, {});
    CHECK(solve_unfriendly(*bare).sigma.colours == unfriendly_partition(tri).partition);
}

TEST_CASE("solve_pre_partition") {
    const auto centre = solve_pre_partition(*omega_star(), {{VertexAddress::parse("S:c"), Side::zero}});
    CHECK(centre.sigma.families[0].default_colouring->colours.at("l") == Side::one);

    const FixedColours fixed{{VertexAddress::parse("0[5]/l"), Side::zero}, {VertexAddress::parse("S:c"), Side::zero}};
    const auto sol = solve_pre_partition(*omega_star(), fixed);
    const auto& fam = sol.sigma.families[0];
    REQUIRE(fam.exceptions.size() == 1);
    CHECK(fam.exceptions.count(5) == 1);
    CHECK(fam.exceptions.at(5)->colours.at("l") == Side::zero);
    CHECK(fam.default_colouring->colours.at("l") == Side::one);
    CHECK(colour_at(*omega_star(), sol.sigma, VertexAddress::parse("0[5]/l")) == Side::zero);
    const auto report = check_symbolic(*omega_star(), sol.sigma, fixed);
    CHECK(report.ok());
    CHECK(report.entries.front().opponents.is_omega());
    CHECK(sol.state.used_exceptions);

    CHECK(solve_pre_partition(*t2(), {}).sigma == solve_unfriendly(*t2()).sigma);
}

TEST_CASE("fixed copies beyond the exception budget") {
    FixedColours fixed;
    for (std::size_t i = 0; i < 9; ++i) fixed[VertexAddress::parse("0[" + std::to_string(i) + "]/l")] = Side::zero;
    CHECK_THROWS_AS(solve_pre_partition(*omega_star(), fixed), CapacityError);
    SolverOptions roomy;
    roomy.max_exceptions = 9;
    CHECK(solve_pre_partition(*omega_star(), fixed, roomy).sigma.families[0].exceptions.size() == 9);
}

TEST_CASE("separator bound") {
    std::vector<Vertex> vs;
    for (int i = 0; i < 17; ++i) vs.push_back("s" + std::to_string(10 + i));
    const auto wide = Presentation::glue(FiniteGraph(vs, {}), {{single_leaf(), omega, {{"s10", "l"}}}});
    CHECK_THROWS_AS(solve_unfriendly(*wide), CapacityError);
    SolverOptions narrow;
    narrow.max_separator = 1;
    const auto two = Presentation::glue(FiniteGraph({"a", "b"}, {}), {{single_leaf(), omega, {{"a", "l"}}}});
    CHECK_THROWS_AS(solve_unfriendly(*two, narrow), CapacityError);
}

TEST_CASE("large leaves fall back to local search") {
    const auto p = oracle::load_presentation(oracle::corpus_dir() / "presentations" / "k33_leaves.json");
    SolverOptions opts;
    opts.max_leaf = 2;
    const auto sol = solve_unfriendly(*p, opts);
    CHECK(check_symbolic(*p, sol.sigma).ok());
}

TEST_CASE("check_symbolic verdicts") {
    const auto good = SymbolicPartition::make_glue(make({{"c", Side::zero}}), {{leaf_colour(Side::one), {}}});
    CHECK(check_symbolic(*omega_star(), *good).ok());

    const auto bad = SymbolicPartition::make_glue(make({{"c", Side::zero}}), {{leaf_colour(Side::zero), {}}});
    const auto report = check_symbolic(*omega_star(), *bad);
    CHECK(report.unhappy == std::vector<std::string>{"S:c", "0[*]/l"});
    const auto& centre = report.entries.front();
    CHECK(centre.opponents == SymbolicCardinal(0));
    CHECK(centre.friends.is_omega());

    const auto shape = SymbolicPartition::make_leaf(make({{"c", Side::zero}}));
    CHECK_THROWS_AS(check_symbolic(*omega_star(), *shape), InputError);
    const auto missing = SymbolicPartition::make_glue(make({{"c", Side::zero}}), {});
    CHECK_THROWS_AS(check_symbolic(*omega_star(), *missing), InputError);
    const auto finite = Presentation::glue(FiniteGraph({"c"}, {}), {{single_leaf(), SymbolicCardinal(2), {{"c", "l"}}}});
    const auto out_of_range =
        SymbolicPartition::make_glue(make({{"c", Side::zero}}), {{leaf_colour(Side::one), {{2, leaf_colour(Side::one)}}}});
    CHECK_THROWS_AS(check_symbolic(*finite, *out_of_range), InputError);
}

TEST_CASE("check_symbolic on leaves matches core happiness") {
    std::mt19937 rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 8);
        const FiniteGraph g = oracle::to_graph(oracle::random_graph(rng, n, 0.5));
        const Partition pi = oracle::partition_of(rng() & ((1U << n) - 1), n);
        const auto report = check_symbolic(*Presentation::leaf(g), *SymbolicPartition::make_leaf(pi));
        const auto h = happiness(g, pi, g.vertices());
        CHECK(report.unhappy == h.unhappy);
    }
}

TEST_CASE("check_symbolic agrees with instantiations on random colourings") {
    std::mt19937 rng(29);
    for (const auto& file : oracle::corpus_presentations()) {
        CAPTURE(file.filename().string());
        const auto p = oracle::load_presentation(file);
        for (int trial = 0; trial < 6; ++trial) compare_with_instances(*p, *random_sigma(*p, rng));
    }
}

TEST_CASE("witness_kapom examples") {
    const auto star = solve_unfriendly(*omega_star());
    const auto w = witness_kapom(*omega_star(), star.sigma, "c");
    CHECK(w.copies.size() == 1);
    CHECK(w.bound == 0);
    CHECK(w.group_degree > w.bound);
    CHECK(w.opponents == 1);

    const auto edge = Presentation::glue(FiniteGraph({"s", "t"}, {{"s", "t"}}), {{single_leaf(), omega, {{"s", "l"}}}});
    const auto we = witness_kapom(*edge, solve_unfriendly(*edge).sigma, "s");
    CHECK(we.copies.size() == 2);
    CHECK(we.bound == 1);

    const auto pair_leaf = Presentation::leaf(FiniteGraph({"x", "y"}, {}));
    const auto hub = Presentation::glue(FiniteGraph({"s", "a", "b", "c"}, {{"s", "a"}, {"s", "b"}, {"s", "c"}}),
                                        {{pair_leaf, omega, {{"s", "x"}, {"s", "y"}}}});
    const auto wh = witness_kapom(*hub, solve_unfriendly(*hub).sigma, "s");
    CHECK(wh.copies.size() == 2);
    CHECK(wh.group_degree == 4);
    CHECK(wh.bound == 3);

    CHECK_THROWS_AS(witness_kapom(*edge, solve_unfriendly(*edge).sigma, "t"), InputError);
}

TEST_CASE("witness_kapom skips exception copies") {
    const FixedColours fixed{{VertexAddress::parse("0[0]/l"), Side::zero}, {VertexAddress::parse("S:c"), Side::zero}};
    const auto sol = solve_pre_partition(*omega_star(), fixed);
    const auto w = witness_kapom(*omega_star(), sol.sigma, "c");
    CHECK(w.copies == std::vector<std::size_t>{1});
}

TEST_CASE("solver properties over the corpus") {
    for (const auto& file : oracle::corpus_presentations()) {
        CAPTURE(file.filename().string());
        const auto p = oracle::load_presentation(file);
        const auto sol = solve_unfriendly(*p);
        const auto report = check_symbolic(*p, sol.sigma);
        CHECK(report.ok());
        CHECK(sol.state.unhappy.empty());
        CHECK(check_symbolic(*p, sol.sigma.swapped()).ok());
        compare_with_instances(*p, sol.sigma);

        if (p->is_leaf()) continue;
        REQUIRE(sol.state.chosen_defaults.size() == p->families().size());
        for (std::size_t f = 0; f < p->families().size(); ++f) {
            const auto& fam = p->families()[f];
            const bool default_used =
                fam.multiplicity.is_omega() ||
                fam.multiplicity.value() > sol.sigma.families[f].exceptions.size();
            if (!default_used) continue;
            const auto& sigs = sol.state.signatures[f];
            CHECK(std::find(sigs.begin(), sigs.end(), sol.state.chosen_defaults[f]) != sigs.end());
        }
    }
}

TEST_CASE("random pre-partitions over the corpus") {
    std::mt19937 rng(41);
    for (const auto& file : oracle::corpus_presentations()) {
        CAPTURE(file.filename().string());
        const auto p = oracle::load_presentation(file);
        const auto inst = instantiate(*p, 3);
        std::vector<VertexAddress> addresses;
        for (const auto& [name, a] : inst.addresses) addresses.push_back(a);
        for (int trial = 0; trial < 4; ++trial) {
            FixedColours fixed;
            const std::size_t count = 1 + rng() % 3;
            for (std::size_t i = 0; i < count; ++i)
                fixed[addresses[rng() % addresses.size()]] = rng() % 2 ? Side::one : Side::zero;
            const auto sol = solve_pre_partition(*p, fixed);
            for (const auto& [a, side] : fixed) CHECK(colour_at(*p, sol.sigma, a) == side);
            CHECK(check_symbolic(*p, sol.sigma, fixed).ok());

            // Every unfixed finite-degree vertex is happy in a large instance.
            const auto big = instantiate(*p, 7);
            const auto pi = instantiate_partition(*p, sol.sigma, 7);
            const auto h = happiness(big.graph, pi, big.graph.vertices());
            for (const auto& [name, vh] : h.vertices) {
                const auto& a = big.addresses.at(name);
                if (fixed.count(a) || symbolic_degree(*p, a).is_omega()) continue;
                CHECK(vh.happy);
            }
        }
    }
}

TEST_CASE("instantiate_partition drops exceptions beyond n") {
    const FixedColours fixed{{VertexAddress::parse("0[5]/l"), Side::zero}};
    const auto sol = solve_pre_partition(*omega_star(), fixed);
    std::vector<std::string> dropped;
    const Partition pi = instantiate_partition(*omega_star(), sol.sigma, 3, &dropped);
    CHECK(pi.size() == 4);
    REQUIRE(dropped.size() == 1);
    CHECK(dropped[0].find("0[5]") != std::string::npos);
    dropped.clear();
    CHECK(instantiate_partition(*omega_star(), sol.sigma, 6, &dropped).at("0[5]/l") == Side::zero);
    CHECK(dropped.empty());
}

}
