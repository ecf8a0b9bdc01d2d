#include <doctest.h>

#include "oracles.hpp"
#include "ufp/errors.hpp"
#include "ufp/presentation.hpp"

using namespace ufp;

namespace {

const SymbolicCardinal omega = SymbolicCardinal::omega();

PresentationPtr single_leaf() { return Presentation::leaf(FiniteGraph({"l"}, {})); }

PresentationPtr omega_star() {
    return Presentation::glue(FiniteGraph({"c"}, {}), {{single_leaf(), omega, {{"c", "l"}}}});
}

PresentationPtr t2() { return Presentation::glue(FiniteGraph({"s"}, {}), {{omega_star(), omega, {{"s", "c"}}}}); }

// Root families with omega multiplicity get n copies instead.
PresentationPtr finitised(const Presentation& p, std::uint64_t n) {
    std::vector<CopyFamily> fams;
    for (const auto& f : p.families())
        fams.push_back({f.child, f.multiplicity.is_omega() ? SymbolicCardinal(n) : f.multiplicity, f.attachment});
    return Presentation::glue(p.local(), std::move(fams));
}

} // namespace

TEST_SUITE("presentation") {

TEST_CASE("symbolic cardinal arithmetic") {
    const SymbolicCardinal two(2);
    CHECK(two + SymbolicCardinal(3) == SymbolicCardinal(5));
    CHECK((two + omega).is_omega());
    CHECK(SymbolicCardinal(0) * omega == SymbolicCardinal(0));
    CHECK((two * omega).is_omega());
    CHECK(two < omega);
    CHECK(SymbolicCardinal(7) < SymbolicCardinal(9));
    CHECK(omega.to_string() == "Omega");
}

TEST_CASE("validate") {
    CHECK(validate(*omega_star()).empty());
    const auto bad_target = Presentation::glue(FiniteGraph({"c"}, {}), {{single_leaf(), omega, {{"c", "zz"}}}});
    const auto diags = validate(*bad_target);
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].path == "$.families[0]");
    const auto empty_leaf = Presentation::leaf(FiniteGraph());
    CHECK_FALSE(validate(*empty_leaf).empty());
    const auto nested =
        Presentation::glue(FiniteGraph({"s"}, {}), {{Presentation::leaf(FiniteGraph()), SymbolicCardinal(1), {}}});
    REQUIRE(validate(*nested).size() == 1);
    CHECK(validate(*nested)[0].path == "$.families[0].child");
    const auto bad_name = Presentation::leaf(FiniteGraph({"S:x"}, {}));
    CHECK_FALSE(validate(*bad_name).empty());
    CHECK_THROWS_AS(require_valid(*bad_target), InputError);
}

TEST_CASE("addresses") {
    const auto a = VertexAddress::parse("0[3]/1[0]/S:c");
    REQUIRE(a.steps.size() == 2);
    CHECK(a.steps[0].family == 0);
    CHECK(a.steps[0].copy == 3);
    CHECK(a.separator);
    CHECK(a.vertex == "c");
    CHECK(a.to_string() == "0[3]/1[0]/S:c");
    CHECK(a.position().to_string() == "0[*]/1[*]/S:c");
    CHECK(VertexAddress::parse("x").to_string() == "x");
    CHECK_THROWS_AS(VertexAddress::parse("0[/x"), InputError);
    CHECK_THROWS_AS(VertexAddress::parse("0[1]/"), InputError);
    CHECK_THROWS_AS(require_address(*omega_star(), VertexAddress::parse("1[0]/l")), InputError);
    CHECK_THROWS_AS(require_address(*omega_star(), VertexAddress::parse("S:zz")), InputError);
    CHECK_NOTHROW(require_address(*omega_star(), VertexAddress::parse("0[99]/l")));
}

TEST_CASE("symbolic_degree") {
    CHECK(symbolic_degree(*omega_star(), VertexAddress::parse("S:c")).is_omega());
    CHECK(symbolic_degree(*omega_star(), VertexAddress::parse("0[4]/l")) == SymbolicCardinal(1));
    CHECK(symbolic_degree(*t2(), VertexAddress::parse("0[2]/S:c")).is_omega());
    CHECK(symbolic_degree(*t2(), VertexAddress::parse("0[2]/0[1]/l")) == SymbolicCardinal(1));
    const auto finite = Presentation::glue(FiniteGraph({"a"}, {}), {{single_leaf(), SymbolicCardinal(3), {{"a", "l"}}}});
    CHECK(symbolic_degree(*finite, VertexAddress::parse("S:a")) == SymbolicCardinal(3));
    CHECK_THROWS_AS(symbolic_degree(*finite, VertexAddress::parse("0[3]/l")), InputError);
}

TEST_CASE("degree atlas") {
    const auto star = degree_atlas(*omega_star());
    CHECK(star.v_infinity_size == SymbolicCardinal(1));
    CHECK(star.v_star_size == SymbolicCardinal(1));
    CHECK(star.at(Position{{}, "c", true}).in_v_star);
    CHECK_FALSE(star.at(Position{{0}, "l", false}).in_v_infinity);
    CHECK(is_in_W(*omega_star()));

    const auto tree = degree_atlas(*t2());
    CHECK(tree.v_star_size.is_omega());
    CHECK(tree.v_infinity_size.is_omega());
    const auto& s = tree.at(Position{{}, "s", true});
    CHECK(s.in_v_infinity);
    CHECK_FALSE(s.in_v_star);
    const auto& c = tree.at(Position{{0}, "c", true});
    CHECK(c.in_v_star);
    CHECK(c.infinite_neighbours == SymbolicCardinal(1));
    CHECK_FALSE(is_in_W(*t2()));

    const auto leaf = Presentation::leaf(oracle::to_graph(oracle::complete(3)));
    CHECK(degree_atlas(*leaf).v_infinity_size == SymbolicCardinal(0));
    CHECK(is_in_W(*leaf));
}

TEST_CASE("structural rank") {
    CHECK(structural_rank(*single_leaf()) == 0);
    CHECK(structural_rank(*omega_star()) == 1);
    CHECK(structural_rank(*t2()) == 2);
    const auto zero = Presentation::glue(FiniteGraph({"c"}, {}), {{single_leaf(), SymbolicCardinal(0), {{"c", "l"}}},
                                                                  {omega_star(), SymbolicCardinal(0), {}}});
    CHECK(structural_rank(*zero) == 0);
    CHECK(is_finite(*zero));
}

TEST_CASE("minimal separator") {
    CHECK(minimal_separator(*omega_star()) == VertexSet{"c"});
    CHECK(minimal_separator(*t2()) == VertexSet{"s"});
    const auto pendant = Presentation::glue(
        FiniteGraph({"a", "c"}, {{"a", "c"}}),
        {{single_leaf(), omega, {{"c", "l"}}}, {single_leaf(), SymbolicCardinal(1), {{"a", "l"}}}});
    CHECK(minimal_separator(*pendant) == VertexSet{"c"});
    CHECK_THROWS_AS(minimal_separator(*single_leaf()), InputError);
    const auto finite = Presentation::glue(FiniteGraph({"a"}, {}), {{single_leaf(), SymbolicCardinal(3), {{"a", "l"}}}});
    CHECK_THROWS_AS(minimal_separator(*finite), InputError);
}

TEST_CASE("instantiate") {
    const auto star3 = instantiate(*omega_star(), 3);
    CHECK(star3.graph.order() == 4);
    CHECK(star3.graph.size() == 3);
    CHECK(star3.graph.degree("S:c") == 3);
    CHECK(star3.addresses.at("0[2]/l").to_string() == "0[2]/l");

    const auto star0 = instantiate(*omega_star(), 0);
    CHECK(star0.graph.order() == 1);

    const auto tree = instantiate(*t2(), 2);
    CHECK(tree.graph.order() == 7);
    CHECK(tree.graph.size() == 6);
    CHECK(tree.graph.connected());
    CHECK(tree.graph.degree("S:s") == 2);
    CHECK(tree.graph.degree("0[1]/S:c") == 3);
}

TEST_CASE("corpus properties") {
    const auto files = oracle::corpus_presentations();
    REQUIRE(files.size() >= 20);
    for (const auto& file : files) {
        CAPTURE(file.filename().string());
        const auto p = oracle::load_presentation(file);
        REQUIRE(validate(*p).empty());

        // Instantiation at n is an induced subgraph of the one at n + 1.
        for (std::size_t n = 0; n < 4; ++n) {
            const auto small = instantiate(*p, n).graph;
            const auto big = instantiate(*p, n + 1).graph;
            CHECK(big.induced(small.vertices()) == small);
        }

        // Degrees: exact for finite symbolic degree, growing for omega.
        const auto at4 = instantiate(*p, 4);
        const auto at6 = instantiate(*p, 6);
        for (const auto& [name, address] : at4.addresses) {
            const auto d = symbolic_degree(*p, address);
            if (d.is_finite()) {
                CHECK(at4.graph.degree(name) == d.value());
                CHECK(at6.graph.degree(name) == d.value());
            } else {
                CHECK(at6.graph.degree(name) > at4.graph.degree(name));
            }
        }

        // Replacing omega by a finite count drops to the finite family ranks.
        if (p->is_glue()) {
            std::size_t child_max = 0;
            bool has_top_omega = false;
            for (const auto& f : p->families()) {
                if (f.multiplicity.is_zero()) continue;
                child_max = std::max(child_max, structural_rank(*f.child));
            }
            for (const auto& f : p->families())
                if (f.multiplicity.is_omega() && structural_rank(*f.child) == child_max) has_top_omega = true;
            const auto fin = finitised(*p, 3);
            CHECK(structural_rank(*fin) <= child_max);
            if (has_top_omega) CHECK(structural_rank(*fin) < structural_rank(*p));
        }

        CHECK(structural_rank(*Presentation::leaf(instantiate(*p, 2).graph)) == 0);
    }
}

}
