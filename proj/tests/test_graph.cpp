#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>

#include "maxtrust/graph.hpp"
#include "support.hpp"

using namespace maxtrust;
using maxtrust::testing::Rng;

TEST_CASE("precedence graph and irreducibility", "[graph]") {
    const TropicalMatrix cyc{{eps, 1}, {2, eps}};
    CHECK(is_irreducible(cyc));
    CHECK(precedence_graph(cyc).edge_count() == 2);
    CHECK_FALSE(is_irreducible(TropicalMatrix{{0, 1}, {eps, 0}}));
    CHECK_FALSE(is_irreducible(TropicalMatrix{{eps}}));
    CHECK(is_irreducible(TropicalMatrix{{0}}));
    CHECK(is_irreducible(RealMatrix{{0, 1}, {1, 0}}));
    CHECK_FALSE(is_irreducible(RealMatrix{{1, 0}, {0, 1}}));
    CHECK_THROWS_AS(is_irreducible(TropicalMatrix(2, 3)), ShapeError);
}

TEST_CASE("is_irreducible agrees with the permutation definition", "[graph][property]") {
    Rng rng(23);
    for (int trial = 0; trial < 400; ++trial) {
        const auto n = testing::pick(rng, 2, 5);
        TropicalMatrix a(n, n);
        const double p = testing::uniform(rng, 0.1, 0.7);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (testing::coin(rng, p)) a(i, j) = 1.0;
        REQUIRE(is_irreducible(a) == !testing::brute_force_reducible(a));
    }
}

TEST_CASE("strongly connected components match mutual reachability", "[graph][property]") {
    Rng rng(29);
    for (int trial = 0; trial < 200; ++trial) {
        const auto n = testing::pick(rng, 1, 12);
        TropicalMatrix a(n, n);
        const double p = testing::uniform(rng, 0.05, 0.4);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (testing::coin(rng, p)) a(i, j) = 0.0;
        const auto reach = testing::reachability(a);
        const auto comps = strongly_connected_components(precedence_graph(a));
        std::vector<std::size_t> comp_of(n, n);
        for (std::size_t c = 0; c < comps.size(); ++c)
            for (auto u : comps[c]) comp_of[u] = c;
        for (std::size_t u = 0; u < n; ++u) {
            REQUIRE(comp_of[u] < comps.size());
            for (std::size_t v = 0; v < n; ++v) {
                const bool same = u == v || (reach[u][v] && reach[v][u]);
                REQUIRE((comp_of[u] == comp_of[v]) == same);
            }
        }
    }
}

TEST_CASE("closed classes and their periods", "[graph]") {
    // 0 -> 1 -> 2 -> 1: closed class {1,2} of period 2
    const TropicalMatrix a{{eps, 0, eps}, {eps, eps, 0}, {eps, 0, eps}};
    const auto g = precedence_graph(a);
    const auto closed = closed_classes(g);
    REQUIRE(closed.size() == 1);
    CHECK(closed[0] == std::vector<std::size_t>{1, 2});
    CHECK(class_period(g, closed[0]) == 2);

    const TropicalMatrix b{{0, 0}, {0, eps}};
    CHECK(class_period(precedence_graph(b), {0, 1}) == 1);
    CHECK(class_period(precedence_graph(TropicalMatrix{{eps}}), {0}) == 0);

    const TropicalMatrix three{{eps, 0, eps}, {eps, eps, 0}, {0, eps, eps}};
    CHECK(class_period(precedence_graph(three), {0, 1, 2}) == 3);
}

TEST_CASE("normal form of a small reducible matrix", "[graph]") {
    // 2 -> 0 <-> 1, so {2} comes first
    const TropicalMatrix a{{eps, 1, eps}, {2, eps, eps}, {3, eps, 0}};
    const auto nf = normal_form(a);
    CHECK(nf.permutation == std::vector<std::size_t>{2, 0, 1});
    REQUIRE(nf.block_count() == 2);
    CHECK(nf.blocks[0] == BlockRange{0, 1});
    CHECK(nf.blocks[1] == BlockRange{1, 3});
    CHECK(nf.permuted(0, 1) == Tropical{3});
    CHECK(nf.block_is_zero(1, 0));
    CHECK_FALSE(nf.block_is_zero(0, 1));
    CHECK(nf.original() == a);
    CHECK(nf.block_index() == std::vector<std::size_t>{0, 1, 1});
    CHECK(nf.diagonal_block(1) == TropicalMatrix{{eps, 1}, {2, eps}});
}

TEST_CASE("normal form ties go to the smallest original index", "[graph]") {
    const TropicalMatrix a{{0, eps, eps}, {eps, 0, eps}, {eps, eps, 0}};
    const auto nf = normal_form(a);
    CHECK(nf.permutation == std::vector<std::size_t>{0, 1, 2});
    CHECK(nf.block_count() == 3);
}

TEST_CASE("normal form of random reducible matrices", "[graph][property]") {
    Rng rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        const auto n = testing::pick(rng, 2, 12);
        const auto r = testing::random_reducible(rng, n, 5, false, -3, 3);
        const auto nf = normal_form(r.a);
        const auto bi = nf.block_index();
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t l = 0; l < n; ++l) {
                REQUIRE(nf.permuted(k, l) == r.a(nf.permutation[k], nf.permutation[l]));
                if (bi[k] > bi[l]) REQUIRE(nf.permuted(k, l).is_eps());
            }
        for (std::size_t b = 0; b < nf.block_count(); ++b)
            REQUIRE((nf.blocks[b].size() == 1 || is_irreducible(nf.diagonal_block(b))));
        REQUIRE(nf.original() == r.a);
        // generated groups are exactly the blocks
        std::set<std::vector<std::size_t>> got, want(r.groups.begin(), r.groups.end());
        for (const auto& blk : nf.blocks) {
            std::vector<std::size_t> ids(nf.permutation.begin() + blk.begin, nf.permutation.begin() + blk.end);
            std::sort(ids.begin(), ids.end());
            got.insert(ids);
        }
        REQUIRE(got == want);
    }
}

TEST_CASE("normal form text round trip and validation", "[graph][io]") {
    const TropicalMatrix a{{eps, 1, eps}, {2, eps, eps}, {3, eps, 0}};
    const auto nf = normal_form(a);
    const auto text = format_normal_form(nf);
    const auto back = parse_normal_form(text);
    CHECK(back.permutation == nf.permutation);
    CHECK(back.blocks == nf.blocks);
    CHECK(back.permuted == nf.permuted);
    CHECK_THROWS_AS(parse_normal_form("permutation 0 0 1\nblocks 0:3\n3 3\n0 0 0\n0 0 0\n0 0 0\n"), ParseError);
    CHECK_THROWS_AS(parse_normal_form("permutation 0 1\nblocks 0:1\n2 2\n0 0\n0 0\n"), ParseError);
}
