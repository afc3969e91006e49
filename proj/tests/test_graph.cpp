#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "core/errors.hpp"
#include "core/graph.hpp"

using namespace at;
using namespace at::graph;

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(validate(AntitreeParams{0, 1, 1, 0.0}), Error);
    CHECK_THROWS_AS(validate(AntitreeParams{1, -1, 1, 0.0}), Error);
    CHECK_THROWS_AS(validate(AntitreeParams{1, 1, 0, 0.0}), Error);
    CHECK_NOTHROW(validate(AntitreeParams{1, 1, 1, -3.0}));
}

TEST_CASE("strip adjacency entries") {
    const auto op = build_strip(3, 2, 0.5);
    REQUIRE(op.dim() == 6);
    const auto& m = op.dense();
    CHECK((m - m.transpose()).cwiseAbs().maxCoeff() == 0.0);
    // site order is lexicographic in (x1, x2): (1,1),(1,2),(2,1),...
    CHECK(m(0, 0) == 0.5);       // point weight on the diagonal
    CHECK(m(0, 1) == 1.0);       // (1,1)-(1,2) rung
    CHECK(m(0, 2) == 1.0);       // (1,1)-(2,1) rail
    CHECK(m(0, 3) == 0.0);       // no diagonal edges
    CHECK(m(0, 4) == 0.0);       // no next-nearest edges
}

TEST_CASE("tensoring with the normalized complete graph divides entries by s") {
    const auto base = build_strip(2, 2, 1.0);
    const auto big = tensor_antitree(base, 3);
    REQUIRE(big.dim() == 12);
    for (std::int64_t i = 0; i < big.dim(); ++i)
        for (std::int64_t j = 0; j < big.dim(); ++j)
            CHECK(big.entry(i, j) == doctest::Approx(base.entry(i / 3, j / 3) / 3.0));
}

TEST_CASE("dense and block representations agree entrywise") {
    const AntitreeParams p{3, 2, 4, 1.5};
    const auto op = build_antitree_adjacency(p);
    REQUIRE(op.has_dense());
    REQUIRE(op.has_blocks());
    for (std::int64_t i = 0; i < op.dim(); ++i)
        for (std::int64_t j = 0; j < op.dim(); ++j)
            CHECK(op.blocks().entry(i, j) == op.dense()(i, j));
}

TEST_CASE("dense materialization respects the capacity cap") {
    const AntitreeParams p{4, 4, 4, 0.0}; // dim 64
    const auto capped = build_antitree_adjacency(p, 32);
    CHECK_FALSE(capped.has_dense());
    CHECK(capped.has_blocks());
    CHECK(capped.dim() == 64);
    CHECK_THROWS_AS(capped.dense(), Error);
    const auto full = build_antitree_adjacency(p);
    for (std::int64_t i = 0; i < 64; ++i)
        for (std::int64_t j = 0; j < 64; ++j)
            CHECK(capped.entry(i, j) == full.dense()(i, j));
}

TEST_CASE("periodic laplacian structure") {
    const AntitreeParams p{2, 2, 4, 0.0};
    const auto lap = build_periodic_laplacian(p);
    const auto& m = lap.dense();
    CHECK((m - m.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(m.diagonal().cwiseAbs().maxCoeff() == 0.0); // hopping convention
    // index of (x1,x2,x3) = ((x1-1)*r + (x2-1))*s + (x3-1); each site sees its
    // two cycle neighbors with weight 1 plus its grid neighbors
    const std::int64_t site = 0; // (1,1,1)
    CHECK(m(site, 1) == 1.0);                // (1,1,2)
    CHECK(m(site, 3) == 1.0);                // (1,1,4) around the cycle
    CHECK(m(site, 4) == 1.0);                // (1,2,1)
    CHECK(m(site, 8) == 1.0);                // (2,1,1)
    CHECK(m.row(site).sum() == doctest::Approx(4.0));

    // s = 2 keeps the cycle row sum at 2 via a doubled edge weight
    const auto lap2 = build_periodic_laplacian(AntitreeParams{1, 1, 2, 0.0});
    CHECK(lap2.dense()(0, 1) == doctest::Approx(2.0));
    CHECK(lap2.dense()(0, 0) == doctest::Approx(0.0));
}

TEST_CASE("mean-field projection is an orthogonal projection") {
    const AntitreeParams p{2, 2, 3, 0.0};
    const auto proj = build_meanfield_projection(p);
    const auto& m = proj.dense();
    CHECK((m - m.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((matmul_ref(m, m) - m).cwiseAbs().maxCoeff() <= 1e-15);
    CHECK(m.trace() == doctest::Approx(p.n * p.r)); // rank n r
}

TEST_CASE("projection identity holds in both variants") {
    for (int s = 2; s <= 4; ++s) {
        const AntitreeParams p{3, 2, s, 0.0};
        const auto periodic = verify_projection_identity(p, false);
        CHECK(periodic.ok);
        CHECK(periodic.max_err_identity <= 1e-12);
        CHECK(periodic.max_err_commutator == 0.0);
        const auto dirichlet = verify_projection_identity(p, true);
        CHECK(dirichlet.ok);
    }
}

TEST_CASE("triplet dump lists every nonzero once") {
    const auto op = build_strip(2, 2, 1.0);
    const std::string path = "graph_triplets_test.txt";
    op.write_triplets(path);
    std::ifstream in(path);
    REQUIRE(in.good());
    std::int64_t dim = 0, nnz = 0;
    in >> dim >> nnz;
    CHECK(dim == 4);
    std::int64_t rows = 0;
    double total = 0;
    std::int64_t i, j;
    double v;
    while (in >> i >> j >> v) {
        ++rows;
        total += v;
        CHECK(op.entry(i, j) == v);
    }
    CHECK(rows == nnz);
    // strip 2x2 with w=1: 4 loops + 4 edges both directions
    CHECK(nnz == 12);
    CHECK(total == doctest::Approx(4.0 + 8.0));
    std::remove(path.c_str());
}
