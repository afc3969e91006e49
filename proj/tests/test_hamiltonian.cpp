#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <Eigen/Dense>

#include "core/hamiltonian.hpp"

using namespace at;
using namespace at::hamiltonian;

TEST_CASE("assembled operator is the adjacency plus the sampled diagonal") {
    const graph::AntitreeParams p{3, 2, 3, 1.0};
    const auto spec = disorder::DisorderSpec::uniform(1.0);
    const auto h = assemble_hamiltonian(p, spec, 5);
    const auto adj = graph::build_antitree_adjacency(p);
    const auto v = disorder::sample_potential(spec, static_cast<std::size_t>(p.dim()), 5);
    for (std::int64_t i = 0; i < p.dim(); ++i)
        for (std::int64_t j = 0; j < p.dim(); ++j) {
            const double expect = adj.entry(i, j) + (i == j ? v[i] : 0.0);
            CHECK(h.entry(i, j) == expect);
        }
}

TEST_CASE("full spectrum is ascending and matches the trace") {
    const graph::AntitreeParams p{3, 2, 4, 0.5};
    const auto spec = disorder::DisorderSpec::two_point(1.0);
    const auto h = assemble_hamiltonian(p, spec, 9);
    const auto eigs = full_spectrum(h);
    REQUIRE(eigs.size() == static_cast<std::size_t>(p.dim()));
    CHECK(std::is_sorted(eigs.begin(), eigs.end()));
    double trace = 0, sum = 0;
    for (std::int64_t i = 0; i < p.dim(); ++i) trace += h.entry(i, i);
    for (double e : eigs) sum += e;
    CHECK(sum == doctest::Approx(trace).epsilon(1e-10));
}

TEST_CASE("constant potential pins the flat-direction eigenvalues") {
    // with a point mass at c, every s-block is constant, so each block
    // contributes s-1 eigenvectors supported on mean-zero vectors with
    // eigenvalue exactly c
    const graph::AntitreeParams p{2, 2, 4, 0.0};
    const double c = 0.3;
    const auto spec = disorder::DisorderSpec::point_mass(c);
    const auto sample = sample_spectrum(p, spec, 1);
    const std::size_t expected = static_cast<std::size_t>(p.n) * p.r * (p.s - 1);
    CHECK(sample.trivial_part.size() == expected);
    for (double t : sample.trivial_part) CHECK(t == doctest::Approx(c).epsilon(1e-13));
    std::size_t hits = 0;
    for (double e : sample.eigenvalues)
        if (std::abs(e - c) <= 1e-9) ++hits;
    CHECK(hits >= expected);
}

TEST_CASE("trivial spectrum counts in-block multiplicities only") {
    const graph::AntitreeParams p{1, 2, 3, 0.0};
    // blocks: [a a b] and [c d c] -> one copy of a, one copy of c
    const std::vector<double> v{0.5, 0.5, -0.25, 0.1, 0.7, 0.1};
    const auto triv = trivial_spectrum_report(p, v);
    REQUIRE(triv.size() == 2);
    std::vector<double> sorted = triv;
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted[0] == doctest::Approx(0.1));
    CHECK(sorted[1] == doctest::Approx(0.5));
}

TEST_CASE("spectral samples are reproducible") {
    const graph::AntitreeParams p{2, 2, 3, 0.0};
    const auto spec = disorder::DisorderSpec::uniform(1.0);
    const auto a = sample_spectrum(p, spec, 42);
    const auto b = sample_spectrum(p, spec, 42);
    CHECK(a.eigenvalues == b.eigenvalues);
    const auto c = sample_spectrum(p, spec, 43);
    CHECK(a.eigenvalues != c.eigenvalues);
}

TEST_CASE("eigenvalue dump writes csv and manifest") {
    const graph::AntitreeParams p{2, 2, 2, 0.0};
    const auto sample = sample_spectrum(p, disorder::DisorderSpec::two_point(1.0), 3);
    const std::string csv = "ham_dump_test.csv", man = "ham_dump_test.json";
    write_eigenvalue_dump(sample, csv, man, 0.25);
    std::FILE* f = std::fopen(csv.c_str(), "r");
    REQUIRE(f != nullptr);
    char line[256];
    REQUIRE(std::fgets(line, sizeof(line), f) != nullptr);
    CHECK(std::string(line).rfind("index,eigenvalue", 0) == 0);
    std::size_t rows = 0;
    while (std::fgets(line, sizeof(line), f)) ++rows;
    std::fclose(f);
    CHECK(rows == sample.eigenvalues.size());
    std::remove(csv.c_str());
    std::remove(man.c_str());
}
