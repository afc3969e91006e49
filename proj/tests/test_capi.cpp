#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "antitree/antitree.h"

TEST_CASE("version and error state") {
    REQUIRE(at_version() != nullptr);
    CHECK(std::strlen(at_version()) > 0);
    REQUIRE(at_last_error() != nullptr);
}

TEST_CASE("operator lifecycle and entries") {
    at_operator* op = nullptr;
    REQUIRE(at_operator_antitree(3, 2, 4, 1.5, &op) == AT_OK);
    REQUIRE(op != nullptr);
    CHECK(at_operator_dim(op) == 24);
    double v01 = 0, v10 = 0, v00 = 0;
    CHECK(at_operator_entry(op, 0, 1, &v01) == AT_OK);
    CHECK(at_operator_entry(op, 1, 0, &v10) == AT_OK);
    CHECK(at_operator_entry(op, 0, 0, &v00) == AT_OK);
    CHECK(v01 == v10);                       // symmetric
    CHECK(v00 == doctest::Approx(1.5 / 4));  // w * P_s on the diagonal
    double out = -1;
    CHECK(at_operator_entry(op, 0, 99, &out) != AT_OK);
    CHECK(std::strlen(at_last_error()) > 0);
    at_operator_free(op);
}

TEST_CASE("laplacian and projection builders") {
    at_operator* lap = nullptr;
    at_operator* proj = nullptr;
    REQUIRE(at_operator_laplacian(2, 2, 3, &lap) == AT_OK);
    REQUIRE(at_operator_projection(2, 2, 3, &proj) == AT_OK);
    CHECK(at_operator_dim(lap) == 12);
    CHECK(at_operator_dim(proj) == 12);
    double p00 = 0;
    CHECK(at_operator_entry(proj, 0, 0, &p00) == AT_OK);
    CHECK(p00 == doctest::Approx(1.0 / 3));
    at_operator_free(lap);
    at_operator_free(proj);

    at_operator* bad = nullptr;
    CHECK(at_operator_antitree(0, 1, 1, 0.0, &bad) == AT_ERR_CONFIG);
    CHECK(bad == nullptr);
}

TEST_CASE("triplet dump through the c api") {
    at_operator* op = nullptr;
    REQUIRE(at_operator_antitree(2, 1, 2, 0.0, &op) == AT_OK);
    const char* path = "capi_triplets.txt";
    REQUIRE(at_operator_write_triplets(op, path) == AT_OK);
    std::ifstream in(path);
    long dim = 0, nnz = 0;
    in >> dim >> nnz;
    CHECK(dim == 4);
    CHECK(nnz > 0);
    at_operator_free(op);
    std::remove(path);
}

TEST_CASE("full spectrum and scan agree through the c api") {
    const int n = 4, r = 2, s = 3;
    std::vector<double> eigs(static_cast<std::size_t>(n) * r * s);
    REQUIRE(at_full_spectrum(n, r, s, 0.0, "two_point_symmetric", 1.0, 0.0, 5,
                             eigs.data()) == AT_OK);
    CHECK(std::is_sorted(eigs.begin(), eigs.end()));

    const double lo = 1.2, hi = std::abs(eigs.back()) + 1.0;
    std::vector<double> oracle;
    for (double e : eigs)
        if (e > lo && e < hi) oracle.push_back(e);

    std::size_t count = 0;
    std::vector<double> scan(eigs.size());
    REQUIRE(at_eigenvalue_scan(n, r, s, 0.0, "two_point_symmetric", 1.0, 0.0, 5, lo, hi,
                               scan.data(), scan.size(), &count) == AT_OK);
    REQUIRE(count == oracle.size());
    for (std::size_t k = 0; k < count; ++k) CHECK(std::abs(scan[k] - oracle[k]) <= 1e-8);

    // capacity error when the buffer is too small, count still reported
    if (count > 1) {
        std::size_t short_count = 0;
        std::vector<double> tiny(1);
        CHECK(at_eigenvalue_scan(n, r, s, 0.0, "two_point_symmetric", 1.0, 0.0, 5, lo, hi,
                                 tiny.data(), tiny.size(), &short_count) == AT_ERR_CAPACITY);
    }
}

TEST_CASE("harmonic average closed form through the c api") {
    double h = 0, s2 = 0;
    REQUIRE(at_harmonic_average("two_point_symmetric", 1.0, 0.0, 3.0, &h, &s2) == AT_OK);
    CHECK(h == doctest::Approx(8.0 / 3.0).epsilon(1e-13));
    CHECK(s2 == doctest::Approx(1.0 / 64.0).epsilon(1e-13));
    CHECK(at_harmonic_average("two_point_symmetric", 1.0, 0.0, 0.5, &h, &s2) != AT_OK);
    CHECK(at_harmonic_average("no_such_kind", 1.0, 0.0, 3.0, &h, &s2) == AT_ERR_CONFIG);
}

TEST_CASE("oracle dump reports a small deviation") {
    double dev = -1;
    REQUIRE(at_oracle_dump(4, 2, 3, 0.0, "two_point_symmetric", 1.0, 0.0, 2, 1.2, 8.0,
                           "capi_oracle_out", &dev) == AT_OK);
    CHECK(dev >= 0);
    CHECK(dev <= 1e-8);
}

TEST_CASE("config validation and run through the c api") {
    CHECK(at_validate_config("no_such_file.cfg") == AT_ERR_IO);
    CHECK(std::strlen(at_last_error()) > 0);

    const char* path = "capi_bad.cfg";
    {
        std::ofstream out(path);
        out << "[experiment]\nkind = oracle_equivalence\nseed = 1\noutput_dir = x\n"
            << "[antitree]\nn = 2\nr = 2\ns = 2\nsigma_typo = 1\n";
    }
    CHECK(at_validate_config(path) == AT_ERR_CONFIG);
    std::remove(path);

    const char* good = "capi_good.cfg";
    {
        std::ofstream out(good);
        out << "[experiment]\nkind = oracle_equivalence\nseed = 3\n"
            << "output_dir = capi_run_out\n"
            << "[antitree]\nn = 4\nr = 2\ns = 3\nw = 0.0\n"
            << "[disorder]\nkind = two_point_symmetric\nsigma = 1.0\n";
    }
    CHECK(at_validate_config(good) == AT_OK);
    CHECK(at_run_experiment(good) == AT_OK);
    std::ifstream manifest("capi_run_out/manifest.json");
    CHECK(manifest.good());
    std::remove(good);
}
