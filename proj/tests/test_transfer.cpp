#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "core/hamiltonian.hpp"
#include "core/rng.hpp"
#include "core/transfer.hpp"

using namespace at;
using namespace at::transfer;

namespace {

std::vector<double> window_filter(const std::vector<double>& eigs, double lo, double hi) {
    std::vector<double> out;
    for (double e : eigs)
        if (e > lo && e < hi) out.push_back(e);
    return out;
}

} // namespace

TEST_CASE("effective potential reduces to lambda - v on constant blocks") {
    const std::vector<double> block{0.25, 0.25, 0.25};
    const cplx v = effective_potential_block(block, cplx(3.0, 0.0));
    CHECK(v.real() == doctest::Approx(2.75).epsilon(1e-14));
    CHECK(v.imag() == doctest::Approx(0.0));
}

TEST_CASE("transfer matrix has the companion block layout") {
    const graph::AntitreeParams p{4, 3, 2, 0.7};
    const auto pot = disorder::sample_potential(disorder::DisorderSpec::uniform(1.0),
                                                static_cast<std::size_t>(p.r) * p.s, 2);
    const auto t = build_transfer(p, pot, cplx(2.5, 0.0));
    const int r = p.r;
    REQUIRE(t.m.rows() == 2 * r);
    CHECK((t.m.bottomLeftCorner(r, r) - Eigen::MatrixXcd::Identity(r, r)).cwiseAbs().maxCoeff() ==
          0.0);
    CHECK(t.m.bottomRightCorner(r, r).cwiseAbs().maxCoeff() == 0.0);
    CHECK((t.m.topRightCorner(r, r) + Eigen::MatrixXcd::Identity(r, r)).cwiseAbs().maxCoeff() ==
          0.0);
    // top-left block agrees with the real-arithmetic variant at real lambda
    const auto top = transfer_top_block(p, pot, 2.5);
    CHECK((t.m.topLeftCorner(r, r).real() - top).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("secular zeros reproduce the dense spectrum outside the support") {
    const graph::AntitreeParams p{4, 2, 3, 0.0};
    const auto spec = disorder::DisorderSpec::two_point(1.0);
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        const auto pot = disorder::sample_potential(spec, static_cast<std::size_t>(p.dim()), seed);
        const auto h = hamiltonian::assemble_hamiltonian(p, spec, seed);
        const auto dense = hamiltonian::full_spectrum(h);
        const double hi = std::max(std::abs(dense.front()), std::abs(dense.back())) + 1.0;
        const auto oracle = window_filter(dense, 1.2, hi);
        const auto scan = eigenvalue_scan(p, pot, 1.2, hi);
        REQUIRE(scan.size() == oracle.size());
        for (std::size_t k = 0; k < scan.size(); ++k)
            CHECK(std::abs(scan[k] - oracle[k]) <= 1e-8);
    }
}

TEST_CASE("secular value is continuous through a sign change") {
    const graph::AntitreeParams p{4, 2, 3, 0.0};
    const auto pot = disorder::sample_potential(disorder::DisorderSpec::two_point(1.0),
                                                static_cast<std::size_t>(p.dim()), 1);
    const auto zeros = eigenvalue_scan(p, pot, 1.2, 5.0);
    REQUIRE(!zeros.empty());
    const double z = zeros.front();
    CHECK(std::abs(secular_value(p, pot, z).value) <= 1e-6);
    // values straddling a simple zero have opposite signs
    const double l = secular_value(p, pot, z - 1e-4).value;
    const double r = secular_value(p, pot, z + 1e-4).value;
    if (std::abs(l) > 1e-9 && std::abs(r) > 1e-9) CHECK(l * r < 0);
}

TEST_CASE("eigenvector reconstruction meets the residual target") {
    const graph::AntitreeParams p{6, 3, 4, 0.0};
    const auto pot = disorder::sample_potential(disorder::DisorderSpec::two_point(1.0),
                                                static_cast<std::size_t>(p.dim()), 4);
    const auto zeros = eigenvalue_scan(p, pot, 1.2, 6.0);
    REQUIRE(!zeros.empty());
    for (double z : zeros) {
        const auto ev = reconstruct_eigenvector(p, pot, z);
        CHECK(ev.residual <= 1e-6);
        CHECK(ev.psi.norm() > 0);
    }
}

TEST_CASE("effective energy and interval membership") {
    const auto spec = disorder::DisorderSpec::two_point(1.0);
    const double lambda = 3.0;
    const double h = (lambda * lambda - 1.0) / lambda;
    const auto e0 = effective_energy(spec, lambda, 0.0);
    CHECK(e0.value == doctest::Approx(h).epsilon(1e-13));
    CHECK(e0.in_interval); // |8/3| < 4
    const auto e_far = effective_energy(spec, lambda, h - 5.0);
    CHECK_FALSE(e_far.in_interval);
}

TEST_CASE("channel decomposition diagonalizes the deterministic transfer") {
    const auto spec = disorder::DisorderSpec::two_point(1.0);
    for (int r : {3, 5}) {
        const double lambda = 3.0, w = 1.0;
        const auto cd = channel_decomposition(spec, lambda, w, r);
        CHECK(cd.r_h + cd.r_e == r);
        // O is orthogonal
        CHECK((cd.O.transpose() * cd.O - Eigen::MatrixXd::Identity(r, r)).cwiseAbs().maxCoeff() <=
              1e-12);
        // hyperbolic multipliers live strictly inside the unit disc
        for (int j = 0; j < cd.r_h; ++j) CHECK(std::abs(cd.gamma(j)) < 1.0);
        for (int j = 0; j < cd.r_e; ++j) {
            CHECK(std::abs(cd.z(j)) == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(cd.z(j).imag() > 0);
        }
        // conjugation lands on the block-diagonal limit
        Eigen::MatrixXcd t0 = Eigen::MatrixXcd::Zero(2 * r, 2 * r);
        const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(r, r);
        Eigen::MatrixXd delta = Eigen::MatrixXd::Zero(r, r);
        for (int j = 0; j + 1 < r; ++j) delta(j, j + 1) = delta(j + 1, j) = 1.0;
        t0.topLeftCorner(r, r) = (cd.E * Eigen::MatrixXd::Identity(r, r) - delta).cast<cplx>();
        t0.topRightCorner(r, r) = -eye;
        t0.bottomLeftCorner(r, r) = eye;
        const Eigen::MatrixXcd ot = cd.O_tilde();
        const Eigen::MatrixXcd conj = cd.Q.inverse() * ot.adjoint() * t0 * ot * cd.Q;
        CHECK((conj - cd.deterministic_limit()).cwiseAbs().maxCoeff() <= 1e-10);
    }
}

TEST_CASE("chaotic check flags engineered resonances") {
    auto phase = [](double t) { return cplx(std::cos(t), std::sin(t)); };
    Eigen::VectorXcd z(3);
    z << phase(0.713), phase(1.131), phase(0.292); // no quadruple relations
    CHECK(chaotic_check(z, 1e-10).chaotic);
    Eigen::VectorXcd bad(4);
    bad << phase(0.71), phase(1.13), phase(0.50), phase(1.34); // z1 z2 = z3 z4
    const auto witness = chaotic_check(bad, 1e-10);
    CHECK_FALSE(witness.chaotic);
    CHECK(witness.which == 2);
}

TEST_CASE("return times are increasing and accurate") {
    Eigen::VectorXcd z(2);
    auto phase = [](double t) { return cplx(std::cos(t), std::sin(t)); };
    z << phase(2 * std::numbers::pi * 0.37), phase(2 * std::numbers::pi * 0.61);
    Eigen::VectorXcd target = Eigen::VectorXcd::Ones(2);
    const auto times = find_return_times(z, target, 3, 0.3, 100000);
    REQUIRE(times.size() == 3);
    CHECK(std::is_sorted(times.begin(), times.end()));
    for (long t : times) {
        Eigen::VectorXcd zp(2);
        zp << std::pow(z(0), t + 1), std::pow(z(1), t + 1);
        CHECK((zp - target).norm() < 0.3);
    }
}

TEST_CASE("scaled lambda follows the 1/n drift rule") {
    const auto stats = disorder::harmonic_average(disorder::DisorderSpec::two_point(1.0), 3.0);
    const double l = scaled_lambda(stats, 1.5, 10);
    CHECK(l == doctest::Approx(3.0 + 1.5 / (10 * (stats.h * stats.h * stats.sigma2 + 1.0)))
                   .epsilon(1e-13));
}

TEST_CASE("transfer matrices are symplectic") {
    const graph::AntitreeParams p{1, 4, 3, 0.5};
    auto rng = make_rng(99);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> pot(static_cast<std::size_t>(p.r) * p.s);
        for (double& v : pot) v = unif(rng);
        const auto t = build_transfer(p, pot, cplx(2.0 + 0.1 * trial, 0.0));
        CHECK(symplectic_defect(t.m) <= 1e-9);
    }
}

TEST_CASE("normalized products keep the secular zeros") {
    const graph::AntitreeParams p{8, 2, 3, 0.0};
    const auto pot = disorder::sample_potential(disorder::DisorderSpec::two_point(1.0),
                                                static_cast<std::size_t>(p.dim()), 6);
    const auto h = hamiltonian::assemble_hamiltonian(p, disorder::DisorderSpec::two_point(1.0), 6);
    const auto dense = hamiltonian::full_spectrum(h);
    const double hi = std::abs(dense.back()) + 1.0;
    const auto oracle = window_filter(dense, 1.2, hi);
    const auto zeros = eigenvalue_scan(p, pot, 1.2, hi);
    REQUIRE(zeros.size() == oracle.size());
    for (std::size_t k = 0; k < zeros.size(); ++k)
        CHECK(std::abs(zeros[k] - oracle[k]) <= 1e-8);
}
