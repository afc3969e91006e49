#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "core/rng.hpp"
#include "core/sde.hpp"

using namespace at;
using namespace at::sde;

namespace {

SdeParams test_params(int r_e, double m) {
    const auto spec = disorder::DisorderSpec::two_point(1.0);
    const double lambda = 3.0;
    const auto stats = disorder::harmonic_average(spec, lambda);
    // effective energy 0.2 keeps every channel elliptic for small r
    const auto cd = transfer::channel_decomposition(spec, lambda, stats.h - 0.2, r_e);
    REQUIRE(cd.r_e == r_e);
    return make_sde_params(cd, stats, m, 2000, {-1.0, 0.0, 1.0});
}

} // namespace

TEST_CASE("brownian increments have the right structure") {
    auto rng = make_rng(12);
    const auto inc = sample_brownian_increment(4, 1e-3, 0.5, rng);
    CHECK((inc.dA - inc.dA.adjoint()).cwiseAbs().maxCoeff() <= 1e-15);      // Hermitian
    CHECK((inc.dB - inc.dB.transpose()).cwiseAbs().maxCoeff() <= 1e-15);    // symmetric
    CHECK(inc.dA.cwiseAbs().maxCoeff() > 0);
    CHECK(inc.dB.cwiseAbs().maxCoeff() > 0);
}

TEST_CASE("increment variances follow the covariance bookkeeping") {
    const int r_e = 3, samples = 20000;
    const double dt = 1.0, v = 0.7;
    auto rng = make_rng(5);
    double diag_a = 0, off_a = 0, diag_b = 0, off_b = 0, cross = 0;
    for (int k = 0; k < samples; ++k) {
        const auto inc = sample_brownian_increment(r_e, dt, v, rng);
        diag_a += std::norm(inc.dA(0, 0));
        off_a += std::norm(inc.dA(0, 1));
        diag_b += std::norm(inc.dB(0, 0));
        off_b += std::norm(inc.dB(0, 2));
        cross += inc.dA(0, 0).real() * inc.dA(1, 1).real();
    }
    // diagonal of dA: common component variance v plus individual v/2
    CHECK(diag_a / samples == doctest::Approx(1.5 * v).epsilon(0.05));
    CHECK(off_a / samples == doctest::Approx(v).epsilon(0.05));
    CHECK(diag_b / samples == doctest::Approx(1.5 * v).epsilon(0.05));
    CHECK(off_b / samples == doctest::Approx(v).epsilon(0.05));
    // distinct diagonal entries correlate through the shared component
    CHECK(cross / samples == doctest::Approx(v).epsilon(0.08));
}

TEST_CASE("sde paths are deterministic in the seed") {
    const auto params = test_params(2, 100.0);
    const auto a = integrate_lambda(params, 7);
    const auto b = integrate_lambda(params, 7);
    REQUIRE(a.endpoints.size() == params.eps_grid.size());
    for (std::size_t k = 0; k < a.endpoints.size(); ++k)
        CHECK((a.endpoints[k] - b.endpoints[k]).cwiseAbs().maxCoeff() == 0.0);
    const auto c = integrate_lambda(params, 8);
    CHECK((a.endpoints[0] - c.endpoints[0]).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("closed form endpoint is affine in eps") {
    const auto params = test_params(2, 0.0);
    const auto path = closed_form_limit(params, 3);
    REQUIRE(path.closed_form);
    const auto e0 = path.at_eps(0.0);
    const auto e2 = path.at_eps(2.0);
    const auto e5 = path.at_eps(5.0);
    // (e5 - e0)/5 == (e2 - e0)/2 == slope
    CHECK(((e5 - e0) / 5.0 - path.slope).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(((e2 - e0) / 2.0 - path.slope).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((e0 - path.intercept).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("rescaled finite-m endpoints approach the closed form") {
    const int r_e = 2;
    auto base = test_params(r_e, 1.0);
    base.t_steps = 2000;
    const auto limit = [&] {
        auto p = base;
        p.m = 0.0;
        return closed_form_limit(p, 11);
    }();
    const int d = 2 * r_e;
    std::vector<double> errs;
    for (double m : {1e2, 1e4}) {
        auto params = base;
        params.m = m;
        params.eps_grid.clear();
        for (double e : base.eps_grid) params.eps_grid.push_back(e / std::sqrt(m));
        const auto finite = integrate_lambda(params, 11);
        double err = 0;
        for (std::size_t k = 0; k < base.eps_grid.size(); ++k) {
            const Eigen::MatrixXcd hat =
                std::sqrt(m) * (finite.endpoints[k] - Eigen::MatrixXcd::Identity(d, d));
            err = std::max(err, (hat - limit.endpoints[k]).cwiseAbs().maxCoeff());
        }
        errs.push_back(err);
    }
    CHECK(errs[1] < errs[0]);
}

TEST_CASE("identity-boundary zeros match the endpoint spectrum") {
    const int r_e = 3;
    auto params = test_params(r_e, 0.0);
    const auto path = closed_form_limit(params, 21);
    auto zeros = zero_process(path, Boundary::identity);
    std::sort(zeros.begin(), zeros.end());
    // the contraction is singular exactly at eps in spec(Re(B1 - A1))
    const Eigen::MatrixXd target = (path.b1 - path.a1).real();
    const Eigen::MatrixXd sym = 0.5 * (target + target.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
    REQUIRE(zeros.size() == static_cast<std::size_t>(r_e));
    for (int k = 0; k < r_e; ++k) CHECK(std::abs(zeros[k] - es.eigenvalues()(k)) <= 1e-6);
}

TEST_CASE("goe endpoint samples are symmetric and reproducible") {
    const auto stats = disorder::harmonic_average(disorder::DisorderSpec::two_point(1.0), 3.0);
    const auto a = sample_goe_endpoint(4, 4, stats, 31, true);
    const auto b = sample_goe_endpoint(4, 4, stats, 31, true);
    CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a - a.transpose()).cwiseAbs().maxCoeff() <= 1e-15);
    const auto c = sample_goe_endpoint(4, 4, stats, 31, false);
    CHECK((c - c.transpose()).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("parameter validation") {
    auto params = test_params(2, 100.0);
    params.t_steps = 10;
    CHECK_THROWS(integrate_lambda(params, 1));
}
