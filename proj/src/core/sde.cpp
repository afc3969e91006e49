#include "core/sde.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>

#include "core/errors.hpp"
#include "core/rng.hpp"

namespace at::sde {

namespace {

using cplx = std::complex<double>;

void validate(const SdeParams& p) {
    if (p.r_e < 1) throw_config("sde requires r_e >= 1");
    if (p.s_diag.size() != p.r_e) throw_config("s_diag length does not equal r_e");
    if (p.variance_override < 0 && p.r_ambient < 1)
        throw_config("covariance scale needs r_ambient >= 1 or an explicit override");
}

// [[dA, dB], [-dB*, -dA*]] with elementwise conjugation.
Eigen::MatrixXcd noise_block(const Eigen::MatrixXcd& da, const Eigen::MatrixXcd& db) {
    const int r = static_cast<int>(da.rows());
    Eigen::MatrixXcd n(2 * r, 2 * r);
    n.block(0, 0, r, r) = da;
    n.block(0, r, r, r) = db;
    n.block(r, 0, r, r) = -db.conjugate();
    n.block(r, r, r, r) = -da.conjugate();
    return n;
}

Eigen::VectorXcd s_full(const SdeParams& p) {
    Eigen::VectorXcd s(2 * p.r_e);
    s.head(p.r_e) = p.s_diag;
    s.tail(p.r_e) = p.s_diag;
    return s;
}

// S diag(I, -I) as a diagonal vector.
Eigen::VectorXcd drift_diag(const SdeParams& p) {
    Eigen::VectorXcd d(2 * p.r_e);
    d.head(p.r_e) = p.s_diag;
    d.tail(p.r_e) = -p.s_diag;
    return d;
}

} // namespace

double SdeParams::variance_scale() const {
    if (variance_override >= 0) return variance_override;
    if (r_ambient < 1) throw_config("covariance scale needs r_ambient >= 1");
    const double h2 = stats.h * stats.h;
    return h2 * h2 * stats.sigma2 / (r_ambient + 1);
}

SdeParams make_sde_params(const transfer::ChannelData& cd,
                          const disorder::HarmonicStats& stats, double m, int t_steps,
                          std::vector<double> eps_grid) {
    SdeParams p;
    p.r_e = cd.r_e;
    p.stats = stats;
    p.q = cd.hyperbolic_drift(stats);
    p.s_diag = cd.S_diag().head(cd.r_e);
    p.z_diag = cd.z;
    p.m = m;
    p.t_steps = t_steps;
    p.eps_grid = std::move(eps_grid);
    p.r_ambient = cd.r;
    return p;
}

BrownianIncrement sample_brownian_increment(int r_e, double dt, double variance_scale,
                                            std::mt19937_64& rng) {
    if (r_e < 1) throw_config("brownian increment requires r_e >= 1");
    if (!(dt > 0)) throw_config("brownian increment requires dt > 0");
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double sd = std::sqrt(variance_scale * dt);
    BrownianIncrement inc;
    inc.dA = Eigen::MatrixXcd::Zero(r_e, r_e);
    inc.dB = Eigen::MatrixXcd::Zero(r_e, r_e);

    // dA diagonal: real, one common component (variance v dt) plus an
    // individual one (v dt / 2), giving 3/2 on the diagonal and 1 across
    const double common = sd * gauss(rng);
    for (int i = 0; i < r_e; ++i) inc.dA(i, i) = common + sd / std::numbers::sqrt2 * gauss(rng);
    for (int i = 0; i < r_e; ++i)
        for (int j = i + 1; j < r_e; ++j) {
            const cplx g(sd / std::numbers::sqrt2 * gauss(rng),
                         sd / std::numbers::sqrt2 * gauss(rng));
            inc.dA(i, j) = g;
            inc.dA(j, i) = std::conj(g);
        }
    for (int i = 0; i < r_e; ++i)
        inc.dB(i, i) = cplx(sd * std::sqrt(3.0) / 2.0 * gauss(rng),
                            sd * std::sqrt(3.0) / 2.0 * gauss(rng));
    for (int i = 0; i < r_e; ++i)
        for (int j = i + 1; j < r_e; ++j) {
            const cplx g(sd / std::numbers::sqrt2 * gauss(rng),
                         sd / std::numbers::sqrt2 * gauss(rng));
            inc.dB(i, j) = g;
            inc.dB(j, i) = g;
        }
    return inc;
}

SdePath integrate_lambda(const SdeParams& params, std::uint64_t seed) {
    validate(params);
    if (!(params.m > 0) || !std::isfinite(params.m))
        throw_config("integrate_lambda requires finite m > 0");
    if (params.t_steps < 100) throw_config("integrate_lambda requires t_steps >= 100");
    if (params.eps_grid.empty()) throw_config("eps_grid must not be empty");

    const int d = 2 * params.r_e;
    const double dt = 1.0 / params.t_steps;
    const double v = params.variance_scale();
    const double h = params.stats.h;
    const double drift_c = (h * h * h * params.stats.sigma2 - params.q) / params.m;
    const double noise_c = 1.0 / std::sqrt(params.m);
    const Eigen::VectorXcd sfull = s_full(params);
    const Eigen::VectorXcd sd_vec = drift_diag(params);

    auto rng = make_rng(derive_seed(seed, 0));
    std::vector<Eigen::MatrixXcd> lam(params.eps_grid.size(),
                                      Eigen::MatrixXcd::Identity(d, d));
    for (int k = 0; k < params.t_steps; ++k) {
        const auto inc = sample_brownian_increment(params.r_e, dt, v, rng);
        const Eigen::MatrixXcd noise =
            noise_c * (sfull.asDiagonal() * noise_block(inc.dA, inc.dB));
        for (std::size_t e = 0; e < lam.size(); ++e) {
            const double coef = (params.eps_grid[e] + drift_c) * dt;
            lam[e] += coef * (sd_vec.asDiagonal() * lam[e]) + noise * lam[e];
        }
        if (k % 256 == 0 && lam[0].norm() > 1e12)
            throw_numeric("sde integration blow-up at step " + std::to_string(k));
    }
    for (const auto& l : lam)
        if (!(l.norm() <= 1e12)) throw_numeric("sde integration blow-up at the endpoint");

    SdePath path;
    path.params = params;
    path.seed = seed;
    path.closed_form = false;
    path.endpoints = std::move(lam);
    return path;
}

SdePath closed_form_limit(const SdeParams& params, std::uint64_t seed) {
    validate(params);
    if (params.t_steps < 1) throw_config("closed form requires t_steps >= 1");
    const int r_e = params.r_e;
    const double dt = 1.0 / params.t_steps;
    const double v = params.variance_scale();

    // same increment stream integrate_lambda would see for this seed
    auto rng = make_rng(derive_seed(seed, 0));
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(r_e, r_e);
    Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(r_e, r_e);
    for (int k = 0; k < params.t_steps; ++k) {
        const auto inc = sample_brownian_increment(r_e, dt, v, rng);
        a += inc.dA;
        b += inc.dB;
    }

    SdePath path;
    path.params = params;
    path.seed = seed;
    path.closed_form = true;
    path.a1 = a;
    path.b1 = b;
    path.slope = Eigen::MatrixXcd(drift_diag(params).asDiagonal());
    path.intercept = s_full(params).asDiagonal() * noise_block(a, b);
    path.endpoints.reserve(params.eps_grid.size());
    for (double eps : params.eps_grid) path.endpoints.push_back(eps * path.slope + path.intercept);
    return path;
}

Eigen::MatrixXcd SdePath::at_eps(double eps) const {
    if (closed_form) return eps * slope + intercept;
    for (std::size_t e = 0; e < params.eps_grid.size(); ++e)
        if (params.eps_grid[e] == eps) return endpoints[e];
    SdeParams single = params;
    single.eps_grid = {eps};
    return integrate_lambda(single, seed).endpoints.front();
}

std::vector<double> zero_process(const SdePath& path, Boundary boundary) {
    const int r_e = path.params.r_e;
    Eigen::MatrixXcd left(r_e, 2 * r_e);
    left.setZero();
    if (boundary == Boundary::identity) {
        left.block(0, 0, r_e, r_e) = Eigen::MatrixXcd::Identity(r_e, r_e);
        left.block(0, r_e, r_e, r_e) = Eigen::MatrixXcd::Identity(r_e, r_e);
    } else {
        if (path.params.z_diag.size() != r_e)
            throw_config("zstar boundary needs the elliptic phases z_diag");
        left.block(0, 0, r_e, r_e) = path.params.z_diag.conjugate().asDiagonal();
        left.block(0, r_e, r_e, r_e) = path.params.z_diag.asDiagonal();
    }
    Eigen::MatrixXcd right(2 * r_e, r_e);
    right.setZero();
    right.block(0, 0, r_e, r_e) = Eigen::MatrixXcd::Identity(r_e, r_e);
    right.block(r_e, 0, r_e, r_e) = -Eigen::MatrixXcd::Identity(r_e, r_e);

    auto f = [&](double eps) -> cplx {
        return (left * path.at_eps(eps) * right).determinant();
    };

    // evaluation grid: caller-provided when dense enough, default otherwise
    std::vector<double> grid = path.params.eps_grid;
    if (grid.size() < 8) {
        double radius = 8.0 * std::sqrt(std::max(path.params.variance_scale(), 0.0) * r_e);
        if (!(radius > 0)) radius = 1.0;
        grid.resize(512);
        for (int k = 0; k < 512; ++k) grid[k] = -radius + 2.0 * radius * k / 511.0;
    }
    std::sort(grid.begin(), grid.end());

    std::vector<double> mag(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) mag[k] = std::abs(f(grid[k]));
    std::vector<double> sorted = mag;
    std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
    const double med = std::max(sorted[sorted.size() / 2], 1e-300);

    auto refine = [&](double eps0) {
        double eps = eps0;
        for (int it = 0; it < 100; ++it) {
            const double delta = std::max(1e-9, 1e-7 * std::abs(eps));
            const cplx fv = f(eps);
            const cplx fp = (f(eps + delta) - f(eps - delta)) / (2.0 * delta);
            if (std::abs(fp) < 1e-300) break;
            const double step = (fv / fp).real();
            eps -= step;
            if (std::abs(step) < 1e-13 * (1.0 + std::abs(eps))) break;
        }
        return eps;
    };

    std::vector<double> roots;
    for (std::size_t k = 1; k + 1 < grid.size(); ++k)
        if (mag[k] <= mag[k - 1] && mag[k] <= mag[k + 1] && mag[k] < 1e-6 * med)
            roots.push_back(refine(grid[k]));
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [](double x, double y) { return std::abs(x - y) < 1e-9; }),
                roots.end());

    if (path.closed_form) {
        // the contraction is affine in eps; recover multiplicities from the
        // pencil C0 + eps C1 when C1 is invertible
        const Eigen::MatrixXcd c1 = left * path.slope * right;
        const Eigen::MatrixXcd c0 = left * path.intercept * right;
        Eigen::PartialPivLU<Eigen::MatrixXcd> lu(c1);
        if (std::abs(lu.determinant()) > 1e-12) {
            const Eigen::MatrixXcd pencil = -lu.solve(c0);
            Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(pencil, false);
            std::vector<double> full;
            for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
                const cplx ev = es.eigenvalues()(k);
                if (std::abs(ev.imag()) > 1e-6 * (1.0 + std::abs(ev.real()))) continue;
                double best = refine(ev.real());
                for (double rroot : roots)
                    if (std::abs(rroot - ev.real()) < 1e-6) best = rroot;
                full.push_back(best);
            }
            std::sort(full.begin(), full.end());
            return full;
        }
    }
    return roots;
}

Eigen::MatrixXd sample_goe_endpoint(int r_e, int r, const disorder::HarmonicStats& stats,
                                    std::uint64_t seed, bool use_K_form) {
    if (r_e < 1) throw_config("goe endpoint requires r_e >= 1");
    if (r < r_e) throw_config("goe endpoint requires r >= r_e");
    const double h2 = stats.h * stats.h;
    const double v = h2 * h2 * stats.sigma2 / (r + 1);
    auto rng = make_rng(derive_seed(seed, 0));
    std::normal_distribution<double> gauss(0.0, 1.0);
    if (use_K_form) {
        const double b = gauss(rng);
        Eigen::MatrixXd k(r_e, r_e);
        for (int i = 0; i < r_e; ++i) k(i, i) = std::sqrt(5.0) / 2.0 * gauss(rng) + b;
        for (int i = 0; i < r_e; ++i)
            for (int j = i + 1; j < r_e; ++j) k(i, j) = k(j, i) = gauss(rng);
        return std::sqrt(v) * k;
    }
    const auto inc = sample_brownian_increment(r_e, 1.0, v, rng);
    return (inc.dB - inc.dA).real();
}

} // namespace at::sde
