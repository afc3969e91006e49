#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <vector>

#include "core/disorder.hpp"
#include "core/transfer.hpp"

namespace at::sde {

/// One Euler step's worth of matrix Brownian noise: dA Hermitian, dB complex
/// symmetric, entry variances variance_scale * dt * {3/2 diagonal, 1 off},
/// diagonal entries of dA sharing a common real component of variance
/// variance_scale * dt. A and B independent.
struct BrownianIncrement {
    Eigen::MatrixXcd dA;
    Eigen::MatrixXcd dB;
};

BrownianIncrement sample_brownian_increment(int r_e, double dt, double variance_scale,
                                            std::mt19937_64& rng);

/// Parameters of the limiting matrix SDE on [0, 1].
struct SdeParams {
    int r_e = 1;
    disorder::HarmonicStats stats;  // taken at the spectral parameter lambda
    double q = 0;                   // hyperbolic drift correction
    Eigen::VectorXcd s_diag;        // (z̄_j - z_j)^{-1} = i / (2 Im z_j)
    Eigen::VectorXcd z_diag;        // elliptic phases; may be empty
    double m = 0;                   // disorder-scale parameter; <= 0 means the closed form
    int t_steps = 10000;
    std::vector<double> eps_grid;
    int r_ambient = 0;              // r entering the 1/(r+1) covariance scale
    double variance_override = -1;  // >= 0 replaces the derived covariance scale

    /// h^4 sigma2 / (r+1) unless overridden.
    double variance_scale() const;
};

/// Builds SDE parameters from a channel decomposition at lambda.
SdeParams make_sde_params(const transfer::ChannelData& cd,
                          const disorder::HarmonicStats& stats, double m, int t_steps,
                          std::vector<double> eps_grid);

/// Endpoint data of one noise realization, with the whole eps grid driven by
/// the same Brownian path.
struct SdePath {
    SdeParams params;
    std::uint64_t seed = 0;
    bool closed_form = false;
    std::vector<Eigen::MatrixXcd> endpoints; // Lambda_1 per eps in params.eps_grid

    // closed form only: Lambda^eps_1 = eps * slope + intercept
    Eigen::MatrixXcd slope;
    Eigen::MatrixXcd intercept;
    Eigen::MatrixXcd a1, b1; // Brownian endpoint values behind the intercept

    /// Endpoint at an arbitrary eps: affine evaluation for the closed form,
    /// re-integration with the identical noise stream otherwise.
    Eigen::MatrixXcd at_eps(double eps) const;
};

/// Euler-Maruyama for
///   dL = (eps + (h^3 sigma2 - q)/m) S diag(I,-I) L dt
///        + (1/sqrt(m)) S [[dA, dB], [-dB*, -dA*]] L,   L_0 = I,
/// all eps advanced in lockstep on shared increments.
SdePath integrate_lambda(const SdeParams& params, std::uint64_t seed);

/// m -> infinity limit: Lambda^eps_t = eps t S diag(I,-I) + S [[A_t, B_t],
/// [-B*_t, -A*_t]], with (A_1, B_1) accumulated from the same increment
/// stream integrate_lambda would consume for this seed and t_steps.
SdePath closed_form_limit(const SdeParams& params, std::uint64_t seed);

enum class Boundary { identity, zstar };

/// Real zeros of eps -> det(boundary-contracted Lambda^eps_1): grid scan for
/// local minima of |det| below 1e-6 of the grid median, Newton refinement.
/// Identity boundary contracts with [I | I] on the left, [I; -I] on the
/// right; zstar uses [Z̄ | Z] built from z_diag.
std::vector<double> zero_process(const SdePath& path, Boundary boundary);

/// Real symmetric r_e x r_e endpoint matrix distributed as Re(B_1 - A_1).
/// use_K_form samples sqrt(v) (K + b I) with Var K_ii = 5/4, Var K_ij = 1,
/// b standard Gaussian; otherwise samples the Brownian endpoint directly.
Eigen::MatrixXd sample_goe_endpoint(int r_e, int r, const disorder::HarmonicStats& stats,
                                    std::uint64_t seed, bool use_K_form);

} // namespace at::sde
