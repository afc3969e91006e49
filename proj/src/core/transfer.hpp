#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "core/disorder.hpp"
#include "core/graph.hpp"

namespace at::transfer {

using cplx = std::complex<double>;

/// 2r x 2r transfer matrix propagating (u_{i+1}, u_i) across slice i.
struct TransferMatrix {
    Eigen::MatrixXcd m;
    cplx z;
    int slice = 0;

    int r() const { return static_cast<int>(m.rows()) / 2; }
};

/// Harmonic mean of one s-block of potential values at spectral parameter z.
cplx effective_potential_block(std::span<const double> potential_block, cplx z);

/// Transfer matrix of one slice: [[V^z - w I - Delta^D_r, -I], [I, 0]].
TransferMatrix build_transfer(const graph::AntitreeParams& p,
                              std::span<const double> potential_slice, cplx z,
                              int slice_index = 0);

/// Real-arithmetic upper-left block V^lambda - w I - Delta^D_r for real lambda.
Eigen::MatrixXd transfer_top_block(const graph::AntitreeParams& p,
                                   std::span<const double> potential_slice, double lambda,
                                   int slice_index = 0);

/// Ordered product T_n ... T_1 with running sup-norm normalization.
/// `matrix * exp(log_scale)` is the unnormalized product.
struct ScaledProduct {
    Eigen::MatrixXcd matrix;
    double log_scale = 0;
};

ScaledProduct transfer_product(const graph::AntitreeParams& p,
                               std::span<const double> potential, cplx z);

/// Boundary determinant of the transfer recursion, evaluated through a
/// QR-stabilized shooting pass (orthonormal subspace propagation, unique
/// positive-diagonal QR, hence continuous in lambda). Zeros in lambda outside
/// [-sigma, sigma] are the eigenvalues; `value` stays well conditioned for
/// long products where the raw corner determinant underflows.
struct SecularValue {
    double value = 0;     // top-corner determinant of the orthonormal basis
    double log_scale = 0; // accumulated log of the stripped QR scales
};

SecularValue secular_value(const graph::AntitreeParams& p, std::span<const double> potential,
                           double lambda);

/// All secular zeros in (lo, hi), sign-change bracketing plus bisection to
/// 1e-10, with a local-minimum detector for even-multiplicity zeros.
/// grid_step <= 0 picks (hi-lo) / (20 * expected_count).
std::vector<double> eigenvalue_scan(const graph::AntitreeParams& p,
                                    std::span<const double> potential, double lo, double hi,
                                    double grid_step = 0.0, int expected_count = 0);

struct Eigenvector {
    Eigen::VectorXd psi;
    double residual = 0;    // ||H psi - lambda psi|| / ||psi||
    int kernel_dim = 1;     // corner kernel dimension at lambda
};

/// Reconstructs psi from the transfer recursion at a located secular zero.
Eigenvector reconstruct_eigenvector(const graph::AntitreeParams& p,
                                    std::span<const double> potential, double lambda);

/// E(lambda) = h_lambda - w, with membership in I_{w,nu} = {|E| < 4}.
struct EffectiveEnergy {
    double value = 0;
    bool in_interval = false;
};

EffectiveEnergy effective_energy(const disorder::DisorderSpec& spec, double lambda, double w);

/// Channel decomposition of the deterministic transfer dynamics at lambda.
/// Channels are ordered hyperbolic-first; `order[k]` is the original index j
/// (1-based) of the k-th channel. For E > 0 this ordering realizes the
/// mirror convention E -> -E, a_j -> -a_{r+1-j}.
struct ChannelData {
    double lambda = 0;
    double E = 0;
    int r = 0;
    int r_h = 0;
    int r_e = 0;
    std::vector<int> order;          // channel -> original j (1-based)
    Eigen::VectorXd a;               // a_{order[k]} = 2 cos(pi order[k] / (r+1))
    Eigen::VectorXd gamma;           // |gamma_j| < 1, hyperbolic channels
    Eigen::VectorXcd z;              // |z_j| = 1, Im > 0, elliptic channels
    Eigen::MatrixXd O;               // r x r, columns channel-ordered, O^T O = I
    Eigen::MatrixXcd Q;              // 2r x 2r basis change
    Eigen::VectorXcd U;              // diag(Z*, Z), length 2 r_e

    /// diag(Gamma, U, Gamma^{-1}) as a dense matrix.
    Eigen::MatrixXcd deterministic_limit() const;
    /// 2r x 2r orthogonal diag(O, O).
    Eigen::MatrixXcd O_tilde() const;
    /// S = diag((Z̄ - Z)^{-1}, (Z̄ - Z)^{-1}), length 2 r_e diagonal.
    Eigen::VectorXcd S_diag() const;
    /// q = (h^4 sigma2 / (r+1)) sum_j (gamma_j^{-1} - gamma_j)^{-1}.
    double hyperbolic_drift(const disorder::HarmonicStats& stats) const;
};

ChannelData channel_decomposition(const disorder::DisorderSpec& spec, double lambda, double w,
                                  int r);

/// First failing quadruple of the resonance conditions, if any.
struct ChaoticWitness {
    bool chaotic = true;
    std::array<int, 4> indices{}; // offending (i, j, k, l) when not chaotic
    int which = 0;                // 0: z z z z, 1: z̄ z z z, 2: z̄ z̄ z z
};

ChaoticWitness chaotic_check(const Eigen::VectorXcd& z, double tol);

/// Increasing n <= horizon with ||Z^{n+1} - target|| < tol, up to `count`.
std::vector<long> find_return_times(const Eigen::VectorXcd& z_diag,
                                    const Eigen::VectorXcd& target, int count, double tol,
                                    long horizon);

enum class ScaledKind { raw, conjugated };

/// lambda^eps_n = lambda + eps / (n (h^2 sigma2 + 1)).
double scaled_lambda(const disorder::HarmonicStats& stats, double eps, int n);

/// Transfer matrix at lambda^eps_n with s = m n, optionally conjugated into
/// the channel basis Q^{-1} O~^T T O~ Q.
TransferMatrix scaled_transfer(const graph::AntitreeParams& p,
                               const disorder::DisorderSpec& spec, double lambda, double eps,
                               int m, int n, std::span<const double> potential_slice,
                               ScaledKind which);

/// max_{x,y} |(T^T J T - J)(x,y)| with J = [[0, -I], [I, 0]].
double symplectic_defect(const Eigen::MatrixXcd& t);

} // namespace at::transfer
