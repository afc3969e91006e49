#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace at::disorder {

enum class Kind {
    point_mass,        // degenerate law at a single point (param = location)
    uniform_symmetric, // uniform on [-sigma, sigma]
    two_point_symmetric, // +-sigma with probability 1/2 each
    truncated_gaussian,  // N(0, param^2) conditioned on [-sigma, sigma]
};

/// Single-site distribution of the potential. Values always lie in
/// [-sigma, sigma]; all shipped kinds are centered.
struct DisorderSpec {
    Kind kind = Kind::two_point_symmetric;
    double sigma = 1.0; // support half-width
    double param = 0.0; // point_mass: location; truncated_gaussian: base std dev

    static DisorderSpec point_mass(double location);
    static DisorderSpec uniform(double sigma);
    static DisorderSpec two_point(double sigma);
    static DisorderSpec trunc_gauss(double sigma, double base_sd);
};

std::string kind_name(Kind k);
Kind kind_from_name(const std::string& name);

/// Throws a config error if the spec parameters are unusable.
void validate(const DisorderSpec& spec);

/// Harmonic-mean statistics of 1/(lambda - v) at a spectral parameter
/// outside the support.
struct HarmonicStats {
    double lambda = 0;
    double h = 0;       // harmonic average (E 1/(lambda-v))^-1
    double sigma2 = 0;  // variance of 1/(lambda-v)
    double sigma3 = 0;  // third centered moment of 1/(lambda-v)
    double w_drift = 0; // leading drift h^3 sigma2
};

/// Draws `count` i.i.d. potential values. Deterministic in (spec, count, seed).
std::vector<double> sample_potential(const DisorderSpec& spec, std::size_t count,
                                     std::uint64_t seed);

/// E(f(v)) under the spec's law: exact atom sums for the discrete kinds,
/// adaptive Gauss-Legendre otherwise (refined until relative change < 1e-12).
double expectation(const DisorderSpec& spec, const std::function<double(double)>& f);

HarmonicStats harmonic_average(const DisorderSpec& spec, double lambda);

/// Harmonic mean of lambda - value over a finite sample (V_s with X_k = lambda - v_k).
double empirical_harmonic_mean(const std::vector<double>& values, double lambda);

/// h_{lambda+eps}; throws when lambda+eps enters the support.
double perturbed_harmonic(const DisorderSpec& spec, double lambda, double eps);

struct WyEstimate {
    double w_s_hat = 0; // estimate of W_s = s (E v^lambda - h)
    double w_s_se = 0;
    double y_var_hat = 0; // estimate of E(Y^2) = s Var(v^lambda)
    double y_var_se = 0;
};

WyEstimate wy_decomposition(const DisorderSpec& spec, double lambda, int s,
                            std::size_t mc_samples, std::uint64_t seed);

/// One bound check row: estimate +- se against [bound_low, bound_high],
/// passing when the estimate is within 5 standard errors of the band.
struct BoundRow {
    std::string name;
    int s = 0;
    double estimate = 0;
    double se = 0;
    double bound_low = 0;
    double bound_high = 0;
    bool pass = false;
};

struct MomentReport {
    double h = 0;
    double sigma2 = 0;
    double a = 0; // |lambda| - sigma
    double b = 0; // |lambda| + sigma
    std::vector<BoundRow> rows;
    bool all_pass = true;
};

/// Monte Carlo check of the hard harmonic-moment bounds and the leading
/// 1/s asymptotics for each s in the grid.
MomentReport check_moment_bounds(const DisorderSpec& spec, double lambda,
                                 const std::vector<int>& s_grid,
                                 std::size_t mc_samples, std::uint64_t seed);

} // namespace at::disorder
