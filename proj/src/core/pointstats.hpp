#pragma once

#include <utility>
#include <vector>

#include "core/disorder.hpp"

namespace at::pointstats {

/// Spectrum recentered at `center` and stretched by `normalization`.
struct RescaledProcess {
    double center = 0;
    double normalization = 1;
    std::vector<double> points; // sorted
};

RescaledProcess rescale_spectrum(const std::vector<double>& eigenvalues, double lambda,
                                 double normalization);

/// (h^2 sigma2 + 1) sqrt(n s (r+1) r_e) / (h^2 sqrt(sigma2)): the stretch
/// that puts the local eigenvalue density near lambda at one point per unit.
double normalization_constant(const disorder::HarmonicStats& stats, int n, int s, int r,
                              int r_e);

/// Consecutive differences of the points inside [-window, window], normalized
/// to unit mean. Throws when fewer than two points fall inside.
std::vector<double> nearest_neighbor_gaps(const RescaledProcess& proc, double window);

/// Unit-mean consecutive differences of the central 50% of the points.
std::vector<double> bulk_unit_gaps(const std::vector<double>& points);

/// Unfolds each member of an ensemble against the pooled empirical
/// integrated density of states (count of pooled points below x, divided by
/// the ensemble size), so the mean spacing is one without per-member
/// renormalization. Points whose unfolded position falls within edge_trim of
/// either end of the pooled range are dropped. Members must cover the same
/// spectral window.
std::vector<std::vector<double>> ensemble_unfold(const std::vector<std::vector<double>>& members,
                                                 double edge_trim = 0.05);

enum class Reference {
    wigner_surmise_beta1, // CDF 1 - exp(-pi g^2 / 4)
    poisson_exp,          // CDF 1 - exp(-g)
};

/// Sup distance between the empirical CDF of the sample and the reference.
double ks_distance(std::vector<double> sample, Reference ref);

/// Two-sample Kolmogorov-Smirnov distance.
double ks_distance(std::vector<double> a, std::vector<double> b);

struct CountStats {
    double lo = 0, hi = 0;
    double mean = 0, var = 0;
    double mean_se = 0, var_se = 0;
};

/// Per-interval mean and variance of the point counts over an ensemble of
/// processes (>= 30 members).
std::vector<CountStats> counting_statistics(const std::vector<RescaledProcess>& ensemble,
                                            const std::vector<std::pair<double, double>>& intervals);

/// Fraction of gaps below `cutoff`, divided by `cutoff`: a crude density
/// estimate at zero for level-repulsion trend checks.
double small_gap_density(const std::vector<double>& gaps, double cutoff);

} // namespace at::pointstats
