#include "core/pointstats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "core/errors.hpp"

namespace at::pointstats {

RescaledProcess rescale_spectrum(const std::vector<double>& eigenvalues, double lambda,
                                 double normalization) {
    if (!(normalization > 0)) throw_config("normalization must be positive");
    RescaledProcess proc;
    proc.center = lambda;
    proc.normalization = normalization;
    proc.points.reserve(eigenvalues.size());
    for (double e : eigenvalues) proc.points.push_back(normalization * (e - lambda));
    std::sort(proc.points.begin(), proc.points.end());
    return proc;
}

double normalization_constant(const disorder::HarmonicStats& stats, int n, int s, int r,
                              int r_e) {
    if (n < 1 || s < 1 || r < 1 || r_e < 1)
        throw_config("normalization constant requires positive n, s, r, r_e");
    const double h2 = stats.h * stats.h;
    const double sigma = std::sqrt(stats.sigma2);
    return (h2 * stats.sigma2 + 1.0) *
           std::sqrt(static_cast<double>(n) * s * (r + 1.0) * r_e) / (h2 * sigma);
}

namespace {

std::vector<double> unit_mean_diffs(const std::vector<double>& pts) {
    if (pts.size() < 2) throw_domain("need at least two points for gap extraction");
    std::vector<double> gaps(pts.size() - 1);
    double sum = 0;
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
        gaps[k] = pts[k + 1] - pts[k];
        sum += gaps[k];
    }
    if (!(sum > 0)) throw_numeric("degenerate point configuration: zero total gap length");
    const double scale = static_cast<double>(gaps.size()) / sum;
    for (double& g : gaps) g *= scale;
    return gaps;
}

} // namespace

std::vector<double> nearest_neighbor_gaps(const RescaledProcess& proc, double window) {
    std::vector<double> inside;
    for (double p : proc.points)
        if (p >= -window && p <= window) inside.push_back(p);
    return unit_mean_diffs(inside);
}

std::vector<double> bulk_unit_gaps(const std::vector<double>& points) {
    std::vector<double> pts = points;
    std::sort(pts.begin(), pts.end());
    const std::size_t n = pts.size();
    if (n < 8) throw_domain("need at least 8 points for a bulk window");
    const std::size_t lo = n / 4, hi = (3 * n) / 4;
    return unit_mean_diffs(std::vector<double>(pts.begin() + lo, pts.begin() + hi));
}

std::vector<std::vector<double>> ensemble_unfold(const std::vector<std::vector<double>>& members,
                                                 double edge_trim) {
    if (members.empty()) throw_config("ensemble unfolding requires at least one member");
    if (!(edge_trim >= 0.0 && edge_trim < 0.5)) throw_config("edge_trim must lie in [0, 0.5)");
    std::vector<double> pooled;
    for (const auto& pts : members) pooled.insert(pooled.end(), pts.begin(), pts.end());
    if (pooled.size() < 2) throw_domain("too few pooled points for unfolding");
    std::sort(pooled.begin(), pooled.end());
    const double m = static_cast<double>(members.size());
    const double top = static_cast<double>(pooled.size()) / m;
    const double lo = edge_trim * top, hi = (1.0 - edge_trim) * top;
    std::vector<std::vector<double>> out(members.size());
    for (std::size_t i = 0; i < members.size(); ++i) {
        std::vector<double> pts = members[i];
        std::sort(pts.begin(), pts.end());
        out[i].reserve(pts.size());
        for (double x : pts) {
            const auto below = std::lower_bound(pooled.begin(), pooled.end(), x) - pooled.begin();
            const double u = static_cast<double>(below) / m;
            if (u >= lo && u <= hi) out[i].push_back(u);
        }
    }
    return out;
}

double ks_distance(std::vector<double> sample, Reference ref) {
    if (sample.empty()) throw_config("ks distance requires a nonempty sample");
    std::sort(sample.begin(), sample.end());
    auto cdf = [&](double g) {
        if (g <= 0) return 0.0;
        return ref == Reference::wigner_surmise_beta1
                   ? 1.0 - std::exp(-std::numbers::pi * g * g / 4.0)
                   : 1.0 - std::exp(-g);
    };
    const double n = static_cast<double>(sample.size());
    double d = 0;
    for (std::size_t k = 0; k < sample.size(); ++k) {
        const double f = cdf(sample[k]);
        d = std::max(d, std::abs(f - k / n));
        d = std::max(d, std::abs((k + 1) / n - f));
    }
    return d;
}

double ks_distance(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw_config("ks distance requires nonempty samples");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0;
    while (i < a.size() && j < b.size()) {
        // advance past ties in lockstep so equal values never contribute
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] == x) ++i;
        while (j < b.size() && b[j] == x) ++j;
        d = std::max(d, std::abs(i / na - j / nb));
    }
    return d;
}

std::vector<CountStats> counting_statistics(const std::vector<RescaledProcess>& ensemble,
                                            const std::vector<std::pair<double, double>>& intervals) {
    if (ensemble.size() < 30) throw_config("counting statistics need an ensemble of >= 30");
    std::vector<CountStats> out;
    out.reserve(intervals.size());
    const double n = static_cast<double>(ensemble.size());
    for (const auto& [lo, hi] : intervals) {
        if (!(lo < hi)) throw_config("counting interval must have lo < hi");
        std::vector<double> counts;
        counts.reserve(ensemble.size());
        for (const auto& proc : ensemble) {
            const auto first = std::lower_bound(proc.points.begin(), proc.points.end(), lo);
            const auto last = std::upper_bound(proc.points.begin(), proc.points.end(), hi);
            counts.push_back(static_cast<double>(last - first));
        }
        CountStats cs;
        cs.lo = lo;
        cs.hi = hi;
        double sum = 0;
        for (double c : counts) sum += c;
        cs.mean = sum / n;
        double m2 = 0, m4 = 0;
        for (double c : counts) {
            const double d = c - cs.mean;
            m2 += d * d;
            m4 += d * d * d * d;
        }
        cs.var = m2 / (n - 1);
        cs.mean_se = std::sqrt(cs.var / n);
        // SE of the sample variance from the fourth central moment
        const double mu4 = m4 / n, mu2 = m2 / n;
        cs.var_se = std::sqrt(std::max(mu4 - mu2 * mu2, 0.0) / n);
        out.push_back(cs);
    }
    return out;
}

double small_gap_density(const std::vector<double>& gaps, double cutoff) {
    if (gaps.empty()) throw_config("gap density requires a nonempty sample");
    if (!(cutoff > 0)) throw_config("cutoff must be positive");
    std::size_t below = 0;
    for (double g : gaps)
        if (g < cutoff) ++below;
    return static_cast<double>(below) / gaps.size() / cutoff;
}

} // namespace at::pointstats
