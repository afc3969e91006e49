#include "core/disorder.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "core/errors.hpp"
#include "core/rng.hpp"

namespace at::disorder {

namespace {

constexpr double kEdgeGuard = 1e-9; // reject lambda this close to the support edge

// 64-point Gauss-Legendre nodes/weights on [-1, 1], computed once by Newton
// iteration on the Legendre recurrence.
struct GaussLegendre {
    std::array<double, 64> x{};
    std::array<double, 64> w{};
    GaussLegendre() {
        const int n = 64;
        for (int i = 0; i < n / 2; ++i) {
            double t = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
            double p0 = 0, p1 = 0;
            for (int iter = 0; iter < 100; ++iter) {
                p0 = 1.0;
                p1 = t;
                for (int k = 2; k <= n; ++k) {
                    double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                double dp = n * (t * p1 - p0) / (t * t - 1.0);
                double dt = p1 / dp;
                t -= dt;
                if (std::abs(dt) < 1e-15) break;
            }
            double dp = n * (t * p1 - p0) / (t * t - 1.0);
            x[i] = -t;
            x[n - 1 - i] = t;
            w[i] = w[n - 1 - i] = 2.0 / ((1.0 - t * t) * dp * dp);
        }
    }
};

const GaussLegendre& gl64() {
    static const GaussLegendre g;
    return g;
}

double panel_integral(const std::function<double(double)>& f, double lo, double hi) {
    const auto& g = gl64();
    const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
    double acc = 0;
    for (int i = 0; i < 64; ++i) acc += g.w[i] * f(c + h * g.x[i]);
    return acc * h;
}

double adaptive_integral(const std::function<double(double)>& f, double lo, double hi) {
    double prev = panel_integral(f, lo, hi);
    for (int panels = 2; panels <= 256; panels *= 2) {
        double acc = 0;
        const double step = (hi - lo) / panels;
        for (int k = 0; k < panels; ++k)
            acc += panel_integral(f, lo + k * step, lo + (k + 1) * step);
        if (std::abs(acc - prev) <= 1e-12 * std::max(1.0, std::abs(acc))) return acc;
        prev = acc;
    }
    return prev;
}

double trunc_gauss_mass(double sigma, double sd) {
    return std::erf(sigma / (sd * std::numbers::sqrt2));
}

void require_outside_support(const DisorderSpec& spec, double lambda) {
    if (std::abs(lambda) <= spec.sigma + kEdgeGuard)
        throw_domain("spectral parameter inside disorder support: |lambda| <= sigma");
}

} // namespace

DisorderSpec DisorderSpec::point_mass(double location) {
    return {Kind::point_mass, std::abs(location), location};
}
DisorderSpec DisorderSpec::uniform(double sigma) { return {Kind::uniform_symmetric, sigma, 0.0}; }
DisorderSpec DisorderSpec::two_point(double sigma) {
    return {Kind::two_point_symmetric, sigma, 0.0};
}
DisorderSpec DisorderSpec::trunc_gauss(double sigma, double base_sd) {
    return {Kind::truncated_gaussian, sigma, base_sd};
}

std::string kind_name(Kind k) {
    switch (k) {
        case Kind::point_mass: return "point_mass";
        case Kind::uniform_symmetric: return "uniform_symmetric";
        case Kind::two_point_symmetric: return "two_point_symmetric";
        case Kind::truncated_gaussian: return "truncated_gaussian";
    }
    return "?";
}

Kind kind_from_name(const std::string& name) {
    if (name == "point_mass") return Kind::point_mass;
    if (name == "uniform_symmetric") return Kind::uniform_symmetric;
    if (name == "two_point_symmetric") return Kind::two_point_symmetric;
    if (name == "truncated_gaussian") return Kind::truncated_gaussian;
    throw_config("unknown disorder kind '" + name + "'");
}

void validate(const DisorderSpec& spec) {
    if (spec.kind == Kind::point_mass) {
        if (spec.sigma != std::abs(spec.param))
            throw_config("point_mass spec requires sigma == |location|");
        return;
    }
    if (!(spec.sigma > 0)) throw_config("disorder sigma must be positive");
    if (spec.kind == Kind::truncated_gaussian && !(spec.param > 0))
        throw_config("truncated_gaussian base std dev must be positive");
}

std::vector<double> sample_potential(const DisorderSpec& spec, std::size_t count,
                                     std::uint64_t seed) {
    validate(spec);
    if (count < 1) throw_config("sample count must be >= 1");
    auto rng = make_rng(seed);
    std::vector<double> out(count);
    switch (spec.kind) {
        case Kind::point_mass:
            std::fill(out.begin(), out.end(), spec.param);
            break;
        case Kind::uniform_symmetric: {
            std::uniform_real_distribution<double> u(-spec.sigma, spec.sigma);
            for (auto& v : out) v = u(rng);
            break;
        }
        case Kind::two_point_symmetric: {
            for (auto& v : out) v = (rng() & 1u) ? spec.sigma : -spec.sigma;
            break;
        }
        case Kind::truncated_gaussian: {
            std::normal_distribution<double> g(0.0, spec.param);
            for (auto& v : out) {
                double x;
                do {
                    x = g(rng);
                } while (std::abs(x) > spec.sigma);
                v = x;
            }
            break;
        }
    }
    return out;
}

double expectation(const DisorderSpec& spec, const std::function<double(double)>& f) {
    validate(spec);
    switch (spec.kind) {
        case Kind::point_mass: return f(spec.param);
        case Kind::two_point_symmetric: return 0.5 * (f(spec.sigma) + f(-spec.sigma));
        case Kind::uniform_symmetric: {
            const double s = spec.sigma;
            return adaptive_integral([&](double v) { return f(v) / (2 * s); }, -s, s);
        }
        case Kind::truncated_gaussian: {
            const double s = spec.sigma, sd = spec.param;
            const double norm =
                trunc_gauss_mass(s, sd) * sd * std::sqrt(2 * std::numbers::pi);
            return adaptive_integral(
                [&](double v) { return f(v) * std::exp(-0.5 * v * v / (sd * sd)) / norm; },
                -s, s);
        }
    }
    throw_config("unreachable disorder kind");
}

HarmonicStats harmonic_average(const DisorderSpec& spec, double lambda) {
    require_outside_support(spec, lambda);
    double e1, e2, e3;
    if (spec.kind == Kind::two_point_symmetric) {
        // exact two-atom sums; e1 collapses to lambda / (lambda^2 - sigma^2)
        const double s = spec.sigma;
        e1 = lambda / (lambda * lambda - s * s);
        e2 = 0.5 * (1.0 / ((lambda - s) * (lambda - s)) + 1.0 / ((lambda + s) * (lambda + s)));
        e3 = 0.5 * (std::pow(lambda - s, -3.0) + std::pow(lambda + s, -3.0));
    } else {
        e1 = expectation(spec, [&](double v) { return 1.0 / (lambda - v); });
        e2 = expectation(spec, [&](double v) { return std::pow(lambda - v, -2.0); });
        e3 = expectation(spec, [&](double v) { return std::pow(lambda - v, -3.0); });
    }
    HarmonicStats st;
    st.lambda = lambda;
    st.h = 1.0 / e1;
    st.sigma2 = std::max(0.0, e2 - e1 * e1);
    st.sigma3 = e3 - 3.0 * e2 * e1 + 2.0 * e1 * e1 * e1;
    st.w_drift = st.h * st.h * st.h * st.sigma2;
    return st;
}

double empirical_harmonic_mean(const std::vector<double>& values, double lambda) {
    if (values.empty()) throw_config("empirical_harmonic_mean needs at least one value");
    double acc = 0;
    for (double v : values) {
        const double x = lambda - v;
        if (x == 0.0) throw_singular("empirical harmonic mean hit lambda == value");
        acc += 1.0 / x;
    }
    return static_cast<double>(values.size()) / acc;
}

double perturbed_harmonic(const DisorderSpec& spec, double lambda, double eps) {
    require_outside_support(spec, lambda);
    require_outside_support(spec, lambda + eps);
    return harmonic_average(spec, lambda + eps).h;
}

namespace {

// Accumulates central moments of V_s - h over Monte Carlo repetitions.
struct MomentAccumulator {
    long double s1 = 0, s2 = 0, s3 = 0, s4 = 0, s6 = 0, s8 = 0, s12 = 0;
    std::size_t n = 0;
    void add(double d) {
        const long double d2 = static_cast<long double>(d) * d;
        s1 += d;
        s2 += d2;
        s3 += d2 * d;
        s4 += d2 * d2;
        s6 += d2 * d2 * d2;
        s8 += d2 * d2 * d2 * d2;
        s12 += d2 * d2 * d2 * d2 * d2 * d2;
        ++n;
    }
    double mean() const { return static_cast<double>(s1 / n); }
    double m2() const { return static_cast<double>(s2 / n); }
    double m3() const { return static_cast<double>(s3 / n); }
    double m4() const { return static_cast<double>(s4 / n); }
    double m6() const { return static_cast<double>(s6 / n); }
    double se_mean() const {
        return std::sqrt(std::max(0.0, m2() - mean() * mean()) / n);
    }
    double se_of(double mk, double m2k) const {
        return std::sqrt(std::max(0.0, m2k - mk * mk) / n);
    }
};

MomentAccumulator accumulate_vs(const DisorderSpec& spec, double lambda, int s,
                                std::size_t mc_samples, std::uint64_t seed, double h) {
    MomentAccumulator acc;
    auto rng = make_rng(derive_seed(seed, static_cast<std::uint64_t>(s)));
    // draw all s-blocks from one stream; chunking would use derive_seed per chunk
    std::vector<double> block(static_cast<std::size_t>(s));
    std::uniform_real_distribution<double> u(-spec.sigma, spec.sigma);
    std::normal_distribution<double> g(0.0, spec.param);
    for (std::size_t it = 0; it < mc_samples; ++it) {
        double inv_sum = 0;
        for (int k = 0; k < s; ++k) {
            double v;
            switch (spec.kind) {
                case Kind::point_mass: v = spec.param; break;
                case Kind::uniform_symmetric: v = u(rng); break;
                case Kind::two_point_symmetric:
                    v = (rng() & 1u) ? spec.sigma : -spec.sigma;
                    break;
                default:
                    do {
                        v = g(rng);
                    } while (std::abs(v) > spec.sigma);
            }
            inv_sum += 1.0 / (lambda - v);
        }
        acc.add(s / inv_sum - h);
    }
    return acc;
}

} // namespace

WyEstimate wy_decomposition(const DisorderSpec& spec, double lambda, int s,
                            std::size_t mc_samples, std::uint64_t seed) {
    require_outside_support(spec, lambda);
    if (s < 2) throw_config("wy_decomposition needs s >= 2");
    const double h = harmonic_average(spec, lambda).h;
    auto acc = accumulate_vs(spec, lambda, s, mc_samples, seed, h);
    WyEstimate est;
    est.w_s_hat = s * acc.mean();
    est.w_s_se = s * acc.se_mean();
    const double var = std::max(0.0, acc.m2() - acc.mean() * acc.mean());
    est.y_var_hat = s * var;
    est.y_var_se = s * acc.se_of(acc.m2(), acc.m4());
    return est;
}

MomentReport check_moment_bounds(const DisorderSpec& spec, double lambda,
                                 const std::vector<int>& s_grid,
                                 std::size_t mc_samples, std::uint64_t seed) {
    require_outside_support(spec, lambda);
    auto stats = harmonic_average(spec, lambda);
    MomentReport rep;
    rep.h = stats.h;
    rep.sigma2 = stats.sigma2;
    rep.a = std::abs(lambda) - spec.sigma;
    rep.b = std::abs(lambda) + spec.sigma;
    const double h2 = stats.h * stats.h;
    const double hm = std::abs(stats.h);
    const double flip = lambda < 0 ? -1.0 : 1.0; // V_s - h mirrors with lambda

    auto push = [&](const std::string& name, int s, double est, double se, double lo,
                    double hi) {
        BoundRow row{name, s, est, se, lo, hi, est + 5 * se >= lo && est - 5 * se <= hi};
        rep.all_pass = rep.all_pass && row.pass;
        rep.rows.push_back(row);
    };

    for (int s : s_grid) {
        auto acc = accumulate_vs(spec, lambda, s, mc_samples, seed, stats.h);
        const double m1 = flip * acc.mean();
        const double se1 = acc.se_mean();
        const double m2 = acc.m2();
        const double se2 = acc.se_of(acc.m2(), acc.m4());
        const double m4 = acc.m4();
        const double se4 = acc.se_of(acc.m4(), static_cast<double>(acc.s8 / acc.n));
        const double m6 = acc.m6();
        const double se6 = acc.se_of(acc.m6(), static_cast<double>(acc.s12 / acc.n));

        push("M1_hard", s, m1, se1, 0.0, rep.b * h2 * stats.sigma2 / s);
        push("M2_hard", s, m2, se2, rep.a * rep.a * h2 * stats.sigma2 / s,
             rep.b * rep.b * h2 * stats.sigma2 / s);
        // 2m-th moment bound, m = 2 and 3
        auto even_bound = [&](int m) {
            double fact2m = 1, factm = 1;
            for (int k = 2; k <= 2 * m; ++k) fact2m *= k;
            for (int k = 2; k <= m; ++k) factm *= k;
            return fact2m * std::pow(hm * rep.b / rep.a, 2.0 * m) /
                   (std::pow(2.0, m) * factm * std::pow(static_cast<double>(s), m));
        };
        push("M4_hard", s, m4, se4, 0.0, even_bound(2));
        push("M6_hard", s, m6, se6, 0.0, even_bound(3));
        // leading 1/s asymptotics, exact targets h^3 sigma2 and h^4 sigma2
        push("M1_asym", s, s * (flip * acc.mean()) * flip, s * se1,
             stats.h * h2 * stats.sigma2, stats.h * h2 * stats.sigma2);
        push("M2_asym", s, s * m2, s * se2, h2 * h2 * stats.sigma2, h2 * h2 * stats.sigma2);
    }
    return rep;
}

} // namespace at::disorder
