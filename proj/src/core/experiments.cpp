#include "core/experiments.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "core/disorder.hpp"
#include "core/errors.hpp"
#include "core/graph.hpp"
#include "core/hamiltonian.hpp"
#include "core/pointstats.hpp"
#include "core/rng.hpp"
#include "core/sde.hpp"
#include "core/transfer.hpp"

namespace at::experiments {

namespace fs = std::filesystem;
using json = nlohmann::json;

std::string kind_name(Kind k) {
    switch (k) {
        case Kind::oracle_equivalence: return "oracle_equivalence";
        case Kind::harmonic_mc: return "harmonic_mc";
        case Kind::channel_conjugation: return "channel_conjugation";
        case Kind::sde_refinement: return "sde_refinement";
        case Kind::goe_gap_compare: return "goe_gap_compare";
        case Kind::antitree_pipeline: return "antitree_pipeline";
    }
    return "?";
}

Kind kind_from_name(const std::string& name) {
    for (Kind k : {Kind::oracle_equivalence, Kind::harmonic_mc, Kind::channel_conjugation,
                   Kind::sde_refinement, Kind::goe_gap_compare, Kind::antitree_pipeline})
        if (kind_name(k) == name) return k;
    throw_config("unknown experiment kind '" + name + "'");
}

std::string version() { return "0.1.0"; }

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// Tracks written artifacts so a failed run can remove its partial outputs.
struct Writer {
    fs::path dir;
    std::vector<std::string> written;

    std::ofstream open(const std::string& name) {
        const fs::path p = dir / name;
        std::ofstream out(p);
        if (!out) throw Error(ErrorCode::io, "cannot open '" + p.string() + "' for writing");
        written.push_back(p.string());
        return out;
    }

    void cleanup() {
        std::error_code ec;
        for (const auto& p : written) fs::remove(p, ec);
        written.clear();
    }
};

std::map<std::string, std::set<std::string>> schema(Kind k) {
    std::map<std::string, std::set<std::string>> s{
        {"experiment", {"kind", "seed", "output_dir"}},
        {"disorder", {"kind", "sigma", "param"}},
    };
    switch (k) {
        case Kind::oracle_equivalence:
            s["antitree"] = {"n", "r", "s", "w"};
            s["spectral"] = {"lambda", "window_lo", "window_hi"};
            s["oracle"] = {"seeds"};
            break;
        case Kind::harmonic_mc:
            s["spectral"] = {"lambda"};
            s["harmonic"] = {"s_grid", "mc_samples"};
            break;
        case Kind::channel_conjugation:
            s["antitree"] = {"w"};
            s["channel"] = {"r_grid", "lambda_grid"};
            break;
        case Kind::sde_refinement:
            s["spectral"] = {"lambda"};
            s["sde"] = {"r", "w", "m_grid", "eps_grid", "t_steps", "seeds"};
            break;
        case Kind::goe_gap_compare:
            s["spectral"] = {"lambda"};
            s["goe"] = {"r_e", "r", "ensemble"};
            break;
        case Kind::antitree_pipeline:
            s["antitree"] = {"w"};
            s["spectral"] = {"lambda"};
            s["pipeline"] = {"configs", "s", "ensemble", "window", "reference_r_e",
                             "reference_ensemble", "cutoff"};
            break;
    }
    return s;
}

disorder::DisorderSpec disorder_from(const config::Config& cfg) {
    disorder::DisorderSpec spec;
    spec.kind = disorder::kind_from_name(cfg.get_or("disorder", "kind", "two_point_symmetric"));
    spec.sigma = cfg.get_double_or("disorder", "sigma", 1.0);
    spec.param = cfg.get_double_or("disorder", "param", 0.0);
    disorder::validate(spec);
    return spec;
}

graph::AntitreeParams antitree_from(const config::Config& cfg) {
    graph::AntitreeParams p;
    p.n = static_cast<int>(cfg.get_int("antitree", "n"));
    p.r = static_cast<int>(cfg.get_int("antitree", "r"));
    p.s = static_cast<int>(cfg.get_int("antitree", "s"));
    p.w = cfg.get_double_or("antitree", "w", 0.0);
    graph::validate(p);
    return p;
}

struct PipelineConfig {
    int n = 0, r = 0, m = 0;
    int s() const { return m * n; }
};

std::vector<PipelineConfig> pipeline_configs(const config::Config& cfg) {
    std::vector<PipelineConfig> out;
    for (const std::string& tok : [&] {
             std::vector<std::string> toks;
             std::string cur;
             for (char c : cfg.get("pipeline", "configs") + " ") {
                 if (c == ' ' || c == '\t') {
                     if (!cur.empty()) toks.push_back(cur);
                     cur.clear();
                 } else {
                     cur += c;
                 }
             }
             return toks;
         }()) {
        PipelineConfig pc;
        if (std::sscanf(tok.c_str(), "%d:%d:%d", &pc.n, &pc.r, &pc.m) != 3 || pc.n < 1 ||
            pc.r < 1 || pc.m < 1)
            throw_config("pipeline configs entry '" + tok + "' is not n:r:m with positive parts");
        out.push_back(pc);
    }
    if (out.empty()) throw_config("pipeline needs at least one n:r:m config");
    return out;
}

std::vector<double> sym_eigs(const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw_numeric("symmetric eigensolver failed");
    return {es.eigenvalues().data(), es.eigenvalues().data() + m.rows()};
}

// deterministic transfer matrix of the population limit: top block E I - Delta^D_r
Eigen::MatrixXcd deterministic_transfer(int r, double E) {
    Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(2 * r, 2 * r);
    for (int j = 0; j < r; ++j) {
        t(j, j) = E;
        if (j + 1 < r) t(j, j + 1) = t(j + 1, j) = -1.0;
    }
    t.block(0, r, r, r) = -Eigen::MatrixXcd::Identity(r, r);
    t.block(r, 0, r, r) = Eigen::MatrixXcd::Identity(r, r);
    return t;
}

double conjugation_error(const transfer::ChannelData& cd) {
    const Eigen::MatrixXcd t0 = deterministic_transfer(cd.r, cd.E);
    const Eigen::MatrixXcd ot = cd.O_tilde();
    const Eigen::MatrixXcd conj =
        cd.Q.partialPivLu().solve(ot.transpose() * t0 * ot * cd.Q);
    return (conj - cd.deterministic_limit()).cwiseAbs().maxCoeff();
}

void run_oracle_equivalence(const config::Config& cfg, Writer& w, json& summary) {
    const auto p = antitree_from(cfg);
    const auto spec = disorder_from(cfg);
    const std::uint64_t seed = cfg.get_seed("experiment", "seed");
    const int n_seeds = static_cast<int>(cfg.get_int_or("oracle", "seeds", 1));

    auto csv = w.open("oracle.csv");
    csv << "seed_index,n_oracle,n_scan,max_abs_dev,max_residual\n";
    double worst_dev = 0, worst_res = 0;
    for (int k = 0; k < n_seeds; ++k) {
        const std::uint64_t sk = derive_seed(seed, static_cast<std::uint64_t>(k));
        const auto potential =
            disorder::sample_potential(spec, static_cast<std::size_t>(p.dim()), sk);
        const auto oracle = hamiltonian::full_spectrum(hamiltonian::assemble_hamiltonian(p, spec, sk));
        double norm_h = 0;
        for (double e : oracle) norm_h = std::max(norm_h, std::abs(e));
        const double lo = cfg.get_double_or("spectral", "window_lo", spec.sigma + 0.2);
        const double hi = cfg.get_double_or("spectral", "window_hi", norm_h + 1.0);
        std::vector<double> in_window;
        for (double e : oracle)
            if (e > lo && e < hi) in_window.push_back(e);
        const auto scan = transfer::eigenvalue_scan(p, potential, lo, hi, 0.0,
                                                    static_cast<int>(in_window.size()));
        double dev = in_window.size() == scan.size()
                         ? 0.0
                         : std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < std::min(in_window.size(), scan.size()); ++i)
            dev = std::max(dev, std::abs(in_window[i] - scan[i]));
        double res = 0;
        for (double lambda : scan)
            res = std::max(res, transfer::reconstruct_eigenvector(p, potential, lambda).residual);
        csv << k << ',' << in_window.size() << ',' << scan.size() << ',' << fmt(dev) << ','
            << fmt(res) << '\n';
        worst_dev = std::max(worst_dev, dev);
        worst_res = std::max(worst_res, res);
    }
    summary["max_abs_dev"] = worst_dev;
    summary["max_residual"] = worst_res;
    summary["pass"] = worst_dev <= 1e-8 && worst_res <= 1e-6;
}

void run_harmonic_mc(const config::Config& cfg, Writer& w, json& summary) {
    const auto spec = disorder_from(cfg);
    const double lambda = cfg.get_double("spectral", "lambda");
    std::vector<int> s_grid;
    for (long s : cfg.get_ints("harmonic", "s_grid")) s_grid.push_back(static_cast<int>(s));
    const auto samples = static_cast<std::size_t>(cfg.get_int_or("harmonic", "mc_samples", 1000000));
    const auto report = disorder::check_moment_bounds(spec, lambda, s_grid, samples,
                                                      cfg.get_seed("experiment", "seed"));
    auto csv = w.open("moments.csv");
    csv << "name,s,estimate,se,bound_low,bound_high,pass\n";
    for (const auto& row : report.rows)
        csv << row.name << ',' << row.s << ',' << fmt(row.estimate) << ',' << fmt(row.se) << ','
            << fmt(row.bound_low) << ',' << fmt(row.bound_high) << ',' << (row.pass ? 1 : 0)
            << '\n';
    summary["h"] = report.h;
    summary["sigma2"] = report.sigma2;
    summary["pass"] = report.all_pass;
}

void run_channel_conjugation(const config::Config& cfg, Writer& w, json& summary) {
    const auto spec = disorder_from(cfg);
    const double wpt = cfg.get_double_or("antitree", "w", 0.0);
    auto csv = w.open("channels.csv");
    csv << "r,lambda,E,r_h,r_e,chaotic,conjugation_err\n";
    double worst = 0;
    for (long r : cfg.get_ints("channel", "r_grid"))
        for (double lambda : cfg.get_doubles("channel", "lambda_grid")) {
            const auto cd =
                transfer::channel_decomposition(spec, lambda, wpt, static_cast<int>(r));
            const auto witness = transfer::chaotic_check(cd.z, 1e-9);
            const double err = conjugation_error(cd);
            csv << r << ',' << fmt(lambda) << ',' << fmt(cd.E) << ',' << cd.r_h << ','
                << cd.r_e << ',' << (witness.chaotic ? 1 : 0) << ',' << fmt(err) << '\n';
            worst = std::max(worst, err);
        }
    summary["max_conjugation_err"] = worst;
    summary["pass"] = worst <= 1e-10;
}

void run_sde_refinement(const config::Config& cfg, Writer& w, json& summary) {
    const auto spec = disorder_from(cfg);
    const double lambda = cfg.get_double("spectral", "lambda");
    const double wpt = cfg.get_double_or("sde", "w", 0.0);
    const int r = static_cast<int>(cfg.get_int("sde", "r"));
    const auto m_grid = cfg.get_doubles("sde", "m_grid");
    const auto eps_grid = cfg.get_doubles("sde", "eps_grid");
    const int t_steps = static_cast<int>(cfg.get_int_or("sde", "t_steps", 10000));
    const int n_seeds = static_cast<int>(cfg.get_int_or("sde", "seeds", 50));
    const std::uint64_t seed = cfg.get_seed("experiment", "seed");

    const auto stats = disorder::harmonic_average(spec, lambda);
    const auto cd = transfer::channel_decomposition(spec, lambda, wpt, r);
    auto csv = w.open("refinement.csv");
    csv << "seed_index,m,error\n";
    const int d = 2 * cd.r_e;
    int decreasing = 0;
    for (int k = 0; k < n_seeds; ++k) {
        const std::uint64_t sk = derive_seed(seed, static_cast<std::uint64_t>(k));
        const auto base = sde::make_sde_params(cd, stats, 1.0, t_steps, eps_grid);
        const auto closed = sde::closed_form_limit(base, sk);
        double prev = std::numeric_limits<double>::infinity();
        bool strict = true;
        for (double m : m_grid) {
            auto params = base;
            params.m = m;
            params.eps_grid.clear();
            for (double e : eps_grid) params.eps_grid.push_back(e / std::sqrt(m));
            const auto path = sde::integrate_lambda(params, sk);
            double err = 0;
            for (std::size_t e = 0; e < eps_grid.size(); ++e) {
                const Eigen::MatrixXcd hat =
                    std::sqrt(m) * (path.endpoints[e] - Eigen::MatrixXcd::Identity(d, d));
                err = std::max(err, (hat - closed.endpoints[e]).norm());
            }
            csv << k << ',' << fmt(m) << ',' << fmt(err) << '\n';
            strict = strict && err < prev;
            prev = err;
        }
        if (strict) ++decreasing;
    }
    summary["seeds"] = n_seeds;
    summary["strictly_decreasing"] = decreasing;
    summary["fraction"] = static_cast<double>(decreasing) / n_seeds;
    summary["pass"] = decreasing >= (9 * n_seeds + 9) / 10;
}

void run_goe_gap_compare(const config::Config& cfg, Writer& w, json& summary) {
    const auto spec = disorder_from(cfg);
    const double lambda = cfg.get_double("spectral", "lambda");
    const int r_e = static_cast<int>(cfg.get_int("goe", "r_e"));
    const int r = static_cast<int>(cfg.get_int_or("goe", "r", r_e));
    const int ensemble = static_cast<int>(cfg.get_int_or("goe", "ensemble", 200));
    const std::uint64_t seed = cfg.get_seed("experiment", "seed");
    const auto stats = disorder::harmonic_average(spec, lambda);

    std::vector<double> pool;
    for (int e = 0; e < ensemble; ++e) {
        const auto m = sde::sample_goe_endpoint(r_e, r, stats, derive_seed(seed, e), true);
        const auto gaps = pointstats::bulk_unit_gaps(sym_eigs(m));
        pool.insert(pool.end(), gaps.begin(), gaps.end());
    }
    const double ks_w = pointstats::ks_distance(pool, pointstats::Reference::wigner_surmise_beta1);
    const double ks_e = pointstats::ks_distance(pool, pointstats::Reference::poisson_exp);

    auto csv = w.open("gap_histogram.csv");
    csv << "bin_left,bin_right,count,density\n";
    const int bins = 50;
    const double top = 4.0;
    std::vector<long> counts(bins, 0);
    for (double g : pool) {
        const int b = static_cast<int>(g / top * bins);
        if (b >= 0 && b < bins) ++counts[b];
    }
    for (int b = 0; b < bins; ++b) {
        const double left = top * b / bins, right = top * (b + 1) / bins;
        csv << fmt(left) << ',' << fmt(right) << ',' << counts[b] << ','
            << fmt(counts[b] / (static_cast<double>(pool.size()) * top / bins)) << '\n';
    }
    auto ks_report = w.open("ks.json");
    ks_report << json{{"reference", "wigner_surmise_beta1"},
                      {"ks", ks_w},
                      {"n", pool.size()},
                      {"pass_threshold", 0.05}}
                     .dump(2)
              << '\n'
              << json{{"reference", "poisson_exp"},
                      {"ks", ks_e},
                      {"n", pool.size()},
                      {"pass_threshold", 0.15}}
                     .dump(2)
              << '\n';
    summary["ks_wigner"] = ks_w;
    summary["ks_exp"] = ks_e;
    summary["gaps"] = pool.size();
    summary["pass"] = ks_w <= 0.05 && ks_e >= 0.15;
}

struct PipelineResult {
    PipelineConfig pc;
    std::vector<std::vector<double>> member_gaps;
    double ks_goe = 0, ks_exp = 0, density0 = 0;
    double points_per_unit = 0;
};

std::vector<double> pool_gaps(const std::vector<std::vector<double>>& members) {
    std::vector<double> pool;
    for (const auto& g : members) pool.insert(pool.end(), g.begin(), g.end());
    return pool;
}

void run_antitree_pipeline(const config::Config& cfg, Writer& w, json& summary) {
    const auto spec = disorder_from(cfg);
    const double lambda = cfg.get_double("spectral", "lambda");
    const double wpt = cfg.get_double_or("antitree", "w", 0.0);
    const auto configs = pipeline_configs(cfg);
    const int ensemble = static_cast<int>(cfg.get_int_or("pipeline", "ensemble", 40));
    const double spec_edge = 0.8 * (std::abs(lambda) - spec.sigma);
    const double delta =
        cfg.get_double_or("pipeline", "window", std::min(spec_edge, 2.0));
    if (!(delta > 0) || delta >= std::abs(lambda) - spec.sigma)
        throw_config("pipeline window must fit between lambda and the disorder support");
    const int ref_r_e = static_cast<int>(cfg.get_int_or("pipeline", "reference_r_e", 400));
    const int ref_ens = static_cast<int>(cfg.get_int_or("pipeline", "reference_ensemble", 50));
    const double cutoff = cfg.get_double_or("pipeline", "cutoff", 0.25);
    const std::uint64_t seed = cfg.get_seed("experiment", "seed");
    const auto stats = disorder::harmonic_average(spec, lambda);

    // empirical GOE-endpoint reference gaps
    std::vector<double> reference;
    for (int e = 0; e < ref_ens; ++e) {
        const auto m = sde::sample_goe_endpoint(ref_r_e, ref_r_e, stats,
                                                derive_seed(seed, 900000 + e), true);
        const auto gaps = pointstats::bulk_unit_gaps(sym_eigs(m));
        reference.insert(reference.end(), gaps.begin(), gaps.end());
    }

    std::vector<PipelineResult> results;
    for (std::size_t ci = 0; ci < configs.size(); ++ci) {
        const auto& pc = configs[ci];
        graph::AntitreeParams p{pc.n, pc.r, pc.s(), wpt};
        const auto cd = transfer::channel_decomposition(spec, lambda, wpt, pc.r);
        const double norm = pointstats::normalization_constant(stats, pc.n, pc.s(), pc.r, cd.r_e);

        PipelineResult res;
        res.pc = pc;
        auto csv = w.open("pipeline_" + std::to_string(pc.n) + "x" + std::to_string(pc.r) +
                          "x" + std::to_string(pc.m) + ".csv");
        csv << "member,points,gaps\n";
        double total_points = 0;
        std::vector<std::vector<double>> member_points;
        for (int j = 0; j < ensemble; ++j) {
            const std::uint64_t sj = derive_seed(seed, 10000 * (ci + 1) + j);
            const auto potential =
                disorder::sample_potential(spec, static_cast<std::size_t>(p.dim()), sj);
            auto eigs = transfer::eigenvalue_scan(p, potential, lambda - delta, lambda + delta);
            total_points += static_cast<double>(eigs.size());
            member_points.push_back(std::move(eigs));
        }
        // Unfold each member through the pooled empirical integrated density of
        // states, so the mean spacing is one without per-member rescaling that
        // would mask the statistics of small samples.
        const auto unfolded = pointstats::ensemble_unfold(member_points);
        double gap_sum = 0;
        std::size_t gap_count = 0;
        for (std::size_t j = 0; j < unfolded.size(); ++j) {
            std::vector<double> gaps;
            for (std::size_t k = 0; k + 1 < unfolded[j].size(); ++k) {
                gaps.push_back(unfolded[j][k + 1] - unfolded[j][k]);
                gap_sum += gaps.back();
            }
            gap_count += gaps.size();
            csv << j << ',' << member_points[j].size() << ',' << gaps.size() << '\n';
            res.member_gaps.push_back(std::move(gaps));
        }
        if (gap_count == 0 || !(gap_sum > 0))
            throw_numeric("pipeline produced no usable gaps");
        const double unit = static_cast<double>(gap_count) / gap_sum;
        for (auto& gaps : res.member_gaps)
            for (double& g : gaps) g *= unit;
        res.points_per_unit = total_points / (ensemble * 2.0 * delta * norm);
        const auto pool = pool_gaps(res.member_gaps);
        if (pool.size() < 10) throw_numeric("pipeline produced too few bulk gaps");
        res.ks_goe = pointstats::ks_distance(pool, reference);
        res.ks_exp = pointstats::ks_distance(pool, pointstats::Reference::poisson_exp);
        res.density0 = pointstats::small_gap_density(pool, cutoff);
        results.push_back(std::move(res));
    }

    // bootstrap over ensemble members for the trend comparisons
    const int boot = 200;
    auto rng = make_rng(derive_seed(seed, 424242));
    const auto& last = results.back();
    std::vector<double> sep_samples, drop_samples;
    for (int b = 0; b < boot; ++b) {
        auto resample = [&](const PipelineResult& r) {
            std::uniform_int_distribution<std::size_t> pick(0, r.member_gaps.size() - 1);
            std::vector<std::vector<double>> members;
            for (std::size_t j = 0; j < r.member_gaps.size(); ++j)
                members.push_back(r.member_gaps[pick(rng)]);
            return pool_gaps(members);
        };
        const auto pool_last = resample(last);
        if (pool_last.size() < 2) continue;
        sep_samples.push_back(pointstats::ks_distance(pool_last, pointstats::Reference::poisson_exp) -
                              pointstats::ks_distance(pool_last, reference));
        if (results.size() >= 2) {
            const auto pool_first = resample(results.front());
            if (pool_first.size() < 2) continue;
            drop_samples.push_back(pointstats::small_gap_density(pool_first, cutoff) -
                                   pointstats::small_gap_density(pool_last, cutoff));
        }
    }
    auto quantile = [](std::vector<double> v, double q) {
        if (v.empty()) return 0.0;
        std::sort(v.begin(), v.end());
        const double idx = q * (v.size() - 1);
        const std::size_t k = static_cast<std::size_t>(idx);
        const double frac = idx - k;
        return k + 1 < v.size() ? v[k] * (1 - frac) + v[k + 1] * frac : v[k];
    };

    json per_config = json::array();
    for (const auto& r : results)
        per_config.push_back({{"n", r.pc.n},
                              {"r", r.pc.r},
                              {"m", r.pc.m},
                              {"s", r.pc.s()},
                              {"ks_goe", r.ks_goe},
                              {"ks_exp", r.ks_exp},
                              {"density_at_zero", r.density0},
                              {"points_per_unit", r.points_per_unit}});
    summary["configs"] = per_config;
    summary["separation_q10"] = quantile(sep_samples, 0.10);
    summary["density_drop_q10"] = quantile(drop_samples, 0.10);
    summary["pass"] = last.ks_goe < last.ks_exp && quantile(sep_samples, 0.10) > 0 &&
                      (results.size() < 2 ||
                       (results.front().density0 > last.density0 && quantile(drop_samples, 0.10) > 0));
}

} // namespace

void validate_experiment(const config::Config& cfg) {
    const Kind kind = kind_from_name(cfg.get("experiment", "kind"));
    config::check_keys(cfg, schema(kind));
    cfg.get_seed("experiment", "seed"); // mandatory: no wall-clock seeding
    if (cfg.get("experiment", "output_dir").empty()) throw_config("output_dir must not be empty");
    disorder_from(cfg);
    switch (kind) {
        case Kind::oracle_equivalence:
            antitree_from(cfg);
            break;
        case Kind::harmonic_mc:
            cfg.get_double("spectral", "lambda");
            for (long s : cfg.get_ints("harmonic", "s_grid"))
                if (s < 1) throw_config("harmonic s_grid entries must be >= 1");
            break;
        case Kind::channel_conjugation:
            for (long r : cfg.get_ints("channel", "r_grid"))
                if (r < 1) throw_config("channel r_grid entries must be >= 1");
            cfg.get_doubles("channel", "lambda_grid");
            break;
        case Kind::sde_refinement:
            cfg.get_double("spectral", "lambda");
            if (cfg.get_int("sde", "r") < 1) throw_config("sde r must be >= 1");
            for (double m : cfg.get_doubles("sde", "m_grid"))
                if (!(m > 0)) throw_config("sde m_grid entries must be positive");
            cfg.get_doubles("sde", "eps_grid");
            if (cfg.get_int_or("sde", "t_steps", 10000) < 100)
                throw_config("sde t_steps must be >= 100");
            break;
        case Kind::goe_gap_compare:
            cfg.get_double("spectral", "lambda");
            if (cfg.get_int("goe", "r_e") < 2) throw_config("goe r_e must be >= 2");
            if (cfg.get_int_or("goe", "ensemble", 200) < 1)
                throw_config("goe ensemble must be >= 1");
            break;
        case Kind::antitree_pipeline: {
            cfg.get_double("spectral", "lambda");
            const auto configs = pipeline_configs(cfg);
            if (cfg.has("pipeline", "s")) {
                const long s = cfg.get_int("pipeline", "s");
                for (const auto& pc : configs)
                    if (s != static_cast<long>(pc.s()))
                        throw_config("pipeline: s must equal m * n (s = " + std::to_string(s) +
                                     ", m = " + std::to_string(pc.m) +
                                     ", n = " + std::to_string(pc.n) + ")");
            }
            if (cfg.get_int_or("pipeline", "ensemble", 40) < 2)
                throw_config("pipeline ensemble must be >= 2");
            break;
        }
    }
}

RunOutcome run_experiment(const config::Config& cfg) {
    validate_experiment(cfg);
    const Kind kind = kind_from_name(cfg.get("experiment", "kind"));
    fs::path out = cfg.get("experiment", "output_dir");
    if (out.is_relative())
        if (const char* root = std::getenv("ANTITREE_OUTPUT_ROOT")) out = fs::path(root) / out;
    fs::create_directories(out);
    Writer w;
    w.dir = out;
    const auto start = std::chrono::steady_clock::now();
    json summary;
    try {
        switch (kind) {
            case Kind::oracle_equivalence: run_oracle_equivalence(cfg, w, summary); break;
            case Kind::harmonic_mc: run_harmonic_mc(cfg, w, summary); break;
            case Kind::channel_conjugation: run_channel_conjugation(cfg, w, summary); break;
            case Kind::sde_refinement: run_sde_refinement(cfg, w, summary); break;
            case Kind::goe_gap_compare: run_goe_gap_compare(cfg, w, summary); break;
            case Kind::antitree_pipeline: run_antitree_pipeline(cfg, w, summary); break;
        }
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        json manifest{{"kind", kind_name(kind)},
                      {"seed", cfg.get_seed("experiment", "seed")},
                      {"version", version()},
                      {"wall_time", wall},
                      {"workers", 1},
                      {"config", cfg.emit()},
                      {"summary", summary}};
        auto mf = w.open("manifest.json");
        manifest["artifacts"] = w.written;
        mf << manifest.dump(2) << '\n';
    } catch (...) {
        w.cleanup();
        throw;
    }
    RunOutcome outcome;
    outcome.output_dir = out.string();
    outcome.artifacts = w.written;
    return outcome;
}

} // namespace at::experiments
