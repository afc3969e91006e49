#include "antitree/antitree.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>

#include "core/config.hpp"
#include "core/disorder.hpp"
#include "core/errors.hpp"
#include "core/experiments.hpp"
#include "core/graph.hpp"
#include "core/hamiltonian.hpp"
#include "core/rng.hpp"
#include "core/transfer.hpp"

namespace {

thread_local std::string g_last_error;

at_status to_status(at::ErrorCode code) {
    switch (code) {
        case at::ErrorCode::invalid: return AT_ERR_INVALID;
        case at::ErrorCode::config: return AT_ERR_CONFIG;
        case at::ErrorCode::capacity: return AT_ERR_CAPACITY;
        case at::ErrorCode::numeric: return AT_ERR_NUMERIC;
        case at::ErrorCode::domain: return AT_ERR_DOMAIN;
        case at::ErrorCode::singular: return AT_ERR_SINGULAR;
        case at::ErrorCode::io: return AT_ERR_IO;
    }
    return AT_ERR_INVALID;
}

template <typename F>
at_status guarded(F&& f) {
    try {
        f();
        return AT_OK;
    } catch (const at::Error& e) {
        g_last_error = e.what();
        return to_status(e.code());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return AT_ERR_NUMERIC;
    } catch (...) {
        g_last_error = "unknown failure";
        return AT_ERR_NUMERIC;
    }
}

at::disorder::DisorderSpec make_spec(const char* kind, double sigma, double param) {
    if (!kind) at::throw_config("disorder kind must not be null");
    at::disorder::DisorderSpec spec;
    spec.kind = at::disorder::kind_from_name(kind);
    spec.sigma = sigma;
    spec.param = param;
    at::disorder::validate(spec);
    return spec;
}

} // namespace

struct at_operator {
    at::graph::SymmetricOperator op;
};

extern "C" {

const char* at_version(void) {
    static const std::string v = at::experiments::version();
    return v.c_str();
}

const char* at_last_error(void) { return g_last_error.c_str(); }

at_status at_operator_antitree(int n, int r, int s, double w, at_operator** out) {
    return guarded([&] {
        if (!out) at::throw_config("output handle must not be null");
        *out = new at_operator{at::graph::build_antitree_adjacency({n, r, s, w})};
    });
}

at_status at_operator_laplacian(int n, int r, int s, at_operator** out) {
    return guarded([&] {
        if (!out) at::throw_config("output handle must not be null");
        *out = new at_operator{at::graph::build_periodic_laplacian({n, r, s, 0.0})};
    });
}

at_status at_operator_projection(int n, int r, int s, at_operator** out) {
    return guarded([&] {
        if (!out) at::throw_config("output handle must not be null");
        *out = new at_operator{at::graph::build_meanfield_projection({n, r, s, 0.0})};
    });
}

int64_t at_operator_dim(const at_operator* op) { return op ? op->op.dim() : 0; }

at_status at_operator_entry(const at_operator* op, int64_t i, int64_t j, double* value) {
    return guarded([&] {
        if (!op || !value) at::throw_config("null argument");
        if (i < 0 || j < 0 || i >= op->op.dim() || j >= op->op.dim())
            at::throw_config("entry index out of range");
        *value = op->op.entry(i, j);
    });
}

at_status at_operator_write_triplets(const at_operator* op, const char* path) {
    return guarded([&] {
        if (!op || !path) at::throw_config("null argument");
        op->op.write_triplets(path);
    });
}

void at_operator_free(at_operator* op) { delete op; }

at_status at_full_spectrum(int n, int r, int s, double w, const char* disorder_kind,
                           double sigma, double param, uint64_t seed, double* eigenvalues) {
    return guarded([&] {
        if (!eigenvalues) at::throw_config("eigenvalue buffer must not be null");
        const auto spec = make_spec(disorder_kind, sigma, param);
        const auto h = at::hamiltonian::assemble_hamiltonian({n, r, s, w}, spec, seed);
        const auto eigs = at::hamiltonian::full_spectrum(h);
        std::copy(eigs.begin(), eigs.end(), eigenvalues);
    });
}

at_status at_eigenvalue_scan(int n, int r, int s, double w, const char* disorder_kind,
                             double sigma, double param, uint64_t seed, double lo, double hi,
                             double* out, size_t cap, size_t* count) {
    return guarded([&] {
        if (!out || !count) at::throw_config("null argument");
        const auto spec = make_spec(disorder_kind, sigma, param);
        const at::graph::AntitreeParams p{n, r, s, w};
        const auto potential =
            at::disorder::sample_potential(spec, static_cast<std::size_t>(p.dim()), seed);
        const auto roots = at::transfer::eigenvalue_scan(p, potential, lo, hi);
        *count = roots.size();
        if (roots.size() > cap) at::throw_capacity("eigenvalue buffer too small");
        std::copy(roots.begin(), roots.end(), out);
    });
}

at_status at_harmonic_average(const char* disorder_kind, double sigma, double param,
                              double lambda, double* h, double* sigma2) {
    return guarded([&] {
        if (!h || !sigma2) at::throw_config("null argument");
        const auto stats =
            at::disorder::harmonic_average(make_spec(disorder_kind, sigma, param), lambda);
        *h = stats.h;
        *sigma2 = stats.sigma2;
    });
}

at_status at_oracle_dump(int n, int r, int s, double w, const char* disorder_kind,
                         double sigma, double param, uint64_t seed, double window_lo,
                         double window_hi, const char* out_dir, double* max_abs_dev) {
    return guarded([&] {
        if (!out_dir || !max_abs_dev) at::throw_config("null argument");
        at::config::Config cfg;
        cfg.set("experiment", "kind", "oracle_equivalence");
        cfg.set("experiment", "seed", std::to_string(seed));
        cfg.set("experiment", "output_dir", out_dir);
        cfg.set("antitree", "n", std::to_string(n));
        cfg.set("antitree", "r", std::to_string(r));
        cfg.set("antitree", "s", std::to_string(s));
        cfg.set("antitree", "w", std::to_string(w));
        cfg.set("disorder", "kind", disorder_kind ? disorder_kind : "two_point_symmetric");
        cfg.set("disorder", "sigma", std::to_string(sigma));
        cfg.set("disorder", "param", std::to_string(param));
        if (std::isfinite(window_lo)) cfg.set("spectral", "window_lo", std::to_string(window_lo));
        if (std::isfinite(window_hi)) cfg.set("spectral", "window_hi", std::to_string(window_hi));
        const auto outcome = at::experiments::run_experiment(cfg);
        // pull the deviation back out of the manifest summary
        std::ifstream mf(std::filesystem::path(outcome.output_dir) / "manifest.json");
        if (!mf) throw at::Error(at::ErrorCode::io, "manifest missing after the run");
        std::string text((std::istreambuf_iterator<char>(mf)), std::istreambuf_iterator<char>());
        const std::string key = "\"max_abs_dev\":";
        const auto pos = text.find(key);
        if (pos == std::string::npos)
            throw at::Error(at::ErrorCode::io, "manifest lacks max_abs_dev");
        *max_abs_dev = std::strtod(text.c_str() + pos + key.size(), nullptr);
    });
}

at_status at_validate_config(const char* path) {
    return guarded([&] {
        if (!path) at::throw_config("config path must not be null");
        at::experiments::validate_experiment(at::config::parse_file(path));
    });
}

at_status at_run_experiment(const char* path) {
    return guarded([&] {
        if (!path) at::throw_config("config path must not be null");
        at::experiments::run_experiment(at::config::parse_file(path));
    });
}

} // extern "C"
