#include "core/hamiltonian.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "core/errors.hpp"

#include <nlohmann/json.hpp>

namespace at::hamiltonian {

graph::SymmetricOperator assemble_hamiltonian(const graph::AntitreeParams& p,
                                              const disorder::DisorderSpec& spec,
                                              std::uint64_t seed, std::int64_t dense_cap) {
    graph::validate(p);
    auto v = disorder::sample_potential(spec, static_cast<std::size_t>(p.dim()), seed);
    graph::BlockDescriptor b;
    b.n_slices = p.n;
    b.slice_dim = p.r * p.s;
    auto adj = graph::build_antitree_adjacency(p, 0); // blocks only
    b.diag = adj.blocks().diag;
    b.off = adj.blocks().off;
    b.site_diag = Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
    return graph::SymmetricOperator(std::move(b), dense_cap);
}

std::vector<double> full_spectrum(const graph::SymmetricOperator& op) {
    const Eigen::MatrixXd& m = op.dense(); // throws a capacity error above the cap
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw_numeric("symmetric eigensolver failed");
    std::vector<double> eigs(solver.eigenvalues().data(),
                             solver.eigenvalues().data() + op.dim());
    std::sort(eigs.begin(), eigs.end());
    return eigs;
}

std::vector<double> trivial_spectrum_report(const graph::AntitreeParams& p,
                                            const std::vector<double>& potential) {
    graph::validate(p);
    if (potential.size() != static_cast<std::size_t>(p.dim()))
        throw_config("potential length does not equal n*r*s");
    std::vector<double> out;
    std::vector<double> block(static_cast<std::size_t>(p.s));
    for (std::int64_t base = 0; base < p.dim(); base += p.s) {
        std::copy(potential.begin() + base, potential.begin() + base + p.s, block.begin());
        std::sort(block.begin(), block.end());
        for (int k = 1; k < p.s; ++k)
            if (block[k] - block[k - 1] < 1e-12) out.push_back(block[k]);
    }
    std::sort(out.begin(), out.end());
    return out;
}

SpectralSample sample_spectrum(const graph::AntitreeParams& p,
                               const disorder::DisorderSpec& spec, std::uint64_t seed) {
    SpectralSample sample;
    sample.params = p;
    sample.spec = spec;
    sample.seed = seed;
    auto h = assemble_hamiltonian(p, spec, seed);
    sample.eigenvalues = full_spectrum(h);
    auto v = disorder::sample_potential(spec, static_cast<std::size_t>(p.dim()), seed);
    sample.trivial_part = trivial_spectrum_report(p, v);
    return sample;
}

void write_eigenvalue_dump(const SpectralSample& sample, const std::string& csv_path,
                           const std::string& manifest_path, double wall_time_sec) {
    std::ofstream csv(csv_path);
    if (!csv) throw Error(ErrorCode::io, "cannot open '" + csv_path + "'");
    csv << "index,eigenvalue\n";
    char buf[64];
    for (std::size_t i = 0; i < sample.eigenvalues.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g", sample.eigenvalues[i]);
        csv << i << ',' << buf << '\n';
    }
    nlohmann::json manifest{
        {"params",
         {{"n", sample.params.n},
          {"r", sample.params.r},
          {"s", sample.params.s},
          {"w", sample.params.w}}},
        {"disorder",
         {{"kind", disorder::kind_name(sample.spec.kind)},
          {"sigma", sample.spec.sigma},
          {"param", sample.spec.param}}},
        {"seed", sample.seed},
        {"wall_time", wall_time_sec},
    };
    std::ofstream mf(manifest_path);
    if (!mf) throw Error(ErrorCode::io, "cannot open '" + manifest_path + "'");
    mf << manifest.dump(2) << '\n';
}

} // namespace at::hamiltonian
