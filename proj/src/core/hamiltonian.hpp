#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/disorder.hpp"
#include "core/graph.hpp"

namespace at::hamiltonian {

/// One realization of the Anderson operator together with its spectrum and
/// the eigenvalues attributable to potential multiplicities inside blocks.
struct SpectralSample {
    graph::AntitreeParams params;
    disorder::DisorderSpec spec;
    std::uint64_t seed = 0;
    std::vector<double> eigenvalues; // ascending, length n*r*s
    std::vector<double> trivial_part;
};

/// A^w + diag(v) with v drawn site by site in lexicographic (x1,x2,x3) order.
graph::SymmetricOperator assemble_hamiltonian(const graph::AntitreeParams& p,
                                              const disorder::DisorderSpec& spec,
                                              std::uint64_t seed,
                                              std::int64_t dense_cap = graph::SymmetricOperator::kDefaultDenseCap);

/// All eigenvalues, ascending. Requires the dense materialization.
std::vector<double> full_spectrum(const graph::SymmetricOperator& op);

/// Eigenvalues of V_i restricted to the complement of the cyclic subspace:
/// each potential value repeated mu >= 2 times inside an s-block contributes
/// mu - 1 copies. Values closer than 1e-12 count as equal.
std::vector<double> trivial_spectrum_report(const graph::AntitreeParams& p,
                                            const std::vector<double>& potential);

SpectralSample sample_spectrum(const graph::AntitreeParams& p,
                               const disorder::DisorderSpec& spec, std::uint64_t seed);

/// CSV dump "index,eigenvalue" plus a JSON manifest next to it.
void write_eigenvalue_dump(const SpectralSample& sample, const std::string& csv_path,
                           const std::string& manifest_path, double wall_time_sec);

} // namespace at::hamiltonian
