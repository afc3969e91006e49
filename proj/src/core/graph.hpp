#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>

namespace at::graph {

/// Quadruple (n, r, s, w): n x r strip with point weight w, tensored with the
/// normalized complete graph K_s. Site order is lexicographic in (x1, x2, x3).
struct AntitreeParams {
    int n = 1;
    int r = 1;
    int s = 1;
    double w = 0.0;

    std::int64_t dim() const {
        return static_cast<std::int64_t>(n) * r * s;
    }
};

void validate(const AntitreeParams& p);

/// Block-tridiagonal descriptor: n slices of size slice_dim with a shared
/// diagonal block, a shared off-diagonal block, and an optional per-site
/// diagonal term on top.
struct BlockDescriptor {
    int n_slices = 0;
    int slice_dim = 0;
    Eigen::MatrixXd diag;
    Eigen::MatrixXd off;
    Eigen::VectorXd site_diag; // empty when absent

    double entry(std::int64_t i, std::int64_t j) const;
};

/// Real symmetric operator with a dense materialization (when the dimension
/// permits) and, for block-structured constructions, a block descriptor.
/// The two representations agree entrywise.
class SymmetricOperator {
  public:
    static constexpr std::int64_t kDefaultDenseCap = 8192;

    SymmetricOperator() = default;
    explicit SymmetricOperator(Eigen::MatrixXd dense);
    SymmetricOperator(BlockDescriptor blocks, std::int64_t dense_cap);

    std::int64_t dim() const { return dim_; }
    bool has_dense() const { return dense_.size() > 0; }
    bool has_blocks() const { return blocks_.has_value(); }
    const Eigen::MatrixXd& dense() const;
    const BlockDescriptor& blocks() const;

    double entry(std::int64_t i, std::int64_t j) const;

    /// Sparse triplet text dump: header "dim nnz", then sorted "i j value"
    /// rows, 0-based.
    void write_triplets(const std::string& path) const;

  private:
    std::int64_t dim_ = 0;
    Eigen::MatrixXd dense_;
    std::optional<BlockDescriptor> blocks_;
};

/// Nearest-neighbor n x r grid adjacency with constant point weight w.
SymmetricOperator build_strip(int n, int r, double w);

/// Tensor product base (x) (K_s, P_s): entries base(x,y)/s.
SymmetricOperator tensor_antitree(const SymmetricOperator& base, int s);

SymmetricOperator build_antitree_adjacency(const AntitreeParams& p,
                                           std::int64_t dense_cap = SymmetricOperator::kDefaultDenseCap);

/// Discrete Laplacian on the n x r x s grid, periodic in the third
/// coordinate, Dirichlet in the others. s=1 has no cycle edge; s=2 is
/// represented with a doubled edge weight so row sums along the cycle stay 2.
SymmetricOperator build_periodic_laplacian(const AntitreeParams& p,
                                           std::int64_t dense_cap = SymmetricOperator::kDefaultDenseCap);

/// Orthogonal projection I_{nr} (x) P_s onto mean-field vectors.
SymmetricOperator build_meanfield_projection(const AntitreeParams& p,
                                             std::int64_t dense_cap = SymmetricOperator::kDefaultDenseCap);

struct ProjectionCheck {
    double max_err_identity = 0;   // max |(P Delta)(x,y) - A^w(x,y)|
    double max_err_commutator = 0; // max |(P Delta - Delta P)(x,y)|
    bool ok = false;
};

/// Checks P Delta = Delta P = A^w entrywise. With dirichlet_variant the
/// Dirichlet Laplacian is used and the expected point weight is 2 - 2/s,
/// otherwise the periodic one with point weight 2.
ProjectionCheck verify_projection_identity(const AntitreeParams& p,
                                           bool dirichlet_variant = false);

/// Plain triple-loop product with sequential accumulation. Reference
/// implementation for the exactness-sensitive identity checks.
Eigen::MatrixXd matmul_ref(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

} // namespace at::graph
