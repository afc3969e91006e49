#include "core/graph.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "core/errors.hpp"

namespace at::graph {

void validate(const AntitreeParams& p) {
    if (p.n < 1 || p.r < 1 || p.s < 1) throw_config("antitree params require n, r, s >= 1");
    if (p.dim() > std::numeric_limits<int>::max() / 2)
        throw_capacity("antitree dimension n*r*s exceeds platform limits");
}

double BlockDescriptor::entry(std::int64_t i, std::int64_t j) const {
    const std::int64_t si = i / slice_dim, sj = j / slice_dim;
    const int bi = static_cast<int>(i % slice_dim), bj = static_cast<int>(j % slice_dim);
    double v = 0;
    if (si == sj) {
        v = diag(bi, bj);
        if (i == j && site_diag.size() > 0) v += site_diag(i);
    } else if (si + 1 == sj || sj + 1 == si) {
        v = off(bi, bj);
    }
    return v;
}

SymmetricOperator::SymmetricOperator(Eigen::MatrixXd dense)
    : dim_(dense.rows()), dense_(std::move(dense)) {
    if (dense_.rows() != dense_.cols()) throw_config("operator matrix must be square");
}

SymmetricOperator::SymmetricOperator(BlockDescriptor blocks, std::int64_t dense_cap)
    : dim_(static_cast<std::int64_t>(blocks.n_slices) * blocks.slice_dim) {
    if (dim_ <= dense_cap) {
        dense_ = Eigen::MatrixXd::Zero(dim_, dim_);
        const int d = blocks.slice_dim;
        for (int k = 0; k < blocks.n_slices; ++k) {
            dense_.block(k * d, k * d, d, d) = blocks.diag;
            if (k + 1 < blocks.n_slices) {
                dense_.block(k * d, (k + 1) * d, d, d) = blocks.off;
                dense_.block((k + 1) * d, k * d, d, d) = blocks.off.transpose();
            }
        }
        if (blocks.site_diag.size() > 0) dense_.diagonal() += blocks.site_diag;
    }
    blocks_ = std::move(blocks);
}

const Eigen::MatrixXd& SymmetricOperator::dense() const {
    if (!has_dense())
        throw_capacity("dense materialization not available above the dimension cap");
    return dense_;
}

const BlockDescriptor& SymmetricOperator::blocks() const {
    if (!blocks_) throw_config("operator has no block descriptor");
    return *blocks_;
}

double SymmetricOperator::entry(std::int64_t i, std::int64_t j) const {
    if (has_dense()) return dense_(i, j);
    return blocks_->entry(i, j);
}

void SymmetricOperator::write_triplets(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::io, "cannot open '" + path + "' for writing");
    std::vector<std::tuple<std::int64_t, std::int64_t, double>> trips;
    auto visit_row_range = [&](std::int64_t i, std::int64_t jlo, std::int64_t jhi) {
        for (std::int64_t j = jlo; j < jhi; ++j) {
            const double v = entry(i, j);
            if (v != 0.0) trips.emplace_back(i, j, v);
        }
    };
    if (has_dense()) {
        for (std::int64_t i = 0; i < dim_; ++i) visit_row_range(i, 0, dim_);
    } else {
        const int d = blocks_->slice_dim;
        for (std::int64_t i = 0; i < dim_; ++i) {
            const std::int64_t slice = i / d;
            const std::int64_t jlo = std::max<std::int64_t>(0, (slice - 1) * d);
            const std::int64_t jhi = std::min<std::int64_t>(dim_, (slice + 2) * d);
            visit_row_range(i, jlo, jhi);
        }
    }
    out << dim_ << ' ' << trips.size() << '\n';
    char buf[64];
    for (const auto& [i, j, v] : trips) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        out << i << ' ' << j << ' ' << buf << '\n';
    }
}

SymmetricOperator build_strip(int n, int r, double w) {
    if (n < 1 || r < 1) throw_config("strip requires n, r >= 1");
    const int d = n * r;
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
    auto idx = [r](int x1, int x2) { return x1 * r + x2; };
    for (int x1 = 0; x1 < n; ++x1)
        for (int x2 = 0; x2 < r; ++x2) {
            m(idx(x1, x2), idx(x1, x2)) = w;
            if (x1 + 1 < n) {
                m(idx(x1, x2), idx(x1 + 1, x2)) = 1.0;
                m(idx(x1 + 1, x2), idx(x1, x2)) = 1.0;
            }
            if (x2 + 1 < r) {
                m(idx(x1, x2), idx(x1, x2 + 1)) = 1.0;
                m(idx(x1, x2 + 1), idx(x1, x2)) = 1.0;
            }
        }
    return SymmetricOperator(std::move(m));
}

SymmetricOperator tensor_antitree(const SymmetricOperator& base, int s) {
    if (s < 1) throw_config("tensor width s must be >= 1");
    const std::int64_t d = base.dim();
    Eigen::MatrixXd m(d * s, d * s);
    const double inv_s = 1.0 / s;
    for (std::int64_t x = 0; x < d; ++x)
        for (std::int64_t y = 0; y < d; ++y) {
            const double v = base.entry(x, y) * inv_s;
            for (int j = 0; j < s; ++j)
                for (int k = 0; k < s; ++k) m(x * s + j, y * s + k) = v;
        }
    return SymmetricOperator(std::move(m));
}

namespace {

Eigen::MatrixXd p_block(int s) {
    return Eigen::MatrixXd::Constant(s, s, 1.0 / s);
}

// s x s cycle adjacency; s=1 degenerates to [0], s=2 to a doubled edge.
Eigen::MatrixXd cycle_block(int s) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(s, s);
    if (s == 2) {
        m(0, 1) = m(1, 0) = 2.0;
        return m;
    }
    for (int k = 0; k + 1 < s; ++k) m(k, k + 1) = m(k + 1, k) = 1.0;
    if (s >= 3) m(0, s - 1) = m(s - 1, 0) = 1.0;
    return m;
}

Eigen::MatrixXd path_block(int s) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(s, s);
    for (int k = 0; k + 1 < s; ++k) m(k, k + 1) = m(k + 1, k) = 1.0;
    return m;
}

// rs x rs diagonal-slice block of the antitree adjacency: tridiagonal in the
// r direction with P_s everywhere and w P_s on the diagonal.
Eigen::MatrixXd antitree_diag_block(int r, int s, double w) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(r * s, r * s);
    const Eigen::MatrixXd ps = p_block(s);
    for (int j = 0; j < r; ++j) {
        m.block(j * s, j * s, s, s) = w * ps;
        if (j + 1 < r) {
            m.block(j * s, (j + 1) * s, s, s) = ps;
            m.block((j + 1) * s, j * s, s, s) = ps;
        }
    }
    return m;
}

Eigen::MatrixXd laplacian_diag_block(int r, int s, const Eigen::MatrixXd& third_dir) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(r * s, r * s);
    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(s, s);
    for (int j = 0; j < r; ++j) {
        m.block(j * s, j * s, s, s) = third_dir;
        if (j + 1 < r) {
            m.block(j * s, (j + 1) * s, s, s) = eye;
            m.block((j + 1) * s, j * s, s, s) = eye;
        }
    }
    return m;
}

Eigen::MatrixXd block_diag_rep(const Eigen::MatrixXd& blk, int count) {
    const int d = static_cast<int>(blk.rows());
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d * count, d * count);
    for (int k = 0; k < count; ++k) m.block(k * d, k * d, d, d) = blk;
    return m;
}

} // namespace

SymmetricOperator build_antitree_adjacency(const AntitreeParams& p, std::int64_t dense_cap) {
    validate(p);
    BlockDescriptor b;
    b.n_slices = p.n;
    b.slice_dim = p.r * p.s;
    b.diag = antitree_diag_block(p.r, p.s, p.w);
    b.off = block_diag_rep(p_block(p.s), p.r);
    return SymmetricOperator(std::move(b), dense_cap);
}

SymmetricOperator build_periodic_laplacian(const AntitreeParams& p, std::int64_t dense_cap) {
    validate(p);
    BlockDescriptor b;
    b.n_slices = p.n;
    b.slice_dim = p.r * p.s;
    b.diag = laplacian_diag_block(p.r, p.s, cycle_block(p.s));
    b.off = Eigen::MatrixXd::Identity(b.slice_dim, b.slice_dim);
    return SymmetricOperator(std::move(b), dense_cap);
}

SymmetricOperator build_meanfield_projection(const AntitreeParams& p, std::int64_t dense_cap) {
    validate(p);
    BlockDescriptor b;
    b.n_slices = p.n;
    b.slice_dim = p.r * p.s;
    b.diag = block_diag_rep(p_block(p.s), p.r);
    b.off = Eigen::MatrixXd::Zero(b.slice_dim, b.slice_dim);
    return SymmetricOperator(std::move(b), dense_cap);
}

Eigen::MatrixXd matmul_ref(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    const auto n = a.rows(), k = a.cols(), m = b.cols();
    Eigen::MatrixXd c(n, m);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < m; ++j) {
            double acc = 0;
            for (Eigen::Index l = 0; l < k; ++l) acc += a(i, l) * b(l, j);
            c(i, j) = acc;
        }
    return c;
}

ProjectionCheck verify_projection_identity(const AntitreeParams& p, bool dirichlet_variant) {
    validate(p);
    const Eigen::MatrixXd proj = build_meanfield_projection(p, p.dim()).dense();
    ProjectionCheck check;
    if (!dirichlet_variant) {
        const Eigen::MatrixXd lap = build_periodic_laplacian(p, p.dim()).dense();
        AntitreeParams q = p;
        q.w = 2.0;
        const Eigen::MatrixXd adj = build_antitree_adjacency(q, p.dim()).dense();
        const Eigen::MatrixXd pd = matmul_ref(proj, lap);
        const Eigen::MatrixXd dp = matmul_ref(lap, proj);
        check.max_err_identity = (pd - adj).cwiseAbs().maxCoeff();
        check.max_err_commutator = (pd - dp).cwiseAbs().maxCoeff();
    } else {
        // Dirichlet Laplacian does not commute with P; check P D P = A^{2-2/s}.
        BlockDescriptor b;
        b.n_slices = p.n;
        b.slice_dim = p.r * p.s;
        b.diag = laplacian_diag_block(p.r, p.s, path_block(p.s));
        b.off = Eigen::MatrixXd::Identity(b.slice_dim, b.slice_dim);
        const Eigen::MatrixXd lap = SymmetricOperator(std::move(b), p.dim()).dense();
        AntitreeParams q = p;
        q.w = 2.0 - 2.0 / p.s;
        const Eigen::MatrixXd adj = build_antitree_adjacency(q, p.dim()).dense();
        const Eigen::MatrixXd pdp = matmul_ref(matmul_ref(proj, lap), proj);
        check.max_err_identity = (pdp - adj).cwiseAbs().maxCoeff();
        check.max_err_commutator = 0.0;
    }
    check.ok = check.max_err_identity <= 1e-12 && check.max_err_commutator <= 1e-12;
    return check;
}

} // namespace at::graph
