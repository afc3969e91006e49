#include "core/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "core/errors.hpp"

namespace at::transfer {

namespace {

// Dirichlet path Laplacian adjacency on r points (zero diagonal).
Eigen::MatrixXd dirichlet_path(int r) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(r, r);
    for (int k = 0; k + 1 < r; ++k) m(k, k + 1) = m(k + 1, k) = 1.0;
    return m;
}

double harmonic_real(std::span<const double> block, double lambda, int slice, int channel) {
    double sum = 0;
    for (double v : block) {
        const double d = lambda - v;
        if (d == 0.0)
            throw_singular("effective potential pole at slice " + std::to_string(slice) +
                           ", channel " + std::to_string(channel));
        sum += 1.0 / d;
    }
    if (std::abs(sum) < 1e-300)
        throw_singular("effective potential harmonic mean vanishes at slice " +
                       std::to_string(slice));
    return static_cast<double>(block.size()) / sum;
}

std::span<const double> channel_block(std::span<const double> slice, int j, int s) {
    return slice.subspan(static_cast<std::size_t>(j) * s, static_cast<std::size_t>(s));
}

// Real-arithmetic normalized transfer product for real lambda.
struct RealProduct {
    Eigen::MatrixXd matrix;
    double log_scale = 0; // per-factor accumulated log normalization
};

RealProduct real_transfer_product(const graph::AntitreeParams& p,
                                  std::span<const double> potential, double lambda) {
    graph::validate(p);
    const std::size_t need = static_cast<std::size_t>(p.dim());
    if (potential.size() != need) throw_config("potential length does not equal n*r*s");
    const int r = p.r;
    RealProduct out;
    out.matrix = Eigen::MatrixXd::Identity(2 * r, 2 * r);
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(2 * r, 2 * r);
    t.block(0, r, r, r) = -Eigen::MatrixXd::Identity(r, r);
    t.block(r, 0, r, r) = Eigen::MatrixXd::Identity(r, r);
    const std::size_t rs = static_cast<std::size_t>(r) * p.s;
    for (int i = 0; i < p.n; ++i) {
        t.block(0, 0, r, r) =
            transfer_top_block(p, potential.subspan(static_cast<std::size_t>(i) * rs, rs),
                               lambda, i);
        out.matrix = t * out.matrix;
        const double c = out.matrix.cwiseAbs().maxCoeff();
        if (!(c > 0) || !std::isfinite(c))
            throw_numeric("transfer product degenerated at slice " + std::to_string(i));
        out.matrix /= c;
        out.log_scale += std::log(c);
    }
    return out;
}

double corner_det(const Eigen::MatrixXd& x, int r) {
    return x.topLeftCorner(r, r).determinant();
}

// QR-stabilized shooting: propagates an orthonormal basis of the subspace
// T_n ... T_1 [I; 0] so the boundary determinant stays well conditioned for
// long products with strongly hyperbolic channels. The positive-diagonal QR
// factor is unique, so the basis (and the secular value below) is continuous
// in lambda.
struct ShootResult {
    Eigen::MatrixXd basis; // 2r x r, orthonormal columns
    double log_scale = 0;  // sum of log |R_jj| over all factors
};

ShootResult qr_shoot(const graph::AntitreeParams& p, std::span<const double> potential,
                     double lambda) {
    graph::validate(p);
    if (potential.size() != static_cast<std::size_t>(p.dim()))
        throw_config("potential length does not equal n*r*s");
    const int r = p.r;
    const std::size_t rs = static_cast<std::size_t>(r) * p.s;
    ShootResult out;
    Eigen::MatrixXd z = Eigen::MatrixXd::Zero(2 * r, r);
    z.topRows(r).setIdentity();
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(2 * r, 2 * r);
    t.block(0, r, r, r) = -Eigen::MatrixXd::Identity(r, r);
    t.block(r, 0, r, r) = Eigen::MatrixXd::Identity(r, r);
    for (int i = 0; i < p.n; ++i) {
        t.block(0, 0, r, r) =
            transfer_top_block(p, potential.subspan(static_cast<std::size_t>(i) * rs, rs),
                               lambda, i);
        z = t * z;
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(z);
        Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(2 * r, r);
        const Eigen::MatrixXd rm =
            qr.matrixQR().topRows(r).triangularView<Eigen::Upper>();
        for (int j = 0; j < r; ++j) {
            if (rm(j, j) < 0) q.col(j) = -q.col(j);
            const double a = std::abs(rm(j, j));
            if (!(a > 0) || !std::isfinite(a))
                throw_numeric("transfer subspace lost rank at slice " + std::to_string(i));
            out.log_scale += std::log(a);
        }
        z = std::move(q);
    }
    out.basis = std::move(z);
    return out;
}

double secular_at(const graph::AntitreeParams& p, std::span<const double> potential,
                  double lambda) {
    return corner_det(qr_shoot(p, potential, lambda).basis, p.r);
}

// Bisection on a bracketing interval, to absolute width 1e-10 in lambda.
double bisect_root(const std::function<double(double)>& f, double a, double b, double fa) {
    for (int it = 0; it < 200 && b - a > 1e-10; ++it) {
        const double mid = 0.5 * (a + b);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fa < 0) == (fm < 0)) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    return 0.5 * (a + b);
}

// Golden-section minimization of |f| on [a, b].
std::pair<double, double> minimize_abs(const std::function<double(double)>& f, double a,
                                       double b) {
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = std::abs(f(x1)), f2 = std::abs(f(x2));
    while (b - a > 1e-11) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = std::abs(f(x1));
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = std::abs(f(x2));
        }
    }
    return f1 < f2 ? std::pair{x1, f1} : std::pair{x2, f2};
}

} // namespace

cplx effective_potential_block(std::span<const double> potential_block, cplx z) {
    if (potential_block.empty()) throw_config("empty potential block");
    cplx sum = 0;
    for (double v : potential_block) {
        const cplx d = z - v;
        if (d == cplx(0, 0)) throw_singular("effective potential pole");
        sum += 1.0 / d;
    }
    if (std::abs(sum) < 1e-300) throw_singular("effective potential harmonic mean vanishes");
    return static_cast<double>(potential_block.size()) / sum;
}

Eigen::MatrixXd transfer_top_block(const graph::AntitreeParams& p,
                                   std::span<const double> potential_slice, double lambda,
                                   int slice_index) {
    const int r = p.r, s = p.s;
    if (potential_slice.size() != static_cast<std::size_t>(r) * s)
        throw_config("potential slice length does not equal r*s");
    Eigen::MatrixXd top = -dirichlet_path(r);
    for (int j = 0; j < r; ++j)
        top(j, j) = harmonic_real(channel_block(potential_slice, j, s), lambda, slice_index, j) -
                    p.w;
    return top;
}

TransferMatrix build_transfer(const graph::AntitreeParams& p,
                              std::span<const double> potential_slice, cplx z,
                              int slice_index) {
    const int r = p.r, s = p.s;
    if (potential_slice.size() != static_cast<std::size_t>(r) * s)
        throw_config("potential slice length does not equal r*s");
    TransferMatrix t;
    t.z = z;
    t.slice = slice_index;
    t.m = Eigen::MatrixXcd::Zero(2 * r, 2 * r);
    Eigen::MatrixXcd top = (-dirichlet_path(r)).cast<cplx>();
    for (int j = 0; j < r; ++j)
        top(j, j) = effective_potential_block(channel_block(potential_slice, j, s), z) - p.w;
    t.m.block(0, 0, r, r) = top;
    t.m.block(0, r, r, r) = -Eigen::MatrixXcd::Identity(r, r);
    t.m.block(r, 0, r, r) = Eigen::MatrixXcd::Identity(r, r);
    return t;
}

ScaledProduct transfer_product(const graph::AntitreeParams& p,
                               std::span<const double> potential, cplx z) {
    graph::validate(p);
    if (potential.size() != static_cast<std::size_t>(p.dim()))
        throw_config("potential length does not equal n*r*s");
    const int r = p.r;
    const std::size_t rs = static_cast<std::size_t>(r) * p.s;
    ScaledProduct out;
    out.matrix = Eigen::MatrixXcd::Identity(2 * r, 2 * r);
    for (int i = 0; i < p.n; ++i) {
        const auto t =
            build_transfer(p, potential.subspan(static_cast<std::size_t>(i) * rs, rs), z, i);
        out.matrix = t.m * out.matrix;
        const double c = out.matrix.cwiseAbs().maxCoeff();
        if (!(c > 0) || !std::isfinite(c))
            throw_numeric("transfer product degenerated at slice " + std::to_string(i));
        out.matrix /= c;
        out.log_scale += std::log(c);
    }
    return out;
}

SecularValue secular_value(const graph::AntitreeParams& p, std::span<const double> potential,
                           double lambda) {
    const ShootResult shoot = qr_shoot(p, potential, lambda);
    SecularValue sv;
    sv.value = corner_det(shoot.basis, p.r);
    sv.log_scale = shoot.log_scale;
    return sv;
}

std::vector<double> eigenvalue_scan(const graph::AntitreeParams& p,
                                    std::span<const double> potential, double lo, double hi,
                                    double grid_step, int expected_count) {
    graph::validate(p);
    if (!(lo < hi)) throw_config("eigenvalue scan requires lo < hi");
    if (potential.size() != static_cast<std::size_t>(p.dim()))
        throw_config("potential length does not equal n*r*s");
    if (grid_step <= 0) {
        int expected = expected_count;
        if (expected <= 0) {
            double vmax = 0;
            for (double v : potential) vmax = std::max(vmax, std::abs(v));
            const double band = 2.0 * (vmax + std::abs(p.w) + 4.0);
            expected = std::max(8, static_cast<int>(std::ceil(p.dim() * (hi - lo) / band)));
        }
        grid_step = (hi - lo) / (20.0 * expected);
    }
    auto f = [&](double lambda) {
        try {
            return secular_at(p, potential, lambda);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::singular) throw;
            // pole exactly on the grid: nudge off it
            return secular_at(p, potential, lambda + grid_step * 1e-6);
        }
    };
    const long npts = std::lround(std::ceil((hi - lo) / grid_step)) + 1;
    std::vector<double> xs(npts), fs(npts);
    for (long k = 0; k < npts; ++k) {
        xs[k] = std::min(hi, lo + k * grid_step);
        fs[k] = f(xs[k]);
    }
    std::vector<double> mags;
    mags.reserve(npts);
    for (double v : fs) mags.push_back(std::abs(v));
    std::nth_element(mags.begin(), mags.begin() + npts / 2, mags.end());
    const double med = std::max(mags[npts / 2], 1e-300);

    std::vector<double> roots;
    for (long k = 0; k + 1 < npts; ++k) {
        if (fs[k] == 0.0) {
            roots.push_back(xs[k]);
            continue;
        }
        if ((fs[k] < 0) != (fs[k + 1] < 0)) {
            roots.push_back(bisect_root(f, xs[k], xs[k + 1], fs[k]));
        } else if (k > 0 && std::abs(fs[k]) < std::abs(fs[k - 1]) &&
                   std::abs(fs[k]) < std::abs(fs[k + 1]) &&
                   (fs[k - 1] < 0) == (fs[k] < 0) && std::abs(fs[k]) < 5e-2 * med) {
            // sign-preserving local dip: either a pair of simple zeros closer
            // than the grid step or an even-multiplicity zero
            constexpr int sub = 64;
            const double a = xs[k - 1], b = xs[k + 1], h = (b - a) / sub;
            double xp = a, fp = fs[k - 1];
            bool crossed = false;
            for (int j = 1; j <= sub; ++j) {
                const double xq = (j == sub) ? b : a + j * h;
                const double fq = f(xq);
                if (fq == 0.0) {
                    roots.push_back(xq);
                    crossed = true;
                } else if ((fp < 0) != (fq < 0)) {
                    roots.push_back(bisect_root(f, xp, xq, fp));
                    crossed = true;
                }
                xp = xq;
                fp = fq;
            }
            if (!crossed && std::abs(fs[k]) < 1e-4 * med) {
                const auto [x0, f0] = minimize_abs(f, xs[k - 1], xs[k + 1]);
                if (f0 < 1e-9 * med) {
                    roots.push_back(x0);
                    roots.push_back(x0);
                }
            }
        }
    }
    std::sort(roots.begin(), roots.end());
    // a deficit against a known target count means some zeros still hide
    // between grid points; retry on a finer grid
    if (expected_count > 0 && roots.size() < static_cast<std::size_t>(expected_count) &&
        grid_step > (hi - lo) / 1e6)
        return eigenvalue_scan(p, potential, lo, hi, grid_step / 2.0, expected_count);
    return roots;
}

Eigenvector reconstruct_eigenvector(const graph::AntitreeParams& p,
                                    std::span<const double> potential, double lambda) {
    graph::validate(p);
    if (potential.size() != static_cast<std::size_t>(p.dim()))
        throw_config("potential length does not equal n*r*s");
    const int r = p.r, s = p.s, rs = r * s;

    const RealProduct prod = real_transfer_product(p, potential, lambda);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(prod.matrix.topLeftCorner(r, r),
                                          Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double tol = std::max(1e-8 * sv(0), 1e-14);
    int kernel_dim = 0;
    for (int k = 0; k < r; ++k)
        if (sv(k) < tol) ++kernel_dim;
    const Eigen::VectorXd u1 = svd.matrixV().col(r - 1);

    // slice-local operator blocks shared by every slice
    const Eigen::MatrixXd a_diag = graph::build_antitree_adjacency(p, 0).blocks().diag;
    Eigen::MatrixXd phi = Eigen::MatrixXd::Zero(rs, r); // I_r (x) 1_s
    for (int j = 0; j < r; ++j) phi.block(j * s, j, s, 1).setOnes();

    auto assemble = [&](double mu) {
        Eigen::VectorXd psi(static_cast<Eigen::Index>(p.n) * rs);
        Eigen::VectorXd u_prev = Eigen::VectorXd::Zero(r), u_cur = u1;
        for (int i = 0; i < p.n; ++i) {
            const auto slice = potential.subspan(static_cast<std::size_t>(i) * rs,
                                                 static_cast<std::size_t>(rs));
            const Eigen::MatrixXd top = transfer_top_block(p, slice, mu, i);
            Eigen::MatrixXd d = mu * Eigen::MatrixXd::Identity(rs, rs) - a_diag;
            for (int k = 0; k < rs; ++k) d(k, k) -= slice[k];
            const Eigen::VectorXd bu = top * u_cur;
            psi.segment(static_cast<Eigen::Index>(i) * rs, rs) =
                d.partialPivLu().solve(phi * bu);
            const Eigen::VectorXd u_next = bu - u_prev;
            u_prev = u_cur;
            u_cur = u_next;
        }
        return psi;
    };

    auto residual_of = [&](const Eigen::VectorXd& psi) {
        // H psi via the block-tridiagonal structure, A_off = I_r (x) P_s
        Eigen::VectorXd hpsi(psi.size());
        auto block_mean_lift = [&](const Eigen::VectorXd& seg) {
            Eigen::VectorXd out(rs);
            for (int j = 0; j < r; ++j) {
                const double mean = seg.segment(j * s, s).mean();
                out.segment(j * s, s).setConstant(mean);
            }
            return out;
        };
        for (int i = 0; i < p.n; ++i) {
            const Eigen::VectorXd seg = psi.segment(static_cast<Eigen::Index>(i) * rs, rs);
            Eigen::VectorXd h = a_diag * seg;
            for (int k = 0; k < rs; ++k)
                h(k) += potential[static_cast<std::size_t>(i) * rs + k] * seg(k);
            if (i > 0)
                h += block_mean_lift(psi.segment(static_cast<Eigen::Index>(i - 1) * rs, rs));
            if (i + 1 < p.n)
                h += block_mean_lift(psi.segment(static_cast<Eigen::Index>(i + 1) * rs, rs));
            hpsi.segment(static_cast<Eigen::Index>(i) * rs, rs) = h;
        }
        return (hpsi - lambda * psi).norm() / psi.norm();
    };

    Eigenvector out;
    out.kernel_dim = std::max(kernel_dim, 1);
    Eigen::VectorXd psi = assemble(lambda);
    double res = residual_of(psi);
    if (!(res <= 1e-6)) {
        // a slice resolvent can be near-singular exactly at lambda; evaluate
        // the reconstruction maps at a shifted parameter instead
        const Eigen::VectorXd psi2 = assemble(lambda + 1e-7);
        const double res2 = residual_of(psi2);
        if (res2 < res) {
            psi = psi2;
            res = res2;
        }
    }
    psi /= psi.norm();
    out.psi = std::move(psi);
    out.residual = res;
    return out;
}

EffectiveEnergy effective_energy(const disorder::DisorderSpec& spec, double lambda, double w) {
    const auto stats = disorder::harmonic_average(spec, lambda);
    EffectiveEnergy e;
    e.value = stats.h - w;
    e.in_interval = std::abs(e.value) < 4.0;
    return e;
}

Eigen::MatrixXcd ChannelData::deterministic_limit() const {
    Eigen::VectorXcd d(2 * r);
    for (int k = 0; k < r_h; ++k) d(k) = gamma(k);
    for (int k = 0; k < 2 * r_e; ++k) d(r_h + k) = U(k);
    for (int k = 0; k < r_h; ++k) d(r + r_e + k) = 1.0 / gamma(k);
    return d.asDiagonal();
}

Eigen::MatrixXcd ChannelData::O_tilde() const {
    Eigen::MatrixXcd ot = Eigen::MatrixXcd::Zero(2 * r, 2 * r);
    ot.block(0, 0, r, r) = O.cast<cplx>();
    ot.block(r, r, r, r) = O.cast<cplx>();
    return ot;
}

Eigen::VectorXcd ChannelData::S_diag() const {
    Eigen::VectorXcd s(2 * r_e);
    for (int k = 0; k < r_e; ++k) {
        const cplx v = 1.0 / (std::conj(z(k)) - z(k)); // = i / (2 Im z)
        s(k) = v;
        s(r_e + k) = v;
    }
    return s;
}

double ChannelData::hyperbolic_drift(const disorder::HarmonicStats& stats) const {
    double sum = 0;
    for (int k = 0; k < r_h; ++k) sum += 1.0 / (1.0 / gamma(k) - gamma(k));
    const double h = stats.h;
    return h * h * h * h * stats.sigma2 / (r + 1) * sum;
}

ChannelData channel_decomposition(const disorder::DisorderSpec& spec, double lambda, double w,
                                  int r) {
    if (r < 1) throw_config("channel decomposition requires r >= 1");
    const auto energy = effective_energy(spec, lambda, w);
    if (!energy.in_interval)
        throw_domain("effective energy outside the propagation interval");
    const double E = energy.value;
    constexpr double kParabolicTol = 1e-8;

    std::vector<int> hyp, ell;
    std::vector<double> aj(static_cast<std::size_t>(r));
    for (int j = 1; j <= r; ++j) {
        aj[j - 1] = 2.0 * std::cos(std::numbers::pi * j / (r + 1));
        const double d = E - aj[j - 1];
        if (std::abs(std::abs(d) - 2.0) <= kParabolicTol)
            throw_domain("parabolic channel at j = " + std::to_string(j));
        (std::abs(d) > 2.0 ? hyp : ell).push_back(j);
    }

    ChannelData cd;
    cd.lambda = lambda;
    cd.E = E;
    cd.r = r;
    cd.r_h = static_cast<int>(hyp.size());
    cd.r_e = static_cast<int>(ell.size());
    cd.order.reserve(static_cast<std::size_t>(r));
    cd.order.insert(cd.order.end(), hyp.begin(), hyp.end());
    cd.order.insert(cd.order.end(), ell.begin(), ell.end());

    cd.a.resize(r);
    cd.O.resize(r, r);
    const double norm = std::sqrt(2.0 / (r + 1));
    for (int c = 0; c < r; ++c) {
        const int j = cd.order[static_cast<std::size_t>(c)];
        cd.a(c) = aj[j - 1];
        for (int k = 1; k <= r; ++k)
            cd.O(k - 1, c) = norm * std::sin(std::numbers::pi * j * k / (r + 1));
    }

    cd.gamma.resize(cd.r_h);
    for (int k = 0; k < cd.r_h; ++k) {
        const double d = E - cd.a(k);
        const double sgn = d > 0 ? 1.0 : -1.0;
        cd.gamma(k) = (d - sgn * std::sqrt(d * d - 4.0)) / 2.0;
    }
    cd.z.resize(cd.r_e);
    for (int k = 0; k < cd.r_e; ++k) {
        const double d = E - cd.a(cd.r_h + k);
        cd.z(k) = cplx(d / 2.0, std::sqrt(1.0 - d * d / 4.0));
    }
    cd.U.resize(2 * cd.r_e);
    for (int k = 0; k < cd.r_e; ++k) {
        cd.U(k) = std::conj(cd.z(k));
        cd.U(cd.r_e + k) = cd.z(k);
    }

    // eigenbasis of the per-channel 2x2 companion blocks: eigenvalue mu with
    // mu + 1/mu = d has eigenvector (mu, 1); channel c occupies rows {c, r+c}
    cd.Q = Eigen::MatrixXcd::Zero(2 * r, 2 * r);
    auto place = [&](int col, int channel, cplx mu) {
        cd.Q(channel, col) = mu;
        cd.Q(r + channel, col) = 1.0;
    };
    for (int k = 0; k < cd.r_h; ++k) place(k, k, cd.gamma(k));
    for (int k = 0; k < cd.r_e; ++k) place(cd.r_h + k, cd.r_h + k, std::conj(cd.z(k)));
    for (int k = 0; k < cd.r_e; ++k) place(cd.r_h + cd.r_e + k, cd.r_h + k, cd.z(k));
    for (int k = 0; k < cd.r_h; ++k) place(r + cd.r_e + k, k, 1.0 / cd.gamma(k));
    return cd;
}

ChaoticWitness chaotic_check(const Eigen::VectorXcd& z, double tol) {
    const int m = static_cast<int>(z.size());
    ChaoticWitness w;
    auto fail = [&](int which, int i, int j, int k, int l) {
        w.chaotic = false;
        w.which = which;
        w.indices = {i, j, k, l};
    };
    for (int i = 0; i < m && w.chaotic; ++i)
        for (int j = 0; j < m && w.chaotic; ++j)
            for (int k = 0; k < m && w.chaotic; ++k)
                for (int l = 0; l < m && w.chaotic; ++l) {
                    if (std::abs(z(i) * z(j) * z(k) * z(l) - 1.0) <= tol) {
                        fail(0, i, j, k, l);
                        break;
                    }
                    if (std::abs(std::conj(z(i)) * z(j) * z(k) * z(l) - 1.0) <= tol) {
                        fail(1, i, j, k, l);
                        break;
                    }
                    const bool same_pair = (std::min(i, j) == std::min(k, l)) &&
                                           (std::max(i, j) == std::max(k, l));
                    if (!same_pair &&
                        std::abs(std::conj(z(i)) * std::conj(z(j)) * z(k) * z(l) - 1.0) <= tol) {
                        fail(2, i, j, k, l);
                        break;
                    }
                }
    return w;
}

std::vector<long> find_return_times(const Eigen::VectorXcd& z_diag,
                                    const Eigen::VectorXcd& target, int count, double tol,
                                    long horizon) {
    if (z_diag.size() != target.size()) throw_config("return-time target size mismatch");
    std::vector<long> hits;
    Eigen::VectorXcd w = z_diag; // z^{n+1} at n = 0
    for (long n = 1; n <= horizon && static_cast<int>(hits.size()) < count; ++n) {
        w = w.cwiseProduct(z_diag);
        for (Eigen::Index k = 0; k < w.size(); ++k) w(k) /= std::abs(w(k));
        double dist = 0;
        for (Eigen::Index k = 0; k < w.size(); ++k)
            dist = std::max(dist, std::abs(w(k) - target(k)));
        if (dist < tol) hits.push_back(n);
    }
    return hits;
}

double scaled_lambda(const disorder::HarmonicStats& stats, double eps, int n) {
    if (n < 1) throw_config("scaled spectral parameter requires n >= 1");
    return stats.lambda + eps / (n * (stats.h * stats.h * stats.sigma2 + 1.0));
}

TransferMatrix scaled_transfer(const graph::AntitreeParams& p,
                               const disorder::DisorderSpec& spec, double lambda, double eps,
                               int m, int n, std::span<const double> potential_slice,
                               ScaledKind which) {
    if (m < 1 || n < 1) throw_config("scaled transfer requires m, n >= 1");
    if (p.s != m * n) throw_config("scaled transfer requires s = m * n");
    const auto stats = disorder::harmonic_average(spec, lambda);
    const double le = scaled_lambda(stats, eps, n);
    TransferMatrix t = build_transfer(p, potential_slice, le);
    if (which == ScaledKind::conjugated) {
        const auto cd = channel_decomposition(spec, lambda, p.w, p.r);
        const Eigen::MatrixXcd ot = cd.O_tilde();
        const Eigen::MatrixXcd conj = ot.transpose() * t.m * ot * cd.Q;
        t.m = cd.Q.partialPivLu().solve(conj);
    }
    return t;
}

double symplectic_defect(const Eigen::MatrixXcd& t) {
    const int r = static_cast<int>(t.rows()) / 2;
    Eigen::MatrixXcd j = Eigen::MatrixXcd::Zero(2 * r, 2 * r);
    j.block(0, r, r, r) = -Eigen::MatrixXcd::Identity(r, r);
    j.block(r, 0, r, r) = Eigen::MatrixXcd::Identity(r, r);
    return (t.transpose() * j * t - j).cwiseAbs().maxCoeff();
}

} // namespace at::transfer
