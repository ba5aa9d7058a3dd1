#include "hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <mutex>

#include "linalg.hpp"
#include "rng.hpp"
#include "spectral.hpp"
#include "transforms.hpp"

namespace pam {

void OperatorSpec::apply(const double* u, double* y) const {
    const int N = box.N, m = N - 2;
    const double h2 = box.dx() * box.dx();
    if (lap == LaplacianKind::FiniteDifference) {
        const double c = 0.5 / h2;
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                const size_t idx = size_t(i) * m + j;
                double s = -4.0 * u[idx];
                if (i > 0) s += u[idx - m];
                if (i < m - 1) s += u[idx + m];
                if (j > 0) s += u[idx - 1];
                if (j < m - 1) s += u[idx + 1];
                y[idx] = c * s + potential.at(i + 1, j + 1) * u[idx];
            }
    } else {
        std::vector<double> t(size_t(m) * m);
        tf::dst1_2d(u, t.data(), m, m);
        const int M = N - 1;
        const double a = -0.5 * M_PI * M_PI / (box.L * box.L);
        const double inv = 1.0 / (4.0 * double(M) * double(M));
        for (int k1 = 1; k1 <= m; ++k1)
            for (int k2 = 1; k2 <= m; ++k2)
                t[size_t(k1 - 1) * m + (k2 - 1)] *=
                    a * (double(k1) * k1 + double(k2) * k2) * inv;
        tf::dst1_2d(t.data(), y, m, m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                y[size_t(i) * m + j] += potential.at(i + 1, j + 1) * u[size_t(i) * m + j];
    }
}

void OperatorSpec::apply_many(const double* u, double* y, int count) const {
    const int N = box.N, m = N - 2;
    const size_t d = size_t(m) * m;
    if (lap == LaplacianKind::FiniteDifference) {
        for (int c = 0; c < count; ++c) apply(u + d * c, y + d * c);
        return;
    }
    std::vector<double> t(d * count);
    tf::dst1_2d_many(u, t.data(), m, m, count);
    const int M = N - 1;
    const double a = -0.5 * M_PI * M_PI / (box.L * box.L);
    const double inv = 1.0 / (4.0 * double(M) * double(M));
    for (int c = 0; c < count; ++c) {
        double* tc = t.data() + d * c;
        for (int k1 = 1; k1 <= m; ++k1)
            for (int k2 = 1; k2 <= m; ++k2)
                tc[size_t(k1 - 1) * m + (k2 - 1)] *=
                    a * (double(k1) * k1 + double(k2) * k2) * inv;
    }
    tf::dst1_2d_many(t.data(), y, m, m, count);
    for (int c = 0; c < count; ++c) {
        double* yc = y + d * c;
        const double* uc = u + d * c;
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                yc[size_t(i) * m + j] += potential.at(i + 1, j + 1) * uc[size_t(i) * m + j];
    }
}

uint64_t OperatorSpec::fingerprint() const {
    uint64_t h = fnv1a(potential.values.data(), potential.values.size() * sizeof(double));
    h = fnv1a(&box.L, sizeof(double), h);
    h = fnv1a(&box.N, sizeof(int), h);
    const int k = int(lap);
    return fnv1a(&k, sizeof(int), h);
}

OperatorSpec assemble(const BoxSpec& box, const GridField& potential, LaplacianKind lap) {
    if (box.boundary != Boundary::Dirichlet)
        throw Error("assemble: operator carries Dirichlet boundary conditions");
    if (!potential.box.same_grid(box)) throw Error("assemble: grid mismatch");
    if (!potential.finite()) throw Error("assemble: potential not finite");
    return OperatorSpec{box, potential, lap};
}

namespace {

constexpr int kDenseMaxN = 36;  // dense path for interior dimension <= 34^2

// Dense solve: build the matrix column by column through apply().
Spectrum dense_solve(const OperatorSpec& op, int n) {
    const int dim = op.dim();
    std::vector<double> a(size_t(dim) * dim), e(dim, 0.0), col(dim);
    for (int j = 0; j < dim; ++j) {
        e[j] = 1.0;
        op.apply(e.data(), col.data());
        e[j] = 0.0;
        for (int i = 0; i < dim; ++i) a[size_t(i) * dim + j] = col[i];
    }
    std::vector<double> w;
    sym_eig(a, w, dim);  // ascending; eigenvector j sits in column j
    Spectrum sp;
    for (int r = 0; r < n; ++r) {
        const int j = dim - 1 - r;
        sp.eigenvalues.push_back(w[j]);
        std::vector<double> v(dim);
        for (int i = 0; i < dim; ++i) v[i] = a[size_t(i) * dim + j];
        std::vector<double> hv(dim);
        op.apply(v.data(), hv.data());
        double res = 0.0;
        for (int i = 0; i < dim; ++i) {
            const double d = hv[i] - w[j] * v[i];
            res += d * d;
        }
        sp.residuals.push_back(std::sqrt(res));
        GridField f(op.box);
        const int m = op.box.N - 2;
        const double scale = 1.0 / op.box.dx();
        for (int i = 0; i < m; ++i)
            for (int jj = 0; jj < m; ++jj)
                f.at(i + 1, jj + 1) = scale * v[size_t(i) * m + jj];
        sp.eigenvectors.push_back(std::move(f));
    }
    return sp;
}

struct Precond {
    const OperatorSpec* op;
    double shift;  // (shift - (1/2) Lap)^{-1} in the sine basis
    void apply_many(const double* r, double* z, int count) const {
        const int N = op->box.N, m = N - 2, M = N - 1;
        const size_t d = size_t(m) * m;
        std::vector<double> t(d * count);
        tf::dst1_2d_many(r, t.data(), m, m, count);
        const double a = 0.5 * M_PI * M_PI / (op->box.L * op->box.L);
        const double inv = 1.0 / (4.0 * double(M) * double(M));
        for (int c = 0; c < count; ++c) {
            double* tc = t.data() + d * c;
            for (int k1 = 1; k1 <= m; ++k1)
                for (int k2 = 1; k2 <= m; ++k2)
                    tc[size_t(k1 - 1) * m + (k2 - 1)] *=
                        inv / (shift + a * (double(k1) * k1 + double(k2) * k2));
        }
        tf::dst1_2d_many(t.data(), z, m, m, count);
    }
};

// LOBPCG for the n_block smallest eigenpairs of A = -H. Flat row-major
// storage (one row per basis vector); the hot loops are plain contiguous
// scans so they vectorize.
struct LobpcgResult {
    std::vector<double> theta;
    std::vector<double> x;  // n_block rows of length dim
    std::vector<double> resnorm;
    int iterations = 0;
    bool converged = false;
};

struct FlatBlock {
    int rows = 0, dim = 0;
    std::vector<double> a;
    FlatBlock() = default;
    FlatBlock(int r, int d) : rows(r), dim(d), a(size_t(r) * d, 0.0) {}
    double* row(int i) { return a.data() + size_t(i) * dim; }
    const double* row(int i) const { return a.data() + size_t(i) * dim; }
};

double vdot(const double* x, const double* y, int n) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += x[i] * y[i];
    return s;
}

void vaxpy(double a, const double* x, double* y, int n) {
    for (int i = 0; i < n; ++i) y[i] += a * x[i];
}

// MGS with drop tolerance over rows [start, rows); returns surviving count.
int orthonormalize_rows(FlatBlock& b, int start) {
    int keep = start;
    for (int j = start; j < b.rows; ++j) {
        double* cj = b.row(j);
        const double before = std::sqrt(vdot(cj, cj, b.dim));
        if (!(before > 0.0)) continue;
        for (int pass = 0; pass < 2; ++pass)
            for (int i = 0; i < keep; ++i) vaxpy(-vdot(b.row(i), cj, b.dim), b.row(i), cj, b.dim);
        const double nrm = std::sqrt(vdot(cj, cj, b.dim));
        if (nrm < 1e-7 * before || nrm == 0.0) continue;
        for (int i = 0; i < b.dim; ++i) cj[i] /= nrm;
        if (keep != j) std::memcpy(b.row(keep), cj, sizeof(double) * b.dim);
        ++keep;
    }
    b.rows = keep;
    return keep;
}

LobpcgResult lobpcg_smallest(const OperatorSpec& op, int n_want, int n_block, double tol,
                             int max_iter, const FlatBlock* init) {
    const int dim = op.dim();
    n_block = std::min(n_block, dim);
    n_want = std::min(n_want, n_block);
    const int cap = 3 * n_block;

    Precond prec{&op, 1.0 + 0.02 * norm_max(op.potential)};
    const uint64_t fp = op.fingerprint();

    FlatBlock S(cap, dim), AS(cap, dim);  // rows 0..nb-1 = X, then W, then P
    int np = 0;                           // current number of P rows
    FlatBlock P(n_block, dim), R(n_block, dim);
    std::vector<double> theta(n_block, 0.0);

    S.rows = n_block;
    for (int j = 0; j < n_block; ++j) {
        if (init && j < init->rows) {
            std::memcpy(S.row(j), init->row(j), sizeof(double) * dim);
        } else {
            double* x = S.row(j);
            for (int i = 0; i < dim; ++i)
                x[i] = normal_one(fp, 0xE16E5u, uint32_t(j), uint32_t(i), 0);
        }
    }
    if (orthonormalize_rows(S, 0) < n_block)
        throw Error("top_eigenpairs: degenerate start block");
    op.apply_many(S.row(0), AS.row(0), n_block);
    for (size_t i = 0; i < size_t(n_block) * dim; ++i) AS.a[i] = -AS.a[i];

    LobpcgResult out;
    out.resnorm.assign(n_block, 0.0);
    std::vector<double> g, w;
    FlatBlock Xn(n_block, dim), AXn(n_block, dim), Pn(n_block, dim);

    for (int it = 0; it < max_iter; ++it) {
        const int ns = S.rows;
        // Rayleigh-Ritz on the current basis
        g.assign(size_t(ns) * ns, 0.0);
        for (int i = 0; i < ns; ++i)
            for (int j = 0; j <= i; ++j) {
                const double v =
                    0.5 * (vdot(S.row(i), AS.row(j), dim) + vdot(S.row(j), AS.row(i), dim));
                g[size_t(i) * ns + j] = g[size_t(j) * ns + i] = v;
            }
        sym_eig(g, w, ns);

        // rotate: X = S C, AX = AS C, P = (W,P part of S) C
        for (int r = 0; r < n_block; ++r) {
            theta[r] = w[r];
            double* x = Xn.row(r);
            double* ax = AXn.row(r);
            double* p = Pn.row(r);
            std::fill(x, x + dim, 0.0);
            std::fill(ax, ax + dim, 0.0);
            std::fill(p, p + dim, 0.0);
            for (int j = 0; j < ns; ++j) {
                const double c = g[size_t(j) * ns + r];
                if (c == 0.0) continue;
                vaxpy(c, S.row(j), x, dim);
                vaxpy(c, AS.row(j), ax, dim);
                if (j >= n_block) vaxpy(c, S.row(j), p, dim);
            }
        }

        // residuals on the rotated block
        bool done = true;
        for (int j = 0; j < n_block; ++j) {
            double* r = R.row(j);
            const double* x = Xn.row(j);
            const double* ax = AXn.row(j);
            double s = 0.0;
            for (int i = 0; i < dim; ++i) {
                r[i] = ax[i] - theta[j] * x[i];
                s += r[i] * r[i];
            }
            out.resnorm[j] = std::sqrt(s);
            if (j < n_want && out.resnorm[j] > tol) done = false;
        }
        out.iterations = it + 1;
        if (done || it == max_iter - 1) {
            out.converged = done;
            out.theta = theta;
            out.x.assign(Xn.a.begin(), Xn.a.begin() + size_t(n_block) * dim);
            return out;
        }

        // next basis: [X, prec R, P]
        std::memcpy(S.a.data(), Xn.a.data(), sizeof(double) * size_t(n_block) * dim);
        if (it % 25 == 24) {
            // counter roundoff drift of the reused block: refresh X and AX
            S.rows = n_block;
            if (orthonormalize_rows(S, 0) < n_block)
                throw Error("top_eigenpairs: block collapse");
            op.apply_many(S.row(0), AXn.row(0), n_block);
            for (size_t i = 0; i < size_t(n_block) * dim; ++i) AXn.a[i] = -AXn.a[i];
            std::memcpy(Xn.a.data(), S.a.data(), sizeof(double) * size_t(n_block) * dim);
        }
        prec.apply_many(R.row(0), S.row(n_block), n_block);
        std::memcpy(P.a.data(), Pn.a.data(), sizeof(double) * size_t(n_block) * dim);
        P.rows = n_block;
        np = orthonormalize_rows(P, 0);
        for (int j = 0; j < np; ++j)
            std::memcpy(S.row(2 * n_block + j), P.row(j), sizeof(double) * dim);
        S.rows = 2 * n_block + np;
        if (orthonormalize_rows(S, n_block) <= n_block) {  // no fresh directions
            out.converged = false;
            out.theta = theta;
            out.x.assign(Xn.a.begin(), Xn.a.begin() + size_t(n_block) * dim);
            return out;
        }

        // operator on the basis: X rows reuse AX, the rest get fresh applies
        std::memcpy(AS.a.data(), AXn.a.data(), sizeof(double) * size_t(n_block) * dim);
        AS.rows = S.rows;
        const int fresh = S.rows - n_block;
        op.apply_many(S.row(n_block), AS.row(n_block), fresh);
        for (size_t i = size_t(n_block) * dim; i < size_t(S.rows) * dim; ++i)
            AS.a[i] = -AS.a[i];
    }
    out.theta = theta;
    return out;
}

void sign_normalize(GridField& f) {
    const double thresh = 1e-12 * std::max(norm_max(f), 1e-300);
    for (double v : f.values) {
        if (std::fabs(v) > thresh) {
            if (v < 0)
                for (double& x : f.values) x = -x;
            return;
        }
    }
}

} // namespace

GridField prolong_dirichlet(const GridField& f, int N_fine) {
    if (f.box.boundary != Boundary::Dirichlet) throw Error("prolong_dirichlet: wrong flavor");
    if (N_fine < f.box.N) throw Error("prolong_dirichlet: target grid coarser than source");
    // zero-pad the sine coefficients onto the finer grid
    const SpectralField s = forward_transform(f);
    BoxSpec fine(f.box.L, N_fine, Boundary::Dirichlet);
    SpectralField sf(fine);
    for (int k1 = 1; k1 <= f.box.N - 2; ++k1)
        for (int k2 = 1; k2 <= f.box.N - 2; ++k2) sf.at(k1, k2) = s.at(k1, k2);
    return inverse_transform(sf);
}

Spectrum top_eigenpairs(const OperatorSpec& op, int n, const EigOptions& opt) {
    if (n < 1) throw Error("top_eigenpairs: n must be >= 1");
    if (n > op.dim()) throw Error("top_eigenpairs: n exceeds operator dimension");

    const bool dense = (opt.method == EigMethod::Dense) ||
                       (opt.method == EigMethod::Auto && op.box.N <= kDenseMaxN);
    Spectrum sp;
    if (dense) {
        sp = dense_solve(op, n);
    } else {
        FlatBlock init;
        const FlatBlock* initp = nullptr;
        if (opt.warm_start && !opt.warm_start->eigenvectors.empty()) {
            const int m = op.box.N - 2;
            init = FlatBlock(int(opt.warm_start->eigenvectors.size()), m * m);
            for (int r = 0; r < init.rows; ++r) {
                const GridField& g = opt.warm_start->eigenvectors[r];
                const GridField fine =
                    (g.box.N == op.box.N) ? g : prolong_dirichlet(g, op.box.N);
                for (int i = 0; i < m; ++i)
                    for (int j = 0; j < m; ++j)
                        init.row(r)[size_t(i) * m + j] = fine.at(i + 1, j + 1);
            }
            initp = &init;
        }
        const int n_block = n + opt.extra_block;
        const LobpcgResult r =
            lobpcg_smallest(op, n, n_block, opt.tol, opt.max_iter, initp);
        if (!r.converged) {
            std::string msg = "top_eigenpairs: no convergence after " +
                              std::to_string(r.iterations) + " iterations; residuals:";
            for (int j = 0; j < n; ++j) msg += " " + std::to_string(r.resnorm[j]);
            throw Error(msg);
        }
        sp.iterations = r.iterations;
        const int m = op.box.N - 2;
        const size_t dim = size_t(m) * m;
        const double scale = 1.0 / op.box.dx();
        for (int j = 0; j < n; ++j) {
            sp.eigenvalues.push_back(-r.theta[j]);  // A = -H
            sp.residuals.push_back(r.resnorm[j]);
            GridField f(op.box);
            const double* v = r.x.data() + dim * j;
            for (int i = 0; i < m; ++i)
                for (int jj = 0; jj < m; ++jj)
                    f.at(i + 1, jj + 1) = scale * v[size_t(i) * m + jj];
            sp.eigenvectors.push_back(std::move(f));
        }
    }

    for (GridField& f : sp.eigenvectors) sign_normalize(f);

    // descending eigenvalues; within-tolerance ties broken lexicographically
    // on the sign-normalized eigenvector entries
    std::vector<int> order(sp.eigenvalues.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = int(i);
    const double tie = 10.0 * std::max(opt.tol, 1e-12);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (std::fabs(sp.eigenvalues[a] - sp.eigenvalues[b]) > tie)
            return sp.eigenvalues[a] > sp.eigenvalues[b];
        const auto& va = sp.eigenvectors[a].values;
        const auto& vb = sp.eigenvectors[b].values;
        for (size_t i = 0; i < va.size(); ++i) {
            if (std::fabs(va[i] - vb[i]) > 1e-9) return va[i] > vb[i];
        }
        return a < b;
    });
    Spectrum sorted;
    sorted.iterations = sp.iterations;
    for (int idx : order) {
        sorted.eigenvalues.push_back(sp.eigenvalues[idx]);
        sorted.eigenvectors.push_back(std::move(sp.eigenvectors[idx]));
        sorted.residuals.push_back(sp.residuals[idx]);
    }
    return sorted;
}

namespace {
std::mutex g_cal_mutex;
std::map<std::pair<double, int>, RenormCalibration> g_cal_cache;
} // namespace

RenormCalibration calibrate_renorm(double L, MollifierKind route) {
    const auto key = std::make_pair(L, int(route));
    std::lock_guard<std::mutex> lock(g_cal_mutex);
    auto it = g_cal_cache.find(key);
    if (it != g_cal_cache.end()) return it->second;
    std::vector<double> eps_list;
    const int jmax = (route == MollifierKind::FourierCutoff) ? 10 : 7;
    for (int j = 3; j <= jmax; ++j) eps_list.push_back(std::ldexp(1.0, -j));
    const RenormTau tau = (route == MollifierKind::FourierCutoff) ? RenormTau::CompactTau
                                                                  : RenormTau::RhoProduct;
    const RenormFit fit = fit_renorm_intercept(L, eps_list, tau, 1e-5);
    const RenormCalibration cal{fit.slope, fit.intercept};
    g_cal_cache.emplace(key, cal);
    return cal;
}

RenormalizedSpectrum renormalized_eigenvalues(const BoxSpec& box, const NoiseCoeffs& nc,
                                              double eps, MollifierKind route, int n,
                                              const EigOptions& opt) {
    if (!nc.box.same_grid(box)) throw Error("renormalized_eigenvalues: grid mismatch");
    const GridField xi = (route == MollifierKind::FourierCutoff)
                             ? mollify_fourier(nc, eps)
                             : mollify_convolution(nc, eps);
    const BoxSpec dbox(box.L, box.N, Boundary::Dirichlet);
    GridField pot(dbox);
    pot.values = xi.values;
    const OperatorSpec op = assemble(dbox, pot);
    Spectrum sp = top_eigenpairs(op, n, opt);
    const RenormCalibration cal = calibrate_renorm(box.L, route);
    RenormalizedSpectrum out;
    out.c_eps = renorm_constant_log(eps, cal.intercept, cal.slope);
    out.lambda1_raw = sp.eigenvalues.empty() ? 0.0 : sp.eigenvalues[0];
    for (double& ev : sp.eigenvalues) ev -= out.c_eps;
    out.spectrum = std::move(sp);
    return out;
}

EigenScalingRecord eigen_scaling_cell(double L, uint64_t seed, double eps, int N, int n,
                                      MollifierKind route, const EigOptions& opt) {
    const BoxSpec nbox(L, N, Boundary::Neumann);
    const NoiseCoeffs nc = sample_white_noise(nbox, seed);
    const RenormalizedSpectrum rs = renormalized_eigenvalues(nbox, nc, eps, route, n, opt);
    EigenScalingRecord rec;
    rec.L = L;
    rec.seed = seed;
    rec.eps = eps;
    rec.lambdas = rs.spectrum.eigenvalues;
    rec.residuals = rs.spectrum.residuals;
    rec.lambda1_over_logL = rec.lambdas.empty() ? 0.0 : rec.lambdas[0] / std::log(L);
    return rec;
}

} // namespace pam
