#include "doctest.h"

#include <cmath>

#include "core/grid.hpp"
#include "core/hamiltonian.hpp"
#include "core/rng.hpp"

using namespace pam;

namespace {

GridField random_potential(const BoxSpec& box, uint64_t seed, double amp = 1.0) {
    GridField f(box);
    for (int i = 0; i < box.N; ++i)
        for (int j = 0; j < box.N; ++j)
            f.at(i, j) = amp * normal_one(seed, 77u, uint32_t(i), uint32_t(j), 0);
    return f;
}

std::vector<double> random_interior(const OperatorSpec& op, uint64_t seed) {
    std::vector<double> u(op.dim());
    for (size_t i = 0; i < u.size(); ++i)
        u[i] = normal_one(seed, 78u, uint32_t(i), 0, 0);
    return u;
}

} // namespace

TEST_CASE("assemble: analytic action on sine modes, constant shift, self-adjointness") {
    BoxSpec box(2.0, 33, Boundary::Dirichlet);

    // V = 0 on the (1,1) mode: H u = -(pi^2/L^2) u for the spectral Laplacian
    GridField v0(box);
    const OperatorSpec op = assemble(box, v0);
    const GridField mode = basis_mode(box, 1, 1);
    const int m = box.N - 2;
    std::vector<double> u(op.dim()), y(op.dim());
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) u[size_t(i) * m + j] = mode.at(i + 1, j + 1);
    op.apply(u.data(), y.data());
    const double eig = -M_PI * M_PI / (box.L * box.L);
    for (size_t i = 0; i < u.size(); ++i)
        CHECK(y[i] == doctest::Approx(eig * u[i]).epsilon(1e-10));

    // constant potential shifts the action exactly
    GridField vc(box);
    for (double& x : vc.values) x = 0.7;
    const OperatorSpec opc = assemble(box, vc);
    std::vector<double> y2(op.dim());
    opc.apply(u.data(), y2.data());
    for (size_t i = 0; i < u.size(); ++i)
        CHECK(y2[i] == doctest::Approx(y[i] + 0.7 * u[i]).epsilon(1e-12));

    // <Hu, w> = <u, Hw> for random pairs, both Laplacians
    for (LaplacianKind kind : {LaplacianKind::Spectral, LaplacianKind::FiniteDifference}) {
        const OperatorSpec opr = assemble(box, random_potential(box, 1), kind);
        for (uint64_t s = 0; s < 10; ++s) {
            const auto a = random_interior(opr, 100 + s), b = random_interior(opr, 200 + s);
            std::vector<double> ha(opr.dim()), hb(opr.dim());
            opr.apply(a.data(), ha.data());
            opr.apply(b.data(), hb.data());
            double hab = 0, ahb = 0, scale = 0;
            for (int i = 0; i < opr.dim(); ++i) {
                hab += ha[i] * b[i];
                ahb += a[i] * hb[i];
                scale += std::fabs(ha[i] * b[i]);
            }
            CHECK(std::fabs(hab - ahb) <= 1e-10 * scale);
        }
    }
}

TEST_CASE("top eigenpairs: analytic Dirichlet spectrum at V=0") {
    // continuum: lambda_n = -(pi^2 / 2 L^2)(k1^2 + k2^2); spectral Laplacian
    // reproduces it exactly on the grid
    BoxSpec box(1.0, 65, Boundary::Dirichlet);
    GridField v0(box);
    const OperatorSpec op = assemble(box, v0);
    EigOptions opt;
    opt.method = EigMethod::Lobpcg;
    opt.tol = 1e-9;
    const Spectrum sp = top_eigenpairs(op, 3, opt);
    CHECK(std::fabs(sp.eigenvalues[0] + M_PI * M_PI) < 5e-3);
    CHECK(std::fabs(sp.eigenvalues[1] + 2.5 * M_PI * M_PI) < 5e-3);
    CHECK(std::fabs(sp.eigenvalues[1] - sp.eigenvalues[2]) < 1e-8);  // (2,1)/(1,2) degenerate
    for (double r : sp.residuals) CHECK(r <= 1e-8);

    // orthonormality in L^2(Q_L)
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j <= i; ++j) {
            const double want = (i == j) ? 1.0 : 0.0;
            CHECK(std::fabs(inner(sp.eigenvectors[i], sp.eigenvectors[j]) - want) < 1e-7);
        }
}

TEST_CASE("dense fallback agrees with LOBPCG on a random potential") {
    BoxSpec box(2.0, 25, Boundary::Dirichlet);
    const GridField V = random_potential(box, 5, 2.0);
    const OperatorSpec op = assemble(box, V);
    EigOptions dense;
    dense.method = EigMethod::Dense;
    EigOptions lob;
    lob.method = EigMethod::Lobpcg;
    lob.tol = 1e-10;
    const Spectrum a = top_eigenpairs(op, 4, dense);
    const Spectrum b = top_eigenpairs(op, 4, lob);
    for (int i = 0; i < 4; ++i)
        CHECK(a.eigenvalues[i] == doctest::Approx(b.eigenvalues[i]).epsilon(1e-9));
    // eigenvectors match up to the sign convention (captured by overlap)
    for (int i = 0; i < 4; ++i)
        CHECK(std::fabs(inner(a.eigenvectors[i], b.eigenvectors[i])) ==
              doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("shift covariance: spectrum(V + c) = spectrum(V) + c") {
    BoxSpec box(2.0, 33, Boundary::Dirichlet);
    const GridField V = random_potential(box, 9, 1.5);
    GridField Vc = V;
    const double c = 2.341;
    for (double& x : Vc.values) x += c;
    const Spectrum a = top_eigenpairs(assemble(box, V), 3);
    const Spectrum b = top_eigenpairs(assemble(box, Vc), 3);
    for (int i = 0; i < 3; ++i)
        CHECK(b.eigenvalues[i] - a.eigenvalues[i] == doctest::Approx(c).epsilon(1e-9));
}

TEST_CASE("min-max monotonicity: V2 = V1 + |W| raises the top eigenvalue") {
    BoxSpec box(2.0, 25, Boundary::Dirichlet);
    for (uint64_t s = 0; s < 5; ++s) {
        const GridField V1 = random_potential(box, 11 + s);
        GridField V2 = V1;
        const GridField W = random_potential(box, 50 + s);
        for (size_t i = 0; i < V2.values.size(); ++i) V2.values[i] += std::fabs(W.values[i]);
        const Spectrum a = top_eigenpairs(assemble(box, V1), 1);
        const Spectrum b = top_eigenpairs(assemble(box, V2), 1);
        CHECK(b.eigenvalues[0] >= a.eigenvalues[0] - 1e-9);
    }
}

TEST_CASE("finite-difference Laplacian converges at second order on smooth V") {
    // |lambda_1(N) - lambda_1(2N)| shrinks ~4x per refinement
    const double L = 2.0;
    auto lam = [L](int N) {
        BoxSpec box(L, N, Boundary::Dirichlet);
        GridField V(box);
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j)
                V.at(i, j) = std::cos(M_PI * box.x(i) / L) * std::cos(M_PI * box.x(j) / L);
        return top_eigenpairs(assemble(box, V, LaplacianKind::FiniteDifference), 1)
            .eigenvalues[0];
    };
    const double l1 = lam(17), l2 = lam(33), l3 = lam(65);
    const double r = (l1 - l2) / (l2 - l3);
    CHECK(r > 2.8);
    CHECK(r < 5.5);
}

TEST_CASE("zero-noise renormalized eigenvalues reduce to the shifted analytic value") {
    BoxSpec box(2.0, 33, Boundary::Neumann);
    NoiseCoeffs nc;
    nc.box = box;
    nc.seed = 0;
    nc.gaussians.assign(size_t(box.N) * box.N, 0.0);
    const double eps = 0.125;
    const RenormalizedSpectrum rs =
        renormalized_eigenvalues(box, nc, eps, MollifierKind::FourierCutoff, 1);
    const double analytic = -M_PI * M_PI / (box.L * box.L);
    CHECK(rs.lambda1_raw == doctest::Approx(analytic).epsilon(1e-9));
    CHECK(rs.spectrum.eigenvalues[0] ==
          doctest::Approx(analytic - rs.c_eps).epsilon(1e-9));
}

TEST_CASE("warm start from a coarse solve accelerates the fine solve") {
    BoxSpec coarse(2.0, 33, Boundary::Dirichlet);
    BoxSpec fine(2.0, 65, Boundary::Dirichlet);
    GridField Vc(coarse), Vf(fine);
    auto fills = [](GridField& V) {
        const int N = V.box.N;
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j)
                V.at(i, j) = 3.0 * std::sin(2.0 * V.box.x(i)) * std::cos(V.box.x(j));
    };
    fills(Vc);
    fills(Vf);
    EigOptions opt;
    opt.method = EigMethod::Lobpcg;
    const Spectrum sc = top_eigenpairs(assemble(coarse, Vc), 2, opt);
    EigOptions warm = opt;
    warm.warm_start = &sc;
    const Spectrum cold = top_eigenpairs(assemble(fine, Vf), 2, opt);
    const Spectrum hot = top_eigenpairs(assemble(fine, Vf), 2, warm);
    CHECK(hot.eigenvalues[0] == doctest::Approx(cold.eigenvalues[0]).epsilon(1e-8));
    CHECK(hot.iterations <= cold.iterations);
}
