#include "doctest.h"

#include <cmath>
#include <random>

#include "core/grid.hpp"
#include "core/lp.hpp"
#include "core/rng.hpp"
#include "core/spectral.hpp"
#include "core/torus.hpp"

using namespace pam;

namespace {

GridField random_field(const BoxSpec& box, uint64_t seed) {
    GridField f(box);
    for (int i = 0; i < box.N; ++i)
        for (int j = 0; j < box.N; ++j)
            f.at(i, j) = normal_one(seed, 7u, uint32_t(i), uint32_t(j), 0);
    if (box.boundary == Boundary::Dirichlet) {
        const int M = box.N - 1;
        for (int i = 0; i < box.N; ++i) {
            f.at(0, i) = f.at(M, i) = 0.0;
            f.at(i, 0) = f.at(i, M) = 0.0;
        }
    }
    return f;
}

double rel_max_err(const GridField& a, const GridField& b) {
    double m = 0.0, scale = 0.0;
    for (size_t i = 0; i < a.values.size(); ++i) {
        m = std::max(m, std::fabs(a.values[i] - b.values[i]));
        scale = std::max(scale, std::fabs(b.values[i]));
    }
    return m / std::max(scale, 1e-300);
}

} // namespace

TEST_CASE("basis mode transforms to a unit coefficient") {
    for (Boundary bc : {Boundary::Neumann, Boundary::Dirichlet}) {
        BoxSpec box(2.0, 17, bc);
        const int k1 = (bc == Boundary::Neumann) ? 1 : 2;
        const GridField f = basis_mode(box, k1, bc == Boundary::Neumann ? 0 : 3);
        const SpectralField s = forward_transform(f);
        for (int a = 0; a < box.N; ++a)
            for (int b = 0; b < box.N; ++b) {
                const double want =
                    (a == k1 && b == (bc == Boundary::Neumann ? 0 : 3)) ? 1.0 : 0.0;
                CHECK(std::fabs(s.at(a, b) - want) < 1e-12);
            }
    }
}

TEST_CASE("zero field has zero coefficients and back") {
    BoxSpec box(1.5, 9, Boundary::Neumann);
    GridField z(box);
    const SpectralField s = forward_transform(z);
    for (double c : s.coeffs) CHECK(c == 0.0);
    const GridField back = inverse_transform(s);
    for (double v : back.values) CHECK(v == 0.0);
}

TEST_CASE("unit constant-mode coefficient inverts to the constant 1/L") {
    BoxSpec box(2.5, 9, Boundary::Neumann);
    SpectralField s(box);
    s.at(0, 0) = 1.0;
    const GridField f = inverse_transform(s);
    for (double v : f.values) CHECK(std::fabs(v - 1.0 / box.L) < 1e-13);
}

TEST_CASE("roundtrip on seeded random fields, all contract grids") {
    for (int N : {33, 65, 129, 257}) {
        for (Boundary bc : {Boundary::Neumann, Boundary::Dirichlet}) {
            BoxSpec box(4.0, N, bc);
            int worst_seed_checked = 0;
            double worst = 0.0;
            const int nseeds = (N <= 65) ? 25 : 5;
            for (int s = 0; s < nseeds; ++s) {
                const GridField f = random_field(box, 1000 + s);
                const GridField g = inverse_transform(forward_transform(f));
                worst = std::max(worst, rel_max_err(g, f));
                ++worst_seed_checked;
            }
            CAPTURE(N);
            CHECK(worst <= 1e-10);
            CHECK(worst_seed_checked > 0);
        }
    }
}

TEST_CASE("Parseval: grid L2 equals coefficient l2") {
    for (Boundary bc : {Boundary::Neumann, Boundary::Dirichlet}) {
        BoxSpec box(3.0, 65, bc);
        const GridField f = random_field(box, 42);
        const double a = norm_l2(f);
        const double b = coeff_l2(forward_transform(f));
        CHECK(std::fabs(a - b) <= 1e-10 * b);
    }
}

TEST_CASE("multiplier: sigma on a single mode, identity, and Laplacian eigenrelation") {
    BoxSpec box(2.0, 33, Boundary::Neumann);
    const int k1 = 3, k2 = 5;
    const GridField mode = basis_mode(box, k1, k2);
    SpectralField s = forward_transform(mode);

    const SpectralField sig = apply_multiplier(s, sigma_multiplier);
    const double want = 1.0 / (1.0 + 0.5 * M_PI * M_PI *
                                         (k1 * k1 + k2 * k2) / (box.L * box.L));
    CHECK(std::fabs(sig.at(k1, k2) - want) < 1e-12);

    const SpectralField ident = apply_multiplier(s, [](double, double) { return 1.0; });
    for (size_t i = 0; i < s.coeffs.size(); ++i) CHECK(ident.coeffs[i] == s.coeffs[i]);

    // -Lap n_k = pi^2 |k/L|^2 n_k: compare multiplier m(x) = pi^2 |x|^2 against
    // the analytic eigenvalue on the mode.
    const SpectralField lap = apply_multiplier(s, [](double x1, double x2) {
        return M_PI * M_PI * (x1 * x1 + x2 * x2);
    });
    const double eig = M_PI * M_PI * (k1 * k1 + k2 * k2) / (box.L * box.L);
    const GridField lhs = inverse_transform(lap);
    CHECK(rel_max_err(lhs, eig * mode) < 1e-11);
}

TEST_CASE("multiplier composition equals product multiplier exactly") {
    BoxSpec box(2.0, 17, Boundary::Neumann);
    const GridField f = random_field(box, 5);
    SpectralField s = forward_transform(f);
    auto m1 = [](double x1, double x2) { return 1.0 / (1.0 + x1 * x1 + x2); };
    auto m2 = [](double x1, double x2) { return std::cos(x1) + x2 * x2; };
    const SpectralField a = apply_multiplier(apply_multiplier(s, m1), m2);
    const SpectralField b = apply_multiplier(
        s, [&](double x1, double x2) { return m1(x1, x2) * m2(x1, x2); });
    for (size_t i = 0; i < a.coeffs.size(); ++i) {
        // m1 then m2 is the same floating product as (m2*m1) pointwise
        CHECK(a.coeffs[i] == doctest::Approx(b.coeffs[i]).epsilon(1e-15));
    }
}

TEST_CASE("even/odd extension restricts back bitwise") {
    BoxSpec nb(2.0, 17, Boundary::Neumann);
    const GridField f = random_field(nb, 9);
    const GridField back = restrict_to_box(even_extension(f), Boundary::Neumann);
    for (size_t i = 0; i < f.values.size(); ++i) CHECK(back.values[i] == f.values[i]);

    BoxSpec db(2.0, 17, Boundary::Dirichlet);
    const GridField g = random_field(db, 10);
    const GridField gb = restrict_to_box(odd_extension(g), Boundary::Dirichlet);
    for (size_t i = 0; i < g.values.size(); ++i) CHECK(gb.values[i] == g.values[i]);
}

TEST_CASE("even extension of a constant is constant; extension has the reflective symmetry") {
    BoxSpec box(1.0, 9, Boundary::Neumann);
    GridField c(box);
    for (double& v : c.values) v = 3.25;
    const TorusField t = even_extension(c);
    for (double v : t.v) CHECK(v == 3.25);

    const GridField f = random_field(box, 11);
    const TorusField e = even_extension(f);
    const int n = e.n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            CHECK(e.at(i, j) == e.at((n - i) % n, (n - j) % n));
}

TEST_CASE("basis mode extends to its cosine continuation") {
    BoxSpec box(2.0, 9, Boundary::Neumann);
    const int k1 = 2, k2 = 1, M = box.N - 1;
    const TorusField t = even_extension(basis_mode(box, k1, k2));
    const double a = neumann_mode_scale(box, k1) * neumann_mode_scale(box, k2);
    for (int i = 0; i < t.n; ++i)
        for (int j = 0; j < t.n; ++j) {
            const double want = a * std::cos(M_PI * k1 * i / double(M)) *
                                std::cos(M_PI * k2 * j / double(M));
            CHECK(std::fabs(t.at(i, j) - want) < 1e-12);
        }
}

TEST_CASE("torus embed/extract roundtrip and padded products are exact") {
    BoxSpec box(2.0, 17, Boundary::Neumann);
    const GridField u = random_field(box, 21), v = random_field(box, 22);
    const TorusSpec a = torus_fft(even_extension(u)), b = torus_fft(even_extension(v));

    // embed then extract is the identity on spectra
    const TorusSpec rt = extract_half(embed_double(a), a.L);
    for (size_t i = 0; i < a.c.size(); ++i)
        CHECK(std::abs(rt.c[i] - a.c[i]) < 1e-10 * (1.0 + std::abs(a.c[i])));

    // pointwise product of the interpolants sampled on the torus grid equals
    // the plain grid product
    const TorusField p = product_pointwise(a, b);
    const TorusField ue = even_extension(u), ve = even_extension(v);
    for (size_t i = 0; i < p.v.size(); ++i)
        CHECK(std::fabs(p.v[i] - ue.v[i] * ve.v[i]) < 1e-10);
}

TEST_CASE("LP blocks: constant in block -1, partition of unity, mode localization") {
    BoxSpec box(2.0, 33, Boundary::Neumann);

    GridField c(box);
    for (double& v : c.values) v = -1.75;
    const LPDecomposition dc = lp_decompose(c);
    for (size_t i = 0; i < c.values.size(); ++i)
        CHECK(std::fabs(dc.block(-1).values[i] - c.values[i]) < 1e-12);
    for (int i = 0; i <= dc.J; ++i) CHECK(norm_max(dc.block(i)) < 1e-12);

    const GridField f = random_field(box, 31);
    const LPDecomposition d = lp_decompose(f);
    GridField sum(box);
    for (int i = -1; i <= d.J; ++i) sum += d.block(i);
    CHECK(rel_max_err(sum, f) <= 1e-10);

    // mode with |k|/L ~ 2^i concentrates in blocks i-1..i+1
    const int J = lp_top_block(box);
    const int i0 = 2;
    const int k = int(std::round(std::ldexp(1.0, i0) * box.L));  // |k|/L = 2^i0
    const GridField mode = basis_mode(box, k, 0);
    double in_band = 0.0, total = 0.0;
    const LPDecomposition dm = lp_decompose(mode);
    for (int i = -1; i <= J; ++i) {
        const double e = inner(dm.block(i), dm.block(i));
        total += e;
        if (std::abs(i - i0) <= 1) in_band += e;
    }
    CHECK(in_band / total >= 0.99);
}

TEST_CASE("besov norm: zero, homogeneity, subadditivity, single-mode value") {
    BoxSpec box(2.0, 33, Boundary::Neumann);
    GridField z(box);
    CHECK(besov_norm(z, 0.5, 2.0, INFINITY) == 0.0);

    const GridField f = random_field(box, 41), g = random_field(box, 43);
    const double nf = besov_norm(f, -0.5, INFINITY, INFINITY);
    CHECK(besov_norm(-2.5 * f + 0.0 * f, -0.5, INFINITY, INFINITY) ==
          doctest::Approx(2.5 * nf).epsilon(1e-12));
    CHECK(besov_norm(f + g, -0.5, INFINITY, INFINITY) <=
          besov_norm(f, -0.5, INFINITY, INFINITY) +
              besov_norm(g, -0.5, INFINITY, INFINITY) + 1e-12);

    const int k = 6;
    const GridField mode = basis_mode(box, k, 0);
    const double nb = besov_norm(mode, 0.0, INFINITY, INFINITY);
    const double sup = norm_max(mode);
    CHECK(nb >= sup / 4.0);
    CHECK(nb <= 4.0 * sup);
}

TEST_CASE("field save/load/csv roundtrip") {
    BoxSpec box(2.0, 9, Boundary::Dirichlet);
    const GridField f = random_field(box, 77);
    const std::string path = "/tmp/pam_test_field.bin";
    save_field(f, path);
    const GridField g = load_field(path);
    CHECK(g.box.N == f.box.N);
    CHECK(g.box.L == f.box.L);
    CHECK(g.box.boundary == f.box.boundary);
    for (size_t i = 0; i < f.values.size(); ++i) CHECK(g.values[i] == f.values[i]);
    export_field_csv(f, "/tmp/pam_test_field.csv");
}
