#include "spectral.hpp"

#include <cmath>

#include "transforms.hpp"

namespace pam {

SpectralField forward_transform(const GridField& field) {
    if (!field.finite()) throw Error("forward_transform: field not finite");
    const BoxSpec& box = field.box;
    const int N = box.N, M = N - 1;
    SpectralField out(box);
    if (box.boundary == Boundary::Neumann) {
        std::vector<double> t(size_t(N) * N);
        tf::dct1_2d(field.values.data(), t.data(), N, N);
        const double q = box.dx() * box.dx() * 0.25;
        for (int k1 = 0; k1 < N; ++k1) {
            const double a1 = neumann_mode_scale(box, k1);
            for (int k2 = 0; k2 < N; ++k2)
                out.at(k1, k2) = q * a1 * neumann_mode_scale(box, k2) * t[size_t(k1) * N + k2];
        }
    } else {
        const int m = N - 2;
        std::vector<double> in(size_t(m) * m), t(size_t(m) * m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                in[size_t(i) * m + j] = field.at(i + 1, j + 1);
        tf::dst1_2d(in.data(), t.data(), m, m);
        const double q = box.dx() * box.dx() * 0.5 / box.L;
        for (int k1 = 1; k1 <= M - 1; ++k1)
            for (int k2 = 1; k2 <= M - 1; ++k2)
                out.at(k1, k2) = q * t[size_t(k1 - 1) * m + (k2 - 1)];
    }
    return out;
}

GridField inverse_transform(const SpectralField& spec) {
    const BoxSpec& box = spec.box;
    const int N = box.N, M = N - 1;
    GridField out(box);
    if (box.boundary == Boundary::Neumann) {
        // Endpoint coefficient rows enter REDFT00 at full weight, interior at half.
        std::vector<double> b(size_t(N) * N), t(size_t(N) * N);
        for (int k1 = 0; k1 < N; ++k1) {
            const double w1 = (k1 == 0 || k1 == M) ? 1.0 : 0.5;
            const double a1 = neumann_mode_scale(box, k1);
            for (int k2 = 0; k2 < N; ++k2) {
                const double w2 = (k2 == 0 || k2 == M) ? 1.0 : 0.5;
                b[size_t(k1) * N + k2] =
                    w1 * w2 * a1 * neumann_mode_scale(box, k2) * spec.at(k1, k2);
            }
        }
        tf::dct1_2d(b.data(), t.data(), N, N);
        out.values = std::move(t);
    } else {
        const int m = N - 2;
        std::vector<double> b(size_t(m) * m), t(size_t(m) * m);
        for (int k1 = 1; k1 <= M - 1; ++k1)
            for (int k2 = 1; k2 <= M - 1; ++k2)
                b[size_t(k1 - 1) * m + (k2 - 1)] = spec.at(k1, k2);
        tf::dst1_2d(b.data(), t.data(), m, m);
        const double q = 0.5 / box.L;
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                out.at(i + 1, j + 1) = q * t[size_t(i) * m + j];
    }
    return out;
}

SpectralField apply_multiplier(const SpectralField& spec, const Multiplier& m) {
    const BoxSpec& box = spec.box;
    SpectralField out(box);
    const double invL = 1.0 / box.L;
    for (int k1 = 0; k1 < box.N; ++k1)
        for (int k2 = 0; k2 < box.N; ++k2) {
            const double v = m(k1 * invL, k2 * invL);
            if (!std::isfinite(v)) throw Error("apply_multiplier: multiplier not finite");
            out.at(k1, k2) = v * spec.at(k1, k2);
        }
    return out;
}

double sigma_multiplier(double x1, double x2) {
    return 1.0 / (1.0 + 0.5 * M_PI * M_PI * (x1 * x1 + x2 * x2));
}

double resolvent_multiplier(double eta, double x1, double x2) {
    return 1.0 / (eta + 0.5 * M_PI * M_PI * (x1 * x1 + x2 * x2));
}

} // namespace pam
