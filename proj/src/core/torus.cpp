#include "torus.hpp"

#include <cmath>

#include "transforms.hpp"

namespace pam {

namespace {
inline int reflect_even(int j, int M) { return j <= M ? j : 2 * M - j; }
} // namespace

TorusField even_extension(const GridField& f) {
    const int N = f.box.N, M = N - 1, n = 2 * M;
    TorusField t(f.box.L, n);
    for (int i = 0; i < n; ++i) {
        const int ii = reflect_even(i, M);
        for (int j = 0; j < n; ++j) t.at(i, j) = f.at(ii, reflect_even(j, M));
    }
    return t;
}

TorusField odd_extension(const GridField& f) {
    const int N = f.box.N, M = N - 1, n = 2 * M;
    TorusField t(f.box.L, n);
    for (int i = 0; i < n; ++i) {
        const int ii = reflect_even(i, M);
        const double si = (i > M) ? -1.0 : 1.0;
        for (int j = 0; j < n; ++j) {
            const double sj = (j > M) ? -1.0 : 1.0;
            double v = si * sj * f.at(ii, reflect_even(j, M));
            if ((i == 0 || i == M) || (j == 0 || j == M)) {
                // reflection planes of the odd extension carry the value 0
                if (i == 0 || i == M) v = 0.0;
                if (j == 0 || j == M) v = 0.0;
            }
            t.at(i, j) = v;
        }
    }
    return t;
}

TorusField extend(const GridField& f) {
    return f.box.boundary == Boundary::Neumann ? even_extension(f) : odd_extension(f);
}

GridField restrict_to_box(const TorusField& t, Boundary boundary) {
    const int M = t.n / 2, N = M + 1;
    GridField f(BoxSpec(t.L, N, boundary));
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) f.at(i, j) = t.at(i, j);
    return f;
}

TorusSpec torus_fft(const TorusField& f) {
    TorusSpec s(f.L, f.n);
    tf::fft2_r2c(f.v.data(), s.c.data(), f.n);
    return s;
}

TorusField torus_ifft(const TorusSpec& s) {
    TorusField f(s.L, s.n);
    tf::fft2_c2r(s.c.data(), f.v.data(), s.n);
    return f;
}

void apply_torus_multiplier(TorusSpec& s, const std::function<double(double, double)>& m) {
    const int n = s.n, half = n / 2;
    const double invL = 1.0 / s.L;
    for (int a = 0; a < n; ++a) {
        const int m1 = (a <= half) ? a : a - n;
        for (int b = 0; b <= half; ++b) {
            const double v = m(m1 * invL, b * invL);
            if (!std::isfinite(v)) throw Error("apply_torus_multiplier: not finite");
            s.at(a, b) *= v;
        }
    }
}

TorusSpec torus_derivative(const TorusSpec& s, int axis) {
    TorusSpec out = s;
    const int n = s.n, half = n / 2;
    const double w = M_PI / s.L;
    for (int a = 0; a < n; ++a) {
        const int m1 = (a <= half) ? a : a - n;
        for (int b = 0; b <= half; ++b) {
            const int k = (axis == 0) ? m1 : b;
            std::complex<double> factor(0.0, w * k);
            if ((axis == 0 && std::abs(m1) == half) || (axis == 1 && b == half))
                factor = 0.0;  // Nyquist derivative dropped, keeps realness
            out.at(a, b) = s.at(a, b) * factor;
        }
    }
    return out;
}

// Zero-padding a half-complex spectrum: Nyquist rows split across +-M, the
// Nyquist column keeps its slot (the mirrored row supplies the conjugate
// partner), and the corner gets quarter weight per the per-axis rule.
TorusSpec embed_double(const TorusSpec& s) {
    const int n = s.n, half = n / 2, np = 2 * n;
    TorusSpec big(s.L, np);
    for (int a = 0; a < n; ++a) {
        const int m1 = (a <= half) ? a : a - n;
        for (int b = 0; b <= half; ++b) {
            double w = 4.0;  // np^2 / n^2 keeps the interpolant's sample values
            if (a == half) w *= 0.5;
            if (b == half) w *= 0.5;
            const std::complex<double> v = w * s.at(a, b);
            if (a == half) {
                big.at(half, b) += v;
                big.at(np - half, b) += v;
            } else {
                big.at((m1 + np) % np, b) += v;
            }
        }
    }
    return big;
}

TorusSpec extract_half(const TorusSpec& big, double L) {
    const int np = big.n, n = np / 2, half = n / 2;
    TorusSpec s(L, n);
    for (int a = 0; a < n; ++a) {
        const int m1 = (a <= half) ? a : a - n;
        for (int b = 0; b <= half; ++b) {
            std::complex<double> v;
            if (a != half && b != half) {
                v = big.at((m1 + np) % np, b);
            } else if (a == half && b != half) {
                v = big.at(half, b) + big.at(np - half, b);
            } else if (a != half && b == half) {
                v = big.at((m1 + np) % np, half) +
                    std::conj(big.at((np - m1) % np, half));
            } else {
                v = 2.0 * (big.at(half, half) + big.at(np - half, half)).real();
            }
            s.at(a, b) = 0.25 * v;
        }
    }
    return s;
}

namespace {

TorusField padded_product_values(const TorusSpec& a, const TorusSpec& b) {
    if (a.n != b.n) throw Error("product: size mismatch");
    const TorusSpec ba = embed_double(a), bb = embed_double(b);
    TorusField fa = torus_ifft(ba), fb = torus_ifft(bb);
    for (size_t i = 0; i < fa.v.size(); ++i) fa.v[i] *= fb.v[i];
    return fa;
}

} // namespace

TorusField product_pointwise(const TorusSpec& a, const TorusSpec& b) {
    const TorusField big = padded_product_values(a, b);
    TorusField out(a.L, a.n);
    for (int i = 0; i < a.n; ++i)
        for (int j = 0; j < a.n; ++j) out.at(i, j) = big.at(2 * i, 2 * j);
    return out;
}

TorusSpec product_truncated(const TorusSpec& a, const TorusSpec& b) {
    const TorusField big = padded_product_values(a, b);
    return extract_half(torus_fft(big), a.L);
}

} // namespace pam
