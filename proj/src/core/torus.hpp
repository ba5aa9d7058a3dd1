#pragma once

// Fields on the period-2L torus obtained by even/odd reflection of box
// fields. All rough-product machinery (multipliers, gradients, dealiased
// pointwise products, Littlewood-Paley filters) lives here; box operations
// extend, compute, restrict.
//
// The torus grid has n = 2(N-1) points per axis at the same spacing as the
// box grid, so restriction is plain decimation and recovers box fields
// bitwise.

#include <complex>
#include <functional>
#include <vector>

#include "grid.hpp"

namespace pam {

struct TorusField {
    double L = 1.0;  // half period; the torus has period 2L
    int n = 0;       // points per axis
    std::vector<double> v;

    TorusField() = default;
    TorusField(double L_, int n_) : L(L_), n(n_), v(size_t(n_) * n_, 0.0) {}
    double& at(int i, int j) { return v[size_t(i) * n + j]; }
    double at(int i, int j) const { return v[size_t(i) * n + j]; }
};

// Half-complex spectrum of a real torus field: n rows x (n/2+1) columns,
// row index a is signed frequency (a > n/2 means a - n).
struct TorusSpec {
    double L = 1.0;
    int n = 0;
    std::vector<std::complex<double>> c;

    TorusSpec() = default;
    TorusSpec(double L_, int n_) : L(L_), n(n_), c(size_t(n_) * (n_ / 2 + 1)) {}
    int cols() const { return n / 2 + 1; }
    std::complex<double>& at(int a, int b) { return c[size_t(a) * cols() + b]; }
    std::complex<double> at(int a, int b) const { return c[size_t(a) * cols() + b]; }
};

TorusField even_extension(const GridField& f);
TorusField odd_extension(const GridField& f);
// Extension matching the field's boundary flavor (Neumann: even, Dirichlet: odd).
TorusField extend(const GridField& f);

// Decimates back to the box grid; `boundary` tags the result.
GridField restrict_to_box(const TorusField& t, Boundary boundary);

TorusSpec torus_fft(const TorusField& f);
TorusField torus_ifft(const TorusSpec& s);

// Multiplier m(k1/L, k2/L) with real even m (applied at signed frequencies).
void apply_torus_multiplier(TorusSpec& s, const std::function<double(double, double)>& m);

// Spectral d/dx_axis; the Nyquist line is zeroed to keep the field real.
TorusSpec torus_derivative(const TorusSpec& s, int axis);

// Exact pointwise product of the two band-limited interpolants, sampled on
// the torus grid: both factors are zero-padded to a 2n grid, multiplied
// there, and decimated back.
TorusField product_pointwise(const TorusSpec& a, const TorusSpec& b);

// Same product but band-truncated to the n-grid spectrum (the alias-free
// projection P_M(fg) used by the paracontrolled algebra).
TorusSpec product_truncated(const TorusSpec& a, const TorusSpec& b);

// Nyquist-split embedding into the doubled spectrum and its band-truncating
// inverse (exposed for tests).
TorusSpec embed_double(const TorusSpec& s);
TorusSpec extract_half(const TorusSpec& big, double L);

} // namespace pam
