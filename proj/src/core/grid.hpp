#pragma once

// Discrete function spaces on the square box Q_L = [-L/2, L/2]^2.
//
// Grids are collocated with both endpoints: N points per axis, dx = L/(N-1).
// Neumann fields use the cosine (DCT-I) basis, Dirichlet fields the sine
// (DST-I) basis. Coefficients are inner products against the discrete
// orthonormal basis under the trapezoid inner product, so Parseval and
// roundtrips hold to machine precision.

#include <cstdint>
#include <string>
#include <vector>
#include <stdexcept>

namespace pam {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

enum class Boundary : uint32_t { Neumann = 0, Dirichlet = 1 };

struct BoxSpec {
    double L = 1.0;        // box side, >= 1
    int N = 0;             // lattice points per axis, >= 8
    Boundary boundary = Boundary::Neumann;

    BoxSpec() = default;
    BoxSpec(double L_, int N_, Boundary b) : L(L_), N(N_), boundary(b) { validate(); }

    void validate() const {
        if (N < 8) throw Error("BoxSpec: N must be >= 8");
        if (L < 1.0) throw Error("BoxSpec: L must be >= 1");
    }
    int modes() const { return N; }            // k = 0..N-1 per axis (cosine)
    double dx() const { return L / double(N - 1); }
    double x(int i) const { return -0.5 * L + dx() * i; }
    bool operator==(const BoxSpec& o) const {
        return L == o.L && N == o.N && boundary == o.boundary;
    }
    bool same_grid(const BoxSpec& o) const { return L == o.L && N == o.N; }
};

// Real field sampled on the N x N lattice, row-major: values[i*N + j] is the
// sample at (x(i), x(j)).
struct GridField {
    BoxSpec box;
    std::vector<double> values;

    GridField() = default;
    explicit GridField(const BoxSpec& b) : box(b), values(size_t(b.N) * b.N, 0.0) {}
    GridField(const BoxSpec& b, std::vector<double> v) : box(b), values(std::move(v)) {
        if (values.size() != size_t(b.N) * b.N) throw Error("GridField: size mismatch");
    }

    double& at(int i, int j) { return values[size_t(i) * box.N + j]; }
    double at(int i, int j) const { return values[size_t(i) * box.N + j]; }
    size_t size() const { return values.size(); }
    bool finite() const;

    GridField& operator+=(const GridField& o);
    GridField& operator-=(const GridField& o);
    GridField& operator*=(double c);
};

GridField operator+(GridField a, const GridField& b);
GridField operator-(GridField a, const GridField& b);
GridField operator*(double c, GridField a);

// Trig-basis coefficients, truncated at the grid Nyquist. Neumann: cosine
// modes k in [0, N-1]^2. Dirichlet: sine modes k in [1, N-2]^2, stored in the
// same N x N array with zero border rows/columns.
struct SpectralField {
    BoxSpec box;
    std::vector<double> coeffs;

    SpectralField() = default;
    explicit SpectralField(const BoxSpec& b) : box(b), coeffs(size_t(b.N) * b.N, 0.0) {}

    double& at(int k1, int k2) { return coeffs[size_t(k1) * box.N + k2]; }
    double at(int k1, int k2) const { return coeffs[size_t(k1) * box.N + k2]; }
};

// Trapezoid quadrature over Q_L (Neumann fields; halves the boundary).
// For Dirichlet fields boundary values are zero so the same rule applies.
double integral(const GridField& f);
double inner(const GridField& f, const GridField& g);  // L^2 inner product
double norm_l2(const GridField& f);
double norm_lp(const GridField& f, double p);           // p >= 1 or inf
double norm_max(const GridField& f);

double coeff_l2(const SpectralField& s);

// Bilinear interpolation of f at (x, y), clamped to the box.
double bilinear_at(const GridField& f, double x, double y);

// Orthonormal-mode amplitude for axis mode k on an N-point grid:
// sqrt(2/L) for 0 < k < N-1, sqrt(1/L) for k in {0, N-1} (cosine flavor).
double neumann_mode_scale(const BoxSpec& box, int k);

// Samples the (2D) orthonormal basis function on the grid.
GridField basis_mode(const BoxSpec& box, int k1, int k2);

// Serialization: 32-byte header (8-byte magic "PAMFLD01", uint32 N, uint32
// boundary, double L, 8 reserved bytes) followed by row-major 8-byte
// little-endian reals; plus a CSV export (columns x,y,value) for plotting.
void save_field(const GridField& f, const std::string& path);
GridField load_field(const std::string& path);
void export_field_csv(const GridField& f, const std::string& path);

} // namespace pam
