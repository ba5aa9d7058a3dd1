#include "grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <limits>

namespace pam {

bool GridField::finite() const {
    for (double v : values)
        if (!std::isfinite(v)) return false;
    return true;
}

GridField& GridField::operator+=(const GridField& o) {
    if (!box.same_grid(o.box)) throw Error("GridField: grid mismatch");
    for (size_t i = 0; i < values.size(); ++i) values[i] += o.values[i];
    return *this;
}

GridField& GridField::operator-=(const GridField& o) {
    if (!box.same_grid(o.box)) throw Error("GridField: grid mismatch");
    for (size_t i = 0; i < values.size(); ++i) values[i] -= o.values[i];
    return *this;
}

GridField& GridField::operator*=(double c) {
    for (double& v : values) v *= c;
    return *this;
}

GridField operator+(GridField a, const GridField& b) { a += b; return a; }
GridField operator-(GridField a, const GridField& b) { a -= b; return a; }
GridField operator*(double c, GridField a) { a *= c; return a; }

namespace {
inline double trapz_weight(const BoxSpec& box, int i, int j) {
    const int M = box.N - 1;
    double w = 1.0;
    if (i == 0 || i == M) w *= 0.5;
    if (j == 0 || j == M) w *= 0.5;
    return w;
}
} // namespace

double integral(const GridField& f) {
    const int N = f.box.N;
    const double h2 = f.box.dx() * f.box.dx();
    double s = 0.0;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            s += trapz_weight(f.box, i, j) * f.at(i, j);
    return s * h2;
}

double inner(const GridField& f, const GridField& g) {
    if (!f.box.same_grid(g.box)) throw Error("inner: grid mismatch");
    const int N = f.box.N;
    const double h2 = f.box.dx() * f.box.dx();
    double s = 0.0;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            s += trapz_weight(f.box, i, j) * f.at(i, j) * g.at(i, j);
    return s * h2;
}

double norm_l2(const GridField& f) { return std::sqrt(std::max(0.0, inner(f, f))); }

double norm_lp(const GridField& f, double p) {
    if (std::isinf(p)) return norm_max(f);
    if (p < 1.0) throw Error("norm_lp: p must be >= 1");
    const int N = f.box.N;
    const double h2 = f.box.dx() * f.box.dx();
    double s = 0.0;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            s += trapz_weight(f.box, i, j) * std::pow(std::fabs(f.at(i, j)), p);
    return std::pow(s * h2, 1.0 / p);
}

double norm_max(const GridField& f) {
    double m = 0.0;
    for (double v : f.values) m = std::max(m, std::fabs(v));
    return m;
}

double coeff_l2(const SpectralField& s) {
    double acc = 0.0;
    for (double c : s.coeffs) acc += c * c;
    return std::sqrt(acc);
}

double bilinear_at(const GridField& f, double x, double y) {
    const BoxSpec& b = f.box;
    const double gx = std::clamp((x + 0.5 * b.L) / b.dx(), 0.0, double(b.N - 1));
    const double gy = std::clamp((y + 0.5 * b.L) / b.dx(), 0.0, double(b.N - 1));
    const int i = std::min(int(gx), b.N - 2), j = std::min(int(gy), b.N - 2);
    const double fx = gx - i, fy = gy - j;
    return f.at(i, j) * (1 - fx) * (1 - fy) + f.at(i + 1, j) * fx * (1 - fy) +
           f.at(i, j + 1) * (1 - fx) * fy + f.at(i + 1, j + 1) * fx * fy;
}

double neumann_mode_scale(const BoxSpec& box, int k) {
    const int M = box.N - 1;
    return (k == 0 || k == M) ? std::sqrt(1.0 / box.L) : std::sqrt(2.0 / box.L);
}

GridField basis_mode(const BoxSpec& box, int k1, int k2) {
    const int N = box.N, M = N - 1;
    GridField f(box);
    if (box.boundary == Boundary::Neumann) {
        const double a = neumann_mode_scale(box, k1) * neumann_mode_scale(box, k2);
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j)
                f.at(i, j) = a * std::cos(M_PI * k1 * i / double(M)) *
                                 std::cos(M_PI * k2 * j / double(M));
    } else {
        if (k1 < 1 || k1 > M - 1 || k2 < 1 || k2 > M - 1)
            throw Error("basis_mode: Dirichlet mode out of range");
        const double a = 2.0 / box.L;
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j)
                f.at(i, j) = a * std::sin(M_PI * k1 * i / double(M)) *
                                 std::sin(M_PI * k2 * j / double(M));
    }
    return f;
}

namespace {
constexpr char kMagic[8] = {'P', 'A', 'M', 'F', 'L', 'D', '0', '1'};

struct FileCloser {
    FILE* f;
    ~FileCloser() { if (f) std::fclose(f); }
};
} // namespace

void save_field(const GridField& f, const std::string& path) {
    FILE* fp = std::fopen(path.c_str(), "wb");
    if (!fp) throw Error("save_field: cannot open " + path);
    FileCloser closer{fp};
    unsigned char header[32] = {0};
    std::memcpy(header, kMagic, 8);
    const uint32_t n = uint32_t(f.box.N);
    const uint32_t b = uint32_t(f.box.boundary);
    std::memcpy(header + 8, &n, 4);
    std::memcpy(header + 12, &b, 4);
    std::memcpy(header + 16, &f.box.L, 8);
    if (std::fwrite(header, 1, 32, fp) != 32 ||
        std::fwrite(f.values.data(), 8, f.values.size(), fp) != f.values.size())
        throw Error("save_field: write failed for " + path);
}

GridField load_field(const std::string& path) {
    FILE* fp = std::fopen(path.c_str(), "rb");
    if (!fp) throw Error("load_field: cannot open " + path);
    FileCloser closer{fp};
    unsigned char header[32];
    if (std::fread(header, 1, 32, fp) != 32 || std::memcmp(header, kMagic, 8) != 0)
        throw Error("load_field: bad header in " + path);
    uint32_t n = 0, b = 0;
    double L = 0.0;
    std::memcpy(&n, header + 8, 4);
    std::memcpy(&b, header + 12, 4);
    std::memcpy(&L, header + 16, 8);
    if (b > 1) throw Error("load_field: bad boundary flag");
    GridField f(BoxSpec(L, int(n), Boundary(b)));
    if (std::fread(f.values.data(), 8, f.values.size(), fp) != f.values.size())
        throw Error("load_field: truncated data in " + path);
    return f;
}

void export_field_csv(const GridField& f, const std::string& path) {
    FILE* fp = std::fopen(path.c_str(), "w");
    if (!fp) throw Error("export_field_csv: cannot open " + path);
    FileCloser closer{fp};
    std::fprintf(fp, "x,y,value\n");
    const int N = f.box.N;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            std::fprintf(fp, "%.17g,%.17g,%.17g\n", f.box.x(i), f.box.x(j), f.at(i, j));
}

} // namespace pam
