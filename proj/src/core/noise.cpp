#include "noise.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "linalg.hpp"
#include "lp.hpp"
#include "paraprod.hpp"
#include "rng.hpp"
#include "smoothfuncs.hpp"
#include "spectral.hpp"

namespace pam {

namespace {
constexpr uint32_t kNoiseStream = 0xA11CE5u;
} // namespace

NoiseCoeffs sample_white_noise(const BoxSpec& box, uint64_t seed) {
    if (box.boundary != Boundary::Neumann)
        throw Error("sample_white_noise: noise lives in the Neumann basis");
    NoiseCoeffs nc;
    nc.box = box;
    nc.seed = seed;
    nc.gaussians.resize(size_t(box.N) * box.N);
    for (int k1 = 0; k1 < box.N; ++k1)
        for (int k2 = 0; k2 < box.N; ++k2)
            nc.gaussians[size_t(k1) * box.N + k2] =
                normal_one(seed, kNoiseStream, uint32_t(k1), uint32_t(k2), 0);
    return nc;
}

double tau_radial(double r) { return tau_cutoff(r); }

namespace {

// Table of G = phi * phi-check on [0,1]; evaluated once.
constexpr int kGTable = 8192;
const std::vector<double>& g_table() {
    static const std::vector<double> t = [] {
        std::vector<double> v(kGTable + 1);
        for (int i = 0; i <= kGTable; ++i) v[i] = phi_selfconv(double(i) / kGTable);
        return v;
    }();
    return t;
}

inline double g_lookup(double w) {
    w = std::fabs(w);
    if (w >= 1.0) return 0.0;
    const double x = w * kGTable;
    const int i = std::min(int(x), kGTable - 1);
    const double f = x - i;
    const auto& t = g_table();
    return t[i] * (1.0 - f) + t[i + 1] * f;
}

// Composite Simpson over [0,1] on the G-table nodes against a weight.
template <typename W>
double g_quad(W&& weight, int panels) {
    const double h = 1.0 / (2 * panels);
    double s = g_lookup(0.0) * weight(0.0) + g_lookup(1.0) * weight(1.0);
    for (int i = 1; i < 2 * panels; ++i) {
        const double z = i * h;
        s += g_lookup(z) * weight(z) * ((i & 1) ? 4.0 : 2.0);
    }
    return s * h / 3.0;
}

} // namespace

double rho_profile(double x) {
    const int panels = 256 + 4 * int(std::fabs(x) / (2.0 * M_PI));
    return 2.0 * g_quad([x](double z) { return std::cos(x * z); }, panels);
}

GridField mollify_fourier(const NoiseCoeffs& nc, double eps) {
    if (eps <= 0.0) throw Error("mollify_fourier: eps must be positive");
    const BoxSpec& box = nc.box;
    SpectralField s(box);
    const double a = eps / box.L;
    for (int k1 = 0; k1 < box.N; ++k1)
        for (int k2 = 0; k2 < box.N; ++k2) {
            const double t = tau_radial(a * std::hypot(double(k1), double(k2)));
            s.at(k1, k2) = t * nc.g(k1, k2);
        }
    return inverse_transform(s);
}

namespace {

inline double mode_scale_1d(double L, int k) { return std::sqrt((k == 0 ? 1.0 : 2.0) / L); }

// f_{k,l}(z) = int cos(w k (z+v)) cos(w l v) dv over the overlap window,
// w = pi/L; closed forms per parity (zero integral when k+l is odd).
double f_kl(int k, int l, double z, double L) {
    const double w = M_PI / L;
    const double az = std::fabs(z);
    if (k == l) {
        if (k == 0) return L - az;
        return -std::sin(w * k * az) / (2.0 * w * k) + 0.5 * (L - az) * std::cos(w * k * z);
    }
    const double c = ((k + l) % 2 == 0) ? 1.0 : -1.0;
    const double denom = w * (double(k) * k - double(l) * l);
    if (z >= 0.0) return (c * l * std::sin(w * l * z) - k * std::sin(w * k * z)) / denom;
    return (c * k * std::sin(w * k * z) - l * std::sin(w * l * z)) / denom;
}

} // namespace

double covariance_kernel_1d(int k, int l, double eps, double L) {
    if (k < 0 || l < 0) throw Error("covariance_kernel_1d: negative mode");
    if ((k + l) % 2 == 1) return 0.0;  // odd symmetry kills the integral exactly
    // C_kl = c_k c_l Int_{-eps}^{eps} G_eps(z) f_kl(z) dz; substitute z = eps w
    // and use that the surviving integrand is even in w.
    const int panels = 96 + 4 * int(eps * (k + l) / L);
    const double val = 2.0 * g_quad([&](double u) { return f_kl(k, l, eps * u, L); }, panels);
    return mode_scale_1d(L, k) * mode_scale_1d(L, l) * val;
}

double covariance_kernel(int k1, int k2, int l1, int l2, double eps, double L) {
    return covariance_kernel_1d(k1, l1, eps, L) * covariance_kernel_1d(k2, l2, eps, L);
}

namespace {

struct CovKey {
    double L, eps;
    int N;
    bool operator<(const CovKey& o) const {
        if (L != o.L) return L < o.L;
        if (eps != o.eps) return eps < o.eps;
        return N < o.N;
    }
};

std::mutex g_cov_mutex;
std::map<CovKey, std::shared_ptr<const std::vector<double>>> g_cov_cache;

// Symmetric square root of the 1D mode covariance, cached per (L, N, eps).
std::shared_ptr<const std::vector<double>> cov_sqrt(const BoxSpec& box, double eps) {
    const CovKey key{box.L, eps, box.N};
    {
        std::lock_guard<std::mutex> lock(g_cov_mutex);
        auto it = g_cov_cache.find(key);
        if (it != g_cov_cache.end()) return it->second;
    }
    const int n = box.N;
    std::vector<double> c(size_t(n) * n, 0.0);
    for (int k = 0; k < n; ++k)
        for (int l = k; l < n; ++l) {
            const double v = covariance_kernel_1d(k, l, eps, box.L);
            c[size_t(k) * n + l] = v;
            c[size_t(l) * n + k] = v;
        }
    auto s = std::make_shared<const std::vector<double>>(sym_sqrt(std::move(c), n));
    std::lock_guard<std::mutex> lock(g_cov_mutex);
    auto [it, inserted] = g_cov_cache.emplace(key, std::move(s));
    return it->second;
}

} // namespace

GridField mollify_convolution(const NoiseCoeffs& nc, double eps) {
    if (eps <= 0.0) throw Error("mollify_convolution: eps must be positive");
    const BoxSpec& box = nc.box;
    const int n = box.N;
    const auto s = cov_sqrt(box, eps);
    // coeffs = S G S^T, tensorized per axis
    std::vector<double> tmp(size_t(n) * n);
    SpectralField out(box);
    matmul(s->data(), nc.gaussians.data(), tmp.data(), n);
    // out = tmp * S^T; S is symmetric so S^T = S
    matmul(tmp.data(), s->data(), out.coeffs.data(), n);
    return inverse_transform(out);
}

namespace {

// tau~^2 as a function of u = |eps k / L|^2 for the compact route (radial),
// tabulated on the transition annulus.
struct Tau2Table {
    static constexpr int kSize = 4096;
    std::vector<double> t;
    Tau2Table() : t(kSize + 1) {
        for (int i = 0; i <= kSize; ++i) {
            const double u = 0.25 + 0.75 * double(i) / kSize;
            const double v = tau_cutoff(std::sqrt(u));
            t[i] = v * v;
        }
    }
    double operator()(double u) const {
        if (u <= 0.25) return 1.0;
        if (u >= 1.0) return 0.0;
        const double x = (u - 0.25) / 0.75 * kSize;
        const int i = std::min(int(x), kSize - 1);
        const double f = x - i;
        return t[i] * (1.0 - f) + t[i + 1] * f;
    }
};

// Convolution-route mode amplitude rho(pi eps k / L), tabulated together
// with its monotone envelope (rho oscillates while it decays).
struct RhoTable {
    static constexpr int kSize = 32768;
    double xmax = 400.0;
    std::vector<double> t, env;
    RhoTable() : t(kSize + 1), env(kSize + 1) {
        for (int i = 0; i <= kSize; ++i) t[i] = std::max(0.0, rho_profile(xmax * i / kSize));
        env[kSize] = t[kSize];
        for (int i = kSize - 1; i >= 0; --i) env[i] = std::max(t[i], env[i + 1]);
    }
    double operator()(double x) const {
        x = std::fabs(x);
        if (x >= xmax) return 0.0;
        const double z = x / xmax * kSize;
        const int i = std::min(int(z), kSize - 1);
        const double f = z - i;
        return t[i] * (1.0 - f) + t[i + 1] * f;
    }
    double envelope(double x) const {
        x = std::fabs(x);
        if (x >= xmax) return env[kSize];
        return env[std::min(int(x / xmax * kSize) + 1, kSize)];
    }
};

const RhoTable& rho_table() {
    static const RhoTable t;
    return t;
}

struct Kahan {
    double s = 0.0, c = 0.0;
    void add(double x) {
        const double y = x - c;
        const double t = s + y;
        c = (t - s) - y;
        s = t;
    }
};

} // namespace

RenormExact renorm_constant_exact(double L, double eps, RenormTau route, double tail_tol) {
    if (eps <= 0.0) throw Error("renorm_constant_exact: eps must be positive");
    RenormExact out;
    const double a = eps / L;          // multiplier argument per unit mode
    const double hpref = 0.5 * M_PI * M_PI;
    Kahan acc;
    long terms = 0;

    if (route == RenormTau::CompactTau) {
        static const Tau2Table tau2;
        const double a2 = a * a;
        const long R = long(std::ceil(1.0 / a)) + 1;
        for (long k1 = 0; k1 <= R; ++k1) {
            const double m1 = (k1 == 0) ? 1.0 : 2.0;
            const double k1sq = double(k1) * k1;
            if (a2 * k1sq >= 1.0) break;
            for (long k2 = 0; k2 <= R; ++k2) {
                const double r2 = k1sq + double(k2) * k2;
                const double u = a2 * r2;
                if (u >= 1.0) break;
                const double m = m1 * ((k2 == 0) ? 1.0 : 2.0);
                acc.add(m * tau2(u) / (L * L + hpref * r2));
                ++terms;
            }
        }
        out.tail_bound = 0.0;  // compact support: the sum is exact
    } else {
        const RhoTable& rho = rho_table();
        const double b = M_PI * a;  // rho(pi eps k / L) per axis
        const long Rmax = long(std::ceil(rho.xmax / b)) + 1;
        // sup-norm shells |k|_inf = s, with the remainder bounded through the
        // monotone envelope: sum_{s>S} env(bs) * (shell h-mass) <=
        // env(bS) * (16/pi^2) * log(xmax/(bS)) up to constants.
        auto tail_at = [&](long S) {
            const double e = rho.envelope(b * double(S));
            const double logf = std::log(std::max(2.0, rho.xmax / std::max(b * S, 1e-12)));
            return 4.0 * e * (1.0 + (16.0 / (M_PI * M_PI)) * logf);
        };
        for (long s = 0; s <= Rmax; ++s) {
            // quadrant shell |k|_inf = s, folded onto the edge k1 = s by the
            // k1<->k2 swap symmetry: interior edge points count twice
            const double rs = rho(b * double(s));
            for (long k2 = 0; k2 <= s; ++k2) {
                const double v = rs * rho(b * double(k2));
                double m = (double(s == 0 ? 1 : 2)) * ((k2 == 0) ? 1.0 : 2.0);
                if (k2 < s) m *= 2.0;
                acc.add(m * v / (L * L + hpref * (double(s) * s + double(k2) * k2)));
                ++terms;
            }
            if (s >= 8 && tail_at(s) < tail_tol) {
                out.tail_bound = tail_at(s);
                break;
            }
            out.tail_bound = tail_at(s);
        }
        if (out.tail_bound > tail_tol)
            throw Error("renorm_constant_exact: tail bound above tolerance");
    }
    out.value = acc.s;
    out.terms = terms;
    return out;
}

RenormFit fit_renorm_intercept(double L, const std::vector<double>& eps_list, RenormTau route,
                               double tail_tol) {
    if (eps_list.size() < 2) throw Error("fit_renorm_intercept: need >= 2 eps values");
    std::vector<double> xs, ys;
    for (double e : eps_list) {
        xs.push_back(std::log(1.0 / e));
        ys.push_back(0.25 * renorm_constant_exact(L, e, route, tail_tol).value);
    }
    const size_t n = xs.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    RenormFit fit;
    const double det = n * sxx - sx * sx;
    fit.slope = (n * sxy - sx * sy) / det;
    fit.intercept = (sy * sxx - sx * sxy) / det;
    double ss_res = 0, ss_tot = 0;
    const double ym = sy / n;
    for (size_t i = 0; i < n; ++i) {
        const double pred = fit.slope * xs[i] + fit.intercept;
        ss_res += (ys[i] - pred) * (ys[i] - pred);
        ss_tot += (ys[i] - ym) * (ys[i] - ym);
    }
    fit.r2 = 1.0 - ss_res / ss_tot;
    return fit;
}

double renorm_constant_exact_custom(double L, double eps,
                                    const std::function<double(double)>& tau2, long kmax) {
    const double a = eps / L;
    const double hpref = 0.5 * M_PI * M_PI;
    Kahan acc;
    for (long k1 = 0; k1 <= kmax; ++k1) {
        const double m1 = (k1 == 0) ? 1.0 : 2.0;
        for (long k2 = 0; k2 <= kmax; ++k2) {
            const double r2 = double(k1) * k1 + double(k2) * k2;
            const double m = m1 * ((k2 == 0) ? 1.0 : 2.0);
            acc.add(m * tau2(a * std::sqrt(r2)) / (L * L + hpref * r2));
        }
    }
    return acc.s;
}

double renorm_constant_log(double eps, double C_calibrated, double prefactor) {
    if (eps <= 0.0 || eps > 1.0) throw Error("renorm_constant_log: eps must be in (0,1]");
    const double p = (prefactor > 0.0) ? prefactor : 1.0 / (2.0 * M_PI);
    return p * std::log(1.0 / eps) + C_calibrated;
}

EnhancedNoise enhance(const GridField& xi, double c, MollifierSpec spec) {
    if (xi.box.boundary != Boundary::Neumann)
        throw Error("enhance: xi must be a Neumann field");
    const TorusSpec xs = torus_fft(even_extension(xi));
    TorusSpec sx = xs;
    apply_torus_multiplier(sx, sigma_multiplier);
    const TorusSpec reso = resonance_truncated(xs, sx);
    GridField Xi = restrict_to_box(torus_ifft(reso), Boundary::Neumann);
    for (double& v : Xi.values) v -= c;
    return EnhancedNoise{xi, std::move(Xi), c, spec};
}

} // namespace pam
