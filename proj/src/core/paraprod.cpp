#include "paraprod.hpp"

#include <cmath>

#include "smoothfuncs.hpp"
#include "spectral.hpp"
#include "transforms.hpp"

namespace pam {

namespace {

// Cumulative low-pass S_m = sum_{i<=m} Delta_i = theta(r / 2^{m+1}).
double s_filter_weight(int m, double r) { return plateau(std::ldexp(r, -m - 1), 1.0, 2.0); }

TorusSpec filtered(const TorusSpec& s, const std::function<double(double)>& radial) {
    TorusSpec out = s;
    apply_torus_multiplier(out, [&radial](double x1, double x2) { return radial(std::hypot(x1, x2)); });
    return out;
}

// Inflates a filtered spectrum to sample values on the doubled grid.
TorusField big_values(const TorusSpec& s) { return torus_ifft(embed_double(s)); }

void mul_accumulate(TorusField& acc, const TorusField& a, const TorusField& b) {
    for (size_t i = 0; i < acc.v.size(); ++i) acc.v[i] += a.v[i] * b.v[i];
}

// Accumulates sum over j >= 1 of S_{j-2} a * Delta_j b on the doubled grid.
void accumulate_lt(TorusField& acc, const TorusSpec& a, const TorusSpec& b, int J) {
    for (int j = 1; j <= J; ++j) {
        const TorusField low = big_values(filtered(a, [j](double r) { return s_filter_weight(j - 2, r); }));
        const TorusField high = big_values(lp_filter(b, j, J));
        mul_accumulate(acc, low, high);
    }
}

// Accumulates sum over |i-j| <= 1 of Delta_i a * Delta_j b on the doubled grid.
void accumulate_resonance(TorusField& acc, const TorusSpec& a, const TorusSpec& b, int J) {
    for (int i = -1; i <= J; ++i) {
        const TorusField da = big_values(lp_filter(a, i, J));
        const TorusField near = big_values(filtered(b, [i, J](double r) {
            double w = lp_block_weight(i, J, r);
            if (i - 1 >= -1) w += lp_block_weight(i - 1, J, r);
            if (i + 1 <= J) w += lp_block_weight(i + 1, J, r);
            return w;
        }));
        mul_accumulate(acc, da, near);
    }
}

GridField decimated(const TorusField& big, double L, Boundary flavor) {
    const int n = big.n / 2;
    TorusField small(L, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) small.at(i, j) = big.at(2 * i, 2 * j);
    return restrict_to_box(small, flavor);
}

Boundary product_flavor(const GridField& u, const GridField& v) {
    return u.box.boundary == v.box.boundary ? Boundary::Neumann : Boundary::Dirichlet;
}

TorusSpec spec_add(TorusSpec a, const TorusSpec& b, double sign = 1.0) {
    for (size_t i = 0; i < a.c.size(); ++i) a.c[i] += sign * b.c[i];
    return a;
}

} // namespace

ProductTriple paraproduct(const GridField& u, const GridField& v) {
    if (!u.box.same_grid(v.box)) throw Error("paraproduct: box mismatch");
    const TorusSpec a = torus_fft(extend(u));
    const TorusSpec b = torus_fft(extend(v));
    const int J = lp_top_block(u.box);
    const int nbig = 2 * a.n;
    const Boundary flavor = product_flavor(u, v);

    ProductTriple t;
    {
        TorusField acc(u.box.L, nbig);
        accumulate_lt(acc, a, b, J);
        t.para_lt = decimated(acc, u.box.L, flavor);
    }
    {
        TorusField acc(u.box.L, nbig);
        accumulate_resonance(acc, a, b, J);
        t.resonance = decimated(acc, u.box.L, flavor);
    }
    {
        TorusField acc(u.box.L, nbig);
        accumulate_lt(acc, b, a, J);  // u > v is v < u with factors swapped
        t.para_gt = decimated(acc, u.box.L, flavor);
    }
    return t;
}

TorusSpec resonance_truncated(const TorusSpec& a, const TorusSpec& b) {
    if (a.n != b.n) throw Error("resonance_truncated: size mismatch");
    const int J = lp_top_block_torus(a.L, a.n);
    TorusField acc(a.L, 2 * a.n);
    accumulate_resonance(acc, a, b, J);
    return extract_half(torus_fft(acc), a.L);
}

TorusSpec para_lt_truncated(const TorusSpec& a, const TorusSpec& b) {
    if (a.n != b.n) throw Error("para_lt_truncated: size mismatch");
    const int J = lp_top_block_torus(a.L, a.n);
    TorusField acc(a.L, 2 * a.n);
    accumulate_lt(acc, a, b, J);
    return extract_half(torus_fft(acc), a.L);
}

TorusSpec full_product_truncated(const TorusSpec& a, const TorusSpec& b) {
    return product_truncated(a, b);
}

WickSquare wick_square_grad_z(const GridField& Z, const GridField& Theta) {
    if (!Z.box.same_grid(Theta.box)) throw Error("wick_square_grad_z: box mismatch");
    const TorusSpec zs = torus_fft(even_extension(Z));
    const TorusSpec dz1 = torus_derivative(zs, 0);
    const TorusSpec dz2 = torus_derivative(zs, 1);

    TorusSpec para = spec_add(para_lt_truncated(dz1, dz1), para_lt_truncated(dz2, dz2));

    TorusSpec lap = resonance_truncated(zs, zs);
    apply_torus_multiplier(lap, [](double x1, double x2) {
        return 1.0 + 0.25 * M_PI * M_PI * (x1 * x1 + x2 * x2);
    });

    const TorusSpec theta = torus_fft(even_extension(Theta));

    WickSquare w;
    w.para_part = restrict_to_box(torus_ifft(para), Boundary::Neumann);
    w.laplace_part = restrict_to_box(torus_ifft(lap), Boundary::Neumann);
    w.laplace_part *= -1.0;
    w.theta_part = Theta;
    const TorusSpec total = spec_add(spec_add(para, lap, -1.0), theta);
    w.value = restrict_to_box(torus_ifft(total), Boundary::Neumann);
    return w;
}

} // namespace pam
