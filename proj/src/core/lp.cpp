#include "lp.hpp"

#include <cmath>

#include "smoothfuncs.hpp"

namespace pam {

namespace {
// theta: 1 on r <= 1, 0 on r >= 2, smooth monotone between.
inline double theta(double r) { return plateau(r, 1.0, 2.0); }
} // namespace

int lp_top_block_torus(double L, int n) {
    const double rmax = std::sqrt(2.0) * (n / 2) / L;
    const int J = int(std::ceil(std::log2(std::max(2.0, rmax)))) - 1;
    return std::max(0, J);
}

int lp_top_block(const BoxSpec& box) { return lp_top_block_torus(box.L, 2 * (box.N - 1)); }

double lp_block_weight(int i, int J, double r) {
    if (i == -1) return theta(r);
    if (i < J) return theta(std::ldexp(r, -i - 1)) - theta(std::ldexp(r, -i));
    return 1.0 - theta(std::ldexp(r, -J));
}

TorusSpec lp_filter(const TorusSpec& s, int i, int J) {
    TorusSpec out = s;
    apply_torus_multiplier(out, [i, J](double x1, double x2) {
        return lp_block_weight(i, J, std::hypot(x1, x2));
    });
    return out;
}

GridField lp_block(const GridField& field, int i) {
    const int J = lp_top_block(field.box);
    if (i < -1 || i > J) throw Error("lp_block: index out of range");
    const TorusSpec s = torus_fft(extend(field));
    return restrict_to_box(torus_ifft(lp_filter(s, i, J)), field.box.boundary);
}

LPDecomposition lp_decompose(const GridField& field) {
    LPDecomposition d;
    d.J = lp_top_block(field.box);
    const TorusSpec s = torus_fft(extend(field));
    d.blocks.reserve(size_t(d.J) + 2);
    for (int i = -1; i <= d.J; ++i)
        d.blocks.push_back(restrict_to_box(torus_ifft(lp_filter(s, i, d.J)), field.box.boundary));
    return d;
}

namespace {

double besov_from_spec(const TorusSpec& s, Boundary flavor, double alpha, double p, double q,
                       int J) {
    double acc = 0.0, sup = 0.0;
    for (int i = -1; i <= J; ++i) {
        const GridField blk = restrict_to_box(torus_ifft(lp_filter(s, i, J)), flavor);
        const double term = std::pow(2.0, double(i) * alpha) * norm_lp(blk, p);
        if (std::isinf(q))
            sup = std::max(sup, term);
        else
            acc += std::pow(term, q);
    }
    return std::isinf(q) ? sup : std::pow(acc, 1.0 / q);
}

} // namespace

double besov_norm(const GridField& field, double alpha, double p, double q) {
    if (!field.finite()) throw Error("besov_norm: field not finite");
    const TorusSpec s = torus_fft(extend(field));
    return besov_from_spec(s, field.box.boundary, alpha, p, q, lp_top_block(field.box));
}

double besov_norm_torus(const TorusSpec& spec, Boundary flavor, double alpha, double p,
                        double q) {
    return besov_from_spec(spec, flavor, alpha, p, q, lp_top_block_torus(spec.L, spec.n));
}

} // namespace pam
