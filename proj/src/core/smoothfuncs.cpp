#include "smoothfuncs.hpp"

#include <vector>

namespace pam {

namespace {

// Composite Simpson on [a,b].
template <typename F>
double simpson(F&& f, double a, double b, int panels) {
    const double h = (b - a) / (2 * panels);
    double s = f(a) + f(b);
    for (int i = 1; i < 2 * panels; ++i) s += f(a + i * h) * ((i & 1) ? 4.0 : 2.0);
    return s * h / 3.0;
}

} // namespace

double bump_mass() {
    static const double m = simpson([](double u) { return bump_raw(u); }, -0.5, 0.5, 2000);
    return m;
}

double phi_selfconv(double w) {
    w = std::fabs(w);
    if (w >= 1.0) return 0.0;
    const double lo = std::max(-0.5, w - 0.5), hi = 0.5;
    if (hi <= lo) return 0.0;
    return simpson([w](double u) { return phi_bump(u) * phi_bump(u - w); }, lo, hi, 400);
}

} // namespace pam
