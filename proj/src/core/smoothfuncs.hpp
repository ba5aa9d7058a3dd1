#pragma once

// Shared C-infinity cutoff primitives: the bump exp(-1/(1-t^2)), the smooth
// step built from it, and plateau cutoffs. Used by the mollifiers and by the
// Littlewood-Paley block filters.

#include <cmath>

namespace pam {

// exp(-1/t) continued by 0 for t <= 0.
inline double expm_inv(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

// Smooth monotone step: 0 for t <= 0, 1 for t >= 1.
inline double smoothstep(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const double a = expm_inv(t), b = expm_inv(1.0 - t);
    return a / (a + b);
}

// Plateau cutoff: 1 on [0, lo], 0 on [hi, inf), smooth in between.
inline double plateau(double r, double lo, double hi) {
    return 1.0 - smoothstep((r - lo) / (hi - lo));
}

// Radial mollifier multiplier tau: 1 on |x| <= 1/2, 0 on |x| >= 1.
inline double tau_cutoff(double r) { return plateau(std::fabs(r), 0.5, 1.0); }

// Unnormalized 1D bump supported on (-1/2, 1/2).
inline double bump_raw(double u) {
    const double t = 1.0 - 4.0 * u * u;
    return t > 0.0 ? std::exp(-1.0 / t) : 0.0;
}

// Mass of bump_raw; phi = bump_raw / bump_mass has unit integral.
double bump_mass();

// phi: even, nonnegative, C_c^inf on (-1/2, 1/2), integral 1.
inline double phi_bump(double u) { return bump_raw(u) / bump_mass(); }

// (phi * phi-check)(w), supported on (-1, 1), even, integral 1.
double phi_selfconv(double w);

} // namespace pam
