#pragma once

// Bony decomposition of pointwise products via Littlewood-Paley blocks:
// u < v sums low-u * high-v pairs (i <= j-2), the resonance u o v the
// diagonal |i-j| <= 1, and u > v the transpose. Products are formed on the
// doubled extension torus with factor-2 zero padding, so each block product
// is exact; pointwise form samples back to the grid, band form truncates to
// the representable band.

#include "grid.hpp"
#include "lp.hpp"
#include "torus.hpp"

namespace pam {

struct ProductTriple {
    GridField para_lt;    // u < v
    GridField resonance;  // u o v
    GridField para_gt;    // u > v
};

// Pointwise form: para_lt + resonance + para_gt equals the grid product
// u.values * v.values to transform roundoff.
ProductTriple paraproduct(const GridField& u, const GridField& v);

// Band-truncated products on torus spectra (the algebra used by the
// renormalized objects). resonance_truncated(a, b) = sum_{|i-j|<=1}
// P_M(Delta_i a * Delta_j b); para_lt_truncated analogous over i <= j-2.
TorusSpec resonance_truncated(const TorusSpec& a, const TorusSpec& b);
TorusSpec para_lt_truncated(const TorusSpec& a, const TorusSpec& b);

// Full band-truncated product P_M(ab) (all block pairs at once).
TorusSpec full_product_truncated(const TorusSpec& a, const TorusSpec& b);

struct WickSquare {
    GridField value;       // (1/2)|grad Z|^{wick 2}
    GridField para_part;   // grad Z < grad Z (summed over components)
    GridField laplace_part;  // -(1 - Lap/4)(Z o Z)
    GridField theta_part;  // the enhancement Theta
};

// Assembles (1/2)|grad Z|^{wick 2} = grad Z < grad Z - (1 - Lap/4)(Z o Z) + Theta
// with spectral gradients, in the band-truncated algebra. Z is a Neumann
// field; Theta must live on the same box.
WickSquare wick_square_grad_z(const GridField& Z, const GridField& Theta);

} // namespace pam
