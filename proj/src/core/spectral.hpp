#pragma once

// Forward/inverse trigonometric transforms between GridField and
// SpectralField, and Fourier multipliers m(k/L) acting on coefficients.

#include <functional>

#include "grid.hpp"

namespace pam {

// Coefficients of f against the discrete orthonormal trig basis (trapezoid
// quadrature; exact L^2 inner products for band-limited fields).
SpectralField forward_transform(const GridField& field);

// Exact inverse of forward_transform up to roundoff.
GridField inverse_transform(const SpectralField& spec);

using Multiplier = std::function<double(double, double)>;  // m(k1/L, k2/L)

SpectralField apply_multiplier(const SpectralField& spec, const Multiplier& m);

// sigma(x) = (1 + pi^2 |x|^2 / 2)^{-1}, the resolvent multiplier of (1 - Lap/2).
double sigma_multiplier(double x1, double x2);

// (eta - Lap/2)^{-1} on mode k: 1 / (eta + pi^2 |k/L|^2 / 2).
double resolvent_multiplier(double eta, double x1, double x2);

} // namespace pam
