#pragma once

// FFTW-backed discrete transforms. All entry points are reentrant: plans are
// cached per size behind a mutex and executed on pooled scratch buffers, so
// concurrent callers never share state. FFTW_ESTIMATE planning keeps plan
// selection (and therefore roundoff) reproducible run to run.

#include <complex>
#include <vector>

namespace pam::tf {

// DCT-I (REDFT00) on an n1 x n2 array, unnormalized FFTW convention:
// out_k = sum over both axes of [x0 + (-1)^k xM + 2*sum_interior x_j cos(pi j k / M)].
void dct1_2d(const double* in, double* out, int n1, int n2);

// DST-I (RODFT00) on an n1 x n2 array (interior points only):
// out_k = prod_axes 2 * sum_j x_j sin(pi j k / M).
void dst1_2d(const double* in, double* out, int n1, int n2);

// Batched DST-I: `count` independent n1 x n2 transforms laid out
// contiguously.
void dst1_2d_many(const double* in, double* out, int n1, int n2, int count);

// Periodic real FFT on an n x n torus. Spectrum layout: n x (n/2+1) complex,
// row index = signed frequency (k > n/2 means k - n). c2r divides by n^2.
void fft2_r2c(const double* in, std::complex<double>* out, int n);
void fft2_c2r(const std::complex<double>* in, double* out, int n);

// Drops all cached plans (mainly for leak-checking in tests).
void clear_plan_cache();

} // namespace pam::tf
