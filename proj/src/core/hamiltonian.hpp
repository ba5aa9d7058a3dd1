#pragma once

// The (renormalized) Anderson Hamiltonian H = (1/2) Lap + V with Dirichlet
// boundary on Q_L: matrix-free applies for the 5-point and spectral-sine
// Laplacians, top eigenpairs via preconditioned block iteration (LOBPCG)
// with a dense fallback on small grids, and the renormalized-eigenvalue
// experiment cells.

#include <cstdint>
#include <optional>

#include "grid.hpp"
#include "noise.hpp"

namespace pam {

enum class LaplacianKind { FiniteDifference, Spectral };

struct OperatorSpec {
    BoxSpec box;          // Dirichlet flavor
    GridField potential;  // V sampled on the same grid
    LaplacianKind lap = LaplacianKind::Spectral;

    int dim() const { return (box.N - 2) * (box.N - 2); }
    // y = (1/2) Lap u + V u on interior points (row-major (N-2)^2 vectors)
    void apply(const double* u, double* y) const;
    // batched variant over `count` contiguous interior vectors
    void apply_many(const double* u, double* y, int count) const;
    uint64_t fingerprint() const;
};

OperatorSpec assemble(const BoxSpec& box, const GridField& potential,
                      LaplacianKind lap = LaplacianKind::Spectral);

struct Spectrum {
    std::vector<double> eigenvalues;      // descending, lambda_1 first
    std::vector<GridField> eigenvectors;  // orthonormal in L^2(Q_L), sign-normalized
    std::vector<double> residuals;        // ||H v - lambda v||_2 per pair
    int iterations = 0;
};

enum class EigMethod { Auto, Dense, Lobpcg };

struct EigOptions {
    double tol = 1e-9;    // absolute residual target
    int max_iter = 600;
    EigMethod method = EigMethod::Auto;
    int extra_block = 4;  // guard vectors beyond the requested count
    const Spectrum* warm_start = nullptr;
};

Spectrum top_eigenpairs(const OperatorSpec& op, int n, const EigOptions& opt = {});

// Spectral prolongation of a Dirichlet field onto a finer grid (same L).
GridField prolong_dirichlet(const GridField& f, int N_fine);

// Calibrated renormalization: slope and intercept of (1/4) c_{L,eps} against
// log(1/eps), per route. Cached per (L, route).
struct RenormCalibration {
    double slope = 0.0;
    double intercept = 0.0;
};
RenormCalibration calibrate_renorm(double L, MollifierKind route);

// Eigenvalues of (1/2) Lap + xi_eps minus the route's c_eps. The same noise
// coefficients serve every eps, so Cauchy sequences in eps are meaningful.
struct RenormalizedSpectrum {
    Spectrum spectrum;     // already shifted by -c_eps
    double c_eps = 0.0;
    double lambda1_raw = 0.0;  // before subtraction
};
RenormalizedSpectrum renormalized_eigenvalues(const BoxSpec& box, const NoiseCoeffs& nc,
                                              double eps, MollifierKind route, int n,
                                              const EigOptions& opt = {});

struct EigenScalingRecord {
    double L = 0.0;
    uint64_t seed = 0;
    double eps = 0.0;
    std::vector<double> lambdas;  // renormalized, descending
    std::vector<double> residuals;
    double lambda1_over_logL = 0.0;
};

// One experiment cell: build the box with eps = eps_factor * dx (so N is tied
// to eps), sample, solve, renormalize.
EigenScalingRecord eigen_scaling_cell(double L, uint64_t seed, double eps, int N, int n,
                                      MollifierKind route, const EigOptions& opt = {});

} // namespace pam
