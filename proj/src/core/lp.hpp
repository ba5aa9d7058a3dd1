#pragma once

// Littlewood-Paley decomposition with smooth dyadic cutoffs on |k|/L, and the
// grid-truncated Besov norms built from it. Block -1 carries the unit ball,
// block i the annulus |k|/L ~ 2^i; the remainder above the top dyadic shell
// folds into block J. The cutoffs telescope, so the blocks sum to the
// identity exactly.

#include <vector>

#include "grid.hpp"
#include "torus.hpp"

namespace pam {

struct LPDecomposition {
    std::vector<GridField> blocks;  // blocks[0] is block index -1
    int J = 0;

    int lo_index() const { return -1; }
    int hi_index() const { return J; }
    const GridField& block(int i) const { return blocks[size_t(i + 1)]; }
};

// Top block index for a grid: J = max(0, ceil(log2(sqrt(2) M / L)) - 1).
int lp_top_block(const BoxSpec& box);
int lp_top_block_torus(double L, int n);

// Cutoff weight of block i at radius r = |k|/L (exposed for tests).
double lp_block_weight(int i, int J, double r);

// Single frequency-localized projection; -1 <= i <= lp_top_block(box).
GridField lp_block(const GridField& field, int i);

LPDecomposition lp_decompose(const GridField& field);

// Torus-side filter: returns psi_i(|k|/L) applied to a spectrum.
TorusSpec lp_filter(const TorusSpec& s, int i, int J);

// Grid-truncated Besov norm  ( sum_i (2^{i alpha} ||Delta_i f||_{L^p})^q )^{1/q},
// sup over i for q = inf. Block L^p norms use box quadrature after restriction.
double besov_norm(const GridField& field, double alpha, double p, double q);

// Besov norm of a field already living on the torus (restriction to the box
// of each filtered block still defines the block norms).
double besov_norm_torus(const TorusSpec& spec, Boundary flavor, double alpha, double p,
                        double q);

} // namespace pam
