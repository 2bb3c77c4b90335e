#ifndef MORREYLAB_CONTENT_HPP
#define MORREYLAB_CONTENT_HPP

// Dyadic Hausdorff content, Choquet integrals, candidate block-weight
// functions, and two-sided block-norm bounds.

#include "morreylab/core.hpp"

namespace morreylab {

// Exact optimum over dyadic covers by tree dynamic programming:
// c(Q) = 0 if Q does not meet E, side^alpha at an occupied cell, otherwise
// min(side(Q)^alpha, sum of children). Returns c(root).
double hausdorff_content(const DyadicGrid& g, const std::vector<std::uint8_t>& cell_set,
                         double alpha);
double hausdorff_content(const DyadicGrid& g, const std::vector<std::int64_t>& cells,
                         double alpha);

// Layer-cake sum over the distinct values of phi >= 0, exact for piecewise
// constants.
double choquet_integral(const GridFunction& phi, double alpha);

// A positive function certified for the block-weight class: an A_1 constant
// and a Choquet integral over the generating cube, normalized to <= 1.
struct CandidateB {
    GridFunction b;
    DyadicCube support;  // generating cube
    double a1_const = 0.0;
    double choquet = 0.0;  // of b chi_support after normalization
};

// b = (M chi_Q)^{alpha/n + eps} / l(Q)^alpha, normalized by its Choquet
// integral over Q when that exceeds one.
CandidateB candidate_b_maximal(const DyadicGrid& g, const DyadicCube& q, double alpha,
                               double eps);

// Power candidate for 1D cubes whose triple contains the origin:
// b = |Q0|^{beta - (1-q/p)} |x|^{-beta} with beta the midpoint of the
// admissible interval, sampled as exact cell masses.
CandidateB candidate_b_power(const DyadicGrid& g, const DyadicCube& q0, double p, double q,
                             double alpha);

// admissible beta interval ((alpha - n(q-1))/n, 1 - q/p) cap (0, 1 - q/p)
struct BetaInterval {
    double lo = 0.0, hi = 0.0;
    bool empty() const { return !(lo < hi); }
    double midpoint() const { return (lo + hi) / 2; }
};
BetaInterval candidate_beta_interval(double alpha, double p, double q, int n);

// min over candidates of (sum |g|^{q'} b^{-q'/q} vol)^{1/q'}; an upper bound
// on the block norm.
double block_norm_upper(const GridFunction& g_fn, double p, double q,
                        const std::vector<CandidateB>& candidates);

// max over test functions of ||f g||_{L^1} / ||f||_{M^p_q(dx,dx)}; a lower
// bound up to the duality constant, which is reported, not assumed.
double block_norm_lower(const GridFunction& g_fn, double p, double q,
                        const std::vector<GridFunction>& test_fs);

// whether the concentric triple 3Q contains the origin
bool triple_contains_origin(const DyadicGrid& g, const DyadicCube& q);

}  // namespace morreylab

#endif
