#ifndef MORREYLAB_SPARSE_HPP
#define MORREYLAB_SPARSE_HPP

// Calderon-Zygmund stopping-time sparse families, w-sparse parameters,
// Lerner-type median decomposition, and their certificates.

#include <map>

#include "morreylab/core.hpp"

namespace morreylab {

// Leveled lists of disjoint dyadic cubes with nested Omega_k supports.
struct SparseFamily {
    std::vector<std::vector<DyadicCube>> levels;  // levels[k] = {Q^k_j}
    double sparsity = 0.5;                        // eta the family claims

    bool empty() const;
    std::size_t cube_count() const;
};

struct SparseValidation {
    bool disjoint_within_levels = true;
    bool nested_supports = true;
    double worst_portion = 0.0;  // max over (k,j) of |Q^k_j cap Omega_{k+1}| / |Q^k_j|
    bool portion_ok = true;      // worst_portion <= eta (with float slack)
    bool pass() const { return disjoint_within_levels && nested_supports && portion_ok; }
};

SparseValidation validate_sparse(const DyadicGrid& g, const SparseFamily& family, double eta);

// Parameters of the paper's w-sparse regime for a given A_infty constant.
// lambda_prime = slack * 2^{-1-2^{n+3} a_inf}; stored in log2 form as well since
// the straight value underflows quickly.
struct WSparseParams {
    double a_inf = 1.0;
    int dim = 1;
    double slack = 0.5;
    double epsilon = 0.0;            // 1 / (2^{n+3} a_inf)
    double lambda_prime = 0.0;       // may underflow to 0; see log2_lambda_prime
    double lambda = 0.0;             // 2^{-n-2} lambda_prime
    double log2_lambda_prime = 0.0;  // exact in log2 space
    double log2_lambda = 0.0;
    double c_w = 0.0;                // (1 - 2 lambda_prime^{eps/(1+eps)})^{-1}
    bool underflowed = false;

    // smallest lambda before oscillation windows degenerate on this cube
    bool degenerate_for(const DyadicGrid& g, const DyadicCube& q0) const;
};

WSparseParams wsparse_params(double a_inf, int dim, double slack);

// Stopping time of the CZ decomposition: level-k cubes are the maximal
// dyadic Q inside q0 with w(Q)/|Q| > a^k w(Q0)/|Q0|.
SparseFamily cz_sparse(const Weight& w, const DyadicCube& q0, double a);

// Median decomposition of f on q0 by the recursive one-step formula.
struct LernerNode {
    DyadicCube cube;
    DyadicCube generator;  // the cube whose decomposition selected this one
    double alpha = 0.0;    // median increment m_{f - c}(cube)
    int depth = 1;         // recursion level k >= 1
};

struct LernerDecomposition {
    DyadicCube base;
    double median0 = 0.0;
    SparseFamily family;          // levels[0] = {base}, levels[k] = depth-k cubes
    std::vector<LernerNode> nodes;
    std::vector<double> level_cell_measure;  // sum_j |Q^k_j| per level k >= 1
    double residual_max = 0.0;    // cellwise reconstruction defect
    std::map<std::pair<int, std::int64_t>, double> alpha_of;  // (level, cube id) -> alpha
};

LernerDecomposition lerner_decompose(const GridFunction& f, const DyadicCube& q0,
                                     double lambda);

// Pointwise sum of omega_lambda(f;Q) chi_Q over the family.
GridFunction sparse_oscillation_sum(const GridFunction& f, const SparseFamily& family,
                                    double lambda);

struct CwCertificate {
    double worst_ratio = 1.0;  // max over (k,j) of w(Q^k_j) / w(Q^k_j \ Omega_{k+1})
    bool degenerate = false;   // some w(Q \ Omega) = 0 with w(Q) > 0
    bool certified = false;    // worst_ratio <= C_w claimable from the params
};

CwCertificate cw_certificate(const Weight& w, const SparseFamily& family,
                             const WSparseParams& params, double rh_epsilon);

struct AncestorGrowth {
    double epsilon = 0.0;  // reverse Holder exponent used
    int l_w = 1;
    double alpha_w = 1.0;
    double worst_slack = 0.0;  // min over cubes of w(Q^{(L_w)})/w(Q) - alpha_w
    bool verified = false;
    bool degenerate = false;   // alpha_w <= 1 or no cube has an L_w-th ancestor
};

AncestorGrowth ancestor_growth_certificate(const Weight& w, double rh_epsilon);

}  // namespace morreylab

#endif
