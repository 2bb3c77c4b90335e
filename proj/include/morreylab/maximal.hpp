#ifndef MORREYLAB_MAXIMAL_HPP
#define MORREYLAB_MAXIMAL_HPP

// Dyadic Hardy-Littlewood maximal operator and variants, sharp maximal
// operators, and the Rubio de Francia iteration. All suprema are over
// dyadic ancestors (the grid tree).

#include "morreylab/core.hpp"

namespace morreylab {

// Mf(x) = max over dyadic Q containing x of (1/|Q|) int_Q |f|
GridFunction hl_maximal(const GridFunction& f);

// M^(eta) f = (M |f|^eta)^{1/eta}
GridFunction powered_maximal(const GridFunction& f, double eta);

// M_w f(x) = max over dyadic Q containing x of (1/w(Q)) int_Q |f| dw
GridFunction weighted_maximal(const GridFunction& f, const Weight& w);

// M^{sharp,d}_{lambda;Q0} f: max of omega_lambda(f;Q) over dyadic Q in D(Q0)
// containing x; zero outside Q0.
GridFunction local_sharp(const GridFunction& f, const DyadicCube& q0, double lambda);

// M^{sharp,d}_lambda f over all grid cubes (the outer sup over Q0 collapses
// on a finite grid).
GridFunction global_sharp(const GridFunction& f, double lambda);

// Fefferman-Stein f^{sharp,eta}: max over dyadic Q containing x of
// ((1/|Q|) int_Q |f - f_Q|^eta)^{1/eta}
GridFunction fs_sharp(const GridFunction& f, double eta);

struct RubioResult {
    GridFunction rf;
    double tail_bound;         // certified: max_x M^{K+1}f / ((2a)^K R_K f)
    double tail_bound_coarse;  // 2 ||M^K f||_inf / (2a)^K
};

// R_K f = sum_{k=0}^K M^k f / (2 alpha)^k for f >= 0.
RubioResult rubio_iteration(const GridFunction& f, double alpha, int K);

}  // namespace morreylab

#endif
