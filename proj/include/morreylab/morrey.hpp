#ifndef MORREYLAB_MORREY_HPP
#define MORREYLAB_MORREY_HPP

// Phi function and Morrey-type norms over the finite dyadic cube family.
// All suprema run over the grid's dyadic cubes; integrals are exact cell sums.

#include <optional>

#include "morreylab/core.hpp"

namespace morreylab {

enum class MorreyFlavor { Samko, KomoriShirai, General };

struct MorreyParams {
    double p;
    double q;
    MorreyFlavor flavor;
    std::optional<Weight> w1;  // scale weight (unused for Samko)
    std::optional<Weight> w2;  // integration weight (Lebesgue when absent)

    static MorreyParams samko(double p, double q, Weight w);
    static MorreyParams samko_lebesgue(double p, double q);  // w2 = Lebesgue
    static MorreyParams komori_shirai(double p, double q, Weight w);
    static MorreyParams general(double p, double q, Weight w1, Weight w2);
};

// Phi_{p,q,w}(Q) = |Q|^{1/p} (w(Q)/|Q|)^{1/q}
double phi(double p, double q, const Weight& w, const DyadicCube& q_cube);

// General two-weight scale factor v(Q)^{1/p-1/q} w(Q)^{1/q}; v = Lebesgue when null.
double phi_general(double p, double q, const Weight* v, const Weight& w,
                   const DyadicGrid& g, const DyadicCube& q_cube);

// max over all dyadic cubes Q of w1(Q)^{1/p-1/q} (int_Q |f|^q dw2)^{1/q}
double morrey_norm(const GridFunction& f, const MorreyParams& params);

// Samko-type weak norm: sup over cubes and thresholds t (attained values of
// |f| approached from below) of |Q|^{1/p-1/q} t w({|f|>t} cap Q)^{1/q}.
double weak_morrey_norm(const GridFunction& f, double p, double q, const Weight& w);

// max over Q of Phi_{p,q,w}(Q) ((1/w(Q)) int_Q |f|^s dw)^{1/s}, 0 < s <= q <= p
double local_average_term(const GridFunction& f, double p, double q, double s, const Weight& w);

}  // namespace morreylab

#endif
