#ifndef MORREYLAB_SINGULAR_HPP
#define MORREYLAB_SINGULAR_HPP

// Discrete Hilbert and Riesz transforms, generic CZ kernels, commutators,
// and BMO norms. Principal values are realized by midpoint evaluation with
// exact own-cell cancellation.

#include <functional>

#include "morreylab/core.hpp"

namespace morreylab {

// Exact integral of f(y)/(x-y) over every cell via -ln|x-y| antiderivatives;
// the cell containing x contributes zero. 1D only.
GridFunction hilbert(const GridFunction& f);

// Midpoint quadrature of (x_i-y_i)/|x-y|^3 with 4x recursive refinement of
// the neighbor cells to depth 3; own cell contributes zero. 2D only.
GridFunction riesz(const GridFunction& f, int i);

struct CZKernelSpec {
    std::function<double(const std::array<double, 2>&, const std::array<double, 2>&)> kernel;
    double size_constant = 1.0;   // |K(x,y)| <= C / |x-y|^dim
    double hormander_theta = 1.0; // in (0, 1]
};

struct KernelValidation {
    bool finite = true;
    double worst_size_ratio = 0.0;  // max of |K| |x-y|^dim / C over samples
};

// Randomized point-cloud validation of the size condition; throws on
// non-finite kernel values.
KernelValidation validate_kernel(const CZKernelSpec& spec, const DyadicGrid& g,
                                 std::uint64_t seed);

// Same quadrature scheme as riesz with the supplied kernel.
GridFunction cz_apply(const CZKernelSpec& spec, const GridFunction& f);

using OperatorHandle = std::function<GridFunction(const GridFunction&)>;

// [b,T]f = b (Tf) - T(b f)
GridFunction commutator(const GridFunction& b, const OperatorHandle& T,
                        const GridFunction& f);

// max over all dyadic cubes Q of (1/|Q|) int_Q |b - b_Q|
double bmo_norm(const GridFunction& b);

// max over Q of ((1/w(Q)) int_Q |b - b_Q|^q dw)^{1/q} / bmo_norm(b);
// zero for constant b.
double weighted_bmo_ratio(const GridFunction& b, const Weight& w, double q);

}  // namespace morreylab

#endif
