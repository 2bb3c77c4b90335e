#ifndef MORREYLAB_REARRANGE_HPP
#define MORREYLAB_REARRANGE_HPP

// Decreasing rearrangement, medians, and local mean oscillation on cubes.

#include "morreylab/core.hpp"

namespace morreylab {

// Value/measure pairs of f on the cells of Q (measure = cell volume).
struct ValueSlices {
    std::vector<double> values;   // one entry per cell of Q
    double cell_measure = 0;
    double total_measure = 0;
};
ValueSlices collect_values(const GridFunction& f, const DyadicCube& q);

// f*(t) = inf{rho >= 0 : |{x in Q : |f(x)| > rho}| <= t}.
double rearrangement_at(const GridFunction& f, const DyadicCube& q, double t);

// Same on an explicit slice (used by the decomposition machinery on shifted values).
double rearrangement_of_slice(std::vector<double> abs_values, double cell_measure, double t);

// Lower median: smallest attained value m with |{f > m}|, |{f < m}| <= |Q|/2.
double median(const GridFunction& f, const DyadicCube& q);
double median_of_slice(std::vector<double> values, double cell_measure);

// omega_lambda(f;Q) = inf_c ((f-c) chi_Q)*(lambda |Q|), exact via the minimal
// covering window over attained values.
double oscillation(const GridFunction& f, const DyadicCube& q, double lambda);
double oscillation_of_slice(std::vector<double> values, double cell_measure, double lambda);

}  // namespace morreylab

#endif
