#include "morreylab/rearrange.hpp"

#include <algorithm>
#include <cmath>

namespace morreylab {

namespace {

// Distinct values with occurrence counts. Measures stay exact: counts are
// integers and the common cell measure is a power of two.
struct Distinct {
    std::vector<double> u;
    std::vector<std::int64_t> cnt;
};

Distinct distinct_sorted(std::vector<double>& vals, bool ascending) {
    if (ascending)
        std::sort(vals.begin(), vals.end());
    else
        std::sort(vals.begin(), vals.end(), std::greater<double>());
    Distinct d;
    for (double v : vals) {
        if (!d.u.empty() && d.u.back() == v) {
            ++d.cnt.back();
        } else {
            d.u.push_back(v);
            d.cnt.push_back(1);
        }
    }
    return d;
}

}  // namespace

ValueSlices collect_values(const GridFunction& f, const DyadicCube& q) {
    check_cube(f.grid(), q);
    ValueSlices s;
    s.cell_measure = f.grid().cell_volume();
    for_each_cell(f.grid(), q, [&](std::int64_t c) { s.values.push_back(f[c]); });
    s.total_measure = s.cell_measure * static_cast<double>(s.values.size());
    return s;
}

double rearrangement_of_slice(std::vector<double> abs_values, double cell_measure, double t) {
    if (t < 0) throw std::invalid_argument("rearrangement needs t >= 0");
    for (double& v : abs_values) v = std::fabs(v);
    Distinct d = distinct_sorted(abs_values, false);
    if (d.u.empty()) return 0.0;
    // positive values descending; K = deepest threshold whose strict superlevel
    // set has measure <= t
    std::int64_t cum = 0;
    double answer = d.u[0];
    bool any_above = false;
    for (std::size_t k = 0; k < d.u.size(); ++k) {
        if (d.u[k] == 0.0) break;
        cum += d.cnt[k];
        if (static_cast<double>(cum) * cell_measure <= t) {
            answer = (k + 1 < d.u.size()) ? d.u[k + 1] : 0.0;
        } else {
            any_above = true;
            break;
        }
    }
    if (!any_above && (d.u[0] == 0.0 || static_cast<double>(cum) * cell_measure <= t))
        return 0.0;
    return answer;
}

double rearrangement_at(const GridFunction& f, const DyadicCube& q, double t) {
    ValueSlices s = collect_values(f, q);
    return rearrangement_of_slice(std::move(s.values), s.cell_measure, t);
}

double median_of_slice(std::vector<double> values, double cell_measure) {
    const std::int64_t n = static_cast<std::int64_t>(values.size());
    if (n == 0) throw std::invalid_argument("median of empty cube");
    Distinct d = distinct_sorted(values, true);
    const double half = static_cast<double>(n) * (cell_measure / 2);
    std::int64_t below = 0;
    for (std::size_t k = 0; k < d.u.size(); ++k) {
        const std::int64_t above = n - below - d.cnt[k];
        if (static_cast<double>(below) * cell_measure <= half &&
            static_cast<double>(above) * cell_measure <= half)
            return d.u[k];
        below += d.cnt[k];
    }
    return d.u.back();  // unreachable for nonempty input
}

double median(const GridFunction& f, const DyadicCube& q) {
    ValueSlices s = collect_values(f, q);
    return median_of_slice(std::move(s.values), s.cell_measure);
}

double oscillation_of_slice(std::vector<double> values, double cell_measure, double lambda) {
    if (!(lambda > 0.0 && lambda < 0.5))
        throw std::invalid_argument("oscillation needs lambda in (0, 1/2)");
    const std::int64_t n = static_cast<std::int64_t>(values.size());
    if (n == 0) throw std::invalid_argument("oscillation of empty cube");
    const double t = lambda * (static_cast<double>(n) * cell_measure);
    Distinct d = distinct_sorted(values, true);
    const std::size_t m = d.u.size();
    std::vector<std::int64_t> prefix(m + 1, 0);
    for (std::size_t k = 0; k < m; ++k) prefix[k + 1] = prefix[k] + d.cnt[k];
    // minimal closed window [u_i, u_j] whose complement has measure <= t
    double best = std::numeric_limits<double>::infinity();
    std::size_t j = 0;
    for (std::size_t i = 0; i < m; ++i) {
        if (j < i) j = i;
        while (j < m) {
            const std::int64_t outside = n - (prefix[j + 1] - prefix[i]);
            if (static_cast<double>(outside) * cell_measure <= t) break;
            ++j;
        }
        if (j == m) break;  // no feasible window starting at i or later
        best = std::min(best, (d.u[j] - d.u[i]) / 2);
    }
    return best;
}

double oscillation(const GridFunction& f, const DyadicCube& q, double lambda) {
    ValueSlices s = collect_values(f, q);
    return oscillation_of_slice(std::move(s.values), s.cell_measure, lambda);
}

}  // namespace morreylab
