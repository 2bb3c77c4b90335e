#ifndef MORREYLAB_TEST_ORACLES_HPP
#define MORREYLAB_TEST_ORACLES_HPP

// Independent brute-force oracles for the test suites. Everything here is
// deliberately written against the definitions directly (naive loops, no
// tree reuse) so it cannot share a failure mode with the library paths.

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "morreylab/core.hpp"

namespace oracles {

using morreylab::DyadicCube;
using morreylab::DyadicGrid;
using morreylab::GridFunction;
using morreylab::Weight;

inline bool near(double a, double b, double rel = 1e-12) {
    const double scale = std::max({1.0, std::fabs(a), std::fabs(b)});
    return std::fabs(a - b) <= rel * scale;
}

// Riemann-sum mass of |x|^alpha over [a,b) with n midpoint samples.
inline double riemann_power_mass(double a, double b, double alpha, int n) {
    const double h = (b - a) / n;
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = a + (i + 0.5) * h;
        s += std::pow(std::fabs(x), alpha) * h;
    }
    return s;
}

// all dyadic cubes of the grid
inline std::vector<DyadicCube> all_cubes(const DyadicGrid& g) {
    std::vector<DyadicCube> out;
    for (int l = 0; l <= g.L; ++l)
        for (std::int64_t id = 0; id < morreylab::cubes_at_level(g, l); ++id)
            out.push_back(morreylab::cube_from_linear_id(g, l, id));
    return out;
}

inline std::vector<double> values_on(const GridFunction& f, const DyadicCube& q) {
    std::vector<double> v;
    morreylab::for_each_cell(f.grid(), q, [&](std::int64_t c) { v.push_back(f[c]); });
    return v;
}

// rearrangement by direct threshold scan over candidate rho values
inline double rearrangement_brute(const GridFunction& f, const DyadicCube& q, double t) {
    std::vector<double> v = values_on(f, q);
    const double mu = f.grid().cell_volume();
    std::set<double> cands{0.0};
    for (double x : v) cands.insert(std::fabs(x));
    double best = std::numeric_limits<double>::infinity();
    for (double rho : cands) {
        std::int64_t cnt = 0;
        for (double x : v)
            if (std::fabs(x) > rho) ++cnt;
        if (static_cast<double>(cnt) * mu <= t) best = std::min(best, rho);
    }
    return best;
}

// oscillation by scanning all candidate centers (midpoints of value pairs)
inline double oscillation_brute(const GridFunction& f, const DyadicCube& q, double lambda) {
    std::vector<double> v = values_on(f, q);
    const double mu = f.grid().cell_volume();
    const double t = lambda * (mu * static_cast<double>(v.size()));
    std::set<double> centers;
    for (double a : v)
        for (double b : v) centers.insert((a + b) / 2);
    double best = std::numeric_limits<double>::infinity();
    for (double c : centers) {
        // ((f - c) chi_Q)*(t) by threshold scan
        std::set<double> cands{0.0};
        for (double x : v) cands.insert(std::fabs(x - c));
        for (double rho : cands) {
            std::int64_t cnt = 0;
            for (double x : v)
                if (std::fabs(x - c) > rho) ++cnt;
            if (static_cast<double>(cnt) * mu <= t) {
                best = std::min(best, rho);
                break;  // cands ascends, first feasible is minimal for this c
            }
        }
    }
    return best;
}

// checks the median predicate directly
inline bool is_median(const GridFunction& f, const DyadicCube& q, double m) {
    std::vector<double> v = values_on(f, q);
    const double mu = f.grid().cell_volume();
    const double half = mu * static_cast<double>(v.size()) / 2;
    std::int64_t above = 0, below = 0;
    for (double x : v) {
        if (x > m) ++above;
        if (x < m) ++below;
    }
    return static_cast<double>(above) * mu <= half && static_cast<double>(below) * mu <= half;
}

// dyadic maximal function by (cell, ancestor) pair enumeration
inline GridFunction hl_maximal_brute(const GridFunction& f) {
    const DyadicGrid& g = f.grid();
    std::vector<double> out(static_cast<std::size_t>(g.cell_count()), 0.0);
    for (std::int64_t c = 0; c < g.cell_count(); ++c) {
        const DyadicCube cell = morreylab::cell_cube(g, c);
        double best = 0.0;
        for (int m = 0; m <= g.L; ++m) {
            const DyadicCube a = morreylab::ancestor(cell, m);
            double s = 0.0;
            std::int64_t n = 0;
            morreylab::for_each_cell(g, a, [&](std::int64_t cc) {
                s += std::fabs(f[cc]);
                ++n;
            });
            best = std::max(best, s / static_cast<double>(n));
        }
        out[static_cast<std::size_t>(c)] = best;
    }
    return GridFunction(g, std::move(out));
}

// A_q constant by direct per-cube loops (naive sums, no pyramid)
inline double aq_brute(const Weight& w, double q) {
    const DyadicGrid& g = w.grid();
    const double vol_cell = g.cell_volume();
    double best = 0.0;
    for (const DyadicCube& qc : all_cubes(g)) {
        double wm = 0.0, dm = 0.0;
        morreylab::for_each_cell(g, qc, [&](std::int64_t c) {
            wm += w.density_at(c) * vol_cell;
            dm += std::pow(w.density_at(c), -1.0 / (q - 1.0)) * vol_cell;
        });
        const double vol = g.volume(qc.level);
        best = std::max(best, (wm / vol) * std::pow(dm / vol, q - 1.0));
    }
    return best;
}

inline double a1_brute(const Weight& w) {
    const GridFunction m = hl_maximal_brute(w.as_function());
    double best = 0.0;
    for (std::int64_t c = 0; c < m.size(); ++c)
        best = std::max(best, m[c] / w.density_at(c));
    return best;
}

// reverse Holder bisection with an independently coded predicate
inline double reverse_holder_brute(const Weight& w) {
    const DyadicGrid& g = w.grid();
    const double vol_cell = g.cell_volume();
    auto holds = [&](double eps) {
        for (const DyadicCube& qc : all_cubes(g)) {
            double pm = 0.0, wm = 0.0;
            morreylab::for_each_cell(g, qc, [&](std::int64_t c) {
                pm += std::pow(w.density_at(c), 1.0 + eps) * vol_cell;
                wm += w.density_at(c) * vol_cell;
            });
            const double vol = g.volume(qc.level);
            if (std::pow(pm / vol, 1.0 / (1.0 + eps)) > 2.0 * wm / vol) return false;
        }
        return true;
    };
    double lo = 0.0, hi = 8.0;
    if (holds(hi)) return hi;
    while (hi - lo > 1e-4) {
        const double mid = (lo + hi) / 2;
        if (holds(mid))
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

// Samko Morrey norm by direct per-cube loops
inline double morrey_samko_brute(const GridFunction& f, double p, double q, const Weight* w) {
    const DyadicGrid& g = f.grid();
    const double vol_cell = g.cell_volume();
    double best = 0.0;
    for (const DyadicCube& qc : all_cubes(g)) {
        double s = 0.0;
        morreylab::for_each_cell(g, qc, [&](std::int64_t c) {
            s += std::pow(std::fabs(f[c]), q) * (w ? w->density_at(c) : 1.0) * vol_cell;
        });
        best = std::max(best,
                        std::pow(g.volume(qc.level), 1.0 / p - 1.0 / q) * std::pow(s, 1.0 / q));
    }
    return best;
}

// random strictly positive weights; dyadic = true draws densities k/64
inline Weight random_weight(const DyadicGrid& g, std::mt19937_64& rng, bool dyadic,
                            double spike_chance = 0.1) {
    std::vector<double> d(static_cast<std::size_t>(g.cell_count()));
    std::uniform_real_distribution<double> u(0.1, 4.0);
    std::uniform_int_distribution<int> k(1, 256);
    std::bernoulli_distribution spike(spike_chance);
    for (auto& x : d) {
        x = dyadic ? static_cast<double>(k(rng)) / 64.0 : u(rng);
        if (spike(rng)) x *= dyadic ? 64.0 : 50.0;
    }
    return Weight(g, std::move(d));
}

inline GridFunction random_function(const DyadicGrid& g, std::mt19937_64& rng,
                                    double lo = -2.0, double hi = 2.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v(static_cast<std::size_t>(g.cell_count()));
    for (auto& x : v) x = u(rng);
    return GridFunction(g, std::move(v));
}

}  // namespace oracles

#endif
