#include "morreylab/singular.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace morreylab {

GridFunction hilbert(const GridFunction& f) {
    const DyadicGrid& g = f.grid();
    if (g.dim != 1) throw std::invalid_argument("hilbert transform is 1D only");
    const std::int64_t n = g.cell_count();
    const double h = g.side(g.L);
    const double lower = g.root_lower();
    std::vector<double> out(static_cast<std::size_t>(n), 0.0);
    for (std::int64_t i = 0; i < n; ++i) {
        const double x = lower + (static_cast<double>(i) + 0.5) * h;
        double s = 0.0;
        for (std::int64_t j = 0; j < n; ++j) {
            if (j == i) continue;  // odd kernel cancels exactly on the own cell
            const double a = lower + static_cast<double>(j) * h;
            const double b = a + h;
            s += f[j] * (std::log(std::fabs(x - a)) - std::log(std::fabs(x - b)));
        }
        out[static_cast<std::size_t>(i)] = s;
    }
    return GridFunction(g, std::move(out));
}

namespace {

// midpoint rule with recursive 2^dim refinement near the diagonal
double refine_cell(const CZKernelSpec& spec, const std::array<double, 2>& x,
                   const std::array<double, 2>& lo, double side, int dim, int depth) {
    if (depth == 0) {
        std::array<double, 2> y{lo[0] + side / 2, dim == 2 ? lo[1] + side / 2 : 0.0};
        const double vol = dim == 1 ? side : side * side;
        return spec.kernel(x, y) * vol;
    }
    double s = 0.0;
    const double half = side / 2;
    for (int dx = 0; dx < 2; ++dx)
        for (int dy = 0; dy < (dim == 2 ? 2 : 1); ++dy) {
            std::array<double, 2> sub{lo[0] + dx * half, lo[1] + dy * half};
            s += refine_cell(spec, x, sub, half, dim, depth - 1);
        }
    return s;
}

}  // namespace

GridFunction cz_apply(const CZKernelSpec& spec, const GridFunction& f) {
    const DyadicGrid& g = f.grid();
    const std::int64_t n = g.cell_count();
    const double h = g.side(g.L);
    const double vol = g.cell_volume();
    const std::int64_t row = g.cells_per_side();
    std::vector<double> out(static_cast<std::size_t>(n), 0.0);
    for (std::int64_t i = 0; i < n; ++i) {
        const std::array<double, 2> x = cell_midpoint(g, i);
        const std::int64_t ix = g.dim == 1 ? i : i / row;
        const std::int64_t iy = g.dim == 1 ? 0 : i % row;
        double s = 0.0;
        for (std::int64_t j = 0; j < n; ++j) {
            if (j == i) continue;  // principal value: own cell cancels
            if (f[j] == 0.0) continue;
            const std::int64_t jx = g.dim == 1 ? j : j / row;
            const std::int64_t jy = g.dim == 1 ? 0 : j % row;
            const std::int64_t dist =
                std::max(std::llabs(ix - jx), std::llabs(iy - jy));
            double contrib;
            if (dist <= 1) {
                contrib = refine_cell(spec, x, cell_lower(g, j), h, g.dim, 3);
            } else {
                contrib = spec.kernel(x, cell_midpoint(g, j)) * vol;
            }
            s += f[j] * contrib;
        }
        out[static_cast<std::size_t>(i)] = s;
    }
    return GridFunction(g, std::move(out));
}

namespace {

CZKernelSpec riesz_kernel_spec(int i) {
    CZKernelSpec spec;
    spec.kernel = [i](const std::array<double, 2>& x, const std::array<double, 2>& y) {
        const double dx = x[0] - y[0], dy = x[1] - y[1];
        const double r = std::sqrt(dx * dx + dy * dy);
        const double num = i == 1 ? dx : dy;
        return num / (r * r * r);
    };
    spec.size_constant = 1.0;
    spec.hormander_theta = 1.0;
    return spec;
}

}  // namespace

GridFunction riesz(const GridFunction& f, int i) {
    if (f.grid().dim != 2) throw std::invalid_argument("riesz transform is 2D only");
    if (i != 1 && i != 2) throw std::invalid_argument("riesz component must be 1 or 2");
    return cz_apply(riesz_kernel_spec(i), f);
}

KernelValidation validate_kernel(const CZKernelSpec& spec, const DyadicGrid& g,
                                 std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(g.root_lower(), -g.root_lower());
    KernelValidation v;
    for (int k = 0; k < 256; ++k) {
        std::array<double, 2> x{u(rng), g.dim == 2 ? u(rng) : 0.0};
        std::array<double, 2> y{u(rng), g.dim == 2 ? u(rng) : 0.0};
        const double dx = x[0] - y[0], dy = x[1] - y[1];
        const double r = std::sqrt(dx * dx + dy * dy);
        if (r < 1e-9) continue;
        const double val = spec.kernel(x, y);
        if (!std::isfinite(val)) {
            v.finite = false;
            continue;
        }
        v.worst_size_ratio = std::max(
            v.worst_size_ratio, std::fabs(val) * std::pow(r, g.dim) / spec.size_constant);
    }
    if (!v.finite)
        throw std::invalid_argument("kernel evaluates non-finite off the diagonal");
    return v;
}

GridFunction commutator(const GridFunction& b, const OperatorHandle& T,
                        const GridFunction& f) {
    return b.times(T(f)).minus(T(b.times(f)));
}

double bmo_norm(const GridFunction& b) {
    const DyadicGrid& g = b.grid();
    const double vol = g.cell_volume();
    std::vector<double> cell(static_cast<std::size_t>(g.cell_count()));
    for (std::int64_t c = 0; c < g.cell_count(); ++c)
        cell[static_cast<std::size_t>(c)] = b[c] * vol;
    const CubePyramid sums(g, cell);
    double best = 0.0;
    for (int l = 0; l <= g.L; ++l)
        for (std::int64_t id = 0; id < cubes_at_level(g, l); ++id) {
            const DyadicCube qc = cube_from_linear_id(g, l, id);
            const double volq = g.volume(l);
            const double avg = sums.sum(g, qc) / volq;
            double s = 0.0;
            for_each_cell(g, qc, [&](std::int64_t c) { s += std::fabs(b[c] - avg) * vol; });
            best = std::max(best, s / volq);
        }
    return best;
}

double weighted_bmo_ratio(const GridFunction& b, const Weight& w, double q) {
    if (!(q > 0)) throw std::invalid_argument("needs q > 0");
    const DyadicGrid& g = b.grid();
    if (!(w.grid() == g)) throw std::invalid_argument("weight grid mismatch");
    const double denom = bmo_norm(b);
    if (denom == 0.0) return 0.0;
    const double vol = g.cell_volume();
    std::vector<double> cell(static_cast<std::size_t>(g.cell_count()));
    for (std::int64_t c = 0; c < g.cell_count(); ++c)
        cell[static_cast<std::size_t>(c)] = b[c] * vol;
    const CubePyramid sums(g, cell);
    double best = 0.0;
    for (int l = 0; l <= g.L; ++l)
        for (std::int64_t id = 0; id < cubes_at_level(g, l); ++id) {
            const DyadicCube qc = cube_from_linear_id(g, l, id);
            const double avg = sums.sum(g, qc) / g.volume(l);  // Lebesgue mean
            double s = 0.0;
            for_each_cell(g, qc, [&](std::int64_t c) {
                s += std::pow(std::fabs(b[c] - avg), q) * w.density_at(c) * vol;
            });
            best = std::max(best, std::pow(s / w.mass(qc), 1.0 / q));
        }
    return best / denom;
}

}  // namespace morreylab
