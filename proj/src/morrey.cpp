#include "morreylab/morrey.hpp"

#include <algorithm>
#include <cmath>

namespace morreylab {

MorreyParams MorreyParams::samko(double p, double q, Weight w) {
    if (!(0 < q && q <= p)) throw std::invalid_argument("need 0 < q <= p");
    return MorreyParams{p, q, MorreyFlavor::Samko, std::nullopt, std::move(w)};
}

MorreyParams MorreyParams::samko_lebesgue(double p, double q) {
    if (!(0 < q && q <= p)) throw std::invalid_argument("need 0 < q <= p");
    return MorreyParams{p, q, MorreyFlavor::Samko, std::nullopt, std::nullopt};
}

MorreyParams MorreyParams::komori_shirai(double p, double q, Weight w) {
    if (!(0 < q && q <= p)) throw std::invalid_argument("need 0 < q <= p");
    return MorreyParams{p, q, MorreyFlavor::KomoriShirai, w, std::move(w)};
}

MorreyParams MorreyParams::general(double p, double q, Weight w1, Weight w2) {
    if (!(0 < q && q <= p)) throw std::invalid_argument("need 0 < q <= p");
    return MorreyParams{p, q, MorreyFlavor::General, std::move(w1), std::move(w2)};
}

double phi(double p, double q, const Weight& w, const DyadicCube& q_cube) {
    if (!(0 < q && q <= p)) throw std::invalid_argument("need 0 < q <= p");
    const double vol = w.grid().volume(q_cube.level);
    return std::pow(vol, 1.0 / p) * std::pow(w.mass(q_cube) / vol, 1.0 / q);
}

double phi_general(double p, double q, const Weight* v, const Weight& w,
                   const DyadicGrid& g, const DyadicCube& q_cube) {
    const double vq = v ? v->mass(q_cube) : g.volume(q_cube.level);
    return std::pow(vq, 1.0 / p - 1.0 / q) * std::pow(w.mass(q_cube), 1.0 / q);
}

namespace {

// |f|^q dw2 per cell, summed over the tree once.
CubePyramid q_mass_pyramid(const GridFunction& f, double q, const Weight* w2) {
    const DyadicGrid& g = f.grid();
    const double vol = g.cell_volume();
    std::vector<double> cell(static_cast<std::size_t>(g.cell_count()));
    for (std::int64_t c = 0; c < g.cell_count(); ++c) {
        const double dens = w2 ? w2->density_at(c) : 1.0;
        cell[static_cast<std::size_t>(c)] = std::pow(std::fabs(f[c]), q) * dens * vol;
    }
    return CubePyramid(g, cell);
}

}  // namespace

double morrey_norm(const GridFunction& f, const MorreyParams& params) {
    const DyadicGrid& g = f.grid();
    const Weight* w2 = params.w2 ? &*params.w2 : nullptr;
    const Weight* w1 = params.flavor == MorreyFlavor::Samko ? nullptr
                                                            : (params.w1 ? &*params.w1 : nullptr);
    if (w2 && !(w2->grid() == g)) throw std::invalid_argument("weight grid mismatch");
    const CubePyramid pyr = q_mass_pyramid(f, params.q, w2);
    const double exp1 = 1.0 / params.p - 1.0 / params.q;
    double best = 0.0;
    for (int l = 0; l <= g.L; ++l) {
        const std::vector<double>& sums = pyr.level(l);
        for (std::int64_t id = 0; id < cubes_at_level(g, l); ++id) {
            const double integral = sums[static_cast<std::size_t>(id)];
            if (integral == 0.0) continue;
            const DyadicCube qc = cube_from_linear_id(g, l, id);
            const double scale = w1 ? w1->mass(qc) : g.volume(l);
            const double val = std::pow(scale, exp1) * std::pow(integral, 1.0 / params.q);
            best = std::max(best, val);
        }
    }
    return best;
}

double weak_morrey_norm(const GridFunction& f, double p, double q, const Weight& w) {
    if (!(0 < q && q <= p)) throw std::invalid_argument("need 0 < q <= p");
    const DyadicGrid& g = f.grid();
    if (!(w.grid() == g)) throw std::invalid_argument("weight grid mismatch");
    const double vol = g.cell_volume();
    double best = 0.0;
    // Per cube, sort |f| values descending and accumulate w-mass of the
    // superlevel sets; the sup over t is attained at attained values from below.
    std::vector<std::pair<double, double>> vals;  // (|f|, w-mass of cell)
    for (int l = 0; l <= g.L; ++l) {
        for (std::int64_t id = 0; id < cubes_at_level(g, l); ++id) {
            const DyadicCube qc = cube_from_linear_id(g, l, id);
            vals.clear();
            for_each_cell(g, qc, [&](std::int64_t c) {
                vals.emplace_back(std::fabs(f[c]), w.density_at(c) * vol);
            });
            std::sort(vals.begin(), vals.end(),
                      [](const auto& a, const auto& b) { return a.first > b.first; });
            const double scale = std::pow(g.volume(l), 1.0 / p - 1.0 / q);
            double wmass = 0.0;
            for (std::size_t i = 0; i < vals.size(); ++i) {
                wmass += vals[i].second;
                if (i + 1 < vals.size() && vals[i + 1].first == vals[i].first) continue;
                if (vals[i].first == 0.0) break;
                best = std::max(best, scale * vals[i].first * std::pow(wmass, 1.0 / q));
            }
        }
    }
    return best;
}

double local_average_term(const GridFunction& f, double p, double q, double s, const Weight& w) {
    if (!(0 < s && s <= q && q <= p)) throw std::invalid_argument("need 0 < s <= q <= p");
    const DyadicGrid& g = f.grid();
    if (!(w.grid() == g)) throw std::invalid_argument("weight grid mismatch");
    const CubePyramid pyr = q_mass_pyramid(f, s, &w);
    double best = 0.0;
    for (int l = 0; l <= g.L; ++l) {
        const std::vector<double>& sums = pyr.level(l);
        for (std::int64_t id = 0; id < cubes_at_level(g, l); ++id) {
            const DyadicCube qc = cube_from_linear_id(g, l, id);
            const double wq = w.mass(qc);
            const double avg = sums[static_cast<std::size_t>(id)] / wq;
            best = std::max(best, phi(p, q, w, qc) * std::pow(avg, 1.0 / s));
        }
    }
    return best;
}

}  // namespace morreylab
