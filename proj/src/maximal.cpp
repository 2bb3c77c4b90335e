#include "morreylab/maximal.hpp"

#include <algorithm>
#include <cmath>

#include "morreylab/rearrange.hpp"

namespace morreylab {

namespace {

// Top-down propagation of max cube averages; numer/denom are cube pyramids.
GridFunction topdown_max_ratio(const DyadicGrid& g, const CubePyramid& numer,
                               const CubePyramid& denom) {
    std::vector<double> cur{numer.level(0)[0] / denom.level(0)[0]};
    for (int l = 1; l <= g.L; ++l) {
        const std::vector<double>& ns = numer.level(l);
        const std::vector<double>& ds = denom.level(l);
        std::vector<double> next(ns.size());
        if (g.dim == 1) {
            for (std::size_t id = 0; id < ns.size(); ++id)
                next[id] = std::max(cur[id / 2], ns[id] / ds[id]);
        } else {
            const std::int64_t n = std::int64_t{1} << l;
            for (std::int64_t ix = 0; ix < n; ++ix)
                for (std::int64_t iy = 0; iy < n; ++iy) {
                    const std::size_t id = static_cast<std::size_t>(ix * n + iy);
                    const std::size_t pid =
                        static_cast<std::size_t>((ix / 2) * (n / 2) + iy / 2);
                    next[id] = std::max(cur[pid], ns[id] / ds[id]);
                }
        }
        cur = std::move(next);
    }
    return GridFunction(g, std::move(cur));
}

CubePyramid abs_mass_pyramid(const GridFunction& f, const Weight* w) {
    const DyadicGrid& g = f.grid();
    const double vol = g.cell_volume();
    std::vector<double> cell(static_cast<std::size_t>(g.cell_count()));
    for (std::int64_t c = 0; c < g.cell_count(); ++c)
        cell[static_cast<std::size_t>(c)] =
            std::fabs(f[c]) * (w ? w->density_at(c) : 1.0) * vol;
    return CubePyramid(g, cell);
}

CubePyramid volume_pyramid(const DyadicGrid& g, const Weight* w) {
    const double vol = g.cell_volume();
    std::vector<double> cell(static_cast<std::size_t>(g.cell_count()));
    for (std::int64_t c = 0; c < g.cell_count(); ++c)
        cell[static_cast<std::size_t>(c)] = (w ? w->density_at(c) : 1.0) * vol;
    return CubePyramid(g, cell);
}

// Oscillation of f on every subcube of q0, bottom-up with merged sorted cell
// values, then the running max over ancestor chains pushed down to the cells.
class SharpPass {
public:
    SharpPass(const GridFunction& f, double lambda, std::vector<double>& out)
        : f_(f), g_(f.grid()), mu_(g_.cell_volume()), lambda_(lambda), out_(out) {
        osc_.resize(static_cast<std::size_t>(g_.L + 1));
        for (int l = 0; l <= g_.L; ++l)
            osc_[static_cast<std::size_t>(l)].assign(
                static_cast<std::size_t>(cubes_at_level(g_, l)), 0.0);
    }

    void run(const DyadicCube& q0) {
        collect(q0);
        push_down(q0, 0.0);
    }

private:
    std::vector<double> collect(const DyadicCube& q) {
        std::vector<double> vals;
        if (q.level == g_.L) {
            vals.push_back(f_[cube_linear_id(g_, q)]);
        } else {
            for (const DyadicCube& k : children(g_, q)) {
                std::vector<double> kv = collect(k);
                if (vals.empty()) {
                    vals = std::move(kv);
                } else {
                    std::vector<double> merged(vals.size() + kv.size());
                    std::merge(vals.begin(), vals.end(), kv.begin(), kv.end(),
                               merged.begin());
                    vals = std::move(merged);
                }
            }
        }
        std::vector<double> tmp = vals;
        osc_[static_cast<std::size_t>(q.level)][static_cast<std::size_t>(
            cube_linear_id(g_, q))] = oscillation_of_slice(std::move(tmp), mu_, lambda_);
        return vals;
    }

    void push_down(const DyadicCube& q, double anc) {
        const double here =
            std::max(anc, osc_[static_cast<std::size_t>(q.level)]
                              [static_cast<std::size_t>(cube_linear_id(g_, q))]);
        if (q.level == g_.L) {
            out_[static_cast<std::size_t>(cube_linear_id(g_, q))] = here;
            return;
        }
        for (const DyadicCube& k : children(g_, q)) push_down(k, here);
    }

    const GridFunction& f_;
    const DyadicGrid& g_;
    double mu_, lambda_;
    std::vector<double>& out_;
    std::vector<std::vector<double>> osc_;
};

}  // namespace

GridFunction hl_maximal(const GridFunction& f) {
    const DyadicGrid& g = f.grid();
    return topdown_max_ratio(g, abs_mass_pyramid(f, nullptr), volume_pyramid(g, nullptr));
}

GridFunction powered_maximal(const GridFunction& f, double eta) {
    if (!(eta > 0)) throw std::invalid_argument("powered maximal needs eta > 0");
    return hl_maximal(f.pow(eta)).pow(1.0 / eta);
}

GridFunction weighted_maximal(const GridFunction& f, const Weight& w) {
    const DyadicGrid& g = f.grid();
    if (!(w.grid() == g)) throw std::invalid_argument("weight grid mismatch");
    return topdown_max_ratio(g, abs_mass_pyramid(f, &w), volume_pyramid(g, &w));
}

GridFunction local_sharp(const GridFunction& f, const DyadicCube& q0, double lambda) {
    const DyadicGrid& g = f.grid();
    check_cube(g, q0);
    if (!(lambda > 0.0 && lambda < 0.5))
        throw std::invalid_argument("local sharp needs lambda in (0, 1/2)");
    std::vector<double> out(static_cast<std::size_t>(g.cell_count()), 0.0);
    SharpPass pass(f, lambda, out);
    pass.run(q0);
    return GridFunction(g, std::move(out));
}

GridFunction global_sharp(const GridFunction& f, double lambda) {
    return local_sharp(f, DyadicCube::root(), lambda);
}

GridFunction fs_sharp(const GridFunction& f, double eta) {
    if (!(eta > 0)) throw std::invalid_argument("fs sharp needs eta > 0");
    const DyadicGrid& g = f.grid();
    const double vol = g.cell_volume();
    std::vector<double> signed_cell(static_cast<std::size_t>(g.cell_count()));
    for (std::int64_t c = 0; c < g.cell_count(); ++c)
        signed_cell[static_cast<std::size_t>(c)] = f[c] * vol;
    const CubePyramid signed_mass(g, signed_cell);

    // level by level: value(Q) = ((1/|Q|) sum |f - f_Q|^eta vol)^{1/eta},
    // folded into a running ancestor max
    std::vector<double> prev_max;
    for (int l = 0; l <= g.L; ++l) {
        const std::int64_t ncubes = cubes_at_level(g, l);
        std::vector<double> level_max(static_cast<std::size_t>(ncubes));
        for (std::int64_t id = 0; id < ncubes; ++id) {
            const DyadicCube qc = cube_from_linear_id(g, l, id);
            const double volq = g.volume(l);
            const double avg = signed_mass.sum(g, qc) / volq;
            double s = 0.0;
            for_each_cell(g, qc, [&](std::int64_t c) {
                s += std::pow(std::fabs(f[c] - avg), eta) * vol;
            });
            const double val = std::pow(s / volq, 1.0 / eta);
            double anc = 0.0;
            if (l > 0)
                anc = prev_max[static_cast<std::size_t>(cube_linear_id(g, parent(qc)))];
            level_max[static_cast<std::size_t>(id)] = std::max(anc, val);
        }
        prev_max = std::move(level_max);
    }
    return GridFunction(g, std::move(prev_max));
}

RubioResult rubio_iteration(const GridFunction& f, double alpha, int K) {
    for (std::int64_t c = 0; c < f.size(); ++c)
        if (f[c] < 0) throw std::invalid_argument("rubio iteration needs f >= 0");
    if (!(alpha > 0)) throw std::invalid_argument("rubio iteration needs alpha > 0");
    if (K < 0) throw std::invalid_argument("rubio iteration needs K >= 0");
    const DyadicGrid& g = f.grid();
    const double two_alpha = 2.0 * alpha;
    std::vector<double> acc(f.values());
    GridFunction mk = f;  // M^k f
    double denom = 1.0;
    for (int k = 1; k <= K; ++k) {
        mk = hl_maximal(mk);
        denom *= two_alpha;
        for (std::int64_t c = 0; c < g.cell_count(); ++c)
            acc[static_cast<std::size_t>(c)] += mk[c] / denom;
    }
    GridFunction rf(g, std::move(acc));
    const GridFunction mk1 = hl_maximal(mk);  // M^{K+1} f
    double tail = 0.0, sup_mk = 0.0;
    for (std::int64_t c = 0; c < g.cell_count(); ++c) {
        sup_mk = std::max(sup_mk, mk[c]);
        if (rf[c] > 0) tail = std::max(tail, mk1[c] / (denom * rf[c]));
    }
    return RubioResult{std::move(rf), tail, 2.0 * sup_mk / denom};
}

}  // namespace morreylab
