#include "morreylab/content.hpp"

#include <algorithm>
#include <cmath>

#include "morreylab/maximal.hpp"
#include "morreylab/morrey.hpp"
#include "morreylab/weight_class.hpp"

namespace morreylab {

double hausdorff_content(const DyadicGrid& g, const std::vector<std::uint8_t>& cell_set,
                         double alpha) {
    if (!(alpha > 0.0 && alpha <= g.dim))
        throw std::invalid_argument("content needs alpha in (0, dim]");
    if (static_cast<std::int64_t>(cell_set.size()) != g.cell_count())
        throw std::invalid_argument("cell set size mismatch");
    const double cell_term = std::pow(g.side(g.L), alpha);
    std::vector<double> cur(cell_set.size());
    for (std::size_t i = 0; i < cell_set.size(); ++i)
        cur[i] = cell_set[i] ? cell_term : 0.0;
    for (int l = g.L - 1; l >= 0; --l) {
        const double whole = std::pow(g.side(l), alpha);
        std::vector<double> coarse(static_cast<std::size_t>(cubes_at_level(g, l)));
        if (g.dim == 1) {
            for (std::size_t id = 0; id < coarse.size(); ++id) {
                const double s = cur[2 * id] + cur[2 * id + 1];
                coarse[id] = s == 0.0 ? 0.0 : std::min(whole, s);
            }
        } else {
            const std::int64_t nc = std::int64_t{1} << l;
            const std::int64_t nf = nc * 2;
            for (std::int64_t ix = 0; ix < nc; ++ix)
                for (std::int64_t iy = 0; iy < nc; ++iy) {
                    const double s = cur[static_cast<std::size_t>(2 * ix * nf + 2 * iy)] +
                                     cur[static_cast<std::size_t>(2 * ix * nf + 2 * iy + 1)] +
                                     cur[static_cast<std::size_t>((2 * ix + 1) * nf + 2 * iy)] +
                                     cur[static_cast<std::size_t>((2 * ix + 1) * nf + 2 * iy + 1)];
                    coarse[static_cast<std::size_t>(ix * nc + iy)] =
                        s == 0.0 ? 0.0 : std::min(whole, s);
                }
        }
        cur = std::move(coarse);
    }
    return cur[0];
}

double hausdorff_content(const DyadicGrid& g, const std::vector<std::int64_t>& cells,
                         double alpha) {
    std::vector<std::uint8_t> mask(static_cast<std::size_t>(g.cell_count()), 0);
    for (std::int64_t c : cells) {
        if (c < 0 || c >= g.cell_count()) throw std::invalid_argument("cell out of range");
        mask[static_cast<std::size_t>(c)] = 1;
    }
    return hausdorff_content(g, mask, alpha);
}

double choquet_integral(const GridFunction& phi, double alpha) {
    const DyadicGrid& g = phi.grid();
    for (std::int64_t c = 0; c < phi.size(); ++c)
        if (phi[c] < 0) throw std::invalid_argument("choquet integral needs phi >= 0");
    // cells sorted by value descending; peel superlevel sets at distinct values
    std::vector<std::int64_t> order(static_cast<std::size_t>(phi.size()));
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<std::int64_t>(i);
    std::sort(order.begin(), order.end(),
              [&](std::int64_t a, std::int64_t b) { return phi[a] > phi[b]; });
    std::vector<std::uint8_t> mask(order.size(), 0);
    double total = 0.0;
    std::size_t pos = 0;
    double upper = 0.0;  // previous distinct value (layer top)
    while (pos < order.size()) {
        const double v = phi[order[pos]];
        if (v == 0.0) break;
        if (pos == 0) upper = v;
        while (pos < order.size() && phi[order[pos]] == v) {
            mask[static_cast<std::size_t>(order[pos])] = 1;
            ++pos;
        }
        const double next = pos < order.size() ? std::max(phi[order[pos]], 0.0) : 0.0;
        // layer {phi > t} for t in [next_value, v) equals the current mask
        total += (v - next) * hausdorff_content(g, mask, alpha);
        upper = next;
    }
    (void)upper;
    return total;
}

bool triple_contains_origin(const DyadicGrid& g, const DyadicCube& q) {
    const CubeGeometry geo = cube_geometry(g, q);
    for (int a = 0; a < g.dim; ++a) {
        const double lo3 = geo.lower[static_cast<std::size_t>(a)] - geo.side;
        const double hi3 = lo3 + 3 * geo.side;
        if (!(lo3 <= 0.0 && 0.0 < hi3)) return false;
    }
    return true;
}

namespace {

CandidateB finalize_candidate(const DyadicGrid& g, GridFunction b, const DyadicCube& support,
                              double alpha_content) {
    const double raw = choquet_integral(b.restricted(support), alpha_content);
    if (raw > 1.0) b = b.scaled(1.0 / raw);
    CandidateB cand{std::move(b), support, 0.0, 0.0};
    cand.choquet = choquet_integral(cand.b.restricted(support), alpha_content);
    cand.a1_const = a1_constant(Weight(g, cand.b.values()));
    return cand;
}

}  // namespace

CandidateB candidate_b_maximal(const DyadicGrid& g, const DyadicCube& q, double alpha,
                               double eps) {
    check_cube(g, q);
    const int n = g.dim;
    if (!(alpha > 0.0 && alpha < n))
        throw std::invalid_argument("candidate needs alpha in (0, n)");
    if (!(eps > 0.0 && eps < 1.0 - alpha / n))
        throw std::invalid_argument("candidate needs eps in (0, 1 - alpha/n)");
    const GridFunction mchi = hl_maximal(GridFunction::indicator(g, q));
    const double scale = std::pow(g.side(q.level), -alpha);
    GridFunction b = mchi.pow(alpha / n + eps).scaled(scale);
    return finalize_candidate(g, std::move(b), q, alpha);
}

BetaInterval candidate_beta_interval(double alpha, double p, double q, int n) {
    BetaInterval iv;
    iv.lo = std::max(0.0, (alpha - n * (q - 1.0)) / n);
    iv.hi = 1.0 - q / p;
    return iv;
}

CandidateB candidate_b_power(const DyadicGrid& g, const DyadicCube& q0, double p, double q,
                             double alpha) {
    check_cube(g, q0);
    if (g.dim != 1) throw std::invalid_argument("power candidate is 1D only");
    const int n = 1;
    const BetaInterval iv = candidate_beta_interval(alpha, p, q, n);
    if (iv.empty())
        throw std::invalid_argument("parameters admit no beta for the power candidate");
    const double beta = iv.midpoint();
    // |x|^{-n beta} sampled as exact cell masses / volume, then scaled
    const Weight pw = weight_from_power(g, -n * beta);
    const double volq0 = g.volume(q0.level);
    const double scale = std::pow(volq0, beta - (1.0 - q / p));
    GridFunction b = pw.as_function().scaled(scale);
    return finalize_candidate(g, std::move(b), q0, n * (1.0 - q / p));
}

double block_norm_upper(const GridFunction& g_fn, double p, double q,
                        const std::vector<CandidateB>& candidates) {
    if (!(q > 1)) throw std::invalid_argument("block norm needs q > 1");
    if (candidates.empty()) throw std::invalid_argument("need at least one candidate");
    const DyadicGrid& g = g_fn.grid();
    const double qprime = q / (q - 1.0);
    const double vol = g.cell_volume();
    double best = std::numeric_limits<double>::infinity();
    for (const CandidateB& cand : candidates) {
        double s = 0.0;
        for (std::int64_t c = 0; c < g.cell_count(); ++c) {
            const double gv = std::fabs(g_fn[c]);
            if (gv == 0.0) continue;
            s += std::pow(gv, qprime) * std::pow(cand.b[c], -qprime / q) * vol;
        }
        best = std::min(best, std::pow(s, 1.0 / qprime));
    }
    return best;
}

double block_norm_lower(const GridFunction& g_fn, double p, double q,
                        const std::vector<GridFunction>& test_fs) {
    const DyadicGrid& g = g_fn.grid();
    const double vol = g.cell_volume();
    const MorreyParams params = MorreyParams::samko_lebesgue(p, q);
    double best = 0.0;
    for (const GridFunction& f : test_fs) {
        const double norm = morrey_norm(f, params);
        if (!(norm > 0)) continue;
        double s = 0.0;
        for (std::int64_t c = 0; c < g.cell_count(); ++c)
            s += std::fabs(f[c] * g_fn[c]) * vol;
        best = std::max(best, s / norm);
    }
    return best;
}

}  // namespace morreylab
