#include "morreylab/weight_class.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "morreylab/content.hpp"
#include "morreylab/maximal.hpp"
#include "morreylab/morrey.hpp"

namespace morreylab {

double aq_constant(const Weight& w, double q) {
    if (!(q > 1)) throw std::invalid_argument("A_q needs q > 1");
    const DyadicGrid& g = w.grid();
    const Weight dual = w.cellwise_pow(-1.0 / (q - 1.0));
    double best = 0.0;
    for (int l = 0; l <= g.L; ++l)
        for (std::int64_t id = 0; id < cubes_at_level(g, l); ++id) {
            const DyadicCube qc = cube_from_linear_id(g, l, id);
            const double vol = g.volume(l);
            const double term =
                (w.mass(qc) / vol) * std::pow(dual.mass(qc) / vol, q - 1.0);
            best = std::max(best, term);
        }
    return best;
}

double a1_constant(const Weight& w) {
    const GridFunction dens = w.as_function();
    const GridFunction m = hl_maximal(dens);
    double best = 0.0;
    for (std::int64_t c = 0; c < dens.size(); ++c)
        best = std::max(best, m[c] / dens[c]);
    return best;
}

double ainf_estimate(const Weight& w) { return aq_constant(w, 64.0); }

namespace {

bool reverse_holder_holds(const Weight& w, double eps) {
    const DyadicGrid& g = w.grid();
    const Weight powed = w.cellwise_pow(1.0 + eps);
    for (int l = 0; l <= g.L; ++l)
        for (std::int64_t id = 0; id < cubes_at_level(g, l); ++id) {
            const DyadicCube qc = cube_from_linear_id(g, l, id);
            const double vol = g.volume(l);
            const double lhs = std::pow(powed.mass(qc) / vol, 1.0 / (1.0 + eps));
            if (lhs > 2.0 * w.mass(qc) / vol) return false;
        }
    return true;
}

}  // namespace

double reverse_holder_epsilon(const Weight& w) {
    // bisection on [0, 8]; returns the certified-true lower endpoint
    double lo = 0.0, hi = 8.0;
    if (reverse_holder_holds(w, hi)) return hi;
    while (hi - lo > 1e-4) {
        const double mid = (lo + hi) / 2;
        if (reverse_holder_holds(w, mid))
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

double doubling_constant(const Weight& w) {
    const DyadicGrid& g = w.grid();
    const double vol = g.cell_volume();
    double best = 0.0;
    for (int l = 1; l <= g.L - 1; ++l)
        for (std::int64_t id = 0; id < cubes_at_level(g, l); ++id) {
            const DyadicCube qc = cube_from_linear_id(g, l, id);
            if (!concentric_double_in_range(g, qc)) continue;
            double m2 = 0.0;
            for (std::int64_t c : concentric_double(g, qc)) m2 += w.density_at(c) * vol;
            best = std::max(best, m2 / w.mass(qc));
        }
    return best;
}

double bpq_check(const Weight& w, double p, double q) {
    if (!(0 < q && q <= p)) throw std::invalid_argument("need 0 < q <= p");
    const DyadicGrid& g = w.grid();
    // max over Q of Phi(Q) / min over ancestors Q0 of Phi(Q0), top-down
    double best = 0.0;
    std::vector<double> anc_min{phi(p, q, w, DyadicCube::root())};
    best = 1.0;
    for (int l = 1; l <= g.L; ++l) {
        std::vector<double> cur(static_cast<std::size_t>(cubes_at_level(g, l)));
        for (std::int64_t id = 0; id < cubes_at_level(g, l); ++id) {
            const DyadicCube qc = cube_from_linear_id(g, l, id);
            const double ph = phi(p, q, w, qc);
            const double up =
                anc_min[static_cast<std::size_t>(cube_linear_id(g, parent(qc)))];
            best = std::max(best, ph / up);
            cur[static_cast<std::size_t>(id)] = std::min(up, ph);
        }
        anc_min = std::move(cur);
    }
    return best;
}

namespace {

template <typename Fn>
void for_each_cube(const DyadicGrid& g, Fn&& fn) {
    for (int l = 0; l <= g.L; ++l)
        for (std::int64_t id = 0; id < cubes_at_level(g, l); ++id)
            fn(cube_from_linear_id(g, l, id));
}

}  // namespace

double weighted_integral_check(const Weight& w, double p, double q) {
    return nakai_self_improve_check(w, p, q, 0.0);
}

double nakai_self_improve_check(const Weight& w, double p, double q, double delta) {
    if (!(0 < q && q <= p)) throw std::invalid_argument("need 0 < q <= p");
    if (delta < 0) throw std::invalid_argument("delta must be >= 0");
    const DyadicGrid& g = w.grid();
    // cache Phi per cube
    std::vector<std::vector<double>> ph(static_cast<std::size_t>(g.L + 1));
    for (int l = 0; l <= g.L; ++l) {
        ph[static_cast<std::size_t>(l)].resize(static_cast<std::size_t>(cubes_at_level(g, l)));
        for (std::int64_t id = 0; id < cubes_at_level(g, l); ++id)
            ph[static_cast<std::size_t>(l)][static_cast<std::size_t>(id)] =
                phi(p, q, w, cube_from_linear_id(g, l, id));
    }
    double best = 0.0;
    for_each_cube(g, [&](const DyadicCube& qc) {
        if (qc.level == 0) return;
        double s = 0.0;
        for (int k = 1; k <= qc.level; ++k) {
            const DyadicCube a = ancestor(qc, k);
            const double factor = delta == 0.0 ? 1.0 : std::pow(static_cast<double>(k), delta);
            s += factor / ph[static_cast<std::size_t>(a.level)]
                            [static_cast<std::size_t>(cube_linear_id(w.grid(), a))];
        }
        best = std::max(best,
                        ph[static_cast<std::size_t>(qc.level)]
                          [static_cast<std::size_t>(cube_linear_id(w.grid(), qc))] *
                            s);
    });
    return best;
}

PhiGrowth phi_growth_check(const Weight& w, double p, double q, int c) {
    if (c < 2 || (c & (c - 1)) != 0)
        throw std::invalid_argument("c must be a power of two >= 2");
    int m = 0;
    while ((1 << m) < c) ++m;
    const DyadicGrid& g = w.grid();
    PhiGrowth res;
    if (m > g.L) {
        res.degenerate = true;
        return res;
    }
    double worst = 0.0;
    for (int l = m; l <= g.L; ++l)
        for (std::int64_t id = 0; id < cubes_at_level(g, l); ++id) {
            const DyadicCube qc = cube_from_linear_id(g, l, id);
            const double r = 2.0 * phi(p, q, w, qc) / phi(p, q, w, ancestor(qc, m));
            worst = std::max(worst, r);
        }
    res.worst_ratio = worst;
    res.holds = worst <= 1.0 + 1e-12;
    return res;
}

double condition_151221_1_check(const Weight& w, double p, double q,
                                const std::vector<CandidateB>& candidates) {
    if (!(q > 1)) throw std::invalid_argument("needs q > 1");
    const DyadicGrid& g = w.grid();
    const GridFunction wq = w.as_function().pow(1.0 / q);       // w^{1/q}
    const GridFunction wmq = w.as_function().pow(-1.0 / q);     // w^{-1/q}
    const MorreyParams lebesgue = MorreyParams::samko_lebesgue(p, q);
    double best = 0.0;
    for_each_cube(g, [&](const DyadicCube& qc) {
        const double vol = g.volume(qc.level);
        const double mn = morrey_norm(wq.restricted(qc), lebesgue);
        const double bn = block_norm_upper(wmq.restricted(qc), p, q, candidates);
        best = std::max(best, mn * bn / vol);
    });
    return best;
}

double tanaka_condition_check(const Weight& w, double p, double q, const CandidateB& b,
                              TanakaVariant variant, double a) {
    if (!(q > 1)) throw std::invalid_argument("needs q > 1");
    const DyadicGrid& g = w.grid();
    const int n = g.dim;
    const double qprime = q / (q - 1.0);
    const double vol_cell = g.cell_volume();

    // sigma = (b w)^{-q'/q}
    std::vector<double> sig(static_cast<std::size_t>(g.cell_count()));
    for (std::int64_t c = 0; c < g.cell_count(); ++c)
        sig[static_cast<std::size_t>(c)] =
            std::pow(b.b[c] * w.density_at(c), -qprime / q);
    const Weight sigma(g, sig);

    // per-cube inner value
    std::vector<std::vector<double>> val(static_cast<std::size_t>(g.L + 1));
    for (int l = 0; l <= g.L; ++l)
        val[static_cast<std::size_t>(l)].resize(static_cast<std::size_t>(cubes_at_level(g, l)));
    if (variant == TanakaVariant::c) {
        for_each_cube(g, [&](const DyadicCube& qc) {
            const double sq = sigma.mass(qc);
            if (!(sq > 0)) throw std::invalid_argument("degenerate sigma mass");
            const GridFunction mf = hl_maximal(sigma.as_function().restricted(qc));
            double integral = 0.0;
            for_each_cell(g, qc, [&](std::int64_t c) {
                integral += std::pow(mf[c], q) * w.density_at(c) * vol_cell;
            });
            val[static_cast<std::size_t>(qc.level)]
               [static_cast<std::size_t>(cube_linear_id(g, qc))] = integral / sq;
        });
    } else {
        if (!(a > 1)) throw std::invalid_argument("variant d needs a > 1");
        const Weight powed = sigma.cellwise_pow(a);  // (bw)^{-a q'/q}
        for_each_cube(g, [&](const DyadicCube& qc) {
            const double vol = g.volume(qc.level);
            const double avg = powed.mass(qc) / vol;
            val[static_cast<std::size_t>(qc.level)]
               [static_cast<std::size_t>(cube_linear_id(g, qc))] =
                (w.mass(qc) / vol) * std::pow(avg, q / (a * qprime));
        });
    }
    // subtree maxima, then normalize by l(Q0)^{n(1-q/p)}
    for (int l = g.L - 1; l >= 0; --l)
        for (std::int64_t id = 0; id < cubes_at_level(g, l); ++id) {
            const DyadicCube qc = cube_from_linear_id(g, l, id);
            double mx = val[static_cast<std::size_t>(l)][static_cast<std::size_t>(id)];
            for (const DyadicCube& k : children(g, qc))
                mx = std::max(mx, val[static_cast<std::size_t>(k.level)]
                                     [static_cast<std::size_t>(cube_linear_id(g, k))]);
            val[static_cast<std::size_t>(l)][static_cast<std::size_t>(id)] = mx;
        }
    double best = 0.0;
    for_each_cube(g, [&](const DyadicCube& qc) {
        const double norm = std::pow(g.side(qc.level), n * (1.0 - q / p));
        best = std::max(best, val[static_cast<std::size_t>(qc.level)]
                                 [static_cast<std::size_t>(cube_linear_id(g, qc))] /
                                  norm);
    });
    return best;
}

PowerWeightFlags power_weight_classifier(double alpha, double p, double q, int n) {
    if (!(1 < q && q <= p)) throw std::invalid_argument("needs 1 < q <= p");
    PowerWeightFlags f;
    const double lo = -q / p * n;
    const double hi = n * (q - q / p);
    f.locally_integrable = alpha > -n;
    f.in_aq = alpha > -n && alpha < n * (q - 1.0);
    f.hlm = alpha >= lo && alpha < hi;
    f.wic = alpha > lo;
    f.sio_bounded = alpha > lo && alpha < hi;
    return f;
}

WeightReport weight_report(const Weight& w, double p, double q) {
    WeightReport r;
    for (double qq : {2.0, 4.0, 8.0, 16.0, 32.0, 64.0}) r.a_q_constants[qq] = aq_constant(w, qq);
    r.a1_const = a1_constant(w);
    r.a_inf_est = r.a_q_constants[64.0];
    r.rh_epsilon = reverse_holder_epsilon(w);
    r.doubling_const = doubling_constant(w);
    r.bpq_const = bpq_check(w, p, q);
    r.wic_const = weighted_integral_check(w, p, q);
    const PhiGrowth pg = phi_growth_check(w, p, q, 4);
    r.phi_growth_c = pg.degenerate ? 0.0 : pg.worst_ratio;
    return r;
}

std::string WeightReport::to_json() const {
    std::ostringstream os;
    os << "{\n  \"a_q_constants\": {";
    bool first = true;
    for (const auto& [qq, v] : a_q_constants) {
        if (!first) os << ", ";
        first = false;
        os << "\"" << format_double(qq) << "\": " << format_double(v);
    }
    os << "},\n";
    os << "  \"a1_const\": " << format_double(a1_const) << ",\n";
    os << "  \"a_inf_est\": " << format_double(a_inf_est) << ",\n";
    os << "  \"rh_epsilon\": " << format_double(rh_epsilon) << ",\n";
    os << "  \"doubling_const\": " << format_double(doubling_const) << ",\n";
    os << "  \"bpq_const\": " << format_double(bpq_const) << ",\n";
    os << "  \"wic_const\": " << format_double(wic_const) << ",\n";
    os << "  \"phi_growth_c\": " << format_double(phi_growth_c) << "\n}";
    return os.str();
}

}  // namespace morreylab
