#include "morreylab/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "morreylab/rearrange.hpp"

namespace morreylab {

bool SparseFamily::empty() const {
    for (const auto& lv : levels)
        if (!lv.empty()) return false;
    return true;
}

std::size_t SparseFamily::cube_count() const {
    std::size_t n = 0;
    for (const auto& lv : levels) n += lv.size();
    return n;
}

namespace {

std::vector<std::uint8_t> cell_mask(const DyadicGrid& g, const std::vector<DyadicCube>& cubes) {
    std::vector<std::uint8_t> mask(static_cast<std::size_t>(g.cell_count()), 0);
    for (const DyadicCube& q : cubes)
        for_each_cell(g, q, [&](std::int64_t c) { mask[static_cast<std::size_t>(c)] = 1; });
    return mask;
}

std::int64_t cells_in_cube(const DyadicGrid& g, const DyadicCube& q) {
    return std::int64_t{1} << (g.dim * (g.L - q.level));
}

}  // namespace

SparseValidation validate_sparse(const DyadicGrid& g, const SparseFamily& family, double eta) {
    SparseValidation v;
    const std::size_t K = family.levels.size();
    std::vector<std::vector<std::uint8_t>> masks(K);
    for (std::size_t k = 0; k < K; ++k) {
        masks[k] = cell_mask(g, family.levels[k]);
        std::int64_t covered = 0;
        for (const DyadicCube& q : family.levels[k]) covered += cells_in_cube(g, q);
        std::int64_t mask_cells = 0;
        for (std::uint8_t b : masks[k]) mask_cells += b;
        if (mask_cells != covered) v.disjoint_within_levels = false;
    }
    for (std::size_t k = 0; k + 1 < K; ++k) {
        for (std::size_t c = 0; c < masks[k].size(); ++c)
            if (masks[k + 1][c] && !masks[k][c]) {
                v.nested_supports = false;
                break;
            }
        for (const DyadicCube& q : family.levels[k]) {
            std::int64_t inter = 0;
            for_each_cell(g, q, [&](std::int64_t c) {
                inter += masks[k + 1][static_cast<std::size_t>(c)];
            });
            const double portion =
                static_cast<double>(inter) / static_cast<double>(cells_in_cube(g, q));
            v.worst_portion = std::max(v.worst_portion, portion);
        }
    }
    v.portion_ok = v.worst_portion <= eta * (1.0 + 1e-12);
    return v;
}

WSparseParams wsparse_params(double a_inf, int dim, double slack) {
    if (!(a_inf >= 1.0)) throw std::invalid_argument("a_inf must be >= 1");
    if (dim != 1 && dim != 2) throw std::invalid_argument("dim must be 1 or 2");
    if (!(slack > 0.0 && slack < 1.0)) throw std::invalid_argument("slack must be in (0,1)");
    WSparseParams p;
    p.a_inf = a_inf;
    p.dim = dim;
    p.slack = slack;
    const double pow2 = std::ldexp(1.0, dim + 3);  // 2^{n+3}
    p.epsilon = 1.0 / (pow2 * a_inf);
    p.log2_lambda_prime = std::log2(slack) - 1.0 - pow2 * a_inf;
    p.log2_lambda = p.log2_lambda_prime - (dim + 2);
    p.lambda_prime = std::exp2(p.log2_lambda_prime);
    p.lambda = std::exp2(p.log2_lambda);
    p.underflowed = !(p.lambda_prime > 0.0);
    // 2 lambda_prime^{eps/(1+eps)} computed in log2 space
    const double log2_term = 1.0 + (p.epsilon / (1.0 + p.epsilon)) * p.log2_lambda_prime;
    const double term = std::exp2(log2_term);
    if (!(term < 1.0)) throw std::invalid_argument("w-sparse parameters do not certify C_w");
    p.c_w = 1.0 / (1.0 - term);
    return p;
}

bool WSparseParams::degenerate_for(const DyadicGrid& g, const DyadicCube& q0) const {
    const double cube_measure = g.volume(q0.level);
    return lambda * cube_measure < g.cell_volume();
}

SparseFamily cz_sparse(const Weight& w, const DyadicCube& q0, double a) {
    const DyadicGrid& g = w.grid();
    check_cube(g, q0);
    const double twon = g.dim == 1 ? 2.0 : 4.0;
    if (!(a > twon)) throw std::invalid_argument("cz_sparse needs a > 2^dim");
    const double gamma0 = w.mass(q0) / g.volume(q0.level);

    SparseFamily fam;
    fam.sparsity = twon / a;
    fam.levels.push_back({q0});
    double threshold = gamma0;
    std::vector<DyadicCube> current{q0};
    while (!current.empty()) {
        threshold *= a;  // a^k gamma0
        std::vector<DyadicCube> next;
        // maximal dyadic Q with avg > threshold; every such Q sits inside a
        // previous-level cube (a > 1), so searching their subtrees suffices.
        // A previous-level cube may re-qualify at the new threshold.
        for (const DyadicCube& top : current) {
            std::vector<DyadicCube> stack{top};
            while (!stack.empty()) {
                DyadicCube q = stack.back();
                stack.pop_back();
                const double avg = w.mass(q) / g.volume(q.level);
                if (avg > threshold) {
                    next.push_back(q);
                } else if (q.level < g.L) {
                    for (const DyadicCube& k : children(g, q)) stack.push_back(k);
                }
            }
        }
        if (next.empty()) break;
        fam.levels.push_back(next);
        current = std::move(next);
    }
    return fam;
}

namespace {

// One-step median selection on the shifted values h = f - offset inside q0.
// Selected cubes are the maximal proper dyadic subcubes of q0 some of whose
// children have |m_h(child)| above the rearrangement threshold.
struct StepResult {
    double threshold = 0.0;
    std::vector<DyadicCube> selected;
};

class LernerEngine {
public:
    LernerEngine(const GridFunction& f, double lambda, LernerDecomposition& out)
        : f_(f), g_(f.grid()), mu_(g_.cell_volume()), lambda_(lambda), out_(out) {}

    void run(const DyadicCube& q0) {
        std::vector<double> v0;
        for_each_cell(g_, q0, [&](std::int64_t c) { v0.push_back(f_[c]); });
        const double m0 = median_of_slice(v0, mu_);
        out_.base = q0;
        out_.median0 = m0;
        out_.family.sparsity = std::min(1.0, std::ldexp(lambda_, g_.dim + 2));
        out_.family.levels.push_back({q0});
        recurse(q0, m0, 1);
        // assemble per-depth family levels
        int max_depth = 0;
        for (const LernerNode& n : out_.nodes) max_depth = std::max(max_depth, n.depth);
        out_.family.levels.resize(static_cast<std::size_t>(max_depth) + 1);
        out_.level_cell_measure.assign(static_cast<std::size_t>(max_depth) + 1, 0.0);
        for (const LernerNode& n : out_.nodes) {
            out_.family.levels[static_cast<std::size_t>(n.depth)].push_back(n.cube);
            out_.level_cell_measure[static_cast<std::size_t>(n.depth)] +=
                g_.volume(n.cube.level);
            out_.alpha_of[{n.cube.level, cube_linear_id(g_, n.cube)}] = n.alpha;
        }
        compute_residual(q0);
    }

private:
    // medians of h = f - offset on all subcubes of q, bottom-up
    void subtree_medians(const DyadicCube& q, double offset,
                         std::vector<std::vector<double>>& med,
                         std::vector<double>& scratch) const {
        if (q.level == g_.L) {
            const double v = f_[cube_linear_id(g_, q)] - offset;
            med[static_cast<std::size_t>(q.level)][static_cast<std::size_t>(
                cube_linear_id(g_, q))] = v;
            return;
        }
        for (const DyadicCube& k : children(g_, q)) subtree_medians(k, offset, med, scratch);
        scratch.clear();
        for_each_cell(g_, q, [&](std::int64_t c) { scratch.push_back(f_[c] - offset); });
        med[static_cast<std::size_t>(q.level)][static_cast<std::size_t>(
            cube_linear_id(g_, q))] = median_of_slice(scratch, mu_);
    }

    StepResult select(const DyadicCube& q0, double offset) const {
        std::vector<std::vector<double>> med(static_cast<std::size_t>(g_.L + 1));
        for (int l = q0.level; l <= g_.L; ++l)
            med[static_cast<std::size_t>(l)].resize(
                static_cast<std::size_t>(cubes_at_level(g_, l)));
        std::vector<double> scratch;
        subtree_medians(q0, offset, med, scratch);

        std::vector<double> habs;
        for_each_cell(g_, q0, [&](std::int64_t c) { habs.push_back(f_[c] - offset); });
        StepResult res;
        res.threshold =
            rearrangement_of_slice(std::move(habs), mu_,
                                   lambda_ * (g_.volume(q0.level)));
        // top-down maximal cubes whose some child median magnitude exceeds t
        std::vector<DyadicCube> stack{q0};
        while (!stack.empty()) {
            DyadicCube q = stack.back();
            stack.pop_back();
            if (q.level == g_.L) continue;
            double key = 0.0;
            for (const DyadicCube& k : children(g_, q))
                key = std::max(key, std::fabs(med[static_cast<std::size_t>(k.level)]
                                                 [static_cast<std::size_t>(
                                                     cube_linear_id(g_, k))]));
            if (key > res.threshold && !(q == q0)) {
                res.selected.push_back(q);
            } else {
                for (const DyadicCube& k : children(g_, q)) stack.push_back(k);
            }
        }
        return res;
    }

    void recurse(const DyadicCube& q, double offset, int depth) {
        if (q.level == g_.L) return;  // f constant on a cell, residual vanishes
        StepResult step = select(q, offset);
        for (const DyadicCube& sel : step.selected) {
            std::vector<double> vals;
            for_each_cell(g_, sel, [&](std::int64_t c) { vals.push_back(f_[c] - offset); });
            const double m = median_of_slice(vals, mu_);
            LernerNode node;
            node.cube = sel;
            node.generator = q;
            node.alpha = m;
            node.depth = depth;
            out_.nodes.push_back(node);
            recurse(sel, offset + m, depth + 1);
        }
    }

    void compute_residual(const DyadicCube& q0) {
        // reconstruction: f = m0 + sum alpha_Q chi_Q + g, g = f - deepest offset
        std::vector<double> chain(static_cast<std::size_t>(g_.cell_count()), 0.0);
        std::vector<double> offset(static_cast<std::size_t>(g_.cell_count()), out_.median0);
        // nodes were emitted parent-before-child, so one forward pass settles offsets
        for (const LernerNode& n : out_.nodes) {
            for_each_cell(g_, n.cube, [&](std::int64_t c) {
                chain[static_cast<std::size_t>(c)] += n.alpha;
                offset[static_cast<std::size_t>(c)] += n.alpha;
            });
        }
        double worst = 0.0;
        for_each_cell(g_, q0, [&](std::int64_t c) {
            const double gpart = f_[c] - offset[static_cast<std::size_t>(c)];
            const double recon =
                out_.median0 + chain[static_cast<std::size_t>(c)] + gpart;
            worst = std::max(worst, std::fabs(f_[c] - recon));
        });
        out_.residual_max = worst;
    }

    const GridFunction& f_;
    const DyadicGrid& g_;
    double mu_, lambda_;
    LernerDecomposition& out_;
};

}  // namespace

LernerDecomposition lerner_decompose(const GridFunction& f, const DyadicCube& q0,
                                     double lambda) {
    const DyadicGrid& g = f.grid();
    check_cube(g, q0);
    const double cap = std::ldexp(1.0, -g.dim - 2);
    if (!(lambda > 0.0 && lambda <= cap))
        throw std::invalid_argument("lerner_decompose needs lambda in (0, 2^{-dim-2}]");
    LernerDecomposition out;
    LernerEngine engine(f, lambda, out);
    engine.run(q0);
    return out;
}

GridFunction sparse_oscillation_sum(const GridFunction& f, const SparseFamily& family,
                                    double lambda) {
    const DyadicGrid& g = f.grid();
    std::vector<double> acc(static_cast<std::size_t>(g.cell_count()), 0.0);
    for (const auto& level : family.levels)
        for (const DyadicCube& q : level) {
            const double wq = oscillation(f, q, lambda);
            for_each_cell(g, q, [&](std::int64_t c) { acc[static_cast<std::size_t>(c)] += wq; });
        }
    return GridFunction(g, std::move(acc));
}

CwCertificate cw_certificate(const Weight& w, const SparseFamily& family,
                             const WSparseParams& params, double rh_epsilon) {
    const DyadicGrid& g = w.grid();
    CwCertificate cert;
    const double vol = g.cell_volume();
    for (std::size_t k = 0; k + 1 < family.levels.size(); ++k) {
        const auto next_mask = cell_mask(g, family.levels[k + 1]);
        for (const DyadicCube& q : family.levels[k]) {
            double kept = 0.0, total = 0.0;  // kept = w(Q \ Omega_{k+1})
            for_each_cell(g, q, [&](std::int64_t c) {
                const double m = w.density_at(c) * vol;
                total += m;
                if (!next_mask[static_cast<std::size_t>(c)]) kept += m;
            });
            if (kept <= 0.0 && total > 0.0) {
                cert.degenerate = true;
                continue;
            }
            cert.worst_ratio = std::max(cert.worst_ratio, total / kept);
        }
    }
    cert.certified = !cert.degenerate && rh_epsilon >= params.epsilon &&
                     cert.worst_ratio <= params.c_w * (1.0 + 1e-12);
    return cert;
}

AncestorGrowth ancestor_growth_certificate(const Weight& w, double rh_epsilon) {
    const DyadicGrid& g = w.grid();
    AncestorGrowth res;
    res.epsilon = rh_epsilon;
    const double bound = (1.0 / g.dim) * (1.0 + 1.0 / rh_epsilon);
    res.l_w = static_cast<int>(std::floor(bound)) + 1;  // smallest integer > bound
    res.alpha_w =
        std::exp2(g.dim * res.l_w * (rh_epsilon / (1.0 + rh_epsilon)) - 1.0);
    if (res.l_w > g.L || !(res.alpha_w > 1.0)) {
        res.degenerate = true;
        return res;
    }
    double worst = std::numeric_limits<double>::infinity();
    for (int l = res.l_w; l <= g.L; ++l) {
        for (std::int64_t id = 0; id < cubes_at_level(g, l); ++id) {
            const DyadicCube q = cube_from_linear_id(g, l, id);
            const DyadicCube anc = ancestor(q, res.l_w);
            worst = std::min(worst, w.mass(anc) / w.mass(q) - res.alpha_w);
        }
    }
    res.worst_slack = worst;
    res.verified = worst >= -1e-12;
    return res;
}

}  // namespace morreylab
